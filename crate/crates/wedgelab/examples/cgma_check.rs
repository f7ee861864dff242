// Condition checks over a wedge-indexed family of conjugations. A healthy
// model net passes, each sabotaged net fails exactly the condition its
// defect breaks, and a finite two-factor net exercises the algebra-level
// checks that the model net cannot reach.

use wedgelab::cgma::{
    check_cgma, duplicate_conjugation_net, healthy_model_net, two_factor_net, CgmaReport,
    CheckStatus,
};
use wedgelab::freemodel::RapidityGrid;
use wedgelab::geometry::FourVector;

fn show(label: &str, report: &CgmaReport) {
    println!("{label}:");
    for outcome in &report.outcomes {
        let status = match &outcome.status {
            CheckStatus::Pass => "pass".to_string(),
            CheckStatus::Fail => "FAIL".to_string(),
            CheckStatus::Skipped { reason } => format!("skipped ({reason})"),
        };
        println!(
            "  {:<28} {status}  residual {:.3e}, {} checked",
            outcome.name, outcome.residual, outcome.checked
        );
        for witness in outcome.witnesses.iter().take(2) {
            println!("    {witness}");
        }
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = RapidityGrid::new(1.0, 8, 0.25)?;
    let apex = FourVector::new(0.3, 1.1, 0.0, 0.0);

    show(
        "healthy model net",
        &check_cgma(&healthy_model_net(grid, apex)?),
    );
    show(
        "net with a duplicated conjugation",
        &check_cgma(&duplicate_conjugation_net(grid, apex)?),
    );
    show("finite two-factor net", &check_cgma(&two_factor_net()?));
    Ok(())
}
