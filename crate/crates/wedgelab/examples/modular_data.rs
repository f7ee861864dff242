// Modular data of a finite-dimensional algebra in a chosen state: the
// positive operator Delta and the antiunitary conjugation J that measure how
// far the state is from being a trace, and the theorem-level facts they
// satisfy.

use wedgelab::tomita::{
    compute_modular, left_factor_algebra, right_factor_algebra, schmidt_vector, verify_tomita,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // One factor of a 2x2 tensor square, in the state with Schmidt weights
    // 2/3 and 1/3.
    let algebra = left_factor_algebra(2);
    let omega = schmidt_vector(&[2.0 / 3.0, 1.0 / 3.0]);
    let data = compute_modular(&algebra, &omega)?;

    // The spectrum of Delta consists of ratios of the Schmidt weights:
    // {2, 1, 1, 1/2} for weights (2/3, 1/3).
    let mut spectrum = data.delta_spectrum();
    spectrum.sort_by(|a, b| b.partial_cmp(a).expect("finite spectrum"));
    println!("modular spectrum: {spectrum:?}");

    let report = verify_tomita(&algebra, &data, &[0.1, 1.0, 7.0]);
    println!(
        "conjugated algebra vs commutant:   {:.3e}",
        report.jmj_commutant
    );
    println!(
        "flow preserves the algebra:        {:.3e}",
        report.flow_invariance
    );
    println!(
        "J fixes the state:                 {:.3e}",
        report.j_fixes_omega
    );
    println!(
        "Delta fixes the state:             {:.3e}",
        report.delta_fixes_omega
    );
    println!(
        "half-power exchange:               {:.3e}",
        report.half_power_exchange
    );
    println!(
        "J involution:                      {:.3e}",
        report.j_involution
    );
    println!(
        "J antiunitarity:                   {:.3e}",
        report.j_antiunitarity
    );
    println!(
        "state exchange symmetry:           {:.3e}",
        report.kms_exchange
    );

    // The commutant of one tensor factor is the other factor.
    let distance = algebra.commutant().span_distance(&right_factor_algebra(2));
    println!("commutant equals the opposite factor: span distance {distance:.3e}");
    Ok(())
}
