// A mass-one particle sampled on a rapidity lattice. Translations act by
// phases, boosts act by shifting the lattice, and the wedge conjugations
// and modular flows are exact finite matrices. This example builds the
// model and checks the identities those operators satisfy.

use std::f64::consts::PI;

use wedgelab::freemodel::{
    build_model, conjugation_shift_bound, translation_rep, wedge_conjugation, ModelWedgeTag,
};
use wedgelab::geometry::FourVector;
use wedgelab::tomita::{max_abs, op_mul, Vector, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = build_model(1.0, 24, 0.1)?;
    let grid = *model.grid();
    println!(
        "grid: {} rapidity points, spacing {}",
        grid.dim(),
        grid.spacing()
    );

    // The translation assembled from its two axis factors equals the
    // closed-form representation.
    let xi = FourVector::new(0.3, 0.7, 0.0, 0.0);
    let assembled = translation_rep(&grid, &xi)?;
    let analytic = model.u_analytic(&xi)?;
    println!(
        "assembled vs closed-form translation: {:.3e}",
        max_abs(&(assembled - analytic))
    );

    // Modular flow exists at times commensurate with the lattice; there it
    // obeys the group law exactly, and the complementary wedge runs the
    // same flow backwards.
    let tag = ModelWedgeTag::right(FourVector::new(0.1, 0.4, 0.0, 0.0))?;
    let unit = grid.spacing() / (2.0 * PI);
    let v1 = model.flow(&tag, 3.0 * unit)?;
    let v2 = model.flow(&tag, 6.0 * unit)?;
    println!(
        "flow group law V(t)^2 = V(2t): {:.3e}",
        max_abs(&(op_mul(&v1, &v1) - &v2))
    );
    let reversed = model.flow(&tag.complement(), -3.0 * unit)?;
    println!(
        "complement wedge flows backwards: {:.3e}",
        max_abs(&(&v1 - reversed))
    );
    match model.flow(&tag, 0.01) {
        Ok(_) => println!("unexpected: incommensurate flow"),
        Err(e) => println!("incommensurate time is refused: {e}"),
    }

    // The conjugation of the wedge at apex t*xi drifts away from the one at
    // the origin no faster than a computable Lipschitz bound.
    let dir = FourVector::new(0.0, 0.5, 0.0, 0.0);
    let bound = conjugation_shift_bound(&grid, &dir)?;
    let j_origin = wedge_conjugation(&grid, &ModelWedgeTag::right(FourVector::zero())?)?;
    let mut psi = Vector::zeros(grid.dim());
    for k in grid.dim() / 4..3 * grid.dim() / 4 {
        psi[k] = C64::new((k as f64 * 0.37).sin(), (k as f64 * 0.61).cos());
    }
    let norm = psi.norm();
    println!("conjugation shift bound C = {bound:.4}");
    for t in [0.05, 0.35, 1.0] {
        let jt = wedge_conjugation(&grid, &ModelWedgeTag::right(dir.scale(t))?)?;
        let moved = (jt.apply(&psi) - j_origin.apply(&psi)).norm();
        println!(
            "  t = {t:.2}: moved {moved:.4} <= C t ||psi|| = {:.4}",
            bound * t * norm
        );
    }
    Ok(())
}
