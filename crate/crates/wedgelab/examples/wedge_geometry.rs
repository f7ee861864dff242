// A wedge is a Poincare image of the standard region x1 > |x0|. This example
// builds a few, moves them around, and checks the identity that makes edge
// reflections useful: reflecting in a translated copy of a wedge and then in
// the wedge itself is a pure translation with a shift computable from the
// wedge data alone.

use wedgelab::geometry::{FourVector, PoincareElement};
use wedgelab::sampling::{random_translation, random_wedge, rng_for};
use wedgelab::wedges::Wedge;

fn main() {
    let standard = Wedge::standard_along_axis(1);
    let inside = FourVector::new(0.0, 2.0, 0.3, -0.5);
    let outside = FourVector::new(2.0, 0.0, 0.0, 0.0);
    println!(
        "standard wedge contains (0, 2, 0.3, -0.5): {}",
        standard.contains(&inside)
    );
    println!(
        "standard wedge contains (2, 0, 0, 0):      {}",
        standard.contains(&outside)
    );
    let mirrored = FourVector::new(0.0, -2.0, 0.3, -0.5);
    println!(
        "its complement picks up the mirrored point: {}",
        standard.complement().contains(&mirrored)
    );

    // A boost along the wedge axis is a symmetry of the wedge.
    let boost = PoincareElement::boost(nalgebra::Vector3::x_axis(), 0.9);
    let boosted = standard.transform(&boost).expect("boosts preserve wedges");
    println!(
        "boost along the axis preserves it: {}",
        boosted.approx_eq(&standard, 1e-12)
    );

    // The edge reflection of W + xi composed with the edge reflection of W
    // is a pure translation whose shift the wedge can name directly.
    let mut rng = rng_for(11);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let w = random_wedge(&mut rng);
        let xi = random_translation(&mut rng);
        let composed = w
            .translated(&xi)
            .edge_reflection()
            .compose(&w.edge_reflection());
        let expected = PoincareElement::pure_translation(w.reflection_translation(&xi));
        worst = worst.max(composed.max_diff(&expected));
    }
    println!("reflection-translation identity over 200 draws: residual {worst:.3e}");
}
