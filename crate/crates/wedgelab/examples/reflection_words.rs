// Every proper Poincare transformation is a finite product of wedge edge
// reflections. This example decomposes a mixed element into such a word,
// recomposes the word to confirm it, and shows the one class of elements
// the decomposition rightly refuses.

use nalgebra::{Matrix4, Vector4};
use wedgelab::geometry::{FourVector, PoincareElement};
use wedgelab::wedges::{compose_reflections, reflection_word, Wedge};

fn main() {
    let g = PoincareElement::pure_translation(FourVector::new(0.4, -0.2, 1.0, 0.3))
        .compose(&PoincareElement::rotation(nalgebra::Vector3::z_axis(), 0.7))
        .compose(&PoincareElement::boost(nalgebra::Vector3::x_axis(), 0.5));
    let word = reflection_word(&g, 1e-9).expect("proper elements decompose");
    let residual = compose_reflections(&word).max_diff(&g);
    println!(
        "mixed element: word of {} reflections, recomposition residual {residual:.3e}",
        word.len()
    );

    // The standard wedge's own reflection comes back as a one-letter word;
    // a generic wedge's reflection still decomposes, just less tersely.
    let word = reflection_word(&Wedge::standard_along_axis(1).edge_reflection(), 1e-9)
        .expect("a reflection decomposes");
    println!("standard wedge reflection: word length {}", word.len());
    let moved = Wedge::standard_along_axis(2).translated(&FourVector::new(0.0, 0.5, -0.3, 0.2));
    let word = reflection_word(&moved.edge_reflection(), 1e-9).expect("a reflection decomposes");
    let residual = compose_reflections(&word).max_diff(&moved.edge_reflection());
    println!(
        "translated wedge reflection: word length {}, residual {residual:.3e}",
        word.len()
    );

    // The identity needs no letters at all.
    let word = reflection_word(&PoincareElement::identity(), 1e-9).expect("identity decomposes");
    println!("identity: word length {}", word.len());

    // Spatial parity has determinant -1; edge reflections only ever reach
    // determinant +1, so the decomposition reports the obstruction.
    let parity = PoincareElement::new(
        Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0)),
        FourVector::zero(),
    )
    .expect("parity is a Lorentz matrix");
    match reflection_word(&parity, 1e-9) {
        Ok(_) => println!("unexpected: parity decomposed"),
        Err(e) => println!("parity is rejected: {e}"),
    }
}
