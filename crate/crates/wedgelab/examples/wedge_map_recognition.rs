// Six wedge correspondences pin down the similarity transformation that
// induced them. The solver recovers a Poincare element together with a
// dilation factor, and reports an honest failure when the sample cannot
// determine the map.

use wedgelab::geometry::FourVector;
use wedgelab::recognition::{identify_wedge_map, WedgeMapSample};
use wedgelab::sampling::{random_proper_poincare, random_wedge, rng_for};
use wedgelab::wedges::Wedge;

fn main() {
    let mut rng = rng_for(5);

    // A hidden Poincare element, seen only through wedge pairs.
    let hidden = random_proper_poincare(&mut rng);
    let mut pairs = Vec::new();
    while pairs.len() < 6 {
        let w = random_wedge(&mut rng);
        if let Ok(image) = w.transform(&hidden) {
            pairs.push((w, image));
        }
    }
    let found = identify_wedge_map(&WedgeMapSample::new(pairs), 1e-9).expect("general position");
    println!(
        "hidden element recovered to {:.3e}, dilation scale {:.3}",
        found.element.max_diff(&hidden),
        found.scale
    );

    // Stretching every apex by 2 is recognized as a pure dilation.
    let mut pairs = Vec::new();
    while pairs.len() < 6 {
        let w = random_wedge(&mut rng);
        if let Ok(image) = Wedge::new(*w.ell_plus(), *w.ell_minus(), w.apex().scale(2.0)) {
            pairs.push((w, image));
        }
    }
    let found = identify_wedge_map(&WedgeMapSample::new(pairs), 1e-9).expect("general position");
    println!("dilation recovered with scale {:.12}", found.scale);

    // A family of mutually parallel wedges leaves the transverse plane
    // invisible, so the solver refuses to guess.
    let base = Wedge::standard_along_axis(1);
    let step = FourVector::new(0.0, 0.7, 0.0, 0.0);
    let shift = FourVector::new(0.0, 1.0, 0.0, 0.0);
    let pairs: Vec<_> = (0..6)
        .map(|k| {
            let w = base.translated(&step.scale(k as f64));
            let image = w.translated(&shift);
            (w, image)
        })
        .collect();
    match identify_wedge_map(&WedgeMapSample::new(pairs), 1e-9) {
        Ok(_) => println!("unexpected: a parallel family determined the map"),
        Err(e) => println!("parallel family: {e}"),
    }
}
