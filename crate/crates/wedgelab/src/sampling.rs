//! Seeded random generators for geometry objects.
//!
//! Every randomized suite in the crate draws from a [`rand_chacha`] stream
//! seeded from the run configuration, so identical configurations replay
//! identical samples. Boost rapidities are capped at 3 to keep matrix
//! entries well inside the tolerance budget of downstream residual checks.

use nalgebra::{Unit, Vector3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{FourVector, PoincareElement};
use crate::wedges::{LightRay, Wedge};

/// Maximum |rapidity| used by the random boost generator.
pub const MAX_RAPIDITY: f64 = 3.0;

/// Deterministic RNG for a given seed.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit 2-sphere.
pub fn random_unit3(rng: &mut impl Rng) -> Unit<Vector3<f64>> {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return Unit::new_normalize(v);
        }
    }
}

/// Random spatial rotation (uniform axis, uniform angle).
pub fn random_rotation(rng: &mut impl Rng) -> PoincareElement {
    let axis = random_unit3(rng);
    let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    PoincareElement::rotation(axis, angle)
}

/// Random boost with |rapidity| ≤ [`MAX_RAPIDITY`].
pub fn random_boost(rng: &mut impl Rng) -> PoincareElement {
    let axis = random_unit3(rng);
    let chi = rng.gen_range(-MAX_RAPIDITY..MAX_RAPIDITY);
    PoincareElement::boost(axis, chi)
}

/// Random element of the restricted Lorentz group, generated as
/// rotation · boost · rotation.
pub fn random_restricted_lorentz(rng: &mut impl Rng) -> PoincareElement {
    random_rotation(rng)
        .compose(&random_boost(rng))
        .compose(&random_rotation(rng))
}

/// Random proper Lorentz transformation; half the draws are
/// non-orthochronous (composed with a total reflection in the 0-1 plane).
pub fn random_proper_lorentz(rng: &mut impl Rng) -> PoincareElement {
    let restricted = random_restricted_lorentz(rng);
    if rng.gen_bool(0.5) {
        Wedge::standard_along_axis(1)
            .edge_reflection()
            .compose(&restricted)
    } else {
        restricted
    }
}

/// Random translation with components in (-2, 2).
pub fn random_translation(rng: &mut impl Rng) -> FourVector {
    FourVector::new(
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
    )
}

/// Random proper Poincare element (translation plus proper Lorentz part).
pub fn random_proper_poincare(rng: &mut impl Rng) -> PoincareElement {
    PoincareElement::pure_translation(random_translation(rng)).compose(&random_proper_lorentz(rng))
}

/// Random wedge: two non-parallel null rays and a bounded apex.
///
/// Ray directions are redrawn until their spatial angle stays away from 0
/// and π, matching the non-degeneracy requirement of the wedge type.
pub fn random_wedge(rng: &mut impl Rng) -> Wedge {
    loop {
        let p = random_unit3(rng);
        let m = random_unit3(rng);
        if p.dot(&m) > 0.95 {
            continue;
        }
        let xi = random_translation(rng);
        if let Ok(w) = Wedge::new(LightRay::from_spatial(p), LightRay::from_spatial(m), xi) {
            return w;
        }
    }
}
