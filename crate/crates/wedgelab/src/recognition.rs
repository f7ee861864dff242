//! Recovering a point transformation from wedge correspondence data.
//!
//! Given sampled pairs `(W, W')` of a candidate wedge-family automorphism,
//! [`identify_wedge_map`] reconstructs the unique similarity
//! `x ↦ s·Λx + a` (a Poincare transformation, possibly extended by a
//! dilation factor `s > 0`) inducing the correspondence, or reports that
//! no such map exists. [`check_automorphism_properties`] independently
//! audits the correspondence for order preservation (inclusions) and
//! disjointness preservation in both directions.

use nalgebra::{DMatrix, Matrix4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{metric, FourVector, PoincareElement};
use crate::wedges::{LightRay, Wedge, WedgeError};

#[derive(Debug, Error)]
pub enum RecognitionError {
    #[error("need at least 5 wedge pairs in general position, got {0}")]
    TooFewSamples(usize),
    #[error("source wedges {0} and {1} coincide")]
    DuplicateSource(usize, usize),
    #[error("sample is degenerate: the fitting system does not determine a unique map")]
    Underdetermined,
    #[error(
        "no similarity transformation induces this wedge correspondence \
         (best residual {best_residual:.3e} over tolerance {tol:.3e})"
    )]
    InconsistentSample { best_residual: f64, tol: f64 },
}

/// Sampled images of wedges under a candidate automorphism of the wedge
/// family: `pairs[i] = (W_i, τ(W_i))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WedgeMapSample {
    pub pairs: Vec<(Wedge, Wedge)>,
}

impl WedgeMapSample {
    pub fn new(pairs: Vec<(Wedge, Wedge)>) -> Self {
        WedgeMapSample { pairs }
    }

    /// Sources must be pairwise distinct for the sample to describe a map.
    fn validate_sources(&self, tol: f64) -> Result<(), RecognitionError> {
        for i in 0..self.pairs.len() {
            for j in i + 1..self.pairs.len() {
                if self.pairs[i].0.approx_eq(&self.pairs[j].0, tol) {
                    return Err(RecognitionError::DuplicateSource(i, j));
                }
            }
        }
        Ok(())
    }
}

/// A Poincare transformation extended by a dilation: `x ↦ scale·Λx + a`.
#[derive(Debug, Clone)]
pub struct IdentifiedMap {
    /// Poincare part `(Λ, a)`; the full map is `x ↦ scale·Λx + a`.
    pub element: PoincareElement,
    /// Dilation factor; 1 means a pure Poincare map.
    pub scale: f64,
    /// Largest canonical-form mismatch over the sample after applying the
    /// recovered map.
    pub residual: f64,
}

impl IdentifiedMap {
    /// Apply the similarity to a point.
    pub fn apply(&self, x: &FourVector) -> FourVector {
        FourVector(self.element.lorentz() * x.0 * self.scale) + self.element.translation()
    }

    /// Apply the similarity to a wedge (rays through the Lorentz part,
    /// apex through the full map).
    pub fn apply_wedge(&self, w: &Wedge) -> Result<Wedge, WedgeError> {
        apply_similarity(
            self.element.lorentz(),
            &self.element.translation(),
            self.scale,
            w,
        )
    }
}

fn apply_similarity(
    lambda: &Matrix4<f64>,
    a: &FourVector,
    scale: f64,
    w: &Wedge,
) -> Result<Wedge, WedgeError> {
    let lp = FourVector(lambda * w.ell_plus().vector().0);
    let lm = FourVector(lambda * w.ell_minus().vector().0);
    let apex = FourVector(lambda * w.apex().0 * scale) + *a;
    if lp.t() > 0.0 {
        Wedge::new(
            LightRay::from_null_with_tol(&lp, 1e-6)?,
            LightRay::from_null_with_tol(&lm, 1e-6)?,
            apex,
        )
    } else {
        Wedge::new(
            LightRay::from_null_with_tol(&(-lm), 1e-6)?,
            LightRay::from_null_with_tol(&(-lp), 1e-6)?,
            apex,
        )
    }
}

/// Reconstruct the similarity `x ↦ s·Λx + a` inducing a sampled wedge
/// correspondence.
///
/// The fit is a joint homogeneous least-squares problem in the entries of
/// `D = sΛ`, the translation, a homogenization variable, and one positive
/// ray-rescaling factor per sample ray; it is solved twice, once assuming
/// image rays keep their roles (orthochronous `Λ`) and once assuming they
/// swap with a sign flip (non-orthochronous `Λ`). A candidate passes only
/// if its ray factors are positive and the transformed sources reproduce
/// every image wedge within `tol`.
pub fn identify_wedge_map(
    sample: &WedgeMapSample,
    tol: f64,
) -> Result<IdentifiedMap, RecognitionError> {
    let n = sample.pairs.len();
    if n < 5 {
        return Err(RecognitionError::TooFewSamples(n));
    }
    sample.validate_sources(tol)?;

    let mut best_residual = f64::INFINITY;
    for swap in [false, true] {
        match solve_hypothesis(sample, swap, tol) {
            Ok(found) => return Ok(found),
            Err(HypothesisFailure::Residual(r)) => best_residual = best_residual.min(r),
            Err(HypothesisFailure::Structural) => {}
            Err(HypothesisFailure::Fatal(e)) => return Err(e),
        }
    }
    Err(RecognitionError::InconsistentSample { best_residual, tol })
}

enum HypothesisFailure {
    /// Fit succeeded structurally but the verification residual was too large.
    Residual(f64),
    /// Fit produced non-positive ray factors, a vanishing scale, or a
    /// linear part too far from any dilated Lorentz matrix.
    Structural,
    Fatal(RecognitionError),
}

fn solve_hypothesis(
    sample: &WedgeMapSample,
    swap: bool,
    tol: f64,
) -> Result<IdentifiedMap, HypothesisFailure> {
    let n = sample.pairs.len();
    // Unknown layout: D row-major (16) | a (4) | homogenization t (1) | mu (2n).
    let cols = 21 + 2 * n;
    let rows = 10 * n;
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    let g = metric();

    let mut row = 0;
    for (i, (src, dst)) in sample.pairs.iter().enumerate() {
        let lp = src.ell_plus().vector().0;
        let lm = src.ell_minus().vector().0;
        // Under a ray swap the image of ell_plus is a negative multiple of
        // the image wedge's ell_minus, and vice versa.
        let (mp, mm) = if swap {
            (-dst.ell_minus().vector().0, -dst.ell_plus().vector().0)
        } else {
            (dst.ell_plus().vector().0, dst.ell_minus().vector().0)
        };
        for (ell, m, mu_off) in [(lp, mp, 0), (lm, mm, 1)] {
            for r in 0..4 {
                // (D ell)_r - mu * m_r = 0
                for k in 0..4 {
                    a[(row, 4 * r + k)] = ell[k];
                }
                a[(row, 21 + 2 * i + mu_off)] = -m[r];
                row += 1;
            }
        }
        // Image of the source apex lies on the image wedge's edge:
        // (D xi + a - t eta) · m_pm = 0 in the Minkowski form.
        let xi = src.apex().0;
        let eta = dst.apex().0;
        for m in [dst.ell_plus().vector().0, dst.ell_minus().vector().0] {
            let gm = g * m;
            for r in 0..4 {
                for k in 0..4 {
                    a[(row, 4 * r + k)] += gm[r] * xi[k];
                }
                a[(row, 16 + r)] = gm[r];
            }
            a[(row, 20)] = -gm.dot(&eta);
            row += 1;
        }
    }

    let svd = a.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&p, &q| {
        svd.singular_values[p]
            .partial_cmp(&svd.singular_values[q])
            .unwrap()
    });
    let sigma_max = svd.singular_values[*order.last().unwrap()];
    // A second near-zero singular value means the sample does not pin the
    // map down (sources not in general position).
    if svd.singular_values[order[1]] <= 1e-8 * sigma_max {
        return Err(HypothesisFailure::Fatal(RecognitionError::Underdetermined));
    }
    let v = v_t.row(order[0]);

    let t = v[20];
    if t.abs() <= 1e-10 {
        return Err(HypothesisFailure::Structural);
    }
    let u: Vec<f64> = v.iter().map(|x| x / t).collect();
    if u[21..].iter().any(|&mu| mu <= 0.0) {
        return Err(HypothesisFailure::Structural);
    }

    let d = Matrix4::from_fn(|r, k| u[4 * r + k]);
    let det = d.determinant();
    if det.abs() <= 1e-12 {
        return Err(HypothesisFailure::Structural);
    }
    let scale = det.abs().powf(0.25);
    let lambda = orthonormalize_lorentz(d / scale);
    let trans = FourVector::new(u[16], u[17], u[18], u[19]);
    let element = PoincareElement::new_with_tol(lambda, trans, 1e-6)
        .map_err(|_| HypothesisFailure::Structural)?;

    // Verify against the full sample in canonical form.
    let mut residual: f64 = 0.0;
    for (src, dst) in &sample.pairs {
        let image = apply_similarity(&lambda, &trans, scale, src)
            .map_err(|_| HypothesisFailure::Structural)?;
        residual = residual.max(wedge_mismatch(&image, dst));
    }
    if residual > tol {
        return Err(HypothesisFailure::Residual(residual));
    }
    Ok(IdentifiedMap {
        element,
        scale,
        residual,
    })
}

fn wedge_mismatch(a: &Wedge, b: &Wedge) -> f64 {
    let ray = |x: &LightRay, y: &LightRay| (x.direction() - y.direction()).amax();
    ray(a.ell_plus(), b.ell_plus())
        .max(ray(a.ell_minus(), b.ell_minus()))
        .max(a.apex().max_diff(&b.apex()))
}

/// Pull a matrix close to the Lorentz group back onto it (Newton iteration
/// for the metric-polar factor); leaves faraway matrices essentially alone.
fn orthonormalize_lorentz(m: Matrix4<f64>) -> Matrix4<f64> {
    let g = metric();
    let mut lambda = m;
    for _ in 0..3 {
        let e = g * lambda.transpose() * g * lambda;
        lambda *= Matrix4::identity() * 1.5 - e * 0.5;
    }
    lambda
}

/// Which monotonicity property a wedge pair violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// Sources nested but images not.
    InclusionLost,
    /// Images nested but sources not.
    InclusionCreated,
    /// Sources disjoint but images overlap.
    DisjointnessLost,
    /// Images disjoint but sources overlap.
    DisjointnessCreated,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutomorphismViolation {
    pub first: usize,
    pub second: usize,
    pub kind: ViolationKind,
}

/// Result of auditing a wedge correspondence for preservation of
/// inclusion and disjointness in both directions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutomorphismReport {
    pub pairs_checked: usize,
    pub violations: Vec<AutomorphismViolation>,
}

impl AutomorphismReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that a sampled correspondence preserves and reflects wedge
/// inclusion, and preserves and reflects disjointness, over every pair in
/// the sample.
pub fn check_automorphism_properties(sample: &WedgeMapSample, tol: f64) -> AutomorphismReport {
    let n = sample.pairs.len();
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            pairs_checked += 1;
            let (si, di) = &sample.pairs[i];
            let (sj, dj) = &sample.pairs[j];
            let src_inc = si.included(sj, tol);
            let img_inc = di.included(dj, tol);
            if src_inc && !img_inc {
                violations.push(AutomorphismViolation {
                    first: i,
                    second: j,
                    kind: ViolationKind::InclusionLost,
                });
            }
            if img_inc && !src_inc {
                violations.push(AutomorphismViolation {
                    first: i,
                    second: j,
                    kind: ViolationKind::InclusionCreated,
                });
            }
            if i < j {
                let src_dis = si.disjoint(sj);
                let img_dis = di.disjoint(dj);
                if src_dis && !img_dis {
                    violations.push(AutomorphismViolation {
                        first: i,
                        second: j,
                        kind: ViolationKind::DisjointnessLost,
                    });
                }
                if img_dis && !src_dis {
                    violations.push(AutomorphismViolation {
                        first: i,
                        second: j,
                        kind: ViolationKind::DisjointnessCreated,
                    });
                }
            }
        }
    }
    AutomorphismReport {
        pairs_checked,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_proper_poincare, random_wedge, rng_for};

    fn sample_under(map: impl Fn(&Wedge) -> Wedge, seed: u64, n: usize) -> WedgeMapSample {
        let mut rng = rng_for(seed);
        let mut pairs = Vec::new();
        while pairs.len() < n {
            let w = random_wedge(&mut rng);
            pairs.push((w.clone(), map(&w)));
        }
        WedgeMapSample::new(pairs)
    }

    #[test]
    fn recovers_known_poincare_map() {
        let mut rng = rng_for(11);
        let lambda = random_proper_poincare(&mut rng);
        let sample = sample_under(|w| w.transform(&lambda).unwrap(), 12, 6);
        let found = identify_wedge_map(&sample, 1e-9).unwrap();
        assert!((found.scale - 1.0).abs() < 1e-10);
        assert!(found.element.approx_eq(&lambda, 1e-9));
    }

    #[test]
    fn recovers_pure_dilation() {
        let sample = sample_under(
            |w| Wedge::new(*w.ell_plus(), *w.ell_minus(), w.apex().scale(2.0)).unwrap(),
            13,
            6,
        );
        let found = identify_wedge_map(&sample, 1e-9).unwrap();
        assert!((found.scale - 2.0).abs() < 1e-10);
        assert!(found.element.is_identity(1e-10));
    }

    #[test]
    fn recovers_dilated_poincare_map() {
        let mut rng = rng_for(21);
        let lambda = random_proper_poincare(&mut rng);
        let s = 0.7;
        let sample = sample_under(
            |w| {
                let moved = w.transform(&lambda).unwrap();
                Wedge::new(*moved.ell_plus(), *moved.ell_minus(), {
                    // x -> s(Λx + a) rescales the whole image wedge about the origin.
                    moved.apex().scale(s)
                })
                .unwrap()
            },
            22,
            7,
        );
        let found = identify_wedge_map(&sample, 1e-9).unwrap();
        assert!((found.scale - s).abs() < 1e-9);
        assert!((found.element.lorentz() - lambda.lorentz()).amax() < 1e-9);
        assert!(found
            .element
            .translation()
            .approx_eq(&lambda.translation().scale(s), 1e-8));
    }

    #[test]
    fn rejects_complement_sabotage() {
        let mut rng = rng_for(31);
        let lambda = random_proper_poincare(&mut rng);
        let mut sample = sample_under(|w| w.transform(&lambda).unwrap(), 32, 6);
        let broken = sample.pairs[2].1.complement();
        sample.pairs[2].1 = broken;
        assert!(matches!(
            identify_wedge_map(&sample, 1e-9),
            Err(RecognitionError::InconsistentSample { .. })
        ));
    }

    #[test]
    fn rejects_small_samples() {
        let sample = sample_under(|w| w.clone(), 41, 4);
        assert!(matches!(
            identify_wedge_map(&sample, 1e-9),
            Err(RecognitionError::TooFewSamples(4))
        ));
    }

    #[test]
    fn automorphism_checks_pass_for_induced_maps() {
        let mut rng = rng_for(51);
        let lambda = random_proper_poincare(&mut rng);
        let mut sample = sample_under(|w| w.transform(&lambda).unwrap(), 52, 6);
        // Add a nested and a complementary pair so the properties bite.
        let base = sample.pairs[0].0.clone();
        for related in [
            base.translated(&base.ell_minus().vector().scale(-0.5)),
            base.complement(),
        ] {
            let img = related.transform(&lambda).unwrap();
            sample.pairs.push((related, img));
        }
        let report = check_automorphism_properties(&sample, 1e-10);
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn automorphism_checks_catch_far_translate() {
        let base = Wedge::standard_along_axis(1);
        let nested = base.translated(&FourVector::new(0.0, 1.0, 0.0, 0.0));
        let far = base
            .complement()
            .translated(&FourVector::new(0.0, -50.0, 0.0, 0.0));
        let sample = WedgeMapSample::new(vec![
            (base.clone(), base.clone()),
            // Image teleported to a region disjoint from everything else.
            (nested, far),
        ]);
        let report = check_automorphism_properties(&sample, 1e-10);
        assert!(!report.passed());
        let kinds: Vec<ViolationKind> = report.violations.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::InclusionLost));
        assert!(kinds.contains(&ViolationKind::DisjointnessCreated));
    }
}
