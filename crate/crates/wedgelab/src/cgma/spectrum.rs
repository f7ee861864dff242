//! Joint spectrum of the assembled translation representation.
//!
//! The two axis groups are probed at a dyadic ladder of parameter
//! lengths. A random Hermitian mixture of the coarsest probes supplies
//! a candidate joint eigenbasis; each basis vector then yields one
//! phase per axis and level, and unwrapping the phases from the finest
//! level upward recovers the energy-momentum point of that vector. The
//! finest probe must already resolve the largest momentum (|p|·δ < π),
//! which the caller controls through the ladder parameters.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CgmaError, TranslationSystem};
use crate::geometry::FourVector;
use crate::sampling::rng_for;
use crate::tomita::{cplx, Op, Vector, C64};

/// Which half of the light cone holds every extracted point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cone {
    Forward,
    Backward,
    Neither,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumConfig {
    /// Coarsest probe length; level n probes at `base_delta / 2^n`.
    pub base_delta: f64,
    /// Number of dyadic levels.
    pub levels: usize,
    /// Cross-level phase agreement required of an extracted point.
    pub phase_tol: f64,
    /// Slack when classifying points against the light cone.
    pub cone_tol: f64,
    /// Seed of the Hermitian mixture that picks the joint eigenbasis.
    pub seed: u64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            base_delta: 0.8,
            levels: 14,
            phase_tol: 1e-6,
            cone_tol: 1e-9,
            seed: 0x5EED5,
        }
    }
}

impl SpectrumConfig {
    pub fn finest_delta(&self) -> f64 {
        self.base_delta * 0.5f64.powi(self.levels as i32 - 1)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Energy-momentum points, one per joint eigenvector, sorted by
    /// spatial then time component.
    pub points: Vec<FourVector>,
    pub cone: Cone,
    /// Every point vanishes: the representation is trivial.
    pub trivial: bool,
    /// Worst cross-level phase disagreement among accepted points.
    pub max_phase_residual: f64,
    /// Worst deviation of a probe expectation from the unit circle.
    pub max_modulus_defect: f64,
}

const TAU: f64 = 2.0 * std::f64::consts::PI;

fn wrap_phase(x: f64) -> f64 {
    x - TAU * (x / TAU).round()
}

fn all_diagonal(us: &[Vec<Op>; 2]) -> bool {
    us.iter().flatten().all(|u| {
        let (r, c) = u.shape();
        (0..c).all(|j| (0..r).all(|i| i == j || u[(i, j)] == C64::new(0.0, 0.0)))
    })
}

fn hermitian_mixture(us: &[Vec<Op>; 2], seed: u64) -> Op {
    let mut rng = rng_for(seed);
    let dim = us[0][0].nrows();
    let mut h = Op::zeros(dim, dim);
    for axis in 0..2 {
        let u = &us[axis][0];
        let re = (u + u.adjoint()) * cplx(0.5);
        let im = (u - u.adjoint()) * C64::new(0.0, -0.5);
        h += re * cplx(rng.gen_range(-1.0..1.0));
        h += im * cplx(rng.gen_range(-1.0..1.0));
    }
    let sym = (&h + h.adjoint()) * cplx(0.5);
    sym
}

/// Extract the joint spectrum from probe unitaries supplied per axis
/// and probe length.
fn extract_points(
    dim: usize,
    mut probe: impl FnMut(usize, f64) -> Result<Op, CgmaError>,
    config: &SpectrumConfig,
) -> Result<(Vec<FourVector>, f64, f64), CgmaError> {
    if config.levels < 2 || config.base_delta <= 0.0 {
        return Err(CgmaError::SpectrumExtraction(
            "the probe ladder needs a positive base length and at least two levels".to_string(),
        ));
    }
    let deltas: Vec<f64> = (0..config.levels)
        .map(|n| config.base_delta * 0.5f64.powi(n as i32))
        .collect();
    let mut us: [Vec<Op>; 2] = [Vec::new(), Vec::new()];
    for (axis, column) in us.iter_mut().enumerate() {
        for &d in &deltas {
            column.push(probe(axis, d)?);
        }
    }
    let identity_basis = all_diagonal(&us);
    let basis: Vec<Vector> = if identity_basis {
        Vec::new()
    } else {
        let h = hermitian_mixture(&us, config.seed);
        let eig = h.symmetric_eigen();
        (0..dim)
            .map(|k| eig.eigenvectors.column(k).into_owned())
            .collect()
    };

    let mut max_modulus_defect = 0.0f64;
    let mut max_phase_residual = 0.0f64;
    let mut points = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut slope = [0.0f64; 2];
        for axis in 0..2 {
            let mut phases = Vec::with_capacity(config.levels);
            for (n, u) in us[axis].iter().enumerate() {
                let z = if identity_basis {
                    u[(k, k)]
                } else {
                    let v = &basis[k];
                    (v.adjoint() * u * v)[(0, 0)]
                };
                let defect = (1.0 - z.norm()).abs();
                max_modulus_defect = max_modulus_defect.max(defect);
                if z.norm() < 1.0 - config.phase_tol.max(1e-8) {
                    return Err(CgmaError::SpectrumExtraction(format!(
                        "probe expectation leaves the unit circle (|z| = {:.6}) for basis \
                         vector {k}, axis {axis}, probe length {:.3e}: the two axis groups \
                         are not simultaneously diagonalizable in the chosen basis",
                        z.norm(),
                        deltas[n],
                    )));
                }
                phases.push(z.arg());
            }
            // Unwrap: the finest probe fixes the branch, coarser probes
            // sharpen the value.
            let finest = config.levels - 1;
            let mut p = phases[finest] / deltas[finest];
            for n in (0..finest).rev() {
                let kk = ((p * deltas[n] - phases[n]) / TAU).round();
                p = (phases[n] + TAU * kk) / deltas[n];
            }
            for (n, &phi) in phases.iter().enumerate() {
                let residual = wrap_phase(p * deltas[n] - phi).abs();
                max_phase_residual = max_phase_residual.max(residual);
                if residual > config.phase_tol {
                    return Err(CgmaError::SpectrumExtraction(format!(
                        "phase ladder disagrees by {residual:.3e} at probe length {:.3e} \
                         for basis vector {k}, axis {axis}; shrink the base length or add \
                         levels so the finest probe resolves the largest momentum",
                        deltas[n],
                    )));
                }
            }
            slope[axis] = p;
        }
        // Phases grow as p·ξ = p⁰ξ⁰ − p¹ξ¹ along the two axes.
        points.push(FourVector::new(slope[0], -slope[1], 0.0, 0.0));
    }
    points.sort_by(|a, b| {
        (a.0[1], a.0[0])
            .partial_cmp(&(b.0[1], b.0[0]))
            .expect("extracted momenta are finite")
    });
    Ok((points, max_phase_residual, max_modulus_defect))
}

fn classify(points: &[FourVector], tol: f64) -> (Cone, bool) {
    let trivial = points
        .iter()
        .all(|p| p.0[0].abs() <= tol && p.0[1].abs() <= tol);
    let forward = points.iter().all(|p| p.0[0] >= p.0[1].abs() - tol);
    let backward = points.iter().all(|p| p.0[0] <= -(p.0[1].abs() - tol));
    let cone = match (forward, backward) {
        (true, _) => Cone::Forward,
        (false, true) => Cone::Backward,
        (false, false) => Cone::Neither,
    };
    (cone, trivial)
}

/// Extract the joint spectrum of an assembled translation system.
pub fn spectrum_report(
    system: &TranslationSystem<'_>,
    config: &SpectrumConfig,
) -> Result<SpectrumReport, CgmaError> {
    let (points, max_phase_residual, max_modulus_defect) =
        extract_points(system.dim(), |axis, d| system.axis_unitary(axis, d), config)?;
    let (cone, trivial) = classify(&points, config.cone_tol);
    Ok(SpectrumReport {
        points,
        cone,
        trivial,
        max_phase_residual,
        max_modulus_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgma::{assemble_translations, healthy_model_net, time_reflected_model_net};
    use crate::freemodel::RapidityGrid;
    use crate::tomita::op_identity;

    fn grid() -> RapidityGrid {
        RapidityGrid::new(1.0, 8, 0.25).unwrap()
    }

    fn xi() -> FourVector {
        FourVector::new(0.3, 1.1, 0.0, 0.0)
    }

    fn samples() -> Vec<FourVector> {
        vec![
            FourVector::new(0.4, -0.9, 0.0, 0.0),
            FourVector::new(-1.2, 0.35, 0.0, 0.0),
        ]
    }

    #[test]
    fn model_spectrum_sits_on_the_forward_mass_shell() {
        let net = healthy_model_net(grid(), xi()).unwrap();
        let system = assemble_translations(&net, &samples()).unwrap();
        let report = spectrum_report(&system, &SpectrumConfig::default()).unwrap();
        assert_eq!(report.cone, Cone::Forward);
        assert!(!report.trivial);
        assert!(report.max_phase_residual < 1e-9);
        assert!(report.max_modulus_defect < 1e-12);
        let g = grid();
        let mut thetas = g.thetas();
        thetas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(report.points.len(), thetas.len());
        for (p, theta) in report.points.iter().zip(&thetas) {
            assert!(
                (p.0[0] - theta.cosh()).abs() < 1e-9,
                "p0 {} theta {theta}",
                p.0[0]
            );
            assert!((p.0[1] - theta.sinh()).abs() < 1e-9);
            // On-shell within the extraction accuracy.
            let shell = p.0[0] * p.0[0] - p.0[1] * p.0[1];
            assert!((shell - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn time_reflected_spectrum_lands_in_the_backward_cone() {
        let net = time_reflected_model_net(grid(), xi()).unwrap();
        let system = assemble_translations(&net, &samples()).unwrap();
        let report = spectrum_report(&system, &SpectrumConfig::default()).unwrap();
        assert_eq!(report.cone, Cone::Backward);
        assert!(!report.trivial);
        for p in &report.points {
            assert!(p.0[0] < 0.0);
        }
    }

    #[test]
    fn rotated_bases_go_through_the_dense_eigenpath() {
        let energies = [1.0, 2.5, -0.3];
        let momenta = [0.4, -1.1, 2.2];
        let raw = Op::from_row_slice(
            3,
            3,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 1.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
        );
        let q = raw.qr().q();
        let probe = |axis: usize, d: f64| -> Result<Op, CgmaError> {
            let slopes = if axis == 0 { &energies } else { &momenta };
            let mut diag = Op::zeros(3, 3);
            for (i, s) in slopes.iter().enumerate() {
                let phase = if axis == 0 { s * d } else { -s * d };
                diag[(i, i)] = C64::new(phase.cos(), phase.sin());
            }
            Ok(&q * diag * q.adjoint())
        };
        let config = SpectrumConfig {
            base_delta: 0.5,
            levels: 8,
            ..Default::default()
        };
        let (points, phase_res, modulus) = extract_points(3, probe, &config).unwrap();
        assert!(phase_res < 1e-9);
        assert!(modulus < 1e-12);
        let mut expected: Vec<(f64, f64)> = energies
            .iter()
            .zip(&momenta)
            .map(|(e, p)| (*p, *e))
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (pt, (p1, p0)) in points.iter().zip(&expected) {
            assert!((pt.0[0] - p0).abs() < 1e-9);
            assert!((pt.0[1] - p1).abs() < 1e-9);
        }
        let (cone, trivial) = classify(&points, 1e-9);
        assert_eq!(cone, Cone::Neither);
        assert!(!trivial);
    }

    #[test]
    fn non_commuting_axes_are_rejected() {
        let probe = |axis: usize, d: f64| -> Result<Op, CgmaError> {
            if axis == 0 {
                let mut diag = Op::zeros(2, 2);
                diag[(0, 0)] = C64::new(d.cos(), d.sin());
                diag[(1, 1)] = C64::new((2.0 * d).cos(), (2.0 * d).sin());
                Ok(diag)
            } else {
                let (c, s) = (d.cos(), d.sin());
                Ok(Op::from_row_slice(
                    2,
                    2,
                    &[cplx(c), cplx(-s), cplx(s), cplx(c)],
                ))
            }
        };
        let config = SpectrumConfig {
            base_delta: 0.5,
            levels: 6,
            ..Default::default()
        };
        match extract_points(2, probe, &config) {
            Err(CgmaError::SpectrumExtraction(msg)) => {
                assert!(msg.contains("simultaneously"), "{msg}");
            }
            other => panic!("expected a spectrum extraction failure, got {other:?}"),
        }
    }

    #[test]
    fn trivial_representations_are_flagged() {
        let probe = |_axis: usize, _d: f64| -> Result<Op, CgmaError> { Ok(op_identity(3)) };
        let (points, _, _) = extract_points(3, probe, &SpectrumConfig::default()).unwrap();
        let (cone, trivial) = classify(&points, 1e-9);
        assert!(trivial);
        assert_eq!(cone, Cone::Forward);
        for p in &points {
            assert!(p.0[0].abs() < 1e-12 && p.0[1].abs() < 1e-12);
        }
    }
}
