//! Modular covariance of the net: the flow of one wedge carries the
//! conjugations of the others along the boost orbit of its apex, and
//! the corresponding geometric boosts are certified as products of
//! edge reflections.

use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::freemodel::{boost_rep, ModelWedgeTag, Side};
use crate::geometry::PoincareElement;
use crate::tomita::op_mul;
use crate::wedges::{compose_reflections, reflection_word};

use super::{CgmaError, NetFixture, WedgeLabel};

const GEO_TOL: f64 = 1e-9;

/// One certified geometric boost: a reflection word recomposing to the
/// boost about a spatial axis.
#[derive(Debug, Clone)]
pub struct BoostCertificate {
    /// Spatial axis index (1, 2, or 3 in four-vector components).
    pub axis: usize,
    pub rapidity: f64,
    pub word_len: usize,
    /// Round-trip deviation of the recomposed word from the boost.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    /// Worst deviation of a transported conjugation from the one at the
    /// boosted apex, measured on the retained block.
    pub operator_residual: f64,
    pub operator_checked: usize,
    pub operator_skipped: usize,
    /// Why the operator half could not run at all, when it could not.
    pub operator_unavailable: Option<String>,
    /// Worst round-trip residual over the boost certificates.
    pub geometric_residual: f64,
    pub certificates: Vec<BoostCertificate>,
}

impl StabilityReport {
    /// The operator half passes when it ran cleanly or does not apply;
    /// the geometric half must always produce valid certificates.
    pub fn passed(&self, op_tol: f64, geo_tol: f64) -> bool {
        let op_ok = match &self.operator_unavailable {
            Some(_) => true,
            None => self.operator_checked > 0 && self.operator_residual <= op_tol,
        };
        op_ok && !self.certificates.is_empty() && self.geometric_residual <= geo_tol
    }
}

fn spatial_axis(axis: usize) -> nalgebra::Unit<Vector3<f64>> {
    match axis {
        1 => Vector3::x_axis(),
        2 => Vector3::y_axis(),
        _ => Vector3::z_axis(),
    }
}

/// Check modular covariance of the fixture.
///
/// The operator half needs a model source and tagged members. For each
/// side's first tagged member, the flow at the commensurate times
/// t = m·h/2π (one per entry of `steps`) is applied to every tagged
/// member's conjugation, and the result is compared with the
/// conjugation at the boosted apex ξ + Λ(χ)(η − ξ). The comparison is
/// restricted to the block of grid points whose boosted image stays on
/// the grid; outside that block the truncated flow annihilates by
/// construction.
///
/// The geometric half certifies membership of the boosts about all
/// three spatial axes at rapidities 0.5 and 1.0 in the group generated
/// by edge reflections, by producing a reflection word for each and
/// recomposing it.
pub fn check_modular_stability(
    fixture: &NetFixture,
    steps: &[i64],
) -> Result<StabilityReport, CgmaError> {
    let mut report = StabilityReport {
        operator_residual: 0.0,
        operator_checked: 0,
        operator_skipped: 0,
        operator_unavailable: None,
        geometric_residual: 0.0,
        certificates: Vec::new(),
    };

    for axis in 1..=3 {
        for rapidity in [0.5, 1.0] {
            let boost = PoincareElement::boost(spatial_axis(axis), rapidity);
            let word = reflection_word(&boost, GEO_TOL)?;
            let residual = compose_reflections(&word).max_diff(&boost);
            report.geometric_residual = report.geometric_residual.max(residual);
            report.certificates.push(BoostCertificate {
                axis,
                rapidity,
                word_len: word.len(),
                residual,
            });
        }
    }

    let source = match fixture.source() {
        Some(s) => s,
        None => {
            report.operator_unavailable = Some("fixture has no model source".into());
            return Ok(report);
        }
    };
    let grid = source.grid();
    let h = grid.spacing();

    let mut centers: Vec<usize> = Vec::new();
    for side in [Side::Right, Side::Left] {
        let found = fixture
            .members()
            .iter()
            .position(|m| matches!(&m.label, WedgeLabel::Model(t) if t.side == side));
        if let Some(i) = found {
            centers.push(i);
        }
    }
    if centers.is_empty() {
        report.operator_unavailable = Some("no member carries a model tag".into());
        return Ok(report);
    }

    for &ci in &centers {
        let center = &fixture.members()[ci];
        let WedgeLabel::Model(ctag) = &center.label else {
            continue;
        };
        for &m in steps {
            let t = (m as f64) * h / (2.0 * PI);
            let chi = match ctag.side {
                Side::Right => -2.0 * PI * t,
                Side::Left => 2.0 * PI * t,
            };
            let flow = fixture.flow(&center.id, t)?;
            let rep = boost_rep(grid, chi)?;
            let lambda = PoincareElement::boost(Vector3::x_axis(), chi);
            let targets: Vec<usize> = rep
                .retained_sources()
                .map(|src| (src as i64 + rep.steps) as usize)
                .collect();
            for member in fixture.members() {
                let WedgeLabel::Model(mtag) = &member.label else {
                    report.operator_skipped += 1;
                    continue;
                };
                if !member.conj.is_antilinear() {
                    report.operator_skipped += 1;
                    continue;
                }
                let transported = op_mul(&op_mul(&flow, member.conj.matrix()), &flow.transpose());
                let apex = ctag.xi + lambda.apply(&(mtag.xi - ctag.xi));
                let expected = source.conj(&ModelWedgeTag::new(mtag.side, apex)?)?;
                let e = expected.matrix();
                let mut worst = 0.0f64;
                for &r in &targets {
                    for &c in &targets {
                        worst = worst.max((transported[(r, c)] - e[(r, c)]).norm());
                    }
                }
                report.operator_residual = report.operator_residual.max(worst);
                report.operator_checked += 1;
            }
        }
    }
    Ok(report)
}
