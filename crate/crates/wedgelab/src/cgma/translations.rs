//! Assembling a translation representation from conjugation products.
//!
//! The product of the conjugations of two parallel wedges is a linear
//! unitary; as the second wedge slides along an axis these products form
//! a one-parameter group, and two such groups (time and the wedge axis)
//! assemble into a representation of the planar translations. The
//! checks here certify that the assembly is consistent: independent of
//! the base wedge orientation, a homomorphism, and covariant for the
//! conjugation family itself.

use super::{CgmaError, NetFixture, LABEL_TOL};
use crate::geometry::FourVector;
use crate::tomita::{max_abs, op_identity, op_mul, Op, SemilinearOp};
use crate::wedges::Wedge;

/// Internal-consistency bound an assembled system must meet.
pub const ASSEMBLY_TOL: f64 = 1e-9;

fn unit_vector(axis: usize) -> FourVector {
    let mut v = [0.0; 4];
    v[axis] = 1.0;
    FourVector::new(v[0], v[1], v[2], v[3])
}

/// The unitary carrying the net from `base` to `base + step`, built as
/// the conjugation product J(base + step)·J(base). Its geometric shadow
/// is the translation by `step − Λ_base·step`, twice the step for steps
/// in the reflection plane of the wedge.
pub fn build_axis_unitary(
    fixture: &NetFixture,
    base: &Wedge,
    step: &FourVector,
) -> Result<Op, CgmaError> {
    let here = fixture
        .conj_for_wedge(base, LABEL_TOL)
        .ok_or_else(|| CgmaError::Unresolvable("the base wedge".to_string()))?;
    let moved = fixture
        .conj_for_wedge(&base.translated(step), LABEL_TOL)
        .ok_or_else(|| {
            CgmaError::Unresolvable(format!("the base wedge translated by {:?}", step.0))
        })?;
    match moved.compose(&here) {
        SemilinearOp::Linear(m) => Ok(m),
        SemilinearOp::Antilinear(_) => Err(CgmaError::Unresolvable(
            "a linear conjugation product; one factor was not antilinear".to_string(),
        )),
    }
}

/// Agreement of the axis unitaries across base-wedge orientations, with
/// the geometric counterpart of the same products.
#[derive(Debug, Clone)]
pub struct AxisConsistency {
    pub axis: usize,
    /// Distinct wedge orientations found in the family.
    pub orientations: usize,
    /// Largest disagreement between the products built over different
    /// orientations.
    pub operator_residual: f64,
    /// Largest deviation of the composed edge reflections from the pure
    /// translation they should induce.
    pub geometric_residual: f64,
}

fn same_orientation(a: &Wedge, b: &Wedge, tol: f64) -> bool {
    a.ell_plus().approx_eq(b.ell_plus(), tol) && a.ell_minus().approx_eq(b.ell_minus(), tol)
}

fn orientation_representatives(fixture: &NetFixture) -> Vec<Wedge> {
    let mut reps: Vec<Wedge> = Vec::new();
    for m in fixture.members() {
        let w = m.label.to_wedge();
        if !reps.iter().any(|r| same_orientation(r, &w, LABEL_TOL)) {
            reps.push(w);
        }
    }
    reps
}

/// Build the axis unitary over every wedge orientation in the family and
/// compare the products; also check that the geometric reflections
/// compose to the translation by `amount` along the axis. At least two
/// orientations are required for the comparison to mean anything.
pub fn check_axis_consistency(
    fixture: &NetFixture,
    axis: usize,
    amount: f64,
) -> Result<AxisConsistency, CgmaError> {
    let reps = orientation_representatives(fixture);
    if reps.len() < 2 {
        return Err(CgmaError::TooFewOrientations);
    }
    let step = unit_vector(axis) * (amount / 2.0);
    let target = unit_vector(axis) * amount;
    let mut operator_residual = 0.0f64;
    let mut geometric_residual = 0.0f64;
    let mut first: Option<Op> = None;
    for w in &reps {
        let u = build_axis_unitary(fixture, w, &step)?;
        match &first {
            None => first = Some(u),
            Some(f) => operator_residual = operator_residual.max(max_abs(&(&u - f))),
        }
        let shift = w.reflection_translation(&step);
        geometric_residual = geometric_residual.max(shift.max_diff(&target));
    }
    Ok(AxisConsistency {
        axis,
        orientations: reps.len(),
        operator_residual,
        geometric_residual,
    })
}

/// Commutator size of the two axis groups at the given parameters.
pub fn check_commutation(system: &TranslationSystem<'_>, a: f64, b: f64) -> Result<f64, CgmaError> {
    let u0 = system.axis_unitary(0, a)?;
    let u1 = system.axis_unitary(1, b)?;
    Ok(max_abs(&(op_mul(&u0, &u1) - op_mul(&u1, &u0))))
}

/// The assembled planar translation representation, with the residuals
/// of the identities certifying it.
#[derive(Debug)]
pub struct TranslationSystem<'a> {
    fixture: &'a NetFixture,
    base: Wedge,
    pub consistency: Vec<AxisConsistency>,
    pub identity_residual: f64,
    pub group_law_residual: f64,
    pub commutation_residual: f64,
    pub covariance_residual: f64,
    pub covariance_checked: usize,
    pub covariance_skipped: usize,
}

impl TranslationSystem<'_> {
    pub fn dim(&self) -> usize {
        self.fixture.dim()
    }

    /// One-parameter group along a spacetime axis, from conjugation
    /// products over the base wedge.
    pub fn axis_unitary(&self, axis: usize, amount: f64) -> Result<Op, CgmaError> {
        build_axis_unitary(
            self.fixture,
            &self.base,
            &(unit_vector(axis) * (amount / 2.0)),
        )
    }

    /// The representation at a planar translation.
    pub fn u(&self, xi: &FourVector) -> Result<Op, CgmaError> {
        if xi.0[2].abs() > LABEL_TOL || xi.0[3].abs() > LABEL_TOL {
            return Err(CgmaError::Unresolvable(format!(
                "a translation inside the t-x plane; {:?} leaves it",
                xi.0
            )));
        }
        let u0 = self.axis_unitary(0, xi.0[0])?;
        let u1 = self.axis_unitary(1, xi.0[1])?;
        Ok(op_mul(&u0, &u1))
    }

    /// Worst residual among the assembly identities.
    pub fn max_internal_residual(&self) -> f64 {
        let axes = self
            .consistency
            .iter()
            .map(|c| c.operator_residual.max(c.geometric_residual))
            .fold(0.0, f64::max);
        axes.max(self.identity_residual)
            .max(self.group_law_residual)
            .max(self.commutation_residual)
            .max(self.covariance_residual)
    }
}

/// Assemble the translation system of a fixture and certify it on the
/// sampled translations: axis consistency across orientations (fatal if
/// violated), the group law, commutation of the two axes, and
/// covariance of the conjugation family under the assembled unitaries.
pub fn assemble_translations<'a>(
    fixture: &'a NetFixture,
    sample_xis: &[FourVector],
) -> Result<TranslationSystem<'a>, CgmaError> {
    if fixture.source().is_none() {
        return Err(CgmaError::NoSource);
    }
    let base = fixture.members()[0].label.to_wedge();
    let mut probes = [0.7, 0.7];
    for axis in [0usize, 1] {
        if let Some(a) = sample_xis
            .iter()
            .map(|x| x.0[axis])
            .find(|a| a.abs() > 1e-6)
        {
            probes[axis] = a;
        }
    }
    let mut consistency = Vec::new();
    for axis in [0usize, 1] {
        let c = check_axis_consistency(fixture, axis, probes[axis])?;
        let worst = c.operator_residual.max(c.geometric_residual);
        if worst > ASSEMBLY_TOL {
            return Err(CgmaError::AxisInconsistency {
                residual: worst,
                tol: ASSEMBLY_TOL,
            });
        }
        consistency.push(c);
    }
    let mut system = TranslationSystem {
        fixture,
        base,
        consistency,
        identity_residual: 0.0,
        group_law_residual: 0.0,
        commutation_residual: 0.0,
        covariance_residual: 0.0,
        covariance_checked: 0,
        covariance_skipped: 0,
    };
    system.identity_residual =
        max_abs(&(system.u(&FourVector::zero())? - op_identity(fixture.dim())));
    system.commutation_residual = check_commutation(&system, probes[0], probes[1])?;
    let mut group = 0.0f64;
    for pair in sample_xis.windows(2) {
        let sum = pair[0] + pair[1];
        let lhs = system.u(&sum)?;
        let rhs = op_mul(&system.u(&pair[0])?, &system.u(&pair[1])?);
        group = group.max(max_abs(&(lhs - rhs)));
    }
    system.group_law_residual = group;
    let mut cov = 0.0f64;
    for xi in sample_xis.iter().take(3) {
        let ad = SemilinearOp::Linear(system.u(xi)?);
        let ad_inv = ad.adjoint();
        for m in fixture.members() {
            match fixture.conj_for_wedge(&m.label.to_wedge().translated(xi), LABEL_TOL) {
                Some(expected) => {
                    let transported = ad.compose(&m.conj).compose(&ad_inv);
                    cov = cov.max(transported.distance(&expected));
                    system.covariance_checked += 1;
                }
                None => system.covariance_skipped += 1,
            }
        }
    }
    system.covariance_residual = cov;
    Ok(system)
}
