//! Lifting geometric elements to operators through reflection words.
//!
//! A word of wedges whose edge reflections compose to a Poincare element
//! lifts to an operator by replacing each reflection with the matching
//! conjugation. The star relation says that conjugating the family by a
//! lifted element transports each member's conjugation to the one at the
//! geometrically transformed wedge.

use super::{CgmaError, NetFixture, LABEL_TOL};
use crate::geometry::PoincareElement;
use crate::tomita::SemilinearOp;
use crate::wedges::{compose_reflections, reflection_word, Wedge};

/// Tolerance for recomposing a word into the element it represents.
pub const WORD_TOL: f64 = 1e-9;

/// A Poincare element lifted to an operator through a reflection word.
#[derive(Debug, Clone)]
pub struct LiftedOperator {
    /// Wedges whose edge reflections compose to the element.
    pub word: Vec<Wedge>,
    /// Product of the conjugations attached to the word wedges.
    pub op: SemilinearOp,
    /// Recomposition error of the word against the element.
    pub word_residual: f64,
}

/// Lift a proper Poincare element: decompose it into edge reflections
/// and replace each with the conjugation its wedge carries. Fails when a
/// word wedge has no conjugation in the family or its generative source.
pub fn lift_representation(
    fixture: &NetFixture,
    lambda: &PoincareElement,
) -> Result<LiftedOperator, CgmaError> {
    let word = reflection_word(lambda, WORD_TOL)?;
    let word_residual = compose_reflections(&word).max_diff(lambda);
    let mut op = SemilinearOp::identity(fixture.dim());
    for w in &word {
        let c = fixture.conj_for_wedge(w, LABEL_TOL).ok_or_else(|| {
            CgmaError::Unresolvable(format!("the word wedge with apex {:?}", w.apex().0))
        })?;
        op = op.compose(&c);
    }
    Ok(LiftedOperator {
        word,
        op,
        word_residual,
    })
}

/// Cocycle defect of two lifted elements: how far the lift is from a
/// homomorphism, and whether the defect at least commutes with the
/// whole conjugation family.
#[derive(Debug, Clone)]
pub struct CentralityReport {
    /// Distance of J(λ₁)J(λ₂)J(λ₁λ₂)⁻¹ from the identity.
    pub defect_from_identity: f64,
    /// Largest commutator of the defect with a family conjugation.
    pub centrality_residual: f64,
    /// Whether the defect came out linear, as any cocycle of a lift
    /// must.
    pub linear: bool,
}

pub fn cocycle_centrality(
    fixture: &NetFixture,
    first: &PoincareElement,
    second: &PoincareElement,
) -> Result<CentralityReport, CgmaError> {
    let a = lift_representation(fixture, first)?;
    let b = lift_representation(fixture, second)?;
    let ab = lift_representation(fixture, &first.compose(second))?;
    let defect = a.op.compose(&b.op).compose(&ab.op.unitary_inverse());
    let linear = !defect.is_antilinear();
    let defect_from_identity = defect.distance(&SemilinearOp::identity(fixture.dim()));
    let mut centrality_residual = 0.0f64;
    for m in fixture.members() {
        let lhs = defect.compose(&m.conj);
        let rhs = m.conj.compose(&defect);
        centrality_residual = centrality_residual.max(lhs.distance(&rhs));
    }
    Ok(CentralityReport {
        defect_from_identity,
        centrality_residual,
        linear,
    })
}

/// Result of testing the star relation for one element and word.
#[derive(Debug, Clone)]
pub struct StarReport {
    /// How closely the stated word recomposes the stated element.
    pub element_residual: f64,
    /// Largest transport error over members whose image stays in the
    /// family.
    pub residual: f64,
    pub checked: usize,
    pub skipped: usize,
}

impl StarReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.checked > 0 && self.residual <= tol
    }
}

/// Check the star relation for `lambda` using an explicit word of
/// conjugation ids (family members or canonical synthetic tags). The
/// word must recompose to `lambda`; the lifted operator must then carry
/// each family conjugation to the conjugation of the transformed wedge,
/// for every member whose image is again in the family.
pub fn check_star_relation(
    fixture: &NetFixture,
    lambda: &PoincareElement,
    word: &[String],
) -> Result<StarReport, CgmaError> {
    let mut resolved = Vec::new();
    for id in word {
        resolved.push(fixture.resolve_conj(id)?);
    }
    let wedges: Vec<Wedge> = resolved.iter().map(|(label, _)| label.to_wedge()).collect();
    let element_residual = compose_reflections(&wedges).max_diff(lambda);
    if element_residual > WORD_TOL {
        return Err(CgmaError::InducedMapMismatch {
            residual: element_residual,
            tol: WORD_TOL,
        });
    }
    let mut rep = SemilinearOp::identity(fixture.dim());
    for (_, c) in &resolved {
        rep = rep.compose(c);
    }
    let rep_inv = rep.unitary_inverse();
    let mut residual = 0.0f64;
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for m in fixture.members() {
        let image = m.label.to_wedge().transform(lambda)?;
        let Some(&zi) = fixture.find_label_matches(&image, LABEL_TOL).first() else {
            skipped += 1;
            continue;
        };
        let expected = &fixture.members()[zi].conj;
        let transported = rep.compose(&m.conj).compose(&rep_inv);
        residual = residual.max(transported.distance(expected));
        checked += 1;
    }
    Ok(StarReport {
        element_residual,
        residual,
        checked,
        skipped,
    })
}
