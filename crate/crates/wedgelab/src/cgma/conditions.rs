//! The geometric-action conditions on a net fixture.
//!
//! Four checks run against the family of labelled conjugations:
//!
//! * `conjugation-assignment`: conjugations separate wedge pairs, two
//!   members share one exactly when their wedges are causal complements,
//!   and when algebras are attached their inclusions track wedge
//!   inclusions.
//! * `intersection-standardness`: for every pair of wedges, either the
//!   regions are causally disjoint or the intersection of their algebras
//!   has a cyclic and separating vector, never both.
//! * `reflection-covariance`: conjugating the family by a member's
//!   conjugation realizes the point reflection through that member's
//!   wedge edge, whenever the reflected wedge is again in the family.
//! * `transport-words`: every ordered pair of family wedges is connected
//!   by a product of wedge-edge reflections, certified by an explicit
//!   word.

use serde::{Deserialize, Serialize};

use super::{CgmaError, NetFixture, LABEL_TOL, MATCH_THRESHOLD};
use crate::recognition::{identify_wedge_map, IdentifiedMap, WedgeMapSample};
use crate::wedges::{compose_reflections, reflection_word, transporter, Wedge};

/// Outcome status of one condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped { reason: String },
}

impl CheckStatus {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckStatus::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, CheckStatus::Fail)
    }
}

/// Result of one condition over the whole family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionOutcome {
    pub name: String,
    pub status: CheckStatus,
    /// Worst residual observed among the comparisons that define the
    /// condition; 0 when the condition is purely combinatorial.
    pub residual: f64,
    /// Number of comparisons actually performed.
    pub checked: usize,
    /// Comparisons skipped because the data to decide them leaves the
    /// family.
    pub skipped: usize,
    /// Human-readable descriptions of every violation found.
    pub witnesses: Vec<String>,
}

impl ConditionOutcome {
    fn new(name: &str) -> ConditionOutcome {
        ConditionOutcome {
            name: name.to_string(),
            status: CheckStatus::Pass,
            residual: 0.0,
            checked: 0,
            skipped: 0,
            witnesses: Vec::new(),
        }
    }

    fn fail(&mut self, witness: String) {
        self.status = CheckStatus::Fail;
        self.witnesses.push(witness);
    }

    fn note_residual(&mut self, r: f64) {
        if r.is_finite() {
            self.residual = self.residual.max(r);
        } else {
            self.residual = f64::INFINITY;
        }
    }
}

/// Combined report of all four conditions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CgmaReport {
    pub outcomes: Vec<ConditionOutcome>,
}

impl CgmaReport {
    pub fn outcome(&self, name: &str) -> Option<&ConditionOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    /// True when no condition failed; skipped conditions do not count
    /// against the fixture.
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| !o.status.is_fail())
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.outcomes
            .iter()
            .filter(|o| o.status.is_fail())
            .map(|o| o.name.as_str())
            .collect()
    }
}

fn conjugation_assignment(fixture: &NetFixture) -> ConditionOutcome {
    let mut out = ConditionOutcome::new("conjugation-assignment");
    let members = fixture.members();
    let n = members.len();
    let all_algebras = members.iter().all(|m| m.algebra.is_some());
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&members[i], &members[j]);
            let wa = a.label.to_wedge();
            let wb = b.label.to_wedge();
            out.checked += 1;
            if wa.approx_eq(&wb, LABEL_TOL) {
                out.fail(format!(
                    "members {:?} and {:?} label the same wedge",
                    a.id, b.id
                ));
                continue;
            }
            let dist = a.conj.distance(&b.conj);
            let conj_equal = dist <= MATCH_THRESHOLD;
            let complements = wa.approx_eq(&wb.complement(), LABEL_TOL);
            if complements {
                out.note_residual(dist);
            }
            if conj_equal && !complements {
                out.fail(format!(
                    "distinct non-complementary wedges {:?} and {:?} share a conjugation \
                     (distance {dist:.3e})",
                    a.id, b.id
                ));
            }
            if complements && !conj_equal {
                out.fail(format!(
                    "complementary wedges {:?} and {:?} carry different conjugations \
                     (distance {dist:.3e})",
                    a.id, b.id
                ));
            }
            if all_algebras {
                let alg_a = a.algebra.as_ref().unwrap();
                let alg_b = b.algebra.as_ref().unwrap();
                let span_dist = alg_a.span_distance(alg_b);
                if span_dist <= MATCH_THRESHOLD {
                    out.fail(format!(
                        "members {:?} and {:?} generate the same algebra \
                         (span distance {span_dist:.3e})",
                        a.id, b.id
                    ));
                }
                for (x, y, wx, wy, ax, ay) in [
                    (a, b, &wa, &wb, alg_a, alg_b),
                    (b, a, &wb, &wa, alg_b, alg_a),
                ] {
                    let wedge_incl = wx.included(wy, LABEL_TOL);
                    let span_incl = ay.contains_span(ax) <= MATCH_THRESHOLD;
                    if wedge_incl != span_incl {
                        out.fail(format!(
                            "inclusion mismatch between {:?} and {:?}: wedge inclusion {} \
                             but algebra inclusion {}",
                            x.id, y.id, wedge_incl, span_incl
                        ));
                    }
                }
            }
        }
    }
    out
}

fn intersection_standardness(fixture: &NetFixture) -> ConditionOutcome {
    let mut out = ConditionOutcome::new("intersection-standardness");
    let members = fixture.members();
    let omega = match fixture.omega() {
        Some(om) if members.iter().all(|m| m.algebra.is_some()) => om,
        _ => {
            out.status = CheckStatus::Skipped {
                reason: "no algebras at one-particle level".to_string(),
            };
            return out;
        }
    };
    let n = members.len();
    for i in 0..n {
        for j in i..n {
            let (a, b) = (&members[i], &members[j]);
            let wa = a.label.to_wedge();
            let wb = b.label.to_wedge();
            out.checked += 1;
            let disjoint = wa.disjoint(&wb);
            let meet = a
                .algebra
                .as_ref()
                .unwrap()
                .intersection(b.algebra.as_ref().unwrap());
            let standard = match meet.is_cyclic_separating(omega) {
                Ok((cyc, sep)) => cyc && sep,
                Err(e) => {
                    out.fail(format!(
                        "could not test the intersection algebra of {:?} and {:?}: {e}",
                        a.id, b.id
                    ));
                    continue;
                }
            };
            if disjoint == standard {
                let clause = if disjoint {
                    "disjoint wedges with a standard intersection algebra"
                } else {
                    "overlapping wedges whose intersection algebra is not standard"
                };
                out.fail(format!("pair ({:?}, {:?}): {clause}", a.id, b.id));
            }
        }
    }
    out
}

fn reflection_covariance(fixture: &NetFixture) -> ConditionOutcome {
    let mut out = ConditionOutcome::new("reflection-covariance");
    for (id, r) in &fixture.diagnostics().involution {
        out.note_residual(*r);
        if *r > MATCH_THRESHOLD {
            out.fail(format!(
                "conjugation of {id:?} is not an involution (residual {r:.3e})"
            ));
        }
    }
    let members = fixture.members();
    for x in members {
        let reflection = x.label.to_wedge().edge_reflection();
        let inverse = x.conj.unitary_inverse();
        for y in members {
            let image = match y.label.to_wedge().transform(&reflection) {
                Ok(w) => w,
                Err(e) => {
                    out.fail(format!(
                        "reflection through {:?} does not act on the wedge of {:?}: {e}",
                        x.id, y.id
                    ));
                    continue;
                }
            };
            let matches = fixture.find_label_matches(&image, LABEL_TOL);
            let Some(&zi) = matches.first() else {
                out.skipped += 1;
                continue;
            };
            let z = &members[zi];
            out.checked += 1;
            let transported = x.conj.compose(&y.conj).compose(&inverse);
            let dist = transported.distance(&z.conj);
            out.note_residual(dist);
            if !(dist <= MATCH_THRESHOLD) {
                out.fail(format!(
                    "conjugating the operator of {:?} by {:?} misses the operator of the \
                     reflected wedge {:?} (distance {dist:.3e})",
                    y.id, x.id, z.id
                ));
            }
            if let (Some(ay), Some(az)) = (&y.algebra, &z.algebra) {
                let moved = ay.conjugated_by_semilinear(&x.conj);
                let span_dist = moved.span_distance(az);
                out.note_residual(span_dist);
                if span_dist > MATCH_THRESHOLD {
                    out.fail(format!(
                        "conjugating the algebra of {:?} by {:?} misses the algebra of {:?} \
                         (span distance {span_dist:.3e})",
                        y.id, x.id, z.id
                    ));
                }
            }
        }
    }
    out
}

fn transport_words(fixture: &NetFixture, tol: f64) -> ConditionOutcome {
    let mut out = ConditionOutcome::new("transport-words");
    let members = fixture.members();
    let n = members.len();
    let mut in_sample_words = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let wa = members[i].label.to_wedge();
            let wb = members[j].label.to_wedge();
            out.checked += 1;
            let g = transporter(&wa, &wb);
            let word = match reflection_word(&g, tol) {
                Ok(w) => w,
                Err(e) => {
                    out.fail(format!(
                        "no reflection word carries {:?} to {:?}: {e}",
                        members[i].id, members[j].id
                    ));
                    continue;
                }
            };
            let recomposed = compose_reflections(&word);
            let word_residual = recomposed.max_diff(&g);
            out.note_residual(word_residual);
            let image = match wa.transform(&g) {
                Ok(w) => w,
                Err(e) => {
                    out.fail(format!(
                        "transporter from {:?} to {:?} degenerates: {e}",
                        members[i].id, members[j].id
                    ));
                    continue;
                }
            };
            let mut geom_residual = 0.0f64;
            for (la, lb) in [
                (image.ell_plus().vector(), wb.ell_plus().vector()),
                (image.ell_minus().vector(), wb.ell_minus().vector()),
            ] {
                geom_residual = geom_residual.max(la.max_diff(&lb));
            }
            geom_residual = geom_residual.max(image.apex().max_diff(&wb.apex()));
            out.note_residual(geom_residual);
            if word_residual > tol || geom_residual > tol {
                out.fail(format!(
                    "reflection word from {:?} to {:?} fails its certificate \
                     (word residual {word_residual:.3e}, image residual {geom_residual:.3e})",
                    members[i].id, members[j].id
                ));
            }
            if word
                .iter()
                .all(|w| !fixture.find_label_matches(w, LABEL_TOL).is_empty())
            {
                in_sample_words += 1;
            }
        }
    }
    if out.checked > 0 {
        out.witnesses.push(format!(
            "{in_sample_words} of {} transport words use only family wedges",
            out.checked
        ));
    }
    out
}

/// Run all four conditions on a fixture.
pub fn check_cgma(fixture: &NetFixture) -> CgmaReport {
    CgmaReport {
        outcomes: vec![
            conjugation_assignment(fixture),
            intersection_standardness(fixture),
            reflection_covariance(fixture),
            transport_words(fixture, 1e-9),
        ],
    }
}

/// How one family member maps under the adjoint action of a chosen
/// conjugation.
#[derive(Debug, Clone)]
pub struct InducedMapEntry {
    pub source: String,
    /// Family member whose conjugation matches the transported operator,
    /// when one does.
    pub matched: Option<String>,
    /// Operator distance realized by the match, or the best distance seen
    /// when nothing matched (infinite on dimension mismatch).
    pub distance: f64,
    /// Where the point reflection through the center's edge sends the
    /// source wedge.
    pub geometric_image: Wedge,
}

/// The wedge map induced by conjugating the family with one member's
/// conjugation, together with the similarity recovered from it.
#[derive(Debug, Clone)]
pub struct InducedMapReport {
    pub center: String,
    pub entries: Vec<InducedMapEntry>,
    /// Similarity fitted to the matched wedge pairs when at least five
    /// are available and the pairs pin one down. Families of mutually
    /// parallel wedges leave the transverse plane undetermined, so for
    /// them this stays `None` and the note explains why.
    pub recognized: Option<IdentifiedMap>,
    /// Why no similarity was recovered, when none was.
    pub recognition_note: Option<String>,
    pub unmatched: usize,
}

/// Conjugate every family operator by the conjugation of `center` and
/// match the results back against the family.
///
/// A transported operator matching several members is an error unless
/// all the candidates share one conjugation (complementary wedge pairs
/// do); in that case the candidate agreeing with the geometric point
/// reflection is chosen.
pub fn induced_wedge_map(
    fixture: &NetFixture,
    center: &str,
) -> Result<InducedMapReport, CgmaError> {
    let x = fixture
        .member(center)
        .ok_or_else(|| CgmaError::UnknownId(center.to_string()))?;
    let reflection = x.label.to_wedge().edge_reflection();
    let inverse = x.conj.unitary_inverse();
    let mut entries = Vec::new();
    let mut unmatched = 0usize;
    for y in fixture.members() {
        let geometric_image = y.label.to_wedge().transform(&reflection)?;
        let transported = x.conj.compose(&y.conj).compose(&inverse);
        let candidates = fixture.find_conj_matches(&transported, MATCH_THRESHOLD);
        let matched = match candidates.as_slice() {
            [] => None,
            [single] => Some(*single),
            [first, rest @ ..] => {
                let members = fixture.members();
                let coherent = rest
                    .iter()
                    .all(|&i| members[i].conj.distance(&members[*first].conj) <= MATCH_THRESHOLD);
                if !coherent {
                    return Err(CgmaError::AmbiguousMatch {
                        probe: y.id.clone(),
                        first: members[*first].id.clone(),
                        second: members[rest[0]].id.clone(),
                    });
                }
                let geometric = candidates.iter().copied().find(|&i| {
                    members[i]
                        .label
                        .to_wedge()
                        .approx_eq(&geometric_image, LABEL_TOL)
                });
                match geometric {
                    Some(i) => Some(i),
                    None => {
                        return Err(CgmaError::AmbiguousMatch {
                            probe: y.id.clone(),
                            first: members[*first].id.clone(),
                            second: members[rest[0]].id.clone(),
                        })
                    }
                }
            }
        };
        let distance = match matched {
            Some(i) => fixture.members()[i].conj.distance(&transported),
            None => {
                unmatched += 1;
                fixture
                    .members()
                    .iter()
                    .map(|m| m.conj.distance(&transported))
                    .fold(f64::INFINITY, f64::min)
            }
        };
        entries.push(InducedMapEntry {
            source: y.id.clone(),
            matched: matched.map(|i| fixture.members()[i].id.clone()),
            distance,
            geometric_image,
        });
    }
    let pairs: Vec<(Wedge, Wedge)> = entries
        .iter()
        .filter_map(|e| {
            let target = e.matched.as_ref()?;
            let w = fixture.member(target)?.label.to_wedge();
            Some((fixture.member(&e.source)?.label.to_wedge(), w))
        })
        .collect();
    let (recognized, recognition_note) = if pairs.len() >= 5 {
        match identify_wedge_map(&WedgeMapSample::new(pairs), 1e-9) {
            Ok(map) => (Some(map), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (
            None,
            Some(format!(
                "only {} matched pairs, need 5 to fit a map",
                pairs.len()
            )),
        )
    };
    Ok(InducedMapReport {
        center: center.to_string(),
        entries,
        recognized,
        recognition_note,
        unmatched,
    })
}
