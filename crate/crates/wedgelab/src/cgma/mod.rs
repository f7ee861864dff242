//! Net fixtures and the geometric-modular-action checks that run on them.
//!
//! A net fixture pairs wedge labels with antiunitary conjugations and,
//! optionally, finite-dimensional algebras with a standard vector. The
//! submodules verify the geometric-action conditions, the star relation,
//! the translation assembly from conjugation products, the spectrum of
//! the assembled representation, and modular stability.

mod conditions;
mod spectrum;
mod stability;
mod star;
mod translations;

pub use conditions::{
    check_cgma, induced_wedge_map, CgmaReport, CheckStatus, ConditionOutcome, InducedMapEntry,
    InducedMapReport,
};
pub use spectrum::{spectrum_report, Cone, SpectrumConfig, SpectrumReport};
pub use stability::{check_modular_stability, BoostCertificate, StabilityReport};
pub use star::{
    check_star_relation, cocycle_centrality, lift_representation, CentralityReport, LiftedOperator,
    StarReport,
};
pub use translations::{
    assemble_translations, build_axis_unitary, check_axis_consistency, check_commutation,
    AxisConsistency, TranslationSystem, ASSEMBLY_TOL,
};

use std::collections::BTreeMap;

use nalgebra::Unit;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freemodel::{
    modular_flow_model, translation_rep, wedge_conjugation, ModelError, ModelWedgeTag,
    RapidityGrid, Side,
};
use crate::geometry::FourVector;
use crate::recognition::RecognitionError;
use crate::tomita::{
    compute_modular, cplx, FiniteVNAlgebra, Op, SemilinearOp, TomitaError, Vector,
};
use crate::wedges::{Wedge, WedgeError};

/// Spectral-norm threshold under which two conjugation operators count as
/// the same family member.
pub const MATCH_THRESHOLD: f64 = 1e-6;

/// Tolerance for matching wedge labels geometrically.
pub const LABEL_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CgmaError {
    #[error("duplicate member id {0:?}")]
    DuplicateId(String),
    #[error("no family member or synthesizable wedge named {0:?}")]
    UnknownId(String),
    #[error("conjugation image of {probe:?} matches both {first:?} and {second:?}")]
    AmbiguousMatch {
        probe: String,
        first: String,
        second: String,
    },
    #[error(
        "word induces a map at distance {residual:.3e} from the stated element (tol {tol:.3e})"
    )]
    InducedMapMismatch { residual: f64, tol: f64 },
    #[error("fixture has {have} members, need at least {need}")]
    TooFewMembers { need: usize, have: usize },
    #[error("fixture provides fewer than two wedge orientations")]
    TooFewOrientations,
    #[error("no conjugation resolves {0}")]
    Unresolvable(String),
    #[error("no flow data available for member {0:?}")]
    NoFlowData(String),
    #[error("fixture has no generative model source")]
    NoSource,
    #[error("conjugation of {id:?} is {residual:.3e} away from its modular data (tol {tol:.3e})")]
    InconsistentModularData { id: String, residual: f64, tol: f64 },
    #[error("axis checks failed with residual {residual:.3e} (tol {tol:.3e}), assembly aborted")]
    AxisInconsistency { residual: f64, tol: f64 },
    #[error("spectrum extraction failed: {0}")]
    SpectrumExtraction(String),
    #[error("fixture file: {0}")]
    BadFixtureFile(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Tomita(#[from] TomitaError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
    #[error(transparent)]
    Recognition(#[from] RecognitionError),
}

/// What a family member labels: a geometric wedge in 3+1 or a model
/// wedge tag in the t-x plane.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum WedgeLabel {
    #[serde(rename = "wedge")]
    Geometric(Wedge),
    #[serde(rename = "tag")]
    Model(ModelWedgeTag),
}

impl WedgeLabel {
    /// The labelled region as a geometric wedge; model tags embed along
    /// the first spatial axis.
    pub fn to_wedge(&self) -> Wedge {
        match self {
            WedgeLabel::Geometric(w) => w.clone(),
            WedgeLabel::Model(t) => t.to_wedge(),
        }
    }

    pub fn approx_eq(&self, other: &WedgeLabel, tol: f64) -> bool {
        self.to_wedge().approx_eq(&other.to_wedge(), tol)
    }
}

/// Recognize a wedge as a model tag: the standard wedge along the first
/// axis (or its complement) at a planar apex.
pub fn wedge_as_model_tag(w: &Wedge, tol: f64) -> Option<ModelWedgeTag> {
    let apex = w.apex();
    if apex.0[2].abs() > tol || apex.0[3].abs() > tol {
        return None;
    }
    let planar = FourVector::new(apex.0[0], apex.0[1], 0.0, 0.0);
    let right = Wedge::standard_along_axis(1).translated(&planar);
    if w.approx_eq(&right, tol) {
        return ModelWedgeTag::right(planar).ok();
    }
    if w.approx_eq(&right.complement(), tol) {
        return ModelWedgeTag::left(planar).ok();
    }
    None
}

/// Canonical id for a synthesized model member, parseable back into a
/// tag by [`parse_model_tag_id`].
pub fn model_tag_id(tag: &ModelWedgeTag) -> String {
    let side = match tag.side {
        Side::Right => "Right",
        Side::Left => "Left",
    };
    format!("{side}@{},{}", tag.xi.0[0], tag.xi.0[1])
}

pub fn parse_model_tag_id(id: &str) -> Option<ModelWedgeTag> {
    let (side_str, rest) = id.split_once('@')?;
    let side = match side_str {
        "Right" => Side::Right,
        "Left" => Side::Left,
        _ => return None,
    };
    let (a, b) = rest.split_once(',')?;
    let xi = FourVector::new(a.parse().ok()?, b.parse().ok()?, 0.0, 0.0);
    ModelWedgeTag::new(side, xi).ok()
}

/// One entry of the net: a labelled wedge, its conjugation, and an
/// optional algebra.
#[derive(Debug, Clone)]
pub struct NetMember {
    pub id: String,
    pub label: WedgeLabel,
    pub conj: SemilinearOp,
    pub algebra: Option<FiniteVNAlgebra>,
}

/// Generative backing for model fixtures: conjugations and flows for
/// arbitrary tags, synthesized from the rapidity grid. `sign = -1` builds
/// the time-reflected convention, in which the conjugation at apex ξ
/// carries the phase of −ξ.
#[derive(Debug, Clone)]
pub struct ModelSource {
    grid: RapidityGrid,
    sign: f64,
}

impl ModelSource {
    pub fn new(grid: RapidityGrid) -> ModelSource {
        ModelSource { grid, sign: 1.0 }
    }

    pub fn time_reflected(grid: RapidityGrid) -> ModelSource {
        ModelSource { grid, sign: -1.0 }
    }

    pub fn grid(&self) -> &RapidityGrid {
        &self.grid
    }

    pub fn conj(&self, tag: &ModelWedgeTag) -> Result<SemilinearOp, CgmaError> {
        let effective = ModelWedgeTag::new(tag.side, tag.xi * self.sign)?;
        Ok(wedge_conjugation(&self.grid, &effective)?)
    }

    pub fn flow(&self, tag: &ModelWedgeTag, t: f64) -> Result<Op, CgmaError> {
        // The reflected convention conjugates every operator of the net,
        // which sends the flow about apex ξ to the flow about −ξ.
        let effective = ModelWedgeTag::new(tag.side, tag.xi * self.sign)?;
        Ok(modular_flow_model(&self.grid, &effective, t)?)
    }

    pub fn translation(&self, xi: &FourVector) -> Result<Op, CgmaError> {
        Ok(translation_rep(&self.grid, xi)?)
    }
}

/// Non-fatal observations recorded while assembling a fixture.
#[derive(Debug, Clone, Default)]
pub struct FixtureDiagnostics {
    /// Per-member residual of conj² = 1.
    pub involution: Vec<(String, f64)>,
    /// Per-member distance of conj from unitarity.
    pub antiunitarity: Vec<(String, f64)>,
    /// Members whose operator dimension differs from the fixture's.
    pub dim_mismatch: Vec<String>,
}

/// A net of wedges with conjugation data and optional algebras.
#[derive(Debug, Clone)]
pub struct NetFixture {
    members: Vec<NetMember>,
    omega: Option<Vector>,
    source: Option<ModelSource>,
    diagnostics: FixtureDiagnostics,
}

impl NetFixture {
    /// Assemble and validate a fixture. Ill-formed ids and algebra data
    /// inconsistent with its own modular theory are rejected; defects the
    /// checks are designed to detect (broken involutions, duplicated
    /// conjugations) are recorded in diagnostics and surfaced by the
    /// checks themselves.
    pub fn new(
        members: Vec<NetMember>,
        omega: Option<Vector>,
        source: Option<ModelSource>,
    ) -> Result<NetFixture, CgmaError> {
        if members.is_empty() {
            return Err(CgmaError::TooFewMembers { need: 1, have: 0 });
        }
        let mut seen = std::collections::BTreeSet::new();
        for m in &members {
            if !seen.insert(m.id.clone()) {
                return Err(CgmaError::DuplicateId(m.id.clone()));
            }
        }
        let dim = members[0].conj.dim();
        let mut diagnostics = FixtureDiagnostics::default();
        for m in &members {
            if m.conj.dim() != dim {
                diagnostics.dim_mismatch.push(m.id.clone());
                continue;
            }
            diagnostics
                .involution
                .push((m.id.clone(), m.conj.involution_residual()));
            diagnostics
                .antiunitarity
                .push((m.id.clone(), m.conj.unitarity_residual()));
        }
        // When an algebra and Omega are present, the member's conjugation
        // must be the modular conjugation of that pair.
        if let Some(om) = &omega {
            for m in &members {
                if let Some(alg) = &m.algebra {
                    let data = compute_modular(alg, om)?;
                    let residual = m.conj.distance(data.j());
                    if residual > MATCH_THRESHOLD {
                        return Err(CgmaError::InconsistentModularData {
                            id: m.id.clone(),
                            residual,
                            tol: MATCH_THRESHOLD,
                        });
                    }
                }
            }
        }
        Ok(NetFixture {
            members,
            omega,
            source,
            diagnostics,
        })
    }

    pub fn members(&self) -> &[NetMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].conj.dim()
    }

    pub fn omega(&self) -> Option<&Vector> {
        self.omega.as_ref()
    }

    pub fn source(&self) -> Option<&ModelSource> {
        self.source.as_ref()
    }

    pub fn diagnostics(&self) -> &FixtureDiagnostics {
        &self.diagnostics
    }

    pub fn member_index(&self, id: &str) -> Option<usize> {
        self.members.iter().position(|m| m.id == id)
    }

    pub fn member(&self, id: &str) -> Option<&NetMember> {
        self.member_index(id).map(|i| &self.members[i])
    }

    /// Indices of members whose label matches the wedge geometrically.
    pub fn find_label_matches(&self, wedge: &Wedge, tol: f64) -> Vec<usize> {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, m)| m.label.to_wedge().approx_eq(wedge, tol))
            .map(|(i, _)| i)
            .collect()
    }

    /// Indices of members whose conjugation is within the matching
    /// threshold of `op`.
    pub fn find_conj_matches(&self, op: &SemilinearOp, threshold: f64) -> Vec<usize> {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, m)| m.conj.distance(op) <= threshold)
            .map(|(i, _)| i)
            .collect()
    }

    /// Conjugation attached to a wedge: a family member's if one matches
    /// the label, otherwise synthesized from the model source when the
    /// wedge is tag-shaped.
    pub fn conj_for_wedge(&self, wedge: &Wedge, tol: f64) -> Option<SemilinearOp> {
        let matches = self.find_label_matches(wedge, tol);
        if let Some(&i) = matches.first() {
            return Some(self.members[i].conj.clone());
        }
        let source = self.source.as_ref()?;
        let tag = wedge_as_model_tag(wedge, tol)?;
        source.conj(&tag).ok()
    }

    /// Resolve a word id: a family member, or a canonical synthetic tag
    /// id backed by the model source.
    pub fn resolve_conj(&self, id: &str) -> Result<(WedgeLabel, SemilinearOp), CgmaError> {
        if let Some(m) = self.member(id) {
            return Ok((m.label.clone(), m.conj.clone()));
        }
        if let Some(tag) = parse_model_tag_id(id) {
            if let Some(source) = &self.source {
                return Ok((WedgeLabel::Model(tag), source.conj(&tag)?));
            }
        }
        Err(CgmaError::UnknownId(id.to_string()))
    }

    /// Modular flow of a member: derived from its algebra when present,
    /// otherwise from the model source.
    pub fn flow(&self, id: &str, t: f64) -> Result<Op, CgmaError> {
        let m = self
            .member(id)
            .ok_or_else(|| CgmaError::UnknownId(id.to_string()))?;
        if let (Some(alg), Some(om)) = (&m.algebra, &self.omega) {
            let data = compute_modular(alg, om)?;
            return Ok(data.flow(t));
        }
        if let (Some(source), WedgeLabel::Model(tag)) = (&self.source, &m.label) {
            return source.flow(tag, t);
        }
        Err(CgmaError::NoFlowData(id.to_string()))
    }
}

fn model_members(source: &ModelSource, apexes: &[FourVector]) -> Result<Vec<NetMember>, CgmaError> {
    let mut members = Vec::new();
    for (i, apex) in apexes.iter().enumerate() {
        for side in [Side::Right, Side::Left] {
            let tag = ModelWedgeTag::new(side, *apex)?;
            let prefix = match side {
                Side::Right => "R",
                Side::Left => "L",
            };
            members.push(NetMember {
                id: format!("{prefix}{i}"),
                label: WedgeLabel::Model(tag),
                conj: source.conj(&tag)?,
                algebra: None,
            });
        }
    }
    Ok(members)
}

/// The healthy model net: right and left wedges at apexes 0, ξ, 2ξ with
/// their analytic conjugations.
pub fn healthy_model_net(grid: RapidityGrid, xi: FourVector) -> Result<NetFixture, CgmaError> {
    let source = ModelSource::new(grid);
    let members = model_members(&source, &[FourVector::zero(), xi, xi * 2.0])?;
    NetFixture::new(members, None, Some(source))
}

/// The healthy net in the time-reflected convention: same wedges, with
/// every conjugation built from the reflected phase. Internally
/// consistent, but the assembled translations carry the opposite energy
/// sign.
pub fn time_reflected_model_net(
    grid: RapidityGrid,
    xi: FourVector,
) -> Result<NetFixture, CgmaError> {
    let source = ModelSource::time_reflected(grid);
    let members = model_members(&source, &[FourVector::zero(), xi, xi * 2.0])?;
    NetFixture::new(members, None, Some(source))
}

/// Sabotage: the wedge pair at apex ξ reuses the conjugation of the pair
/// at the origin, so two geometrically distinct wedge pairs carry one
/// operator.
pub fn duplicate_conjugation_net(
    grid: RapidityGrid,
    xi: FourVector,
) -> Result<NetFixture, CgmaError> {
    let source = ModelSource::new(grid);
    let mut members = model_members(&source, &[FourVector::zero(), xi])?;
    let origin_conj = members[0].conj.clone();
    for m in &mut members {
        if let WedgeLabel::Model(tag) = &m.label {
            if tag.xi.max_diff(&xi) < 1e-12 {
                m.conj = origin_conj.clone();
            }
        }
    }
    NetFixture::new(members, None, Some(source))
}

/// Sabotage: the conjugation at the origin pair is multiplied by a real
/// rotation in the first two grid coordinates, so it is antiunitary but
/// no longer an involution.
pub fn non_involutive_net(grid: RapidityGrid, xi: FourVector) -> Result<NetFixture, CgmaError> {
    let source = ModelSource::new(grid);
    let mut members = model_members(&source, &[FourVector::zero(), xi, xi * 2.0])?;
    let dim = grid.dim();
    let phi: f64 = 0.5;
    let mut v = Op::identity(dim, dim);
    v[(0, 0)] = cplx(phi.cos());
    v[(0, 1)] = cplx(-phi.sin());
    v[(1, 0)] = cplx(phi.sin());
    v[(1, 1)] = cplx(phi.cos());
    let twisted = SemilinearOp::Linear(v).compose(&SemilinearOp::conjugation(dim));
    for m in &mut members {
        if let WedgeLabel::Model(tag) = &m.label {
            if tag.xi.max_diff(&FourVector::zero()) < 1e-12 {
                m.conj = twisted.clone();
            }
        }
    }
    NetFixture::new(members, None, Some(source))
}

/// Sabotage: the pair at apex ξ carries the conjugation belonging to a
/// wedge pair at a different apex, one not in the family.
pub fn wrong_wedge_net(grid: RapidityGrid, xi: FourVector) -> Result<NetFixture, CgmaError> {
    let source = ModelSource::new(grid);
    let mut members = model_members(&source, &[FourVector::zero(), xi, xi * 2.0])?;
    let eta = ModelWedgeTag::right(xi * 0.4)?;
    let foreign = source.conj(&eta)?;
    for m in &mut members {
        if let WedgeLabel::Model(tag) = &m.label {
            if tag.xi.max_diff(&xi) < 1e-12 {
                m.conj = foreign.clone();
            }
        }
    }
    NetFixture::new(members, None, Some(source))
}

/// The finite-dimensional two-factor net: the matrix factor and its
/// commutant on C²⊗C², labelled by the standard wedge and its
/// complement, with modular data of an entangled vector.
pub fn two_factor_net() -> Result<NetFixture, CgmaError> {
    let left = crate::tomita::left_factor_algebra(2);
    let right = crate::tomita::right_factor_algebra(2);
    let omega = crate::tomita::schmidt_vector(&[2.0 / 3.0, 1.0 / 3.0]);
    let left_data = compute_modular(&left, &omega)?;
    let right_data = compute_modular(&right, &omega)?;
    let w = Wedge::standard_along_axis(1);
    let members = vec![
        NetMember {
            id: "A".into(),
            label: WedgeLabel::Geometric(w.clone()),
            conj: left_data.j().clone(),
            algebra: Some(left),
        },
        NetMember {
            id: "B".into(),
            label: WedgeLabel::Geometric(w.complement()),
            conj: right_data.j().clone(),
            algebra: Some(right),
        },
    ];
    NetFixture::new(members, Some(omega), None)
}

#[derive(Debug, Serialize, Deserialize)]
struct OperatorJson {
    antilinear: bool,
    matrix: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FamilyEntryJson {
    id: String,
    #[serde(flatten)]
    label: WedgeLabel,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelParamsJson {
    mass: f64,
    #[serde(rename = "K")]
    half_size: u32,
    h: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    time_reflected: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct FlowSampleJson {
    t: f64,
    matrix: Vec<[f64; 2]>,
}

/// On-disk fixture: family labels, conjugation matrices, and optional
/// model parameters, algebras (as generator lists), and state vector.
#[derive(Debug, Serialize, Deserialize)]
struct FixtureFileJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model: Option<ModelParamsJson>,
    family: Vec<FamilyEntryJson>,
    conjugations: BTreeMap<String, OperatorJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    flows: BTreeMap<String, Vec<FlowSampleJson>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    algebras: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<Vec<[f64; 2]>>,
}

fn matrix_to_json(m: &Op) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            out.push([z.re, z.im]);
        }
    }
    out
}

fn matrix_from_json(data: &[[f64; 2]]) -> Result<Op, CgmaError> {
    let n2 = data.len();
    let n = (n2 as f64).sqrt().round() as usize;
    if n * n != n2 {
        return Err(CgmaError::BadFixtureFile(format!(
            "matrix data of length {n2} is not square"
        )));
    }
    Ok(Op::from_fn(n, n, |r, c| {
        let [re, im] = data[r * n + c];
        nalgebra::Complex::new(re, im)
    }))
}

fn vector_from_json(data: &[[f64; 2]]) -> Vector {
    Vector::from_fn(data.len(), |i, _| {
        let [re, im] = data[i];
        nalgebra::Complex::new(re, im)
    })
}

impl NetFixture {
    /// Serialize to the fixture file schema.
    pub fn to_json(&self) -> Result<serde_json::Value, CgmaError> {
        let model = self.source.as_ref().map(|s| ModelParamsJson {
            mass: s.grid.mass(),
            half_size: s.grid.half_size(),
            h: s.grid.spacing(),
            time_reflected: s.sign < 0.0,
        });
        let family = self
            .members
            .iter()
            .map(|m| FamilyEntryJson {
                id: m.id.clone(),
                label: m.label.clone(),
            })
            .collect();
        let mut conjugations = BTreeMap::new();
        for m in &self.members {
            conjugations.insert(
                m.id.clone(),
                OperatorJson {
                    antilinear: m.conj.is_antilinear(),
                    matrix: matrix_to_json(m.conj.matrix()),
                },
            );
        }
        let mut algebras = BTreeMap::new();
        for m in &self.members {
            if let Some(alg) = &m.algebra {
                algebras.insert(
                    m.id.clone(),
                    alg.basis().iter().map(matrix_to_json).collect::<Vec<_>>(),
                );
            }
        }
        let file = FixtureFileJson {
            model,
            family,
            conjugations,
            flows: BTreeMap::new(),
            algebras,
            omega: self
                .omega
                .as_ref()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect()),
        };
        serde_json::to_value(&file).map_err(|e| CgmaError::BadFixtureFile(e.to_string()))
    }

    /// Load a fixture from the file schema.
    pub fn from_json(value: &serde_json::Value) -> Result<NetFixture, CgmaError> {
        let file: FixtureFileJson = serde_json::from_value(value.clone())
            .map_err(|e| CgmaError::BadFixtureFile(e.to_string()))?;
        let source = match file.model {
            Some(p) => {
                let grid = RapidityGrid::new(p.mass, p.half_size, p.h)?;
                Some(if p.time_reflected {
                    ModelSource::time_reflected(grid)
                } else {
                    ModelSource::new(grid)
                })
            }
            None => None,
        };
        let mut members = Vec::new();
        for entry in file.family {
            let op = file.conjugations.get(&entry.id).ok_or_else(|| {
                CgmaError::BadFixtureFile(format!("no conjugation for {:?}", entry.id))
            })?;
            let matrix = matrix_from_json(&op.matrix)?;
            let conj = if op.antilinear {
                SemilinearOp::Antilinear(matrix)
            } else {
                SemilinearOp::Linear(matrix)
            };
            let algebra = match file.algebras.get(&entry.id) {
                Some(gens) => {
                    let mats = gens
                        .iter()
                        .map(|g| matrix_from_json(g))
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(FiniteVNAlgebra::algebra_closure(&mats)?)
                }
                None => None,
            };
            members.push(NetMember {
                id: entry.id,
                label: entry.label,
                conj,
                algebra,
            });
        }
        let omega = file.omega.as_deref().map(vector_from_json);
        NetFixture::new(members, omega, source)
    }
}

/// A deterministic spread of planar directions used by sampling helpers.
pub fn planar_axis(axis: usize) -> Unit<nalgebra::Vector3<f64>> {
    let mut v = nalgebra::Vector3::zeros();
    v[axis - 1] = 1.0;
    Unit::new_unchecked(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> RapidityGrid {
        RapidityGrid::new(1.0, 8, 0.25).unwrap()
    }

    fn xi() -> FourVector {
        FourVector::new(0.3, 1.1, 0.0, 0.0)
    }

    #[test]
    fn healthy_net_has_six_members_with_clean_diagnostics() {
        let net = healthy_model_net(grid(), xi()).unwrap();
        assert_eq!(net.len(), 6);
        for (_, r) in &net.diagnostics().involution {
            assert!(*r < 1e-12);
        }
        for (_, r) in &net.diagnostics().antiunitarity {
            assert!(*r < 1e-12);
        }
        // Right/Left pairs share one conjugation, distinct apexes differ.
        let r0 = &net.member("R0").unwrap().conj;
        let l0 = &net.member("L0").unwrap().conj;
        let r1 = &net.member("R1").unwrap().conj;
        assert!(r0.distance(l0) < 1e-15);
        assert!(r0.distance(r1) > 1e-3);
    }

    #[test]
    fn sabotage_nets_show_expected_local_defects() {
        let dup = duplicate_conjugation_net(grid(), xi()).unwrap();
        let r0 = &dup.member("R0").unwrap().conj;
        let r1 = &dup.member("R1").unwrap().conj;
        assert!(r0.distance(r1) < 1e-15);

        let ninv = non_involutive_net(grid(), xi()).unwrap();
        let bad = &ninv.member("R0").unwrap().conj;
        assert!(bad.involution_residual() > 0.1);
        assert!(bad.unitarity_residual() < 1e-12);

        let wrong = wrong_wedge_net(grid(), xi()).unwrap();
        let tampered = &wrong.member("R1").unwrap().conj;
        let honest = ModelSource::new(grid())
            .conj(&ModelWedgeTag::right(xi()).unwrap())
            .unwrap();
        assert!(tampered.distance(&honest) > 1e-3);
        assert!(tampered.involution_residual() < 1e-12);
    }

    #[test]
    fn tag_ids_round_trip() {
        let tag = ModelWedgeTag::left(FourVector::new(0.15, -2.0, 0.0, 0.0)).unwrap();
        let id = model_tag_id(&tag);
        let back = parse_model_tag_id(&id).unwrap();
        assert!(back.approx_eq(&tag, 0.0));
        assert!(parse_model_tag_id("R1").is_none());
    }

    #[test]
    fn wedge_tag_recognition() {
        let tag = ModelWedgeTag::right(FourVector::new(0.4, -0.9, 0.0, 0.0)).unwrap();
        let recognized = wedge_as_model_tag(&tag.to_wedge(), 1e-9).unwrap();
        assert!(recognized.approx_eq(&tag, 1e-9));
        let left = tag.complement();
        let recognized = wedge_as_model_tag(&left.to_wedge(), 1e-9).unwrap();
        assert!(recognized.approx_eq(&left, 1e-9));
        // A rotated wedge is not tag-shaped.
        let rotated = Wedge::standard_along_axis(2);
        assert!(wedge_as_model_tag(&rotated, 1e-9).is_none());
    }

    #[test]
    fn two_factor_net_is_modular_consistent() {
        let net = two_factor_net().unwrap();
        assert_eq!(net.len(), 2);
        assert_eq!(net.dim(), 4);
        // Haag pair: the two conjugations coincide.
        let ja = &net.member("A").unwrap().conj;
        let jb = &net.member("B").unwrap().conj;
        assert!(ja.distance(jb) < 1e-10);
        // Flows exist and invert each other.
        let fa = net.flow("A", 0.7).unwrap();
        let fb = net.flow("B", 0.7).unwrap();
        assert!(crate::tomita::max_abs(&(fa * fb - Op::identity(4, 4))) < 1e-10);
    }

    #[test]
    fn fixture_json_round_trip() {
        let net = healthy_model_net(grid(), xi()).unwrap();
        let json = net.to_json().unwrap();
        let back = NetFixture::from_json(&json).unwrap();
        assert_eq!(back.len(), net.len());
        assert!(back.source().is_some());
        for (a, b) in net.members().iter().zip(back.members()) {
            assert_eq!(a.id, b.id);
            assert!(a.label.approx_eq(&b.label, 1e-12));
            assert!(a.conj.distance(&b.conj) < 1e-12);
        }

        let two = two_factor_net().unwrap();
        let json = two.to_json().unwrap();
        let back = NetFixture::from_json(&json).unwrap();
        assert!(back.omega().is_some());
        assert!(back.members()[0].algebra.is_some());
    }

    #[test]
    fn resolve_conj_family_first_then_source() {
        let net = healthy_model_net(grid(), xi()).unwrap();
        let (label, _) = net.resolve_conj("R1").unwrap();
        assert!(label.approx_eq(
            &WedgeLabel::Model(ModelWedgeTag::right(xi()).unwrap()),
            1e-12
        ));
        let synthetic = model_tag_id(&ModelWedgeTag::right(xi() * 0.5).unwrap());
        let (label, conj) = net.resolve_conj(&synthetic).unwrap();
        assert!(label.approx_eq(
            &WedgeLabel::Model(ModelWedgeTag::right(xi() * 0.5).unwrap()),
            1e-12
        ));
        assert!(conj.is_antilinear());
        assert!(matches!(
            net.resolve_conj("nope"),
            Err(CgmaError::UnknownId(_))
        ));
    }
}
