//! Exactly solvable one-particle model on a rapidity grid.
//!
//! The model lives in 1+1 dimensions, where a boost acts on rapidity by
//! translation. On the grid θ_k = k·h (k = −K..K) every operator of
//! interest is a diagonal phase, a shift, or a composition of the two, so
//! wedge conjugations, translations, and modular flows satisfy their
//! defining relations to machine precision instead of up to a
//! discretization error. Vectors carry an implicit embedding into 3+1
//! dimensions as (x⁰, x¹, 0, 0); the model wedge tags convert to the
//! corresponding geometric wedges along the first axis.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::FourVector;
use crate::tomita::{cplx, Op, SemilinearOp, C64};
use crate::wedges::Wedge;

/// Tolerance for the model's exact operator identities.
pub const MODEL_TOL: f64 = 1e-12;

/// Commensurability tolerance for boost and flow parameters.
const COMMENSURATE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model parameters: {reason}")]
    BadParameters { reason: String },
    #[error("rapidity index {k} outside grid range -{half_size}..={half_size}")]
    IndexOutOfRange { k: i64, half_size: i64 },
    #[error("vector has components off the t-x plane: x2 = {}, x3 = {}", xi.0[2], xi.0[3])]
    NonPlanarVector { xi: FourVector },
    #[error(
        "rapidity {chi} is not a grid multiple of spacing {spacing}; nearest commensurate values are {lower} and {upper}"
    )]
    NonCommensurateRapidity {
        chi: f64,
        spacing: f64,
        lower: f64,
        upper: f64,
    },
    #[error(
        "flow time {t} puts 2πt off the rapidity grid of spacing {spacing}; nearest commensurate times are {lower} and {upper}"
    )]
    NonCommensurateTime {
        t: f64,
        spacing: f64,
        lower: f64,
        upper: f64,
    },
}

/// Symmetric rapidity grid θ_k = k·h for k = −K..K carrying mass-shell
/// data p(θ) = (m cosh θ, m sinh θ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RapidityGrid {
    mass: f64,
    half_size: u32,
    spacing: f64,
}

impl RapidityGrid {
    pub fn new(mass: f64, half_size: u32, spacing: f64) -> Result<RapidityGrid, ModelError> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(ModelError::BadParameters {
                reason: format!("mass {mass} must be positive"),
            });
        }
        if half_size < 1 {
            return Err(ModelError::BadParameters {
                reason: "grid half-size must be at least 1".into(),
            });
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(ModelError::BadParameters {
                reason: format!("spacing {spacing} must be positive"),
            });
        }
        Ok(RapidityGrid {
            mass,
            half_size,
            spacing,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn half_size(&self) -> u32 {
        self.half_size
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Dimension of the model space, 2K+1.
    pub fn dim(&self) -> usize {
        2 * self.half_size as usize + 1
    }

    /// Rapidity at signed index k ∈ −K..=K.
    pub fn theta(&self, k: i64) -> Result<f64, ModelError> {
        let half = self.half_size as i64;
        if k.abs() > half {
            return Err(ModelError::IndexOutOfRange { k, half_size: half });
        }
        Ok(k as f64 * self.spacing)
    }

    /// Rapidity at storage index 0..dim.
    pub fn theta_at(&self, idx: usize) -> f64 {
        (idx as i64 - self.half_size as i64) as f64 * self.spacing
    }

    /// All rapidities in storage order.
    pub fn thetas(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.theta_at(i)).collect()
    }
}

/// Mass-shell momentum at grid index k, embedded as (p⁰, p¹, 0, 0).
pub fn momentum(grid: &RapidityGrid, k: i64) -> Result<FourVector, ModelError> {
    let theta = grid.theta(k)?;
    Ok(momentum_at_rapidity(grid.mass(), theta))
}

pub fn momentum_at_rapidity(mass: f64, theta: f64) -> FourVector {
    FourVector::new(mass * theta.cosh(), mass * theta.sinh(), 0.0, 0.0)
}

/// Extract the (x⁰, x¹) components, rejecting vectors that leave the
/// model plane.
fn planar(xi: &FourVector) -> Result<(f64, f64), ModelError> {
    if xi.0[2] != 0.0 || xi.0[3] != 0.0 {
        return Err(ModelError::NonPlanarVector { xi: *xi });
    }
    Ok((xi.0[0], xi.0[1]))
}

/// Diagonal translation unitary U(ξ) with entries e^{i p(θ_k)·ξ}.
pub fn translation_rep(grid: &RapidityGrid, xi: &FourVector) -> Result<Op, ModelError> {
    let (t, x) = planar(xi)?;
    let dim = grid.dim();
    let mut u = Op::zeros(dim, dim);
    for idx in 0..dim {
        let theta = grid.theta_at(idx);
        let phase = grid.mass() * (theta.cosh() * t - theta.sinh() * x);
        u[(idx, idx)] = C64::new(phase.cos(), phase.sin());
    }
    Ok(u)
}

/// A grid boost: a shift on the rapidity axis, together with how many
/// basis directions fell off the grid boundary.
#[derive(Debug, Clone)]
pub struct BoostRep {
    pub matrix: Op,
    /// Signed shift in grid steps, χ/h.
    pub steps: i64,
    /// Number of basis vectors whose image left the grid.
    pub dropped: usize,
}

impl BoostRep {
    /// Storage indices whose image stays on the grid.
    pub fn retained_sources(&self) -> std::ops::Range<usize> {
        let dim = self.matrix.nrows();
        if self.steps >= 0 {
            0..dim - self.steps as usize
        } else {
            (-self.steps) as usize..dim
        }
    }
}

fn nearest_multiples(value: f64, unit: f64) -> (f64, f64) {
    let q = value / unit;
    (q.floor() * unit, q.ceil() * unit)
}

/// Shift operator implementing the boost θ_k ↦ θ_k + χ for a
/// grid-commensurate rapidity χ.
pub fn boost_rep(grid: &RapidityGrid, chi: f64) -> Result<BoostRep, ModelError> {
    let ratio = chi / grid.spacing();
    let steps = ratio.round();
    if (ratio - steps).abs() > COMMENSURATE_TOL {
        let (lower, upper) = nearest_multiples(chi, grid.spacing());
        return Err(ModelError::NonCommensurateRapidity {
            chi,
            spacing: grid.spacing(),
            lower,
            upper,
        });
    }
    let steps = steps as i64;
    let dim = grid.dim();
    let mut matrix = Op::zeros(dim, dim);
    let mut dropped = 0usize;
    for src in 0..dim {
        let dst = src as i64 + steps;
        if dst >= 0 && (dst as usize) < dim {
            matrix[(dst as usize, src)] = cplx(1.0);
        } else {
            dropped += 1;
        }
    }
    Ok(BoostRep {
        matrix,
        steps,
        dropped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Right,
    Left,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

/// A model wedge: the right or left wedge in the t-x plane with apex ξ.
/// Left(ξ) labels the causal complement of Right(ξ); both share one
/// modular conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelWedgeTag {
    pub side: Side,
    pub xi: FourVector,
}

impl ModelWedgeTag {
    pub fn new(side: Side, xi: FourVector) -> Result<ModelWedgeTag, ModelError> {
        planar(&xi)?;
        Ok(ModelWedgeTag { side, xi })
    }

    pub fn right(xi: FourVector) -> Result<ModelWedgeTag, ModelError> {
        ModelWedgeTag::new(Side::Right, xi)
    }

    pub fn left(xi: FourVector) -> Result<ModelWedgeTag, ModelError> {
        ModelWedgeTag::new(Side::Left, xi)
    }

    /// The causal complement: same apex, opposite side.
    pub fn complement(&self) -> ModelWedgeTag {
        ModelWedgeTag {
            side: self.side.opposite(),
            xi: self.xi,
        }
    }

    /// Translate the wedge by a planar vector.
    pub fn translated(&self, a: &FourVector) -> Result<ModelWedgeTag, ModelError> {
        ModelWedgeTag::new(self.side, self.xi + *a)
    }

    /// Image under the point reflection x ↦ 2c − x, which swaps sides and
    /// reflects the apex. This is the geometric action of the modular
    /// conjugation attached to the wedge pair at apex c.
    pub fn reflected_through(&self, c: &FourVector) -> Result<ModelWedgeTag, ModelError> {
        ModelWedgeTag::new(self.side.opposite(), c.scale(2.0) - self.xi)
    }

    /// The 3+1-dimensional wedge this tag stands for: the standard wedge
    /// along the first axis (or its complement) translated to the apex.
    pub fn to_wedge(&self) -> Wedge {
        let base = Wedge::standard_along_axis(1);
        let shifted = base.translated(&self.xi);
        match self.side {
            Side::Right => shifted,
            Side::Left => shifted.complement(),
        }
    }

    pub fn approx_eq(&self, other: &ModelWedgeTag, tol: f64) -> bool {
        self.side == other.side && self.xi.max_diff(&other.xi) <= tol
    }
}

/// Modular conjugation of the wedge pair at apex ξ: the PCT reflection
/// conjugated to the apex, U(ξ)·J₀·U(−ξ), which works out to the
/// antilinear operator with matrix U(2ξ). Left and Right tags at the same
/// apex return the same operator.
pub fn wedge_conjugation(
    grid: &RapidityGrid,
    tag: &ModelWedgeTag,
) -> Result<SemilinearOp, ModelError> {
    let doubled = tag.xi.scale(2.0);
    Ok(SemilinearOp::Antilinear(translation_rep(grid, &doubled)?))
}

/// Modular flow of the tagged wedge at a grid-commensurate time:
/// Δ^{it} for Right(ξ) is the boost by −2πt conjugated to the apex, and
/// the Left flow is its inverse.
pub fn modular_flow_model(
    grid: &RapidityGrid,
    tag: &ModelWedgeTag,
    t: f64,
) -> Result<Op, ModelError> {
    let ratio = 2.0 * std::f64::consts::PI * t / grid.spacing();
    if (ratio - ratio.round()).abs() > COMMENSURATE_TOL {
        let unit = grid.spacing() / (2.0 * std::f64::consts::PI);
        let (lower, upper) = nearest_multiples(t, unit);
        return Err(ModelError::NonCommensurateTime {
            t,
            spacing: grid.spacing(),
            lower,
            upper,
        });
    }
    let chi = match tag.side {
        Side::Right => -2.0 * std::f64::consts::PI * t,
        Side::Left => 2.0 * std::f64::consts::PI * t,
    };
    let boost = boost_rep(grid, chi)?;
    let u = translation_rep(grid, &tag.xi)?;
    let u_inv = translation_rep(grid, &(-tag.xi))?;
    Ok(crate::tomita::op_mul(
        &crate::tomita::op_mul(&u, &boost.matrix),
        &u_inv,
    ))
}

/// Lipschitz constant for the apex dependence of the wedge conjugation:
/// ‖(J_{tξ} − J_0)ψ‖ ≤ C·|t|·‖ψ‖ with C = 2·max_k |p(θ_k)·ξ|. The factor
/// 2 is there because the conjugation at apex tξ carries the doubled
/// phase U(2tξ), and the bound is attained in the small-t limit on
/// vectors concentrated at the extremal grid point.
pub fn conjugation_shift_bound(grid: &RapidityGrid, xi: &FourVector) -> Result<f64, ModelError> {
    let (t, x) = planar(xi)?;
    let mut worst = 0.0f64;
    for idx in 0..grid.dim() {
        let theta = grid.theta_at(idx);
        let dot = grid.mass() * (theta.cosh() * t - theta.sinh() * x);
        worst = worst.max(dot.abs());
    }
    Ok(2.0 * worst)
}

/// The assembled model: grid plus the translation, conjugation, and flow
/// maps, with the analytic translation representation available for
/// cross-checks.
#[derive(Debug, Clone)]
pub struct ModelFixture {
    grid: RapidityGrid,
}

impl ModelFixture {
    pub fn grid(&self) -> &RapidityGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn conj(&self, tag: &ModelWedgeTag) -> Result<SemilinearOp, ModelError> {
        wedge_conjugation(&self.grid, tag)
    }

    pub fn flow(&self, tag: &ModelWedgeTag, t: f64) -> Result<Op, ModelError> {
        modular_flow_model(&self.grid, tag, t)
    }

    pub fn u_analytic(&self, xi: &FourVector) -> Result<Op, ModelError> {
        translation_rep(&self.grid, xi)
    }

    pub fn boost(&self, chi: f64) -> Result<BoostRep, ModelError> {
        boost_rep(&self.grid, chi)
    }
}

/// Build the model fixture, validating parameters.
pub fn build_model(mass: f64, half_size: u32, spacing: f64) -> Result<ModelFixture, ModelError> {
    Ok(ModelFixture {
        grid: RapidityGrid::new(mass, half_size, spacing)?,
    })
}
