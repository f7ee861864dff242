//! Wedge regions of Minkowski space and their edge reflections.
//!
//! A wedge is the intersection of two null half-spaces,
//!
//! ```text
//! W = { x : (x - ξ)·ℓ₊ > 0  and  (x - ξ)·ℓ₋ < 0 },
//! ```
//!
//! where `ℓ₊, ℓ₋` are future-pointing null rays scaled to unit time
//! component and `ξ` is an apex on the edge. The standard wedge along the
//! 1-axis, `{x : x₁ > |x₀|}`, has `ℓ₊ = (1, -1, 0, 0)` and
//! `ℓ₋ = (1, 1, 0, 0)`.
//!
//! The edge of `W` is the 2-plane where both defining forms vanish;
//! translations along it leave `W` unchanged, so apexes are stored in a
//! canonical form with zero Euclidean component along the edge plane. Each
//! wedge carries an edge reflection: the unique proper, non-orthochronous
//! Poincare involution fixing the edge pointwise and exchanging `W` with
//! its causal complement. Products of two edge reflections generate
//! rotations, boosts, and translations; every proper Poincare element
//! decomposes into a short word of edge reflections.

use nalgebra::{Matrix4, Unit, Vector3, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feasibility::{solve, Feasibility, Inequality};
use crate::geometry::{
    metric, minkowski_inner, FourVector, LorentzClass, PoincareElement, TOL_GEO,
};

#[derive(Debug, Error)]
pub enum WedgeError {
    #[error("ray is not null within tolerance (Minkowski square {square:.3e})")]
    NotNull { square: f64 },
    #[error("ray must point to the future (time component {t:.3e})")]
    NotFutureDirected { t: f64 },
    #[error("ray has vanishing spatial part")]
    DegenerateRay,
    #[error("wedge rays are too close to parallel (cosine {cos:.6})")]
    ParallelRays { cos: f64 },
    #[error("only proper Poincare elements decompose into edge reflections (got {class})")]
    ImproperElement { class: LorentzClass },
    #[error("reflection word residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    WordResidual { residual: f64, tol: f64 },
    #[error("four-vector has a non-finite component")]
    NonFinite,
}

/// Spatial ray directions with cosine above this are rejected: parallel
/// rays give `ℓ₊·ℓ₋ = 0` and a degenerate wedge. Anti-parallel rays are
/// fine (that is the standard wedge shape).
pub const RAY_ANGLE_COS_MAX: f64 = 1.0 - 1e-9;

/// A future-pointing null direction, canonically scaled to time component 1.
///
/// Stored as its spatial unit vector `n̂`, so the full ray is `(1, n̂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", try_from = "[f64; 4]")]
pub struct LightRay {
    n: Vector3<f64>,
}

impl LightRay {
    /// Ray along the spatial direction `dir` (normalized internally).
    pub fn from_spatial(dir: Unit<Vector3<f64>>) -> Self {
        LightRay {
            n: dir.into_inner(),
        }
    }

    /// Canonicalize an arbitrary future-pointing null vector.
    pub fn from_null(v: &FourVector) -> Result<Self, WedgeError> {
        Self::from_null_with_tol(v, TOL_GEO)
    }

    pub fn from_null_with_tol(v: &FourVector, tol: f64) -> Result<Self, WedgeError> {
        if !v.is_finite() {
            return Err(WedgeError::NonFinite);
        }
        let square = minkowski_inner(v, v);
        let scale = v.0.norm_squared().max(1.0);
        if square.abs() > tol * scale {
            return Err(WedgeError::NotNull { square });
        }
        if v.t() <= 0.0 {
            return Err(WedgeError::NotFutureDirected { t: v.t() });
        }
        let s = v.spatial();
        let n = s.norm();
        if n <= 0.0 {
            return Err(WedgeError::DegenerateRay);
        }
        Ok(LightRay { n: s / n })
    }

    /// Spatial unit direction `n̂`.
    pub fn direction(&self) -> Vector3<f64> {
        self.n
    }

    /// The canonical null four-vector `(1, n̂)`.
    pub fn vector(&self) -> FourVector {
        FourVector::from_parts(1.0, self.n)
    }

    /// Projective equality of canonically scaled rays.
    pub fn approx_eq(&self, other: &LightRay, tol: f64) -> bool {
        (self.n - other.n).amax() <= tol
    }
}

impl From<LightRay> for [f64; 4] {
    fn from(r: LightRay) -> [f64; 4] {
        r.vector().into()
    }
}

impl TryFrom<[f64; 4]> for LightRay {
    type Error = WedgeError;
    fn try_from(a: [f64; 4]) -> Result<Self, WedgeError> {
        let v = FourVector::try_from(a).map_err(|_| WedgeError::NonFinite)?;
        LightRay::from_null(&v)
    }
}

/// The edge of a wedge: a spacelike 2-plane given by a point and an
/// orthonormal (Euclidean) spanning pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgePlane {
    pub point: FourVector,
    pub span: [FourVector; 2],
}

impl EdgePlane {
    /// Whether `other` describes the same 2-plane (same point modulo span,
    /// same spanned subspace).
    pub fn approx_eq(&self, other: &EdgePlane, tol: f64) -> bool {
        let in_span = |v: &Vector4<f64>, span: &[FourVector; 2]| -> bool {
            let r = v - span[0].0 * span[0].0.dot(v) - span[1].0 * span[1].0.dot(v);
            r.amax() <= tol
        };
        in_span(&self.span[0].0, &other.span)
            && in_span(&self.span[1].0, &other.span)
            && in_span(&(self.point.0 - other.point.0), &other.span)
    }
}

/// Serialized wedge form: two canonical rays and the canonical apex.
#[derive(Serialize, Deserialize)]
struct WedgeRaw {
    ell_plus: [f64; 4],
    ell_minus: [f64; 4],
    xi: [f64; 4],
}

/// An open wedge region, stored in canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "WedgeRaw", try_from = "WedgeRaw")]
pub struct Wedge {
    ell_plus: LightRay,
    ell_minus: LightRay,
    xi: FourVector,
}

impl From<Wedge> for WedgeRaw {
    fn from(w: Wedge) -> WedgeRaw {
        WedgeRaw {
            ell_plus: w.ell_plus.into(),
            ell_minus: w.ell_minus.into(),
            xi: w.xi.into(),
        }
    }
}

impl TryFrom<WedgeRaw> for Wedge {
    type Error = WedgeError;
    fn try_from(raw: WedgeRaw) -> Result<Self, WedgeError> {
        Wedge::new(
            LightRay::try_from(raw.ell_plus)?,
            LightRay::try_from(raw.ell_minus)?,
            FourVector::try_from(raw.xi).map_err(|_| WedgeError::NonFinite)?,
        )
    }
}

impl Wedge {
    /// Build a wedge from two rays and any apex on its edge; the apex is
    /// reduced to canonical form (zero component along the edge plane).
    pub fn new(
        ell_plus: LightRay,
        ell_minus: LightRay,
        xi: FourVector,
    ) -> Result<Self, WedgeError> {
        if !xi.is_finite() {
            return Err(WedgeError::NonFinite);
        }
        let cos = ell_plus.direction().dot(&ell_minus.direction());
        if cos > RAY_ANGLE_COS_MAX {
            return Err(WedgeError::ParallelRays { cos });
        }
        let mut w = Wedge {
            ell_plus,
            ell_minus,
            xi,
        };
        w.xi = w.canonical_apex(&xi);
        Ok(w)
    }

    /// The standard wedge `{x : x⃗·n̂ > |x₀|}` opening along `dir`, apex at
    /// the origin: `ℓ₊ = (1, -n̂)`, `ℓ₋ = (1, n̂)`.
    pub fn standard_along(dir: Unit<Vector3<f64>>) -> Wedge {
        let n = dir.into_inner();
        Wedge {
            ell_plus: LightRay { n: -n },
            ell_minus: LightRay { n },
            xi: FourVector::zero(),
        }
    }

    /// Standard wedge along spatial axis `i` (1, 2 or 3).
    pub fn standard_along_axis(axis: usize) -> Wedge {
        let mut n = Vector3::zeros();
        n[axis.saturating_sub(1).min(2)] = 1.0;
        Wedge::standard_along(Unit::new_unchecked(n))
    }

    /// Translate the whole wedge by `v`.
    pub fn translated(&self, v: &FourVector) -> Wedge {
        let mut w = self.clone();
        w.xi = w.canonical_apex(&(self.xi + *v));
        w
    }

    pub fn ell_plus(&self) -> &LightRay {
        &self.ell_plus
    }

    pub fn ell_minus(&self) -> &LightRay {
        &self.ell_minus
    }

    /// Canonical apex (no component along the edge plane).
    pub fn apex(&self) -> FourVector {
        self.xi
    }

    /// Orthonormal (Euclidean) basis of the edge plane
    /// `{v : v·ℓ₊ = v·ℓ₋ = 0}`.
    fn edge_span(&self) -> [Vector4<f64>; 2] {
        let g = metric();
        let d1 = g * self.ell_plus.vector().0;
        let d2 = g * self.ell_minus.vector().0;
        let u1 = d1.normalize();
        let mut u2 = d2 - u1 * u1.dot(&d2);
        u2.normalize_mut();

        // Deterministic completion of {u1, u2} to a full frame: take the
        // two standard basis vectors with the largest residuals.
        let residual = |v: Vector4<f64>, taken: &[Vector4<f64>]| -> Vector4<f64> {
            let mut r = v;
            for t in taken {
                r -= t * t.dot(&r);
            }
            r
        };
        let mut best: Option<(f64, Vector4<f64>)> = None;
        for i in 0..4 {
            let mut e = Vector4::zeros();
            e[i] = 1.0;
            let r = residual(e, &[u1, u2]);
            let n = r.norm();
            if best.as_ref().map_or(true, |(bn, _)| n > *bn) {
                best = Some((n, r));
            }
        }
        let v1 = best.unwrap().1.normalize();
        let mut best2: Option<(f64, Vector4<f64>)> = None;
        for i in 0..4 {
            let mut e = Vector4::zeros();
            e[i] = 1.0;
            let r = residual(e, &[u1, u2, v1]);
            let n = r.norm();
            if best2.as_ref().map_or(true, |(bn, _)| n > *bn) {
                best2 = Some((n, r));
            }
        }
        let v2 = best2.unwrap().1.normalize();
        [v1, v2]
    }

    /// Euclidean projection of `p` off the edge plane directions.
    fn canonical_apex(&self, p: &FourVector) -> FourVector {
        let [v1, v2] = self.edge_span();
        FourVector(p.0 - v1 * v1.dot(&p.0) - v2 * v2.dot(&p.0))
    }

    /// The edge 2-plane through the apex.
    pub fn edge(&self) -> EdgePlane {
        let [v1, v2] = self.edge_span();
        EdgePlane {
            point: self.xi,
            span: [FourVector(v1), FourVector(v2)],
        }
    }

    /// Strict interior membership.
    pub fn contains(&self, x: &FourVector) -> bool {
        let d = *x - self.xi;
        minkowski_inner(&d, &self.ell_plus.vector()) > 0.0
            && minkowski_inner(&d, &self.ell_minus.vector()) < 0.0
    }

    /// The causal complement: same edge, rays exchanged.
    pub fn complement(&self) -> Wedge {
        Wedge {
            ell_plus: self.ell_minus,
            ell_minus: self.ell_plus,
            xi: self.xi,
        }
    }

    /// Image under a Poincare transformation, re-canonicalized.
    ///
    /// A non-orthochronous map sends future-pointing rays to the past, so
    /// the transformed rays are negated and their roles swap to restore
    /// canonical form.
    pub fn transform(&self, g: &PoincareElement) -> Result<Wedge, WedgeError> {
        let lp = g.apply_linear(&self.ell_plus.vector());
        let lm = g.apply_linear(&self.ell_minus.vector());
        let xi = g.apply(&self.xi);
        if lp.t() > 0.0 {
            Wedge::new(LightRay::from_null(&lp)?, LightRay::from_null(&lm)?, xi)
        } else {
            Wedge::new(
                LightRay::from_null(&(-lm))?,
                LightRay::from_null(&(-lp))?,
                xi,
            )
        }
    }

    /// Same wedge within tolerance: canonical rays and canonical apexes
    /// agree entry-wise.
    pub fn approx_eq(&self, other: &Wedge, tol: f64) -> bool {
        self.ell_plus.approx_eq(&other.ell_plus, tol)
            && self.ell_minus.approx_eq(&other.ell_minus, tol)
            && self.xi.approx_eq(&other.xi, tol)
    }

    /// Whether `self ⊆ other` (up to closure on the boundary).
    ///
    /// Two wedges are nested only when their ray pairs coincide; inclusion
    /// then reduces to the relative apex lying in the closed wedge at the
    /// origin: `δ·ℓ₊ ≥ 0` and `δ·ℓ₋ ≤ 0` for `δ = ξ_self - ξ_other`.
    pub fn included(&self, other: &Wedge, tol: f64) -> bool {
        if !self.ell_plus.approx_eq(&other.ell_plus, tol)
            || !self.ell_minus.approx_eq(&other.ell_minus, tol)
        {
            return false;
        }
        let d = self.xi - other.xi;
        minkowski_inner(&d, &other.ell_plus.vector()) >= -tol
            && minkowski_inner(&d, &other.ell_minus.vector()) <= tol
    }

    /// The four half-space constraints of this wedge as strict inequalities
    /// over the point coordinates.
    fn constraints(&self, strict: bool) -> Vec<Inequality> {
        let g = metric();
        let mut out = Vec::with_capacity(2);
        for (ray, sign) in [(&self.ell_plus, 1.0), (&self.ell_minus, -1.0)] {
            // sign·(x - ξ)·ℓ > 0 ⟺ (sign·gℓ)·x > sign·(ξ·ℓ) in Euclidean form.
            let gl = g * ray.vector().0;
            let coeffs = vec![sign * gl[0], sign * gl[1], sign * gl[2], sign * gl[3]];
            let rhs = sign * minkowski_inner(&self.xi, &ray.vector());
            out.push(Inequality::new(coeffs, rhs, strict));
        }
        out
    }

    /// Whether the two open wedges have empty intersection, decided by
    /// Fourier–Motzkin elimination on their four defining inequalities.
    pub fn disjoint(&self, other: &Wedge) -> bool {
        let mut sys = self.constraints(true);
        sys.extend(other.constraints(true));
        !solve(&sys, 4).is_feasible()
    }

    /// A point in the open intersection, if one exists.
    pub fn intersection_witness(&self, other: &Wedge) -> Option<FourVector> {
        let mut sys = self.constraints(true);
        sys.extend(other.constraints(true));
        match solve(&sys, 4) {
            Feasibility::Feasible(x) => Some(FourVector::new(x[0], x[1], x[2], x[3])),
            Feasibility::Empty => None,
        }
    }

    /// Whether the closures of the two wedges intersect.
    pub fn closures_intersect(&self, other: &Wedge) -> bool {
        let mut sys = self.constraints(false);
        sys.extend(other.constraints(false));
        solve(&sys, 4).is_feasible()
    }

    /// The edge reflection: the proper, non-orthochronous involution fixing
    /// the edge pointwise and mapping the wedge onto its complement.
    ///
    /// Its homogeneous part is `-1` on the timelike plane spanned by the
    /// rays and `+1` on the edge plane:
    /// `Λ_W = 1 - 2(ℓ₊ (gℓ₋)ᵀ + ℓ₋ (gℓ₊)ᵀ)/(ℓ₊·ℓ₋)`.
    pub fn edge_reflection(&self) -> PoincareElement {
        let g = metric();
        let lp = self.ell_plus.vector().0;
        let lm = self.ell_minus.vector().0;
        let denom = minkowski_inner(&self.ell_plus.vector(), &self.ell_minus.vector());
        let proj = (lp * (g * lm).transpose() + lm * (g * lp).transpose()) / denom;
        let lambda = nalgebra::Matrix4::identity() - proj * 2.0;
        let a = FourVector(self.xi.0 - lambda * self.xi.0);
        PoincareElement::new_with_tol(lambda, a, 1e-9)
            .expect("edge reflection of a valid wedge is a Lorentz map")
    }

    /// Translation produced by reflecting about this wedge shifted by `ξ`
    /// and then about this wedge: `ξ - Λ_W ξ`.
    pub fn reflection_translation(&self, xi: &FourVector) -> FourVector {
        let lambda = self.edge_reflection();
        *xi - lambda.apply_linear(xi)
    }
}

/// Decompose a proper Poincare element into edge reflections.
///
/// Returns wedges `[V₁, …, Vₙ]`, n ≤ 10, whose edge reflections compose
/// (left to right) to `g`. Improper elements are rejected. The word is
/// assembled from at most one standard-wedge reflection (restoring
/// orthochrony), one two-reflection translation, one two-reflection boost,
/// and one two-reflection rotation, and is verified against `g` before
/// being returned.
pub fn reflection_word(g: &PoincareElement, tol: f64) -> Result<Vec<Wedge>, WedgeError> {
    let class = g.classify();
    if !class.proper {
        return Err(WedgeError::ImproperElement { class });
    }

    let mut word: Vec<Wedge> = Vec::new();
    let mut rem = g.clone();

    if !class.orthochronous {
        let w1 = Wedge::standard_along_axis(1);
        rem = w1.edge_reflection().compose(&rem);
        word.push(w1);
    }

    // Split off the translation: rem = T_a ∘ (Λ, 0).
    let a = rem.translation();
    if a.0.amax() > 0.0 {
        word.extend(translation_word(&a));
    }
    let lorentz = PoincareElement::new_with_tol(*rem.lorentz(), FourVector::zero(), 1e-8)
        .expect("homogeneous part stays Lorentz");

    // Boost factor from the image of the time axis: Λe₀ = (cosh χ, sinh χ·d̂).
    let col0 = lorentz.apply_linear(&FourVector::new(1.0, 0.0, 0.0, 0.0));
    let mut rotation = lorentz.clone();
    if col0.t() > 1.0 + 1e-14 {
        let chi = col0.t().acosh();
        let axis = Unit::new_normalize(col0.spatial());
        let boost = PoincareElement::boost(axis, chi);
        word.extend(boost_word(axis, chi)?);
        rotation = boost.inverse().compose(&lorentz);
    }

    // The remainder fixes e₀ up to round-off: a spatial rotation. The
    // axis is read off the quaternion form via the direct branch-based
    // conversion; it stays well defined at angle π, where the skew part
    // of the matrix vanishes and iterative refinement stalls.
    let block = nalgebra::Matrix3::from_fn(|i, j| rotation.lorentz()[(i + 1, j + 1)]);
    let rot = nalgebra::Rotation3::from_matrix_unchecked(block);
    let quat = nalgebra::UnitQuaternion::from_rotation_matrix(&rot);
    if let Some(axis) = quat.axis() {
        let angle = quat.angle();
        if angle.abs() > 1e-13 {
            word.extend(rotation_word(axis, angle));
        }
    }

    // Verify the word before handing it out.
    let composed = compose_reflections(&word);
    let residual = composed.max_diff(g);
    if residual > tol {
        return Err(WedgeError::WordResidual { residual, tol });
    }
    Ok(word)
}

/// Compose the edge reflections of `word` left to right.
pub fn compose_reflections(word: &[Wedge]) -> PoincareElement {
    word.iter().fold(PoincareElement::identity(), |acc, w| {
        acc.compose(&w.edge_reflection())
    })
}

/// The proper orthochronous element carrying this wedge onto the
/// standard wedge: a rotation aligning the ray bisector frame, a boost
/// along the bisector opening the rays to anti-parallel, then a
/// translation of the apex to the origin.
pub fn standardizing_transform(w: &Wedge) -> PoincareElement {
    let n_plus = w.ell_plus().direction();
    let n_minus = w.ell_minus().direction();

    // Frame: ray difference to the first axis, bisector to the second.
    let diff = Unit::new_normalize(n_minus - n_plus);
    let sum = n_plus + n_minus;
    let bisector = if sum.norm() > 1e-12 {
        Unit::new_normalize(sum)
    } else {
        pick_orthogonal(&diff)
    };
    let third = diff.cross(&bisector);
    let mut rot = Matrix4::identity();
    for c in 0..3 {
        rot[(1, 1 + c)] = diff[c];
        rot[(2, 1 + c)] = bisector[c];
        rot[(3, 1 + c)] = third[c];
    }

    // Rays sit at (∓sin β, cos β, 0) with β the half-opening angle; the
    // backward boost along the bisector with tanh χ = cos β flattens them
    // to (∓1, 0, 0).
    let cos_beta = n_plus.dot(&bisector);
    let chi = cos_beta.atanh();
    let e2 = Unit::new_unchecked(Vector3::new(0.0, 1.0, 0.0));
    let boost = PoincareElement::boost(e2, -chi);

    let lambda = boost.lorentz() * rot;
    let moved_apex = FourVector(lambda * w.apex().0);
    PoincareElement::new_with_tol(lambda, -moved_apex, 1e-9)
        .expect("rotation and boost compose to a Lorentz map")
}

/// A proper orthochronous Poincaré element mapping wedge `a` onto wedge
/// `b` (rays to rays, apex to apex).
pub fn transporter(a: &Wedge, b: &Wedge) -> PoincareElement {
    standardizing_transform(b)
        .inverse()
        .compose(&standardizing_transform(a))
}

/// Two reflections realizing the pure translation by `a`: about the wedge
/// along `â` shifted by `a/2`, then about the unshifted wedge. Works
/// because `a` lies in the reflected timelike plane of that wedge.
fn translation_word(a: &FourVector) -> Vec<Wedge> {
    let s = a.spatial();
    let dir = if s.norm() > 0.0 {
        Unit::new_normalize(s)
    } else {
        Unit::new_unchecked(Vector3::new(1.0, 0.0, 0.0))
    };
    let base = Wedge::standard_along(dir);
    vec![base.translated(&a.scale(0.5)), base]
}

/// Two reflections realizing the rotation by `angle` about `axis`: wedges
/// along spatial directions separated by half the angle in the plane
/// normal to `axis`.
fn rotation_word(axis: Unit<Vector3<f64>>, angle: f64) -> Vec<Wedge> {
    let b = pick_orthogonal(&axis);
    let half = nalgebra::Rotation3::from_axis_angle(&axis, 0.5 * angle);
    let a_dir = Unit::new_normalize(half * b.into_inner());
    vec![Wedge::standard_along(a_dir), Wedge::standard_along(b)]
}

/// Two reflections realizing the boost with rapidity `chi` along `axis`:
/// a wedge orthogonal to the boost axis, pre-transformed by the
/// half-rapidity boost, followed by the untransformed wedge.
fn boost_word(axis: Unit<Vector3<f64>>, chi: f64) -> Result<Vec<Wedge>, WedgeError> {
    let f = pick_orthogonal(&axis);
    let base = Wedge::standard_along(f);
    let half = PoincareElement::boost(axis, 0.5 * chi);
    Ok(vec![base.transform(&half)?, base])
}

/// A deterministic unit vector orthogonal to `axis`.
fn pick_orthogonal(axis: &Unit<Vector3<f64>>) -> Unit<Vector3<f64>> {
    let n = axis.into_inner();
    let candidate = if n[0].abs() <= n[1].abs() && n[0].abs() <= n[2].abs() {
        Vector3::new(1.0, 0.0, 0.0)
    } else if n[1].abs() <= n[2].abs() {
        Vector3::new(0.0, 1.0, 0.0)
    } else {
        Vector3::new(0.0, 0.0, 1.0)
    };
    Unit::new_normalize(candidate - n * n.dot(&candidate))
}
