//! Minkowski four-vectors and the Poincare group.
//!
//! Conventions used throughout the crate:
//! * metric signature `(+, -, -, -)`, so `u·v = u₀v₀ - u⃗·v⃗`;
//! * a Poincare element `(Λ, a)` acts as `x ↦ Λx + a`;
//! * composition is `(Λ₁, a₁)(Λ₂, a₂) = (Λ₁Λ₂, Λ₁a₂ + a₁)`;
//! * Lorentz matrices split into four classes by the sign of `det Λ`
//!   (proper/improper) and of `Λ₀₀` (orthochronous or not).

use nalgebra::{Matrix4, Rotation3, Unit, Vector3, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default tolerance for geometric residuals (metric preservation, wedge
/// equality, reflection round-trips).
pub const TOL_GEO: f64 = 1e-10;

/// Default tolerance for operator-level residuals in the modular modules.
pub const TOL_OP: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("four-vector has a non-finite component")]
    NonFinite,
    #[error("matrix does not preserve the metric (residual {residual:.3e} > tol {tol:.3e})")]
    NotLorentz { residual: f64, tol: f64 },
    #[error("matrix determinant {det:.6} is not ±1")]
    BadDeterminant { det: f64 },
}

/// Diagonal Minkowski metric `g = diag(1, -1, -1, -1)`.
pub fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// A point or direction in Minkowski space, components `(x₀, x₁, x₂, x₃)`.
///
/// Serialized as a flat 4-array. All components must be finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", try_from = "[f64; 4]")]
pub struct FourVector(pub Vector4<f64>);

impl FourVector {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        FourVector(Vector4::new(x0, x1, x2, x3))
    }

    pub fn zero() -> Self {
        FourVector(Vector4::zeros())
    }

    /// Time component `x₀`.
    pub fn t(&self) -> f64 {
        self.0[0]
    }

    /// Spatial part `(x₁, x₂, x₃)`.
    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.0[1], self.0[2], self.0[3])
    }

    /// Build from a time component and a spatial 3-vector.
    pub fn from_parts(t: f64, s: Vector3<f64>) -> Self {
        FourVector(Vector4::new(t, s[0], s[1], s[2]))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Largest absolute component difference to `other`.
    pub fn max_diff(&self, other: &FourVector) -> f64 {
        (self.0 - other.0).amax()
    }

    pub fn approx_eq(&self, other: &FourVector, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    pub fn scale(&self, s: f64) -> FourVector {
        FourVector(self.0 * s)
    }
}

impl std::ops::Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector(self.0 + rhs.0)
    }
}

impl std::ops::Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector(self.0 - rhs.0)
    }
}

impl std::ops::Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector(-self.0)
    }
}

impl std::ops::Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector(self.0 * s)
    }
}

impl From<FourVector> for [f64; 4] {
    fn from(v: FourVector) -> [f64; 4] {
        [v.0[0], v.0[1], v.0[2], v.0[3]]
    }
}

impl TryFrom<[f64; 4]> for FourVector {
    type Error = GeometryError;
    fn try_from(a: [f64; 4]) -> Result<Self, GeometryError> {
        let v = FourVector(Vector4::from_column_slice(&a));
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GeometryError::NonFinite)
        }
    }
}

/// Minkowski inner product `u₀v₀ - u⃗·v⃗`.
pub fn minkowski_inner(u: &FourVector, v: &FourVector) -> f64 {
    u.0[0] * v.0[0] - u.0[1] * v.0[1] - u.0[2] * v.0[2] - u.0[3] * v.0[3]
}

/// How far `m` is from preserving the metric: `max |mᵀ g m - g|`.
pub fn lorentz_residual(m: &Matrix4<f64>) -> f64 {
    let g = metric();
    (m.transpose() * g * m - g).amax()
}

/// Connected-component data of a Lorentz matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LorentzClass {
    /// `det Λ = +1`.
    pub proper: bool,
    /// `Λ₀₀ ≥ 1` (preserves the direction of time).
    pub orthochronous: bool,
}

impl std::fmt::Display for LorentzClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}, {}",
            if self.proper { "proper" } else { "improper" },
            if self.orthochronous {
                "orthochronous"
            } else {
                "non-orthochronous"
            }
        )
    }
}

/// Serialized form of a Poincare element: row-major 4x4 matrix plus a
/// 4-component translation.
#[derive(Serialize, Deserialize)]
struct PoincareRaw {
    lambda: Vec<f64>,
    a: [f64; 4],
}

/// An affine isometry of Minkowski space, `x ↦ Λx + a`.
///
/// The matrix is validated against the metric-preservation residual on
/// construction; use [`PoincareElement::new_with_tol`] to widen the gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PoincareRaw", try_from = "PoincareRaw")]
pub struct PoincareElement {
    lambda: Matrix4<f64>,
    a: FourVector,
}

impl From<PoincareElement> for PoincareRaw {
    fn from(p: PoincareElement) -> PoincareRaw {
        // Row-major flattening.
        let mut lambda = Vec::with_capacity(16);
        for i in 0..4 {
            for j in 0..4 {
                lambda.push(p.lambda[(i, j)]);
            }
        }
        PoincareRaw {
            lambda,
            a: p.a.into(),
        }
    }
}

impl TryFrom<PoincareRaw> for PoincareElement {
    type Error = String;
    fn try_from(raw: PoincareRaw) -> Result<Self, String> {
        if raw.lambda.len() != 16 {
            return Err(format!(
                "expected 16 matrix entries, got {}",
                raw.lambda.len()
            ));
        }
        let m = Matrix4::from_row_slice(&raw.lambda);
        let a = FourVector::try_from(raw.a).map_err(|e| e.to_string())?;
        PoincareElement::new(m, a).map_err(|e| e.to_string())
    }
}

impl PoincareElement {
    /// Validate `lambda` against the default tolerance and build `(Λ, a)`.
    pub fn new(lambda: Matrix4<f64>, a: FourVector) -> Result<Self, GeometryError> {
        Self::new_with_tol(lambda, a, TOL_GEO)
    }

    pub fn new_with_tol(
        lambda: Matrix4<f64>,
        a: FourVector,
        tol: f64,
    ) -> Result<Self, GeometryError> {
        if !a.is_finite() || lambda.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let residual = lorentz_residual(&lambda);
        if residual > tol {
            return Err(GeometryError::NotLorentz { residual, tol });
        }
        Ok(PoincareElement { lambda, a })
    }

    pub fn identity() -> Self {
        PoincareElement {
            lambda: Matrix4::identity(),
            a: FourVector::zero(),
        }
    }

    pub fn pure_translation(a: FourVector) -> Self {
        PoincareElement {
            lambda: Matrix4::identity(),
            a,
        }
    }

    /// Homogeneous part `Λ`.
    pub fn lorentz(&self) -> &Matrix4<f64> {
        &self.lambda
    }

    /// Translation part `a`.
    pub fn translation(&self) -> FourVector {
        self.a
    }

    /// Spatial rotation about `axis` by `angle` (radians), embedded with
    /// unit time component.
    pub fn rotation(axis: Unit<Vector3<f64>>, angle: f64) -> Self {
        let r = Rotation3::from_axis_angle(&axis, angle);
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(r.matrix());
        PoincareElement {
            lambda: m,
            a: FourVector::zero(),
        }
    }

    /// Pure boost along the spatial direction `axis` with rapidity `chi`.
    pub fn boost(axis: Unit<Vector3<f64>>, chi: f64) -> Self {
        let n = axis.into_inner();
        let (ch, sh) = (chi.cosh(), chi.sinh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = ch;
        for i in 0..3 {
            m[(0, i + 1)] = sh * n[i];
            m[(i + 1, 0)] = sh * n[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] = if i == j { 1.0 } else { 0.0 } + (ch - 1.0) * n[i] * n[j];
            }
        }
        PoincareElement {
            lambda: m,
            a: FourVector::zero(),
        }
    }

    /// Apply to a point: `Λx + a`.
    pub fn apply(&self, x: &FourVector) -> FourVector {
        FourVector(self.lambda * x.0 + self.a.0)
    }

    /// Apply only the homogeneous part (for directions).
    pub fn apply_linear(&self, x: &FourVector) -> FourVector {
        FourVector(self.lambda * x.0)
    }

    /// Group product: `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &PoincareElement) -> PoincareElement {
        PoincareElement {
            lambda: self.lambda * other.lambda,
            a: FourVector(self.lambda * other.a.0 + self.a.0),
        }
    }

    pub fn inverse(&self) -> PoincareElement {
        // Λ⁻¹ = g Λᵀ g for a Lorentz matrix; cheaper and more stable than
        // a generic matrix inverse.
        let g = metric();
        let inv = g * self.lambda.transpose() * g;
        PoincareElement {
            lambda: inv,
            a: FourVector(-(inv * self.a.0)),
        }
    }

    /// Which of the four Lorentz components the homogeneous part lies in.
    pub fn classify(&self) -> LorentzClass {
        LorentzClass {
            proper: self.lambda.determinant() > 0.0,
            orthochronous: self.lambda[(0, 0)] > 0.0,
        }
    }

    /// Largest entry-wise deviation from `other` over matrix and translation.
    pub fn max_diff(&self, other: &PoincareElement) -> f64 {
        let dm = (self.lambda - other.lambda).amax();
        dm.max(self.a.max_diff(&other.a))
    }

    pub fn approx_eq(&self, other: &PoincareElement, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&PoincareElement::identity(), tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_inner_product_signs() {
        let u = FourVector::new(1.0, 2.0, 3.0, 4.0);
        let v = FourVector::new(5.0, 6.0, 7.0, 8.0);
        assert_eq!(minkowski_inner(&u, &v), 5.0 - 12.0 - 21.0 - 32.0);
    }

    #[test]
    fn boost_preserves_metric_and_classifies() {
        let b = PoincareElement::boost(Unit::new_normalize(Vector3::new(1.0, 2.0, -0.5)), 1.3);
        assert!(lorentz_residual(b.lorentz()) < 1e-12);
        assert_eq!(
            b.classify(),
            LorentzClass {
                proper: true,
                orthochronous: true
            }
        );
    }

    #[test]
    fn rotation_times_inverse_is_identity() {
        let r = PoincareElement::rotation(Unit::new_normalize(Vector3::new(0.0, 1.0, 1.0)), 0.7);
        let p = r.compose(&r.inverse());
        assert!(p.is_identity(1e-12));
    }

    #[test]
    fn compose_matches_pointwise_application() {
        let r = PoincareElement::rotation(Unit::new_normalize(Vector3::new(1.0, 0.0, 1.0)), -0.4);
        let b = PoincareElement::boost(Unit::new_normalize(Vector3::new(0.0, 0.0, 1.0)), 0.8);
        let t = PoincareElement::pure_translation(FourVector::new(1.0, -2.0, 0.5, 0.25));
        let g = t.compose(&b).compose(&r);
        let x = FourVector::new(0.3, 1.0, -1.0, 2.0);
        let lhs = g.apply(&x);
        let rhs = t.apply(&b.apply(&r.apply(&x)));
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn total_reflection_is_proper_non_orthochronous() {
        let m = Matrix4::from_diagonal(&Vector4::new(-1.0, -1.0, 1.0, 1.0));
        let p = PoincareElement::new(m, FourVector::zero()).unwrap();
        assert_eq!(
            p.classify(),
            LorentzClass {
                proper: true,
                orthochronous: false
            }
        );
    }

    #[test]
    fn rejects_non_lorentz_matrix() {
        let m = Matrix4::identity() * 2.0;
        let err = PoincareElement::new(m, FourVector::zero()).unwrap_err();
        assert!(matches!(err, GeometryError::NotLorentz { .. }));
    }

    #[test]
    fn serde_round_trip_row_major() {
        let b = PoincareElement::boost(Unit::new_normalize(Vector3::new(1.0, 0.0, 0.0)), 0.5)
            .compose(&PoincareElement::pure_translation(FourVector::new(
                1.0, 2.0, 3.0, 4.0,
            )));
        let s = serde_json::to_string(&b).unwrap();
        let back: PoincareElement = serde_json::from_str(&s).unwrap();
        assert!(b.approx_eq(&back, 0.0));
        // Row-major order: the (0,1) entry of a 1-axis boost is sinh χ and
        // must appear as the second number.
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let l = v["lambda"].as_array().unwrap();
        assert!((l[1].as_f64().unwrap() - 0.5f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn four_vector_rejects_nan() {
        let r = FourVector::try_from([f64::NAN, 0.0, 0.0, 0.0]);
        assert_eq!(r.unwrap_err(), GeometryError::NonFinite);
    }
}
