//! Modular data for matrix algebras with a cyclic separating vector.
//!
//! Operators live on a fixed orthonormal basis of `C^dim`. Antilinear
//! operators are stored as a matrix `M` acting by `ψ ↦ M·conj(ψ)`; the
//! composition and adjoint rules for this convention are frozen in
//! [`SemilinearOp`]. The modular data of a pair `(A, Ω)` is obtained from
//! the antilinear map `S: aΩ ↦ a*Ω`: `Δ = S*S` and `J = S Δ^{-1/2}`, so
//! that `J` is an antiunitary involution fixing `Ω`, `Δ` is positive with
//! `ΔΩ = Ω`, conjugation by `J` maps the algebra onto its commutant, and
//! `Δ^{it}` implements the modular flow.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use thiserror::Error;

use crate::sampling::rng_for;

pub type C64 = Complex<f64>;
/// A linear operator in the fixed basis.
pub type Op = DMatrix<C64>;
pub type Vector = DVector<C64>;

/// Condition-number ceiling for modular operators; worse-conditioned
/// fixtures are rejected instead of producing silently degraded data.
pub const CONDITION_BOUND: f64 = 1e8;

/// Span-membership threshold used during basis orthonormalization.
const SPAN_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum TomitaError {
    #[error("operator is {got_rows}x{got_cols}, expected square of dimension {expect}")]
    DimensionMismatch {
        expect: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("zero or non-finite vector")]
    BadVector,
    #[error("vector is not cyclic for the algebra (orbit rank {rank} < dimension {dim})")]
    NotCyclic { rank: usize, dim: usize },
    #[error("vector is not separating for the algebra")]
    NotSeparating,
    #[error("modular operator condition number {cond:.3e} exceeds bound {bound:.3e}")]
    IllConditioned { cond: f64, bound: f64 },
    #[error("transport precondition failed: {check} (residual {residual:.3e})")]
    TransportPrecondition { check: &'static str, residual: f64 },
}

pub fn cplx(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn op_identity(dim: usize) -> Op {
    Op::identity(dim, dim)
}

/// Largest entry magnitude.
pub fn max_abs(m: &Op) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hilbert–Schmidt inner product tr(a† b).
pub fn hs_inner(a: &Op, b: &Op) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Spectral norm (largest singular value). Exact for small matrices;
/// estimated by seeded power iteration on large ones, which is accurate
/// far beyond the thresholds it is compared against.
pub fn spectral_norm(m: &Op) -> f64 {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return 0.0;
    }
    if is_diagonal(m) {
        return (0..r).map(|i| m[(i, i)].norm()).fold(0.0, f64::max);
    }
    if r.max(c) <= 64 {
        return m.clone().svd(false, false).singular_values[0];
    }
    let mut rng = rng_for(0xC0FFEE);
    let mut v = Vector::from_fn(c, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    v /= cplx(v.norm());
    let mut estimate = 0.0;
    for _ in 0..120 {
        let w = m.adjoint() * (m * &v);
        let n = w.norm();
        if n == 0.0 {
            return 0.0;
        }
        estimate = n.sqrt();
        v = w / cplx(n);
    }
    estimate
}

/// Distance of `u` from being unitary.
pub fn unitarity_residual(u: &Op) -> f64 {
    max_abs(&(op_mul(u, &u.adjoint()) - op_identity(u.nrows())))
}

fn is_diagonal(m: &Op) -> bool {
    let (r, c) = m.shape();
    if r != c {
        return false;
    }
    for j in 0..c {
        for i in 0..r {
            if i != j && m[(i, j)] != C64::new(0.0, 0.0) {
                return false;
            }
        }
    }
    true
}

fn single_entry_rows(m: &Op) -> Option<Vec<Option<(usize, C64)>>> {
    let (r, c) = m.shape();
    let mut rows: Vec<Option<(usize, C64)>> = vec![None; r];
    for i in 0..r {
        for j in 0..c {
            let v = m[(i, j)];
            if v != C64::new(0.0, 0.0) {
                if rows[i].is_some() {
                    return None;
                }
                rows[i] = Some((j, v));
            }
        }
    }
    Some(rows)
}

fn single_entry_cols(m: &Op) -> Option<Vec<Option<(usize, C64)>>> {
    let (r, c) = m.shape();
    let mut cols: Vec<Option<(usize, C64)>> = vec![None; c];
    for j in 0..c {
        for i in 0..r {
            let v = m[(i, j)];
            if v != C64::new(0.0, 0.0) {
                if cols[j].is_some() {
                    return None;
                }
                cols[j] = Some((i, v));
            }
        }
    }
    Some(cols)
}

/// Matrix product with fast paths for diagonal factors and for factors
/// with at most one nonzero entry per row (left factor) or per column
/// (right factor). Each fast path skips only terms that are exactly
/// zero and accumulates at most one term per output entry, so for
/// finite inputs the result is bit-identical to the dense product.
pub fn op_mul(a: &Op, b: &Op) -> Op {
    if a.ncols() == b.nrows() && a.nrows() == a.ncols() && is_diagonal(a) {
        let mut out = b.clone();
        for i in 0..out.nrows() {
            let d = a[(i, i)];
            for j in 0..out.ncols() {
                out[(i, j)] *= d;
            }
        }
        return out;
    }
    if a.ncols() == b.nrows() && b.nrows() == b.ncols() && is_diagonal(b) {
        let mut out = a.clone();
        for j in 0..out.ncols() {
            let d = b[(j, j)];
            for i in 0..out.nrows() {
                out[(i, j)] *= d;
            }
        }
        return out;
    }
    if a.ncols() == b.nrows() {
        if let Some(rows) = single_entry_rows(a) {
            let mut out = Op::zeros(a.nrows(), b.ncols());
            for (i, entry) in rows.iter().enumerate() {
                if let Some((k, v)) = entry {
                    for j in 0..b.ncols() {
                        out[(i, j)] = *v * b[(*k, j)];
                    }
                }
            }
            return out;
        }
        if let Some(cols) = single_entry_cols(b) {
            let mut out = Op::zeros(a.nrows(), b.ncols());
            for (j, entry) in cols.iter().enumerate() {
                if let Some((k, v)) = entry {
                    for i in 0..a.nrows() {
                        out[(i, j)] = a[(i, *k)] * *v;
                    }
                }
            }
            return out;
        }
    }
    a * b
}

/// A linear or antilinear operator on the fixed basis; the antilinear
/// variant acts by `ψ ↦ M·conj(ψ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SemilinearOp {
    Linear(Op),
    Antilinear(Op),
}

impl SemilinearOp {
    pub fn identity(dim: usize) -> Self {
        SemilinearOp::Linear(op_identity(dim))
    }

    /// Plain componentwise conjugation.
    pub fn conjugation(dim: usize) -> Self {
        SemilinearOp::Antilinear(op_identity(dim))
    }

    pub fn matrix(&self) -> &Op {
        match self {
            SemilinearOp::Linear(m) | SemilinearOp::Antilinear(m) => m,
        }
    }

    pub fn is_antilinear(&self) -> bool {
        matches!(self, SemilinearOp::Antilinear(_))
    }

    pub fn dim(&self) -> usize {
        self.matrix().nrows()
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        match self {
            SemilinearOp::Linear(m) => m * v,
            SemilinearOp::Antilinear(m) => m * v.conjugate(),
        }
    }

    /// Composition `self ∘ other`; the conjugation bookkeeping follows the
    /// frozen matrix rules for each linearity combination.
    pub fn compose(&self, other: &SemilinearOp) -> SemilinearOp {
        use SemilinearOp::*;
        match (self, other) {
            (Linear(a), Linear(b)) => Linear(op_mul(a, b)),
            (Linear(a), Antilinear(b)) => Antilinear(op_mul(a, b)),
            (Antilinear(a), Linear(b)) => Antilinear(op_mul(a, &b.conjugate())),
            (Antilinear(a), Antilinear(b)) => Linear(op_mul(a, &b.conjugate())),
        }
    }

    /// Adjoint; for an antilinear operator (with respect to
    /// `⟨T*φ, ψ⟩ = ⟨Tψ, φ⟩`) the matrix is the plain transpose.
    pub fn adjoint(&self) -> SemilinearOp {
        match self {
            SemilinearOp::Linear(m) => SemilinearOp::Linear(m.adjoint()),
            SemilinearOp::Antilinear(m) => SemilinearOp::Antilinear(m.transpose()),
        }
    }

    /// Inverse of a (anti)unitary operator.
    pub fn unitary_inverse(&self) -> SemilinearOp {
        self.adjoint()
    }

    /// Conjugation `self ∘ x ∘ self⁻¹` for (anti)unitary `self`.
    pub fn conjugate_op(&self, x: &SemilinearOp) -> SemilinearOp {
        self.compose(x).compose(&self.unitary_inverse())
    }

    /// Spectral-norm distance; infinite for mismatched kinds or shapes.
    pub fn distance(&self, other: &SemilinearOp) -> f64 {
        if self.is_antilinear() != other.is_antilinear() || self.dim() != other.dim() {
            return f64::INFINITY;
        }
        spectral_norm(&(self.matrix() - other.matrix()))
    }

    /// Residual of `self ∘ self = 1`, meaningful for candidate involutions.
    pub fn involution_residual(&self) -> f64 {
        match self.compose(self) {
            SemilinearOp::Linear(m) => max_abs(&(m - op_identity(self.dim()))),
            SemilinearOp::Antilinear(_) => unreachable!("self-composition is linear"),
        }
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(self.matrix())
    }
}

/// A unital *-subalgebra of the dim×dim matrices, stored as a
/// Hilbert–Schmidt-orthonormal basis of its linear span.
#[derive(Debug, Clone)]
pub struct FiniteVNAlgebra {
    dim: usize,
    basis: Vec<Op>,
}

/// Orthonormalize `ops` against `basis` (modified Gram–Schmidt in the HS
/// inner product), appending the directions that stick out.
fn absorb(basis: &mut Vec<Op>, ops: impl IntoIterator<Item = Op>) -> usize {
    let mut added = 0;
    for op in ops {
        let mut r = op;
        for b in basis.iter() {
            let c = hs_inner(b, &r);
            r -= b * c;
        }
        // A second pass keeps orthogonality tight for near-dependent input.
        for b in basis.iter() {
            let c = hs_inner(b, &r);
            r -= b * c;
        }
        let n = r.norm();
        if n > SPAN_EPS {
            basis.push(r / cplx(n));
            added += 1;
        }
    }
    added
}

impl FiniteVNAlgebra {
    /// The smallest unital *-algebra containing the generators.
    pub fn algebra_closure(generators: &[Op]) -> Result<FiniteVNAlgebra, TomitaError> {
        let dim = generators
            .first()
            .ok_or(TomitaError::EmptyGenerators)?
            .nrows();
        for g in generators {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(TomitaError::DimensionMismatch {
                    expect: dim,
                    got_rows: g.nrows(),
                    got_cols: g.ncols(),
                });
            }
        }
        let mut basis = Vec::new();
        absorb(&mut basis, [op_identity(dim)]);
        absorb(
            &mut basis,
            generators.iter().flat_map(|g| [g.clone(), g.adjoint()]),
        );
        loop {
            let products: Vec<Op> = basis
                .iter()
                .flat_map(|a| basis.iter().map(move |b| a * b))
                .collect();
            let grew = absorb(&mut basis, products) > 0;
            let adjoints: Vec<Op> = basis.iter().map(|a| a.adjoint()).collect();
            let grew = absorb(&mut basis, adjoints) > 0 || grew;
            if !grew {
                break;
            }
        }
        Ok(FiniteVNAlgebra { dim, basis })
    }

    /// Wrap an already HS-orthonormal, *-closed basis (internal paths).
    fn from_orthonormal(dim: usize, basis: Vec<Op>) -> FiniteVNAlgebra {
        FiniteVNAlgebra { dim, basis }
    }

    /// Dimension of the underlying Hilbert space.
    pub fn space_dim(&self) -> usize {
        self.dim
    }

    /// Linear dimension of the algebra.
    pub fn algebra_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Op] {
        &self.basis
    }

    /// Distance of `op` from the linear span of the algebra.
    pub fn span_residual(&self, op: &Op) -> f64 {
        let mut r = op.clone();
        for b in &self.basis {
            let c = hs_inner(b, &r);
            r -= b * c;
        }
        r.norm()
    }

    /// Max span residual of the other algebra's basis in this one.
    pub fn contains_span(&self, other: &FiniteVNAlgebra) -> f64 {
        other
            .basis
            .iter()
            .map(|b| self.span_residual(b))
            .fold(0.0, f64::max)
    }

    /// Symmetric span distance (mutual containment residual).
    pub fn span_distance(&self, other: &FiniteVNAlgebra) -> f64 {
        self.contains_span(other).max(other.contains_span(self))
    }

    /// The commutant: all matrices commuting with every basis element.
    ///
    /// Computed as the kernel of the positive map T(X) = Σ_B ad_B*(ad_B(X))
    /// with ad_B(X) = XB − BX. In column-major vectorization ad_B acts as
    /// Bᵀ⊗1 − 1⊗B, so T assembles from Kronecker products and one Hermitian
    /// eigenproblem of size d² recovers the kernel. Exact commutant
    /// directions sit at the eigenvalue round-off floor while the smallest
    /// genuine commutation defect stays at the scale of the basis, so a
    /// relative cut separates them cleanly.
    pub fn commutant(&self) -> FiniteVNAlgebra {
        let d = self.dim;
        let d2 = d * d;
        let id = op_identity(d);
        let mut t = DMatrix::<C64>::zeros(d2, d2);
        for b in &self.basis {
            let bt = b.transpose();
            let bc = b.conjugate();
            let badj = b.adjoint();
            t += (&bc * &bt).kronecker(&id) + id.kronecker(&(&badj * b))
                - bc.kronecker(b)
                - bt.kronecker(&badj);
        }
        let t = (&t + t.adjoint()) * cplx(0.5);
        let eig = t.symmetric_eigen();
        let scale = eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |a, &b| a.max(b))
            .max(1.0);
        let mut members = Vec::new();
        for (i, &l) in eig.eigenvalues.iter().enumerate() {
            if l <= 1e-12 * scale {
                let col = eig.eigenvectors.column(i);
                members.push(Op::from_fn(d, d, |r, c| col[c * d + r]));
            }
        }
        let mut ortho = Vec::new();
        absorb(&mut ortho, [op_identity(d)]);
        absorb(&mut ortho, members);
        FiniteVNAlgebra::from_orthonormal(d, ortho)
    }

    /// Intersection of the two algebras' linear spans (an algebra again
    /// when both inputs are *-algebras).
    pub fn intersection(&self, other: &FiniteVNAlgebra) -> FiniteVNAlgebra {
        assert_eq!(self.dim, other.dim, "algebras on different spaces");
        let d = self.dim;
        let d2 = d * d;
        let (ka, kb) = (self.basis.len(), other.basis.len());
        // Null vectors of [A | -B] give Σ α_i a_i = Σ β_j b_j.
        let mut sys = DMatrix::<C64>::zeros(d2, ka + kb);
        for (c, b) in self.basis.iter().enumerate() {
            for (r, entry) in b.iter().enumerate() {
                sys[(r, c)] = *entry;
            }
        }
        for (c, b) in other.basis.iter().enumerate() {
            for (r, entry) in b.iter().enumerate() {
                sys[(r, ka + c)] = -*entry;
            }
        }
        let svd = sys.clone().svd(false, true);
        let v_t = svd.v_t.as_ref().unwrap();
        let sigma_max = svd
            .singular_values
            .iter()
            .fold(0.0f64, |a, &b| a.max(b))
            .max(1.0);
        let mut members = Vec::new();
        for (i, _) in svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= 1e-10 * sigma_max)
        {
            let row = v_t.row(i);
            let mut m = Op::zeros(d, d);
            for (j, b) in self.basis.iter().enumerate() {
                m += b * row[j];
            }
            members.push(m);
        }
        // Ranks below the combined count also hide in trailing rows of V^T
        // when the system is wide; scan all rows with tiny residual instead.
        if v_t.nrows() > svd.singular_values.len() {
            for i in svd.singular_values.len()..v_t.nrows() {
                let row = v_t.row(i);
                let mut m = Op::zeros(d, d);
                for (j, b) in self.basis.iter().enumerate() {
                    m += b * row[j];
                }
                members.push(m);
            }
        }
        let mut ortho = Vec::new();
        absorb(&mut ortho, members);
        FiniteVNAlgebra::from_orthonormal(d, ortho)
    }

    /// Whether Ω is cyclic (orbît spans) and separating (orbit of the
    /// commutant spans) for the algebra.
    pub fn is_cyclic_separating(&self, omega: &Vector) -> Result<(bool, bool), TomitaError> {
        if omega.norm() == 0.0 || omega.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(TomitaError::BadVector);
        }
        let cyclic = self.orbit_rank(omega) == self.dim;
        let separating = self.commutant().orbit_rank(omega) == self.dim;
        Ok((cyclic, separating))
    }

    fn orbit_rank(&self, omega: &Vector) -> usize {
        let mut m = DMatrix::<C64>::zeros(self.dim, self.basis.len());
        for (c, b) in self.basis.iter().enumerate() {
            m.set_column(c, &(b * omega));
        }
        let sv = m.svd(false, false).singular_values;
        let top = sv.iter().fold(0.0f64, |a, &b| a.max(b)).max(1e-300);
        sv.iter().filter(|&&s| s > 1e-10 * top).count()
    }

    /// Image algebra under conjugation by a linear unitary.
    pub fn conjugated_by(&self, u: &Op) -> FiniteVNAlgebra {
        let mut ortho = Vec::new();
        absorb(&mut ortho, self.basis.iter().map(|b| u * b * u.adjoint()));
        FiniteVNAlgebra::from_orthonormal(self.dim, ortho)
    }

    /// Image algebra under conjugation by a semilinear unitary; for an
    /// antiunitary J this is the map a ↦ J a J⁻¹.
    pub fn conjugated_by_semilinear(&self, j: &SemilinearOp) -> FiniteVNAlgebra {
        let mut ortho = Vec::new();
        absorb(
            &mut ortho,
            self.basis
                .iter()
                .map(|b| match j.conjugate_op(&SemilinearOp::Linear(b.clone())) {
                    SemilinearOp::Linear(m) => m,
                    SemilinearOp::Antilinear(_) => unreachable!("J a J⁻¹ is linear"),
                }),
        );
        FiniteVNAlgebra::from_orthonormal(self.dim, ortho)
    }
}

/// Modular data of a pair (algebra, cyclic separating vector).
#[derive(Debug, Clone)]
pub struct ModularData {
    j: SemilinearOp,
    delta: Op,
    eigenvalues: Vec<f64>,
    eigenvectors: Op,
    omega: Vector,
}

impl ModularData {
    /// The modular conjugation J (antiunitary involution).
    pub fn j(&self) -> &SemilinearOp {
        &self.j
    }

    /// The modular operator Δ (positive, invertible).
    pub fn delta(&self) -> &Op {
        &self.delta
    }

    pub fn omega(&self) -> &Vector {
        &self.omega
    }

    /// Eigenvalues of Δ in ascending order.
    pub fn delta_spectrum(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    /// Δ^{it} (unitary modular flow).
    pub fn flow(&self, t: f64) -> Op {
        self.power(C64::new(0.0, t))
    }

    /// Δ^{z} via the eigendecomposition.
    pub fn power(&self, z: C64) -> Op {
        let dim = self.delta.nrows();
        let mut diag = DMatrix::<C64>::zeros(dim, dim);
        for (i, l) in self.eigenvalues.iter().enumerate() {
            diag[(i, i)] = (z * l.ln()).exp();
        }
        &self.eigenvectors * diag * self.eigenvectors.adjoint()
    }
}

/// Compute modular data from the closure of S: aΩ ↦ a*Ω.
pub fn compute_modular(
    algebra: &FiniteVNAlgebra,
    omega: &Vector,
) -> Result<ModularData, TomitaError> {
    let dim = algebra.space_dim();
    if omega.len() != dim {
        return Err(TomitaError::DimensionMismatch {
            expect: dim,
            got_rows: omega.len(),
            got_cols: 1,
        });
    }
    let (cyclic, separating) = algebra.is_cyclic_separating(omega)?;
    if !cyclic {
        return Err(TomitaError::NotCyclic {
            rank: algebra.orbit_rank(omega),
            dim,
        });
    }
    if !separating {
        return Err(TomitaError::NotSeparating);
    }
    // Cyclic and separating force algebra_dim = dim, so the image matrix
    // X of the basis orbit is square and invertible.
    let k = algebra.algebra_dim();
    let mut x = DMatrix::<C64>::zeros(dim, k);
    let mut y = DMatrix::<C64>::zeros(dim, k);
    for (c, b) in algebra.basis().iter().enumerate() {
        x.set_column(c, &(b * omega));
        y.set_column(c, &(b.adjoint() * omega));
    }
    // S ψ = M_S conj(ψ) with M_S conj(X) = Y.
    let m_s = x
        .conjugate()
        .transpose()
        .lu()
        .solve(&y.transpose())
        .ok_or(TomitaError::NotCyclic { rank: 0, dim })?
        .transpose();
    let s = SemilinearOp::Antilinear(m_s.clone());

    // Δ = S*S, Hermitized before eigendecomposition.
    let delta_raw = match s.adjoint().compose(&s) {
        SemilinearOp::Linear(m) => m,
        SemilinearOp::Antilinear(_) => unreachable!(),
    };
    let delta = (&delta_raw + delta_raw.adjoint()) * cplx(0.5);
    let eig = delta.clone().symmetric_eigen();
    let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let min = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    if !(min > 0.0) || max / min > CONDITION_BOUND {
        return Err(TomitaError::IllConditioned {
            cond: if min > 0.0 { max / min } else { f64::INFINITY },
            bound: CONDITION_BOUND,
        });
    }
    let eigenvectors = eig.eigenvectors;

    // J = S Δ^{-1/2}.
    let mut inv_sqrt_diag = DMatrix::<C64>::zeros(dim, dim);
    for (i, l) in eigenvalues.iter().enumerate() {
        inv_sqrt_diag[(i, i)] = cplx(1.0 / l.sqrt());
    }
    let inv_sqrt = &eigenvectors * inv_sqrt_diag * eigenvectors.adjoint();
    let j = s.compose(&SemilinearOp::Linear(inv_sqrt));

    Ok(ModularData {
        j,
        delta,
        eigenvalues,
        eigenvectors,
        omega: omega.clone(),
    })
}

/// Residuals of the Tomita theorem statements for given data.
#[derive(Debug, Clone)]
pub struct TomitaReport {
    /// Span distance of J A J from the commutant of A.
    pub jmj_commutant: f64,
    /// Worst residual of Δ^{it} A Δ^{-it} ⊆ A over the sampled t.
    pub flow_invariance: f64,
    pub j_fixes_omega: f64,
    pub delta_fixes_omega: f64,
    /// Worst residual of Δ^{1/2} aΩ = J a*Ω over the basis.
    pub half_power_exchange: f64,
    pub j_involution: f64,
    pub j_antiunitarity: f64,
    /// Worst residual of ⟨Ω, a Δ b Ω⟩ = ⟨Ω, b a Ω⟩ over basis pairs.
    pub kms_exchange: f64,
}

impl TomitaReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.jmj_commutant,
            self.flow_invariance,
            self.j_fixes_omega,
            self.delta_fixes_omega,
            self.half_power_exchange,
            self.j_involution,
            self.j_antiunitarity,
            self.kms_exchange,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

/// Evaluate every Tomita-theorem residual for (A, data) at the given flow
/// times.
pub fn verify_tomita(
    algebra: &FiniteVNAlgebra,
    data: &ModularData,
    flow_times: &[f64],
) -> TomitaReport {
    let commutant = algebra.commutant();
    let jmj = algebra.conjugated_by_semilinear(data.j());
    let jmj_commutant = jmj.span_distance(&commutant);

    let mut flow_invariance = 0.0f64;
    for &t in flow_times {
        let u = data.flow(t);
        let ud = u.adjoint();
        for b in algebra.basis() {
            flow_invariance = flow_invariance.max(algebra.span_residual(&(&u * b * &ud)));
        }
    }

    let omega = data.omega();
    let j_fixes_omega = (data.j().apply(omega) - omega).norm();
    let delta_fixes_omega = (data.delta() * omega - omega).norm();

    let half = data.power(cplx(0.5));
    let mut half_power_exchange = 0.0f64;
    for b in algebra.basis() {
        let lhs = &half * (b * omega);
        let rhs = data.j().apply(&(b.adjoint() * omega));
        half_power_exchange = half_power_exchange.max((lhs - rhs).norm());
    }

    let mut kms_exchange = 0.0f64;
    for a in algebra.basis() {
        for b in algebra.basis() {
            let lhs = omega.dotc(&(a * (data.delta() * (b * omega))));
            let rhs = omega.dotc(&(b * (a * omega)));
            kms_exchange = kms_exchange.max((lhs - rhs).norm());
        }
    }

    TomitaReport {
        jmj_commutant,
        flow_invariance,
        j_fixes_omega,
        delta_fixes_omega,
        half_power_exchange,
        j_involution: data.j().involution_residual(),
        j_antiunitarity: data.j().unitarity_residual(),
        kms_exchange,
    }
}

/// Residuals of modular-data transport along a spatial isomorphism.
#[derive(Debug, Clone)]
pub struct TransportReport {
    pub j_transport: f64,
    pub delta_transport: f64,
}

/// Verify that a unitary intertwining two pairs also intertwines their
/// modular data: u J_A u* = J_B and u Δ_A u* = Δ_B.
pub fn transport_modular(
    u: &Op,
    a: &FiniteVNAlgebra,
    b: &FiniteVNAlgebra,
    omega_a: &Vector,
    omega_b: &Vector,
    tol: f64,
) -> Result<TransportReport, TomitaError> {
    let ur = unitarity_residual(u);
    if ur > tol {
        return Err(TomitaError::TransportPrecondition {
            check: "u unitary",
            residual: ur,
        });
    }
    let moved = a.conjugated_by(u);
    let span = moved.span_distance(b);
    if span > tol {
        return Err(TomitaError::TransportPrecondition {
            check: "u A u* = B",
            residual: span,
        });
    }
    let vr = (u * omega_a - omega_b).norm();
    if vr > tol {
        return Err(TomitaError::TransportPrecondition {
            check: "u Omega_A = Omega_B",
            residual: vr,
        });
    }
    let da = compute_modular(a, omega_a)?;
    let db = compute_modular(b, omega_b)?;
    let uu = SemilinearOp::Linear(u.clone());
    let j_moved = uu.conjugate_op(da.j());
    let j_transport = j_moved.distance(db.j());
    let delta_transport = max_abs(&(u * da.delta() * u.adjoint() - db.delta()));
    Ok(TransportReport {
        j_transport,
        delta_transport,
    })
}

/// The algebra M_d ⊗ 1 on C^d ⊗ C^d.
pub fn left_factor_algebra(d: usize) -> FiniteVNAlgebra {
    let mut gens = Vec::new();
    for p in 0..d {
        for q in 0..d {
            let mut m = Op::zeros(d * d, d * d);
            for j in 0..d {
                m[(p * d + j, q * d + j)] = cplx(1.0);
            }
            gens.push(m);
        }
    }
    FiniteVNAlgebra::algebra_closure(&gens).expect("matrix units generate cleanly")
}

/// The algebra 1 ⊗ M_d on C^d ⊗ C^d.
pub fn right_factor_algebra(d: usize) -> FiniteVNAlgebra {
    let mut gens = Vec::new();
    for p in 0..d {
        for q in 0..d {
            let mut m = Op::zeros(d * d, d * d);
            for i in 0..d {
                m[(i * d + p, i * d + q)] = cplx(1.0);
            }
            gens.push(m);
        }
    }
    FiniteVNAlgebra::algebra_closure(&gens).expect("matrix units generate cleanly")
}

/// Ω = Σ √λ_i e_i ⊗ e_i for Schmidt weights λ.
pub fn schmidt_vector(lambdas: &[f64]) -> Vector {
    let d = lambdas.len();
    let mut v = Vector::zeros(d * d);
    for (i, l) in lambdas.iter().enumerate() {
        v[i * d + i] = cplx(l.sqrt());
    }
    v
}

/// A random fixture: M_d ⊗ 1 with a random full-Schmidt-rank vector,
/// redrawn until the modular operator is comfortably conditioned.
pub fn random_tensor_fixture(seed: u64, d: usize) -> (FiniteVNAlgebra, Vector) {
    let algebra = left_factor_algebra(d);
    let mut rng = rng_for(seed);
    loop {
        let mut c = DMatrix::<C64>::from_fn(d, d, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let sv = c.clone().svd(false, false).singular_values;
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = sv.iter().cloned().fold(0.0f64, f64::max);
        if min < 0.15 * max {
            continue;
        }
        c /= cplx(c.norm());
        // Coefficient matrix c encodes Ω = Σ c_ij e_i ⊗ e_j.
        let mut omega = Vector::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                omega[i * d + j] = c[(i, j)];
            }
        }
        return (algebra, omega);
    }
}

/// A random maximal-abelian fixture: the diagonal algebra with a vector
/// of random nonvanishing entries.
pub fn random_diagonal_fixture(seed: u64, d: usize) -> (FiniteVNAlgebra, Vector) {
    let mut gens = Vec::new();
    for i in 0..d {
        let mut m = Op::zeros(d, d);
        m[(i, i)] = cplx(1.0);
        gens.push(m);
    }
    let algebra = FiniteVNAlgebra::algebra_closure(&gens).unwrap();
    let mut rng = rng_for(seed);
    let mut omega = Vector::from_fn(d, |_, _| {
        let r = rng.gen_range(0.3..1.0);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        C64::new(r * phase.cos(), r * phase.sin())
    });
    omega /= cplx(omega.norm());
    (algebra, omega)
}
