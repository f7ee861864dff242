//! Frozen oracle for modular data on small fixtures.
//!
//! Everything here is built by brute force straight from the definition:
//! the antilinear map S sends aΩ to a*Ω, its matrix is solved from the
//! images of an explicit operator basis, and Δ = S*S is eigendecomposed.
//! No library modular-theory code is used, so these values stand as an
//! independent reference for the main implementation.

use nalgebra::{Complex, DMatrix, DVector};

type C64 = Complex<f64>;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Matrix unit E_pq ⊗ 1 acting on C^d ⊗ C^d (basis e_i ⊗ e_j at index i·d + j).
fn left_matrix_unit(d: usize, p: usize, q: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(d * d, d * d);
    for j in 0..d {
        m[(p * d + j, q * d + j)] = re(1.0);
    }
    m
}

/// Ω = Σ √λ_i e_i ⊗ e_i.
fn schmidt_vector(lambdas: &[f64]) -> DVector<C64> {
    let d = lambdas.len();
    let mut v = DVector::zeros(d * d);
    for (i, l) in lambdas.iter().enumerate() {
        v[i * d + i] = re(l.sqrt());
    }
    v
}

/// Brute-force matrix of S: aΩ ↦ a*Ω over a spanning operator family.
/// S is antilinear, S ψ = M · conj(ψ), so M · conj(X) = Y with X, Y the
/// column matrices of basis images.
fn antilinear_s_matrix(ops: &[DMatrix<C64>], omega: &DVector<C64>) -> DMatrix<C64> {
    let dim = omega.len();
    let k = ops.len();
    assert_eq!(
        k, dim,
        "spanning family must have as many elements as the dimension"
    );
    let mut x = DMatrix::<C64>::zeros(dim, k);
    let mut y = DMatrix::<C64>::zeros(dim, k);
    for (c, op) in ops.iter().enumerate() {
        x.set_column(c, &(op * omega));
        y.set_column(c, &(op.adjoint() * omega));
    }
    // M = Y · conj(X)^{-1}, via conj(X)^T M^T = Y^T.
    let mt = x
        .conjugate()
        .transpose()
        .lu()
        .solve(&y.transpose())
        .expect("basis images must be linearly independent for cyclic Ω");
    mt.transpose()
}

/// Δ = S*S; for antilinear S with matrix M this is the linear operator
/// with matrix Mᵀ · conj(M).
fn delta_matrix(s: &DMatrix<C64>) -> DMatrix<C64> {
    let d = s.transpose() * s.conjugate();
    // Hermitize to wash out round-off before eigendecomposition.
    (&d + d.adjoint()) * re(0.5)
}

fn sorted_eigenvalues(h: &DMatrix<C64>) -> Vec<f64> {
    let mut vals: Vec<f64> = h
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// J = S Δ^{-1/2}; antilinear with matrix M_S · conj(Δ^{-1/2}).
fn j_matrix(s: &DMatrix<C64>) -> DMatrix<C64> {
    let delta = delta_matrix(s);
    let eig = delta.symmetric_eigen();
    let mut inv_sqrt = DMatrix::<C64>::zeros(s.nrows(), s.ncols());
    for (i, l) in eig.eigenvalues.iter().enumerate() {
        assert!(*l > 0.0, "modular operator must be positive, got {l}");
        let col = eig.eigenvectors.column(i);
        inv_sqrt += col * col.adjoint() * re(1.0 / l.sqrt());
    }
    s * inv_sqrt.conjugate()
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The modular spectrum of M_d ⊗ 1 in the Schmidt state with weights λ.
fn schmidt_fixture_spectrum(lambdas: &[f64]) -> Vec<f64> {
    let d = lambdas.len();
    let mut ops = Vec::new();
    for p in 0..d {
        for q in 0..d {
            ops.push(left_matrix_unit(d, p, q));
        }
    }
    let omega = schmidt_vector(lambdas);
    sorted_eigenvalues(&delta_matrix(&antilinear_s_matrix(&ops, &omega)))
}

#[test]
fn unbalanced_schmidt_state_modular_spectrum() {
    let spectrum = schmidt_fixture_spectrum(&[2.0 / 3.0, 1.0 / 3.0]);
    let expected = [0.5, 1.0, 1.0, 2.0];
    for (got, want) in spectrum.iter().zip(expected) {
        assert!(
            (got - want).abs() < 1e-12,
            "spectrum {spectrum:?} differs from {expected:?}"
        );
    }
}

#[test]
fn tracial_state_has_trivial_modular_operator_and_swap_conjugation() {
    let d = 2;
    let mut ops = Vec::new();
    for p in 0..d {
        for q in 0..d {
            ops.push(left_matrix_unit(d, p, q));
        }
    }
    let omega = schmidt_vector(&[0.5, 0.5]);
    let s = antilinear_s_matrix(&ops, &omega);
    let delta = delta_matrix(&s);
    assert!(max_abs(&(&delta - DMatrix::<C64>::identity(4, 4))) < 1e-12);

    // J(ξ ⊗ η) = conj(η) ⊗ conj(ξ): the matrix of this antilinear map is
    // the tensor-factor swap permutation.
    let j = j_matrix(&s);
    let mut swap = DMatrix::<C64>::zeros(4, 4);
    for i in 0..d {
        for k in 0..d {
            swap[(i * d + k, k * d + i)] = re(1.0);
        }
    }
    assert!(max_abs(&(&j - swap)) < 1e-12);
}

#[test]
fn diagonal_algebra_modular_data_is_trivial_conjugation() {
    // Maximal abelian algebra on C^2 with Ω = (1,1)/√2: S fixes both
    // basis images, so Δ = 1 and J is plain componentwise conjugation.
    let ops = vec![
        DMatrix::<C64>::from_diagonal(&DVector::from_vec(vec![re(1.0), re(0.0)])),
        DMatrix::<C64>::from_diagonal(&DVector::from_vec(vec![re(0.0), re(1.0)])),
    ];
    let omega = DVector::from_vec(vec![re(1.0 / f64::sqrt(2.0)), re(1.0 / f64::sqrt(2.0))]);
    let s = antilinear_s_matrix(&ops, &omega);
    let delta = delta_matrix(&s);
    let id = DMatrix::<C64>::identity(2, 2);
    assert!(max_abs(&(&delta - &id)) < 1e-12);
    assert!(max_abs(&(&j_matrix(&s) - &id)) < 1e-12);
}

#[test]
fn oracle_modular_data_satisfies_defining_identities() {
    // Internal consistency of the brute-force path itself, checked on the
    // unbalanced fixture: JΩ = Ω, ΔΩ = Ω, J antiunitary involution,
    // JΔJ = Δ^{-1}, and S = JΔ^{1/2} reproduces aΩ ↦ a*Ω.
    let d = 2;
    let mut ops = Vec::new();
    for p in 0..d {
        for q in 0..d {
            ops.push(left_matrix_unit(d, p, q));
        }
    }
    let omega = schmidt_vector(&[2.0 / 3.0, 1.0 / 3.0]);
    let s = antilinear_s_matrix(&ops, &omega);
    let delta = delta_matrix(&s);
    let j = j_matrix(&s);

    let apply_antilinear = |m: &DMatrix<C64>, v: &DVector<C64>| m * v.conjugate();
    assert!((apply_antilinear(&j, &omega) - &omega).norm() < 1e-12);
    assert!((&delta * &omega - &omega).norm() < 1e-12);

    // Involution: J∘J has linear matrix M_J · conj(M_J); antiunitarity is
    // unitarity of the matrix.
    let id = DMatrix::<C64>::identity(4, 4);
    assert!(max_abs(&(&j * j.conjugate() - &id)) < 1e-12);
    assert!(max_abs(&(&j * j.adjoint() - &id)) < 1e-12);

    // JΔJ = Δ^{-1}: the antilinear conjugation gives M_J conj(Δ) conj(M_J)...
    // as a linear product: (J∘Δ∘J) has matrix M_J · conj(Δ · M_J).
    let delta_inv = delta.clone().lu().try_inverse().unwrap();
    let conjugated = &j * (&delta * &j).conjugate();
    assert!(max_abs(&(conjugated - delta_inv)) < 1e-12);

    // S a Ω = a* Ω for every basis element.
    for op in &ops {
        let lhs = apply_antilinear(&s, &(op * &omega));
        let rhs = op.adjoint() * &omega;
        assert!((lhs - rhs).norm() < 1e-12);
    }

    // KMS-type exchange: ⟨Ω, a Δ b Ω⟩ = ⟨Ω, b a Ω⟩ on basis pairs.
    for a in &ops {
        for b in &ops {
            let lhs = omega.dotc(&(a * (&delta * (b * &omega))));
            let rhs = omega.dotc(&(b * (a * &omega)));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
