//! Small dense complex linear algebra used throughout the crate.

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;
/// Superoperator on column-stacked 4×4 matrices.
pub type SuperOp = SMatrix<C64, 16, 16>;
pub type Vec16 = SVector<C64, 16>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Column-stacking vectorization: entry (r, c) lands at index r + 4c.
pub fn vec(m: &Mat4) -> Vec16 {
    Vec16::from_column_slice(m.as_slice())
}

pub fn unvec(v: &Vec16) -> Mat4 {
    Mat4::from_column_slice(v.as_slice())
}

/// Superoperator of X ↦ A X B, i.e. Bᵀ ⊗ A under column stacking.
pub fn sandwich(a: &Mat4, b: &Mat4) -> SuperOp {
    let k = b.transpose().kronecker(a);
    SuperOp::from_column_slice(k.as_slice())
}

/// X ↦ A X.
pub fn left(a: &Mat4) -> SuperOp {
    sandwich(a, &Mat4::identity())
}

/// X ↦ X B.
pub fn right(b: &Mat4) -> SuperOp {
    sandwich(&Mat4::identity(), b)
}

/// Hermitian part (M + M†)/2.
pub fn hermitian_part(m: &Mat4) -> Mat4 {
    (m + m.adjoint()) * real(0.5)
}

pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian 4×4 matrix in ascending order.
pub fn hermitian_eigenvalues(m: &Mat4) -> [f64; 4] {
    let eig = hermitian_part(m).symmetric_eigen();
    let mut vals = [0.0; 4];
    for (v, e) in vals.iter_mut().zip(eig.eigenvalues.iter()) {
        *v = *e;
    }
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Negative eigenvalues from rounding are clipped to zero.
pub fn sqrt_psd(m: &Mat4) -> Mat4 {
    let eig = hermitian_part(m).symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| real(l.max(0.0).sqrt()));
    let v = &eig.eigenvectors;
    v * Mat4::from_diagonal(&roots) * v.adjoint()
}

/// Eigenvalues of a Hermitian 2×2 matrix, (larger, smaller).
pub fn hermitian_eigenvalues2(m: &Mat2) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let r = (0.5 * (a - d)).hypot(b.norm());
    (mean + r, mean - r)
}

/// −x log₂ x with the 0·log 0 = 0 convention; x is clipped at zero first.
pub fn entropy_term(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}
