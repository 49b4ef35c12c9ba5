use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigenvalues, max_abs, real, Mat2, Mat4, C64};

/// Two-mode density matrix in the occupation basis
/// {|00⟩, |10⟩, |01⟩, |11⟩}, where |n₁n₂⟩ lists the occupations of modes 1
/// and 2. Index k (0-based) corresponds to n₁ = k mod 2, n₂ = k div 2.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Mat4);

/// Positions that must vanish for an X state with an empty outer block.
pub(crate) const OUTSIDE_X: [(usize, usize); 8] = [
    (0, 1),
    (0, 2),
    (1, 3),
    (2, 3),
    (1, 0),
    (2, 0),
    (3, 1),
    (3, 2),
];

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

impl DensityMatrix {
    /// Wraps a matrix after checking Hermiticity, unit trace and positivity.
    pub fn new(m: Mat4) -> Result<Self> {
        let rho = DensityMatrix(m);
        rho.check()?;
        Ok(rho)
    }

    pub(crate) fn new_unchecked(m: Mat4) -> Self {
        DensityMatrix(m)
    }

    pub fn check(&self) -> Result<()> {
        let herm = max_abs(&(self.0 - self.0.adjoint()));
        if herm > HERMITIAN_TOL {
            return Err(Error::Domain(format!("density matrix is not Hermitian (deviation {herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Domain(format!("density matrix trace is {tr}")));
        }
        let min = self.eigenvalues()[0];
        if min < -PSD_TOL {
            return Err(Error::Domain(format!("density matrix has negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn from_diagonal(p: [f64; 4]) -> Result<Self> {
        Self::new(Mat4::from_diagonal(&p.map(real).into()))
    }

    /// X-form state with populations `p` and inner coherence ρ₂₃.
    pub fn x_state(p: [f64; 4], rho23: C64) -> Result<Self> {
        let mut m = Mat4::from_diagonal(&p.map(real).into());
        m[(1, 2)] = rho23;
        m[(2, 1)] = rho23.conj();
        Self::new(m)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Mat4::identity() * real(0.25))
    }

    /// Pure state |ψ⟩⟨ψ| from an unnormalized amplitude vector.
    pub fn pure(amplitudes: [C64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from(amplitudes);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::Domain("zero state vector".into()));
        }
        let v = v / real(norm);
        Self::new(v * v.adjoint())
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    /// Entry ρ_{ij} with 1-based indices, matching the usual ρ₁₁..ρ₄₄ labels.
    pub fn elem(&self, i: usize, j: usize) -> C64 {
        self.0[(i - 1, j - 1)]
    }

    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|k| self.0[(k, k)].re)
    }

    pub fn rho23(&self) -> C64 {
        self.0[(1, 2)]
    }

    pub fn rho14(&self) -> C64 {
        self.0[(0, 3)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.0)
    }

    /// Largest magnitude among the entries outside the X pattern
    /// (diagonal + ρ₂₃/ρ₃₂ + ρ₁₄/ρ₄₁).
    pub fn x_form_deviation(&self) -> f64 {
        OUTSIDE_X
            .iter()
            .map(|&(r, c)| self.0[(r, c)].norm())
            .fold(0.0, f64::max)
    }

    pub fn is_x_form(&self, tol: f64) -> bool {
        self.x_form_deviation() <= tol
    }

    /// Reduced state of mode 1 (trace over mode 2).
    pub fn reduced_mode1(&self) -> Mat2 {
        let m = &self.0;
        // index = n1 + 2 n2
        Mat2::from_fn(|a, b| m[(a, b)] + m[(a + 2, b + 2)])
    }

    /// Reduced state of mode 2 (trace over mode 1).
    pub fn reduced_mode2(&self) -> Mat2 {
        let m = &self.0;
        Mat2::from_fn(|a, b| m[(2 * a, 2 * b)] + m[(2 * a + 1, 2 * b + 1)])
    }

    /// Unitary change of basis U ρ U†.
    pub fn transformed(&self, u: &Mat4) -> Self {
        DensityMatrix(linalg::hermitian_part(&(u * self.0 * u.adjoint())))
    }
}

impl fmt::Display for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..4 {
            for c in 0..4 {
                let z = self.0[(r, c)];
                write!(f, "{:>+12.6e}{:>+13.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_invalid_matrices() {
        assert!(DensityMatrix::from_diagonal([0.5, 0.5, 0.5, 0.0]).is_err());
        assert!(DensityMatrix::from_diagonal([1.2, -0.2, 0.0, 0.0]).is_err());
        let mut m = Mat4::identity() * real(0.25);
        m[(0, 1)] = real(0.1);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn partial_traces_of_product_state() {
        // mode 1 occupied with prob a, mode 2 with prob b, independently
        let (a, b) = (0.3, 0.8);
        let rho = DensityMatrix::from_diagonal([
            (1.0 - a) * (1.0 - b),
            a * (1.0 - b),
            (1.0 - a) * b,
            a * b,
        ])
        .unwrap();
        let r1 = rho.reduced_mode1();
        let r2 = rho.reduced_mode2();
        assert_abs_diff_eq!(r1[(1, 1)].re, a, epsilon = 1e-15);
        assert_abs_diff_eq!(r2[(1, 1)].re, b, epsilon = 1e-15);
    }

    #[test]
    fn x_form_detection() {
        let rho = DensityMatrix::x_state([0.4, 0.2, 0.3, 0.1], C64::new(0.05, -0.1)).unwrap();
        assert!(rho.is_x_form(0.0));
        assert_eq!(rho.rho23(), C64::new(0.05, -0.1));
        let plus = DensityMatrix::pure([real(1.0), real(1.0), real(0.0), real(0.0)]).unwrap();
        assert!(!plus.is_x_form(1e-3));
    }
}
