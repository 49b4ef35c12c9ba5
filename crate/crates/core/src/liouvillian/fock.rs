//! Fermionic mode operators on the two-mode Fock space.
//!
//! Basis ordering {|00⟩, |10⟩, |01⟩, |11⟩} with index n₁ + 2n₂. Mode 1 is the
//! low bit, mode 2 the high bit; with the Kronecker product's first factor
//! acting on the high bit,
//!
//! ```text
//! ζ₁ = I ⊗ a        ζ₂ = a ⊗ Z
//! ```
//!
//! where a = |0⟩⟨1| and Z = diag(1, −1) is the parity of mode 1. The string
//! sits on mode 2, so ζ₁†|01⟩ = +|11⟩ and ζ₂†|10⟩ = −|11⟩.

use nalgebra::Matrix2;

use crate::linalg::{real, Mat4, C64, ONE, ZERO};
use crate::model::EigenBasis;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperators {
    pub zeta1: Mat4,
    pub zeta2: Mat4,
    pub zeta1_dag: Mat4,
    pub zeta2_dag: Mat4,
}

impl ModeOperators {
    pub fn annihilator(&self, mode: usize) -> &Mat4 {
        match mode {
            1 => &self.zeta1,
            2 => &self.zeta2,
            _ => panic!("mode index must be 1 or 2, got {mode}"),
        }
    }

    pub fn creator(&self, mode: usize) -> &Mat4 {
        match mode {
            1 => &self.zeta1_dag,
            2 => &self.zeta2_dag,
            _ => panic!("mode index must be 1 or 2, got {mode}"),
        }
    }

    /// N_S = ζ₁†ζ₁ + ζ₂†ζ₂.
    pub fn number(&self) -> Mat4 {
        self.zeta1_dag * self.zeta1 + self.zeta2_dag * self.zeta2
    }

    /// H_S = ω′₁ ζ₁†ζ₁ + ω′₂ ζ₂†ζ₂.
    pub fn hamiltonian(&self, basis: &EigenBasis) -> Mat4 {
        self.zeta1_dag * self.zeta1 * real(basis.omega_p1)
            + self.zeta2_dag * self.zeta2 * real(basis.omega_p2)
    }
}

fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Mat4 {
    Mat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

pub fn mode_operators() -> ModeOperators {
    let lower = Matrix2::new(ZERO, ONE, ZERO, ZERO);
    let parity = Matrix2::new(ONE, ZERO, ZERO, -ONE);
    let id = Matrix2::identity();
    let zeta1 = kron2(&id, &lower);
    let zeta2 = kron2(&lower, &parity);
    ModeOperators {
        zeta1_dag: zeta1.adjoint(),
        zeta2_dag: zeta2.adjoint(),
        zeta1,
        zeta2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn ket(k: usize) -> nalgebra::Vector4<C64> {
        let mut v = nalgebra::Vector4::zeros();
        v[k] = ONE;
        v
    }

    #[test]
    fn canonical_anticommutation() {
        let ops = mode_operators();
        let id = Mat4::identity();
        for a in 1..=2 {
            for b in 1..=2 {
                let za = ops.annihilator(a);
                let zb = ops.annihilator(b);
                let zbd = ops.creator(b);
                let expect = if a == b { id } else { Mat4::zeros() };
                assert!(max_abs(&(za * zbd + zbd * za - expect)) < 1e-14);
                assert!(max_abs(&(za * zb + zb * za)) < 1e-14);
            }
        }
    }

    #[test]
    fn number_operator_counts_particles() {
        let n = mode_operators().number();
        for (k, count) in [0.0, 1.0, 1.0, 2.0].iter().enumerate() {
            assert!(((n * ket(k)) - ket(k) * real(*count)).norm() < 1e-15);
        }
    }

    #[test]
    fn ordering_and_jordan_wigner_sign() {
        let ops = mode_operators();
        // |10⟩ = ζ₁†|00⟩, |01⟩ = ζ₂†|00⟩
        assert_eq!(ops.zeta1_dag * ket(0), ket(1));
        assert_eq!(ops.zeta2_dag * ket(0), ket(2));
        // ζ₁†|01⟩ = +|11⟩, ζ₂†|10⟩ = −|11⟩
        assert_eq!(ops.zeta1_dag * ket(2), ket(3));
        assert_eq!(ops.zeta2_dag * ket(1), -ket(3));
    }
}
