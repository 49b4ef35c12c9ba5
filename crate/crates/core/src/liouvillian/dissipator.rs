//! Bloch-Redfield dissipators for two fermionic reservoirs, kept separate per
//! reservoir so that currents can be attributed to each one.
//!
//! For reservoir l the master equation contains −N_l[ρ] − S_l[ρ] with
//!
//! ```text
//! N_l = Σ_k Γ_k w_{l,k} [ (1−n_k)(ζ_k†ζ_k ρ − ζ_k ρ ζ_k†) + n_k(ζ_k ζ_k† ρ − ζ_k† ρ ζ_k) + h.c. ]
//! S_l = (−1)^{l−1} ½ sinθ { Γ₁[ (1−n₁)(ζ₂†ζ₁ ρ − ζ₁ ρ ζ₂†) + n₁(ζ₂ ζ₁† ρ − ζ₁† ρ ζ₂) + h.c. ]
//!                         + Γ₂[ (1−n₂)(ζ₁†ζ₂ ρ − ζ₁ ρ ζ₂†) + n₂(ζ₁ ζ₂† ρ − ζ₁† ρ ζ₂) + h.c. ] }
//! ```
//!
//! with w_{l,1} = ½[1 + (−1)^l cosθ], w_{l,2} = ½[1 + (−1)^{l−1} cosθ] and
//! n_k = n(ω′_k, T_l, μ_l). "h.c." is extended linearly to non-Hermitian
//! arguments as K(X) + K(X†)†.

use crate::error::Result;
use crate::linalg::{sandwich, Mat4, SuperOp};
use crate::model::{fermi_occupation, BathParams, EigenBasis, SystemParams};

use super::fock::ModeOperators;

/// Contribution of one reservoir to dρ/dt.
#[derive(Debug, Clone, PartialEq)]
pub struct BathDissipator {
    /// −N_l: particle exchange with the reservoir.
    pub exchange: SuperOp,
    /// −S_l: population/coherence cross terms (vanish when sinθ = 0).
    pub cross: SuperOp,
}

impl BathDissipator {
    pub fn total(&self) -> SuperOp {
        self.exchange + self.cross
    }
}

/// Superoperator of X ↦ K(X) + K(X†)† for K(X) = Σ c A X B.
fn with_hc(terms: &[(f64, &Mat4, &Mat4)]) -> SuperOp {
    let mut out = SuperOp::zeros();
    for &(c, a, b) in terms {
        if c == 0.0 {
            continue;
        }
        let c = crate::linalg::real(c);
        out += sandwich(a, b) * c;
        out += sandwich(&b.adjoint(), &a.adjoint()) * c;
    }
    out
}

/// The bracket (1−n)(A†B X − B X A†) + n(B A† X − B† X A) appearing in both
/// N_l (with A = B = ζ_k) and S_l (with A ≠ B).
fn exchange_bracket(ops_a: (&Mat4, &Mat4), ops_b: (&Mat4, &Mat4), n: f64, id: &Mat4) -> SuperOp {
    let (a, a_dag) = ops_a;
    let (b, b_dag) = ops_b;
    let ab = a_dag * b;
    let ba = b * a_dag;
    with_hc(&[
        (1.0 - n, &ab, id),
        (-(1.0 - n), b, a_dag),
        (n, &ba, id),
        (-n, b_dag, a),
    ])
}

/// Sign (−1)^p for p = 0, 1, 2.
fn parity_sign(p: usize) -> f64 {
    if p % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Builds the dissipators of reservoirs 1 and 2.
pub fn build_dissipators(
    ops: &ModeOperators,
    basis: &EigenBasis,
    baths: &BathParams,
    params: &SystemParams,
) -> Result<[BathDissipator; 2]> {
    let id = Mat4::identity();
    let z1 = (&ops.zeta1, &ops.zeta1_dag);
    let z2 = (&ops.zeta2, &ops.zeta2_dag);
    let build = |l: usize| -> Result<BathDissipator> {
        let (t, mu) = baths.bath(l);
        let n1 = fermi_occupation(basis.omega_p1, t, mu)?;
        let n2 = fermi_occupation(basis.omega_p2, t, mu)?;
        let w1 = 0.5 * (1.0 + parity_sign(l) * basis.cos_theta);
        let w2 = 0.5 * (1.0 + parity_sign(l - 1) * basis.cos_theta);

        let n_l = exchange_bracket(z1, z1, n1, &id) * crate::linalg::real(params.gamma1 * w1)
            + exchange_bracket(z2, z2, n2, &id) * crate::linalg::real(params.gamma2 * w2);

        let sigma = parity_sign(l - 1) * 0.5 * basis.sin_theta;
        // Γ₁ block: (1−n₁)(ζ₂†ζ₁ρ − ζ₁ρζ₂†) + n₁(ζ₂ζ₁†ρ − ζ₁†ρζ₂)
        // Γ₂ block: (1−n₂)(ζ₁†ζ₂ρ − ζ₁ρζ₂†) + n₂(ζ₁ζ₂†ρ − ζ₁†ρζ₂)
        let s_l = if sigma == 0.0 {
            SuperOp::zeros()
        } else {
            let g1 = with_hc(&[
                (1.0 - n1, &(ops.zeta2_dag * ops.zeta1), &id),
                (-(1.0 - n1), &ops.zeta1, &ops.zeta2_dag),
                (n1, &(ops.zeta2 * ops.zeta1_dag), &id),
                (-n1, &ops.zeta1_dag, &ops.zeta2),
            ]);
            let g2 = with_hc(&[
                (1.0 - n2, &(ops.zeta1_dag * ops.zeta2), &id),
                (-(1.0 - n2), &ops.zeta1, &ops.zeta2_dag),
                (n2, &(ops.zeta1 * ops.zeta2_dag), &id),
                (-n2, &ops.zeta1_dag, &ops.zeta2),
            ]);
            (g1 * crate::linalg::real(params.gamma1) + g2 * crate::linalg::real(params.gamma2))
                * crate::linalg::real(sigma)
        };

        Ok(BathDissipator {
            exchange: -n_l,
            cross: -s_l,
        })
    };
    Ok([build(1)?, build(2)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::fock::mode_operators;
    use crate::linalg::{unvec, vec, C64};
    use crate::model::diagonalize;

    #[test]
    fn symmetric_junction_weights_are_equal() {
        // with cosθ = 0 the exchange parts of both reservoirs at equal
        // temperature and chemical potential coincide
        let params = SystemParams::symmetric(1.0, 0.005, 0.002).unwrap();
        let basis = diagonalize(&params);
        let baths = BathParams::equilibrium(0.2, 0.5).unwrap();
        let d = build_dissipators(&mode_operators(), &basis, &baths, &params).unwrap();
        assert!((d[0].exchange - d[1].exchange).norm() < 1e-15);
        // and the cross terms cancel pairwise
        assert!((d[0].cross + d[1].cross).norm() < 1e-15);
    }

    #[test]
    fn decoupled_sites_have_no_cross_terms() {
        let params = SystemParams::new(1.0, 1.3, 0.0, 0.002, 0.003).unwrap();
        let basis = diagonalize(&params);
        let baths = BathParams::new(0.2, 0.5, 0.3, 0.9).unwrap();
        let d = build_dissipators(&mode_operators(), &basis, &baths, &params).unwrap();
        assert_eq!(d[0].cross, SuperOp::zeros());
        assert_eq!(d[1].cross, SuperOp::zeros());

        // mode 1 is site 2 (ω′₁ = 1.3), coupled only to reservoir 2; mode 2
        // is site 1, coupled only to reservoir 1. Each reservoir then relaxes
        // its own site towards its Fermi occupation.
        let n_site1 = fermi_occupation(1.0, 0.2, 0.3).unwrap();
        let n_site2 = fermi_occupation(1.3, 0.5, 0.9).unwrap();
        let rho = Mat4::from_diagonal(&nalgebra::Vector4::from([
            C64::new((1.0 - n_site2) * (1.0 - n_site1), 0.0),
            C64::new(n_site2 * (1.0 - n_site1), 0.0),
            C64::new((1.0 - n_site2) * n_site1, 0.0),
            C64::new(n_site2 * n_site1, 0.0),
        ]));
        for bath in &d {
            let out = unvec(&(bath.total() * vec(&rho)));
            assert!(crate::linalg::max_abs(&out) < 1e-15);
        }
    }
}
