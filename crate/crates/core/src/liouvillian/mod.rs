//! Bloch-Redfield generator on the vectorized two-mode Fock space and its
//! steady state.
//!
//! Vectorization is column stacking: vec(X)[r + 4c] = X[r, c], so
//! vec(A X B) = (Bᵀ ⊗ A) vec(X), left multiplication is I ⊗ A and right
//! multiplication is Bᵀ ⊗ I.

mod dissipator;
mod fock;

pub use dissipator::{build_dissipators, BathDissipator};
pub use fock::{mode_operators, ModeOperators};

use nalgebra::SVD;

use crate::density::{DensityMatrix, PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, left, right, unvec, vec, Mat4, SuperOp, Vec16, I, ONE};
use crate::model::{diagonalize, BathParams, EigenBasis, SystemParams};

/// Maximum residual |L vec(ρ)|∞ accepted for a steady state.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Singular values below this fraction of the largest count as null.
pub const NULL_SPACE_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    /// X ↦ i[X, H_S].
    pub unitary: SuperOp,
    pub baths: [BathDissipator; 2],
    pub hamiltonian: Mat4,
    pub basis: EigenBasis,
}

impl Liouvillian {
    pub fn matrix(&self) -> SuperOp {
        self.unitary + self.baths[0].total() + self.baths[1].total()
    }

    /// Dissipator D_l of reservoir l (1 or 2).
    pub fn bath(&self, l: usize) -> &BathDissipator {
        &self.baths[l - 1]
    }

    pub fn apply(&self, x: &Mat4) -> Mat4 {
        unvec(&(self.matrix() * vec(x)))
    }

    /// Row functional implementing X ↦ Tr X.
    pub fn trace_functional() -> Vec16 {
        vec(&Mat4::identity())
    }
}

pub fn build_liouvillian(
    basis: &EigenBasis,
    baths: &BathParams,
    params: &SystemParams,
) -> Result<Liouvillian> {
    params.validate()?;
    baths.validate()?;
    let ops = mode_operators();
    let h = ops.hamiltonian(basis);
    // dρ/dt ⊃ i[ρ, H] = i(ρH − Hρ)
    let unitary = (right(&h) - left(&h)) * I;
    let dissipators = build_dissipators(&ops, basis, baths, params)?;
    Ok(Liouvillian {
        unitary,
        baths: dissipators,
        hamiltonian: h,
        basis: *basis,
    })
}

/// Diagonalizes and assembles the generator in one step.
pub fn liouvillian_for(params: &SystemParams, baths: &BathParams) -> Result<Liouvillian> {
    build_liouvillian(&diagonalize(params), baths, params)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    /// |L vec(ρ)|∞ of the returned state.
    pub residual: f64,
}

/// Number of singular values of L below `NULL_SPACE_RTOL · σ_max`.
pub fn null_space_dimension(l: &SuperOp) -> usize {
    let sv = SVD::new(*l, false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 16;
    }
    sv.iter().filter(|&&s| s <= NULL_SPACE_RTOL * max).count()
}

/// Steady state by replacing the first row of L with the trace functional
/// and solving the resulting square system.
pub fn steady_state(l: &Liouvillian) -> Result<SteadyState> {
    let m = l.matrix();
    let dim = null_space_dimension(&m);
    if dim != 1 {
        return Err(Error::DegenerateNullSpace { dimension: dim });
    }
    let mut a = m;
    let tr = Liouvillian::trace_functional();
    for c in 0..16 {
        a[(0, c)] = tr[c];
    }
    let mut rhs = Vec16::zeros();
    rhs[0] = ONE;
    let x = a.lu().solve(&rhs).ok_or_else(|| Error::Solver {
        residual: f64::INFINITY,
        reason: "trace-constrained system is singular".into(),
    })?;
    finish(&m, unvec(&x))
}

/// Steady state from the right singular vector of the smallest singular
/// value. Independent of the row-replacement solve; used as a cross-check.
pub fn steady_state_svd(l: &Liouvillian) -> Result<SteadyState> {
    let m = l.matrix();
    let svd = SVD::new(m, false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let null = Vec16::from_fn(|r, _| v_t[(k, r)].conj());
    let rho = unvec(&null);
    let tr = rho.trace();
    if tr.norm() < 1e-14 {
        return Err(Error::Solver {
            residual: f64::INFINITY,
            reason: "null vector has zero trace".into(),
        });
    }
    finish(&m, rho / tr)
}

fn finish(m: &SuperOp, rho: Mat4) -> Result<SteadyState> {
    let tr = rho.trace();
    let rho = linalg::hermitian_part(&(rho / tr));
    let residual = (m * vec(&rho)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !(residual <= RESIDUAL_TOL) {
        return Err(Error::Solver {
            residual,
            reason: "residual above tolerance".into(),
        });
    }
    let rho = DensityMatrix::new_unchecked(rho);
    let min = rho.eigenvalues()[0];
    if min < -PSD_TOL {
        return Err(Error::Solver {
            residual,
            reason: format!("steady state has negative eigenvalue {min:.3e}"),
        });
    }
    Ok(SteadyState { rho, residual })
}

/// Steady state for a parameter point.
pub fn solve_ness(params: &SystemParams, baths: &BathParams) -> Result<SteadyState> {
    steady_state(&liouvillian_for(params, baths)?)
}

/// Entries of vec(ρ) that belong to the X block
/// {ρ₁₁, ρ₂₂, ρ₃₃, ρ₄₄, ρ₂₃, ρ₃₂}.
pub fn x_block_indices() -> [usize; 6] {
    let idx = |r: usize, c: usize| r + 4 * c;
    [idx(0, 0), idx(1, 1), idx(2, 2), idx(3, 3), idx(1, 2), idx(2, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, real, C64};
    use crate::model::fermi_occupation;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn random_hermitian(seed: u64) -> Mat4 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = Mat4::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        a + a.adjoint()
    }

    fn biased_point() -> (SystemParams, BathParams) {
        (
            SystemParams::symmetric(1.0, 0.005, 0.002).unwrap(),
            BathParams::new(0.2, 0.4, 0.5, 0.5).unwrap(),
        )
    }

    #[test]
    fn closed_system_keeps_diagonal_states() {
        let params = SystemParams::symmetric(1.0, 0.02, 0.0).unwrap();
        let l = liouvillian_for(&params, &BathParams::new(0.2, 0.4, 0.1, 0.9).unwrap()).unwrap();
        assert_eq!(l.matrix(), l.unitary);
        let rho = Mat4::from_diagonal(&nalgebra::Vector4::new(real(0.1), real(0.2), real(0.3), real(0.4)));
        assert!(max_abs(&l.apply(&rho)) < 1e-15);
        assert!(matches!(
            steady_state(&l),
            Err(Error::DegenerateNullSpace { dimension }) if dimension >= 4
        ));
    }

    #[test]
    fn equilibrium_gibbs_state_is_stationary() {
        let (t, mu) = (0.2, 0.5);
        let params = SystemParams::symmetric(1.0, 0.005, 0.002).unwrap();
        let l = liouvillian_for(&params, &BathParams::equilibrium(t, mu).unwrap()).unwrap();
        let b = l.basis;
        let beta = 1.0 / t;
        let w = [
            1.0,
            (-beta * (b.omega_p1 - mu)).exp(),
            (-beta * (b.omega_p2 - mu)).exp(),
            (-beta * (b.omega_p1 + b.omega_p2 - 2.0 * mu)).exp(),
        ];
        let z: f64 = w.iter().sum();
        let gibbs = Mat4::from_diagonal(&nalgebra::Vector4::from(w.map(|x| real(x / z))));
        assert!(max_abs(&l.apply(&gibbs)) < 1e-8);
    }

    #[test]
    fn generic_point_has_one_dimensional_null_space() {
        let (p, b) = biased_point();
        let l = liouvillian_for(&p, &b).unwrap();
        assert_eq!(null_space_dimension(&l.matrix()), 1);
    }

    #[test]
    fn row_replacement_matches_svd_null_vector() {
        let (p, b) = biased_point();
        let l = liouvillian_for(&p, &b).unwrap();
        let a = steady_state(&l).unwrap();
        let s = steady_state_svd(&l).unwrap();
        assert!(max_abs(&(a.rho.matrix() - s.rho.matrix())) < 1e-10);
        assert!(a.residual < RESIDUAL_TOL);
    }

    #[test]
    fn steady_state_is_x_form_and_physical() {
        let (p, b) = biased_point();
        let ss = solve_ness(&p, &b).unwrap();
        assert!(ss.rho.is_x_form(1e-10));
        assert!(ss.rho.rho14().norm() < 1e-10);
        ss.rho.check().unwrap();
        assert!(ss.rho.rho23().norm() > 1e-3);
    }

    #[test]
    fn equilibrium_symmetric_junction_has_no_coherence() {
        let p = SystemParams::symmetric(1.0, 0.005, 0.002).unwrap();
        let ss = solve_ness(&p, &BathParams::equilibrium(0.2, 0.5).unwrap()).unwrap();
        assert!(ss.rho.rho23().norm() < 1e-12);
        let n1 = fermi_occupation(1.005, 0.2, 0.5).unwrap();
        assert!((ss.rho.populations()[1] - n1 * (1.0 - fermi_occupation(0.995, 0.2, 0.5).unwrap())).abs() < 1e-10);
    }

    #[test]
    fn x_block_is_closed_under_the_generator() {
        let (p, b) = biased_point();
        let m = liouvillian_for(&p, &b).unwrap().matrix();
        let block = x_block_indices();
        for r in 0..16 {
            for c in 0..16 {
                if block.contains(&r) != block.contains(&c) {
                    assert!(m[(r, c)].norm() < 1e-15, "coupling at ({r},{c})");
                }
            }
        }
    }

    #[test]
    fn dissipators_vanish_cross_terms_when_decoupled() {
        let p = SystemParams::new(1.0, 1.2, 0.0, 0.002, 0.002).unwrap();
        let l = liouvillian_for(&p, &BathParams::new(0.2, 0.3, 0.4, 0.5).unwrap()).unwrap();
        assert_eq!(l.baths[0].cross, SuperOp::zeros());
        assert_eq!(l.baths[1].cross, SuperOp::zeros());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn generator_preserves_trace_and_hermiticity(
            w2 in 0.8f64..1.2, d in 0.001f64..0.2, g1 in 0.0f64..0.01, g2 in 0.0f64..0.01,
            t1 in 0.05f64..1.0, t2 in 0.05f64..1.0, mu1 in 0.0f64..2.0, mu2 in 0.0f64..2.0,
            seed in 0u64..1000,
        ) {
            let p = SystemParams::new(1.0, w2, d, g1, g2).unwrap();
            let l = liouvillian_for(&p, &BathParams::new(t1, t2, mu1, mu2).unwrap()).unwrap();
            let x = random_hermitian(seed);
            let lx = l.apply(&x);
            prop_assert!(lx.trace().norm() < 1e-10);
            // Hermiticity preservation on a non-Hermitian argument
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed + 1);
            let y = Mat4::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let lhs = l.apply(&y.adjoint());
            let rhs = l.apply(&y).adjoint();
            prop_assert!(max_abs(&(lhs - rhs)) < 1e-12);
            // per-bath trace preservation, needed for the current split
            for bath in &l.baths {
                prop_assert!(unvec(&(bath.total() * vec(&x))).trace().norm() < 1e-10);
            }
        }
    }
}
