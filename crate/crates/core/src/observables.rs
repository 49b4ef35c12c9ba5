//! State-level quantities of the two-mode density matrix: spectral
//! decomposition of the X state, coherence, linear entropy, concurrence,
//! mutual information and one-sided quantum discord.
//!
//! Entropies are in bits. Subsystem A is eigenmode 1, subsystem B is
//! eigenmode 2; the discord measures B.

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{entropy_term, hermitian_eigenvalues, hermitian_eigenvalues2, real, sqrt_psd, Mat2, Mat4, C64, ONE, ZERO};
use crate::model::EigenBasis;

/// Largest entry allowed outside the inner X block for `spectral_decompose`.
pub const X_FORM_TOL: f64 = 1e-10;

/// Eigen-decomposition of an X state with ρ₁₄ = 0.
///
/// ```text
/// ψ₁ = |00⟩
/// ψ₂ = cos(α/2) e^{iφ} |10⟩ + sin(α/2) |01⟩
/// ψ₃ = sin(α/2) e^{iφ} |10⟩ − cos(α/2) |01⟩
/// ψ₄ = |11⟩
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomp {
    /// p₁..p₄, with p₂ ≥ p₃.
    pub p: [f64; 4],
    /// Mixing angle in [0, π].
    pub alpha: f64,
    /// arg ρ₂₃ in (−π, π].
    pub phi: f64,
}

impl SpectralDecomp {
    pub fn eigenvectors(&self) -> [nalgebra::Vector4<C64>; 4] {
        let (s, c) = (0.5 * self.alpha).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [
            nalgebra::Vector4::new(ONE, ZERO, ZERO, ZERO),
            nalgebra::Vector4::new(ZERO, e * c, real(s), ZERO),
            nalgebra::Vector4::new(ZERO, e * s, real(-c), ZERO),
            nalgebra::Vector4::new(ZERO, ZERO, ZERO, ONE),
        ]
    }

    /// Σ p_i |ψ_i⟩⟨ψ_i|.
    pub fn reconstruct(&self) -> Mat4 {
        self.eigenvectors()
            .iter()
            .zip(self.p)
            .map(|(v, p)| v * v.adjoint() * real(p))
            .sum()
    }
}

/// Wraps an angle into (−π, π].
pub(crate) fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

pub fn spectral_decompose(rho: &DensityMatrix) -> Result<SpectralDecomp> {
    let deviation = rho.x_form_deviation().max(rho.rho14().norm());
    if deviation > X_FORM_TOL {
        return Err(Error::NotXForm { deviation });
    }
    let [r11, r22, r33, r44] = rho.populations();
    let r23 = rho.rho23();
    let mean = 0.5 * (r22 + r33);
    let radius = (0.5 * (r22 - r33)).hypot(r23.norm());
    let alpha = (2.0 * r23.norm()).atan2(r22 - r33);
    let phi = if r23.norm() == 0.0 { 0.0 } else { wrap_angle(r23.arg()) };
    Ok(SpectralDecomp {
        p: [r11, mean + radius, mean - radius, r44],
        alpha,
        phi,
    })
}

/// |ρ₂₃|.
pub fn coherence(rho: &DensityMatrix) -> f64 {
    rho.rho23().norm()
}

/// S_L = (4/3)(1 − Tr ρ²).
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    4.0 / 3.0 * (1.0 - rho.purity())
}

/// σ_y ⊗ σ_y in the occupation basis.
fn spin_flip() -> Mat4 {
    let mut y = Mat4::zeros();
    y[(0, 3)] = real(-1.0);
    y[(3, 0)] = real(-1.0);
    y[(1, 2)] = ONE;
    y[(2, 1)] = ONE;
    y
}

/// Wootters concurrence from the eigenvalues of √ρ ρ̃ √ρ, ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
pub fn concurrence_wootters(rho: &DensityMatrix) -> f64 {
    let y = spin_flip();
    let m = rho.matrix();
    let tilde = y * m.conjugate() * y;
    let s = sqrt_psd(m);
    let ev = hermitian_eigenvalues(&(s * tilde * s));
    // λ's are square roots, descending
    let l = [3, 2, 1, 0].map(|k| ev[k].max(0.0).sqrt());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Concurrence. Uses the X-state closed form
/// 2 max(0, |ρ₂₃| − √(ρ₁₁ρ₄₄), |ρ₁₄| − √(ρ₂₂ρ₃₃)) and falls back to the
/// general formula when ρ is not of X form.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    if rho.x_form_deviation() > X_FORM_TOL {
        return concurrence_wootters(rho);
    }
    let [r11, r22, r33, r44] = rho.populations();
    let a = rho.rho23().norm() - (r11 * r44).max(0.0).sqrt();
    let b = rho.rho14().norm() - (r22 * r33).max(0.0).sqrt();
    2.0 * a.max(b).max(0.0)
}

/// Von Neumann entropy in bits.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues().into_iter().map(entropy_term).sum()
}

fn entropy2(m: &Mat2) -> f64 {
    let (a, b) = hermitian_eigenvalues2(m);
    entropy_term(a) + entropy_term(b)
}

/// I = S(ρ_A) + S(ρ_B) − S(ρ).
pub fn mutual_information(rho: &DensityMatrix) -> f64 {
    let i = entropy2(&rho.reduced_mode1()) + entropy2(&rho.reduced_mode2()) - von_neumann(rho);
    i.max(0.0)
}

/// Result of the one-sided measurement optimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discord {
    /// Classical correlation C (bits).
    pub classical: f64,
    /// Q = I − C (bits).
    pub discord: f64,
    /// Bloch angles of the optimal projector on B.
    pub theta: f64,
    pub phi: f64,
}

/// Options of the discord optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordOptions {
    /// Coarse grid resolution in θ and in φ.
    pub grid: usize,
    /// Simplex standard-deviation tolerance.
    pub tolerance: f64,
    pub max_iters: u64,
    /// When set, the coarse grid is shifted by a seeded random fraction of a cell.
    pub seed: Option<u64>,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        DiscordOptions {
            grid: 40,
            tolerance: 1e-9,
            max_iters: 2000,
            seed: None,
        }
    }
}

/// Σ_k p_k S(ρ_A|k) for the projective measurement on B along the Bloch
/// direction (θ, φ).
pub fn conditional_entropy(rho: &DensityMatrix, theta: f64, phi: f64) -> f64 {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = C64::from_polar(1.0, phi);
    let b0 = [real(c), e * s];
    let b1 = [real(s), -e * c];
    let m = rho.matrix();
    let mut total = 0.0;
    for b in [b0, b1] {
        // ⟨b|_B ρ |b⟩_B, index = n_A + 2 n_B
        let block = Mat2::from_fn(|a, a2| {
            let mut z = ZERO;
            for (j, bj) in b.iter().enumerate() {
                for (k, bk) in b.iter().enumerate() {
                    z += bj.conj() * m[(a + 2 * j, a2 + 2 * k)] * bk;
                }
            }
            z
        });
        let p = block.trace().re;
        if p > 0.0 {
            total += p * entropy2(&(block / real(p)));
        }
    }
    total
}

struct MeasurementCost<'a>(&'a DensityMatrix);

impl CostFunction for MeasurementCost<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(conditional_entropy(self.0, x[0], x[1]))
    }
}

/// Maps (θ, φ) to θ ∈ [0, π], φ ∈ [0, 2π) describing the same projector pair.
fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    let mut t = theta.rem_euclid(2.0 * PI);
    let mut p = phi;
    if t > PI {
        t = 2.0 * PI - t;
        p += PI;
    }
    (t, p.rem_euclid(2.0 * PI))
}

/// Classical correlation and discord with a measurement on subsystem B.
///
/// A coarse grid over the Bloch sphere seeds a Nelder-Mead refinement.
pub fn discord(rho: &DensityMatrix, opts: &DiscordOptions) -> Result<Discord> {
    use std::f64::consts::PI;
    let n = opts.grid.max(2);
    let (ju, jv) = match opts.seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (rng.gen::<f64>(), rng.gen::<f64>())
        }
        None => (0.0, 0.0),
    };
    let dt = PI / n as f64;
    let dp = 2.0 * PI / n as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let t = (i as f64 + ju) * dt;
            let p = (j as f64 + jv) * dp;
            let v = conditional_entropy(rho, t, p);
            if v < best.0 {
                best = (v, t, p);
            }
        }
    }
    let (grid_best, gt, gp) = best;

    let simplex = vec![
        vec![gt, gp],
        vec![gt + 0.5 * dt, gp],
        vec![gt, gp + 0.5 * dp],
    ];
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(opts.tolerance)
        .expect("tolerance is positive");
    let res = Executor::new(MeasurementCost(rho), solver)
        .configure(|s| s.max_iters(opts.max_iters))
        .run()
        .map_err(|_| Error::Optimizer {
            iterations: 0,
            best: grid_best,
            grid_best,
            grid_theta: gt,
            grid_phi: gp,
        })?;
    let state = res.state();
    let converged = matches!(
        state.get_termination_status(),
        TerminationStatus::Terminated(TerminationReason::SolverConverged)
    );
    let refined = state.get_best_cost();
    if !converged {
        return Err(Error::Optimizer {
            iterations: state.get_iter(),
            best: refined.min(grid_best),
            grid_best,
            grid_theta: gt,
            grid_phi: gp,
        });
    }
    let (cond, t, p) = match state.get_best_param() {
        Some(x) if refined < grid_best => (refined, x[0], x[1]),
        _ => (grid_best, gt, gp),
    };
    let (theta, phi) = canonical_angles(t, p);

    let s_a = entropy2(&rho.reduced_mode1());
    let classical = (s_a - cond).max(0.0);
    let info = mutual_information(rho);
    let mut q = info - classical;
    if q < 0.0 && q > -1e-12 {
        q = 0.0;
    }
    Ok(Discord {
        classical: info.min(classical),
        discord: q.max(0.0),
        theta,
        phi,
    })
}

/// Basis in which correlations are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// Eigenmodes ζ₁, ζ₂ of the system Hamiltonian (the solver's basis).
    #[default]
    Energy,
    /// Local site modes η₁, η₂.
    Site,
}

/// Unitary taking eigenmode-basis states to the site basis; columns are
/// ζ-occupation states written in η occupations.
pub fn site_transform(basis: &EigenBasis) -> Mat4 {
    let (s, c) = basis.half_angle();
    let mut v = Mat4::zeros();
    v[(0, 0)] = ONE;
    v[(1, 1)] = real(s);
    v[(2, 1)] = real(c);
    v[(1, 2)] = real(c);
    v[(2, 2)] = real(-s);
    // ζ₁†ζ₂†|0⟩ = −η₁†η₂†|0⟩
    v[(3, 3)] = real(-1.0);
    v
}

pub fn to_site_basis(rho: &DensityMatrix, basis: &EigenBasis) -> DensityMatrix {
    rho.transformed(&site_transform(basis))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub coherence: f64,
    pub linear_entropy: f64,
    pub concurrence: f64,
    pub qmi: f64,
    pub classical_corr: f64,
    pub discord: f64,
}

/// All correlation measures of an energy-basis state, evaluated in `repr`.
/// The coherence is always the energy-basis |ρ₂₃|.
pub fn correlations(
    rho: &DensityMatrix,
    basis: &EigenBasis,
    repr: Representation,
    opts: &DiscordOptions,
) -> Result<CorrelationReport> {
    let local;
    let state = match repr {
        Representation::Energy => rho,
        Representation::Site => {
            local = to_site_basis(rho, basis);
            &local
        }
    };
    let d = discord(state, opts)?;
    Ok(CorrelationReport {
        coherence: coherence(rho),
        linear_entropy: linear_entropy(state),
        concurrence: concurrence(state),
        qmi: mutual_information(state),
        classical_corr: d.classical,
        discord: d.discord,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn bell() -> DensityMatrix {
        DensityMatrix::pure([real(1.0), ZERO, ZERO, real(1.0)]).unwrap()
    }

    /// Random X state with ρ₂₃ and ρ₁₄ inside the positivity bounds.
    fn random_x(rng: &mut ChaCha8Rng, with_outer: bool) -> DensityMatrix {
        let mut p: [f64; 4] = [0.0; 4].map(|_| rng.gen::<f64>() + 1e-3);
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= s);
        let mut m = Mat4::from_diagonal(&p.map(real).into());
        let r23 = C64::from_polar(rng.gen::<f64>() * (p[1] * p[2]).sqrt(), rng.gen_range(-PI..PI));
        m[(1, 2)] = r23;
        m[(2, 1)] = r23.conj();
        if with_outer {
            let r14 = C64::from_polar(rng.gen::<f64>() * (p[0] * p[3]).sqrt(), rng.gen_range(-PI..PI));
            m[(0, 3)] = r14;
            m[(3, 0)] = r14.conj();
        }
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn diagonal_state_has_zero_mixing_angle() {
        let rho = DensityMatrix::from_diagonal([0.1, 0.5, 0.3, 0.1]).unwrap();
        let d = spectral_decompose(&rho).unwrap();
        assert_eq!(d.alpha, 0.0);
        for (a, b) in d.p.iter().zip([0.1, 0.5, 0.3, 0.1]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-16);
        }
    }

    #[test]
    fn equal_populations_give_maximal_mixing() {
        let rho = DensityMatrix::x_state([0.2, 0.3, 0.3, 0.2], C64::new(0.0, -0.1)).unwrap();
        let d = spectral_decompose(&rho).unwrap();
        assert_abs_diff_eq!(d.alpha, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(d.phi, -FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(d.p[1], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(d.p[2], 0.2, epsilon = 1e-15);
    }

    #[test]
    fn spectral_decomposition_rejects_outer_coherence() {
        let mut m = Mat4::identity() * real(0.25);
        m[(0, 3)] = real(0.1);
        m[(3, 0)] = real(0.1);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(matches!(spectral_decompose(&rho), Err(Error::NotXForm { .. })));
    }

    #[test]
    fn spectral_reconstruction_and_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rho = random_x(&mut rng, false);
            let d = spectral_decompose(&rho).unwrap();
            assert!(crate::linalg::max_abs(&(d.reconstruct() - rho.matrix())) < 1e-12);
            let mut p = d.p;
            p.sort_by(|a, b| a.total_cmp(b));
            let ev = rho.eigenvalues();
            for k in 0..4 {
                assert_abs_diff_eq!(p[k], ev[k], epsilon = 1e-12);
            }
            assert!(d.p[1] >= d.p[2]);
            assert!((0.0..=PI).contains(&d.alpha));
            assert!(d.phi > -PI && d.phi <= PI);
        }
    }

    #[test]
    fn linear_entropy_limits() {
        assert_abs_diff_eq!(linear_entropy(&bell()), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(linear_entropy(&DensityMatrix::maximally_mixed()), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bell_state_correlations() {
        let rho = bell();
        assert_abs_diff_eq!(concurrence(&rho), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence_wootters(&rho), 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(mutual_information(&rho), 2.0, epsilon = 1e-12);
        let d = discord(&rho, &DiscordOptions::default()).unwrap();
        assert_abs_diff_eq!(d.classical, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.discord, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn classically_correlated_state_has_no_discord() {
        let rho = DensityMatrix::from_diagonal([0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(mutual_information(&rho), 1.0, epsilon = 1e-12);
        let d = discord(&rho, &DiscordOptions::default()).unwrap();
        assert_abs_diff_eq!(d.discord, 0.0, epsilon = 1e-9);
        assert_eq!(concurrence(&rho), 0.0);
    }

    #[test]
    fn product_state_is_uncorrelated() {
        let (a, b) = (0.3, 0.8);
        let rho = DensityMatrix::from_diagonal([(1.0 - a) * (1.0 - b), a * (1.0 - b), (1.0 - a) * b, a * b])
            .unwrap();
        assert_abs_diff_eq!(mutual_information(&rho), 0.0, epsilon = 1e-14);
        let d = discord(&rho, &DiscordOptions::default()).unwrap();
        assert_abs_diff_eq!(d.discord, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.classical, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn x_formula_matches_wootters_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 0..1200 {
            let rho = random_x(&mut rng, k % 2 == 0);
            let x = concurrence(&rho);
            let w = concurrence_wootters(&rho);
            assert!((x - w).abs() < 1e-10, "state {k}: {x} vs {w}");
        }
    }

    #[test]
    fn entropy_matches_direct_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_x(&mut rng, true);
        let ev = rho.matrix().clone().symmetric_eigen().eigenvalues;
        let direct: f64 = ev.iter().map(|&l| if l > 0.0 { -l * l.ln() / 2f64.ln() } else { 0.0 }).sum();
        assert_abs_diff_eq!(von_neumann(&rho), direct, epsilon = 1e-12);
    }

    #[test]
    fn seeded_grid_jitter_is_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_x(&mut rng, false);
        let opts = DiscordOptions { seed: Some(42), ..Default::default() };
        let a = discord(&rho, &opts).unwrap();
        let b = discord(&rho, &opts).unwrap();
        assert_eq!(a, b);
        let c = discord(&rho, &DiscordOptions::default()).unwrap();
        assert_abs_diff_eq!(a.discord, c.discord, epsilon = 1e-8);
    }

    #[test]
    fn site_transform_is_unitary() {
        let params = crate::SystemParams::new(1.0, 1.2, 0.05, 0.002, 0.002).unwrap();
        let v = site_transform(&crate::model::diagonalize(&params));
        assert!(crate::linalg::max_abs(&(v * v.adjoint() - Mat4::identity())) < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn correlations_ignore_the_coherence_phase(seed in 0u64..1000, phase in -PI..PI) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_x(&mut rng, false);
            let r = rho.rho23();
            let rotated = DensityMatrix::x_state(rho.populations(), C64::from_polar(r.norm(), phase)).unwrap();
            let opts = DiscordOptions::default();
            prop_assert!((mutual_information(&rho) - mutual_information(&rotated)).abs() < 1e-12);
            let a = discord(&rho, &opts).unwrap();
            let b = discord(&rotated, &opts).unwrap();
            prop_assert!((a.discord - b.discord).abs() < 1e-8);
            prop_assert!(a.discord <= mutual_information(&rho) + 1e-12);
        }
    }
}
