//! Quantum Fisher information of the steady state with respect to the
//! tunneling rate Δ.
//!
//! The spectral route differentiates the X-state eigen-decomposition:
//!
//! ```text
//! F = Σ_i (∂p_i)²/p_i + (p₂ − p₃)²/(p₂ + p₃) [(∂α)² + sin²α (∂φ)²]
//!     \_____ F^E _____/   \______________ F^N ______________/
//! ```
//!
//! The fidelity route uses F ≈ 8(1 − A(ρ(Δ − h/2), ρ(Δ + h/2)))/h² with the
//! Uhlmann fidelity A = Tr√(√ρ₁ ρ₂ √ρ₁), Richardson-extrapolated over h and
//! h/2. It does not use the X structure and serves as a cross-check.
//!
//! Both routes differentiate the energy-basis density matrix returned by
//! the solver.

use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::linalg::{hermitian_eigenvalues, sqrt_psd};
use crate::liouvillian::solve_ness;
use crate::model::{BathParams, SystemParams};
use crate::observables::{spectral_decompose, wrap_angle};

/// Eigenvalues below this are treated as zero.
pub const ZERO_PROBABILITY: f64 = 1e-12;
/// Largest derivative of a vanishing eigenvalue that is still dropped.
pub const ZERO_DERIVATIVE: f64 = 1e-8;
/// Relative disagreement between steps h and h/2 that flags a point.
pub const STEP_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QfiReport {
    pub f_total: f64,
    /// Population part F^E.
    pub f_e: f64,
    /// Coherence part F^N.
    pub f_n: f64,
    /// Finite-difference step used.
    pub step: f64,
    pub flags: Vec<Flag>,
}

/// h = max(1e-6, 1e-4|Δ|).
pub fn default_step(delta: f64) -> f64 {
    (1e-4 * delta.abs()).max(1e-6)
}

/// Step of the fidelity oracle, max(1e-5, 1e-2|Δ|). Smaller steps push
/// 1 − A into the rounding noise of the eigenvalues.
pub fn default_oracle_step(delta: f64) -> f64 {
    (1e-2 * delta.abs()).max(1e-5)
}

fn check_step(x: f64, h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter {
            name: "qfi_step",
            value: h,
            reason: "must be positive and finite",
        });
    }
    if (x + h) - (x - h) == 0.0 || h < 1e-13 * x.abs() {
        return Err(Error::StepUnderflow { step: h, value: x });
    }
    Ok(())
}

/// Spectral QFI of a one-parameter X-state family at `x` with central
/// differences of step `h`.
pub fn qfi_spectral_family<F>(family: F, x: f64, h: f64) -> Result<QfiReport>
where
    F: Fn(f64) -> Result<DensityMatrix>,
{
    check_step(x, h)?;
    let lo = spectral_decompose(&family(x - h)?)?;
    let mid = spectral_decompose(&family(x)?)?;
    let hi = spectral_decompose(&family(x + h)?)?;
    let width = (x + h) - (x - h);
    let diff = |a: f64, b: f64| (b - a) / width;

    let mut f_e = 0.0;
    for i in 0..4 {
        let p = mid.p[i];
        let dp = diff(lo.p[i], hi.p[i]);
        if p < ZERO_PROBABILITY {
            if dp.abs() < ZERO_DERIVATIVE {
                continue;
            }
            return Err(Error::RankChange {
                index: i + 1,
                p,
                derivative: dp,
            });
        }
        f_e += dp * dp / p;
    }

    let (p2, p3) = (mid.p[1], mid.p[2]);
    let f_n = if p2 + p3 < ZERO_PROBABILITY {
        0.0
    } else {
        let unwrap = |phi: f64| mid.phi + wrap_angle(phi - mid.phi);
        let da = diff(lo.alpha, hi.alpha);
        let dphi = diff(unwrap(lo.phi), unwrap(hi.phi));
        let s = mid.alpha.sin();
        (p2 - p3).powi(2) / (p2 + p3) * (da * da + s * s * dphi * dphi)
    };

    Ok(QfiReport {
        f_total: f_e + f_n,
        f_e,
        f_n,
        step: h,
        flags: Vec::new(),
    })
}

fn ness_family(params: SystemParams, baths: BathParams) -> impl Fn(f64) -> Result<DensityMatrix> {
    move |delta| Ok(solve_ness(&params.with_delta(delta), &baths)?.rho)
}

/// Spectral QFI of the steady state with respect to Δ. `h` defaults to
/// [`default_step`].
pub fn qfi_spectral(params: &SystemParams, baths: &BathParams, h: Option<f64>) -> Result<QfiReport> {
    let h = h.unwrap_or_else(|| default_step(params.delta));
    qfi_spectral_family(ness_family(*params, *baths), params.delta, h)
}

/// As [`qfi_spectral`], additionally recomputing at h/2 and flagging the
/// point when the two differ by more than [`STEP_TOL`] relative.
pub fn qfi_spectral_checked(
    params: &SystemParams,
    baths: &BathParams,
    h: Option<f64>,
) -> Result<QfiReport> {
    let mut r = qfi_spectral(params, baths, h)?;
    let half = qfi_spectral(params, baths, Some(0.5 * r.step))?;
    let scale = r.f_total.abs().max(half.f_total.abs());
    if scale > 0.0 && (r.f_total - half.f_total).abs() > STEP_TOL * scale {
        r.flags.push(Flag::StepSensitive);
    }
    Ok(r)
}

/// Uhlmann fidelity A = Tr√(√ρ₁ ρ₂ √ρ₁) (not squared).
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let s = sqrt_psd(a.matrix());
    hermitian_eigenvalues(&(s * b.matrix() * s))
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum()
}

/// Fidelity-based QFI of a one-parameter family, Richardson-extrapolated
/// over steps h and h/2.
pub fn qfi_fidelity_family<F>(family: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<DensityMatrix>,
{
    check_step(x, h)?;
    let estimate = |h: f64| -> Result<f64> {
        let a = family(x - 0.5 * h)?;
        let b = family(x + 0.5 * h)?;
        let width = (x + 0.5 * h) - (x - 0.5 * h);
        Ok(8.0 * (1.0 - fidelity(&a, &b)) / (width * width))
    };
    let coarse = estimate(h)?;
    let fine = estimate(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Fidelity-based cross-check of [`qfi_spectral`]. `h` defaults to
/// [`default_oracle_step`].
pub fn qfi_fidelity_oracle(params: &SystemParams, baths: &BathParams, h: Option<f64>) -> Result<f64> {
    let h = h.unwrap_or_else(|| default_oracle_step(params.delta));
    qfi_fidelity_family(ness_family(*params, *baths), params.delta, h)
}

/// Weak-tunneling QFI of the symmetric junction in equilibrium with a single
/// reservoir at (T, μ):
///
/// ```text
/// F ≈ (β²/Z)(e^{β(ω+Δ−μ)} + e^{β(ω−Δ−μ)}),   Z = (1 + e^{β(ω−μ)})²
/// ```
///
/// evaluated as β² cosh(βΔ) / (2 cosh²(β(ω−μ)/2)). Accurate to about 1%
/// for Δ ≤ 0.01ω, Γ ≪ Δ and βΔ ≲ 0.1.
pub fn qfi_equilibrium_approx(params: &SystemParams, t: f64, mu: f64) -> Result<f64> {
    if !params.is_symmetric() {
        return Err(Error::Domain(
            "equilibrium QFI approximation needs a symmetric junction (ω₁ = ω₂)".into(),
        ));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("temperature must be positive and finite, got {t}")));
    }
    let beta = 1.0 / t;
    let c = (0.5 * beta * (params.omega1 - mu)).cosh();
    Ok(beta * beta * (beta * params.delta).cosh() / (2.0 * c * c))
}
