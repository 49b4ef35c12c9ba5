//! Particle and energy currents into the system from each reservoir, the
//! semi-classical entropy production rate, and the leading-order analytic
//! steady state in Γ/Δ.
//!
//! Sign convention: a current is positive when it flows from the reservoir
//! into the system, I_l = Tr(D_l[ρ] N_S) and J_l = Tr(D_l[ρ] H_S).

use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::linalg::{unvec, vec, Mat4, C64};
use crate::liouvillian::{mode_operators, BathDissipator, Liouvillian};
use crate::model::{occupation_moments, BathParams, EigenBasis, SystemParams};

/// Tolerance on the unitary part's contribution to the currents.
const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoReport {
    pub i1: f64,
    pub i2: f64,
    pub j1: f64,
    pub j2: f64,
    /// Semi-classical entropy production rate Ṡ.
    pub epr: f64,
    pub flags: Vec<Flag>,
}

/// Tr(D[ρ] O).
pub fn current(rho: &DensityMatrix, d: &BathDissipator, observable: &Mat4) -> f64 {
    let drho = unvec(&(d.total() * vec(rho.matrix())));
    (drho * observable).trace().re
}

pub fn particle_current(rho: &DensityMatrix, d: &BathDissipator) -> f64 {
    current(rho, d, &mode_operators().number())
}

pub fn energy_current(rho: &DensityMatrix, d: &BathDissipator, h_s: &Mat4) -> f64 {
    current(rho, d, h_s)
}

/// Ṡ = −J₁(1/T₁ − 1/T₂) + I₁(μ₁/T₁ − μ₂/T₂).
pub fn entropy_production_rate(j1: f64, i1: f64, baths: &BathParams) -> f64 {
    -j1 * (baths.beta1() - baths.beta2()) + i1 * (baths.mu1 * baths.beta1() - baths.mu2 * baths.beta2())
}

/// Weak-tunneling regime in which Ṡ is proven non-negative: symmetric
/// junction, |Δ| ≤ 0.01ω and Γ_k ≤ |Δ|/2.
pub fn in_weak_regime(params: &SystemParams) -> bool {
    let d = params.delta.abs();
    params.is_symmetric()
        && d <= 0.01 * params.omega1
        && params.gamma1 <= 0.5 * d
        && params.gamma2 <= 0.5 * d
}

/// Currents and entropy production at the steady state `rho` of `l`.
pub fn thermo_report(
    l: &Liouvillian,
    rho: &DensityMatrix,
    params: &SystemParams,
    baths: &BathParams,
) -> Result<ThermoReport> {
    let n = mode_operators().number();
    let h = &l.hamiltonian;

    let u = unvec(&(l.unitary * vec(rho.matrix())));
    let leak = (u * n).trace().norm().max((u * h).trace().norm());
    if leak > UNITARY_TOL {
        return Err(Error::Solver {
            residual: leak,
            reason: "coherent part of the generator contributes to the currents".into(),
        });
    }

    let i1 = current(rho, l.bath(1), &n);
    let i2 = current(rho, l.bath(2), &n);
    let j1 = current(rho, l.bath(1), h);
    let j2 = current(rho, l.bath(2), h);
    let epr = entropy_production_rate(j1, i1, baths);

    let mut flags = Vec::new();
    if !in_weak_regime(params) {
        flags.push(Flag::SemiClassicalEpr);
    }
    if epr < -1e-10 {
        flags.push(Flag::NegativeEpr);
    }
    Ok(ThermoReport {
        i1,
        i2,
        j1,
        j2,
        epr,
        flags,
    })
}

/// Steady state to first order in g = Γ/Δ.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingOrder {
    pub rho: DensityMatrix,
    pub g: f64,
    /// g > 0.2; the expansion (and positivity of `rho`) is no longer reliable.
    pub large_g: bool,
}

/// ρ₁₁ = (1−n₁ₚ)(1−n₂ₚ), ρ₂₂ = n₁ₚ − n₁ₚn₂ₚ, ρ₃₃ = n₂ₚ − n₁ₚn₂ₚ,
/// ρ₄₄ = n₁ₚn₂ₚ, ρ₂₃ = −i(n₁ₘ + n₂ₘ)g/2.
///
/// With Γ₁ ≠ Γ₂, g uses the mean rate.
pub fn ness_leading_order(
    basis: &EigenBasis,
    baths: &BathParams,
    params: &SystemParams,
) -> Result<LeadingOrder> {
    if params.delta == 0.0 {
        return Err(Error::Domain("leading-order state needs Δ ≠ 0 (g = Γ/Δ)".into()));
    }
    let g = 0.5 * (params.gamma1 + params.gamma2) / params.delta;
    let n = occupation_moments(basis, baths)?;
    let (a, b) = (n.n1p, n.n2p);
    let mut m = Mat4::from_diagonal(
        &[(1.0 - a) * (1.0 - b), a - a * b, b - a * b, a * b]
            .map(crate::linalg::real)
            .into(),
    );
    let r23 = C64::new(0.0, -0.5 * (n.n1m + n.n2m) * g);
    m[(1, 2)] = r23;
    m[(2, 1)] = r23.conj();
    Ok(LeadingOrder {
        rho: DensityMatrix::new_unchecked(m),
        g,
        large_g: g.abs() > 0.2,
    })
}

/// ln cosh y without overflow.
fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// ln sinh y for y > 0.
fn ln_sinh(y: f64) -> f64 {
    y + (-(-2.0 * y).exp()).ln_1p() - std::f64::consts::LN_2
}

/// Leading-order entropy production of the symmetric junction,
///
/// ```text
/// Ṡ = Γ b [n(ω,T₁,μ₁) − n(ω,T₂,μ₂)],   b = (μ₁β₁ + ωβ₂) − (μ₂β₂ + ωβ₁)
/// ```
///
/// evaluated as Γ b sinh(b/2) / (2 cosh(x₁/2) cosh(x₂/2)), x_l = β_l(ω − μ_l),
/// which is manifestly non-negative.
pub fn epr_leading_order(baths: &BathParams, omega: f64, gamma: f64) -> f64 {
    let x1 = baths.beta1() * (omega - baths.mu1);
    let x2 = baths.beta2() * (omega - baths.mu2);
    let b = (x2 - x1).abs();
    if b == 0.0 || gamma == 0.0 {
        return 0.0;
    }
    let log = ln_sinh(0.5 * b) - ln_cosh(0.5 * x1) - ln_cosh(0.5 * x2) - std::f64::consts::LN_2;
    gamma * b * log.exp()
}
