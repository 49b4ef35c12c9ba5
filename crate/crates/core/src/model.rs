//! System and reservoir parameters, the single-particle diagonalization and
//! Fermi-Dirac occupations of the two reservoirs.
//!
//! Units: ħ = k_B = 1, energies in units of the site frequency.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bare junction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega1: f64,
    pub omega2: f64,
    /// Tunneling rate Δ between the two sites.
    pub delta: f64,
    /// Decay rate attached to eigenmode 1 (spectral density at ω′₁).
    pub gamma1: f64,
    /// Decay rate attached to eigenmode 2 (spectral density at ω′₂).
    pub gamma2: f64,
}

impl SystemParams {
    pub fn new(omega1: f64, omega2: f64, delta: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        let p = SystemParams {
            omega1,
            omega2,
            delta,
            gamma1,
            gamma2,
        };
        p.validate()?;
        Ok(p)
    }

    /// Symmetric junction ω₁ = ω₂ = ω with Γ₁ = Γ₂ = Γ.
    pub fn symmetric(omega: f64, delta: f64, gamma: f64) -> Result<Self> {
        Self::new(omega, omega, delta, gamma, gamma)
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega1", self.omega1)?;
        positive("omega2", self.omega2)?;
        finite("delta", self.delta)?;
        non_negative("gamma1", self.gamma1)?;
        non_negative("gamma2", self.gamma2)?;
        Ok(())
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        SystemParams { delta, ..*self }
    }

    pub fn is_symmetric(&self) -> bool {
        (self.omega1 - self.omega2).abs() <= 1e-12 * self.omega1.abs().max(self.omega2.abs())
    }
}

/// Temperatures and chemical potentials of the two fermionic reservoirs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    pub t1: f64,
    pub t2: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl BathParams {
    pub fn new(t1: f64, t2: f64, mu1: f64, mu2: f64) -> Result<Self> {
        let b = BathParams { t1, t2, mu1, mu2 };
        b.validate()?;
        Ok(b)
    }

    /// Two identical reservoirs.
    pub fn equilibrium(t: f64, mu: f64) -> Result<Self> {
        Self::new(t, t, mu, mu)
    }

    pub fn validate(&self) -> Result<()> {
        positive("t1", self.t1)?;
        positive("t2", self.t2)?;
        finite("mu1", self.mu1)?;
        finite("mu2", self.mu2)?;
        Ok(())
    }

    pub fn is_equilibrium(&self) -> bool {
        self.t1 == self.t2 && self.mu1 == self.mu2
    }

    /// Exchange the roles of reservoir 1 and reservoir 2.
    pub fn swapped(&self) -> Self {
        BathParams {
            t1: self.t2,
            t2: self.t1,
            mu1: self.mu2,
            mu2: self.mu1,
        }
    }

    pub fn beta1(&self) -> f64 {
        1.0 / self.t1
    }

    pub fn beta2(&self) -> f64 {
        1.0 / self.t2
    }

    /// (T, μ) of reservoir `l` (1 or 2).
    pub fn bath(&self, l: usize) -> (f64, f64) {
        match l {
            1 => (self.t1, self.mu1),
            2 => (self.t2, self.mu2),
            _ => panic!("reservoir index must be 1 or 2, got {l}"),
        }
    }
}

fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be strictly positive",
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    finite(name, value)?;
    if value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative",
        })
    }
}

/// Dressed frequencies and rotation of the diagonalized system Hamiltonian.
///
/// The rotation angle θ is `atan2(2Δ, ω₂ − ω₁)`, so `sin_theta` has the sign
/// of Δ. In terms of the site operators η the eigenmodes are
///
/// ```text
/// ζ₁ = sin(θ/2) η₁ + cos(θ/2) η₂     (energy ω′₁, the larger one)
/// ζ₂ = cos(θ/2) η₁ − sin(θ/2) η₂     (energy ω′₂)
/// ```
///
/// so site 1 carries weight ½(1 − cosθ) on mode 1 and ½(1 + cosθ) on mode 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenBasis {
    pub omega_p1: f64,
    pub omega_p2: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    /// Set when ω₁ = ω₂ and Δ = 0; the angle is then fixed at θ = π/2.
    pub degenerate: bool,
}

impl EigenBasis {
    pub fn theta(&self) -> f64 {
        self.sin_theta.atan2(self.cos_theta)
    }

    /// (sin θ/2, cos θ/2).
    pub fn half_angle(&self) -> (f64, f64) {
        let half = 0.5 * self.theta();
        (half.sin(), half.cos())
    }

    pub fn splitting(&self) -> f64 {
        self.omega_p1 - self.omega_p2
    }
}

pub fn diagonalize(params: &SystemParams) -> EigenBasis {
    let SystemParams {
        omega1,
        omega2,
        delta,
        ..
    } = *params;
    let mean = 0.5 * (omega1 + omega2);
    let root = (omega1 - omega2).hypot(2.0 * delta);
    if root == 0.0 {
        return EigenBasis {
            omega_p1: mean,
            omega_p2: mean,
            cos_theta: 0.0,
            sin_theta: 1.0,
            degenerate: true,
        };
    }
    let theta = (2.0 * delta).atan2(omega2 - omega1);
    let half = 0.5 * root;
    EigenBasis {
        omega_p1: mean + half,
        omega_p2: mean - half,
        cos_theta: theta.cos(),
        sin_theta: theta.sin(),
        degenerate: false,
    }
}

/// Fermi-Dirac occupation 1/(e^{(ω−μ)/T} + 1).
///
/// Evaluated without overflow; for |ω−μ|/T beyond ~745 the result rounds to
/// exactly 0 or 1.
pub fn fermi_occupation(omega: f64, t: f64, mu: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "Fermi occupation needs a strictly positive finite temperature, got {t}"
        )));
    }
    let x = (omega - mu) / t;
    Ok(if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    })
}

/// Sums and differences of the two reservoirs' occupations at each dressed
/// frequency: n_{i,p/m} = (n(ω′ᵢ,T₁,μ₁) ± n(ω′ᵢ,T₂,μ₂)) / 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupations {
    pub n1p: f64,
    pub n2p: f64,
    pub n1m: f64,
    pub n2m: f64,
}

pub fn occupation_moments(basis: &EigenBasis, baths: &BathParams) -> Result<Occupations> {
    let pair = |w: f64| -> Result<(f64, f64)> {
        let a = fermi_occupation(w, baths.t1, baths.mu1)?;
        let b = fermi_occupation(w, baths.t2, baths.mu2)?;
        Ok((0.5 * (a + b), 0.5 * (a - b)))
    };
    let (n1p, n1m) = pair(basis.omega_p1)?;
    let (n2p, n2m) = pair(basis.omega_p2)?;
    Ok(Occupations { n1p, n2p, n1m, n2m })
}
