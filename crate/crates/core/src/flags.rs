//! Diagnostic flags attached to computed quantities. A flagged value is still
//! reported; the flag says how far it can be trusted.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// QFI at step h and h/2 differ by more than 1e-3 relative.
    StepSensitive,
    /// Outside the weak-tunneling regime (Δ ≤ 0.01ω, Γ ≤ Δ/2) where the
    /// semi-classical entropy production is known to be non-negative.
    SemiClassicalEpr,
    /// Semi-classical entropy production below −1e-10.
    NegativeEpr,
    /// ω₁ = ω₂ and Δ = 0: the eigenmode rotation is undefined and fixed at θ = π/2.
    DegenerateRotation,
}

impl Flag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::StepSensitive => "step_sensitive",
            Flag::SemiClassicalEpr => "semi_classical_epr",
            Flag::NegativeEpr => "negative_epr",
            Flag::DegenerateRotation => "degenerate_rotation",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Joins flags with `|`, sorted and without repeats.
pub fn join(flags: &[Flag]) -> String {
    let mut v = flags.to_vec();
    v.sort();
    v.dedup();
    v.iter().map(Flag::as_str).collect::<Vec<_>>().join("|")
}
