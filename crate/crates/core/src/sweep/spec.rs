//! Sweep configuration: fixed parameters, up to two swept axes and the
//! selection of observables. Read from TOML; see `docs/config.md`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BathParams, SystemParams};
use crate::observables::Representation;

/// Parameter names accepted in `[fixed]` and as axis names.
pub const PARAMETER_NAMES: [&str; 15] = [
    "omega1", "omega2", "omega", "delta", "gamma1", "gamma2", "gamma", "t1", "t2", "t", "dt", "mu1",
    "mu2", "mu", "dmu",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    return self.stop;
                }
                let s = k as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.start + s * (self.stop - self.start),
                    Scale::Log => self.start * (self.stop / self.start).powf(s),
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if !PARAMETER_NAMES.contains(&self.name.as_str()) {
            return Err(Error::config(format!("unknown axis parameter `{}`", self.name)));
        }
        if self.count < 2 {
            return Err(Error::config(format!("axis `{}` needs count >= 2", self.name)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::config(format!("axis `{}` has a non-finite bound", self.name)));
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::config(format!(
                "log axis `{}` needs positive start and stop",
                self.name
            )));
        }
        Ok(())
    }
}

/// Groups of output columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Density-matrix entries.
    State,
    /// Spectral QFI with the step-robustness check.
    Qfi,
    /// Fidelity-based QFI (four extra solves per point).
    QfiOracle,
    Correlations,
    Thermo,
}

fn default_observables() -> Vec<Observable> {
    vec![
        Observable::State,
        Observable::Qfi,
        Observable::Correlations,
        Observable::Thermo,
    ]
}

/// How `mu` and `dmu` set the two chemical potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DmuMode {
    /// μ₁ = μ + dmu, μ₂ = μ − dmu.
    #[default]
    Split,
    /// μ₁ = μ + dmu, μ₂ = μ.
    Bath1,
    /// μ₁ = μ, μ₂ = μ + dmu.
    Bath2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    #[serde(default)]
    pub axes: Vec<Axis>,
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    /// Finite-difference step for the QFI; defaults to max(1e-6, 1e-4|Δ|).
    #[serde(default)]
    pub qfi_step: Option<f64>,
    #[serde(default)]
    pub dmu_mode: DmuMode,
    #[serde(default)]
    pub representation: Representation,
    /// Seed of the discord grid jitter; no jitter when absent.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub format: Option<Format>,
}

/// One fully resolved grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    /// Axis indices (row-major, first axis outermost).
    pub coords: [Option<usize>; 2],
    pub params: SystemParams,
    pub baths: BathParams,
}

impl SweepSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn has(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }

    /// Checks names, axes and every grid point; returns the grid in
    /// row-major order.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        if self.axes.len() > 2 {
            return Err(Error::config("at most two axes are supported"));
        }
        for name in self.fixed.keys() {
            if !PARAMETER_NAMES.contains(&name.as_str()) {
                return Err(Error::config(format!("unknown parameter `{name}`")));
            }
        }
        for (k, axis) in self.axes.iter().enumerate() {
            axis.validate()?;
            if self.fixed.contains_key(&axis.name) {
                return Err(Error::config(format!(
                    "`{}` is both fixed and swept",
                    axis.name
                )));
            }
            if self.axes[..k].iter().any(|a| a.name == axis.name) {
                return Err(Error::config(format!("axis `{}` appears twice", axis.name)));
            }
        }
        if let Some(h) = self.qfi_step {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::config(format!("qfi_step must be positive, got {h}")));
            }
        }

        let values: Vec<Vec<f64>> = self.axes.iter().map(Axis::values).collect();
        let shape: Vec<usize> = values.iter().map(Vec::len).collect();
        let total: usize = shape.iter().product();
        let mut points = Vec::with_capacity(total);
        for index in 0..total {
            let mut coords = [None, None];
            let mut assigned = self.fixed.clone();
            let mut rest = index;
            for k in (0..shape.len()).rev() {
                let c = rest % shape[k];
                rest /= shape[k];
                coords[k] = Some(c);
                assigned.insert(self.axes[k].name.clone(), values[k][c]);
            }
            let (params, baths) = resolve(&assigned, self.dmu_mode)?;
            points.push(GridPoint {
                index,
                coords,
                params,
                baths,
            });
        }
        Ok(points)
    }
}

fn pick(
    map: &BTreeMap<String, f64>,
    specific: &str,
    shared: &str,
) -> Result<Option<f64>> {
    match (map.get(specific), map.get(shared)) {
        (Some(_), Some(_)) => Err(Error::config(format!(
            "`{specific}` and `{shared}` cannot both be given"
        ))),
        (Some(&v), None) | (None, Some(&v)) => Ok(Some(v)),
        (None, None) => Ok(None),
    }
}

fn required(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::config(format!("missing parameter `{name}`")))
}

/// Turns named values (including the shorthands omega, gamma, t, dt, mu,
/// dmu) into validated parameter structs.
pub fn resolve(map: &BTreeMap<String, f64>, mode: DmuMode) -> Result<(SystemParams, BathParams)> {
    let omega1 = required(pick(map, "omega1", "omega")?, "omega1")?;
    let omega2 = required(pick(map, "omega2", "omega")?, "omega2")?;
    let gamma1 = required(pick(map, "gamma1", "gamma")?, "gamma1")?;
    let gamma2 = required(pick(map, "gamma2", "gamma")?, "gamma2")?;
    let delta = required(map.get("delta").copied(), "delta")?;

    let t1 = required(pick(map, "t1", "t")?, "t1")?;
    let t2 = match (map.get("t2"), map.get("t"), map.get("dt")) {
        (Some(&v), None, None) => v,
        (None, Some(&v), None) => v,
        (None, None, Some(&d)) => t1 + d,
        (None, None, None) => return Err(Error::config("missing parameter `t2` (or `t`, `dt`)")),
        _ => return Err(Error::config("give only one of `t2`, `t`, `dt`")),
    };

    let explicit = map.contains_key("mu1") || map.contains_key("mu2");
    let shorthand = map.contains_key("mu") || map.contains_key("dmu");
    let (mu1, mu2) = if explicit {
        if shorthand {
            return Err(Error::config("give either `mu1`/`mu2` or `mu`/`dmu`, not both"));
        }
        (
            required(map.get("mu1").copied(), "mu1")?,
            required(map.get("mu2").copied(), "mu2")?,
        )
    } else {
        let mu = required(map.get("mu").copied(), "mu")?;
        let d = map.get("dmu").copied().unwrap_or(0.0);
        match mode {
            DmuMode::Split => (mu + d, mu - d),
            DmuMode::Bath1 => (mu + d, mu),
            DmuMode::Bath2 => (mu, mu + d),
        }
    };

    Ok((
        SystemParams::new(omega1, omega2, delta, gamma1, gamma2)?,
        BathParams::new(t1, t2, mu1, mu2)?,
    ))
}
