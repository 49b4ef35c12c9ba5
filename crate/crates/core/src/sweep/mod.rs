//! Parameter sweeps: evaluate the steady state and the selected observables
//! over a grid and write one row per point.

mod emit;
mod spec;

pub use emit::{columns, emit, write_table, Cell};
pub use spec::{resolve, Axis, DmuMode, Format, GridPoint, Observable, Scale, SweepSpec, PARAMETER_NAMES};

use rayon::prelude::*;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::liouvillian::{liouvillian_for, steady_state};
use crate::metrology::{qfi_fidelity_oracle, qfi_spectral_checked, QfiReport};
use crate::observables::{correlations, CorrelationReport, DiscordOptions};
use crate::thermo::{thermo_report, ThermoReport};

/// Everything computed at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointData {
    pub residual: f64,
    /// The eigenmode rotation angle was fixed by convention.
    pub degenerate: bool,
    pub rho: DensityMatrix,
    pub qfi: Option<QfiReport>,
    pub f_oracle: Option<f64>,
    pub correlations: Option<CorrelationReport>,
    pub thermo: Option<ThermoReport>,
}

impl PointData {
    pub fn flags(&self) -> Vec<Flag> {
        let mut f = Vec::new();
        if self.degenerate {
            f.push(Flag::DegenerateRotation);
        }
        if let Some(q) = &self.qfi {
            f.extend(&q.flags);
        }
        if let Some(t) = &self.thermo {
            f.extend(&t.flags);
        }
        f.sort();
        f.dedup();
        f
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub point: GridPoint,
    /// Failed points keep their error message instead of data.
    pub outcome: std::result::Result<PointData, String>,
}

/// Rows in grid order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub rows: Vec<Row>,
}

/// Discord optimizer seed for one point, derived from the sweep seed and
/// the point index so that results do not depend on evaluation order.
fn point_seed(seed: Option<u64>, index: usize) -> Option<u64> {
    seed.map(|s| s ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn evaluate_point(spec: &SweepSpec, point: &GridPoint) -> Result<PointData> {
    let (params, baths) = (&point.params, &point.baths);
    let l = liouvillian_for(params, baths)?;
    let ss = steady_state(&l)?;
    let rho = ss.rho;

    let qfi = if spec.has(Observable::Qfi) {
        Some(qfi_spectral_checked(params, baths, spec.qfi_step)?)
    } else {
        None
    };
    let f_oracle = if spec.has(Observable::QfiOracle) {
        Some(qfi_fidelity_oracle(params, baths, None)?)
    } else {
        None
    };
    let correlations = if spec.has(Observable::Correlations) {
        let opts = DiscordOptions {
            seed: point_seed(spec.seed, point.index),
            ..Default::default()
        };
        let c = correlations(&rho, &l.basis, spec.representation, &opts)?;
        if c.discord > c.qmi + 1e-12 {
            return Err(Error::Domain(format!(
                "discord {} exceeds mutual information {}",
                c.discord, c.qmi
            )));
        }
        Some(c)
    } else {
        None
    };
    let thermo = if spec.has(Observable::Thermo) {
        Some(thermo_report(&l, &rho, params, baths)?)
    } else {
        None
    };
    Ok(PointData {
        residual: ss.residual,
        degenerate: l.basis.degenerate,
        rho,
        qfi,
        f_oracle,
        correlations,
        thermo,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Worker threads; `Some(1)` runs serially, `None` uses rayon's default.
    pub threads: Option<usize>,
}

/// Evaluates every grid point. The spec is validated before any
/// computation; failing points are recorded and the sweep continues.
pub fn run_sweep(spec: &SweepSpec, opts: &RunOptions) -> Result<Table> {
    let grid = spec.grid()?;
    let eval = |p: &GridPoint| Row {
        point: *p,
        outcome: evaluate_point(spec, p).map_err(|e| e.to_string()),
    };
    let rows = match opts.threads {
        Some(1) => grid.iter().map(eval).collect(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config(format!("cannot start {n} threads: {e}")))?;
            pool.install(|| grid.par_iter().map(eval).collect())
        }
        None => grid.par_iter().map(eval).collect(),
    };
    Ok(Table { rows })
}
