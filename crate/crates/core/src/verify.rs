//! Analytic-limit checks run by `ness verify`. Output is deterministic: no
//! timings, fixed number formatting.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::DensityMatrix;
use crate::error::Result;
use crate::linalg::{max_abs, real, C64, ZERO};
use crate::liouvillian::{liouvillian_for, steady_state, steady_state_svd};
use crate::metrology::{qfi_equilibrium_approx, qfi_fidelity_oracle, qfi_spectral};
use crate::model::{diagonalize, fermi_occupation, BathParams, SystemParams};
use crate::observables::{concurrence, concurrence_wootters, discord, mutual_information, DiscordOptions};
use crate::thermo::{epr_leading_order, ness_leading_order, thermo_report};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn weak(gamma: f64) -> SystemParams {
    SystemParams::symmetric(1.0, 0.005, gamma).expect("valid constants")
}

/// Grand-canonical Gibbs state of the eigenmodes.
pub fn gibbs_state(params: &SystemParams, t: f64, mu: f64) -> DensityMatrix {
    let b = diagonalize(params);
    let w = |e: f64, n: f64| (-(e - n * mu) / t).exp();
    let p = [
        1.0,
        w(b.omega_p1, 1.0),
        w(b.omega_p2, 1.0),
        w(b.omega_p1 + b.omega_p2, 2.0),
    ];
    let z: f64 = p.iter().sum();
    DensityMatrix::from_diagonal(p.map(|x| x / z)).expect("normalized populations")
}

pub fn run_checks() -> Vec<Check> {
    vec![
        check("fermi_occupation", || {
            let a = fermi_occupation(1.0, 0.2, 1.5)?;
            let b = fermi_occupation(1.5, 0.2, 1.0)?;
            let err = (a - 0.9241418199787566).abs().max((b - 0.0758581800212435).abs());
            Ok((err < 1e-15, format!("max error {err:.3e}")))
        }),
        check("gibbs_recovery", || {
            let params = weak(0.0002);
            let rho = steady_state(&liouvillian_for(&params, &BathParams::equilibrium(0.2, 0.5)?)?)?.rho;
            let gibbs = gibbs_state(&params, 0.2, 0.5);
            let rel = rho
                .populations()
                .iter()
                .zip(gibbs.populations())
                .map(|(a, b)| ((a - b) / b).abs())
                .fold(0.0, f64::max);
            let coh = rho.rho23().norm();
            Ok((rel < 1e-4 && coh < 1e-8, format!("diagonal rel {rel:.3e}, |rho23| {coh:.3e}")))
        }),
        check("svd_cross_check", || {
            let l = liouvillian_for(&weak(0.002), &BathParams::new(0.2, 0.8, 0.5, 0.5)?)?;
            let a = steady_state(&l)?.rho;
            let b = steady_state_svd(&l)?.rho;
            let d = max_abs(&(a.matrix() - b.matrix()));
            Ok((d < 1e-10, format!("max difference {d:.3e}")))
        }),
        check("leading_order_slope", || {
            let baths = BathParams::new(0.2, 0.8, 0.5, 0.5)?;
            let mut err = Vec::new();
            for g in [0.002, 0.001, 0.0005] {
                let params = weak(g);
                let l = liouvillian_for(&params, &baths)?;
                let rho = steady_state(&l)?.rho;
                let lo = ness_leading_order(&l.basis, &baths, &params)?;
                err.push(max_abs(&(rho.matrix() - lo.rho.matrix())));
            }
            let slope = (err[0] / err[2]).log2() / 2.0;
            Ok(((slope - 2.0).abs() < 0.3, format!("log-log slope {slope:.3}")))
        }),
        check("current_conservation", || {
            let mut worst: f64 = 0.0;
            for (delta, t2, mu2) in [(0.005, 0.8, 0.5), (0.05, 0.2, 1.5), (0.1, 1.0, 0.0)] {
                let params = SystemParams::symmetric(1.0, delta, 0.002)?;
                let baths = BathParams::new(0.2, t2, 0.5, mu2)?;
                let l = liouvillian_for(&params, &baths)?;
                let rho = steady_state(&l)?.rho;
                let r = thermo_report(&l, &rho, &params, &baths)?;
                worst = worst.max((r.i1 + r.i2).abs()).max((r.j1 + r.j2).abs());
            }
            Ok((worst < 1e-10, format!("max |I1+I2|, |J1+J2| {worst:.3e}")))
        }),
        check("equilibrium_nullity", || {
            let params = weak(0.002);
            let baths = BathParams::equilibrium(0.3, 0.8)?;
            let l = liouvillian_for(&params, &baths)?;
            let rho = steady_state(&l)?.rho;
            let r = thermo_report(&l, &rho, &params, &baths)?;
            let m = [r.i1, r.j1, r.epr, rho.rho23().norm()]
                .iter()
                .fold(0.0f64, |a, x| a.max(x.abs()));
            Ok((m < 1e-12, format!("max of currents, EPR, |rho23| {m:.3e}")))
        }),
        check("leading_order_epr_positive", || {
            let mut rng = ChaCha8Rng::seed_from_u64(2024);
            let mut min = f64::INFINITY;
            for _ in 0..1000 {
                let b = BathParams::new(
                    rng.gen_range(0.02..2.0),
                    rng.gen_range(0.02..2.0),
                    rng.gen_range(-2.0..3.0),
                    rng.gen_range(-2.0..3.0),
                )?;
                min = min.min(epr_leading_order(&b, rng.gen_range(0.2..2.0), 0.002));
            }
            Ok((min >= 0.0, format!("minimum over 1000 draws {min:.3e}")))
        }),
        check("qfi_equilibrium_limit", || {
            let params = weak(1e-4);
            let approx = qfi_equilibrium_approx(&params, 0.2, 0.5)?;
            let full = qfi_spectral(&params, &BathParams::equilibrium(0.2, 0.5)?, None)?;
            let rel = (full.f_total / approx - 1.0).abs();
            Ok((rel < 1e-2 && full.f_n.abs() < 1e-12, format!("relative deviation {rel:.3e}")))
        }),
        check("qfi_cross_validation", || {
            let params = weak(0.002);
            let baths = BathParams::new(0.2, 0.8, 0.5, 0.5)?;
            let s = qfi_spectral(&params, &baths, None)?.f_total;
            let o = qfi_fidelity_oracle(&params, &baths, None)?;
            let rel = ((s - o) / s).abs();
            Ok((rel < 1e-4, format!("spectral vs fidelity relative {rel:.3e}")))
        }),
        check("bell_state_correlations", || {
            let bell = DensityMatrix::pure([real(1.0), ZERO, ZERO, real(1.0)])?;
            let d = discord(&bell, &DiscordOptions::default())?;
            let err = (concurrence(&bell) - 1.0)
                .abs()
                .max((mutual_information(&bell) - 2.0).abs())
                .max((d.discord - 1.0).abs())
                .max((d.classical - 1.0).abs());
            Ok((err < 1e-9, format!("max deviation {err:.3e}")))
        }),
        check("concurrence_x_formula", || {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            let mut worst: f64 = 0.0;
            for _ in 0..200 {
                let mut p: [f64; 4] = [0.0; 4].map(|_| rng.gen::<f64>() + 1e-3);
                let s: f64 = p.iter().sum();
                p.iter_mut().for_each(|x| *x /= s);
                let r = rng.gen::<f64>() * (p[1] * p[2]).sqrt();
                let rho = DensityMatrix::x_state(p, C64::from_polar(r, rng.gen_range(-3.0..3.0)))?;
                worst = worst.max((concurrence(&rho) - concurrence_wootters(&rho)).abs());
            }
            Ok((worst < 1e-10, format!("max difference over 200 X states {worst:.3e}")))
        }),
    ]
}
