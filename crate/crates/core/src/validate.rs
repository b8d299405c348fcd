//! Self-check suite behind `pinch-sop validate`.
//!
//! Each check prints one line with its measured value. `Level::Fast` uses
//! 10^4 Monte Carlo trials everywhere; `Level::Full` uses the counts the
//! acceptance criteria are stated at.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distributions::{
    gamma_e_edges, pdf_gamma_e, pdf_gamma_e_branch, pdf_gamma_e_via_w, ChiCdf, PiecewiseDensity,
};
use crate::error::{Error, Result};
use crate::monte_carlo::{
    sample_chi, sample_gamma_e, simulate_lower_bound_event, simulate_sop_fpa, simulate_sop_pas,
    McConfig, DEFAULT_SEED,
};
use crate::sop::{
    lower_bound_pas_by_quadrature, lower_bound_pas_value, sop_asymptotic_with, sop_chebyshev,
    sop_exact, sop_lower_bound_fpa, sop_lower_bound_pas, InnerIntegrals, DEFAULT_CHEBYSHEV_ORDER,
};
use crate::stats::{chi_square_gof, ks_critical_value, ks_statistic};
use crate::sweep::{grid_from_range, run_sweep, SweepSpec, XAxis};
use crate::system_model::{dbm_to_watts, SystemConfig, SystemParams};
use crate::SopMethod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Level {
    #[default]
    Fast,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(Error::Usage(format!(
                "unknown level `{s}` (expected fast or full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    pub level: Level,
    pub seed: u64,
    pub workers: usize,
    /// Test hook: replaces the pinching lower-bound constant with a wrong
    /// value so the suite must fail.
    pub corrupt_constant: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            level: Level::Fast,
            seed: DEFAULT_SEED,
            workers: 1,
            corrupt_constant: false,
        }
    }
}

impl ValidateOptions {
    fn trials(&self, full: u64) -> u64 {
        match self.level {
            Level::Fast => 10_000,
            Level::Full => full,
        }
    }

    fn mc(&self, full: u64) -> McConfig {
        McConfig {
            trials: self.trials(full),
            seed: self.seed,
            workers: self.workers,
        }
    }

    fn bound(&self) -> f64 {
        if self.corrupt_constant {
            (2.0 * std::f64::consts::PI + 1.0) / 24.0
        } else {
            lower_bound_pas_value()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }

    fn from_result(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Default parameters with the given `D` (m), `P_s` (dBm) and `R_th`.
pub fn grid_config(d: f64, power_dbm: f64, rate: f64) -> Result<SystemConfig> {
    SystemConfig::new(SystemParams {
        region_side: d,
        transmit_power: dbm_to_watts(power_dbm),
        target_rate: rate,
        ..SystemParams::default()
    })
}

/// `{D in 10, 30} x {P_s in 0:5:40 dBm} x {R_th in 0.1, 0.5, 1}`.
pub fn acceptance_grid() -> Result<Vec<SystemConfig>> {
    let mut out = Vec::with_capacity(54);
    for d in [10.0, 30.0] {
        for p in grid_from_range(0.0, 40.0, 5.0)? {
            for r in [0.1, 0.5, 1.0] {
                out.push(grid_config(d, p, r)?);
            }
        }
    }
    Ok(out)
}

fn describe(cfg: &SystemConfig) -> String {
    format!(
        "D={} Ps={:.0}dBm R={}",
        cfg.region_side(),
        crate::system_model::watts_to_dbm(cfg.transmit_power()),
        cfg.target_rate()
    )
}

fn check_constants(opts: &ValidateOptions) -> Result<(bool, String)> {
    let bound = opts.bound();
    let pas = sop_lower_bound_pas().value;
    let closed = lower_bound_pas_by_quadrature(10.0, InnerIntegrals::ClosedForm)?;
    let numeric = lower_bound_pas_by_quadrature(30.0, InnerIntegrals::Numeric)?;
    let fpa = sop_lower_bound_fpa().value;
    let worst = [pas - bound, closed - bound, numeric - bound]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((
        worst <= 1e-10 && fpa == 0.5,
        format!("pas={pas:.15} quadrature={closed:.15} max|diff|={worst:.2e} fpa={fpa}"),
    ))
}

fn check_chebyshev_vs_exact(grid: &[SystemConfig]) -> Result<(bool, String)> {
    let mut worst = (0.0f64, String::new());
    for cfg in grid {
        let cheb = sop_chebyshev(cfg, DEFAULT_CHEBYSHEV_ORDER)?.value;
        let exact = sop_exact(cfg, 1e-8)?.value;
        let diff = (cheb - exact).abs();
        if diff >= worst.0 {
            worst = (diff, describe(cfg));
        }
    }
    Ok((
        worst.0 <= 1e-3,
        format!(
            "max|cheb-exact|={:.3e} at {} (limit 1e-3)",
            worst.0, worst.1
        ),
    ))
}

struct GridMc {
    cheb: Vec<f64>,
    pas: Vec<(f64, f64)>,
    fpa: Vec<(f64, f64)>,
}

fn grid_mc(grid: &[SystemConfig], mc: &McConfig) -> Result<GridMc> {
    let mut out = GridMc {
        cheb: Vec::new(),
        pas: Vec::new(),
        fpa: Vec::new(),
    };
    for cfg in grid {
        out.cheb
            .push(sop_chebyshev(cfg, DEFAULT_CHEBYSHEV_ORDER)?.value);
        let p = simulate_sop_pas(cfg, mc)?;
        out.pas.push((p.estimate, p.stderr));
        let f = simulate_sop_fpa(cfg, mc)?;
        out.fpa.push((f.estimate, f.stderr));
    }
    Ok(out)
}

fn check_mc_agreement(grid: &[SystemConfig], data: &GridMc, trials: u64) -> (bool, String) {
    let mut worst = (0.0f64, String::new());
    for ((cfg, &cheb), &(mc, se)) in grid.iter().zip(&data.cheb).zip(&data.pas) {
        let ratio = (mc - cheb).abs() / (3.0 * se).max(0.01);
        if ratio >= worst.0 {
            worst = (ratio, describe(cfg));
        }
    }
    (
        worst.0 <= 1.0,
        format!(
            "{trials} trials/point, max |mc-cheb|/max(3se,0.01)={:.3} at {}",
            worst.0, worst.1
        ),
    )
}

fn check_floor(data: &GridMc, bound: f64) -> (bool, String) {
    let mut margin = f64::INFINITY;
    let mut fpa_margin = f64::INFINITY;
    for (&cheb, &(mc, se)) in data.cheb.iter().zip(&data.pas) {
        margin = margin.min(cheb - bound).min(mc - (bound - 3.0 * se));
    }
    for &(mc, se) in &data.fpa {
        fpa_margin = fpa_margin.min(mc - (0.5 - 3.0 * se));
    }
    (
        margin >= 0.0 && fpa_margin >= 0.0,
        format!("min margin pas={margin:.4} fpa={fpa_margin:.4}"),
    )
}

fn check_event(opts: &ValidateOptions) -> Result<(bool, String)> {
    let bound = opts.bound();
    let mc = opts.mc(1_000_000);
    let mut ok = true;
    let mut parts = Vec::new();
    // the event is scale free, so each pair gets its own stream
    for (k, (d, h)) in [(10.0, 3.0), (30.0, 5.0)].into_iter().enumerate() {
        let mc = McConfig {
            seed: mc.seed.wrapping_add(k as u64),
            ..mc
        };
        let cfg = SystemConfig::new(SystemParams {
            region_side: d,
            height: h,
            ..SystemParams::default()
        })?;
        let r = simulate_lower_bound_event(&cfg, &mc)?;
        let z = (r.estimate - bound) / r.stderr;
        ok &= z.abs() <= 3.0;
        parts.push(format!("D={d},h={h}: {:.5} (z={z:+.2})", r.estimate));
    }
    Ok((ok, format!("{} trials, {}", mc.trials, parts.join(", "))))
}

fn check_plateau() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut identical = true;
    for d in [10.0, 30.0] {
        let chi = ChiCdf::new(d)?;
        for r in [0.1, 1.0] {
            let asym = sop_asymptotic_with(&grid_config(d, 60.0, r)?, &chi)?.value;
            let exact = sop_exact(&grid_config(d, 60.0, r)?, 1e-8)?.value;
            worst = worst.max((exact - asym).abs());
            let low = sop_asymptotic_with(&grid_config(d, 0.0, r)?, &chi)?.value;
            let high = sop_asymptotic_with(&grid_config(d, 50.0, r)?, &chi)?.value;
            identical &= low.to_bits() == high.to_bits();
        }
    }
    Ok((
        worst <= 1e-2 && identical,
        format!("max|exact(60dBm)-asym|={worst:.3e}, power independent={identical}"),
    ))
}

fn check_normalization() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for d in [10.0, 30.0] {
        let cfg = grid_config(d, 20.0, 0.1)?;
        for dens in [
            PiecewiseDensity::gamma_e_pdf(&cfg),
            PiecewiseDensity::w_pdf(&cfg),
        ] {
            worst = worst.max((dens.total_mass(1e-10)? - 1.0).abs());
        }
    }
    Ok((worst <= 1e-6, format!("max|mass-1|={worst:.2e}")))
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_change_of_variables(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for d in [10.0, 30.0] {
        let cfg = grid_config(d, 20.0, 0.1)?;
        let [lo, _, _, hi] = gamma_e_edges(&cfg);
        for _ in 0..5_000 {
            let z = lo + (hi - lo) * uniform(&mut rng);
            let a = pdf_gamma_e(z, &cfg)?;
            let b = pdf_gamma_e_via_w(z, &cfg)?;
            if a != b {
                worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
            }
        }
    }
    Ok((
        worst <= 1e-9,
        format!("10000 points, max rel diff={worst:.2e}"),
    ))
}

fn check_continuity() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for d in [10.0, 30.0] {
        let cfg = grid_config(d, 20.0, 0.1)?;
        let [_, e1, e2, _] = gamma_e_edges(&cfg);
        for (z, left, right) in [(e1, 2, 1), (e2, 1, 0)] {
            let a = pdf_gamma_e_branch(z, &cfg, left);
            let b = pdf_gamma_e_branch(z, &cfg, right);
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
        }
    }
    Ok((worst <= 1e-9, format!("max rel jump={worst:.2e}")))
}

fn check_gamma_e_gof(opts: &ValidateOptions) -> Result<(bool, String)> {
    let cfg = grid_config(10.0, 20.0, 0.1)?;
    let mc = opts.mc(1_000_000);
    let samples = sample_gamma_e(&cfg, &mc)?;
    let dens = PiecewiseDensity::gamma_e_pdf(&cfg);
    let t = chi_square_gof(
        &samples,
        |z| dens.evaluate(z),
        dens.support_lo,
        dens.support_hi,
        &dens.breakpoints,
        200,
        0.01,
    )?;
    Ok((
        t.passes(),
        format!(
            "{} samples, stat={:.1} crit={:.1} dof={}",
            samples.len(),
            t.statistic,
            t.critical_value,
            t.degrees_of_freedom
        ),
    ))
}

fn check_chi_ks(opts: &ValidateOptions) -> Result<(bool, String)> {
    let cfg = grid_config(10.0, 20.0, 0.1)?;
    let mc = opts.mc(1_000_000);
    let chi = ChiCdf::for_config(&cfg)?;
    let mut samples = sample_chi(&cfg, &mc)?;
    let n = samples.len();
    let stat = ks_statistic(&mut samples, |t| chi.cdf(t));
    let crit = ks_critical_value(n, 0.01);
    Ok((
        stat <= crit,
        format!("{n} samples, D={stat:.2e} crit={crit:.2e}"),
    ))
}

fn check_fpa_ordering(opts: &ValidateOptions) -> Result<(bool, String)> {
    let mc = opts.mc(100_000);
    let mut worst = f64::INFINITY;
    let mut points = 0;
    let rate_sweep = grid_from_range(0.1, 2.0, 0.1)?
        .into_iter()
        .map(|r| grid_config(30.0, 20.0, r));
    let power_sweep = grid_from_range(0.0, 40.0, 5.0)?
        .into_iter()
        .map(|p| grid_config(30.0, p, 0.1));
    for cfg in rate_sweep.chain(power_sweep) {
        let cfg = cfg?;
        let fpa = simulate_sop_fpa(&cfg, &mc)?.estimate;
        let cheb = sop_chebyshev(&cfg, DEFAULT_CHEBYSHEV_ORDER)?.value;
        let pas = simulate_sop_pas(&cfg, &mc)?.estimate;
        worst = worst.min(fpa - cheb.max(pas));
        points += 1;
    }
    Ok((
        worst >= 0.0,
        format!("{points} points at D=30, min(fpa-pas)={worst:.4}"),
    ))
}

fn check_determinism(opts: &ValidateOptions) -> Result<(bool, String)> {
    let base = grid_config(10.0, 20.0, 0.5)?;
    let mut spec = SweepSpec::new(XAxis::PowerDbm, grid_from_range(0.0, 40.0, 10.0)?, base);
    spec.methods = vec![
        SopMethod::MonteCarlo,
        SopMethod::MonteCarloFpa,
        SopMethod::Chebyshev,
    ];
    spec.mc = opts.mc(100_000);
    spec.mc.workers = 1;
    let one = run_sweep(&spec)?.to_csv_string();
    spec.mc.workers = 4;
    let four = run_sweep(&spec)?.to_csv_string();
    Ok((
        one == four,
        format!(
            "{} CSV bytes, workers 1 vs 4 identical={}",
            one.len(),
            one == four
        ),
    ))
}

/// Runs every check. Never stops early.
pub fn run_validation(opts: &ValidateOptions) -> Vec<Check> {
    let mut checks = vec![Check::from_result(
        "lower-bound-constants",
        check_constants(opts),
    )];
    match acceptance_grid() {
        Ok(grid) => {
            checks.push(Check::from_result(
                "chebyshev-vs-exact",
                check_chebyshev_vs_exact(&grid),
            ));
            let mc = opts.mc(100_000);
            match grid_mc(&grid, &mc) {
                Ok(data) => {
                    let (ok, detail) = check_mc_agreement(&grid, &data, mc.trials);
                    checks.push(Check::new("mc-vs-chebyshev", ok, detail));
                    let (ok, detail) = check_floor(&data, opts.bound());
                    checks.push(Check::new("lower-bound-floor", ok, detail));
                }
                Err(e) => {
                    for name in ["mc-vs-chebyshev", "lower-bound-floor"] {
                        checks.push(Check::new(name, false, format!("error: {e}")));
                    }
                }
            }
        }
        Err(e) => checks.push(Check::new("acceptance-grid", false, format!("error: {e}"))),
    }
    checks.push(Check::from_result("lower-bound-event", check_event(opts)));
    checks.push(Check::from_result("asymptotic-plateau", check_plateau()));
    checks.push(Check::from_result("normalization", check_normalization()));
    checks.push(Check::from_result(
        "change-of-variables",
        check_change_of_variables(opts.seed),
    ));
    checks.push(Check::from_result("gamma-e-continuity", check_continuity()));
    checks.push(Check::from_result(
        "gamma-e-chi-square",
        check_gamma_e_gof(opts),
    ));
    checks.push(Check::from_result("chi-ks", check_chi_ks(opts)));
    checks.push(Check::from_result("fpa-ordering", check_fpa_ordering(opts)));
    checks.push(Check::from_result("determinism", check_determinism(opts)));
    checks
}
