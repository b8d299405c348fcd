//! Parameter sweeps and distribution dumps, emitted as CSV.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::distributions::{ChiCdf, PiecewiseDensity};
use crate::error::{invalid, Error, Result};
use crate::monte_carlo::{simulate_sop_fpa, simulate_sop_pas, McConfig};
use crate::sop::{
    sop_asymptotic_with, sop_chebyshev, sop_exact, sop_lower_bound_fpa, sop_lower_bound_pas,
    SopEstimate, SopMethod, DEFAULT_CHEBYSHEV_ORDER,
};
use crate::system_model::{dbm_to_watts, SystemConfig};

/// Tolerance used by the `exact` method in sweeps.
pub const SWEEP_EXACT_TOL: f64 = 1e-8;

pub const SWEEP_HEADER: &str = "x,method,sop,stderr,order_or_trials";
pub const DIST_HEADER: &str = "z,value,breakpoint";

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XAxis {
    /// Transmit power, dBm.
    PowerDbm,
    /// Target secrecy rate, bps/Hz.
    RateBpsHz,
    /// Region side D, metres.
    RegionD,
}

impl XAxis {
    pub fn name(self) -> &'static str {
        match self {
            XAxis::PowerDbm => "power",
            XAxis::RateBpsHz => "rate",
            XAxis::RegionD => "region",
        }
    }

    /// Configuration at sweep value `x`.
    pub fn apply(self, base: &SystemConfig, x: f64) -> Result<SystemConfig> {
        match self {
            XAxis::PowerDbm => {
                if !x.is_finite() {
                    return Err(invalid("transmit_power", format!("{x} dBm is not finite")));
                }
                base.with_transmit_power(dbm_to_watts(x))
            }
            XAxis::RateBpsHz => base.with_target_rate(x),
            XAxis::RegionD => base.with_region_side(x),
        }
    }
}

impl FromStr for XAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(XAxis::PowerDbm),
            "rate" => Ok(XAxis::RateBpsHz),
            "region" => Ok(XAxis::RegionD),
            _ => Err(Error::Usage(format!(
                "unknown x axis `{s}` (expected power, rate or region)"
            ))),
        }
    }
}

/// Inclusive range `min, min + step, ...` up to `max` (with a small slack for
/// rounding).
pub fn grid_from_range(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return Err(invalid("grid", "min, max and step must be finite"));
    }
    if step <= 0.0 {
        return Err(invalid("step", format!("must be > 0, got {step}")));
    }
    let count = ((max - min) / step + 1e-9).floor();
    if count < 0.0 {
        return Ok(Vec::new());
    }
    Ok((0..=count as usize)
        .map(|k| min + k as f64 * step)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub x_axis: XAxis,
    pub x_values: Vec<f64>,
    /// Parameters held fixed; the swept one is overwritten per point.
    pub base: SystemConfig,
    pub methods: Vec<SopMethod>,
    pub mc: McConfig,
    pub chebyshev_order: usize,
}

impl SweepSpec {
    pub fn new(x_axis: XAxis, x_values: Vec<f64>, base: SystemConfig) -> Self {
        Self {
            x_axis,
            x_values,
            base,
            methods: vec![SopMethod::MonteCarlo, SopMethod::Chebyshev],
            mc: McConfig::default(),
            chebyshev_order: DEFAULT_CHEBYSHEV_ORDER,
        }
    }

    /// Checks the spec and builds the configuration of every point.
    pub fn configs(&self) -> Result<Vec<SystemConfig>> {
        if self.x_values.is_empty() {
            return Err(Error::Usage("the sweep grid is empty".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Usage("no methods selected".into()));
        }
        if let Some(w) = self
            .x_values
            .windows(2)
            .find(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
        {
            return Err(invalid(
                "x_values",
                format!("must be strictly increasing, found {} then {}", w[0], w[1]),
            ));
        }
        if self.chebyshev_order == 0 {
            return Err(invalid("chebyshev_order", "must be >= 1"));
        }
        self.mc.validate()?;
        self.x_values
            .iter()
            .map(|&x| self.x_axis.apply(&self.base, x))
            .collect()
    }

    /// Methods in output order (by name), without duplicates.
    pub fn ordered_methods(&self) -> Vec<SopMethod> {
        let set: BTreeSet<&'static str> = self.methods.iter().map(|m| m.name()).collect();
        set.into_iter()
            .map(|n| n.parse().expect("names come from SopMethod"))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub method: SopMethod,
    pub sop: f64,
    pub stderr: Option<f64>,
    pub order_or_trials: u64,
}

impl SweepRow {
    fn new(x: f64, e: SopEstimate) -> Self {
        Self {
            x,
            method: e.method,
            sop: e.value,
            stderr: e.stderr,
            order_or_trials: e.order_or_trials,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{SWEEP_HEADER}")?;
        for r in &self.rows {
            let stderr = r.stderr.map(fmt_f64).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_f64(r.x),
                r.method,
                fmt_f64(r.sop),
                stderr,
                r.order_or_trials
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    /// Rows for one method, in x order.
    pub fn column(&self, method: SopMethod) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.method == method).collect()
    }
}

/// Evaluates one method at one configuration.
pub fn evaluate_method(
    method: SopMethod,
    cfg: &SystemConfig,
    mc: &McConfig,
    chebyshev_order: usize,
    chi: Option<&ChiCdf>,
) -> Result<SopEstimate> {
    let mc_estimate = |r: crate::monte_carlo::McResult| SopEstimate {
        value: r.estimate,
        method,
        order_or_trials: r.trials,
        stderr: Some(r.stderr),
        raw_value: None,
    };
    match method {
        SopMethod::MonteCarlo => Ok(mc_estimate(simulate_sop_pas(cfg, mc)?)),
        SopMethod::MonteCarloFpa => Ok(mc_estimate(simulate_sop_fpa(cfg, mc)?)),
        SopMethod::Exact => sop_exact(cfg, SWEEP_EXACT_TOL),
        SopMethod::Chebyshev => sop_chebyshev(cfg, chebyshev_order),
        SopMethod::Asymptotic => match chi {
            Some(c) if c.region_side() == cfg.region_side() => sop_asymptotic_with(cfg, c),
            _ => sop_asymptotic_with(cfg, &ChiCdf::for_config(cfg)?),
        },
        SopMethod::LowerBoundPas => Ok(sop_lower_bound_pas()),
        SopMethod::LowerBoundFpa => Ok(sop_lower_bound_fpa()),
    }
}

/// Runs every method at every grid point. All parameters are validated before
/// anything is computed. Rows come out ordered by x, then method name.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let configs = spec.configs()?;
    let methods = spec.ordered_methods();
    let mut chi: Option<ChiCdf> = None;
    let mut rows = Vec::with_capacity(configs.len() * methods.len());
    for (&x, cfg) in spec.x_values.iter().zip(&configs) {
        if methods.contains(&SopMethod::Asymptotic)
            && chi.as_ref().map(|c| c.region_side()) != Some(cfg.region_side())
        {
            chi = Some(ChiCdf::for_config(cfg)?);
        }
        for &m in &methods {
            let e = evaluate_method(m, cfg, &spec.mc, spec.chebyshev_order, chi.as_ref())?;
            rows.push(SweepRow::new(x, e));
        }
    }
    Ok(SweepResult { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistKind {
    GammaBCdf,
    GammaEPdf,
    ChiCdf,
    WPdf,
}

impl DistKind {
    pub const ALL: [DistKind; 4] = [
        DistKind::GammaBCdf,
        DistKind::GammaEPdf,
        DistKind::ChiCdf,
        DistKind::WPdf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistKind::GammaBCdf => "gamma-b-cdf",
            DistKind::GammaEPdf => "gamma-e-pdf",
            DistKind::ChiCdf => "chi-cdf",
            DistKind::WPdf => "w-pdf",
        }
    }

    pub fn density(self, cfg: &SystemConfig) -> Result<PiecewiseDensity> {
        Ok(match self {
            DistKind::GammaBCdf => PiecewiseDensity::gamma_b_cdf(cfg),
            DistKind::GammaEPdf => PiecewiseDensity::gamma_e_pdf(cfg),
            DistKind::ChiCdf => PiecewiseDensity::chi_cdf(cfg)?,
            DistKind::WPdf => PiecewiseDensity::w_pdf(cfg),
        })
    }
}

impl fmt::Display for DistKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown distribution `{s}` (expected one of {})",
                    DistKind::ALL.map(|k| k.name()).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistRow {
    pub z: f64,
    pub value: f64,
    /// Row sits on an interior branch point.
    pub breakpoint: bool,
}

/// Samples a distribution object on `grid` points spanning its support
/// (endpoints included), plus one flagged row per interior breakpoint.
pub fn dump_distribution(
    which: DistKind,
    grid: usize,
    scale: GridScale,
    cfg: &SystemConfig,
) -> Result<Vec<DistRow>> {
    if grid < 2 {
        return Err(invalid(
            "grid",
            format!("need at least 2 points, got {grid}"),
        ));
    }
    let dens = which.density(cfg)?;
    let (lo, hi) = (dens.support_lo, dens.support_hi);
    let step = grid as f64 - 1.0;
    let mut zs: Vec<f64> = match scale {
        GridScale::Linear => (0..grid)
            .map(|k| lo + (hi - lo) * k as f64 / step)
            .collect(),
        GridScale::Log => {
            if lo <= 0.0 {
                return Err(Error::Usage(format!(
                    "log grid needs a positive support, {} starts at {lo}",
                    which.name()
                )));
            }
            let (a, b) = (lo.ln(), hi.ln());
            (0..grid)
                .map(|k| (a + (b - a) * k as f64 / step).exp())
                .collect()
        }
    };
    zs[0] = lo;
    zs[grid - 1] = hi;

    let mut rows: Vec<DistRow> = zs
        .into_iter()
        .map(|z| DistRow {
            z,
            value: dens.evaluate(z),
            breakpoint: false,
        })
        .collect();
    for &b in &dens.breakpoints {
        match rows.iter_mut().find(|r| r.z == b) {
            Some(r) => r.breakpoint = true,
            None => rows.push(DistRow {
                z: b,
                value: dens.evaluate(b),
                breakpoint: true,
            }),
        }
    }
    rows.sort_by(|a, b| a.z.total_cmp(&b.z));
    Ok(rows)
}

pub fn write_dist_csv<W: Write>(rows: &[DistRow], mut w: W) -> Result<()> {
    writeln!(w, "{DIST_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{}",
            fmt_f64(r.z),
            fmt_f64(r.value),
            u8::from(r.breakpoint)
        )?;
    }
    Ok(())
}
