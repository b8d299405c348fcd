//! Secrecy outage probability evaluators.
//!
//! With `C = 2^Rth`, outage is `(1 + gamma_B) / (1 + gamma_E) <= C`, so
//!
//! ```text
//! SOP = integral f_E(t) F_B(C t + C - 1) dt   over the support of gamma_E.
//! ```
//!
//! [`sop_exact`] evaluates that integral adaptively, [`sop_chebyshev`] with the
//! N-point Chebyshev rule after mapping the support onto `[-1, 1]`, and
//! [`sop_asymptotic`] gives the high-power limit which depends on
//! `(D, h, Rth)` only. The constants [`sop_lower_bound_pas`] and
//! [`sop_lower_bound_fpa`] are the `Rth = 0` floors.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::distributions::{
    cdf_gamma_b_raw, gamma_b_support, gamma_e_edges, pdf_gamma_e_raw, ChiCdf,
};
use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_chebyshev, integrate, ChebyshevRule, DEFAULT_MAX_SUBDIVISIONS};
use crate::system_model::SystemConfig;

/// Quadrature order used throughout the evaluation setup.
pub const DEFAULT_CHEBYSHEV_ORDER: usize = 100;

/// Tolerance of the outer integral in [`sop_asymptotic`].
pub const ASYMPTOTIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SopMethod {
    MonteCarlo,
    Exact,
    Chebyshev,
    Asymptotic,
    LowerBoundPas,
    LowerBoundFpa,
    MonteCarloFpa,
}

impl SopMethod {
    pub const ALL: [SopMethod; 7] = [
        SopMethod::MonteCarlo,
        SopMethod::Exact,
        SopMethod::Chebyshev,
        SopMethod::Asymptotic,
        SopMethod::LowerBoundPas,
        SopMethod::LowerBoundFpa,
        SopMethod::MonteCarloFpa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SopMethod::MonteCarlo => "mc",
            SopMethod::Exact => "exact",
            SopMethod::Chebyshev => "chebyshev",
            SopMethod::Asymptotic => "asymptotic",
            SopMethod::LowerBoundPas => "lower-pas",
            SopMethod::LowerBoundFpa => "lower-fpa",
            SopMethod::MonteCarloFpa => "mc-fpa",
        }
    }

    pub fn is_monte_carlo(self) -> bool {
        matches!(self, SopMethod::MonteCarlo | SopMethod::MonteCarloFpa)
    }
}

impl fmt::Display for SopMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SopMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SopMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown method `{s}` (expected one of {})",
                    SopMethod::ALL.map(|m| m.name()).join(", ")
                ))
            })
    }
}

/// An SOP value with provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopEstimate {
    /// Probability in `[0, 1]`.
    pub value: f64,
    pub method: SopMethod,
    /// Quadrature order, Monte Carlo trial count, or 0 for constants and
    /// adaptive evaluators.
    pub order_or_trials: u64,
    /// Standard error; Monte Carlo only.
    pub stderr: Option<f64>,
    /// Unclamped Chebyshev sum.
    pub raw_value: Option<f64>,
}

impl SopEstimate {
    fn analytic(value: f64, method: SopMethod, order: u64) -> Self {
        Self {
            value,
            method,
            order_or_trials: order,
            stderr: None,
            raw_value: None,
        }
    }
}

/// Argument of `F_B` at Eve-SNR `t`.
#[inline]
fn bob_threshold(t: f64, c_th: f64) -> f64 {
    c_th * t + c_th - 1.0
}

#[inline]
fn sop_integrand(t: f64, cfg: &SystemConfig) -> f64 {
    let fe = pdf_gamma_e_raw(t, cfg);
    if fe == 0.0 {
        return 0.0;
    }
    fe * cdf_gamma_b_raw(bob_threshold(t, cfg.c_th()), cfg)
}

/// True when `C t + C - 1 >= gb / h^2` over the whole support of `gamma_E`,
/// so every realisation is in outage.
fn saturated(cfg: &SystemConfig) -> bool {
    let [e0, ..] = gamma_e_edges(cfg);
    let (_, b_hi) = gamma_b_support(cfg);
    bob_threshold(e0, cfg.c_th()) >= b_hi
}

/// SOP by adaptive quadrature of the exact integral, absolute tolerance `tol`.
///
/// Panel boundaries are the two branch points of `f_E` and the Eve-SNRs at
/// which `C t + C - 1` crosses the support edges of `F_B`.
pub fn sop_exact(cfg: &SystemConfig, tol: f64) -> Result<SopEstimate> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(invalid("tol", format!("must be in (0, 1e-3], got {tol}")));
    }
    if saturated(cfg) {
        return Ok(SopEstimate::analytic(1.0, SopMethod::Exact, 0));
    }
    let [e0, e1, e2, e3] = gamma_e_edges(cfg);
    let (b_lo, b_hi) = gamma_b_support(cfg);
    let c = cfg.c_th();
    let breaks = [e1, e2, (b_lo + 1.0) / c - 1.0, (b_hi + 1.0) / c - 1.0];
    let q = integrate(
        |t| sop_integrand(t, cfg),
        e0,
        e3,
        &breaks,
        tol,
        DEFAULT_MAX_SUBDIVISIONS,
    )?;
    Ok(SopEstimate::analytic(
        q.value.clamp(0.0, 1.0),
        SopMethod::Exact,
        0,
    ))
}

/// Half-width and midpoint of the affine map from `[-1, 1]` onto the support
/// of `gamma_E`.
pub fn chebyshev_map(cfg: &SystemConfig) -> (f64, f64) {
    let g = cfg.gamma_bar();
    let h2 = cfg.height().powi(2);
    let d2 = cfg.region_side().powi(2);
    let upper = g / (2.0 * h2);
    let lower = g / (2.0 * h2 + 2.5 * d2);
    (upper - lower, upper + lower)
}

/// N-point Gauss-Chebyshev approximation of the SOP.
///
/// ```text
/// SOP ~ (pi/N) sum_{n=1}^{N} sqrt(1 - x_n^2) G(x_n) * half,
/// x_n = cos((2n - 1) pi / (2N)),
/// G(x) = f_E(g(x)) F_B(C g(x) + C - 1),  g(x) = half * x + mid.
/// ```
///
/// The returned `value` is clamped to `[0, 1]`; `raw_value` keeps the sum.
pub fn sop_chebyshev(cfg: &SystemConfig, order: usize) -> Result<SopEstimate> {
    sop_chebyshev_with_rule(cfg, order, ChebyshevRule::Standard)
}

/// [`sop_chebyshev`] with an explicit node rule.
pub fn sop_chebyshev_with_rule(
    cfg: &SystemConfig,
    order: usize,
    rule: ChebyshevRule,
) -> Result<SopEstimate> {
    if order == 0 {
        return Err(invalid("chebyshev_order", "must be >= 1"));
    }
    let (half, mid) = chebyshev_map(cfg);
    let raw = gauss_chebyshev(|x| sop_integrand(half * x + mid, cfg), order, rule) * half;
    Ok(SopEstimate {
        value: raw.clamp(0.0, 1.0),
        method: SopMethod::Chebyshev,
        order_or_trials: order as u64,
        stderr: None,
        raw_value: Some(raw),
    })
}

/// High-power limit of the SOP,
/// `(2/D) integral_0^{D/2} F_chi(C (t^2 + h^2) - h^2) dt`.
///
/// Independent of transmit and noise power.
pub fn sop_asymptotic(cfg: &SystemConfig) -> Result<SopEstimate> {
    let chi = ChiCdf::for_config(cfg)?;
    sop_asymptotic_with(cfg, &chi)
}

/// [`sop_asymptotic`] with a prebuilt CDF of `chi` for the same `D`.
pub fn sop_asymptotic_with(cfg: &SystemConfig, chi: &ChiCdf) -> Result<SopEstimate> {
    let d = cfg.region_side();
    if chi.region_side() != d {
        return Err(invalid(
            "region_side",
            format!(
                "chi CDF built for D = {}, config has D = {d}",
                chi.region_side()
            ),
        ));
    }
    let h2 = cfg.height().powi(2);
    let c = cfg.c_th();
    let d2 = d * d;
    let arg = |t: f64| c * (t * t + h2) - h2;
    if arg(0.0) >= 1.25 * d2 {
        return Ok(SopEstimate::analytic(1.0, SopMethod::Asymptotic, 0));
    }
    let breaks: Vec<f64> = [0.25 * d2, d2, 1.25 * d2]
        .iter()
        .filter_map(|&b| {
            let t2 = (b + h2) / c - h2;
            (t2 > 0.0).then(|| t2.sqrt())
        })
        .collect();
    let q = integrate(
        |t| chi.cdf(arg(t)),
        0.0,
        0.5 * d,
        &breaks,
        ASYMPTOTIC_TOL * 0.5 * d,
        DEFAULT_MAX_SUBDIVISIONS,
    )?;
    Ok(SopEstimate::analytic(
        (2.0 / d * q.value).clamp(0.0, 1.0),
        SopMethod::Asymptotic,
        0,
    ))
}

/// `(2 pi - 1) / 24`, the probability that Eve is at least as close to the
/// activated antenna as Bob.
pub fn lower_bound_pas_value() -> f64 {
    (2.0 * PI - 1.0) / 24.0
}

pub fn sop_lower_bound_pas() -> SopEstimate {
    SopEstimate::analytic(lower_bound_pas_value(), SopMethod::LowerBoundPas, 0)
}

pub fn sop_lower_bound_fpa() -> SopEstimate {
    SopEstimate::analytic(0.5, SopMethod::LowerBoundFpa, 0)
}

/// How the inner integrals of the lower-bound quadrature are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerIntegrals {
    /// `J1 = pi z^2 / 4`, `J2 = z^3 / 3`.
    ClosedForm,
    /// `J1 = int_0^z sqrt(z^2 - x^2) dx`, `J2 = int_0^z x sqrt(z^2 - x^2) dx`.
    Numeric,
}

/// Quadrature of `P(X^2 + Y^2 <= Z^2)`:
/// `(8/D^3) int_0^{D/2} J1 dz - (8/D^4) int_0^{D/2} J2 dz`.
pub fn lower_bound_pas_by_quadrature(region_side: f64, inner: InnerIntegrals) -> Result<f64> {
    let d = region_side;
    if !(d.is_finite() && d > 0.0) {
        return Err(invalid(
            "region_side",
            format!("must be finite and > 0, got {d}"),
        ));
    }
    let tol = 1e-15;
    let j1 = |z: f64| -> f64 {
        match inner {
            InnerIntegrals::ClosedForm => PI * z * z / 4.0,
            InnerIntegrals::Numeric => integrate(
                |x| (z * z - x * x).max(0.0).sqrt(),
                0.0,
                z,
                &[],
                tol * z * z,
                200,
            )
            .map_or_else(|e| accuracy_estimate(&e), |q| q.value),
        }
    };
    let j2 = |z: f64| -> f64 {
        match inner {
            InnerIntegrals::ClosedForm => z * z * z / 3.0,
            InnerIntegrals::Numeric => integrate(
                |x| x * (z * z - x * x).max(0.0).sqrt(),
                0.0,
                z,
                &[],
                tol * z * z * z,
                200,
            )
            .map_or_else(|e| accuracy_estimate(&e), |q| q.value),
        }
    };
    let outer_tol = 1e-14;
    let a = integrate(j1, 0.0, 0.5 * d, &[], outer_tol * d.powi(3), 200)?.value;
    let b = integrate(j2, 0.0, 0.5 * d, &[], outer_tol * d.powi(4), 200)?.value;
    Ok(8.0 / d.powi(3) * a - 8.0 / d.powi(4) * b)
}

fn accuracy_estimate(e: &Error) -> f64 {
    match e {
        Error::Accuracy { estimate, .. } => *estimate,
        _ => f64::NAN,
    }
}
