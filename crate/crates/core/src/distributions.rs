//! Distributions of the random SNRs and squared distances.
//!
//! Bob, Eve uniform on the square `[-D/2, D/2]^2`. With the antenna activated
//! above Bob, his SNR depends only on `y1`, while Eve's depends on
//! `chi = (x1 - x2)^2 + y2^2`. Writing `X = x1 - x2` (triangular on `[-D, D]`)
//! and `Y = y2`, `chi = X^2 + Y^2 = W` and
//!
//! ```text
//! gamma_B = gamma_bar / (y1^2 + h^2),   gamma_E = gamma_bar / (W + h^2).
//! ```
//!
//! `f_W` is the convolution of `f_{X^2}` and `f_{Y^2}` and has branch points at
//! `D^2/4` and `D^2`; its support ends at `5 D^2 / 4`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, DEFAULT_MAX_SUBDIVISIONS};
use crate::system_model::SystemConfig;

/// `sqrt` clamped at zero, for arguments that can round slightly negative.
#[inline]
fn sqrt0(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

#[inline]
fn asin_clamped(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).asin()
}

/// `asin(x) - x` for `x` in `[0, 1]` without cancellation at small `x`.
fn asin_minus_x(x: f64) -> f64 {
    if x >= 0.1 {
        return asin_clamped(x) - x;
    }
    // sum_{n>=1} (2n)! / (4^n (n!)^2 (2n+1)) x^(2n+1)
    let x2 = x * x;
    let mut a = 1.0;
    let mut pow = x;
    let mut sum = 0.0;
    for n in 1..=8 {
        let n = n as f64;
        a *= (2.0 * n - 1.0) / (2.0 * n);
        pow *= x2;
        sum += a * pow / (2.0 * n + 1.0);
    }
    sum
}

fn require_positive(function: &'static str, z: f64) -> Result<()> {
    if z > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: z,
            expected: "z > 0",
        })
    }
}

fn require_nonnegative(function: &'static str, t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: t,
            expected: "t >= 0",
        })
    }
}

/// Support edges of `gamma_E`, increasing:
/// `[gb/(h^2+5D^2/4), gb/(h^2+D^2), gb/(h^2+D^2/4), gb/h^2]`.
pub fn gamma_e_edges(cfg: &SystemConfig) -> [f64; 4] {
    let (g, h2, d2) = (
        cfg.gamma_bar(),
        cfg.height().powi(2),
        cfg.region_side().powi(2),
    );
    [
        g / (h2 + 1.25 * d2),
        g / (h2 + d2),
        g / (h2 + 0.25 * d2),
        g / h2,
    ]
}

/// Support of `gamma_B`: `[gb/(h^2+D^2/4), gb/h^2]`.
pub fn gamma_b_support(cfg: &SystemConfig) -> (f64, f64) {
    let (g, h2, d2) = (
        cfg.gamma_bar(),
        cfg.height().powi(2),
        cfg.region_side().powi(2),
    );
    (g / (h2 + 0.25 * d2), g / h2)
}

/// Total CDF of `gamma_B` for `z > 0`. Callers guarantee positivity.
#[inline]
pub(crate) fn cdf_gamma_b_raw(z: f64, cfg: &SystemConfig) -> f64 {
    let (lo, hi) = gamma_b_support(cfg);
    if z >= hi {
        1.0
    } else if z <= lo {
        0.0
    } else {
        let h2 = cfg.height().powi(2);
        let v = 1.0 - 2.0 / cfg.region_side() * sqrt0(cfg.gamma_bar() / z - h2);
        v.clamp(0.0, 1.0)
    }
}

/// CDF of Bob's SNR.
pub fn cdf_gamma_b(z: f64, cfg: &SystemConfig) -> Result<f64> {
    require_positive("cdf_gamma_b", z)?;
    Ok(cdf_gamma_b_raw(z, cfg))
}

/// Density of Bob's SNR, `gb/z^2 * f_{Y^2}(gb/z - h^2)`. Zero outside the support.
pub fn pdf_gamma_b(z: f64, cfg: &SystemConfig) -> Result<f64> {
    require_positive("pdf_gamma_b", z)?;
    let (lo, hi) = gamma_b_support(cfg);
    if z < lo || z > hi {
        return Ok(0.0);
    }
    let t = cfg.gamma_bar() / z - cfg.height().powi(2);
    if t <= 0.0 {
        return Err(Error::Singularity {
            function: "pdf_gamma_b",
            value: z,
        });
    }
    Ok(cfg.gamma_bar() / (z * z) / (cfg.region_side() * t.sqrt()))
}

/// CDF of `X^2`, `X = x1 - x2`: `(2 D sqrt(t) - t) / D^2` on `[0, D^2]`.
pub fn cdf_x_squared(t: f64, region_side: f64) -> Result<f64> {
    require_nonnegative("cdf_x_squared", t)?;
    let d = region_side;
    if t >= d * d {
        return Ok(1.0);
    }
    Ok((2.0 * d * t.sqrt() - t) / (d * d))
}

/// Density of `X^2`: `1/(D sqrt(t)) - 1/D^2` on `(0, D^2]`.
pub fn pdf_x_squared(t: f64, region_side: f64) -> Result<f64> {
    let d = region_side;
    if t == 0.0 {
        return Err(Error::Singularity {
            function: "pdf_x_squared",
            value: t,
        });
    }
    if t < 0.0 || t > d * d {
        return Ok(0.0);
    }
    Ok(1.0 / (d * t.sqrt()) - 1.0 / (d * d))
}

/// Density of `Y^2`, `Y` uniform on `[-D/2, D/2]`: `1/(D sqrt(t))` on `(0, D^2/4]`.
pub fn pdf_y_squared(t: f64, region_side: f64) -> Result<f64> {
    let d = region_side;
    if t == 0.0 {
        return Err(Error::Singularity {
            function: "pdf_y_squared",
            value: t,
        });
    }
    if t < 0.0 || t > 0.25 * d * d {
        return Ok(0.0);
    }
    Ok(1.0 / (d * t.sqrt()))
}

/// Density of `W = X^2 + Y^2` for `w >= 0`, via the convolution integrals
///
/// ```text
/// f_W(w) = I1(A, B) / D^2 - I2(A, B) / D^3,
/// A = max(0, w - D^2/4), B = min(w, D^2),
/// I1 = 2 asin sqrt(B/w) - 2 asin sqrt(A/w),  I2 = 2 (sqrt(w - A) - sqrt(w - B)).
/// ```
///
/// `f_W(0)` is the right limit `pi / D^2`.
#[inline]
pub(crate) fn pdf_w_raw(w: f64, d: f64) -> f64 {
    let d2 = d * d;
    if w > 1.25 * d2 {
        return 0.0;
    }
    if w <= 0.0 {
        return PI / d2;
    }
    if w > d2 {
        return pdf_w_tail(w, d);
    }
    let a = (w - 0.25 * d2).max(0.0);
    let b = w;
    let i1 = 2.0 * asin_clamped((b / w).sqrt()) - 2.0 * asin_clamped((a / w).sqrt());
    let i2 = 2.0 * (sqrt0(w - a) - sqrt0(w - b));
    (i1 / d2 - i2 / (d2 * d)).max(0.0)
}

/// `f_W` on `(D^2, 5D^2/4]`. The generic form subtracts two terms of order
/// `delta = 5D^2/4 - w` while the density itself is `O(delta^2)`; here the
/// difference is expanded so every term is nonnegative.
fn pdf_w_tail(w: f64, d: f64) -> f64 {
    let d2 = d * d;
    let delta = (1.25 * d2 - w).max(0.0);
    let s = sqrt0(w - d2);
    let q = sqrt0(w - 0.25 * d2);
    // asin(x) = I1 / 2 and delta / (D^2/2 + D s) = I2 / (2 D)
    let x = delta / (0.5 * d2 + s * q);
    let rest = delta * delta * s / ((d + q) * (0.5 * d2 + s * q) * (0.5 * d2 + d * s));
    2.0 / d2 * (asin_minus_x(x) + rest)
}

pub fn pdf_w(w: f64, cfg: &SystemConfig) -> Result<f64> {
    require_nonnegative("pdf_w", w)?;
    Ok(pdf_w_raw(w, cfg.region_side()))
}

/// One branch of the closed-form density of Eve's SNR, evaluated at `z`
/// without support or branch checks. Branch 0 covers `w = gb/z - h^2` in
/// `[0, D^2/4]`, branch 1 `[D^2/4, D^2]`, branch 2 `[D^2, 5D^2/4]`.
pub fn pdf_gamma_e_branch(z: f64, cfg: &SystemConfig, branch: usize) -> f64 {
    let g = cfg.gamma_bar();
    let d = cfg.region_side();
    let d2 = d * d;
    let h2 = cfg.height().powi(2);
    let w = (g / z - h2).max(0.0);
    let r = w.sqrt();
    let scale = g / (z * z);
    match branch {
        0 => scale * (PI / d2 - 2.0 / (d2 * d) * r),
        1 => 2.0 * scale / d2 * (asin_clamped(d / (2.0 * r)) - 0.5),
        2 => {
            // d (asin(d / 2r) - acos(d / r)) - (d/2 - sqrt(r^2 - d^2)), with the
            // angle difference taken through its sine so nothing cancels as
            // r^2 -> 5 d^2 / 4
            let s = sqrt0(w - d2);
            let p = sqrt0(4.0 * w - d2);
            let gap = (5.0 * d2 - 4.0 * w).max(0.0);
            let sin_diff = gap / (2.0 * (d2 + s * p));
            let rest = gap * gap * s / ((2.0 * d + p) * (d2 + s * p) * (2.0 * d + 4.0 * s));
            2.0 * scale / (d2 * d) * (d * asin_minus_x(sin_diff) + rest)
        }
        _ => panic!("pdf_gamma_e has branches 0..=2, got {branch}"),
    }
}

/// Closed-form density of Eve's SNR. Zero outside the support; an exact
/// branch edge belongs to the branch whose interval is closed there.
#[inline]
pub(crate) fn pdf_gamma_e_raw(z: f64, cfg: &SystemConfig) -> f64 {
    let [e0, e1, e2, e3] = gamma_e_edges(cfg);
    if z < e0 || z > e3 {
        return 0.0;
    }
    let branch = if z >= e2 {
        0
    } else if z >= e1 {
        1
    } else {
        2
    };
    pdf_gamma_e_branch(z, cfg, branch).max(0.0)
}

/// Density of Eve's SNR.
pub fn pdf_gamma_e(z: f64, cfg: &SystemConfig) -> Result<f64> {
    require_positive("pdf_gamma_e", z)?;
    Ok(pdf_gamma_e_raw(z, cfg))
}

/// Density of Eve's SNR by change of variables, `gb/z^2 * f_W(gb/z - h^2)`.
pub fn pdf_gamma_e_via_w(z: f64, cfg: &SystemConfig) -> Result<f64> {
    require_positive("pdf_gamma_e_via_w", z)?;
    let w = cfg.gamma_bar() / z - cfg.height().powi(2);
    if w < 0.0 {
        return Ok(0.0);
    }
    Ok(cfg.gamma_bar() / (z * z) * pdf_w_raw(w, cfg.region_side()))
}

/// Panels per branch segment in the cached CDF grid.
const CHI_PANELS_PER_SEGMENT: usize = 64;
const CHI_PANEL_TOL: f64 = 1e-13;
const CHI_EVAL_TOL: f64 = 1e-12;

/// CDF of `chi = (x1 - x2)^2 + y2^2`, by integrating `f_W`.
///
/// Cumulative values at a fixed grid (64 panels on each of the three branch
/// segments) are computed eagerly; evaluation adds one adaptive integral from
/// the nearest grid node below. Total absolute error is below `1e-10`.
#[derive(Debug, Clone)]
pub struct ChiCdf {
    region_side: f64,
    /// Segment edges `[0, D^2/4, D^2, 5D^2/4]`.
    edges: [f64; 4],
    /// Cumulative at the grid nodes, `3 * CHI_PANELS_PER_SEGMENT + 1` entries.
    cumulative: Vec<f64>,
}

impl ChiCdf {
    pub fn new(region_side: f64) -> Result<Self> {
        if !(region_side.is_finite() && region_side > 0.0) {
            return Err(crate::error::invalid(
                "region_side",
                format!("must be finite and > 0, got {region_side}"),
            ));
        }
        let d2 = region_side * region_side;
        let edges = [0.0, 0.25 * d2, d2, 1.25 * d2];
        let mut cumulative = Vec::with_capacity(3 * CHI_PANELS_PER_SEGMENT + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for seg in 0..3 {
            for k in 0..CHI_PANELS_PER_SEGMENT {
                let a = Self::node(&edges, seg, k);
                let b = Self::node(&edges, seg, k + 1);
                let q = integrate(
                    |w| pdf_w_raw(w, region_side),
                    a,
                    b,
                    &[],
                    CHI_PANEL_TOL,
                    DEFAULT_MAX_SUBDIVISIONS,
                )?;
                acc += q.value;
                cumulative.push(acc);
            }
        }
        Ok(Self {
            region_side,
            edges,
            cumulative,
        })
    }

    pub fn for_config(cfg: &SystemConfig) -> Result<Self> {
        Self::new(cfg.region_side())
    }

    fn node(edges: &[f64; 4], seg: usize, k: usize) -> f64 {
        if k == CHI_PANELS_PER_SEGMENT {
            return edges[seg + 1];
        }
        let (a, b) = (edges[seg], edges[seg + 1]);
        a + (b - a) * k as f64 / CHI_PANELS_PER_SEGMENT as f64
    }

    pub fn region_side(&self) -> f64 {
        self.region_side
    }

    /// Mass integrated over the full support; equals 1 up to quadrature error.
    pub fn total_mass(&self) -> f64 {
        *self.cumulative.last().expect("grid is nonempty")
    }

    /// `P(chi <= t)`; total, 0 for `t <= 0` and 1 from `5 D^2 / 4` on.
    pub fn cdf(&self, t: f64) -> f64 {
        if t.is_nan() {
            return f64::NAN;
        }
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.edges[3] {
            return 1.0;
        }
        let seg = if t < self.edges[1] {
            0
        } else if t < self.edges[2] {
            1
        } else {
            2
        };
        let (a, b) = (self.edges[seg], self.edges[seg + 1]);
        let pos = (t - a) / (b - a) * CHI_PANELS_PER_SEGMENT as f64;
        let mut k = (pos.floor() as usize).min(CHI_PANELS_PER_SEGMENT - 1);
        // guard against the uniform-node formula rounding past t
        while k > 0 && Self::node(&self.edges, seg, k) > t {
            k -= 1;
        }
        let start = Self::node(&self.edges, seg, k);
        let base = self.cumulative[seg * CHI_PANELS_PER_SEGMENT + k];
        let d = self.region_side;
        let partial = match integrate(
            |w| pdf_w_raw(w, d),
            start,
            t,
            &[],
            CHI_EVAL_TOL,
            DEFAULT_MAX_SUBDIVISIONS,
        ) {
            Ok(q) => q.value,
            Err(Error::Accuracy { estimate, .. }) => estimate,
            Err(_) => unreachable!("integrate only fails with an accuracy error"),
        };
        (base + partial).clamp(0.0, 1.0)
    }
}

/// CDF of `chi` for a one-off evaluation. Builds the grid each call; reuse a
/// [`ChiCdf`] for repeated evaluations.
pub fn cdf_chi(t: f64, cfg: &SystemConfig) -> Result<f64> {
    Ok(ChiCdf::for_config(cfg)?.cdf(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    Pdf,
    Cdf,
}

#[derive(Debug, Clone)]
enum Evaluator {
    GammaBCdf(SystemConfig),
    GammaEPdf(SystemConfig),
    WPdf(f64),
    ChiCdf(ChiCdf),
    XSquaredPdf(f64),
    YSquaredPdf(f64),
}

/// A distribution object with explicit support and interior branch points.
///
/// `evaluate` is total: PDFs are 0 outside the support, CDFs are 0 below and
/// 1 above it.
#[derive(Debug, Clone)]
pub struct PiecewiseDensity {
    pub kind: DensityKind,
    pub support_lo: f64,
    pub support_hi: f64,
    pub breakpoints: Vec<f64>,
    evaluator: Evaluator,
}

impl PiecewiseDensity {
    pub fn gamma_b_cdf(cfg: &SystemConfig) -> Self {
        let (lo, hi) = gamma_b_support(cfg);
        Self {
            kind: DensityKind::Cdf,
            support_lo: lo,
            support_hi: hi,
            breakpoints: Vec::new(),
            evaluator: Evaluator::GammaBCdf(*cfg),
        }
    }

    pub fn gamma_e_pdf(cfg: &SystemConfig) -> Self {
        let [e0, e1, e2, e3] = gamma_e_edges(cfg);
        Self {
            kind: DensityKind::Pdf,
            support_lo: e0,
            support_hi: e3,
            breakpoints: vec![e1, e2],
            evaluator: Evaluator::GammaEPdf(*cfg),
        }
    }

    pub fn w_pdf(cfg: &SystemConfig) -> Self {
        let d2 = cfg.region_side().powi(2);
        Self {
            kind: DensityKind::Pdf,
            support_lo: 0.0,
            support_hi: 1.25 * d2,
            breakpoints: vec![0.25 * d2, d2],
            evaluator: Evaluator::WPdf(cfg.region_side()),
        }
    }

    pub fn chi_cdf(cfg: &SystemConfig) -> Result<Self> {
        let d2 = cfg.region_side().powi(2);
        Ok(Self {
            kind: DensityKind::Cdf,
            support_lo: 0.0,
            support_hi: 1.25 * d2,
            breakpoints: vec![0.25 * d2, d2],
            evaluator: Evaluator::ChiCdf(ChiCdf::for_config(cfg)?),
        })
    }

    pub fn x_squared_pdf(cfg: &SystemConfig) -> Self {
        let d = cfg.region_side();
        Self {
            kind: DensityKind::Pdf,
            support_lo: 0.0,
            support_hi: d * d,
            breakpoints: Vec::new(),
            evaluator: Evaluator::XSquaredPdf(d),
        }
    }

    pub fn y_squared_pdf(cfg: &SystemConfig) -> Self {
        let d = cfg.region_side();
        Self {
            kind: DensityKind::Pdf,
            support_lo: 0.0,
            support_hi: 0.25 * d * d,
            breakpoints: Vec::new(),
            evaluator: Evaluator::YSquaredPdf(d),
        }
    }

    pub fn evaluate(&self, z: f64) -> f64 {
        match &self.evaluator {
            Evaluator::GammaBCdf(cfg) => {
                if z <= 0.0 {
                    0.0
                } else {
                    cdf_gamma_b_raw(z, cfg)
                }
            }
            Evaluator::GammaEPdf(cfg) => {
                if z <= 0.0 {
                    0.0
                } else {
                    pdf_gamma_e_raw(z, cfg)
                }
            }
            Evaluator::WPdf(d) => {
                if z < 0.0 {
                    0.0
                } else {
                    pdf_w_raw(z, *d)
                }
            }
            Evaluator::ChiCdf(c) => c.cdf(z),
            Evaluator::XSquaredPdf(d) => pdf_x_squared(z, *d).unwrap_or(f64::INFINITY),
            Evaluator::YSquaredPdf(d) => pdf_y_squared(z, *d).unwrap_or(f64::INFINITY),
        }
    }

    /// Support edges and interior breakpoints, increasing.
    pub fn panel_edges(&self) -> Vec<f64> {
        let mut e = Vec::with_capacity(self.breakpoints.len() + 2);
        e.push(self.support_lo);
        e.extend_from_slice(&self.breakpoints);
        e.push(self.support_hi);
        e
    }

    /// Integral of the density over its support (PDF objects only).
    ///
    /// Densities with a `1/sqrt(t)` singularity at `t = 0` are integrated in
    /// `u = sqrt(t)`, which removes the blow-up.
    pub fn total_mass(&self, tol: f64) -> Result<f64> {
        if self.kind != DensityKind::Pdf {
            return Err(Error::Usage("total_mass is defined for PDF objects".into()));
        }
        match &self.evaluator {
            Evaluator::XSquaredPdf(_) | Evaluator::YSquaredPdf(_) => {
                let hi = self.support_hi.sqrt();
                let q = integrate(
                    |u| 2.0 * u * self.evaluate(u * u),
                    0.0,
                    hi,
                    &[],
                    tol,
                    DEFAULT_MAX_SUBDIVISIONS,
                )?;
                Ok(q.value)
            }
            _ => {
                let q = integrate(
                    |z| self.evaluate(z),
                    self.support_lo,
                    self.support_hi,
                    &self.breakpoints,
                    tol,
                    DEFAULT_MAX_SUBDIVISIONS,
                )?;
                Ok(q.value)
            }
        }
    }
}
