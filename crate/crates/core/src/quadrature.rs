//! Numerical integration rules.
//!
//! [`integrate`] is a globally adaptive 7/15-point Gauss-Kronrod scheme over a
//! list of panel boundaries. Integrands here are piecewise smooth with kinks
//! and square-root behaviour at known points; those points must be passed as
//! breakpoints so no panel straddles one.
//!
//! [`gauss_chebyshev`] is the fixed N-point Chebyshev rule used by the
//! closed-form SOP approximation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// 7-point Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Default subdivision budget for [`integrate`].
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// One Kronrod panel: (kronrod, |kronrod - gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// `breakpoints` outside `(a, b)` are ignored; the rest become fixed panel
/// boundaries. Fails with [`Error::Accuracy`] (carrying the best estimate)
/// once `max_subdivisions` splits have been spent.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
    max_subdivisions: usize,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    if b < a {
        let q = integrate(f, b, a, breakpoints, tol, max_subdivisions)?;
        return Ok(Quadrature {
            value: -q.value,
            ..q
        });
    }

    let mut edges: Vec<f64> = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(a);
    edges.extend(breakpoints.iter().copied().filter(|&p| p > a && p < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut heap = BinaryHeap::with_capacity(edges.len() + 2 * max_subdivisions);
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for w in edges.windows(2) {
        let (value, error) = gk15(&f, w[0], w[1]);
        evaluations += 15;
        total += value;
        total_err += error;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    let mut splits = 0;
    while total_err > tol {
        if splits >= max_subdivisions {
            return Err(Error::Accuracy {
                estimate: total,
                error_estimate: total_err,
                tolerance: tol,
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further in floating point; keep its contribution
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            total_err -= worst.error;
            continue;
        }
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        evaluations += 30;
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
        splits += 1;
        // Periodically re-sum to wash out running-sum drift.
        if splits % 256 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    let error_estimate = heap.iter().map(|p| p.error).sum();
    Ok(Quadrature {
        value,
        error_estimate,
        evaluations,
    })
}

/// Node placement for [`gauss_chebyshev`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChebyshevRule {
    /// `x_n = cos((2n - 1) pi / (2N))`: N distinct nodes, exact for
    /// `p(x) / sqrt(1 - x^2)` with `deg p <= 2N - 1`.
    #[default]
    Standard,
    /// `x_n = cos((2n - 1) pi / N)`. Each node appears twice, so order N is
    /// the standard rule of order N/2 (for even N).
    HalvedAngle,
}

/// Nodes `x_n`, `n = 1..=N`, of the chosen Chebyshev rule.
pub fn chebyshev_nodes(n: usize, rule: ChebyshevRule) -> impl Iterator<Item = f64> {
    let denom = match rule {
        ChebyshevRule::Standard => 2.0 * n as f64,
        ChebyshevRule::HalvedAngle => n as f64,
    };
    (1..=n).map(move |k| ((2 * k - 1) as f64 * PI / denom).cos())
}

/// `(pi / N) * sum_n sqrt(1 - x_n^2) g(x_n)`, approximating
/// `integral_{-1}^{1} g(x) dx`.
pub fn gauss_chebyshev<F: Fn(f64) -> f64>(g: F, n: usize, rule: ChebyshevRule) -> f64 {
    assert!(n >= 1, "Chebyshev order must be positive");
    let sum: f64 = chebyshev_nodes(n, rule)
        .map(|x| (1.0 - x * x).max(0.0).sqrt() * g(x))
        .sum();
    PI / n as f64 * sum
}
