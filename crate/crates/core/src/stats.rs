//! Goodness-of-fit statistics for checking samplers against closed forms.

use std::cmp::Ordering;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Result};
use crate::quadrature::{integrate, DEFAULT_MAX_SUBDIVISIONS};

/// Kolmogorov-Smirnov distance `sup |F_n(x) - F(x)|`. Sorts `samples`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic one-sample KS critical value `sqrt(-ln(alpha/2) / 2) / sqrt(n)`.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    /// Upper `1 - alpha` quantile of the chi-square distribution.
    pub critical_value: f64,
    /// Bins actually used after merging sparse ones.
    pub bins: usize,
}

impl ChiSquareTest {
    pub fn passes(&self) -> bool {
        self.statistic <= self.critical_value
    }
}

/// Pearson chi-square test of `samples` against a density on `[lo, hi]`.
///
/// Uses `bins` equal-width bins; bin probabilities come from integrating
/// `pdf` with `breakpoints` as panel edges. Adjacent bins are merged until
/// every expected count is at least 5.
pub fn chi_square_gof<F: Fn(f64) -> f64>(
    samples: &[f64],
    pdf: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    bins: usize,
    alpha: f64,
) -> Result<ChiSquareTest> {
    if bins < 2 {
        return Err(invalid("bins", "need at least 2 bins"));
    }
    if hi.partial_cmp(&lo) != Some(Ordering::Greater) {
        return Err(invalid("support", format!("empty support [{lo}, {hi}]")));
    }
    let width = (hi - lo) / bins as f64;
    let mut observed = vec![0u64; bins];
    for &x in samples {
        if x < lo || x > hi {
            continue;
        }
        let k = (((x - lo) / width) as usize).min(bins - 1);
        observed[k] += 1;
    }
    let n = samples.len() as f64;
    let mut expected = Vec::with_capacity(bins);
    for k in 0..bins {
        let a = lo + k as f64 * width;
        let b = if k + 1 == bins { hi } else { a + width };
        let q = integrate(&pdf, a, b, breakpoints, 1e-12, DEFAULT_MAX_SUBDIVISIONS)?;
        expected.push(q.value * n);
    }

    let mut merged: Vec<(f64, f64)> = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (o, e) in observed.iter().zip(&expected) {
        o_acc += *o as f64;
        e_acc += e;
        if e_acc >= 5.0 {
            merged.push((o_acc, e_acc));
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 || o_acc > 0.0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += o_acc;
                last.1 += e_acc;
            }
            None => merged.push((o_acc, e_acc)),
        }
    }
    let statistic = merged.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = merged.len().saturating_sub(1).max(1);
    let critical_value = ChiSquared::new(dof as f64)
        .map_err(|e| invalid("degrees_of_freedom", e.to_string()))?
        .inverse_cdf(1.0 - alpha);
    Ok(ChiSquareTest {
        statistic,
        degrees_of_freedom: dof,
        critical_value,
        bins: merged.len(),
    })
}
