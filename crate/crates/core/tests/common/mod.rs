#![allow(dead_code)]

use std::f64::consts::PI;

use pinch_sop::system_model::dbm_to_watts;
use pinch_sop::{SystemConfig, SystemParams};

pub fn config(d: f64, power_dbm: f64, rate: f64) -> SystemConfig {
    SystemConfig::new(SystemParams {
        region_side: d,
        transmit_power: dbm_to_watts(power_dbm),
        target_rate: rate,
        ..SystemParams::default()
    })
    .unwrap()
}

/// `{D in 10, 30} x {P_s in 0:5:40 dBm} x {R_th in 0.1, 0.5, 1}`.
pub fn grid() -> Vec<SystemConfig> {
    let mut out = Vec::new();
    for d in [10.0, 30.0] {
        for k in 0..=8 {
            for r in [0.1, 0.5, 1.0] {
                out.push(config(d, 5.0 * k as f64, r));
            }
        }
    }
    out
}

/// `int asin(a / sqrt(w)) dw`.
fn asin_antiderivative(w: f64, a: f64) -> f64 {
    w * (a / w.sqrt()).min(1.0).asin() + a * (w - a * a).max(0.0).sqrt()
}

/// CDF of `chi = (x1 - x2)^2 + y2^2` by integrating each branch of its
/// density in closed form.
pub fn chi_cdf_closed_form(t: f64, d: f64) -> f64 {
    let d2 = d * d;
    let d3 = d2 * d;
    let half = 0.5 * d;
    let f1 = |t: f64| PI * t / d2 - 4.0 * t.powf(1.5) / (3.0 * d3);
    // f = (2/D^2) asin(D / 2 sqrt(w)) - 1/D^2 on [D^2/4, D^2]
    let f2 = |t: f64| {
        f1(0.25 * d2)
            + 2.0 / d2 * (asin_antiderivative(t, half) - asin_antiderivative(0.25 * d2, half))
            - (t - 0.25 * d2) / d2
    };
    // f = (2/D^2)(asin(D/sqrt w) + asin(D/(2 sqrt w)) - pi/2) - 1/D^2
    //     + (2/D^3) sqrt(w - D^2) on [D^2, 5D^2/4]
    let f3 = |t: f64| {
        let u = t - d2;
        f2(d2)
            + 2.0 / d2
                * (asin_antiderivative(t, d) - asin_antiderivative(d2, d)
                    + asin_antiderivative(t, half)
                    - asin_antiderivative(d2, half)
                    - 0.5 * PI * u)
            - u / d2
            + 4.0 / (3.0 * d3) * u.powf(1.5)
    };
    if t <= 0.0 {
        0.0
    } else if t <= 0.25 * d2 {
        f1(t)
    } else if t <= d2 {
        f2(t)
    } else if t < 1.25 * d2 {
        f3(t)
    } else {
        1.0
    }
}
