//! Geometry, channel and SNR model of the pinching-antenna downlink.
//!
//! The waveguide runs parallel to the x-axis at height `h`. Bob and Eve sit
//! uniformly in the `D x D` ground square centred at the origin. The pinching
//! antenna is activated at `(x1, 0, h)`, the waveguide point closest to Bob.
//! The fixed-position baseline places its antenna at `(0, 0, h)`.
//!
//! All quantities are SI. dBm and GHz only appear at the CLI boundary.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Converts a power level in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Raw physical parameters, SI units.
///
/// `carrier_freq` is a frequency in hertz; the wavelength is derived as
/// `c / carrier_freq`. The evaluation setup this library reproduces quotes a
/// 28 GHz carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub region_side: f64,
    pub height: f64,
    pub carrier_freq: f64,
    pub n_eff: f64,
    pub transmit_power: f64,
    pub noise_power: f64,
    pub target_rate: f64,
}

impl Default for SystemParams {
    /// h = 3 m, 28 GHz, n_eff = 1.4, noise -80 dBm, D = 10 m, Ps = 20 dBm,
    /// Rth = 0.1 bps/Hz.
    fn default() -> Self {
        Self {
            region_side: 10.0,
            height: 3.0,
            carrier_freq: 28e9,
            n_eff: 1.4,
            transmit_power: dbm_to_watts(20.0),
            noise_power: dbm_to_watts(-80.0),
            target_rate: 0.1,
        }
    }
}

/// Validated system configuration with derived constants.
///
/// Immutable once built; the `with_*` methods return modified copies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    params: SystemParams,
    wavelength: f64,
    eta: f64,
    gamma_bar: f64,
    c_th: f64,
}

impl SystemConfig {
    pub fn new(params: SystemParams) -> Result<Self> {
        let p = &params;
        positive_finite("region_side", p.region_side)?;
        positive_finite("height", p.height)?;
        positive_finite("carrier_freq", p.carrier_freq)?;
        if !(p.n_eff.is_finite() && p.n_eff >= 1.0) {
            return Err(invalid("n_eff", format!("must be >= 1, got {}", p.n_eff)));
        }
        positive_finite("transmit_power", p.transmit_power)?;
        positive_finite("noise_power", p.noise_power)?;
        if !(p.target_rate.is_finite() && p.target_rate >= 0.0) {
            return Err(invalid(
                "target_rate",
                format!("must be finite and >= 0, got {}", p.target_rate),
            ));
        }

        let wavelength = SPEED_OF_LIGHT / p.carrier_freq;
        let eta = wavelength * wavelength / (16.0 * PI * PI);
        let gamma_bar = eta * p.transmit_power / p.noise_power;
        if !(gamma_bar.is_finite() && gamma_bar > 0.0) {
            return Err(invalid(
                "transmit_power",
                format!("effective SNR {gamma_bar} is not a positive finite number"),
            ));
        }
        let c_th = p.target_rate.exp2();
        if !c_th.is_finite() {
            return Err(invalid("target_rate", "2^Rth overflows"));
        }
        Ok(Self {
            params,
            wavelength,
            eta,
            gamma_bar,
            c_th,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn region_side(&self) -> f64 {
        self.params.region_side
    }

    pub fn height(&self) -> f64 {
        self.params.height
    }

    pub fn carrier_freq(&self) -> f64 {
        self.params.carrier_freq
    }

    pub fn n_eff(&self) -> f64 {
        self.params.n_eff
    }

    pub fn transmit_power(&self) -> f64 {
        self.params.transmit_power
    }

    pub fn noise_power(&self) -> f64 {
        self.params.noise_power
    }

    pub fn target_rate(&self) -> f64 {
        self.params.target_rate
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// In-waveguide wavelength `lambda / n_eff`.
    pub fn guided_wavelength(&self) -> f64 {
        self.wavelength / self.params.n_eff
    }

    /// Free-space gain constant `lambda^2 / (16 pi^2)`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Effective transmit SNR `eta * Ps / sigma^2`.
    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }

    /// Linear secrecy threshold `2^Rth`.
    pub fn c_th(&self) -> f64 {
        self.c_th
    }

    pub fn with_transmit_power(&self, watts: f64) -> Result<Self> {
        Self::new(SystemParams {
            transmit_power: watts,
            ..self.params
        })
    }

    pub fn with_target_rate(&self, rate: f64) -> Result<Self> {
        Self::new(SystemParams {
            target_rate: rate,
            ..self.params
        })
    }

    pub fn with_region_side(&self, side: f64) -> Result<Self> {
        Self::new(SystemParams {
            region_side: side,
            ..self.params
        })
    }

    pub fn with_height(&self, height: f64) -> Result<Self> {
        Self::new(SystemParams {
            height,
            ..self.params
        })
    }

    /// Waveguide feed point `(-D/2, 0, h)`.
    pub fn feed_point(&self) -> Position {
        Position::new(-self.region_side() / 2.0, 0.0, self.height())
    }

    /// Pinching-antenna activation point for a user at ground position `(x1, y1)`.
    pub fn activation_point(&self, user: Position) -> Position {
        Position::new(user.x, 0.0, self.height())
    }

    /// Fixed-position antenna location `(0, 0, h)`.
    pub fn fpa_antenna(&self) -> Position {
        Position::new(0.0, 0.0, self.height())
    }
}

fn positive_finite(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite and > 0, got {v}")))
    }
}

/// A point in metres.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Ground-plane point `(x, y, 0)`.
    pub const fn ground(x: f64, y: f64) -> Self {
        Self { x, y, z: 0.0 }
    }

    pub fn distance_squared(&self, other: &Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }

    pub fn distance(&self, other: &Position) -> f64 {
        self.distance_squared(other).sqrt()
    }
}

/// Spherical-wave channel `sqrt(eta) exp(-j 2 pi d / lambda) / d`.
pub fn channel_coefficient(
    antenna: Position,
    receiver: Position,
    cfg: &SystemConfig,
) -> Result<Complex64> {
    let d = antenna.distance(&receiver);
    if d == 0.0 {
        return Err(Error::Singularity {
            function: "channel_coefficient",
            value: d,
        });
    }
    let phase = -2.0 * PI / cfg.wavelength() * d;
    Ok(Complex64::from_polar(cfg.eta().sqrt() / d, phase))
}

/// In-waveguide propagation phase `2 pi / lambda_g * |activation - feed|`.
///
/// This phase is common to Bob's and Eve's links and vanishes under the
/// modulus, so no SNR depends on it.
pub fn waveguide_phase(activation: Position, feed: Position, cfg: &SystemConfig) -> Result<f64> {
    let scale = cfg.region_side().max(cfg.height());
    let on_line = |p: &Position| {
        (p.y.abs() <= 1e-12 * scale) && ((p.z - cfg.height()).abs() <= 1e-12 * scale)
    };
    for p in [&activation, &feed] {
        if !on_line(p) {
            return Err(invalid(
                "position",
                format!(
                    "({}, {}, {}) is not on the waveguide y = 0, z = {}",
                    p.x,
                    p.y,
                    p.z,
                    cfg.height()
                ),
            ));
        }
    }
    Ok(2.0 * PI / cfg.guided_wavelength() * activation.distance(&feed))
}

/// Bob's SNR with the antenna activated above him: `gamma_bar / (y1^2 + h^2)`.
#[inline]
pub fn snr_bob_pinching(y1: f64, cfg: &SystemConfig) -> f64 {
    let h = cfg.height();
    cfg.gamma_bar() / (y1 * y1 + h * h)
}

/// Eve's SNR from the antenna at `(x1, 0, h)`: `gamma_bar / ((x1-x2)^2 + y2^2 + h^2)`.
#[inline]
pub fn snr_eve_pinching(x1: f64, x2: f64, y2: f64, cfg: &SystemConfig) -> f64 {
    let h = cfg.height();
    let dx = x1 - x2;
    cfg.gamma_bar() / (dx * dx + y2 * y2 + h * h)
}

/// SNR of a ground user at `(x, y)` served by the fixed antenna at `(0, 0, h)`.
#[inline]
pub fn snr_fpa(x: f64, y: f64, cfg: &SystemConfig) -> f64 {
    let h = cfg.height();
    cfg.gamma_bar() / (x * x + y * y + h * h)
}
