//! Secrecy outage probability (SOP) of a pinching-antenna downlink with a
//! passive eavesdropper.
//!
//! A single pinching antenna on a waveguide at height `h` is activated above
//! the legitimate user; the user and the eavesdropper are uniform on a
//! `D x D` square. The crate provides
//!
//! - the geometry and SNR model ([`system_model`]),
//! - closed-form distributions of both SNRs ([`distributions`]),
//! - SOP by adaptive quadrature, Gauss-Chebyshev approximation, high-power
//!   asymptote and constant lower bounds ([`sop`]),
//! - a seeded, worker-invariant Monte Carlo simulator ([`monte_carlo`]),
//! - parameter sweeps, distribution dumps and a self-check suite ([`sweep`],
//!   [`validate`]).

pub mod distributions;
pub mod error;
pub mod monte_carlo;
pub mod quadrature;
pub mod sop;
pub mod stats;
pub mod sweep;
pub mod system_model;
pub mod validate;

pub use error::{Error, Result};
pub use monte_carlo::{McConfig, McResult};
pub use sop::{SopEstimate, SopMethod};
pub use system_model::{Position, SystemConfig, SystemParams};
