//! Link-level simulation of an OFDM mm-wave link impaired by oscillator phase
//! noise, PA nonlinearity and frequency-selective I/Q imbalance.
//!
//! The crate is organised bottom-up:
//!
//! - [`ofdm`]: QAM mapping, unitary OFDM modulation and the subcarrier index convention
//! - [`phasenoise`]: piecewise power-law phase-noise profiles, trajectory synthesis,
//!   spectral coefficients (CPE / ICI)
//! - [`pa`]: odd-order memoryless polynomial PA and its Bussgang decomposition
//! - [`iqimb`]: frequency-selective TX/RX I/Q imbalance and image rejection
//! - [`channel`]: tapped-delay-line channel and AWGN
//! - [`link`]: the composed TX → channel → RX chain and its frequency-domain model
//! - [`metrics`]: CNR, CPE EVM, SINR, sum rate, SIR-vs-spacing, histograms
//! - [`experiments`]: scenario files, campaign runner, CSV and manifests
//!
//! Every stochastic stage draws from a labelled stream derived from one master
//! seed (see [`rng`]), so results are reproducible and independent of thread count.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod experiments;
pub mod fft;
pub mod iqimb;
pub mod link;
pub mod metrics;
pub mod ofdm;
pub mod pa;
pub mod phasenoise;
pub mod rng;

pub use error::{Error, Result};

/// Complex baseband sample.
pub type C64 = num_complex::Complex<f64>;

/// Sentinel magnitude (dB) used wherever a ratio would be infinite.
pub const DB_CAP: f64 = 300.0;

/// Converts a linear power ratio to dB, clamped to `±DB_CAP`.
pub fn db_capped(ratio: f64) -> f64 {
    if ratio.is_nan() {
        return -DB_CAP;
    }
    if ratio <= 0.0 {
        return -DB_CAP;
    }
    (10.0 * ratio.log10()).clamp(-DB_CAP, DB_CAP)
}

/// `10·log10(num/den)` with the sentinel caps for zero numerator or denominator.
pub fn db_ratio(num: f64, den: f64) -> f64 {
    if den <= 0.0 {
        return if num <= 0.0 { -DB_CAP } else { DB_CAP };
    }
    db_capped(num / den)
}
