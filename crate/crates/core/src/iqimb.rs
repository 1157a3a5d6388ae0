//! Frequency-selective transmit and receive I/Q imbalance.
//!
//! An imbalanced branch turns `x` into `g₁ ∗ x + g₂ ∗ x*`. With a three-tap
//! mismatch filter `h`, gain ratio `g` and phase `φ`:
//!
//! ```text
//! TX:  g₁ = (δ + h·g·e^{+jφ})/2   g₂ = (δ − h·g·e^{+jφ})/2
//! RX:  g₁ = (δ + h·g·e^{−jφ})/2   g₂ = (δ − h·g·e^{−jφ})/2
//! ```
//!
//! In the frequency domain the image term lands on the mirror subcarrier, so
//! subcarrier `k` sees `G₁,k·X_k + G₂,k·X*_{−k}`.

use crate::{fft, ofdm::mirror_index, Error, Result, C64};

pub const N_TAPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Tx,
    Rx,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IqImbalanceParams {
    side: Side,
    gain_imbalance: f64,
    phase_imbalance: f64,
    mismatch_taps: [f64; N_TAPS],
}

impl IqImbalanceParams {
    /// `phase_imbalance` is in radians.
    pub fn new(side: Side, gain_imbalance: f64, phase_imbalance: f64, mismatch_taps: [f64; N_TAPS]) -> Result<Self> {
        if !(gain_imbalance > 0.0) || !gain_imbalance.is_finite() {
            return Err(Error::config(format!(
                "I/Q gain imbalance must be positive, got {gain_imbalance}"
            )));
        }
        if !phase_imbalance.is_finite() || mismatch_taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::config("I/Q phase and taps must be finite"));
        }
        Ok(IqImbalanceParams {
            side,
            gain_imbalance,
            phase_imbalance,
            mismatch_taps,
        })
    }

    pub fn perfect(side: Side) -> Self {
        Self::new(side, 1.0, 0.0, [1.0, 0.0, 0.0]).expect("valid preset")
    }

    /// 1 % gain, 1° phase, flat.
    pub fn best(side: Side) -> Self {
        Self::new(side, 1.01, 1f64.to_radians(), [1.0, 0.0, 0.0]).expect("valid preset")
    }

    /// 5 % gain, 5° phase, flat.
    pub fn worst(side: Side) -> Self {
        Self::new(side, 1.05, 5f64.to_radians(), [1.0, 0.0, 0.0]).expect("valid preset")
    }

    /// 3 % gain, 3° phase, with a small ripple in the mismatch filter.
    pub fn moderate(side: Side) -> Self {
        Self::new(side, 1.03, 3f64.to_radians(), [1.0, 0.02, -0.01]).expect("valid preset")
    }

    pub fn by_name(name: &str, side: Side) -> Option<Self> {
        match name {
            "perfect" => Some(Self::perfect(side)),
            "best" => Some(Self::best(side)),
            "worst" => Some(Self::worst(side)),
            "moderate" => Some(Self::moderate(side)),
            _ => None,
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn gain_imbalance(&self) -> f64 {
        self.gain_imbalance
    }

    pub fn phase_imbalance(&self) -> f64 {
        self.phase_imbalance
    }

    pub fn mismatch_taps(&self) -> [f64; N_TAPS] {
        self.mismatch_taps
    }

    pub fn is_perfect(&self) -> bool {
        self.gain_imbalance == 1.0 && self.phase_imbalance == 0.0 && self.mismatch_taps == [1.0, 0.0, 0.0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IqFilters {
    pub g1: [C64; N_TAPS],
    pub g2: [C64; N_TAPS],
}

impl IqFilters {
    pub fn ideal() -> Self {
        derive_filters(&IqImbalanceParams::perfect(Side::Tx))
    }

    pub fn is_ideal(&self) -> bool {
        *self == Self::ideal()
    }

    /// `Σ_t |g₁[t]|² + |g₂[t]|²`, the power gain seen by a white input.
    pub fn power_gain(&self) -> f64 {
        self.g1.iter().chain(&self.g2).map(|c| c.norm_sqr()).sum()
    }

    /// Length-`n` DFTs `(G₁, G₂)` of the taps.
    pub fn spectra(&self, n_fft: usize) -> (Vec<C64>, Vec<C64>) {
        let taps = |g: &[C64; N_TAPS]| -> Vec<(usize, C64)> { g.iter().copied().enumerate().collect() };
        (
            fft::padded_response(&taps(&self.g1), n_fft),
            fft::padded_response(&taps(&self.g2), n_fft),
        )
    }
}

pub fn derive_filters(p: &IqImbalanceParams) -> IqFilters {
    let sign = match p.side {
        Side::Tx => 1.0,
        Side::Rx => -1.0,
    };
    let rot = C64::from_polar(p.gain_imbalance, sign * p.phase_imbalance);
    let mut g1 = [C64::new(0.0, 0.0); N_TAPS];
    let mut g2 = [C64::new(0.0, 0.0); N_TAPS];
    for t in 0..N_TAPS {
        let delta = if t == 0 { 1.0 } else { 0.0 };
        let h = rot * p.mismatch_taps[t];
        g1[t] = (h + delta) * 0.5;
        g2[t] = (-h + delta) * 0.5;
    }
    IqFilters { g1, g2 }
}

/// Linear convolution truncated to the input length.
pub fn apply(filters: &IqFilters, samples: &[C64]) -> Vec<C64> {
    if filters.is_ideal() {
        return samples.to_vec();
    }
    (0..samples.len())
        .map(|i| {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..N_TAPS.min(i + 1) {
                let x = samples[i - t];
                acc += filters.g1[t] * x + filters.g2[t] * x.conj();
            }
            acc
        })
        .collect()
}

/// Per-bin image-rejection ratio in dB, capped at the crate-wide 300 dB.
pub fn irr_per_bin(filters: &IqFilters, n_fft: usize) -> Result<Vec<f64>> {
    if n_fft < N_TAPS {
        return Err(Error::config(format!("IRR needs at least {N_TAPS} bins, got {n_fft}")));
    }
    let (g1, g2) = filters.spectra(n_fft);
    Ok(g1
        .iter()
        .zip(&g2)
        .map(|(a, b)| crate::db_ratio(a.norm_sqr(), b.norm_sqr()))
        .collect())
}

/// Frequency-domain view of `apply` on one OFDM window:
/// `G₁,k·X_k + G₂,k·X*_{−k}`.
pub fn apply_grid(g1: &[C64], g2: &[C64], x: &[C64]) -> Vec<C64> {
    let n = x.len();
    (0..n)
        .map(|k| g1[k] * x[k] + g2[k] * x[mirror_index(k, n)].conj())
        .collect()
}
