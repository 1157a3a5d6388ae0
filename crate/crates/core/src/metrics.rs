//! Link-quality metrics: channel-to-noise ratio of the LS estimate, CPE EVM
//! between two symbols, per-subcarrier SINR, sum rate, the ICI-limited SIR as a
//! function of subcarrier spacing, and normalised histograms.
//!
//! Aggregates over bins or trials are formed as ratios of linear sums and only
//! then converted to dB.

use rayon::prelude::*;

use crate::link::{self, Link, LinkRealization};
use crate::phasenoise::{self, PhaseNoiseProfile};
use crate::{db_ratio, rng, Error, Result, C64, DB_CAP};

/// Smallest number of symbols averaged by [`sinr`].
pub const MIN_SINR_SYMBOLS: usize = 100;

/// Samples per trajectory used by [`sir_vs_spacing`].
pub const SIR_TRAJECTORY_LEN: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    pub axis_label: String,
    pub axis: Vec<f64>,
    pub values: Vec<f64>,
    pub n_trials: usize,
    pub seed: u64,
}

impl MetricSeries {
    pub fn new(axis_label: &str, axis: Vec<f64>, values: Vec<f64>, n_trials: usize, seed: u64) -> Result<Self> {
        if axis.len() != values.len() {
            return Err(Error::shape(format!(
                "axis has {} points but {} values",
                axis.len(),
                values.len()
            )));
        }
        if n_trials == 0 {
            return Err(Error::config("a metric series needs at least one trial"));
        }
        Ok(MetricSeries {
            axis_label: axis_label.to_string(),
            axis,
            values,
            n_trials,
            seed,
        })
    }
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::shape(format!("length mismatch: {a} vs {b}")));
    }
    Ok(())
}

/// Per-bin CNR in dB; `None` where `H̄` is zero.
pub fn cnr(h_hat: &[C64], h_bar: &[C64]) -> Result<Vec<Option<f64>>> {
    check_len(h_hat.len(), h_bar.len())?;
    Ok(h_hat
        .iter()
        .zip(h_bar)
        .map(|(e, h)| (h.norm_sqr() > 0.0).then(|| db_ratio(h.norm_sqr(), (e - h).norm_sqr())))
        .collect())
}

/// Linear sums `(Σ|H̄|², Σ|Ĥ−H̄|²)` over the bins of pilot symbol `m` where both
/// the pilot and `H̄` are nonzero.
pub fn cnr_sums(real: &LinkRealization, m: usize) -> Result<(f64, f64)> {
    let r = real
        .symbols
        .get(m)
        .ok_or_else(|| Error::shape(format!("symbol {m} not in frame")))?;
    if !r.is_pilot {
        return Err(Error::config(format!("symbol {m} is not a pilot")));
    }
    let est = link::ls_estimate(&r.tx_grid, &r.rx_grid)?;
    let h_bar = real.h_bar(m)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (e, h) in est.iter().zip(&h_bar) {
        if let Some(e) = e {
            if h.norm_sqr() > 0.0 {
                num += h.norm_sqr();
                den += (e - h).norm_sqr();
            }
        }
    }
    Ok((num, den))
}

/// Summary of per-trial CNR values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnrSummary {
    /// `10·log10(Σ|H̄|² / Σ|Ĥ−H̄|²)` over all trials and bins.
    pub mean_db: f64,
    pub p5_db: f64,
    pub p95_db: f64,
    pub n_trials: usize,
}

#[derive(Debug, Clone, Default)]
pub struct CnrAccumulator {
    num: f64,
    den: f64,
    per_trial: Vec<f64>,
}

impl CnrAccumulator {
    pub fn push(&mut self, num: f64, den: f64) {
        self.num += num;
        self.den += den;
        self.per_trial.push(db_ratio(num, den));
    }

    pub fn summary(&self) -> Result<CnrSummary> {
        if self.per_trial.is_empty() {
            return Err(Error::config("no CNR trials accumulated"));
        }
        Ok(CnrSummary {
            mean_db: db_ratio(self.num, self.den),
            p5_db: percentile(&self.per_trial, 5.0),
            p95_db: percentile(&self.per_trial, 95.0),
            n_trials: self.per_trial.len(),
        })
    }
}

/// Linear-interpolated percentile of `v` (0–100).
pub fn percentile(v: &[f64], p: f64) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    if s.is_empty() {
        return f64::NAN;
    }
    let pos = (p / 100.0).clamp(0.0, 1.0) * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
}

fn pilot_pair(real: &LinkRealization, m1: usize, m2: usize) -> Result<(Vec<Option<C64>>, Vec<C64>)> {
    if m1 == m2 {
        return Err(Error::config("CPE EVM needs two different symbols"));
    }
    let get = |m: usize| {
        real.symbols
            .get(m)
            .filter(|r| r.is_pilot)
            .ok_or_else(|| Error::config(format!("symbol {m} is not a pilot of the frame")))
    };
    let r1 = get(m1)?;
    get(m2)?;
    Ok((link::ls_estimate(&r1.tx_grid, &r1.rx_grid)?, real.h_bar(m2)?))
}

/// Per-bin EVM in dB of using the estimate from symbol `m1` as the equivalent
/// channel of symbol `m2`.
pub fn cpe_evm(real: &LinkRealization, m1: usize, m2: usize) -> Result<Vec<f64>> {
    let (est, h_bar) = pilot_pair(real, m1, m2)?;
    Ok(est
        .iter()
        .zip(&h_bar)
        .map(|(e, h)| match e {
            Some(e) => db_ratio((e - h).norm_sqr(), h.norm_sqr()),
            None => DB_CAP,
        })
        .collect())
}

/// Bin-aggregated [`cpe_evm`], `10·log10(Σ|Ĥ−H̄|² / Σ|H̄|²)`.
pub fn cpe_evm_db(real: &LinkRealization, m1: usize, m2: usize) -> Result<f64> {
    let (est, h_bar) = pilot_pair(real, m1, m2)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (e, h) in est.iter().zip(&h_bar) {
        if let Some(e) = e {
            num += (e - h).norm_sqr();
            den += h.norm_sqr();
        }
    }
    Ok(db_ratio(num, den))
}

/// Linear SINR per bin over all symbols of one frame:
/// `γ_k = mean_m |H̄_{k,m}|² / mean_m |Z_{k,m} − H̄_{k,m}·S_{k,m}|²`.
/// Symbols have unit average power. Bins without interference are capped at
/// `10^(DB_CAP/10)`.
pub fn sinr_per_bin(real: &LinkRealization) -> Result<Vec<f64>> {
    let n = real.n_fft;
    let mut sig = vec![0.0; n];
    let mut err = vec![0.0; n];
    for m in 0..real.n_symbols() {
        let h_bar = real.h_bar(m)?;
        let r = &real.symbols[m];
        for k in 0..n {
            sig[k] += h_bar[k].norm_sqr();
            err[k] += (r.rx_grid[k] - h_bar[k] * r.tx_grid[k]).norm_sqr();
        }
    }
    let cap = 10f64.powf(DB_CAP / 10.0);
    Ok(sig
        .iter()
        .zip(&err)
        .map(|(&s, &e)| {
            if e > 0.0 {
                (s / e).min(cap)
            } else if s > 0.0 {
                cap
            } else {
                0.0
            }
        })
        .collect())
}

/// [`sinr_per_bin`] for trial `trial` of `link`, whose frame must hold at least
/// [`MIN_SINR_SYMBOLS`] symbols.
pub fn sinr(link: &Link, trial: u64) -> Result<Vec<f64>> {
    let m = link.scenario().n_symbols;
    if m < MIN_SINR_SYMBOLS {
        return Err(Error::config(format!(
            "SINR needs at least {MIN_SINR_SYMBOLS} symbols per frame, got {m}"
        )));
    }
    sinr_per_bin(&link.run_frame(trial)?)
}

/// `mean over realisations and bins of log2(1 + γ)`, in bit/s/Hz.
pub fn sum_rate(sinr_per_bin: &[Vec<f64>]) -> Result<f64> {
    if sinr_per_bin.is_empty() || sinr_per_bin.iter().any(|v| v.is_empty()) {
        return Err(Error::config("sum rate needs at least one nonempty SINR list"));
    }
    let per: Vec<f64> = sinr_per_bin
        .iter()
        .map(|v| v.iter().map(|g| (1.0 + g.max(0.0)).log2()).sum::<f64>() / v.len() as f64)
        .collect();
    Ok(per.iter().sum::<f64>() / per.len() as f64)
}

/// ICI-limited SIR `10·log10(Σ|J0|² / Σ(1−|J0|²))` over `n_trials` windows for
/// each spacing. Every spacing reuses the same random streams.
pub fn sir_vs_spacing(
    profile: &PhaseNoiseProfile,
    carrier: f64,
    spacings: &[f64],
    n_fft: usize,
    n_trials: usize,
    seed: u64,
) -> Result<MetricSeries> {
    if spacings.is_empty() || spacings.iter().any(|s| !(*s > 0.0)) || spacings.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("spacings must be positive and strictly ascending"));
    }
    if n_fft < 2 || n_trials == 0 {
        return Err(Error::config("SIR needs n_fft ≥ 2 and at least one trial"));
    }
    let p = phasenoise::scale_profile(profile, carrier)?;
    let traj_len = SIR_TRAJECTORY_LEN.max(n_fft).next_power_of_two();
    let per_traj = traj_len / n_fft;
    let n_traj = n_trials.div_ceil(per_traj);
    let values = spacings
        .iter()
        .map(|&spacing| {
            let fs = spacing * n_fft as f64;
            let parts: Vec<(f64, f64)> = (0..n_traj)
                .into_par_iter()
                .map(|i| -> Result<(f64, f64)> {
                    let mut r = rng::stream(seed, rng::label::SIR, i as u64);
                    let t = phasenoise::synthesize_with(&p, traj_len, fs, traj_len, &mut r)?;
                    let windows = per_traj.min(n_trials - i * per_traj);
                    let mut sig = 0.0;
                    let mut ici = 0.0;
                    for w in 0..windows {
                        let j0 = phasenoise::window_cpe(&t, w * n_fft, n_fft)?.norm_sqr();
                        sig += j0;
                        ici += (1.0 - j0).max(0.0);
                    }
                    Ok((sig, ici))
                })
                .collect::<Result<_>>()?;
            let (sig, ici) = parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
            Ok(db_ratio(sig, ici))
        })
        .collect::<Result<Vec<f64>>>()?;
    MetricSeries::new("spacing_hz", spacings.to_vec(), values, n_trials, seed)
}

/// Histogram normalised to unit area. The axis holds bin centres. Constant input
/// is spread over a unit-width range centred on the value.
pub fn pdf_histogram(samples: &[f64], n_bins: usize) -> Result<MetricSeries> {
    if samples.is_empty() || n_bins < 2 {
        return Err(Error::config("histogram needs samples and at least 2 bins"));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::config("histogram samples must be finite"));
    }
    let mut lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / n_bins as f64;
    let mut counts = vec![0usize; n_bins];
    for &v in samples {
        let b = (((v - lo) / width) as usize).min(n_bins - 1);
        counts[b] += 1;
    }
    let total = samples.len() as f64;
    let axis = (0..n_bins).map(|b| lo + (b as f64 + 0.5) * width).collect();
    let values = counts.iter().map(|&c| c as f64 / (total * width)).collect();
    MetricSeries::new("value", axis, values, samples.len(), 0)
}
