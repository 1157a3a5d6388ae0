//! Tapped-delay-line multipath channel and additive white Gaussian noise.
//!
//! A realisation is a sparse list of `(delay, gain)` taps normalised to unit
//! total power. It is drawn once per trial and held fixed across the frame.

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::{fft, rng, Error, Result, C64};

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    taps: Vec<(usize, C64)>,
}

impl ChannelModel {
    /// Taps must have strictly ascending delays and unit total power.
    pub fn new(taps: Vec<(usize, C64)>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::config("channel needs at least one tap"));
        }
        if taps.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::config("channel tap delays must be strictly ascending"));
        }
        let p: f64 = taps.iter().map(|t| t.1.norm_sqr()).sum();
        if (p - 1.0).abs() > NORM_TOL {
            return Err(Error::config(format!("channel tap power must be 1, got {p}")));
        }
        Ok(ChannelModel { taps })
    }

    /// Scales the gains to unit total power before validating.
    pub fn normalized(taps: Vec<(usize, C64)>) -> Result<Self> {
        let p: f64 = taps.iter().map(|t| t.1.norm_sqr()).sum();
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::config("channel taps have zero power"));
        }
        let s = p.sqrt().recip();
        Self::new(taps.into_iter().map(|(d, g)| (d, g * s)).collect())
    }

    pub fn flat() -> Self {
        ChannelModel {
            taps: vec![(0, C64::new(1.0, 0.0))],
        }
    }

    pub fn taps(&self) -> &[(usize, C64)] {
        &self.taps
    }

    pub fn max_delay(&self) -> usize {
        self.taps.last().map_or(0, |t| t.0)
    }

    pub fn is_identity(&self) -> bool {
        self.taps.len() == 1 && self.taps[0] == (0, C64::new(1.0, 0.0))
    }
}

/// How a trial's channel is obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelProfile {
    /// Single unit tap at delay 0.
    Flat,
    /// Rayleigh taps at delays `0, spacing, 2·spacing, …` with mean power
    /// `exp(−delay/decay)`, renormalised per realisation.
    Exponential { n_taps: usize, spacing: usize, decay: f64 },
    /// A fixed, known channel.
    Fixed(ChannelModel),
}

impl ChannelProfile {
    pub fn exponential_default() -> Self {
        ChannelProfile::Exponential {
            n_taps: 8,
            spacing: 8,
            decay: 16.0,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "flat" => Some(ChannelProfile::Flat),
            "exponential" => Some(Self::exponential_default()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let ChannelProfile::Exponential { n_taps, spacing, decay } = self {
            if *n_taps == 0 || *spacing == 0 {
                return Err(Error::config("exponential channel needs n_taps ≥ 1 and spacing ≥ 1"));
            }
            if !(*decay > 0.0) || !decay.is_finite() {
                return Err(Error::config("exponential channel decay must be positive"));
            }
        }
        Ok(())
    }

    pub fn max_delay(&self) -> usize {
        match self {
            ChannelProfile::Flat => 0,
            ChannelProfile::Exponential { n_taps, spacing, .. } => (n_taps - 1) * spacing,
            ChannelProfile::Fixed(m) => m.max_delay(),
        }
    }

    /// Draws one realisation.
    pub fn realize<R: Rng + ?Sized>(&self, r: &mut R) -> Result<ChannelModel> {
        self.validate()?;
        match self {
            ChannelProfile::Flat => Ok(ChannelModel::flat()),
            ChannelProfile::Fixed(m) => Ok(m.clone()),
            ChannelProfile::Exponential { n_taps, spacing, decay } => {
                let taps = (0..*n_taps)
                    .map(|i| {
                        let d = i * spacing;
                        let s = (-(d as f64) / decay).exp().sqrt() * std::f64::consts::FRAC_1_SQRT_2;
                        let re: f64 = r.sample(StandardNormal);
                        let im: f64 = r.sample(StandardNormal);
                        (d, C64::new(re, im) * s)
                    })
                    .collect();
                ChannelModel::normalized(taps)
            }
        }
    }
}

/// Linear convolution with the tapped delay line, truncated to the input length.
pub fn apply_channel(ch: &ChannelModel, samples: &[C64]) -> Vec<C64> {
    if ch.is_identity() {
        return samples.to_vec();
    }
    let mut out = vec![C64::new(0.0, 0.0); samples.len()];
    for &(d, g) in &ch.taps {
        if d >= samples.len() {
            continue;
        }
        for (o, &x) in out[d..].iter_mut().zip(samples) {
            *o += g * x;
        }
    }
    out
}

/// `H_k`, the `n_fft`-point DFT of the zero-padded impulse response.
pub fn freq_response(ch: &ChannelModel, n_fft: usize) -> Result<Vec<C64>> {
    if ch.max_delay() >= n_fft {
        return Err(Error::config(format!(
            "channel delay {} does not fit in {n_fft} bins",
            ch.max_delay()
        )));
    }
    Ok(fft::padded_response(&ch.taps, n_fft))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Effective SNR in dB, i.e. received SNR plus any array gain.
    pub snr_db: f64,
    pub signal_power_ref: f64,
}

impl NoiseSpec {
    pub fn new(snr_db: f64, signal_power_ref: f64) -> Result<Self> {
        if snr_db.is_nan() {
            return Err(Error::config("snr_db must be a number"));
        }
        if !(signal_power_ref > 0.0) || !signal_power_ref.is_finite() {
            return Err(Error::config("signal_power_ref must be positive"));
        }
        Ok(NoiseSpec {
            snr_db,
            signal_power_ref,
        })
    }

    /// Noise is effectively off.
    pub fn silent() -> Self {
        NoiseSpec {
            snr_db: f64::INFINITY,
            signal_power_ref: 1.0,
        }
    }

    pub fn variance(&self) -> f64 {
        self.signal_power_ref / 10f64.powf(self.snr_db / 10.0)
    }
}

pub fn add_awgn(samples: &[C64], noise: &NoiseSpec, seed: u64) -> Vec<C64> {
    let mut r = rng::StreamRng::seed_from_u64(seed);
    add_awgn_with(samples, noise, &mut r)
}

/// Same as [`add_awgn`] with a caller-supplied generator.
pub fn add_awgn_with<R: Rng + ?Sized>(samples: &[C64], noise: &NoiseSpec, r: &mut R) -> Vec<C64> {
    let w = awgn_samples(samples.len(), noise, r);
    samples.iter().zip(&w).map(|(x, n)| x + n).collect()
}

/// `n` noise samples of variance `noise.variance()`. Draws nothing and returns
/// zeros when the variance is zero.
pub fn awgn_samples<R: Rng + ?Sized>(n: usize, noise: &NoiseSpec, r: &mut R) -> Vec<C64> {
    let var = noise.variance();
    if var == 0.0 {
        return vec![C64::new(0.0, 0.0); n];
    }
    let s = (var / 2.0).sqrt();
    (0..n)
        .map(|_| {
            let re: f64 = r.sample(StandardNormal);
            let im: f64 = r.sample(StandardNormal);
            C64::new(re, im) * s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ofdm::{demodulate_samples, modulate, SubcarrierGrid};
    use proptest::prelude::*;

    fn ramp(n: usize) -> Vec<C64> {
        (0..n).map(|i| C64::new(i as f64 + 1.0, -(i as f64) * 0.25)).collect()
    }

    fn dense_conv(h: &[C64], x: &[C64]) -> Vec<C64> {
        (0..x.len())
            .map(|i| (0..h.len().min(i + 1)).map(|t| h[t] * x[i - t]).sum())
            .collect()
    }

    #[test]
    fn single_taps() {
        let x = ramp(20);
        assert_eq!(apply_channel(&ChannelModel::flat(), &x), x);
        let d = ChannelModel::new(vec![(3, C64::new(1.0, 0.0))]).unwrap();
        let y = apply_channel(&d, &x);
        assert!(y[..3].iter().all(|v| v.norm() == 0.0));
        assert_eq!(&y[3..], &x[..17]);
    }

    #[test]
    fn two_taps_match_dense_fir() {
        let ch = ChannelModel::normalized(vec![(0, C64::new(0.8, 0.1)), (5, C64::new(-0.3, 0.5))]).unwrap();
        let mut h = vec![C64::new(0.0, 0.0); 6];
        for &(d, g) in ch.taps() {
            h[d] = g;
        }
        let x = ramp(30);
        for (a, b) in apply_channel(&ch, &x).iter().zip(dense_conv(&h, &x)) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn invalid_models() {
        assert!(ChannelModel::new(vec![]).is_err());
        assert!(ChannelModel::new(vec![(0, C64::new(0.5, 0.0))]).is_err());
        assert!(ChannelModel::normalized(vec![(2, C64::new(1.0, 0.0)), (1, C64::new(1.0, 0.0))]).is_err());
        assert!(freq_response(&ChannelModel::new(vec![(16, C64::new(1.0, 0.0))]).unwrap(), 16).is_err());
    }

    #[test]
    fn flat_and_delay_responses() {
        let h = freq_response(&ChannelModel::flat(), 32).unwrap();
        assert!(h.iter().all(|&v| v == C64::new(1.0, 0.0)));
        let d = 3;
        let h = freq_response(&ChannelModel::new(vec![(d, C64::new(1.0, 0.0))]).unwrap(), 32).unwrap();
        for (k, v) in h.iter().enumerate() {
            let want = C64::from_polar(1.0, -2.0 * std::f64::consts::PI * (k * d) as f64 / 32.0);
            assert!((v - want).norm() < 1e-12);
        }
    }

    #[test]
    fn ofdm_sees_per_bin_response() {
        let mut r = rng::stream(5, "test", 0);
        let ch = ChannelProfile::Exponential {
            n_taps: 4,
            spacing: 3,
            decay: 5.0,
        }
        .realize(&mut r)
        .unwrap();
        let n = 128;
        let pilot = SubcarrierGrid::new(vec![C64::new(1.0, 0.0); n]);
        let sym = modulate(&pilot, 16).unwrap();
        let rx = demodulate_samples(&apply_channel(&ch, &sym.samples), n, 16).unwrap();
        let h = freq_response(&ch, n).unwrap();
        for (a, b) in rx.values().iter().zip(&h) {
            assert!((a - b).norm() < 1e-9);
        }
        let mean_power = h.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean_power - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_preset_is_normalised_and_random() {
        let p = ChannelProfile::exponential_default();
        assert_eq!(p.max_delay(), 56);
        let a = p.realize(&mut rng::stream(1, "channel", 0)).unwrap();
        let b = p.realize(&mut rng::stream(1, "channel", 1)).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, p.realize(&mut rng::stream(1, "channel", 0)).unwrap());
        assert_eq!(a.taps().len(), 8);
    }

    #[test]
    fn noise_limits_and_variance() {
        let x = ramp(100);
        let y = add_awgn(&x, &NoiseSpec::new(300.0, 1.0).unwrap(), 3);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() < 1e-14 * a.norm());
        }
        let n = 1_000_000;
        let zeros = vec![C64::new(0.0, 0.0); n];
        let w = add_awgn(&zeros, &NoiseSpec::new(0.0, 1.0).unwrap(), 4);
        let p = w.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        assert!((p - 1.0).abs() < 0.01, "{p}");
        assert_eq!(w, add_awgn(&zeros, &NoiseSpec::new(0.0, 1.0).unwrap(), 4));
        assert_eq!(add_awgn(&x, &NoiseSpec::silent(), 4), x);
        assert!(NoiseSpec::new(10.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn normalised_power_is_unity(gains in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..10)) {
            prop_assume!(gains.iter().any(|g| g.0.abs() + g.1.abs() > 1e-3));
            let taps = gains.iter().enumerate().map(|(i, g)| (i * 2, C64::new(g.0, g.1))).collect();
            let ch = ChannelModel::normalized(taps).unwrap();
            let h = freq_response(&ch, 64).unwrap();
            let mean = h.iter().map(|v| v.norm_sqr()).sum::<f64>() / 64.0;
            prop_assert!((mean - 1.0).abs() < 1e-12);
        }
    }
}
