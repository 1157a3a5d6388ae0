//! Oscillator phase noise: profiles, trajectory synthesis, and the per-symbol
//! spectral coefficients that produce common phase error (CPE) and inter-carrier
//! interference (ICI).
//!
//! A [`PhaseNoiseProfile`] is a piecewise power law `L(f)` in dBc/Hz, quoted at
//! a reference carrier. `L(f)` is treated as the two-sided power spectral density
//! of the phase process φ (rad²/Hz), so the phase variance is `∫ L(|f|) df` over
//! the whole frequency axis.
//!
//! # Presets
//!
//! Both presets are quoted at 50 GHz and have the same shape: a flat PLL plateau,
//! a −20 dB/decade VCO region, and a flat far-out floor.
//!
//! | preset | plateau      | plateau corner | floor                   |
//! |--------|--------------|----------------|-------------------------|
//! | `low`  | −85 dBc/Hz   | 100 kHz        | −145 dBc/Hz from 100 MHz |
//! | `high` | −73 dBc/Hz   | 200 kHz        | −133 dBc/Hz from 200 MHz |
//!
//! They are calibration targets, not measured oscillators. `low` was tuned with
//! [`expected_ici_power`] so the ICI-limited SIR is about 35 dB at 28 GHz with
//! 60 kHz spacing and about 30 dB at 82 GHz with 480 kHz spacing. `high` was tuned
//! so the SIR at 82 GHz / 480 kHz is about 12.5 dB, which caps channel-estimation
//! quality near 12 dB. See `docs/calibration.md` for the procedure.

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::{fft, rng, Error, Result, C64};

/// Level of a profile that is effectively noise-free.
pub const SILENT_LEVEL_DBC: f64 = -300.0;

/// Minimum FFT length used by [`synthesize_trajectory`]. A long synthesis grid
/// keeps the lowest synthesised frequency well below any subcarrier spacing.
pub const MIN_SYNTHESIS_LEN: usize = 1 << 16;

/// One piece of a piecewise power-law spectrum, valid from `corner_hz` up to the
/// next segment's corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub corner_hz: f64,
    pub level_dbc_hz: f64,
    /// dB/decade; one of 0, −20, −30.
    pub slope_db_per_decade: f64,
}

impl Segment {
    pub const fn new(corner_hz: f64, level_dbc_hz: f64, slope_db_per_decade: f64) -> Self {
        Segment {
            corner_hz,
            level_dbc_hz,
            slope_db_per_decade,
        }
    }

    fn level_at(&self, f: f64) -> f64 {
        self.level_dbc_hz + self.slope_db_per_decade * (f / self.corner_hz).log10()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseNoiseProfile {
    segments: Vec<Segment>,
    ref_carrier: f64,
}

const CONTINUITY_TOL_DB: f64 = 0.01;

impl PhaseNoiseProfile {
    /// Builds a profile, checking corner order, slopes and continuity.
    ///
    /// An empty segment list is accepted here; synthesis rejects it.
    pub fn new(segments: Vec<Segment>, ref_carrier: f64) -> Result<Self> {
        if !(ref_carrier > 0.0) || !ref_carrier.is_finite() {
            return Err(Error::config("reference carrier must be positive"));
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.corner_hz > 0.0) || !s.corner_hz.is_finite() {
                return Err(Error::config(format!("segment {i}: corner must be positive")));
            }
            if !s.level_dbc_hz.is_finite() {
                return Err(Error::config(format!("segment {i}: level must be finite")));
            }
            if ![0.0, -20.0, -30.0].contains(&s.slope_db_per_decade) {
                return Err(Error::config(format!(
                    "segment {i}: slope must be 0, -20 or -30 dB/decade, got {}",
                    s.slope_db_per_decade
                )));
            }
        }
        for (i, w) in segments.windows(2).enumerate() {
            if w[1].corner_hz <= w[0].corner_hz {
                return Err(Error::config(format!(
                    "segment {}: corner frequencies must be strictly increasing",
                    i + 1
                )));
            }
            let reached = w[0].level_at(w[1].corner_hz);
            if (reached - w[1].level_dbc_hz).abs() > CONTINUITY_TOL_DB {
                return Err(Error::config(format!(
                    "segment {}: level {} dBc/Hz does not continue the previous segment ({reached:.3} dBc/Hz at {} Hz)",
                    i + 1,
                    w[1].level_dbc_hz,
                    w[1].corner_hz
                )));
            }
        }
        Ok(PhaseNoiseProfile { segments, ref_carrier })
    }

    /// Reasonable-quality oscillator, quoted at 50 GHz.
    pub fn low() -> Self {
        Self::new(
            vec![
                Segment::new(1e3, -85.0, 0.0),
                Segment::new(100e3, -85.0, -20.0),
                Segment::new(100e6, -145.0, 0.0),
            ],
            50e9,
        )
        .expect("valid preset")
    }

    /// Low-cost, low-power oscillator, quoted at 50 GHz.
    pub fn high() -> Self {
        Self::new(
            vec![
                Segment::new(1e3, -73.0, 0.0),
                Segment::new(200e3, -73.0, -20.0),
                Segment::new(200e6, -133.0, 0.0),
            ],
            50e9,
        )
        .expect("valid preset")
    }

    /// Flat profile at [`SILENT_LEVEL_DBC`].
    pub fn silent() -> Self {
        Self::new(vec![Segment::new(1.0, SILENT_LEVEL_DBC, 0.0)], 50e9).expect("valid preset")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "low" => Some(Self::low()),
            "high" => Some(Self::high()),
            "silent" => Some(Self::silent()),
            _ => None,
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn ref_carrier(&self) -> f64 {
        self.ref_carrier
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// `L(f)` in dBc/Hz at offset `|f|`. Below the first corner the first level
    /// holds; an empty profile returns [`SILENT_LEVEL_DBC`].
    pub fn level_db(&self, f: f64) -> f64 {
        let f = f.abs();
        let Some(first) = self.segments.first() else {
            return SILENT_LEVEL_DBC;
        };
        if f <= first.corner_hz {
            return first.level_dbc_hz;
        }
        let seg = self.segments.iter().rev().find(|s| s.corner_hz <= f).unwrap_or(first);
        seg.level_at(f)
    }

    /// `L(f)` as a linear density, rad²/Hz.
    pub fn density(&self, f: f64) -> f64 {
        10f64.powf(self.level_db(f) / 10.0)
    }
}

/// Re-quotes `p` at `target_carrier`, shifting every level by
/// `20·log10(target / ref)` dB (phase-noise power grows with the carrier squared).
pub fn scale_profile(p: &PhaseNoiseProfile, target_carrier: f64) -> Result<PhaseNoiseProfile> {
    if !(target_carrier > 0.0) || !target_carrier.is_finite() {
        return Err(Error::config(format!(
            "target carrier must be positive, got {target_carrier}"
        )));
    }
    let shift = 20.0 * (target_carrier / p.ref_carrier).log10();
    Ok(PhaseNoiseProfile {
        segments: p
            .segments
            .iter()
            .map(|s| Segment {
                level_dbc_hz: s.level_dbc_hz + shift,
                ..*s
            })
            .collect(),
        ref_carrier: target_carrier,
    })
}

/// Sampled phase-noise realisation.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrajectory {
    pub phi: Vec<f64>,
    pub sample_rate: f64,
}

impl PhaseTrajectory {
    /// A trajectory with φ ≡ `value`.
    pub fn constant(value: f64, n_samples: usize, sample_rate: f64) -> Self {
        PhaseTrajectory {
            phi: vec![value; n_samples],
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// `e^{jφ[n]}` for `n` in `start..start + len`.
    pub fn phasor(&self, start: usize, len: usize) -> Vec<C64> {
        self.phi[start..start + len]
            .iter()
            .map(|&p| C64::from_polar(1.0, p))
            .collect()
    }
}

/// Synthesises a phase trajectory by spectral shaping.
///
/// A Hermitian-symmetric spectrum on a power-of-two grid of at least
/// [`MIN_SYNTHESIS_LEN`] points is filled with circular complex Gaussian
/// values of variance `L(f_k)·Δf`. The DC bin is zero. Its inverse DFT is real
/// and has two-sided PSD `L(f)`; the first `n_samples` values are returned.
pub fn synthesize_trajectory(
    p: &PhaseNoiseProfile,
    n_samples: usize,
    sample_rate: f64,
    seed: u64,
) -> Result<PhaseTrajectory> {
    let mut r = rng::StreamRng::seed_from_u64(seed);
    synthesize_with(p, n_samples, sample_rate, MIN_SYNTHESIS_LEN, &mut r)
}

/// [`synthesize_trajectory`] with an explicit generator and minimum grid length.
pub fn synthesize_with<R: Rng + ?Sized>(
    p: &PhaseNoiseProfile,
    n_samples: usize,
    sample_rate: f64,
    min_len: usize,
    r: &mut R,
) -> Result<PhaseTrajectory> {
    if p.is_empty() {
        return Err(Error::config("phase-noise profile has no segments"));
    }
    if n_samples < 2 {
        return Err(Error::config("phase trajectory needs at least 2 samples"));
    }
    if !(sample_rate > 0.0) || !sample_rate.is_finite() {
        return Err(Error::config("sample rate must be positive"));
    }
    let m = n_samples.max(min_len).max(2).next_power_of_two();
    let df = sample_rate / m as f64;
    let half = m / 2;
    let mut spec = vec![C64::new(0.0, 0.0); m];
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for k in 1..half {
        let a = (p.density(k as f64 * df) * df).sqrt();
        let re: f64 = r.sample(StandardNormal);
        let im: f64 = r.sample(StandardNormal);
        let v = C64::new(re, im) * (a * inv_sqrt2);
        spec[k] = v;
        spec[m - k] = v.conj();
    }
    let nyq: f64 = r.sample(StandardNormal);
    spec[half] = C64::new(nyq * (p.density(half as f64 * df) * df).sqrt(), 0.0);
    fft::inverse_raw(&mut spec);
    Ok(PhaseTrajectory {
        phi: spec[..n_samples].iter().map(|v| v.re).collect(),
        sample_rate,
    })
}

/// Normalised DFT of the phase-noise phasor over one symbol window:
/// `J_i = (1/N) Σ_n e^{jφ[start+n]} e^{-j2πni/N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    pub j: Vec<C64>,
}

impl SpectralCoefficients {
    /// Coefficients of a noise-free oscillator: `J_0 = 1`, all others zero.
    pub fn ideal(n: usize) -> Self {
        let mut j = vec![C64::new(0.0, 0.0); n];
        j[0] = C64::new(1.0, 0.0);
        SpectralCoefficients { j }
    }

    pub fn len(&self) -> usize {
        self.j.len()
    }

    pub fn is_empty(&self) -> bool {
        self.j.is_empty()
    }

    /// `J_{i mod N}` for a signed offset.
    pub fn at(&self, offset: isize) -> C64 {
        let n = self.j.len() as isize;
        self.j[offset.rem_euclid(n) as usize]
    }

    pub fn energy(&self) -> f64 {
        self.j.iter().map(|v| v.norm_sqr()).sum()
    }
}

pub fn spectral_coefficients(t: &PhaseTrajectory, window_start: usize, n_fft: usize) -> Result<SpectralCoefficients> {
    if n_fft == 0 || window_start.checked_add(n_fft).is_none_or(|end| end > t.len()) {
        return Err(Error::shape(format!(
            "window {window_start}..{} exceeds trajectory of {} samples",
            window_start.saturating_add(n_fft),
            t.len()
        )));
    }
    let mut j = t.phasor(window_start, n_fft);
    fft::forward_raw(&mut j);
    let inv = 1.0 / n_fft as f64;
    j.iter_mut().for_each(|v| *v *= inv);
    Ok(SpectralCoefficients { j })
}

/// `J_0` only, i.e. the mean phasor over the window.
pub fn window_cpe(t: &PhaseTrajectory, window_start: usize, n_fft: usize) -> Result<C64> {
    if n_fft == 0 || window_start + n_fft > t.len() {
        return Err(Error::shape("window exceeds trajectory"));
    }
    let s: C64 = t.phi[window_start..window_start + n_fft]
        .iter()
        .map(|&p| C64::from_polar(1.0, p))
        .sum();
    Ok(s / n_fft as f64)
}

/// Common phase error term `J_0`.
pub fn cpe(coeffs: &SpectralCoefficients) -> C64 {
    coeffs.j[0]
}

/// Expected ICI power per subcarrier for unit-power i.i.d. symbols, `1 − |J_0|²`.
pub fn ici_power(coeffs: &SpectralCoefficients) -> f64 {
    (1.0 - coeffs.j[0].norm_sqr()).max(0.0)
}

/// Expected `1 − |J_0|²` for the synthesis process of [`synthesize_trajectory`]
/// (Gaussian phase, `synthesis_len`-point grid at `sample_rate`), evaluated
/// analytically from the phase structure function:
///
/// `E|J_0|² = (1/N²) Σ_{n,m} exp(−D(n−m)/2)`, `D(τ) = 2(R(0) − R(τ))`,
///
/// where `R` is the autocorrelation implied by the discrete spectrum. `p` must
/// already be quoted at the carrier of interest.
pub fn expected_ici_power(p: &PhaseNoiseProfile, sample_rate: f64, n_fft: usize, synthesis_len: usize) -> f64 {
    let m = synthesis_len.max(n_fft).next_power_of_two();
    let df = sample_rate / m as f64;
    let half = m / 2;
    let mut psd = vec![C64::new(0.0, 0.0); m];
    for k in 1..half {
        let s = p.density(k as f64 * df) * df;
        psd[k] = C64::new(s, 0.0);
        psd[m - k] = C64::new(s, 0.0);
    }
    psd[half] = C64::new(p.density(half as f64 * df) * df, 0.0);
    fft::forward_raw(&mut psd);
    let r0 = psd[0].re;
    let n = n_fft as f64;
    let mut acc = n;
    for (tau, r) in psd.iter().enumerate().take(n_fft).skip(1) {
        let d = 2.0 * (r0 - r.re);
        acc += 2.0 * (n - tau as f64) * (-d / 2.0).exp();
    }
    (1.0 - acc / (n * n)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn flat(level: f64) -> PhaseNoiseProfile {
        PhaseNoiseProfile::new(vec![Segment::new(1e3, level, 0.0)], 50e9).unwrap()
    }

    #[test]
    fn presets_are_continuous_and_ordered() {
        for p in [PhaseNoiseProfile::low(), PhaseNoiseProfile::high()] {
            assert!(p.segments().windows(2).all(|w| w[0].corner_hz < w[1].corner_hz));
            assert_eq!(p.ref_carrier(), 50e9);
        }
        assert_eq!(PhaseNoiseProfile::low().level_db(1e6), -105.0);
        assert_eq!(PhaseNoiseProfile::low().level_db(10.0), -85.0);
        assert!((PhaseNoiseProfile::low().level_db(1e9) + 145.0).abs() < 1e-12);
    }

    #[test]
    fn discontinuous_profile_is_rejected() {
        let r = PhaseNoiseProfile::new(
            vec![Segment::new(1e3, -80.0, -20.0), Segment::new(1e4, -90.0, 0.0)],
            50e9,
        );
        assert!(r.is_err());
        let r = PhaseNoiseProfile::new(vec![Segment::new(1e3, -80.0, -10.0)], 50e9);
        assert!(r.is_err());
        let r = PhaseNoiseProfile::new(vec![Segment::new(1e4, -80.0, 0.0), Segment::new(1e3, -80.0, 0.0)], 50e9);
        assert!(r.is_err());
    }

    #[test]
    fn scaling_follows_carrier_squared() {
        let p = PhaseNoiseProfile::low();
        let same = scale_profile(&p, 50e9).unwrap();
        assert_eq!(same, p);
        let up = scale_profile(&p, 100e9).unwrap();
        for (a, b) in up.segments().iter().zip(p.segments()) {
            assert!((a.level_dbc_hz - b.level_dbc_hz - 6.0206).abs() < 1e-4);
        }
        let down = scale_profile(&p, 28e9).unwrap();
        let want = 20.0 * (28.0f64 / 50.0).log10();
        assert!((want + 5.0362).abs() < 1e-3);
        for (a, b) in down.segments().iter().zip(p.segments()) {
            assert!((a.level_dbc_hz - b.level_dbc_hz - want).abs() < 1e-12);
        }
        assert!(scale_profile(&p, 0.0).is_err());
        assert!(scale_profile(&p, -1.0).is_err());
    }

    #[test]
    fn scaling_is_invertible() {
        let p = PhaseNoiseProfile::high();
        for f in [1e9, 28e9, 82e9, 300e9] {
            let back = scale_profile(&scale_profile(&p, f).unwrap(), 50e9).unwrap();
            for (a, b) in back.segments().iter().zip(p.segments()) {
                assert!((a.level_dbc_hz - b.level_dbc_hz).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn silent_profile_gives_negligible_phase() {
        let t = synthesize_trajectory(&PhaseNoiseProfile::silent(), 10_000, 122.88e6, 3).unwrap();
        assert!(t.phi.iter().all(|p| p.abs() < 1e-10));
    }

    #[test]
    fn empty_profile_cannot_be_synthesised() {
        let p = PhaseNoiseProfile::new(vec![], 50e9).unwrap();
        assert!(matches!(synthesize_trajectory(&p, 100, 1e6, 0), Err(Error::Config(_))));
    }

    #[test]
    fn synthesis_is_deterministic_per_seed() {
        let p = PhaseNoiseProfile::high();
        let a = synthesize_trajectory(&p, 5000, 983.04e6, 11).unwrap();
        let b = synthesize_trajectory(&p, 5000, 983.04e6, 11).unwrap();
        assert_eq!(a, b);
        let c = synthesize_trajectory(&p, 5000, 983.04e6, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn independent_seeds_are_uncorrelated() {
        let p = flat(-100.0);
        let n = 1 << 20;
        let a = synthesize_trajectory(&p, n, 1e6, 1).unwrap();
        let b = synthesize_trajectory(&p, n, 1e6, 2).unwrap();
        let dot: f64 = a.phi.iter().zip(&b.phi).map(|(x, y)| x * y).sum();
        let na: f64 = a.phi.iter().map(|x| x * x).sum();
        let nb: f64 = b.phi.iter().map(|x| x * x).sum();
        assert!((dot / (na * nb).sqrt()).abs() < 0.01);
    }

    /// Welch estimate (Hann window, 50 % overlap) of the two-sided PSD.
    fn welch_psd(x: &[f64], fs: f64, seg: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..seg)
            .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / seg as f64).cos())
            .collect();
        let u: f64 = w.iter().map(|v| v * v).sum();
        let mut acc = vec![0.0; seg];
        let mut count = 0;
        let mut start = 0;
        while start + seg <= x.len() {
            let mut buf: Vec<C64> = (0..seg).map(|i| C64::new(x[start + i] * w[i], 0.0)).collect();
            fft::forward_raw(&mut buf);
            for (a, v) in acc.iter_mut().zip(&buf) {
                *a += v.norm_sqr();
            }
            count += 1;
            start += seg / 2;
        }
        acc.iter().map(|a| a / (count as f64 * fs * u)).collect()
    }

    #[test]
    fn welch_estimate_matches_flat_level() {
        let fs = 1e6;
        let p = flat(-100.0);
        let t = synthesize_trajectory(&p, 1 << 20, fs, 21).unwrap();
        let seg = 4096;
        let psd = welch_psd(&t.phi, fs, seg);
        // bins from 1 kHz to just below fs/2, in 16 bands
        let lo = (1e3 / (fs / seg as f64)).ceil() as usize + 2;
        let hi = seg / 2 - 2;
        let band = (hi - lo) / 16;
        for b in 0..16 {
            let s = &psd[lo + b * band..lo + (b + 1) * band];
            let mean = s.iter().sum::<f64>() / s.len() as f64;
            let db = 10.0 * mean.log10();
            assert!((db + 100.0).abs() < 1.0, "band {b}: {db:.2} dBc/Hz");
        }
    }

    #[test]
    fn zero_phase_gives_ideal_coefficients() {
        let t = PhaseTrajectory::constant(0.0, 64, 1e6);
        let c = spectral_coefficients(&t, 0, 64).unwrap();
        assert!((cpe(&c) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c.j[1..].iter().all(|v| v.norm() < 1e-15));
        assert_eq!(ici_power(&c), 0.0);
    }

    #[test]
    fn constant_phase_is_pure_cpe() {
        let t = PhaseTrajectory::constant(PI / 4.0, 128, 1e6);
        let c = spectral_coefficients(&t, 10, 64).unwrap();
        assert!((cpe(&c) - C64::from_polar(1.0, PI / 4.0)).norm() < 1e-14);
        assert!(c.j[1..].iter().all(|v| v.norm() < 1e-14));
        assert!(ici_power(&c) < 1e-14);
    }

    #[test]
    fn ramp_spills_energy_but_keeps_parseval() {
        let n = 256;
        let eps = 2e-3;
        let t = PhaseTrajectory {
            phi: (0..n).map(|i| eps * i as f64).collect(),
            sample_rate: 1e6,
        };
        let c = spectral_coefficients(&t, 0, n).unwrap();
        // direct DFT oracle
        for i in [0usize, 1, 2, n - 1] {
            let want: C64 = (0..n)
                .map(|k| C64::from_polar(1.0, eps * k as f64 - 2.0 * PI * (k * i) as f64 / n as f64))
                .sum::<C64>()
                / n as f64;
            assert!((c.j[i] - want).norm() < 1e-12);
        }
        assert!(cpe(&c).norm() < 1.0);
        assert!(c.j[1].norm() > 1e-3 && c.j[n - 1].norm() > 1e-3);
        assert!((c.energy() - 1.0).abs() < 1e-9);
        let direct: f64 = c.j[1..].iter().map(|v| v.norm_sqr()).sum();
        assert!((ici_power(&c) - direct).abs() < 1e-9);
    }

    #[test]
    fn window_must_fit() {
        let t = PhaseTrajectory::constant(0.0, 100, 1e6);
        assert!(matches!(spectral_coefficients(&t, 50, 64), Err(Error::Shape(_))));
        assert!(spectral_coefficients(&t, 36, 64).is_ok());
    }

    #[test]
    fn low_preset_cpe_magnitude_at_60khz() {
        let p = scale_profile(&PhaseNoiseProfile::low(), 28e9).unwrap();
        let fs = 2048.0 * 60e3;
        let t = synthesize_trajectory(&p, 1000 * 2048, fs, 5).unwrap();
        for w in 0..1000 {
            let c = spectral_coefficients(&t, w * 2048, 2048).unwrap();
            let m = cpe(&c).norm();
            assert!(m > 0.9 && m <= 1.0 + 1e-12, "window {w}: {m}");
            assert!((c.energy() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn monte_carlo_ici_matches_analytic_expectation() {
        let fs = 2048.0 * 480e3;
        for base in [PhaseNoiseProfile::low(), PhaseNoiseProfile::high()] {
            let p = scale_profile(&base, 82e9).unwrap();
            let t = synthesize_trajectory(&p, 512 * 2048, fs, 8).unwrap();
            let mc = (0..512)
                .map(|w| ici_power(&spectral_coefficients(&t, w * 2048, 2048).unwrap()))
                .sum::<f64>()
                / 512.0;
            let want = expected_ici_power(&p, fs, 2048, 512 * 2048);
            let ratio_db = 10.0 * (mc / want).log10();
            assert!(ratio_db.abs() < 0.5, "mc {mc:e} analytic {want:e}");
        }
    }
}
