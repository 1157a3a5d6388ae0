//! Memoryless odd-order polynomial power amplifier and its Bussgang
//! decomposition.
//!
//! The amplifier is `f(u) = Σ_p a_{2p+1} · u · |u|^{2p}` for `p = 0..=4`.
//! Input backoff moves the operating point along the curve: the input is scaled
//! by `b = 10^(−backoff/20)` and the output is re-referenced by `1/b`, so the
//! small-signal gain stays `a₁` whatever the backoff.
//!
//! For a circular complex Gaussian input of power σ² the Bussgang gain has the
//! closed form `α₁′ = Σ_p a_{2p+1} (p+1)! σ^{2p}`, which follows from the
//! moments `E|x|^{2m} = m!·σ^{2m}`.
//!
//! # Default preset
//!
//! `a = [1, −0.026, 0.001, −2·10⁻⁵, 1.5·10⁻⁷]` is monotone and compressive up to
//! an amplitude of 4.5 (13 dB above unit power). At unit input power and 0 dB
//! backoff it has `α₁′ ≈ 0.9535` and an in-band distortion floor of about
//! −30.2 dBc, which is what [`bussgang_closed_form_power`] and
//! [`bussgang_mc`] both report.

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::{rng, Error, Result, C64};

/// Number of odd-order coefficients `a₁, a₃, a₅, a₇, a₉`.
pub const N_COEFFS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct PaModel {
    coeffs: [C64; N_COEFFS],
    input_backoff_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BussgangDecomposition {
    pub alpha1: C64,
    /// σ²_ξ, in the same power units as `input_power`.
    pub distortion_power: f64,
    pub input_power: f64,
}

impl BussgangDecomposition {
    /// Distortion power relative to the linear output power, in dB.
    pub fn distortion_dbc(&self) -> f64 {
        crate::db_ratio(self.distortion_power, self.alpha1.norm_sqr() * self.input_power)
    }
}

impl PaModel {
    pub fn new(coeffs: [C64; N_COEFFS], input_backoff_db: f64) -> Result<Self> {
        if coeffs[0].norm() == 0.0 {
            return Err(Error::config("PA linear coefficient a1 must be nonzero"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::config("PA coefficients must be finite"));
        }
        if !input_backoff_db.is_finite() {
            return Err(Error::config("PA input backoff must be finite"));
        }
        Ok(PaModel {
            coeffs,
            input_backoff_db,
        })
    }

    pub fn from_real(coeffs: [f64; N_COEFFS], input_backoff_db: f64) -> Result<Self> {
        Self::new(coeffs.map(|c| C64::new(c, 0.0)), input_backoff_db)
    }

    pub fn identity() -> Self {
        Self::linear(C64::new(1.0, 0.0))
    }

    pub fn linear(gain: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new([gain, z, z, z, z], 0.0).expect("nonzero gain")
    }

    pub fn default_preset() -> Self {
        Self::from_real([1.0, -0.026, 0.001, -2e-5, 1.5e-7], 0.0).expect("valid preset")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "identity" => Some(Self::identity()),
            "default" => Some(Self::default_preset()),
            _ => None,
        }
    }

    pub fn coeffs(&self) -> &[C64; N_COEFFS] {
        &self.coeffs
    }

    pub fn input_backoff_db(&self) -> f64 {
        self.input_backoff_db
    }

    pub fn with_backoff(mut self, backoff_db: f64) -> Self {
        self.input_backoff_db = backoff_db;
        self
    }

    fn backoff_gain(&self) -> f64 {
        10f64.powf(-self.input_backoff_db / 20.0)
    }

    /// The raw polynomial `f(u)`.
    fn poly(&self, u: C64) -> C64 {
        let r2 = u.norm_sqr();
        // Horner in |u|²
        let g = self
            .coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &a| acc * r2 + a);
        u * g
    }

    /// Output for one input sample, including backoff scaling.
    pub fn eval(&self, x: C64) -> C64 {
        let b = self.backoff_gain();
        self.poly(x * b) / b
    }
}

/// Applies the amplifier sample by sample.
pub fn apply(pa: &PaModel, samples: &[C64]) -> Vec<C64> {
    samples.iter().map(|&x| pa.eval(x)).collect()
}

fn check_power(input_power: f64) -> Result<()> {
    if !(input_power > 0.0) || !input_power.is_finite() {
        return Err(Error::config(format!(
            "input power must be positive, got {input_power}"
        )));
    }
    Ok(())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

/// Closed-form Bussgang gain for circular Gaussian input of power `input_power`.
pub fn bussgang_closed_form(pa: &PaModel, input_power: f64) -> Result<C64> {
    check_power(input_power)?;
    let s2 = input_power * pa.backoff_gain().powi(2);
    Ok(pa
        .coeffs
        .iter()
        .enumerate()
        .map(|(p, &a)| a * factorial(p + 1) * s2.powi(p as i32))
        .sum())
}

/// Closed-form decomposition: gain plus distortion power
/// `σ²_ξ = E|f(x)|² − |α₁′|²σ²` from the Gaussian moments.
pub fn bussgang_closed_form_power(pa: &PaModel, input_power: f64) -> Result<BussgangDecomposition> {
    let alpha1 = bussgang_closed_form(pa, input_power)?;
    let b2 = pa.backoff_gain().powi(2);
    let s2 = input_power * b2;
    // E|f(u)|² = Σ_p Σ_q a_p a_q* E|u|^{2(p+q+1)}
    let mut out = 0.0;
    for (p, &ap) in pa.coeffs.iter().enumerate() {
        for (q, &aq) in pa.coeffs.iter().enumerate() {
            let m = p + q + 1;
            out += (ap * aq.conj()).re * factorial(m) * s2.powi(m as i32);
        }
    }
    let out = out / b2;
    Ok(BussgangDecomposition {
        alpha1,
        distortion_power: (out - alpha1.norm_sqr() * input_power).max(0.0),
        input_power,
    })
}

/// Monte-Carlo Bussgang decomposition over `n_samples` i.i.d. circular Gaussian
/// inputs of power `input_power`.
pub fn bussgang_mc(pa: &PaModel, input_power: f64, n_samples: usize, seed: u64) -> Result<BussgangDecomposition> {
    check_power(input_power)?;
    if n_samples < 10_000 {
        return Err(Error::config(format!(
            "Bussgang Monte Carlo needs at least 10^4 samples, got {n_samples}"
        )));
    }
    let x = gaussian_samples(input_power, n_samples, seed);
    let y = apply(pa, &x);
    let cross: C64 = y.iter().zip(&x).map(|(a, b)| a * b.conj()).sum();
    let power: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    let alpha1 = cross / power;
    let distortion_power = y.iter().zip(&x).map(|(a, b)| (a - alpha1 * b).norm_sqr()).sum::<f64>() / n_samples as f64;
    Ok(BussgangDecomposition {
        alpha1,
        distortion_power,
        input_power,
    })
}

/// `f(x) − α₁′x`, the part of the output uncorrelated with the input.
pub fn distortion_residual(pa: &PaModel, samples: &[C64], alpha1: C64) -> Vec<C64> {
    samples.iter().map(|&x| pa.eval(x) - alpha1 * x).collect()
}

/// Circular complex Gaussian samples of the given power.
pub fn gaussian_samples(power: f64, n: usize, seed: u64) -> Vec<C64> {
    let mut r = rng::StreamRng::seed_from_u64(seed);
    let s = (power / 2.0).sqrt();
    (0..n)
        .map(|_| {
            let re: f64 = r.sample(StandardNormal);
            let im: f64 = r.sample(StandardNormal);
            C64::new(re * s, im * s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(a3: C64) -> PaModel {
        let z = C64::new(0.0, 0.0);
        PaModel::new([C64::new(1.0, 0.0), a3, z, z, z], 0.0).unwrap()
    }

    #[test]
    fn identity_is_transparent() {
        let x = gaussian_samples(1.0, 100, 1);
        assert_eq!(apply(&PaModel::identity(), &x), x);
    }

    #[test]
    fn zero_linear_term_is_rejected() {
        let z = C64::new(0.0, 0.0);
        assert!(PaModel::new([z, C64::new(1.0, 0.0), z, z, z], 0.0).is_err());
    }

    #[test]
    fn cubic_hand_evaluations() {
        let pa = cubic(C64::new(-0.1, 0.0));
        assert!((pa.eval(C64::new(1.0, 0.0)) - C64::new(0.9, 0.0)).norm() < 1e-15);
        let pa = cubic(C64::new(-0.1, 0.05));
        let y = pa.eval(C64::new(0.0, 2.0));
        assert!((y - C64::new(-0.4, 1.2)).norm() < 1e-14, "{y}");
    }

    #[test]
    fn closed_form_gain_examples() {
        assert_eq!(
            bussgang_closed_form(&PaModel::identity(), 1.0).unwrap(),
            C64::new(1.0, 0.0)
        );
        let pa = cubic(C64::new(-0.1, 0.0));
        assert!((bussgang_closed_form(&pa, 1.0).unwrap() - C64::new(0.8, 0.0)).norm() < 1e-15);
        assert!((bussgang_closed_form(&pa, 0.5).unwrap() - C64::new(0.9, 0.0)).norm() < 1e-15);
        assert!(bussgang_closed_form(&pa, 0.0).is_err());
        assert!(bussgang_closed_form(&pa, -1.0).is_err());
    }

    #[test]
    fn backoff_is_equivalent_to_lower_input_power() {
        let pa = PaModel::default_preset().with_backoff(3.0);
        let base = PaModel::default_preset();
        let a = bussgang_closed_form(&pa, 1.0).unwrap();
        let b = bussgang_closed_form(&base, 10f64.powf(-0.3)).unwrap();
        assert!((a - b).norm() < 1e-12);
        // small-signal gain unchanged
        let tiny = C64::new(1e-6, 0.0);
        assert!((pa.eval(tiny) / tiny - C64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn mc_identity_and_linear_gain() {
        let d = bussgang_mc(&PaModel::identity(), 1.0, 20_000, 3).unwrap();
        assert!((d.alpha1 - C64::new(1.0, 0.0)).norm() < 1e-6);
        assert!(d.distortion_power < 1e-9);
        let g = C64::new(0.7, -0.2);
        let d = bussgang_mc(&PaModel::linear(g), 2.0, 20_000, 4).unwrap();
        assert!((d.alpha1 - g).norm() < 1e-12);
        assert!(d.distortion_power < 1e-20);
        assert!(bussgang_mc(&PaModel::identity(), 1.0, 100, 0).is_err());
    }

    #[test]
    fn default_preset_sits_near_minus_30_dbc() {
        let d = bussgang_closed_form_power(&PaModel::default_preset(), 1.0).unwrap();
        assert!((d.alpha1.re - 0.95354).abs() < 1e-5, "{}", d.alpha1);
        assert!((d.distortion_dbc() + 30.23).abs() < 0.05, "{}", d.distortion_dbc());
    }

    #[test]
    fn mc_converges_to_closed_form() {
        let pa = PaModel::default_preset();
        let want = bussgang_closed_form(&pa, 1.0).unwrap();
        let err_small = (bussgang_mc(&pa, 1.0, 10_000, 9).unwrap().alpha1 - want).norm();
        let big = bussgang_mc(&pa, 1.0, 1_000_000, 9).unwrap();
        let err_big = (big.alpha1 - want).norm();
        assert!(err_big / want.norm() < 0.01);
        assert!(err_big < err_small, "{err_big} vs {err_small}");
        let cf = bussgang_closed_form_power(&pa, 1.0).unwrap();
        assert!((big.distortion_power / cf.distortion_power - 1.0).abs() < 0.1);
    }

    #[test]
    fn residual_is_orthogonal_and_powers_add_up() {
        let pa = PaModel::new(
            [
                C64::new(1.0, 0.0),
                C64::new(-0.05, 0.01),
                C64::new(0.002, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
            0.0,
        )
        .unwrap();
        let n = 1_000_000;
        let x = gaussian_samples(1.0, n, 17);
        let alpha = bussgang_closed_form(&pa, 1.0).unwrap();
        let xi = distortion_residual(&pa, &x, alpha);
        let cross: C64 = xi.iter().zip(&x).map(|(a, b)| a * b.conj()).sum::<C64>() / n as f64;
        let pxi = xi.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        let px = x.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        assert!(cross.norm() / (pxi * px).sqrt() < 0.01);

        let mc = bussgang_mc(&pa, 1.0, n, 17).unwrap();
        assert!((pxi / mc.distortion_power - 1.0).abs() < 0.02);

        let y = apply(&pa, &x);
        let py = y.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        let split = mc.alpha1.norm_sqr() * px + mc.distortion_power;
        assert!((py / split - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identity_residual_is_zero() {
        let x = gaussian_samples(1.0, 64, 2);
        let r = distortion_residual(&PaModel::identity(), &x, C64::new(1.0, 0.0));
        assert!(r.iter().all(|v| v.norm() == 0.0));
    }
}
