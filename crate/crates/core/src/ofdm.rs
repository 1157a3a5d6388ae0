//! QAM mapping and cyclic-prefix OFDM.
//!
//! Index convention used throughout the crate: subcarrier `k` runs over
//! `0..N` with DC at `k = 0`, and the mirror of `k` is `(N - k) mod N`. DC and,
//! for even `N`, the Nyquist bin `N/2` are their own mirrors.
//!
//! The DFT is unitary (1/√N in both directions), so a unit-power grid produces a
//! unit-power time signal and Parseval holds without extra factors.
//!
//! Gray labelling of square M-QAM: the first `log2(M)/2` bits of a symbol label
//! select the in-phase level, the remaining bits the quadrature level. On each
//! axis the bit group is read MSB first as a Gray code `g`; its binary value `b`
//! selects the level `(L - 1) - 2b` for `L = √M` levels. An all-zero label is
//! therefore the `(+,+)` corner, e.g. QPSK `00 → (1 + j)/√2`.

use rand::Rng;

use crate::{fft, Error, Result, C64};

/// OFDM numerology of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerology {
    pub carrier_freq: f64,
    pub n_fft: usize,
    pub subcarrier_spacing: f64,
    pub cp_len: usize,
}

impl Numerology {
    pub fn new(carrier_freq: f64, n_fft: usize, subcarrier_spacing: f64, cp_len: usize) -> Result<Self> {
        let n = Numerology {
            carrier_freq,
            n_fft,
            subcarrier_spacing,
            cp_len,
        };
        n.validate()?;
        Ok(n)
    }

    /// 28 GHz carrier, 2048 subcarriers at 60 kHz, 144-sample CP.
    pub fn mmwave_28ghz() -> Self {
        Numerology {
            carrier_freq: 28e9,
            n_fft: 2048,
            subcarrier_spacing: 60e3,
            cp_len: 144,
        }
    }

    /// 82 GHz carrier, 2048 subcarriers at 480 kHz, 144-sample CP.
    pub fn mmwave_82ghz() -> Self {
        Numerology {
            carrier_freq: 82e9,
            n_fft: 2048,
            subcarrier_spacing: 480e3,
            cp_len: 144,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "28ghz_60khz" => Some(Self::mmwave_28ghz()),
            "82ghz_480khz" => Some(Self::mmwave_82ghz()),
            _ => None,
        }
    }

    pub fn sample_rate(&self) -> f64 {
        self.n_fft as f64 * self.subcarrier_spacing
    }

    /// Samples per OFDM symbol including the cyclic prefix.
    pub fn symbol_len(&self) -> usize {
        self.n_fft + self.cp_len
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_fft < 2 {
            return Err(Error::config(format!("n_fft must be at least 2, got {}", self.n_fft)));
        }
        if self.cp_len >= self.n_fft {
            return Err(Error::config(format!(
                "cp_len ({}) must be smaller than n_fft ({})",
                self.cp_len, self.n_fft
            )));
        }
        if !(self.carrier_freq > 0.0) || !self.carrier_freq.is_finite() {
            return Err(Error::config("carrier frequency must be positive"));
        }
        if !(self.subcarrier_spacing > 0.0) || !self.subcarrier_spacing.is_finite() {
            return Err(Error::config("subcarrier spacing must be positive"));
        }
        Ok(())
    }
}

/// Unit-power, Gray-labelled square QAM alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct QamConstellation {
    order: usize,
    bits_per_symbol: usize,
    /// Points indexed by their bit label (MSB first).
    points: Vec<C64>,
    scale: f64,
}

fn gray_to_binary(mut g: usize) -> usize {
    let mut b = 0;
    while g != 0 {
        b ^= g;
        g >>= 1;
    }
    b
}

impl QamConstellation {
    pub fn new(order: usize) -> Result<Self> {
        if !matches!(order, 4 | 16 | 64 | 256) {
            return Err(Error::config(format!(
                "QAM order must be one of 4, 16, 64, 256; got {order}"
            )));
        }
        let bits_per_symbol = order.trailing_zeros() as usize;
        let half = bits_per_symbol / 2;
        let levels = 1usize << half;
        // Mean energy of the odd-integer grid is 2(M - 1)/3.
        let scale = 1.0 / (2.0 * (order as f64 - 1.0) / 3.0).sqrt();
        let axis = |g: usize| ((levels - 1) as f64 - 2.0 * gray_to_binary(g) as f64) * scale;
        let mask = levels - 1;
        let points = (0..order)
            .map(|label| C64::new(axis(label >> half), axis(label & mask)))
            .collect();
        Ok(QamConstellation {
            order,
            bits_per_symbol,
            points,
            scale,
        })
    }

    pub fn qpsk() -> Self {
        Self::new(4).expect("valid order")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Points indexed by bit label.
    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn point(&self, label: usize) -> C64 {
        self.points[label]
    }

    /// Draws `n` uniformly distributed symbols.
    pub fn random_symbols<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<C64> {
        (0..n).map(|_| self.points[rng.gen_range(0..self.order)]).collect()
    }

    /// Label of the nearest point, by independent slicing of each axis.
    pub fn nearest_label(&self, z: C64) -> usize {
        let half = self.bits_per_symbol / 2;
        let levels = 1usize << half;
        let slice = |v: f64| -> usize {
            // level index b with amplitude (L-1) - 2b
            let b = (((levels - 1) as f64 - v / self.scale) / 2.0).round();
            let b = b.clamp(0.0, (levels - 1) as f64) as usize;
            b ^ (b >> 1)
        };
        (slice(z.re) << half) | slice(z.im)
    }
}

/// Maps a bit sequence onto constellation points.
pub fn map_qam(bits: &[bool], constellation: &QamConstellation) -> Result<Vec<C64>> {
    let k = constellation.bits_per_symbol();
    if !bits.len().is_multiple_of(k) {
        return Err(Error::shape(format!(
            "{} bits is not a multiple of {k} bits per symbol",
            bits.len()
        )));
    }
    Ok(bits
        .chunks(k)
        .map(|chunk| {
            let label = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            constellation.point(label)
        })
        .collect())
}

/// Hard-decision demapping to the nearest constellation point.
pub fn demap_qam(symbols: &[C64], constellation: &QamConstellation) -> Vec<bool> {
    let k = constellation.bits_per_symbol();
    let mut bits = Vec::with_capacity(symbols.len() * k);
    for &s in symbols {
        let label = constellation.nearest_label(s);
        bits.extend((0..k).rev().map(|i| (label >> i) & 1 == 1));
    }
    bits
}

/// Mirror subcarrier index `(n - k) mod n`.
#[inline]
pub fn mirror_index(k: usize, n: usize) -> usize {
    (n - k % n) % n
}

/// One OFDM symbol in the frequency domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SubcarrierGrid {
    values: Vec<C64>,
}

impl SubcarrierGrid {
    pub fn new(values: Vec<C64>) -> Self {
        SubcarrierGrid { values }
    }

    pub fn zeros(n: usize) -> Self {
        SubcarrierGrid {
            values: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn mirror(&self, k: usize) -> usize {
        mirror_index(k, self.values.len())
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

impl std::ops::Index<usize> for SubcarrierGrid {
    type Output = C64;
    fn index(&self, k: usize) -> &C64 {
        &self.values[k]
    }
}

/// One OFDM symbol in the time domain, cyclic prefix first.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeDomainSymbol {
    pub n_fft: usize,
    pub cp_len: usize,
    pub samples: Vec<C64>,
}

impl TimeDomainSymbol {
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum()
    }

    /// The `n_fft` samples after the cyclic prefix.
    pub fn fft_window(&self) -> &[C64] {
        &self.samples[self.cp_len..]
    }
}

/// Unitary inverse DFT of `grid` with the last `cp_len` samples prepended.
pub fn modulate(grid: &SubcarrierGrid, cp_len: usize) -> Result<TimeDomainSymbol> {
    let n = grid.len();
    if cp_len >= n {
        return Err(Error::config(format!(
            "cp_len ({cp_len}) must be smaller than the number of subcarriers ({n})"
        )));
    }
    let mut body = grid.values().to_vec();
    fft::inverse_unitary(&mut body);
    let mut samples = Vec::with_capacity(n + cp_len);
    samples.extend_from_slice(&body[n - cp_len..]);
    samples.extend_from_slice(&body);
    Ok(TimeDomainSymbol {
        n_fft: n,
        cp_len,
        samples,
    })
}

/// Strips the cyclic prefix and applies the unitary forward DFT.
pub fn demodulate(sym: &TimeDomainSymbol) -> Result<SubcarrierGrid> {
    demodulate_samples(&sym.samples, sym.n_fft, sym.cp_len)
}

/// [`demodulate`] on a raw sample block of length `n_fft + cp_len`.
pub fn demodulate_samples(samples: &[C64], n_fft: usize, cp_len: usize) -> Result<SubcarrierGrid> {
    if samples.len() != n_fft + cp_len {
        return Err(Error::shape(format!(
            "expected {} samples (n_fft {n_fft} + cp {cp_len}), got {}",
            n_fft + cp_len,
            samples.len()
        )));
    }
    let mut body = samples[cp_len..].to_vec();
    fft::forward_unitary(&mut body);
    Ok(SubcarrierGrid::new(body))
}
