//! The impaired link: TX chain, multipath channel, noise and RX chain, together
//! with the frequency-domain model that predicts every received subcarrier from
//! recorded model quantities.
//!
//! TX per symbol: OFDM modulate → TX I/Q imbalance → TX phase noise → PA.
//! RX per symbol: RX phase noise → RX I/Q imbalance → OFDM demodulate.
//!
//! Each OFDM symbol is processed as an independent block of `n_fft + cp_len`
//! samples. Filter tails are truncated at block boundaries; the cyclic prefix
//! absorbs the channel delay plus the two-sample transients of the TX and RX
//! I/Q filters, so `cp_len ≥ max_delay + 4` is required. Phase-noise
//! trajectories run continuously across the whole frame.
//!
//! # Frequency-domain model
//!
//! On one FFT window, with `m(k)` the mirror of bin `k`:
//!
//! ```text
//! X_IQ,k  = G1T,k·S_k + G2T,k·S*_m(k)
//! X_TX    = α·(J_T ⊛ X_IQ) + Ξ
//! Y       = H·X_TX + N
//! V       = J_R ⊛ Y
//! Z_k     = G1R,k·V_k + G2R,k·V*_m(k)
//! ```
//!
//! `⊛` is circular convolution over the bin index, `J` the spectral coefficients
//! of the phasor over the window and `Ξ` the window DFT of the PA residual. The
//! desired and image terms are `H̄_k·S_k` and `H⃗_k·S*_m(k)` with
//!
//! ```text
//! H̄_k = α·J0T·J0R·G1T,k·G1R,k·H_k
//! H⃗_k = α·J0T·J0R·G2T,k·G1R,k·H_k + G2R,k·(α·J0T·J0R·G1T,m·H_m)*
//! ```

use rand::SeedableRng;

use crate::channel::{self, ChannelModel, ChannelProfile, NoiseSpec};
use crate::iqimb::{self, IqFilters, IqImbalanceParams, Side};
use crate::ofdm::{self, mirror_index, Numerology, QamConstellation, SubcarrierGrid};
use crate::pa::{self, PaModel};
use crate::phasenoise::{self, PhaseNoiseProfile, PhaseTrajectory, SpectralCoefficients};
use crate::{fft, rng, Error, Result, C64};

/// Samples of cyclic prefix consumed by the TX and RX I/Q filter transients.
pub const IQ_TRANSIENT: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct LinkScenario {
    pub numerology: Numerology,
    pub constellation: QamConstellation,
    /// Profiles are scaled from their reference carrier to `numerology.carrier_freq`.
    pub pn_tx: Option<PhaseNoiseProfile>,
    pub pn_rx: Option<PhaseNoiseProfile>,
    pub pa: Option<PaModel>,
    pub iq_tx: Option<IqImbalanceParams>,
    pub iq_rx: Option<IqImbalanceParams>,
    pub channel: ChannelProfile,
    pub noise: NoiseSpec,
    pub n_symbols: usize,
    /// Symbols carrying the known pilot grid; all others carry random data.
    pub pilot_symbols: Vec<usize>,
    pub seed: u64,
    /// Replaces `seed` for the noise stream only.
    pub noise_seed: Option<u64>,
}

impl LinkScenario {
    /// One pilot symbol, every impairment off, flat channel, no noise.
    pub fn transparent(numerology: Numerology) -> Self {
        LinkScenario {
            numerology,
            constellation: QamConstellation::qpsk(),
            pn_tx: None,
            pn_rx: None,
            pa: None,
            iq_tx: None,
            iq_rx: None,
            channel: ChannelProfile::Flat,
            noise: NoiseSpec::silent(),
            n_symbols: 1,
            pilot_symbols: vec![0],
            seed: 0,
            noise_seed: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.numerology.validate()?;
        self.channel.validate()?;
        let need = self.channel.max_delay() + IQ_TRANSIENT;
        if self.numerology.cp_len < need {
            return Err(Error::config(format!(
                "cp_len ({}) must be at least the channel max delay ({}) plus {IQ_TRANSIENT}",
                self.numerology.cp_len,
                self.channel.max_delay()
            )));
        }
        if self.n_symbols == 0 {
            return Err(Error::config("a frame needs at least one symbol"));
        }
        if let Some(&m) = self.pilot_symbols.iter().find(|&&m| m >= self.n_symbols) {
            return Err(Error::config(format!(
                "pilot symbol {m} outside a frame of {} symbols",
                self.n_symbols
            )));
        }
        if self.iq_tx.as_ref().is_some_and(|p| p.side() != Side::Tx) {
            return Err(Error::config("TX I/Q parameters carry the RX side"));
        }
        if self.iq_rx.as_ref().is_some_and(|p| p.side() != Side::Rx) {
            return Err(Error::config("RX I/Q parameters carry the TX side"));
        }
        for p in self.pn_tx.iter().chain(&self.pn_rx) {
            if p.is_empty() {
                return Err(Error::config("phase-noise profile has no segments"));
            }
        }
        Ok(())
    }

    pub fn frame_len(&self) -> usize {
        self.n_symbols * self.numerology.symbol_len()
    }
}

/// Frequency responses of the I/Q branch filters on the OFDM grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IqSpectra {
    pub g1_tx: Vec<C64>,
    pub g2_tx: Vec<C64>,
    pub g1_rx: Vec<C64>,
    pub g2_rx: Vec<C64>,
}

/// Seeds of every stream used by one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamSeeds {
    pub data: u64,
    pub pilot: u64,
    pub pn_tx: u64,
    pub pn_rx: u64,
    pub channel: u64,
    pub noise: u64,
}

impl StreamSeeds {
    fn new(scn: &LinkScenario, trial: u64) -> Self {
        let s = |label| rng::stream_seed(scn.seed, label, trial);
        StreamSeeds {
            data: s(rng::label::DATA),
            pilot: s(rng::label::PILOT),
            pn_tx: s(rng::label::PN_TX),
            pn_rx: s(rng::label::PN_RX),
            channel: s(rng::label::CHANNEL),
            noise: rng::stream_seed(scn.noise_seed.unwrap_or(scn.seed), rng::label::NOISE, trial),
        }
    }
}

/// A validated scenario with all per-scenario quantities derived once.
#[derive(Debug, Clone)]
pub struct Link {
    scn: LinkScenario,
    pn_tx: Option<PhaseNoiseProfile>,
    pn_rx: Option<PhaseNoiseProfile>,
    iq_tx: IqFilters,
    iq_rx: IqFilters,
    spectra: IqSpectra,
    pa: PaModel,
    alpha1: C64,
    tx_power: f64,
    noise: NoiseSpec,
}

/// Per-trial random state shared by all symbols of a frame.
#[derive(Debug, Clone)]
pub struct FrameState {
    pub trial: u64,
    pub seeds: StreamSeeds,
    pub tx_trajectory: Option<PhaseTrajectory>,
    pub rx_trajectory: Option<PhaseTrajectory>,
    pub channel: ChannelModel,
    pub h: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolRecord {
    pub is_pilot: bool,
    /// `S_k`.
    pub tx_grid: SubcarrierGrid,
    /// `Z_k`.
    pub rx_grid: SubcarrierGrid,
    pub j_tx: SpectralCoefficients,
    pub j_rx: SpectralCoefficients,
    /// Unitary window DFT of the PA residual `f(x) − α·x`.
    pub distortion: Vec<C64>,
    /// Unitary window DFT of the added noise.
    pub noise: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkRealization {
    pub n_fft: usize,
    pub cp_len: usize,
    pub trial: u64,
    pub alpha1: C64,
    pub spectra: IqSpectra,
    pub channel: ChannelModel,
    /// `H_k`.
    pub h: Vec<C64>,
    pub seeds: StreamSeeds,
    pub symbols: Vec<SymbolRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentChannel {
    pub h_bar: Vec<C64>,
    pub h_arrow: Vec<C64>,
}

/// The frequency-domain prediction of one received symbol split into its terms.
/// `ici` collects every remaining contribution, including the second-order
/// image-of-image products, so the terms always add up to the prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionTerms {
    pub desired: Vec<C64>,
    pub mirror: Vec<C64>,
    pub ici: Vec<C64>,
    pub distortion: Vec<C64>,
    pub noise: Vec<C64>,
}

impl PredictionTerms {
    pub fn total(&self) -> Vec<C64> {
        (0..self.desired.len())
            .map(|k| self.desired[k] + self.mirror[k] + self.ici[k] + self.distortion[k] + self.noise[k])
            .collect()
    }
}

struct Transmitted {
    samples: Vec<C64>,
    distortion: Vec<C64>,
}

impl Link {
    pub fn new(scn: LinkScenario) -> Result<Self> {
        scn.validate()?;
        let carrier = scn.numerology.carrier_freq;
        let scale = |p: &Option<PhaseNoiseProfile>| -> Result<Option<PhaseNoiseProfile>> {
            p.as_ref().map(|p| phasenoise::scale_profile(p, carrier)).transpose()
        };
        let pn_tx = scale(&scn.pn_tx)?;
        let pn_rx = scale(&scn.pn_rx)?;
        let iq_tx = scn.iq_tx.as_ref().map_or_else(IqFilters::ideal, iqimb::derive_filters);
        let iq_rx = scn.iq_rx.as_ref().map_or_else(IqFilters::ideal, iqimb::derive_filters);
        let n = scn.numerology.n_fft;
        let (g1_tx, g2_tx) = iq_tx.spectra(n);
        let (g1_rx, g2_rx) = iq_rx.spectra(n);
        let pa = scn.pa.clone().unwrap_or_else(PaModel::identity);
        // nominal PA drive: unit-power OFDM through the TX I/Q filters
        let drive = pa::bussgang_closed_form_power(&pa, iq_tx.power_gain())?;
        let alpha1 = drive.alpha1;
        // SNR is quoted against the power that actually leaves the PA
        let tx_power = alpha1.norm_sqr() * drive.input_power + drive.distortion_power;
        let noise = NoiseSpec {
            snr_db: scn.noise.snr_db,
            signal_power_ref: scn.noise.signal_power_ref * tx_power,
        };
        Ok(Link {
            scn,
            pn_tx,
            pn_rx,
            iq_tx,
            iq_rx,
            spectra: IqSpectra {
                g1_tx,
                g2_tx,
                g1_rx,
                g2_rx,
            },
            pa,
            alpha1,
            tx_power,
            noise,
        })
    }

    pub fn scenario(&self) -> &LinkScenario {
        &self.scn
    }

    pub fn alpha1(&self) -> C64 {
        self.alpha1
    }

    /// Nominal transmit power for unit-power subcarriers.
    pub fn tx_power(&self) -> f64 {
        self.tx_power
    }

    /// Noise actually added, referenced to [`Link::tx_power`].
    pub fn noise(&self) -> &NoiseSpec {
        &self.noise
    }

    pub fn spectra(&self) -> &IqSpectra {
        &self.spectra
    }

    /// Phase-noise profile of one side after scaling to the carrier.
    pub fn scaled_profile(&self, side: Side) -> Option<&PhaseNoiseProfile> {
        match side {
            Side::Tx => self.pn_tx.as_ref(),
            Side::Rx => self.pn_rx.as_ref(),
        }
    }

    fn n_fft(&self) -> usize {
        self.scn.numerology.n_fft
    }

    fn cp_len(&self) -> usize {
        self.scn.numerology.cp_len
    }

    fn block_len(&self) -> usize {
        self.scn.numerology.symbol_len()
    }

    /// Draws the trajectories and channel of trial `trial`.
    pub fn draw_state(&self, trial: u64) -> Result<FrameState> {
        let seeds = StreamSeeds::new(&self.scn, trial);
        let fs = self.scn.numerology.sample_rate();
        let len = self.scn.frame_len();
        let traj = |p: &Option<PhaseNoiseProfile>, seed| -> Result<Option<PhaseTrajectory>> {
            p.as_ref()
                .map(|p| phasenoise::synthesize_trajectory(p, len, fs, seed))
                .transpose()
        };
        let tx_trajectory = traj(&self.pn_tx, seeds.pn_tx)?;
        let rx_trajectory = traj(&self.pn_rx, seeds.pn_rx)?;
        self.state_with(trial, tx_trajectory, rx_trajectory)
    }

    /// Frame state with caller-supplied trajectories; the channel is still drawn
    /// from the trial's channel stream.
    pub fn state_with(
        &self,
        trial: u64,
        tx_trajectory: Option<PhaseTrajectory>,
        rx_trajectory: Option<PhaseTrajectory>,
    ) -> Result<FrameState> {
        let len = self.scn.frame_len();
        for t in tx_trajectory.iter().chain(&rx_trajectory) {
            if t.len() < len {
                return Err(Error::shape(format!(
                    "trajectory of {} samples is shorter than the frame ({len})",
                    t.len()
                )));
            }
        }
        let seeds = StreamSeeds::new(&self.scn, trial);
        let channel = self
            .scn
            .channel
            .realize(&mut rng::StreamRng::seed_from_u64(seeds.channel))?;
        let h = channel::freq_response(&channel, self.n_fft())?;
        Ok(FrameState {
            trial,
            seeds,
            tx_trajectory,
            rx_trajectory,
            channel,
            h,
        })
    }

    fn phase_block(&self, t: &Option<PhaseTrajectory>, m: usize, x: &mut [C64]) {
        if let Some(t) = t {
            let p = t.phasor(m * self.block_len(), self.block_len());
            x.iter_mut().zip(p).for_each(|(v, p)| *v *= p);
        }
    }

    fn coeffs(&self, t: &Option<PhaseTrajectory>, m: usize) -> Result<SpectralCoefficients> {
        match t {
            Some(t) => phasenoise::spectral_coefficients(t, m * self.block_len() + self.cp_len(), self.n_fft()),
            None => Ok(SpectralCoefficients::ideal(self.n_fft())),
        }
    }

    fn check_symbol(&self, m: usize) -> Result<()> {
        if m >= self.scn.n_symbols {
            return Err(Error::shape(format!(
                "symbol {m} outside a frame of {} symbols",
                self.scn.n_symbols
            )));
        }
        Ok(())
    }

    fn transmit_recorded(&self, grid: &SubcarrierGrid, m: usize, state: &FrameState) -> Result<Transmitted> {
        self.check_symbol(m)?;
        if grid.len() != self.n_fft() {
            return Err(Error::shape(format!(
                "grid has {} bins, expected {}",
                grid.len(),
                self.n_fft()
            )));
        }
        let sym = ofdm::modulate(grid, self.cp_len())?;
        let mut x = iqimb::apply(&self.iq_tx, &sym.samples);
        self.phase_block(&state.tx_trajectory, m, &mut x);
        let samples = pa::apply(&self.pa, &x);
        let mut distortion: Vec<C64> = samples[self.cp_len()..]
            .iter()
            .zip(&x[self.cp_len()..])
            .map(|(y, x)| y - self.alpha1 * x)
            .collect();
        fft::forward_unitary(&mut distortion);
        Ok(Transmitted { samples, distortion })
    }

    /// TX chain for symbol `m` of the frame.
    pub fn transmit(&self, grid: &SubcarrierGrid, m: usize, state: &FrameState) -> Result<Vec<C64>> {
        Ok(self.transmit_recorded(grid, m, state)?.samples)
    }

    /// RX chain for symbol `m` of the frame.
    pub fn receive(&self, samples: &[C64], m: usize, state: &FrameState) -> Result<SubcarrierGrid> {
        self.check_symbol(m)?;
        if samples.len() != self.block_len() {
            return Err(Error::shape(format!(
                "expected {} samples, got {}",
                self.block_len(),
                samples.len()
            )));
        }
        let mut v = samples.to_vec();
        self.phase_block(&state.rx_trajectory, m, &mut v);
        let z = iqimb::apply(&self.iq_rx, &v);
        ofdm::demodulate_samples(&z, self.n_fft(), self.cp_len())
    }

    /// Runs trial `trial` with freshly drawn trajectories and channel.
    pub fn run_frame(&self, trial: u64) -> Result<LinkRealization> {
        let state = self.draw_state(trial)?;
        self.run_frame_with(&state)
    }

    pub fn run_frame_with(&self, state: &FrameState) -> Result<LinkRealization> {
        let n = self.n_fft();
        let mut data_rng = rng::StreamRng::seed_from_u64(state.seeds.data);
        let mut pilot_rng = rng::StreamRng::seed_from_u64(state.seeds.pilot);
        let mut noise_rng = rng::StreamRng::seed_from_u64(state.seeds.noise);
        let qpsk = QamConstellation::qpsk();
        let mut symbols = Vec::with_capacity(self.scn.n_symbols);
        for m in 0..self.scn.n_symbols {
            let is_pilot = self.scn.pilot_symbols.contains(&m);
            let tx_grid = SubcarrierGrid::new(if is_pilot {
                qpsk.random_symbols(n, &mut pilot_rng)
            } else {
                self.scn.constellation.random_symbols(n, &mut data_rng)
            });
            let tx = self.transmit_recorded(&tx_grid, m, state)?;
            let y = channel::apply_channel(&state.channel, &tx.samples);
            let w = channel::awgn_samples(y.len(), &self.noise, &mut noise_rng);
            let received: Vec<C64> = y.iter().zip(&w).map(|(a, b)| a + b).collect();
            let rx_grid = self.receive(&received, m, state)?;
            let mut noise = w[self.cp_len()..].to_vec();
            fft::forward_unitary(&mut noise);
            symbols.push(SymbolRecord {
                is_pilot,
                tx_grid,
                rx_grid,
                j_tx: self.coeffs(&state.tx_trajectory, m)?,
                j_rx: self.coeffs(&state.rx_trajectory, m)?,
                distortion: tx.distortion,
                noise,
            });
        }
        Ok(LinkRealization {
            n_fft: n,
            cp_len: self.cp_len(),
            trial: state.trial,
            alpha1: self.alpha1,
            spectra: self.spectra.clone(),
            channel: state.channel.clone(),
            h: state.h.clone(),
            seeds: state.seeds,
            symbols,
        })
    }
}

impl LinkRealization {
    pub fn n_symbols(&self) -> usize {
        self.symbols.len()
    }

    fn symbol(&self, m: usize) -> Result<&SymbolRecord> {
        self.symbols
            .get(m)
            .ok_or_else(|| Error::shape(format!("symbol {m} outside a frame of {} symbols", self.symbols.len())))
    }

    /// `H̄_{k,m}` only.
    pub fn h_bar(&self, m: usize) -> Result<Vec<C64>> {
        let r = self.symbol(m)?;
        let c = self.alpha1 * r.j_tx.j[0] * r.j_rx.j[0];
        let s = &self.spectra;
        Ok((0..self.n_fft)
            .map(|k| c * s.g1_tx[k] * s.g1_rx[k] * self.h[k])
            .collect())
    }
}

/// `H̄` and the image coefficient for symbol `m`, from recorded model quantities.
pub fn equivalent_channel(real: &LinkRealization, m: usize) -> Result<EquivalentChannel> {
    let h_bar = real.h_bar(m)?;
    let r = real.symbol(m)?;
    let n = real.n_fft;
    let c = real.alpha1 * r.j_tx.j[0] * r.j_rx.j[0];
    let s = &real.spectra;
    let h_arrow = (0..n)
        .map(|k| {
            let mk = mirror_index(k, n);
            c * s.g2_tx[k] * s.g1_rx[k] * real.h[k] + s.g2_rx[k] * (c * s.g1_tx[mk] * real.h[mk]).conj()
        })
        .collect();
    Ok(EquivalentChannel { h_bar, h_arrow })
}

/// Circular convolution `(J ⊛ X)_k = Σ_i J_i·X_{k−i}`, evaluated through the
/// phasor that `J` is the DFT of.
pub fn phase_convolve(x: &[C64], j: &SpectralCoefficients) -> Vec<C64> {
    let mut p = j.j.clone();
    fft::inverse_raw(&mut p);
    let mut t = x.to_vec();
    fft::inverse_unitary(&mut t);
    t.iter_mut().zip(&p).for_each(|(v, p)| *v *= p);
    fft::forward_unitary(&mut t);
    t
}

fn image(g1: &[C64], g2: &[C64], v: &[C64]) -> Vec<C64> {
    iqimb::apply_grid(g1, g2, v)
}

/// Frequency-domain model of symbol `m`, split into terms.
pub fn predict_terms(real: &LinkRealization, m: usize) -> Result<PredictionTerms> {
    let r = real.symbol(m)?;
    let n = real.n_fft;
    let s = &real.spectra;
    let eq = equivalent_channel(real, m)?;
    let tx = r.tx_grid.values();

    let x_iq = image(&s.g1_tx, &s.g2_tx, tx);
    let x_pn = phase_convolve(&x_iq, &r.j_tx);
    let y: Vec<C64> = (0..n)
        .map(|k| real.h[k] * (real.alpha1 * x_pn[k] + r.distortion[k]) + r.noise[k])
        .collect();
    let z = image(&s.g1_rx, &s.g2_rx, &phase_convolve(&y, &r.j_rx));

    let j0r = r.j_rx.j[0];
    let dist: Vec<C64> = (0..n).map(|k| j0r * real.h[k] * r.distortion[k]).collect();
    let noise: Vec<C64> = r.noise.iter().map(|v| j0r * v).collect();
    let distortion = image(&s.g1_rx, &s.g2_rx, &dist);
    let noise = image(&s.g1_rx, &s.g2_rx, &noise);
    let desired: Vec<C64> = (0..n).map(|k| eq.h_bar[k] * tx[k]).collect();
    let mirror: Vec<C64> = (0..n).map(|k| eq.h_arrow[k] * tx[mirror_index(k, n)].conj()).collect();
    let ici = (0..n)
        .map(|k| z[k] - desired[k] - mirror[k] - distortion[k] - noise[k])
        .collect();
    Ok(PredictionTerms {
        desired,
        mirror,
        ici,
        distortion,
        noise,
    })
}

/// The model's prediction of `Z_{k,m}`.
pub fn predict_grid(real: &LinkRealization, m: usize) -> Result<SubcarrierGrid> {
    Ok(SubcarrierGrid::new(predict_terms(real, m)?.total()))
}

/// `(‖Z − prediction‖², ‖Z‖²)` for symbol `m`.
pub fn prediction_residual_sums(real: &LinkRealization, m: usize) -> Result<(f64, f64)> {
    let pred = predict_grid(real, m)?;
    let z = real.symbol(m)?.rx_grid.values();
    let err = z.iter().zip(pred.values()).map(|(a, b)| (a - b).norm_sqr()).sum();
    let pow = z.iter().map(|v| v.norm_sqr()).sum();
    Ok((err, pow))
}

/// `‖Z − prediction‖² / ‖Z‖²` in dB for symbol `m`.
pub fn prediction_residual_db(real: &LinkRealization, m: usize) -> Result<f64> {
    let (err, pow) = prediction_residual_sums(real, m)?;
    Ok(crate::db_ratio(err, pow))
}

/// Least-squares estimate `Z_k / S_k`; `None` where the pilot is zero.
pub fn ls_estimate(pilot: &SubcarrierGrid, rx: &SubcarrierGrid) -> Result<Vec<Option<C64>>> {
    if pilot.len() != rx.len() {
        return Err(Error::shape(format!(
            "pilot has {} bins, received grid {}",
            pilot.len(),
            rx.len()
        )));
    }
    Ok(pilot
        .values()
        .iter()
        .zip(rx.values())
        .map(|(&s, &z)| (s.norm_sqr() > 0.0).then(|| z / s))
        .collect())
}
