//! Scenario files.
//!
//! A scenario file is TOML with a version line and one `[[campaign]]` table per
//! campaign:
//!
//! ```toml
//! schema = "mmlink-scenario/1"
//!
//! [[campaign]]
//! name = "cnr_28ghz"
//! kind = "cnr_sweep"        # cnr_sweep | evm_pdf | rate_sweep | sir_sweep | model_audit
//! seed = 1
//! trials = 1000
//! output = "cnr_28ghz.csv"
//!
//! [campaign.numerology]
//! preset = "28ghz_60khz"    # or carrier_ghz, n_fft, spacing_khz, cp_len
//! qam_order = 16
//!
//! [campaign.phase_noise]
//! case = "case1"            # or tx = "low", rx = "high", or custom tables
//!
//! [campaign.pa]
//! preset = "default"        # or coeffs = [a1, a3, a5, a7, a9]; backoff_db = 0
//!
//! [campaign.iq]
//! tx = "moderate"           # or { gain = 1.05, phase_deg = 5, taps = [1, 0, 0] }
//! rx = "moderate"
//!
//! [campaign.channel]
//! preset = "exponential"    # or n_taps/spacing/decay, or taps = [[delay, re, im], ...]
//!
//! [campaign.noise]
//! array_gain_db = 30
//!
//! [campaign.sweep]
//! snr_db = [0, 5, 10, 15, 20, 25, 30, 35]
//! ```
//!
//! Every section is optional; a missing impairment section leaves that stage
//! off. The name `"off"` also disables a stage. Custom phase-noise profiles are
//! tables `{ ref_ghz = 50, segments = [[corner_hz, level_dbc_hz, slope], ...] }`.
//! Unknown keys are errors.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::channel::{ChannelModel, ChannelProfile, NoiseSpec};
use crate::iqimb::{IqImbalanceParams, Side};
use crate::link::{Link, LinkScenario, IQ_TRANSIENT};
use crate::ofdm::{Numerology, QamConstellation};
use crate::pa::PaModel;
use crate::phasenoise::{PhaseNoiseProfile, Segment};
use crate::{Error, Result, C64};

pub const SCHEMA: &str = "mmlink-scenario/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CampaignKind {
    CnrSweep,
    EvmPdf,
    RateSweep,
    SirSweep,
    ModelAudit,
}

impl CampaignKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cnr_sweep" => Some(CampaignKind::CnrSweep),
            "evm_pdf" => Some(CampaignKind::EvmPdf),
            "rate_sweep" => Some(CampaignKind::RateSweep),
            "sir_sweep" => Some(CampaignKind::SirSweep),
            "model_audit" => Some(CampaignKind::ModelAudit),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CampaignKind::CnrSweep => "cnr_sweep",
            CampaignKind::EvmPdf => "evm_pdf",
            CampaignKind::RateSweep => "rate_sweep",
            CampaignKind::SirSweep => "sir_sweep",
            CampaignKind::ModelAudit => "model_audit",
        }
    }

    fn default_trials(&self) -> usize {
        match self {
            CampaignKind::CnrSweep | CampaignKind::SirSweep => 1000,
            CampaignKind::EvmPdf => 10_000,
            CampaignKind::RateSweep => 20,
            CampaignKind::ModelAudit => 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub snr_db: Vec<f64>,
    pub spacings_hz: Vec<f64>,
    /// Profile for `sir_sweep`.
    pub profile: Option<PhaseNoiseProfile>,
    pub bins: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub name: String,
    pub kind: CampaignKind,
    /// Base link; the runner overrides the noise for SNR sweeps.
    pub scenario: LinkScenario,
    pub sweep: Sweep,
    pub trials: usize,
    pub array_gain_db: f64,
    /// File name relative to the output directory.
    pub output: PathBuf,
}

impl Campaign {
    pub fn seed(&self) -> u64 {
        self.scenario.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.scenario.seed = seed;
        self
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    schema: Option<String>,
    #[serde(default)]
    campaign: Vec<RawCampaign>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCampaign {
    name: String,
    kind: String,
    seed: Option<u64>,
    trials: Option<usize>,
    output: Option<String>,
    numerology: Option<RawNumerology>,
    phase_noise: Option<RawPhaseNoise>,
    pa: Option<RawPa>,
    iq: Option<RawIq>,
    channel: Option<RawChannel>,
    noise: Option<RawNoise>,
    sweep: Option<RawSweep>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawNumerology {
    preset: Option<String>,
    carrier_ghz: Option<f64>,
    n_fft: Option<usize>,
    spacing_khz: Option<f64>,
    cp_len: Option<usize>,
    qam_order: Option<usize>,
}

#[derive(Deserialize, Clone)]
#[serde(untagged)]
enum ProfileSpec {
    Name(String),
    Custom(RawProfile),
}

#[derive(Deserialize, Clone)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    ref_ghz: f64,
    segments: Vec<[f64; 3]>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawPhaseNoise {
    case: Option<String>,
    tx: Option<ProfileSpec>,
    rx: Option<ProfileSpec>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawPa {
    preset: Option<String>,
    coeffs: Option<Vec<f64>>,
    backoff_db: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IqSpec {
    Name(String),
    Custom(RawIqParams),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIqParams {
    gain: f64,
    phase_deg: f64,
    taps: Option<[f64; 3]>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawIq {
    tx: Option<IqSpec>,
    rx: Option<IqSpec>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    preset: Option<String>,
    n_taps: Option<usize>,
    spacing: Option<usize>,
    decay: Option<f64>,
    taps: Option<Vec<[f64; 3]>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    snr_db: Option<f64>,
    array_gain_db: Option<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    snr_db: Option<Vec<f64>>,
    spacing_khz: Option<Vec<f64>>,
    profile: Option<ProfileSpec>,
    symbols: Option<usize>,
    bins: Option<usize>,
}

/// Reads and validates a scenario file.
pub fn parse_scenario(path: &Path) -> Result<Vec<Campaign>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario_str(&text, path)
}

/// Validates scenario text; `path` is only used in error messages.
pub fn parse_scenario_str(text: &str, path: &Path) -> Result<Vec<Campaign>> {
    let raw: RawFile = toml::from_str(text).map_err(|e| toml_error(text, path, &e))?;
    if raw.campaign.is_empty() {
        return Err(Error::NoCampaigns { path: path.into() });
    }
    match raw.schema.as_deref() {
        Some(SCHEMA) => {}
        Some(other) => {
            return Err(bad(
                path,
                "top",
                "schema",
                format!("unsupported schema {other:?}, expected {SCHEMA:?}"),
            ))
        }
        None => return Err(bad(path, "top", "schema", format!("missing; expected {SCHEMA:?}"))),
    }
    let mut names = std::collections::BTreeSet::new();
    let mut outputs = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for (i, c) in raw.campaign.into_iter().enumerate() {
        let ctx = Ctx {
            path,
            prefix: format!("campaign {} ({})", i + 1, c.name),
        };
        let campaign = build_campaign(&ctx, c)?;
        if !names.insert(campaign.name.clone()) {
            return Err(ctx.err("", "name", "duplicate campaign name"));
        }
        if !outputs.insert(campaign.output.clone()) {
            return Err(ctx.err("", "output", "two campaigns write the same file"));
        }
        out.push(campaign);
    }
    Ok(out)
}

fn bad(path: &Path, section: &str, key: &str, message: impl Into<String>) -> Error {
    Error::Scenario {
        path: path.into(),
        section: section.into(),
        key: key.into(),
        message: message.into(),
    }
}

/// Locates the section header and key nearest to a parse error.
fn toml_error(text: &str, path: &Path, e: &toml::de::Error) -> Error {
    let start = e.span().map_or(0, |s| s.start).min(text.len());
    let before = &text[..start];
    let section = before
        .lines()
        .rev()
        .map(str::trim)
        .find(|l| l.starts_with('['))
        .map_or("top".to_string(), |l| {
            l.trim_matches(|c| c == '[' || c == ']').trim().to_string()
        });
    let key: String = text[start..]
        .chars()
        .take_while(|c| c.is_alphanumeric() || *c == '_' || *c == '-')
        .collect();
    let line = before.lines().count().max(1);
    bad(
        path,
        &section,
        if key.is_empty() { "-" } else { &key },
        format!("line {line}: {}", e.message()),
    )
}

struct Ctx<'a> {
    path: &'a Path,
    prefix: String,
}

impl Ctx<'_> {
    fn err(&self, section: &str, key: &str, msg: impl Into<String>) -> Error {
        let section = if section.is_empty() {
            self.prefix.clone()
        } else {
            format!("{}.{section}", self.prefix)
        };
        bad(self.path, &section, key, msg)
    }

    fn wrap<T>(&self, section: &str, key: &str, r: Result<T>) -> Result<T> {
        r.map_err(|e| self.err(section, key, strip(&e)))
    }
}

fn strip(e: &Error) -> String {
    match e {
        Error::Config(m) | Error::Shape(m) => m.clone(),
        other => other.to_string(),
    }
}

fn build_campaign(ctx: &Ctx, c: RawCampaign) -> Result<Campaign> {
    if c.name.is_empty() || c.name.contains(['/', '\\']) {
        return Err(ctx.err("", "name", "must be a nonempty plain name"));
    }
    let kind = CampaignKind::parse(&c.kind).ok_or_else(|| {
        ctx.err(
            "",
            "kind",
            format!(
                "unknown kind {:?}; expected cnr_sweep, evm_pdf, rate_sweep, sir_sweep or model_audit",
                c.kind
            ),
        )
    })?;
    let trials = c.trials.unwrap_or(kind.default_trials());
    if trials == 0 {
        return Err(ctx.err("", "trials", "must be at least 1"));
    }
    let output = PathBuf::from(c.output.unwrap_or_else(|| format!("{}.csv", c.name)));
    if output.is_absolute() || output.components().count() != 1 {
        return Err(ctx.err("", "output", "must be a plain file name inside the output directory"));
    }

    let (numerology, constellation) = numerology(ctx, c.numerology.unwrap_or_default())?;
    let (pn_tx, pn_rx) = phase_noise(ctx, c.phase_noise.unwrap_or_default())?;
    let pa = pa(ctx, c.pa)?;
    let (iq_tx, iq_rx) = iq(ctx, c.iq.unwrap_or_default())?;
    let channel = channel(ctx, c.channel.unwrap_or_default())?;
    let raw_noise = c.noise.unwrap_or_default();
    let array_gain_db = raw_noise.array_gain_db.unwrap_or(0.0);
    if !array_gain_db.is_finite() {
        return Err(ctx.err("noise", "array_gain_db", "must be finite"));
    }
    let noise = match raw_noise.snr_db {
        Some(s) => ctx.wrap("noise", "snr_db", NoiseSpec::new(s, 1.0))?,
        None => NoiseSpec::silent(),
    };
    if channel.max_delay() + IQ_TRANSIENT > numerology.cp_len {
        return Err(ctx.err(
            "numerology",
            "cp_len",
            format!(
                "{} is shorter than the channel max delay {} plus {IQ_TRANSIENT}",
                numerology.cp_len,
                channel.max_delay()
            ),
        ));
    }

    let raw_sweep = c.sweep.unwrap_or_default();
    let snr_db = raw_sweep.snr_db.unwrap_or_default();
    if snr_db.iter().any(|s| !s.is_finite()) {
        return Err(ctx.err("sweep", "snr_db", "values must be finite"));
    }
    let spacings_hz: Vec<f64> = raw_sweep
        .spacing_khz
        .unwrap_or_default()
        .iter()
        .map(|s| s * 1e3)
        .collect();
    let profile = raw_sweep
        .profile
        .map(|p| profile(ctx, "sweep", "profile", p))
        .transpose()?
        .flatten();
    let bins = raw_sweep.bins.unwrap_or(60);
    let symbols = raw_sweep.symbols;

    let (n_symbols, pilot_symbols) = match kind {
        CampaignKind::CnrSweep => (1, vec![0]),
        CampaignKind::EvmPdf => (2, vec![0, 1]),
        CampaignKind::RateSweep => (symbols.unwrap_or(crate::metrics::MIN_SINR_SYMBOLS), vec![]),
        CampaignKind::SirSweep => (1, vec![0]),
        CampaignKind::ModelAudit => (symbols.unwrap_or(1), vec![]),
    };
    match kind {
        CampaignKind::CnrSweep | CampaignKind::RateSweep if snr_db.is_empty() => {
            return Err(ctx.err(
                "sweep",
                "snr_db",
                format!("{} needs a nonempty SNR grid", kind.as_str()),
            ));
        }
        CampaignKind::RateSweep if n_symbols < crate::metrics::MIN_SINR_SYMBOLS => {
            return Err(ctx.err(
                "sweep",
                "symbols",
                format!("must be at least {}", crate::metrics::MIN_SINR_SYMBOLS),
            ));
        }
        CampaignKind::ModelAudit if n_symbols == 0 => {
            return Err(ctx.err("sweep", "symbols", "must be at least 1"));
        }
        CampaignKind::EvmPdf if bins < 2 => {
            return Err(ctx.err("sweep", "bins", "must be at least 2"));
        }
        CampaignKind::SirSweep => {
            if spacings_hz.is_empty()
                || spacings_hz.iter().any(|s| !(*s > 0.0))
                || spacings_hz.windows(2).any(|w| w[1] <= w[0])
            {
                return Err(ctx.err("sweep", "spacing_khz", "must be a nonempty, positive, ascending list"));
            }
            if profile.is_none() {
                return Err(ctx.err("sweep", "profile", "sir_sweep needs a phase-noise profile"));
            }
        }
        _ => {}
    }

    let scenario = LinkScenario {
        numerology,
        constellation,
        pn_tx,
        pn_rx,
        pa,
        iq_tx,
        iq_rx,
        channel,
        noise,
        n_symbols,
        pilot_symbols,
        seed: c.seed.unwrap_or(0),
        noise_seed: None,
    };
    ctx.wrap("", "-", Link::new(scenario.clone()).map(|_| ()))?;
    Ok(Campaign {
        name: c.name,
        kind,
        scenario,
        sweep: Sweep {
            snr_db,
            spacings_hz,
            profile,
            bins,
        },
        trials,
        array_gain_db,
        output,
    })
}

fn numerology(ctx: &Ctx, r: RawNumerology) -> Result<(Numerology, QamConstellation)> {
    const S: &str = "numerology";
    let base = match &r.preset {
        Some(p) => Some(Numerology::by_name(p).ok_or_else(|| {
            ctx.err(
                S,
                "preset",
                format!("unknown numerology {p:?}; expected 28ghz_60khz or 82ghz_480khz"),
            )
        })?),
        None => None,
    };
    let pick = |v: Option<f64>, b: Option<f64>, key: &str| -> Result<f64> {
        v.or(b).ok_or_else(|| ctx.err(S, key, "missing (no preset given)"))
    };
    let carrier = pick(
        r.carrier_ghz.map(|v| v * 1e9),
        base.as_ref().map(|b| b.carrier_freq),
        "carrier_ghz",
    )?;
    let spacing = pick(
        r.spacing_khz.map(|v| v * 1e3),
        base.as_ref().map(|b| b.subcarrier_spacing),
        "spacing_khz",
    )?;
    let n_fft = r
        .n_fft
        .or(base.as_ref().map(|b| b.n_fft))
        .ok_or_else(|| ctx.err(S, "n_fft", "missing (no preset given)"))?;
    let cp_len = r
        .cp_len
        .or(base.as_ref().map(|b| b.cp_len))
        .ok_or_else(|| ctx.err(S, "cp_len", "missing (no preset given)"))?;
    if cp_len >= n_fft {
        return Err(ctx.err(S, "cp_len", format!("{cp_len} must be smaller than n_fft ({n_fft})")));
    }
    if n_fft < 2 {
        return Err(ctx.err(S, "n_fft", "must be at least 2"));
    }
    if !(carrier > 0.0) || !carrier.is_finite() {
        return Err(ctx.err(S, "carrier_ghz", "must be positive"));
    }
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(ctx.err(S, "spacing_khz", "must be positive"));
    }
    let num = ctx.wrap(S, "-", Numerology::new(carrier, n_fft, spacing, cp_len))?;
    let qam = ctx.wrap(S, "qam_order", QamConstellation::new(r.qam_order.unwrap_or(4)))?;
    Ok((num, qam))
}

fn profile(ctx: &Ctx, section: &str, key: &str, p: ProfileSpec) -> Result<Option<PhaseNoiseProfile>> {
    match p {
        ProfileSpec::Name(n) if n == "off" => Ok(None),
        ProfileSpec::Name(n) => PhaseNoiseProfile::by_name(&n).map(Some).ok_or_else(|| {
            ctx.err(
                section,
                key,
                format!("unknown profile {n:?}; expected low, high, silent or off"),
            )
        }),
        ProfileSpec::Custom(r) => {
            let segs = r.segments.iter().map(|s| Segment::new(s[0], s[1], s[2])).collect();
            ctx.wrap(section, key, PhaseNoiseProfile::new(segs, r.ref_ghz * 1e9))
                .map(Some)
        }
    }
}

fn phase_noise(ctx: &Ctx, r: RawPhaseNoise) -> Result<(Option<PhaseNoiseProfile>, Option<PhaseNoiseProfile>)> {
    const S: &str = "phase_noise";
    let (mut tx, mut rx) = match r.case.as_deref() {
        None => (None, None),
        Some("case1") => (Some(PhaseNoiseProfile::low()), Some(PhaseNoiseProfile::low())),
        Some("case2") => (Some(PhaseNoiseProfile::low()), Some(PhaseNoiseProfile::high())),
        Some(other) => return Err(ctx.err(S, "case", format!("unknown case {other:?}; expected case1 or case2"))),
    };
    if r.case.is_some() && (r.tx.is_some() || r.rx.is_some()) {
        return Err(ctx.err(S, "case", "give either case or tx/rx, not both"));
    }
    if let Some(p) = r.tx {
        tx = profile(ctx, S, "tx", p)?;
    }
    if let Some(p) = r.rx {
        rx = profile(ctx, S, "rx", p)?;
    }
    Ok((tx, rx))
}

fn pa(ctx: &Ctx, r: Option<RawPa>) -> Result<Option<PaModel>> {
    const S: &str = "pa";
    let Some(r) = r else { return Ok(None) };
    let base = match (&r.preset, &r.coeffs) {
        (Some(_), Some(_)) => return Err(ctx.err(S, "coeffs", "give either preset or coeffs, not both")),
        (Some(p), None) if p == "off" => return Ok(None),
        (Some(p), None) => PaModel::by_name(p).ok_or_else(|| {
            ctx.err(
                S,
                "preset",
                format!("unknown PA preset {p:?}; expected default, identity or off"),
            )
        })?,
        (None, Some(c)) => {
            let arr: [f64; 5] = c
                .as_slice()
                .try_into()
                .map_err(|_| ctx.err(S, "coeffs", format!("needs exactly 5 values, got {}", c.len())))?;
            ctx.wrap(S, "coeffs", PaModel::from_real(arr, 0.0))?
        }
        (None, None) => PaModel::default_preset(),
    };
    let backoff = r.backoff_db.unwrap_or(0.0);
    if !backoff.is_finite() {
        return Err(ctx.err(S, "backoff_db", "must be finite"));
    }
    Ok(Some(base.with_backoff(backoff)))
}

fn iq_side(ctx: &Ctx, key: &str, side: Side, s: Option<IqSpec>) -> Result<Option<IqImbalanceParams>> {
    match s {
        None => Ok(None),
        Some(IqSpec::Name(n)) if n == "off" => Ok(None),
        Some(IqSpec::Name(n)) => IqImbalanceParams::by_name(&n, side).map(Some).ok_or_else(|| {
            ctx.err(
                "iq",
                key,
                format!("unknown I/Q preset {n:?}; expected perfect, best, worst, moderate or off"),
            )
        }),
        Some(IqSpec::Custom(p)) => ctx
            .wrap(
                "iq",
                key,
                IqImbalanceParams::new(
                    side,
                    p.gain,
                    p.phase_deg.to_radians(),
                    p.taps.unwrap_or([1.0, 0.0, 0.0]),
                ),
            )
            .map(Some),
    }
}

fn iq(ctx: &Ctx, r: RawIq) -> Result<(Option<IqImbalanceParams>, Option<IqImbalanceParams>)> {
    Ok((iq_side(ctx, "tx", Side::Tx, r.tx)?, iq_side(ctx, "rx", Side::Rx, r.rx)?))
}

fn channel(ctx: &Ctx, r: RawChannel) -> Result<ChannelProfile> {
    const S: &str = "channel";
    let explicit = r.n_taps.is_some() || r.spacing.is_some() || r.decay.is_some();
    if let Some(taps) = r.taps {
        if r.preset.is_some() || explicit {
            return Err(ctx.err(S, "taps", "explicit taps cannot be combined with other channel keys"));
        }
        let taps = taps
            .iter()
            .map(|t| {
                if t[0] < 0.0 || t[0].fract() != 0.0 {
                    Err(ctx.err(S, "taps", format!("delay {} is not a sample index", t[0])))
                } else {
                    Ok((t[0] as usize, C64::new(t[1], t[2])))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(ChannelProfile::Fixed(ctx.wrap(
            S,
            "taps",
            ChannelModel::normalized(taps),
        )?));
    }
    let base = match r.preset.as_deref() {
        None if explicit => ChannelProfile::exponential_default(),
        None => ChannelProfile::Flat,
        Some(p) => ChannelProfile::by_name(p).ok_or_else(|| {
            ctx.err(
                S,
                "preset",
                format!("unknown channel {p:?}; expected flat or exponential"),
            )
        })?,
    };
    if !explicit {
        return Ok(base);
    }
    let ChannelProfile::Exponential { n_taps, spacing, decay } = base else {
        return Err(ctx.err(
            S,
            "preset",
            "n_taps, spacing and decay apply to the exponential channel only",
        ));
    };
    let p = ChannelProfile::Exponential {
        n_taps: r.n_taps.unwrap_or(n_taps),
        spacing: r.spacing.unwrap_or(spacing),
        decay: r.decay.unwrap_or(decay),
    };
    ctx.wrap(S, "-", p.validate())?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Vec<Campaign>> {
        parse_scenario_str(text, Path::new("test.toml"))
    }

    fn one(body: &str) -> String {
        format!("schema = \"{SCHEMA}\"\n[[campaign]]\nname = \"c\"\n{body}")
    }

    fn err_text(text: &str) -> String {
        parse(text).unwrap_err().to_string()
    }

    #[test]
    fn empty_file_has_no_campaigns() {
        assert!(matches!(parse(""), Err(Error::NoCampaigns { .. })));
        assert!(matches!(
            parse(&format!("schema = \"{SCHEMA}\"\n")),
            Err(Error::NoCampaigns { .. })
        ));
    }

    #[test]
    fn minimal_campaign_defaults() {
        let c = parse(&one("kind = \"cnr_sweep\"\n[campaign.numerology]\npreset = \"28ghz_60khz\"\n[campaign.sweep]\nsnr_db = [0, 10]\n")).unwrap();
        assert_eq!(c.len(), 1);
        let c = &c[0];
        assert_eq!(c.kind, CampaignKind::CnrSweep);
        assert_eq!(c.trials, 1000);
        assert_eq!(c.output, PathBuf::from("c.csv"));
        assert_eq!(c.scenario.numerology, Numerology::mmwave_28ghz());
        assert!(c.scenario.pn_tx.is_none() && c.scenario.pa.is_none());
        assert_eq!(c.scenario.channel, ChannelProfile::Flat);
    }

    #[test]
    fn cp_violations_name_the_key() {
        let e = err_text(&one("kind = \"cnr_sweep\"\n[campaign.numerology]\npreset = \"28ghz_60khz\"\ncp_len = 2048\n[campaign.sweep]\nsnr_db = [0]\n"));
        assert!(e.contains("numerology") && e.contains("cp_len"), "{e}");
        let e = err_text(&one("kind = \"cnr_sweep\"\n[campaign.numerology]\npreset = \"28ghz_60khz\"\ncp_len = 40\n[campaign.channel]\npreset = \"exponential\"\n[campaign.sweep]\nsnr_db = [0]\n"));
        assert!(e.contains("cp_len") && e.contains("max delay"), "{e}");
    }

    #[test]
    fn unknown_keys_are_rejected_with_section() {
        let e = err_text(&one(
            "kind = \"cnr_sweep\"\n[campaign.numerology]\npreset = \"28ghz_60khz\"\ncarier_ghz = 3\n",
        ));
        assert!(e.contains("campaign.numerology") && e.contains("carier_ghz"), "{e}");
        let e = err_text(&one("kind = \"cnr_sweep\"\ncolour = 1\n"));
        assert!(e.contains("colour"), "{e}");
    }

    #[test]
    fn bad_values_name_the_key() {
        let base = "[campaign.numerology]\npreset = \"82ghz_480khz\"\n";
        let cases = [
            ("kind = \"bogus\"\n", "kind"),
            (&format!("kind = \"cnr_sweep\"\n{base}"), "snr_db"),
            (&format!("kind = \"sir_sweep\"\n{base}[campaign.sweep]\nspacing_khz = [60, 30]\nprofile = \"low\"\n"), "spacing_khz"),
            (&format!("kind = \"sir_sweep\"\n{base}[campaign.sweep]\nspacing_khz = [60]\n"), "profile"),
            (&format!("kind = \"model_audit\"\n{base}[campaign.pa]\ncoeffs = [1, 0]\n"), "coeffs"),
            (&format!("kind = \"model_audit\"\n{base}[campaign.iq]\ntx = \"awful\"\n"), "tx"),
            (&format!("kind = \"model_audit\"\n{base}[campaign.iq]\nrx = {{ gain = -1.0, phase_deg = 1.0 }}\n"), "rx"),
            (&format!("kind = \"model_audit\"\n{base}[campaign.phase_noise]\ncase = \"case3\"\n"), "case"),
            (&format!("kind = \"model_audit\"\n{base}[campaign.phase_noise]\ntx = {{ ref_ghz = 50, segments = [[1e3, -80, 0], [1e5, -90, -20]] }}\n"), "tx"),
            (&format!("kind = \"rate_sweep\"\n{base}[campaign.sweep]\nsnr_db = [0]\nsymbols = 5\n"), "symbols"),
            (&format!("kind = \"cnr_sweep\"\ntrials = 0\n{base}[campaign.sweep]\nsnr_db = [0]\n"), "trials"),
            ("kind = \"cnr_sweep\"\n[campaign.numerology]\ncarrier_ghz = 28\nspacing_khz = 60\n", "n_fft"),
        ];
        for (body, key) in cases {
            let e = err_text(&one(body));
            assert!(e.contains(key), "{key}: {e}");
        }
    }

    #[test]
    fn schema_line_is_required() {
        let e = err_text("[[campaign]]\nname = \"c\"\nkind = \"model_audit\"\n");
        assert!(e.contains("schema"), "{e}");
        let e = err_text("schema = \"other/2\"\n[[campaign]]\nname = \"c\"\nkind = \"model_audit\"\n");
        assert!(e.contains("unsupported"), "{e}");
    }

    #[test]
    fn full_campaign_round_trip() {
        let text = one(r#"kind = "rate_sweep"
seed = 9
trials = 4
output = "r.csv"
[campaign.numerology]
carrier_ghz = 82
n_fft = 512
spacing_khz = 480
cp_len = 72
qam_order = 64
[campaign.phase_noise]
tx = "low"
rx = { ref_ghz = 50, segments = [[1e3, -80, 0], [1e5, -80, -20]] }
[campaign.pa]
preset = "default"
backoff_db = 3
[campaign.iq]
tx = { gain = 1.02, phase_deg = 2, taps = [1, 0.01, 0] }
rx = "worst"
[campaign.channel]
taps = [[0, 1, 0], [4, 0, 1]]
[campaign.noise]
array_gain_db = 30
[campaign.sweep]
snr_db = [10, 20]
symbols = 100
"#);
        let c = &parse(&text).unwrap()[0];
        assert_eq!(c.seed(), 9);
        assert_eq!(c.scenario.numerology.n_fft, 512);
        assert_eq!(c.scenario.constellation.order(), 64);
        assert_eq!(c.scenario.pa.as_ref().unwrap().input_backoff_db(), 3.0);
        assert!((c.scenario.iq_tx.as_ref().unwrap().phase_imbalance() - 2f64.to_radians()).abs() < 1e-15);
        assert_eq!(c.scenario.iq_rx, Some(IqImbalanceParams::worst(Side::Rx)));
        match &c.scenario.channel {
            ChannelProfile::Fixed(m) => assert_eq!(m.taps().len(), 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(c.array_gain_db, 30.0);
        assert_eq!(c.scenario.n_symbols, 100);
        assert!(c.scenario.pilot_symbols.is_empty());
    }

    #[test]
    fn case_presets() {
        let c = &parse(&one("kind = \"model_audit\"\n[campaign.numerology]\npreset = \"82ghz_480khz\"\n[campaign.phase_noise]\ncase = \"case2\"\n")).unwrap()[0];
        assert_eq!(c.scenario.pn_tx, Some(PhaseNoiseProfile::low()));
        assert_eq!(c.scenario.pn_rx, Some(PhaseNoiseProfile::high()));
    }

    #[test]
    fn duplicate_names_rejected() {
        let text = format!(
            "schema = \"{SCHEMA}\"\n[[campaign]]\nname = \"a\"\nkind = \"model_audit\"\n[campaign.numerology]\npreset = \"28ghz_60khz\"\n[[campaign]]\nname = \"a\"\nkind = \"model_audit\"\n[campaign.numerology]\npreset = \"28ghz_60khz\"\n"
        );
        assert!(err_text(&text).contains("duplicate"));
    }
}
