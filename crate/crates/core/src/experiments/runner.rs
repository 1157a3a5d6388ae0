//! Campaign execution, CSV output and the run manifest.
//!
//! Trials run in parallel but are collected in trial order and reduced
//! sequentially, so every output byte is independent of the thread count.
//! Output files are first written under temporary names and renamed once all
//! of them exist; the manifest is written last.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::scenario::{parse_scenario, Campaign, CampaignKind};
use crate::channel::NoiseSpec;
use crate::link::{self, Link, LinkScenario};
use crate::metrics::{self, CnrAccumulator};
use crate::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.txt";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Replaces every campaign's seed.
    pub seed: Option<u64>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Also write a gnuplot command file per campaign.
    pub gnuplot: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub campaign: String,
    pub kind: CampaignKind,
    pub seed: u64,
    pub wall_time_s: f64,
    /// `(file name, SHA-256 hex)` of every file the campaign wrote.
    pub files: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub version: String,
    pub source: PathBuf,
    pub seed_override: Option<u64>,
    pub config: String,
    pub entries: Vec<ManifestEntry>,
}

impl RunManifest {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "mmlink run manifest");
        let _ = writeln!(s, "version: {}", self.version);
        let _ = writeln!(s, "scenario: {}", self.source.display());
        match self.seed_override {
            Some(v) => {
                let _ = writeln!(s, "seed_override: {v}");
            }
            None => {
                let _ = writeln!(s, "seed_override: none");
            }
        }
        for e in &self.entries {
            let _ = writeln!(
                s,
                "campaign: {} kind={} seed={} wall_time_s={:.3}",
                e.campaign,
                e.kind.as_str(),
                e.seed,
                e.wall_time_s
            );
            for (f, h) in &e.files {
                let _ = writeln!(s, "  sha256 {h}  {f}");
            }
        }
        let _ = writeln!(s, "--- config ---");
        s.push_str(&self.config);
        if !self.config.ends_with('\n') {
            s.push('\n');
        }
        s
    }
}

/// Result of one campaign before anything touches the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignOutput {
    pub csv: String,
    pub gnuplot: String,
}

fn num(v: f64) -> String {
    format!("{v:.6}")
}

fn with_snr(base: &LinkScenario, snr_db: f64) -> Result<LinkScenario> {
    let mut s = base.clone();
    s.noise = NoiseSpec::new(snr_db, 1.0)?;
    Ok(s)
}

fn par_trials<T: Send>(trials: usize, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..trials as u64).into_par_iter().map(f).collect()
}

/// CNR summary at one SNR point.
pub fn cnr_point(base: &LinkScenario, snr_db: f64, trials: usize) -> Result<metrics::CnrSummary> {
    let link = Link::new(with_snr(base, snr_db)?)?;
    let sums = par_trials(trials, |t| metrics::cnr_sums(&link.run_frame(t)?, 0))?;
    let mut acc = CnrAccumulator::default();
    for (n, d) in sums {
        acc.push(n, d);
    }
    acc.summary()
}

/// Per-trial CPE EVM in dB between the two pilot symbols.
pub fn evm_samples(base: &LinkScenario, trials: usize) -> Result<Vec<f64>> {
    let link = Link::new(base.clone())?;
    par_trials(trials, |t| metrics::cpe_evm_db(&link.run_frame(t)?, 0, 1))
}

/// Average sum rate over `trials` channel realisations.
pub fn rate_point(base: &LinkScenario, snr_db: f64, trials: usize) -> Result<f64> {
    let link = Link::new(with_snr(base, snr_db)?)?;
    let g = par_trials(trials, |t| metrics::sinr(&link, t))?;
    metrics::sum_rate(&g)
}

/// `base` with every RF impairment switched off.
pub fn impairment_free(base: &LinkScenario) -> LinkScenario {
    let mut s = base.clone();
    s.pn_tx = None;
    s.pn_rx = None;
    s.pa = None;
    s.iq_tx = None;
    s.iq_rx = None;
    s
}

/// Per-trial model residual in dB, aggregated over the frame's symbols.
pub fn audit_residuals(base: &LinkScenario, trials: usize) -> Result<Vec<(f64, f64)>> {
    let link = Link::new(base.clone())?;
    par_trials(trials, |t| {
        let real = link.run_frame(t)?;
        let mut acc = (0.0, 0.0);
        for m in 0..real.n_symbols() {
            let (e, p) = link::prediction_residual_sums(&real, m)?;
            acc.0 += e;
            acc.1 += p;
        }
        Ok(acc)
    })
}

pub fn run_campaign(c: &Campaign) -> Result<CampaignOutput> {
    let mut csv = String::new();
    let stem = c
        .output
        .file_stem()
        .map_or("out".into(), |s| s.to_string_lossy().into_owned());
    let file = c.output.display().to_string();
    let gnuplot = match c.kind {
        CampaignKind::CnrSweep => {
            csv.push_str("snr_db,rx_snr_db,cnr_mean_db,cnr_p5_db,cnr_p95_db,n_trials\n");
            for &snr in &c.sweep.snr_db {
                let s = cnr_point(&c.scenario, snr, c.trials)?;
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    num(snr),
                    num(snr - c.array_gain_db),
                    num(s.mean_db),
                    num(s.p5_db),
                    num(s.p95_db),
                    s.n_trials
                );
            }
            plot_script(
                &stem,
                &file,
                "SNR (dB)",
                "CNR (dB)",
                &[(1, 3, "mean"), (1, 4, "p5"), (1, 5, "p95")],
            )
        }
        CampaignKind::EvmPdf => {
            let v = evm_samples(&c.scenario, c.trials)?;
            let h = metrics::pdf_histogram(&v, c.sweep.bins)?;
            csv.push_str("evm_bin_db,pdf_density\n");
            for (a, d) in h.axis.iter().zip(&h.values) {
                let _ = writeln!(csv, "{},{}", num(*a), num(*d));
            }
            plot_script(&stem, &file, "EVM (dB)", "PDF", &[(1, 2, "pdf")])
        }
        CampaignKind::RateSweep => {
            csv.push_str("snr_db,rx_snr_db,rate_bps_hz,rate_ideal_bps_hz\n");
            let ideal = impairment_free(&c.scenario);
            for &snr in &c.sweep.snr_db {
                let r = rate_point(&c.scenario, snr, c.trials)?;
                let r0 = rate_point(&ideal, snr, c.trials)?;
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    num(snr),
                    num(snr - c.array_gain_db),
                    num(r),
                    num(r0)
                );
            }
            plot_script(
                &stem,
                &file,
                "SNR (dB)",
                "rate (bit/s/Hz)",
                &[(1, 3, "impaired"), (1, 4, "ideal")],
            )
        }
        CampaignKind::SirSweep => {
            let profile = c
                .sweep
                .profile
                .as_ref()
                .ok_or_else(|| Error::config("sir_sweep without a profile"))?;
            let n = &c.scenario.numerology;
            let s = metrics::sir_vs_spacing(
                profile,
                n.carrier_freq,
                &c.sweep.spacings_hz,
                n.n_fft,
                c.trials,
                c.seed(),
            )?;
            csv.push_str("spacing_khz,sir_db\n");
            for (f, v) in s.axis.iter().zip(&s.values) {
                let _ = writeln!(csv, "{},{}", num(f / 1e3), num(*v));
            }
            plot_script(&stem, &file, "subcarrier spacing (kHz)", "SIR (dB)", &[(1, 2, "SIR")])
        }
        CampaignKind::ModelAudit => {
            let r = audit_residuals(&c.scenario, c.trials)?;
            csv.push_str("trial,residual_db\n");
            for (t, (e, p)) in r.iter().enumerate() {
                let _ = writeln!(csv, "{t},{}", num(crate::db_ratio(*e, *p)));
            }
            plot_script(&stem, &file, "trial", "residual (dB)", &[(1, 2, "residual")])
        }
    };
    Ok(CampaignOutput { csv, gnuplot })
}

fn plot_script(stem: &str, file: &str, xlabel: &str, ylabel: &str, series: &[(usize, usize, &str)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set terminal pngcairo size 800,500");
    let _ = writeln!(s, "set output '{stem}.png'");
    let parts: Vec<String> = series
        .iter()
        .map(|(x, y, t)| format!("'{file}' using {x}:{y} with linespoints title '{t}'"))
        .collect();
    let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    s
}

fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

fn tmp_name(final_path: &Path) -> PathBuf {
    let name = final_path
        .file_name()
        .map_or("out".into(), |n| n.to_string_lossy().into_owned());
    final_path.with_file_name(format!(".{name}.tmp-{}", std::process::id()))
}

/// Writes every `(path, bytes)` pair or none of them.
fn write_all_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    let mut temps: Vec<PathBuf> = Vec::new();
    let cleanup = |temps: &[PathBuf], done: &[PathBuf]| {
        for p in temps.iter().chain(done) {
            let _ = fs::remove_file(p);
        }
    };
    for (path, bytes) in files {
        let t = tmp_name(path);
        if let Err(e) = fs::write(&t, bytes) {
            cleanup(&temps, &[]);
            let _ = fs::remove_file(&t);
            return Err(Error::io(&t, e));
        }
        temps.push(t);
    }
    let mut done: Vec<PathBuf> = Vec::new();
    for (i, (path, _)) in files.iter().enumerate() {
        if let Err(e) = fs::rename(&temps[i], path) {
            cleanup(&temps[i..], &done);
            return Err(Error::io(path, e));
        }
        done.push(path.clone());
    }
    Ok(())
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Error::config("--jobs must be at least 1")),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::config(format!("cannot start {k} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs `campaigns` and writes their outputs plus the manifest into
/// `opts.out_dir`. `config` is echoed into the manifest.
pub fn run_campaigns(campaigns: &[Campaign], config: &str, source: &Path, opts: &RunOptions) -> Result<RunManifest> {
    if campaigns.is_empty() {
        return Err(Error::NoCampaigns { path: source.into() });
    }
    let campaigns: Vec<Campaign> = campaigns
        .iter()
        .map(|c| match opts.seed {
            Some(s) => c.clone().with_seed(s),
            None => c.clone(),
        })
        .collect();
    let results = in_pool(opts.jobs, || {
        campaigns
            .iter()
            .map(|c| {
                let t0 = Instant::now();
                run_campaign(c).map(|o| (o, t0.elapsed().as_secs_f64()))
            })
            .collect::<Result<Vec<_>>>()
    })??;

    fs::create_dir_all(&opts.out_dir).map_err(|e| Error::io(&opts.out_dir, e))?;
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for (c, (out, secs)) in campaigns.iter().zip(results) {
        let mut written = vec![(c.output.clone(), out.csv.into_bytes())];
        if opts.gnuplot {
            written.push((c.output.with_extension("gp"), out.gnuplot.into_bytes()));
        }
        entries.push(ManifestEntry {
            campaign: c.name.clone(),
            kind: c.kind,
            seed: c.seed(),
            wall_time_s: secs,
            files: written
                .iter()
                .map(|(p, b)| (p.display().to_string(), sha256_hex(b)))
                .collect(),
        });
        files.extend(written.into_iter().map(|(p, b)| (opts.out_dir.join(p), b)));
    }
    write_all_atomic(&files)?;
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        source: source.into(),
        seed_override: opts.seed,
        config: config.to_string(),
        entries,
    };
    let mpath = opts.out_dir.join(MANIFEST_NAME);
    if let Err(e) = write_all_atomic(&[(mpath, manifest.to_text().into_bytes())]) {
        for (p, _) in &files {
            let _ = fs::remove_file(p);
        }
        return Err(e);
    }
    Ok(manifest)
}

/// Parses `path` and runs every campaign in it.
pub fn run_file(path: &Path, opts: &RunOptions) -> Result<RunManifest> {
    let config = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let campaigns = parse_scenario(path)?;
    run_campaigns(&campaigns, &config, path, opts)
}

/// Runs every campaign in `path` as a model audit. Outputs are named
/// `<campaign>_audit.csv`. Returns `(campaign, aggregate residual dB)` pairs.
pub fn audit_file(path: &Path, opts: &RunOptions) -> Result<(RunManifest, Vec<(String, f64)>)> {
    let config = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let campaigns: Vec<Campaign> = parse_scenario(path)?
        .into_iter()
        .map(|mut c| {
            if c.kind != CampaignKind::ModelAudit {
                c.kind = CampaignKind::ModelAudit;
                c.trials = c.trials.min(100);
                c.scenario.n_symbols = 1;
                c.scenario.pilot_symbols.clear();
                c.output = PathBuf::from(format!("{}_audit.csv", c.name));
            }
            c
        })
        .collect();
    let manifest = run_campaigns(&campaigns, &config, path, opts)?;
    let mut summary = Vec::new();
    for c in &campaigns {
        let scn = match opts.seed {
            Some(s) => c.clone().with_seed(s).scenario,
            None => c.scenario.clone(),
        };
        let r = in_pool(opts.jobs, || audit_residuals(&scn, c.trials))??;
        let (e, p) = r.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        summary.push((c.name.clone(), crate::db_ratio(e, p)));
    }
    Ok((manifest, summary))
}
