//! End-to-end behaviour of the metrics: CNR slope and floor, rate ordering
//! under stronger impairments, and EVM ordering across oscillators and carriers.

use std::path::Path;

use mmlink::channel::ChannelProfile;
use mmlink::experiments::runner;
use mmlink::experiments::{parse_scenario, Campaign};
use mmlink::iqimb::{IqImbalanceParams, Side};
use mmlink::link::LinkScenario;
use mmlink::metrics;
use mmlink::ofdm::Numerology;
use mmlink::pa::PaModel;
use mmlink::phasenoise::PhaseNoiseProfile;

fn campaign(file: &str, name: &str) -> Campaign {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(file);
    parse_scenario(&path)
        .unwrap()
        .into_iter()
        .find(|c| c.name == name)
        .unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

#[test]
fn impairment_free_cnr_grows_one_db_per_db() {
    let mut s = LinkScenario::transparent(Numerology::mmwave_82ghz());
    s.channel = ChannelProfile::exponential_default();
    s.seed = 21;
    let c10 = runner::cnr_point(&s, 10.0, 200).unwrap().mean_db;
    let c30 = runner::cnr_point(&s, 30.0, 200).unwrap().mean_db;
    let slope = (c30 - c10) / 20.0;
    assert!((0.9..=1.1).contains(&slope), "slope {slope}");
}

#[test]
fn impaired_cnr_rises_to_a_plateau() {
    let c = campaign("fig2_cnr_28ghz.toml", "cnr_28ghz_case2");
    let v: Vec<f64> = (0..8)
        .map(|i| runner::cnr_point(&c.scenario, 5.0 * i as f64, 200).unwrap().mean_db)
        .collect();
    for w in v.windows(2) {
        assert!(w[1] >= w[0] - 0.05, "{v:?}");
    }
    assert!(v[7] - v[6] < 1.0, "{v:?}");
    assert!(v[7].is_finite() && v[7] < 30.0, "{v:?}");
}

fn rate(s: &LinkScenario, snr: f64) -> f64 {
    runner::rate_point(s, snr, 4).unwrap()
}

fn rate_base() -> LinkScenario {
    let mut s = LinkScenario::transparent(Numerology::mmwave_82ghz());
    s.channel = ChannelProfile::exponential_default();
    s.n_symbols = metrics::MIN_SINR_SYMBOLS;
    s.pilot_symbols.clear();
    s.seed = 33;
    s
}

#[test]
fn each_added_impairment_lowers_the_rate() {
    let base = rate_base();
    let mut pn = base.clone();
    pn.pn_tx = Some(PhaseNoiseProfile::low());
    pn.pn_rx = Some(PhaseNoiseProfile::low());
    let mut pa = base.clone();
    pa.pa = Some(PaModel::default_preset());
    let mut iq = base.clone();
    iq.iq_tx = Some(IqImbalanceParams::moderate(Side::Tx));
    iq.iq_rx = Some(IqImbalanceParams::moderate(Side::Rx));
    for snr in [0.0, 10.0, 20.0, 35.0] {
        let r0 = rate(&base, snr);
        for (name, s) in [("pn", &pn), ("pa", &pa), ("iq", &iq)] {
            let r = rate(s, snr);
            assert!(r <= r0, "{name} at {snr} dB: {r} > {r0}");
        }
    }
}

#[test]
fn stronger_presets_lower_the_rate() {
    let base = rate_base();
    let mut best = base.clone();
    best.iq_tx = Some(IqImbalanceParams::best(Side::Tx));
    best.iq_rx = Some(IqImbalanceParams::best(Side::Rx));
    let mut worst = base.clone();
    worst.iq_tx = Some(IqImbalanceParams::worst(Side::Tx));
    worst.iq_rx = Some(IqImbalanceParams::worst(Side::Rx));
    let mut low = base.clone();
    low.pn_tx = Some(PhaseNoiseProfile::low());
    low.pn_rx = Some(PhaseNoiseProfile::low());
    let mut high = low.clone();
    high.pn_rx = Some(PhaseNoiseProfile::high());
    for snr in [0.0, 10.0, 20.0, 35.0] {
        assert!(rate(&worst, snr) <= rate(&best, snr), "iq at {snr} dB");
        assert!(rate(&high, snr) <= rate(&low, snr), "pn at {snr} dB");
    }
}

#[test]
fn evm_shifts_right_with_carrier_and_oscillator() {
    let med = |name: &str| {
        let c = campaign("fig4_evm_pdf.toml", name);
        median(runner::evm_samples(&c.scenario, 1000).unwrap())
    };
    let low28 = med("evm_28ghz_low");
    let low82 = med("evm_82ghz_low");
    let high82 = med("evm_82ghz_high");
    assert!(low28 < low82 && low82 < high82, "{low28} {low82} {high82}");
}
