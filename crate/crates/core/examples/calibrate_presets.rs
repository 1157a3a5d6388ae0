//! Prints the quantities the shipped presets were tuned against.
//!
//! `cargo run --release --example calibrate_presets`

use mmlink::experiments::runner;
use mmlink::link::LinkScenario;
use mmlink::ofdm::Numerology;
use mmlink::pa::{self, PaModel};
use mmlink::phasenoise::{self, PhaseNoiseProfile};
use mmlink::{db_ratio, iqimb, metrics};

const SPACINGS_KHZ: [f64; 7] = [15.0, 30.0, 60.0, 120.0, 240.0, 480.0, 960.0];

fn sir_row(name: &str, p: &PhaseNoiseProfile, carrier: f64) {
    let p = phasenoise::scale_profile(p, carrier).unwrap();
    let row: Vec<String> = SPACINGS_KHZ
        .iter()
        .map(|s| {
            let ici = phasenoise::expected_ici_power(&p, 2048.0 * s * 1e3, 2048, metrics::SIR_TRAJECTORY_LEN);
            format!("{:6.2}", db_ratio(1.0 - ici, ici))
        })
        .collect();
    println!("{name:>5} {:>3.0} GHz  {}", carrier / 1e9, row.join(" "));
}

fn main() {
    println!("analytic SIR (dB) at spacings {SPACINGS_KHZ:?} kHz");
    for (name, p) in [("low", PhaseNoiseProfile::low()), ("high", PhaseNoiseProfile::high())] {
        sir_row(name, &p, 28e9);
        sir_row(name, &p, 82e9);
    }

    let pa_model = PaModel::default_preset();
    for power in [0.5, 1.0, 1.2] {
        let cf = pa::bussgang_closed_form_power(&pa_model, power).unwrap();
        let mc = pa::bussgang_mc(&pa_model, power, 1_000_000, 1).unwrap();
        println!(
            "PA default at input power {power}: alpha1 {:.5} (MC {:.5}), distortion {:.2} dBc (MC {:.2})",
            cf.alpha1.re,
            mc.alpha1.re,
            cf.distortion_dbc(),
            mc.distortion_dbc()
        );
    }

    for name in ["best", "worst", "moderate"] {
        let p = iqimb::IqImbalanceParams::by_name(name, iqimb::Side::Tx).unwrap();
        let irr = iqimb::irr_per_bin(&iqimb::derive_filters(&p), 2048).unwrap();
        let lo = irr.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = irr.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!("IQ {name}: IRR {lo:.2} .. {hi:.2} dB");
    }

    let mut s = LinkScenario::transparent(Numerology::mmwave_82ghz());
    s.pn_tx = Some(PhaseNoiseProfile::low());
    s.pn_rx = Some(PhaseNoiseProfile::high());
    let floor = runner::cnr_point(&s, 60.0, 300).unwrap();
    println!("82 GHz CNR floor, low TX / high RX, PN only: {:.2} dB", floor.mean_db);
}
