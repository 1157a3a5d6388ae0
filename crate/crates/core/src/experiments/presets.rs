//! Catalogue of named presets accepted in scenario files.

use std::fmt::Write as _;

pub struct Preset {
    pub category: &'static str,
    pub name: &'static str,
    pub description: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        category: "numerology",
        name: "28ghz_60khz",
        description: "28 GHz carrier, 2048 subcarriers at 60 kHz, CP 144, 122.88 MHz sampling",
    },
    Preset {
        category: "numerology",
        name: "82ghz_480khz",
        description: "82 GHz carrier, 2048 subcarriers at 480 kHz, CP 144, 983.04 MHz sampling",
    },
    Preset {
        category: "phase_noise_case",
        name: "case1",
        description: "low-noise oscillator at both TX and RX",
    },
    Preset {
        category: "phase_noise_case",
        name: "case2",
        description: "low-noise oscillator at TX, high-noise oscillator at RX",
    },
    Preset {
        category: "phase_noise",
        name: "low",
        description: "-85 dBc/Hz plateau to 100 kHz, -20 dB/dec, -145 dBc/Hz floor (at 50 GHz)",
    },
    Preset {
        category: "phase_noise",
        name: "high",
        description: "-73 dBc/Hz plateau to 200 kHz, -20 dB/dec, -133 dBc/Hz floor (at 50 GHz)",
    },
    Preset {
        category: "phase_noise",
        name: "silent",
        description: "-300 dBc/Hz everywhere",
    },
    Preset {
        category: "iq",
        name: "perfect",
        description: "g = 1, 0 deg, taps (1, 0, 0)",
    },
    Preset {
        category: "iq",
        name: "best",
        description: "g = 1.01, 1 deg, flat; IRR about 40 dB",
    },
    Preset {
        category: "iq",
        name: "worst",
        description: "g = 1.05, 5 deg, flat; IRR about 26 dB",
    },
    Preset {
        category: "iq",
        name: "moderate",
        description: "g = 1.03, 3 deg, taps (1, 0.02, -0.01); frequency-selective IRR",
    },
    Preset {
        category: "pa",
        name: "default",
        description: "a = [1, -0.026, 0.001, -2e-5, 1.5e-7]; about -30 dBc distortion at unit drive",
    },
    Preset {
        category: "pa",
        name: "identity",
        description: "linear, unit gain",
    },
    Preset {
        category: "channel",
        name: "flat",
        description: "single unit tap",
    },
    Preset {
        category: "channel",
        name: "exponential",
        description: "8 Rayleigh taps every 8 samples, power decay constant 16 samples",
    },
];

pub fn list_presets(csv: bool) -> String {
    let mut s = String::new();
    if csv {
        s.push_str("category,name,description\n");
        for p in PRESETS {
            let _ = writeln!(
                s,
                "{},{},\"{}\"",
                p.category,
                p.name,
                p.description.replace('"', "\"\"")
            );
        }
    } else {
        let w = PRESETS.iter().map(|p| p.category.len()).max().unwrap_or(0);
        let n = PRESETS.iter().map(|p| p.name.len()).max().unwrap_or(0);
        for p in PRESETS {
            let _ = writeln!(s, "{:<w$}  {:<n$}  {}", p.category, p.name, p.description);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_formats_list_the_same_names() {
        let text = list_presets(false);
        let csv = list_presets(true);
        for name in [
            "28ghz_60khz",
            "82ghz_480khz",
            "case1",
            "case2",
            "best",
            "worst",
            "default",
        ] {
            assert!(text.contains(name) && csv.contains(name), "{name}");
        }
        assert_eq!(csv.lines().count(), PRESETS.len() + 1);
        assert_eq!(text.lines().count(), PRESETS.len());
    }

    #[test]
    fn names_resolve() {
        use crate::{channel::ChannelProfile, iqimb::*, ofdm::Numerology, pa::PaModel, phasenoise::PhaseNoiseProfile};
        for p in PRESETS {
            let ok = match p.category {
                "numerology" => Numerology::by_name(p.name).is_some(),
                "phase_noise" => PhaseNoiseProfile::by_name(p.name).is_some(),
                "iq" => IqImbalanceParams::by_name(p.name, Side::Tx).is_some(),
                "pa" => PaModel::by_name(p.name).is_some(),
                "channel" => ChannelProfile::by_name(p.name).is_some(),
                _ => true,
            };
            assert!(ok, "{}", p.name);
        }
    }
}
