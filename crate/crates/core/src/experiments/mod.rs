//! Scenario files, campaign execution and output files.

pub mod presets;
pub mod runner;
pub mod scenario;

pub use runner::{audit_file, run_campaign, run_campaigns, run_file, RunManifest, RunOptions};
pub use scenario::{parse_scenario, parse_scenario_str, Campaign, CampaignKind, Sweep};
