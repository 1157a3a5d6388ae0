use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mmlink::experiments::{self, presets, RunOptions};
use mmlink::Error;

#[derive(Parser)]
#[command(name = "mmlink", version, about = "OFDM mm-wave link simulator with RF impairments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every campaign in a scenario file.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override every campaign's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all available).
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write a gnuplot command file per campaign.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Print the named presets.
    ListPresets {
        #[arg(long)]
        csv: bool,
    },
    /// Run the campaigns of a scenario file as frequency-domain model audits.
    Audit {
        file: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    if e.is_validation() {
        ExitCode::from(2)
    } else {
        ExitCode::from(3)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListPresets { csv } => {
            print!("{}", presets::list_presets(csv));
            ExitCode::SUCCESS
        }
        Command::Run {
            file,
            out,
            seed,
            jobs,
            gnuplot,
        } => {
            let opts = RunOptions {
                out_dir: out,
                seed,
                jobs,
                gnuplot,
            };
            match experiments::run_file(&file, &opts) {
                Ok(m) => {
                    for e in &m.entries {
                        for (f, _) in &e.files {
                            println!(
                                "{}: wrote {} ({:.1} s)",
                                e.campaign,
                                opts.out_dir.join(f).display(),
                                e.wall_time_s
                            );
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Audit { file, out, seed, jobs } => {
            let opts = RunOptions {
                out_dir: out,
                seed,
                jobs,
                gnuplot: false,
            };
            match experiments::audit_file(&file, &opts) {
                Ok((_, summary)) => {
                    for (name, db) in summary {
                        println!("{name}: model residual {db:.2} dB");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
