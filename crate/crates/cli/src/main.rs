use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperpure::config::ProtocolConfig;
use hyperpure::format::emit;
use hyperpure::sweep::{efficiency_table, fidelity_table, parse_grid, GridMode};
use hyperpure::{record, verify, CliError, Result};
use hyperpure_core::efficiency::{EfficiencyParams, SweepAxis};
use hyperpure_core::LocalGateTable;

#[derive(Parser)]
#[command(
    name = "hyperpure",
    version,
    about = "Hyperentanglement-assisted GHZ purification simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    #[value(name = "L")]
    L,
    #[value(name = "N")]
    N,
    #[value(name = "F")]
    F,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepMode {
    Bitflip,
    Phaseflip,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configured purification and emit a run record.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Omit the timestamp so identical configs give identical bytes.
        #[arg(long)]
        reproducible: bool,
    },
    /// Tabulate R against distance or photon number, or fidelity against (F_a, F_b).
    Sweep {
        #[arg(long, value_enum)]
        axis: Axis,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long = "N", default_value_t = 3)]
        photons: u32,
        #[arg(long = "L", default_value_t = 25.0)]
        distance: f64,
        #[arg(long = "L0", default_value_t = EfficiencyParams::DEFAULT_ATTENUATION_KM)]
        attenuation: f64,
        #[arg(long = "eta-d", default_value_t = EfficiencyParams::DEFAULT_ETA_D)]
        eta_d: f64,
        #[arg(long = "eta-c", default_value_t = EfficiencyParams::DEFAULT_ETA_C)]
        eta_c: f64,
        #[arg(long, default_value_t = 1.0)]
        p1: f64,
        /// F-axis grid as from:to:step.
        #[arg(long, default_value = "0.1:0.9:0.1")]
        grid: String,
        #[arg(long, value_enum, default_value = "bitflip")]
        mode: SweepMode,
        /// Photon count for the F axis.
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the engine against the dense oracle.
    Verify {
        #[arg(long)]
        m: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            config,
            out,
            format,
            reproducible,
        } => {
            let config = ProtocolConfig::load(&config)?;
            let timestamp = (!reproducible).then(|| chrono::Utc::now().to_rfc3339());
            let rec = record::simulate(&config, timestamp)?;
            let text = match format {
                Format::Json => rec.to_json(),
                Format::Csv => rec.to_csv()?,
            };
            emit(&text, out.as_deref())
        }
        Command::Sweep {
            axis,
            from,
            to,
            step,
            photons,
            distance,
            attenuation,
            eta_d,
            eta_c,
            p1,
            grid,
            mode,
            m,
            format,
            out,
        } => {
            let template = EfficiencyParams {
                eta_d,
                eta_c,
                distance_km: distance,
                attenuation_km: attenuation,
                photons,
                p1,
            };
            let text = match axis {
                Axis::L | Axis::N => {
                    let (sweep_axis, lo, hi) = match axis {
                        Axis::L => (SweepAxis::Distance, 20.0, 100.0),
                        _ => (SweepAxis::Photons, 2.0, 10.0),
                    };
                    let table = efficiency_table(
                        template,
                        sweep_axis,
                        from.unwrap_or(lo),
                        to.unwrap_or(hi),
                        step,
                    )?;
                    match format {
                        Format::Csv => table.to_csv()?,
                        Format::Json => table.to_json(),
                    }
                }
                Axis::F => {
                    let grid = parse_grid(&grid)?;
                    let mode = match mode {
                        SweepMode::Bitflip => GridMode::Bitflip,
                        SweepMode::Phaseflip => GridMode::Phaseflip,
                    };
                    if !(2..=hyperpure_core::state::MAX_PHOTONS).contains(&m) {
                        return Err(CliError::Usage(format!("--m {m} out of range")));
                    }
                    let table = fidelity_table(mode, m, &grid)?;
                    match format {
                        Format::Csv => table.to_csv()?,
                        Format::Json => table.to_json(),
                    }
                }
            };
            emit(&text, out.as_deref())
        }
        Command::Verify { m, inject_fault } => {
            let table = if inject_fault {
                verify::corrupted_table()
            } else {
                LocalGateTable::standard()
            };
            let report = verify::run(m, table)?;
            print!("{}", report.render());
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Verification(format!(
                    "engine and oracle disagree (worst {:.3e})",
                    report.worst()
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
