//! CLI for the storage-sharing simulator.
//!
//! Exit codes: 0 success, 1 validation failure, 2 data error, 3 property
//! violation detected.

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use storshare::cost::cost_net_metering;
use storshare::game::{self, DEFAULT_ENUM_CAP};
use storshare::model::{CommunityDay, HouseholdDay};
use storshare::pipeline::{
    emit_report, generate_synthetic, ingest_csv, read_capacities_csv, simulate, split_day,
    write_capacities_csv, write_loads_csv, LoadTable, PeakWindow, SimulationConfig,
};
use storshare::settlement::{savings_consistency, settle_day};
use storshare::tariff::Tariff;
use storshare::Error;

const EXIT_VALIDATION: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_PROPERTY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "storshare",
    about = "Cooperative P2P sharing of household energy storage under ToU pricing and net metering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// Tariff JSON file with keys lambda_h, lambda_l, mu_h, mu_l
    #[arg(long)]
    tariff: PathBuf,
    /// Hourly loads CSV (household_id,timestamp,kwh)
    #[arg(long)]
    loads: PathBuf,
    /// Capacities CSV (household_id,capacity_kwh,lambda_b)
    #[arg(long)]
    capacities: PathBuf,
    /// Peak window as START:END hours
    #[arg(long, default_value = "8:22")]
    peak_window: String,
    /// Zero-fill missing hours instead of erroring
    #[arg(long)]
    fill_missing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check a tariff against the pricing preconditions
    ValidateTariff {
        #[arg(long)]
        tariff: PathBuf,
    },
    /// Generate a synthetic community (loads + capacities CSVs)
    GenData {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 80)]
        households: usize,
        #[arg(long, default_value_t = 365)]
        days: usize,
    },
    /// Run the full simulation and write the report files
    Simulate {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify core membership of the allocation on one day
    CoreCheck {
        #[command(flatten)]
        data: DataArgs,
        /// Day to check (defaults to the first day in the loads file)
        #[arg(long)]
        date: Option<NaiveDate>,
        /// Exhaustive enumeration cap; larger communities are sampled
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        enum_cap: usize,
        /// Random samples used above the cap
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Settle the P2P market for one day and print the trade ledger
    SettleDay {
        #[command(flatten)]
        data: DataArgs,
        /// Day to settle (defaults to the first day in the loads file)
        #[arg(long)]
        date: Option<NaiveDate>,
        /// Emit CSV instead of JSON
        #[arg(long)]
        csv: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err.downcast_ref::<Error>() {
                Some(Error::InvalidTariff(_)) => EXIT_VALIDATION,
                _ => EXIT_DATA,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::ValidateTariff { tariff } => {
            let tariff = Tariff::from_path(&tariff)?;
            let violations = tariff.violations();
            if violations.is_empty() {
                println!("OK");
                Ok(ExitCode::SUCCESS)
            } else {
                for v in &violations {
                    println!("violation: {v}");
                }
                Ok(ExitCode::from(EXIT_VALIDATION))
            }
        }
        Command::GenData {
            out,
            seed,
            households,
            days,
        } => {
            let data = generate_synthetic(households, days, seed)?;
            std::fs::create_dir_all(&out)?;
            let loads = out.join("loads.csv");
            write_loads_csv(&data.records, std::fs::File::create(&loads)?)?;
            let capacities = out.join("capacities.csv");
            write_capacities_csv(&data.households, std::fs::File::create(&capacities)?)?;
            println!(
                "wrote {} records for {} households over {} days to {}",
                data.records.len(),
                households,
                days,
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { data, out } => {
            let (records, config) = load_inputs(&data)?;
            let report = simulate(&records, &config)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let files = emit_report(&report, &out)?;
            for f in &files {
                println!("wrote {}", f.display());
            }
            println!(
                "community savings: {:.6} ({:.6}%)",
                report.community.savings, report.community.percent_savings
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::CoreCheck {
            data,
            date,
            enum_cap,
            samples,
            seed,
        } => {
            let (records, config) = load_inputs(&data)?;
            let community = community_for_day(&records, &config, date)?;
            let report = if community.len() <= enum_cap {
                game::check_core(&community, &config.tariff, enum_cap)?
            } else {
                game::check_core_sampled(&community, &config.tariff, samples, seed)?
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("core violation detected: this indicates a bug in the allocation");
                Ok(ExitCode::from(EXIT_PROPERTY))
            }
        }
        Command::SettleDay {
            data,
            date,
            csv,
        } => {
            let (records, config) = load_inputs(&data)?;
            let community = community_for_day(&records, &config, date)?;
            let ledger = settle_day(&community, &config.tariff)?;
            // cross-check the ledger against the allocation before printing
            let alloc = game::allocate(&community, &config.tariff)?;
            let costs: BTreeMap<String, f64> = community
                .households()
                .iter()
                .map(|h| (h.id.clone(), cost_net_metering(h, &config.tariff).total()))
                .collect();
            let consistency = savings_consistency(&ledger, &alloc, &costs)?;
            if csv {
                ledger.write_csv(std::io::stdout().lock())?;
            } else {
                println!("{}", serde_json::to_string_pretty(&ledger)?);
            }
            if consistency.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                for m in &consistency.mismatches {
                    eprintln!("savings mismatch: {m}");
                }
                Ok(ExitCode::from(EXIT_PROPERTY))
            }
        }
    }
}

fn load_inputs(
    data: &DataArgs,
) -> anyhow::Result<(Vec<storshare::pipeline::HourlyLoadRecord>, SimulationConfig)> {
    let tariff = Tariff::from_path(&data.tariff)?.validated()?;
    let (records, summary) = ingest_csv(&data.loads)?;
    for w in summary.warnings.iter().take(20) {
        eprintln!("warning: {w}");
    }
    if summary.warnings.len() > 20 {
        eprintln!("warning: ... and {} more gaps", summary.warnings.len() - 20);
    }
    let specs = read_capacities_csv(&data.capacities)?;
    let mut config = SimulationConfig::new(tariff, specs)?;
    config.peak_window = data.peak_window.parse::<PeakWindow>()?;
    config.fill_missing = data.fill_missing;
    Ok((records, config))
}

fn community_for_day(
    records: &[storshare::pipeline::HourlyLoadRecord],
    config: &SimulationConfig,
    date: Option<NaiveDate>,
) -> anyhow::Result<CommunityDay> {
    let table = LoadTable::from_records(records);
    let date = match date {
        Some(d) => d,
        None => *table
            .dates()
            .first()
            .ok_or_else(|| Error::Data("loads file contains no records".into()))?,
    };
    let mut households = Vec::with_capacity(config.households.len());
    for spec in &config.households {
        let hours = table
            .day(&spec.id, date)
            .copied()
            .or_else(|| config.fill_missing.then_some([Some(0.0); 24]))
            .ok_or_else(|| {
                Error::Data(format!("household `{}` has no load data on {date}", spec.id))
            })?;
        let (peak, offpeak) = split_day(&hours, config.peak_window, config.fill_missing)?;
        households.push(HouseholdDay::new(
            spec.id.clone(),
            peak,
            offpeak,
            spec.capacity_kwh,
            spec.capital_rate,
        )?);
    }
    Ok(CommunityDay::new(date, households)?)
}
