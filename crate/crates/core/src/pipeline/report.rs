//! Report emission: summary, per-household and per-day CSVs plus a JSON
//! bundle. All floats are printed with 6 decimals.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::simulate::AnnualReport;
use crate::game::Regime;
use crate::Result;

/// Writes the four report files into `dir` and returns their paths:
/// `summary.csv`, `household_savings.csv`, `daily_ledger.csv`,
/// `report.json`.
pub fn emit_report(report: &AnnualReport, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let summary = dir.join("summary.csv");
    write_summary(report, File::create(&summary)?)?;
    written.push(summary);

    let households = dir.join("household_savings.csv");
    write_households(report, File::create(&households)?)?;
    written.push(households);

    let daily = dir.join("daily_ledger.csv");
    write_daily(report, File::create(&daily)?)?;
    written.push(daily);

    let json = dir.join("report.json");
    serde_json::to_writer_pretty(File::create(&json)?, report)?;
    written.push(json);

    Ok(written)
}

/// Community totals in the five-row cost-analysis shape.
pub fn write_summary(report: &AnnualReport, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["metric", "value"])?;
    let c = &report.community;
    let rows = [
        ("total_cost_without_storage", c.cost_without_storage),
        ("total_cost_with_storage", c.cost_with_storage),
        ("total_cost_with_sharing", c.cost_with_sharing),
        ("total_savings_with_sharing", c.savings),
        ("percent_savings_with_sharing", c.percent_savings),
    ];
    for (metric, value) in rows {
        w.write_record([metric.to_string(), format!("{value:.6}")])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_households(report: &AnnualReport, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "household_id",
        "cost_without_storage",
        "cost_with_storage",
        "cost_with_sharing",
        "savings",
        "percent_savings",
    ])?;
    for h in &report.households {
        w.write_record([
            h.id.clone(),
            format!("{:.6}", h.cost_without_storage),
            format!("{:.6}", h.cost_with_storage),
            format!("{:.6}", h.cost_with_sharing),
            format!("{:.6}", h.savings),
            format!("{:.6}", h.percent_savings),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_daily(report: &AnnualReport, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "date",
        "regime",
        "total_excess_kwh",
        "total_deficit_kwh",
        "p2p_kwh",
        "grid_kwh",
        "p2p_price",
        "savings",
    ])?;
    for d in &report.days {
        let regime = match d.regime {
            Regime::Deficit => "deficit",
            Regime::Surplus => "surplus",
        };
        w.write_record([
            d.date.to_string(),
            regime.to_string(),
            format!("{:.6}", d.total_excess_kwh),
            format!("{:.6}", d.total_deficit_kwh),
            format!("{:.6}", d.p2p_kwh),
            format!("{:.6}", d.grid_kwh),
            format!("{:.6}", d.p2p_price),
            format!("{:.6}", d.savings),
        ])?;
    }
    w.flush()?;
    Ok(())
}
