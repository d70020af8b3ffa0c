//! Hourly load CSV ingestion and the capacities side file.

use chrono::{NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use super::config::HouseholdSpec;
use crate::{Error, Result};

/// One metered hour: `household_id,timestamp,kwh` with an ISO-8601 hour
/// timestamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlyLoadRecord {
    pub household_id: String,
    pub timestamp: NaiveDateTime,
    pub kwh: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IngestSummary {
    pub rows: usize,
    pub households: usize,
    pub days: usize,
    /// Missing (id, day, hour) gaps, as human-readable warnings.
    pub warnings: Vec<String>,
}

const TIMESTAMP_FORMATS: [&str; 2] = ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"];

fn parse_timestamp(raw: &str) -> Option<NaiveDateTime> {
    TIMESTAMP_FORMATS
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(raw, f).ok())
}

/// Parses a loads CSV, rejecting duplicate (household, hour) pairs and
/// negative consumption. Gaps in the hourly sequence are reported as
/// warnings, not errors; the fill policy is applied later at split time.
pub fn ingest_csv(path: impl AsRef<Path>) -> Result<(Vec<HourlyLoadRecord>, IngestSummary)> {
    let mut reader = csv::Reader::from_path(path)?;
    {
        let headers = reader.headers()?;
        let expected = ["household_id", "timestamp", "kwh"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Data(format!(
                "expected header `household_id,timestamp,kwh`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
    }
    let mut records = Vec::new();
    let mut seen: BTreeSet<(String, NaiveDateTime)> = BTreeSet::new();
    for (idx, row) in reader.records().enumerate() {
        let line = idx + 2; // header is line 1
        let row = row?;
        if row.len() != 3 {
            return Err(Error::Data(format!("line {line}: expected 3 fields")));
        }
        let household_id = row[0].trim().to_string();
        if household_id.is_empty() {
            return Err(Error::Data(format!("line {line}: empty household id")));
        }
        let timestamp = parse_timestamp(row[1].trim()).ok_or_else(|| {
            Error::Data(format!("line {line}: bad timestamp `{}`", &row[1]))
        })?;
        let kwh: f64 = row[2]
            .trim()
            .parse()
            .map_err(|_| Error::Data(format!("line {line}: bad kwh `{}`", &row[2])))?;
        if !kwh.is_finite() || kwh < 0.0 {
            return Err(Error::Data(format!(
                "line {line}: kwh must be finite and non-negative, got {kwh}"
            )));
        }
        let hour = timestamp
            .date()
            .and_hms_opt(timestamp.hour(), 0, 0)
            .unwrap();
        if !seen.insert((household_id.clone(), hour)) {
            return Err(Error::Data(format!(
                "line {line}: duplicate record for household `{household_id}` at {hour}"
            )));
        }
        records.push(HourlyLoadRecord {
            household_id,
            timestamp: hour,
            kwh,
        });
    }
    let summary = summarize(&records);
    Ok((records, summary))
}

fn summarize(records: &[HourlyLoadRecord]) -> IngestSummary {
    let mut households = BTreeSet::new();
    let mut days = BTreeSet::new();
    let mut hours: BTreeMap<(String, NaiveDate), BTreeSet<u32>> = BTreeMap::new();
    for r in records {
        households.insert(r.household_id.clone());
        days.insert(r.timestamp.date());
        hours
            .entry((r.household_id.clone(), r.timestamp.date()))
            .or_default()
            .insert(r.timestamp.hour());
    }
    let mut warnings = Vec::new();
    for ((id, day), present) in &hours {
        for hour in 0..24 {
            if !present.contains(&hour) {
                warnings.push(format!("missing hour: household `{id}` {day} {hour:02}:00"));
            }
        }
    }
    IngestSummary {
        rows: records.len(),
        households: households.len(),
        days: days.len(),
        warnings,
    }
}

/// Hourly loads pivoted to `(household, date) -> 24 optional values`.
#[derive(Debug, Clone, Default)]
pub struct LoadTable {
    cells: BTreeMap<(String, NaiveDate), [Option<f64>; 24]>,
}

impl LoadTable {
    pub fn from_records(records: &[HourlyLoadRecord]) -> LoadTable {
        let mut cells: BTreeMap<(String, NaiveDate), [Option<f64>; 24]> = BTreeMap::new();
        for r in records {
            let slot = cells
                .entry((r.household_id.clone(), r.timestamp.date()))
                .or_insert([None; 24]);
            slot[r.timestamp.hour() as usize] = Some(r.kwh);
        }
        LoadTable { cells }
    }

    pub fn dates(&self) -> Vec<NaiveDate> {
        let mut out: Vec<NaiveDate> = self.cells.keys().map(|(_, d)| *d).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn household_ids(&self) -> Vec<String> {
        let mut out: Vec<String> = self.cells.keys().map(|(id, _)| id.clone()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn day(&self, id: &str, date: NaiveDate) -> Option<&[Option<f64>; 24]> {
        self.cells.get(&(id.to_string(), date))
    }
}

/// Writes loads in the ingestion format, floats with 6 decimals.
pub fn write_loads_csv(records: &[HourlyLoadRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["household_id", "timestamp", "kwh"])?;
    for r in records {
        w.write_record([
            r.household_id.clone(),
            r.timestamp.format("%Y-%m-%dT%H:%M:%S").to_string(),
            format!("{:.6}", r.kwh),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the `household_id,capacity_kwh,lambda_b` side file.
pub fn write_capacities_csv(specs: &[HouseholdSpec], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["household_id", "capacity_kwh", "lambda_b"])?;
    for s in specs {
        w.write_record([
            s.id.clone(),
            format!("{:.6}", s.capacity_kwh),
            format!("{:.6}", s.capital_rate),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_capacities_csv(path: impl AsRef<Path>) -> Result<Vec<HouseholdSpec>> {
    let mut reader = csv::Reader::from_path(path)?;
    {
        let headers = reader.headers()?;
        let expected = ["household_id", "capacity_kwh", "lambda_b"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Data(format!(
                "expected header `household_id,capacity_kwh,lambda_b`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
    }
    let mut specs = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, row) in reader.records().enumerate() {
        let line = idx + 2;
        let row = row?;
        let id = row[0].trim().to_string();
        if !seen.insert(id.clone()) {
            return Err(Error::Data(format!(
                "line {line}: duplicate household `{id}` in capacities file"
            )));
        }
        let capacity_kwh: f64 = row[1]
            .trim()
            .parse()
            .map_err(|_| Error::Data(format!("line {line}: bad capacity `{}`", &row[1])))?;
        let capital_rate: f64 = row[2]
            .trim()
            .parse()
            .map_err(|_| Error::Data(format!("line {line}: bad lambda_b `{}`", &row[2])))?;
        specs.push(HouseholdSpec {
            id,
            capacity_kwh,
            capital_rate,
        });
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::NamedTempFile;

    fn write_temp(content: &str) -> NamedTempFile {
        let mut f = NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn three_valid_rows_parse() {
        let f = write_temp(
            "household_id,timestamp,kwh\n\
             a,2016-01-01T00:00:00,1.5\n\
             a,2016-01-01T01:00:00,0.5\n\
             b,2016-01-01T00:00:00,2.0\n",
        );
        let (records, summary) = ingest_csv(f.path()).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(summary.rows, 3);
        assert_eq!(summary.households, 2);
        assert_eq!(summary.days, 1);
        assert!(!summary.warnings.is_empty()); // missing hours warned
    }

    #[test]
    fn duplicate_hour_names_the_pair() {
        let f = write_temp(
            "household_id,timestamp,kwh\n\
             a,2016-01-01T00:00:00,1.5\n\
             a,2016-01-01T00:30:00,0.5\n",
        );
        // sub-hourly stamps collapse onto the hour, so this is a duplicate
        let err = ingest_csv(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("duplicate") && msg.contains('a'), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let f = write_temp("household_id,timestamp,kwh\na,not-a-time,1.0\n");
        let msg = ingest_csv(f.path()).unwrap_err().to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn negative_kwh_rejected() {
        let f = write_temp("household_id,timestamp,kwh\na,2016-01-01T00:00:00,-1.0\n");
        assert!(ingest_csv(f.path()).is_err());
    }

    #[test]
    fn wrong_header_rejected() {
        let f = write_temp("id,time,load\na,2016-01-01T00:00:00,1.0\n");
        assert!(ingest_csv(f.path()).is_err());
    }

    #[test]
    fn capacities_round_trip() {
        let specs = vec![
            HouseholdSpec {
                id: "a".into(),
                capacity_kwh: 20.3,
                capital_rate: 0.082,
            },
            HouseholdSpec {
                id: "b".into(),
                capacity_kwh: 98.6,
                capital_rate: 0.067,
            },
        ];
        let mut buf = Vec::new();
        write_capacities_csv(&specs, &mut buf).unwrap();
        let f = write_temp(std::str::from_utf8(&buf).unwrap());
        let back = read_capacities_csv(f.path()).unwrap();
        assert_eq!(back, specs);
    }

    #[test]
    fn load_table_pivots_by_day() {
        let f = write_temp(
            "household_id,timestamp,kwh\n\
             a,2016-01-01T05:00:00,1.5\n\
             a,2016-01-02T06:00:00,2.5\n",
        );
        let (records, _) = ingest_csv(f.path()).unwrap();
        let table = LoadTable::from_records(&records);
        assert_eq!(table.dates().len(), 2);
        assert_eq!(table.household_ids(), vec!["a".to_string()]);
        let day = table
            .day("a", NaiveDate::from_ymd_opt(2016, 1, 1).unwrap())
            .unwrap();
        assert_eq!(day[5], Some(1.5));
        assert_eq!(day[6], None);
    }
}
