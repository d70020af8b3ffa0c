//! Day splitting and the year-long simulation driver.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::config::{PeakWindow, SimulationConfig};
use super::ingest::{HourlyLoadRecord, LoadTable};
use crate::cost::{cost_net_metering, cost_no_storage};
use crate::game::{allocate, Regime};
use crate::model::{CommunityDay, HouseholdDay};
use crate::settlement::settle_day;
use crate::{Error, Result};

/// Splits one household-day of hourly values into peak and off-peak totals.
/// Off-peak hours of the same calendar date on both sides of the window
/// count toward `Y`. Missing hours error unless `fill_missing` is set, in
/// which case they contribute zero.
pub fn split_day(
    hours: &[Option<f64>; 24],
    window: PeakWindow,
    fill_missing: bool,
) -> Result<(f64, f64)> {
    if !fill_missing {
        let missing: Vec<usize> = hours
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(h, _)| h)
            .collect();
        if !missing.is_empty() {
            return Err(Error::Data(format!(
                "missing hours {missing:?}; rerun with the fill-missing policy to zero-fill"
            )));
        }
    }
    let mut peak = 0.0;
    let mut offpeak = 0.0;
    for (hour, value) in hours.iter().enumerate() {
        let kwh = value.unwrap_or(0.0);
        if window.contains(hour as u32) {
            peak += kwh;
        } else {
            offpeak += kwh;
        }
    }
    Ok((peak, offpeak))
}

/// Annual totals for one household.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HouseholdAnnual {
    pub id: String,
    pub cost_without_storage: f64,
    pub cost_with_storage: f64,
    pub cost_with_sharing: f64,
    pub savings: f64,
    pub percent_savings: f64,
}

/// One settled day, condensed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DaySummary {
    pub date: NaiveDate,
    pub regime: Regime,
    pub total_excess_kwh: f64,
    pub total_deficit_kwh: f64,
    pub p2p_kwh: f64,
    pub grid_kwh: f64,
    pub p2p_price: f64,
    pub savings: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityTotals {
    pub cost_without_storage: f64,
    pub cost_with_storage: f64,
    pub cost_with_sharing: f64,
    pub savings: f64,
    pub percent_savings: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualReport {
    pub households: Vec<HouseholdAnnual>,
    pub community: CommunityTotals,
    pub days: Vec<DaySummary>,
    pub warnings: Vec<String>,
}

/// Runs the full study over every date present in the records: daily costs
/// without storage, with storage under net metering, the core allocation
/// and the P2P ledger, accumulated into annual totals in date order.
pub fn simulate(records: &[HourlyLoadRecord], config: &SimulationConfig) -> Result<AnnualReport> {
    let tariff = config.tariff.validated()?;
    if config.households.is_empty() {
        return Err(Error::EmptyCommunity);
    }
    let table = LoadTable::from_records(records);
    let dates = table.dates();
    if dates.is_empty() {
        return Err(Error::Data("no load records to simulate".into()));
    }

    let mut warnings = Vec::new();
    let mut without: BTreeMap<String, f64> = BTreeMap::new();
    let mut with_storage: BTreeMap<String, f64> = BTreeMap::new();
    let mut with_sharing: BTreeMap<String, f64> = BTreeMap::new();
    let mut days = Vec::with_capacity(dates.len());

    for date in dates {
        let mut households = Vec::with_capacity(config.households.len());
        for spec in &config.households {
            let hours = match table.day(&spec.id, date) {
                Some(hours) => *hours,
                None if config.fill_missing => {
                    warnings.push(format!(
                        "household `{}` has no data on {date}; filled with zeros",
                        spec.id
                    ));
                    [Some(0.0); 24]
                }
                None => {
                    return Err(Error::Data(format!(
                        "household `{}` has no load data on {date}",
                        spec.id
                    )))
                }
            };
            let (peak, offpeak) = split_day(&hours, config.peak_window, config.fill_missing)
                .map_err(|e| Error::Data(format!("household `{}` on {date}: {e}", spec.id)))?;
            households.push(HouseholdDay::new(
                spec.id.clone(),
                peak,
                offpeak,
                spec.capacity_kwh,
                spec.capital_rate,
            )?);
        }
        let community = CommunityDay::new(date, households)?;
        let alloc = allocate(&community, &tariff)?;
        let ledger = settle_day(&community, &tariff)?;
        for h in community.households() {
            *without.entry(h.id.clone()).or_default() += cost_no_storage(h, &tariff).total();
            *with_storage.entry(h.id.clone()).or_default() +=
                cost_net_metering(h, &tariff).total();
            *with_sharing.entry(h.id.clone()).or_default() += alloc.shares[&h.id];
        }
        days.push(DaySummary {
            date,
            regime: ledger.regime,
            total_excess_kwh: ledger.total_excess_kwh,
            total_deficit_kwh: ledger.total_deficit_kwh,
            p2p_kwh: ledger.total_p2p_kwh,
            grid_kwh: ledger.total_grid_kwh,
            p2p_price: ledger.p2p_price,
            savings: ledger.total_savings,
        });
    }

    let mut households = Vec::with_capacity(config.households.len());
    let mut totals = CommunityTotals {
        cost_without_storage: 0.0,
        cost_with_storage: 0.0,
        cost_with_sharing: 0.0,
        savings: 0.0,
        percent_savings: 0.0,
    };
    for id in without.keys() {
        let u = without[id];
        let w = with_storage[id];
        let s = with_sharing[id];
        let savings = w - s;
        households.push(HouseholdAnnual {
            id: id.clone(),
            cost_without_storage: u,
            cost_with_storage: w,
            cost_with_sharing: s,
            savings,
            percent_savings: if w != 0.0 { savings / w * 100.0 } else { 0.0 },
        });
        totals.cost_without_storage += u;
        totals.cost_with_storage += w;
        totals.cost_with_sharing += s;
    }
    totals.savings = totals.cost_with_storage - totals.cost_with_sharing;
    totals.percent_savings = if totals.cost_with_storage != 0.0 {
        totals.savings / totals.cost_with_storage * 100.0
    } else {
        0.0
    };
    Ok(AnnualReport {
        households,
        community: totals,
        days,
        warnings,
    })
}
