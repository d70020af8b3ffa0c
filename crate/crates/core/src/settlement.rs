//! P2P sharing mechanism: trade prices, pro-rata matching of excess against
//! deficit, and the daily trade ledger.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

use crate::game::Regime;
use crate::model::CommunityDay;
use crate::tariff::Tariff;
use crate::tol;
use crate::{Error, Result};

/// The single community trade price `p` and each household's grid price `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharingPrices {
    pub p2p_price: f64,
    pub grid_price_by_household: BTreeMap<String, f64>,
    pub regime: Regime,
}

impl SharingPrices {
    pub fn for_community(c: &CommunityDay, t: &Tariff) -> SharingPrices {
        let grand = c.aggregate_all();
        let regime = Regime::of(grand.peak_kwh, grand.capacity_kwh);
        let p2p_price = match regime {
            Regime::Deficit => t.lambda_h,
            Regime::Surplus => t.mu_h,
        };
        let grid_price_by_household = c
            .households()
            .iter()
            .map(|h| {
                let g = if h.peak_kwh >= h.capacity_kwh {
                    t.lambda_h
                } else {
                    t.mu_h
                };
                (h.id.clone(), g)
            })
            .collect();
        SharingPrices {
            p2p_price,
            grid_price_by_household,
            regime,
        }
    }
}

/// One household's routed position for a day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradePosition {
    pub id: String,
    /// Excess `(B - X)^+` offered for sale.
    pub excess_kwh: f64,
    /// Deficit `(X - B)^+` to be bought.
    pub deficit_kwh: f64,
    /// Portion of the position cleared on the P2P market.
    pub p2p_kwh: f64,
    /// Residual routed to the grid at this household's grid price.
    pub grid_kwh: f64,
    pub grid_price: f64,
    /// Savings relative to trading everything with the grid.
    pub savings: f64,
}

/// Full settlement of one community day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeLedger {
    pub date: NaiveDate,
    pub regime: Regime,
    pub p2p_price: f64,
    pub positions: Vec<TradePosition>,
    pub total_excess_kwh: f64,
    pub total_deficit_kwh: f64,
    pub total_p2p_kwh: f64,
    pub total_grid_kwh: f64,
    pub total_savings: f64,
}

impl TradeLedger {
    pub fn position(&self, id: &str) -> Option<&TradePosition> {
        self.positions.iter().find(|p| p.id == id)
    }

    /// Writes one CSV row per household:
    /// `household_id,date,regime,excess_kwh,deficit_kwh,p2p_kwh,grid_kwh,p2p_price,grid_price,savings`.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "household_id",
            "date",
            "regime",
            "excess_kwh",
            "deficit_kwh",
            "p2p_kwh",
            "grid_kwh",
            "p2p_price",
            "grid_price",
            "savings",
        ])?;
        let regime = match self.regime {
            Regime::Deficit => "deficit",
            Regime::Surplus => "surplus",
        };
        for p in &self.positions {
            w.write_record([
                p.id.clone(),
                self.date.to_string(),
                regime.to_string(),
                format!("{:.6}", p.excess_kwh),
                format!("{:.6}", p.deficit_kwh),
                format!("{:.6}", p.p2p_kwh),
                format!("{:.6}", p.grid_kwh),
                format!("{:.6}", self.p2p_price),
                format!("{:.6}", p.grid_price),
                format!("{:.6}", p.savings),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Settles one day: computes the community regime and prices, clears
/// `min(sum E, sum D)` on the P2P market pro-rata across each side, routes
/// the residual to the grid and records each household's savings.
pub fn settle_day(c: &CommunityDay, t: &Tariff) -> Result<TradeLedger> {
    if c.is_empty() {
        return Err(Error::EmptyCommunity);
    }
    let prices = SharingPrices::for_community(c, t);
    let total_excess: f64 = c.households().iter().map(|h| h.excess_kwh()).sum();
    let total_deficit: f64 = c.households().iter().map(|h| h.deficit_kwh()).sum();
    let cleared = total_excess.min(total_deficit);
    let margin = t.lambda_h - t.mu_h;

    let mut positions = Vec::with_capacity(c.len());
    let mut total_grid = 0.0;
    let mut total_savings = 0.0;
    for h in c.households() {
        let excess = h.excess_kwh();
        let deficit = h.deficit_kwh();
        // pro-rata share of the cleared volume on this household's side
        let p2p = if excess > 0.0 && total_excess > 0.0 {
            cleared * excess / total_excess
        } else if deficit > 0.0 && total_deficit > 0.0 {
            cleared * deficit / total_deficit
        } else {
            0.0
        };
        let grid = (excess + deficit) - p2p;
        let savings = match prices.regime {
            // sellers gain the margin on everything they offer: the whole
            // community books its excess at the P2P price
            Regime::Deficit if h.peak_kwh < h.capacity_kwh => margin * excess,
            Regime::Surplus if h.peak_kwh >= h.capacity_kwh => margin * deficit,
            _ => 0.0,
        };
        total_grid += grid;
        total_savings += savings;
        positions.push(TradePosition {
            id: h.id.clone(),
            excess_kwh: excess,
            deficit_kwh: deficit,
            p2p_kwh: p2p,
            grid_kwh: grid,
            grid_price: prices.grid_price_by_household[&h.id],
            savings,
        });
    }
    Ok(TradeLedger {
        date: c.date,
        regime: prices.regime,
        p2p_price: prices.p2p_price,
        positions,
        total_excess_kwh: total_excess,
        total_deficit_kwh: total_deficit,
        total_p2p_kwh: cleared,
        total_grid_kwh: total_grid,
        total_savings,
    })
}

/// A named property check with any mismatches found.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Verifies that the ledger savings reconcile with the core allocation:
/// `xi_i = J(i) - G_i` for every household.
pub fn savings_consistency(
    ledger: &TradeLedger,
    alloc: &crate::game::Allocation,
    standalone_costs: &BTreeMap<String, f64>,
) -> Result<PropertyReport> {
    let ledger_ids: Vec<&str> = ledger.positions.iter().map(|p| p.id.as_str()).collect();
    let alloc_ids: Vec<&str> = alloc.shares.keys().map(String::as_str).collect();
    let mut sorted = ledger_ids.clone();
    sorted.sort_unstable();
    if sorted != alloc_ids || standalone_costs.len() != alloc_ids.len() {
        return Err(Error::MismatchedHouseholds(format!(
            "ledger has {} households, allocation {}, costs {}",
            ledger_ids.len(),
            alloc_ids.len(),
            standalone_costs.len()
        )));
    }
    let mut report = PropertyReport {
        property: "xi_i = J(i) - G_i".into(),
        checked: 0,
        mismatches: Vec::new(),
    };
    for p in &ledger.positions {
        let standalone = *standalone_costs
            .get(&p.id)
            .ok_or_else(|| Error::MismatchedHouseholds(p.id.clone()))?;
        let share = alloc.shares[&p.id];
        report.checked += 1;
        if !tol::approx_eq(share, standalone - p.savings) {
            report.mismatches.push(format!(
                "{}: xi = {share}, J(i) - G_i = {}",
                p.id,
                standalone - p.savings
            ));
        }
    }
    Ok(report)
}
