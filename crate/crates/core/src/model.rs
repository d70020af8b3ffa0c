//! Households, days and coalitions with cached aggregates.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::{tol, Error, Result};

/// One household's daily position: peak consumption `X`, off-peak
/// consumption `Y`, storage capacity `B` (all kWh) and the amortized daily
/// capital price per kWh of capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HouseholdDay {
    pub id: String,
    pub peak_kwh: f64,
    pub offpeak_kwh: f64,
    pub capacity_kwh: f64,
    pub capital_rate: f64,
}

impl HouseholdDay {
    pub fn new(
        id: impl Into<String>,
        peak_kwh: f64,
        offpeak_kwh: f64,
        capacity_kwh: f64,
        capital_rate: f64,
    ) -> Result<Self> {
        let h = HouseholdDay {
            id: id.into(),
            peak_kwh,
            offpeak_kwh,
            capacity_kwh,
            capital_rate,
        };
        h.check()?;
        Ok(h)
    }

    fn check(&self) -> Result<()> {
        let fields = [
            (self.peak_kwh, "peak_kwh"),
            (self.offpeak_kwh, "offpeak_kwh"),
            (self.capacity_kwh, "capacity_kwh"),
            (self.capital_rate, "capital_rate"),
        ];
        for (value, field) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidHousehold {
                    id: self.id.clone(),
                    field,
                });
            }
        }
        Ok(())
    }

    /// Amortized capital charged for this day.
    pub fn capital_cost(&self) -> f64 {
        self.capital_rate * self.capacity_kwh
    }

    /// Tradable surplus `(B - X)^+`.
    pub fn excess_kwh(&self) -> f64 {
        tol::pos(self.capacity_kwh - self.peak_kwh)
    }

    /// Shortfall `(X - B)^+`.
    pub fn deficit_kwh(&self) -> f64 {
        tol::pos(self.peak_kwh - self.capacity_kwh)
    }
}

/// Aggregates of a coalition: member ids in ascending order plus the cached
/// sums `X_S`, `Y_S`, `B_S` and the summed daily capital.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoalitionView {
    pub members: Vec<String>,
    pub peak_kwh: f64,
    pub offpeak_kwh: f64,
    pub capacity_kwh: f64,
    pub capital: f64,
}

impl CoalitionView {
    /// Scales every aggregate by `alpha`; the coalition cost is positively
    /// homogeneous in these four quantities.
    pub fn scaled(&self, alpha: f64) -> CoalitionView {
        CoalitionView {
            members: self.members.clone(),
            peak_kwh: alpha * self.peak_kwh,
            offpeak_kwh: alpha * self.offpeak_kwh,
            capacity_kwh: alpha * self.capacity_kwh,
            capital: alpha * self.capital,
        }
    }
}

/// One calendar day of the whole community. Households are kept sorted by
/// id so every summation runs in the same order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityDay {
    pub date: NaiveDate,
    households: Vec<HouseholdDay>,
}

impl CommunityDay {
    pub fn new(date: NaiveDate, mut households: Vec<HouseholdDay>) -> Result<Self> {
        if households.is_empty() {
            return Err(Error::EmptyCommunity);
        }
        for h in &households {
            h.check()?;
        }
        households.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in households.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::DuplicateHousehold(pair[0].id.clone()));
            }
        }
        Ok(CommunityDay { date, households })
    }

    pub fn len(&self) -> usize {
        self.households.len()
    }

    pub fn is_empty(&self) -> bool {
        self.households.is_empty()
    }

    /// Households in ascending-id order.
    pub fn households(&self) -> &[HouseholdDay] {
        &self.households
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.households.iter().map(|h| h.id.as_str())
    }

    pub fn get(&self, id: &str) -> Option<&HouseholdDay> {
        self.households
            .binary_search_by(|h| h.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.households[i])
    }

    /// Aggregates the named members. Summation runs in ascending-id order
    /// regardless of how `members` is ordered.
    pub fn aggregate(&self, members: &BTreeSet<String>) -> Result<CoalitionView> {
        if members.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        for id in members {
            if self.get(id).is_none() {
                return Err(Error::UnknownHousehold(id.clone()));
            }
        }
        let selected: Vec<&HouseholdDay> = self
            .households
            .iter()
            .filter(|h| members.contains(&h.id))
            .collect();
        Ok(Self::view_of(&selected))
    }

    /// Aggregates the members selected by `mask` over the ascending-id
    /// household order; bit `i` selects `households()[i]`. Used by the
    /// subset-enumeration paths, which require `len() <= 64`.
    pub fn aggregate_mask(&self, mask: u64) -> Result<CoalitionView> {
        assert!(self.households.len() <= 64, "bitmask aggregation needs N <= 64");
        if mask == 0 {
            return Err(Error::EmptyCoalition);
        }
        let selected: Vec<&HouseholdDay> = self
            .households
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1u64 << i) != 0)
            .map(|(_, h)| h)
            .collect();
        Ok(Self::view_of(&selected))
    }

    /// Aggregates the grand coalition.
    pub fn aggregate_all(&self) -> CoalitionView {
        let all: Vec<&HouseholdDay> = self.households.iter().collect();
        Self::view_of(&all)
    }

    fn view_of(selected: &[&HouseholdDay]) -> CoalitionView {
        let mut view = CoalitionView {
            members: Vec::with_capacity(selected.len()),
            peak_kwh: 0.0,
            offpeak_kwh: 0.0,
            capacity_kwh: 0.0,
            capital: 0.0,
        };
        for h in selected {
            view.members.push(h.id.clone());
            view.peak_kwh += h.peak_kwh;
            view.offpeak_kwh += h.offpeak_kwh;
            view.capacity_kwh += h.capacity_kwh;
            view.capital += h.capital_cost();
        }
        view
    }
}
