//! Simulation configuration: peak window, household storage specs, caps.

use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::game::DEFAULT_ENUM_CAP;
use crate::tariff::Tariff;
use crate::{Error, Result};

/// Contiguous daily peak period `[start, end)` in whole hours. Hours outside
/// the window, including the late-evening hours of the same date, count as
/// off-peak.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakWindow {
    pub start: u32,
    pub end: u32,
}

impl PeakWindow {
    pub fn new(start: u32, end: u32) -> Result<Self> {
        if start >= end || end > 24 {
            return Err(Error::Data(format!(
                "peak window must satisfy 0 <= start < end <= 24, got {start}:{end}"
            )));
        }
        Ok(PeakWindow { start, end })
    }

    pub fn contains(&self, hour: u32) -> bool {
        hour >= self.start && hour < self.end
    }
}

impl Default for PeakWindow {
    fn default() -> Self {
        PeakWindow { start: 8, end: 22 }
    }
}

impl FromStr for PeakWindow {
    type Err = Error;

    /// Parses `"8:22"`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Data(format!("peak window `{s}` is not START:END")))?;
        let start = a
            .trim()
            .parse()
            .map_err(|_| Error::Data(format!("bad peak window start `{a}`")))?;
        let end = b
            .trim()
            .parse()
            .map_err(|_| Error::Data(format!("bad peak window end `{b}`")))?;
        PeakWindow::new(start, end)
    }
}

/// Per-household storage parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HouseholdSpec {
    pub id: String,
    pub capacity_kwh: f64,
    /// Amortized daily capital price per kWh of capacity.
    pub capital_rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub tariff: Tariff,
    pub peak_window: PeakWindow,
    pub households: Vec<HouseholdSpec>,
    pub enum_cap: usize,
    pub seed: u64,
    /// Fill missing hours with zero (and warn) instead of erroring.
    pub fill_missing: bool,
}

impl SimulationConfig {
    pub fn new(tariff: Tariff, households: Vec<HouseholdSpec>) -> Result<Self> {
        let tariff = tariff.validated()?;
        for h in &households {
            if h.capacity_kwh < 0.0 || !h.capacity_kwh.is_finite() {
                return Err(Error::InvalidHousehold {
                    id: h.id.clone(),
                    field: "capacity_kwh",
                });
            }
            if h.capital_rate < 0.0 || !h.capital_rate.is_finite() {
                return Err(Error::InvalidHousehold {
                    id: h.id.clone(),
                    field: "capital_rate",
                });
            }
        }
        Ok(SimulationConfig {
            tariff,
            peak_window: PeakWindow::default(),
            households,
            enum_cap: DEFAULT_ENUM_CAP,
            seed: 0,
            fill_missing: false,
        })
    }
}
