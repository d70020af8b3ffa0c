//! Two-period time-of-use tariff with net-metering sell prices.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

use crate::{Error, Result};

/// Grid prices for one day: buy (`lambda`) and sell (`mu`) prices for the
/// peak (`h`) and off-peak (`l`) periods, in currency per kWh.
///
/// `mu_l` takes part in validation only; no cost formula consumes it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tariff {
    pub lambda_h: f64,
    pub lambda_l: f64,
    pub mu_h: f64,
    pub mu_l: f64,
}

/// A single violated pricing precondition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TariffViolation {
    /// A price is NaN or infinite; payload names the field.
    NonFinite(PriceField),
    /// A price is negative; payload names the field.
    Negative(PriceField),
    /// Peak buy price below peak sell price (`lambda_h < mu_h`).
    PeakBuyBelowPeakSell,
    /// Off-peak buy price below off-peak sell price (`lambda_l < mu_l`).
    OffpeakBuyBelowOffpeakSell,
    /// Peak sell price below off-peak buy price (`mu_h < lambda_l`).
    PeakSellBelowOffpeakBuy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceField {
    LambdaH,
    LambdaL,
    MuH,
    MuL,
}

impl fmt::Display for PriceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PriceField::LambdaH => "lambda_h",
            PriceField::LambdaL => "lambda_l",
            PriceField::MuH => "mu_h",
            PriceField::MuL => "mu_l",
        };
        f.write_str(name)
    }
}

impl fmt::Display for TariffViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TariffViolation::NonFinite(p) => write!(f, "price {p} is not finite"),
            TariffViolation::Negative(p) => write!(f, "price {p} is negative"),
            TariffViolation::PeakBuyBelowPeakSell => write!(f, "lambda_h < mu_h"),
            TariffViolation::OffpeakBuyBelowOffpeakSell => write!(f, "lambda_l < mu_l"),
            TariffViolation::PeakSellBelowOffpeakBuy => write!(f, "mu_h < lambda_l"),
        }
    }
}

impl Tariff {
    pub fn new(lambda_h: f64, lambda_l: f64, mu_h: f64, mu_l: f64) -> Self {
        Tariff {
            lambda_h,
            lambda_l,
            mu_h,
            mu_l,
        }
    }

    /// Collects every violated pricing condition; empty means the tariff is
    /// accepted. Ordering checks are skipped for prices that already failed
    /// the finiteness check.
    pub fn violations(&self) -> Vec<TariffViolation> {
        use PriceField::*;
        let fields = [
            (self.lambda_h, LambdaH),
            (self.lambda_l, LambdaL),
            (self.mu_h, MuH),
            (self.mu_l, MuL),
        ];
        let mut out = Vec::new();
        for (value, field) in fields {
            if !value.is_finite() {
                out.push(TariffViolation::NonFinite(field));
            } else if value < 0.0 {
                out.push(TariffViolation::Negative(field));
            }
        }
        let finite = fields.iter().all(|(v, _)| v.is_finite());
        if finite {
            if self.lambda_h < self.mu_h {
                out.push(TariffViolation::PeakBuyBelowPeakSell);
            }
            if self.lambda_l < self.mu_l {
                out.push(TariffViolation::OffpeakBuyBelowOffpeakSell);
            }
            if self.mu_h < self.lambda_l {
                out.push(TariffViolation::PeakSellBelowOffpeakBuy);
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Errors with the list of violated conditions unless the tariff is valid.
    pub fn validated(self) -> Result<Self> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(self)
        } else {
            let msg = violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            Err(Error::InvalidTariff(msg))
        }
    }

    /// Reads a tariff from a JSON object with exactly the four price keys.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}
