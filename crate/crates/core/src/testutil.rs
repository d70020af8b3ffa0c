//! Shared fixtures and random generators for unit tests.

use chrono::NaiveDate;
use rand::Rng;

use crate::model::{CommunityDay, HouseholdDay};
use crate::tariff::Tariff;

/// The case-study tariff: 54/22 cents buy, 30/13 cents sell.
pub fn study_tariff() -> Tariff {
    Tariff::new(0.54, 0.22, 0.30, 0.13)
}

pub fn hh(
    id: impl Into<String>,
    peak: f64,
    offpeak: f64,
    capacity: f64,
    capital_rate: f64,
) -> HouseholdDay {
    HouseholdDay::new(id, peak, offpeak, capacity, capital_rate).unwrap()
}

pub fn community(households: Vec<HouseholdDay>) -> CommunityDay {
    let date = NaiveDate::from_ymd_opt(2016, 1, 1).unwrap();
    CommunityDay::new(date, households).unwrap()
}

/// Draws a tariff satisfying the chain lambda_h >= mu_h >= lambda_l >= mu_l.
pub fn random_valid_tariff(rng: &mut impl Rng) -> Tariff {
    let mut prices = [0.0f64; 4];
    for p in &mut prices {
        *p = rng.gen_range(0.0..1.0);
    }
    prices.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Tariff::new(prices[0], prices[2], prices[1], prices[3])
}

pub fn random_household(rng: &mut impl Rng, id: impl Into<String>) -> HouseholdDay {
    hh(
        id,
        rng.gen_range(0.0..100.0),
        rng.gen_range(0.0..100.0),
        rng.gen_range(0.0..100.0),
        rng.gen_range(0.0..0.2),
    )
}

pub fn random_community(rng: &mut impl Rng, n: usize) -> CommunityDay {
    let hhs = (0..n)
        .map(|i| random_household(rng, format!("h{i:03}")))
        .collect();
    community(hhs)
}
