//! Synthetic load and storage generator shaped like the 80-household study
//! community: tiered peak-period consumption means, capacities between 13
//! and 99 kWh and amortized storage prices between 6.7 and 9.8 cents/kWh.

use chrono::{Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{HouseholdSpec, PeakWindow};
use super::ingest::HourlyLoadRecord;
use crate::{Error, Result};

/// Daily peak-period consumption tiers (kWh means) with their population
/// weights in the 80-household community.
const TIERS: [(f64, f64, usize); 5] = [
    (9.0, 16.0, 18),  // low
    (17.0, 21.0, 18), // moderately low
    (22.0, 34.0, 38), // moderate
    (38.0, 42.0, 4),  // high
    (65.0, 75.0, 2),  // very high
];

const CAPACITY_RANGE: (f64, f64) = (13.0, 99.0);
const CAPITAL_RATE_RANGE: (f64, f64) = (0.067, 0.098);

#[derive(Debug, Clone)]
pub struct SyntheticDataset {
    pub records: Vec<HourlyLoadRecord>,
    pub households: Vec<HouseholdSpec>,
    pub start_date: NaiveDate,
    pub days: usize,
}

/// Generates `count` households over `days` days starting 2016-01-01.
/// Deterministic for a fixed seed.
pub fn generate_synthetic(count: usize, days: usize, seed: u64) -> Result<SyntheticDataset> {
    if count == 0 || days == 0 {
        return Err(Error::Data(
            "synthetic generation needs at least one household and one day".into(),
        ));
    }
    let start_date = NaiveDate::from_ymd_opt(2016, 1, 1).unwrap();
    let window = PeakWindow::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let tier_total: usize = TIERS.iter().map(|(_, _, w)| w).sum();
    let mut households = Vec::with_capacity(count);
    let mut peak_means = Vec::with_capacity(count);
    for i in 0..count {
        // walk the tier weights so any community size keeps the mix
        let slot = (i * tier_total) / count.max(1) % tier_total;
        let mut acc = 0;
        let tier = TIERS
            .iter()
            .find(|(_, _, w)| {
                acc += w;
                slot < acc
            })
            .unwrap();
        peak_means.push(rng.gen_range(tier.0..tier.1));
        households.push(HouseholdSpec {
            id: format!("h{:03}", i + 1),
            capacity_kwh: round6(rng.gen_range(CAPACITY_RANGE.0..CAPACITY_RANGE.1)),
            capital_rate: round6(rng.gen_range(CAPITAL_RATE_RANGE.0..CAPITAL_RATE_RANGE.1)),
        });
    }

    let peak_hours = (window.end - window.start) as f64;
    let offpeak_hours = 24.0 - peak_hours;
    let mut records = Vec::with_capacity(count * days * 24);
    for (spec, &peak_mean) in households.iter().zip(&peak_means) {
        for d in 0..days {
            let date = start_date + Duration::days(d as i64);
            // day-to-day variation around the tier mean, mean factor 1.0
            let peak_total = peak_mean * rng.gen_range(0.55..1.45);
            let offpeak_total = peak_total * rng.gen_range(0.45..0.85);
            for hour in 0..24u32 {
                let (total, span) = if window.contains(hour) {
                    (peak_total, peak_hours)
                } else {
                    (offpeak_total, offpeak_hours)
                };
                // jitter each hour around the flat share
                let kwh = (total / span) * rng.gen_range(0.5..1.5);
                records.push(HourlyLoadRecord {
                    household_id: spec.id.clone(),
                    timestamp: date.and_hms_opt(hour, 0, 0).unwrap(),
                    kwh: round6(kwh),
                });
            }
        }
    }
    Ok(SyntheticDataset {
        records,
        households,
        start_date,
        days,
    })
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}
