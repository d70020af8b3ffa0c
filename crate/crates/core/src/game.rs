//! The coalitional game over pooled storage: analytic cost allocation,
//! subadditivity spot checks and brute-force core verification.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::cost::{coalition_cost, cost_net_metering};
use crate::model::CommunityDay;
use crate::tariff::Tariff;
use crate::tol;
use crate::{Error, Result};

/// Default cap on exhaustive coalition enumeration.
pub const DEFAULT_ENUM_CAP: usize = 20;

/// Which side of the community balance the grand coalition is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Pooled peak consumption meets or exceeds pooled capacity
    /// (`X_N >= B_N`); the community buys its residual at the peak price.
    Deficit,
    /// Pooled capacity exceeds pooled peak consumption (`X_N < B_N`); the
    /// community sells its residual at the peak sell price.
    Surplus,
}

impl Regime {
    pub fn of(peak_kwh: f64, capacity_kwh: f64) -> Regime {
        if peak_kwh >= capacity_kwh {
            Regime::Deficit
        } else {
            Regime::Surplus
        }
    }
}

/// Per-household cost shares for one day plus the grand-coalition cost they
/// sum to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub shares: BTreeMap<String, f64>,
    pub grand_cost: f64,
    pub regime: Regime,
}

impl Allocation {
    pub fn share(&self, id: &str) -> Option<f64> {
        self.shares.get(id).copied()
    }
}

/// Computes the analytic allocation. In the deficit regime each household is
/// charged as if it bought its own residual `X_i - B_i` (possibly negative)
/// at the peak price; in the surplus regime its residual is valued at the
/// peak sell price. Either way the shares telescope to the grand-coalition
/// cost.
pub fn allocate(c: &CommunityDay, t: &Tariff) -> Result<Allocation> {
    if c.is_empty() {
        return Err(Error::EmptyCommunity);
    }
    let grand = c.aggregate_all();
    let regime = Regime::of(grand.peak_kwh, grand.capacity_kwh);
    let mut shares = BTreeMap::new();
    for h in c.households() {
        let peak_term = match regime {
            Regime::Deficit => t.lambda_h * (h.peak_kwh - h.capacity_kwh),
            Regime::Surplus => -t.mu_h * (h.capacity_kwh - h.peak_kwh),
        };
        let share =
            h.capital_cost() + peak_term + t.lambda_l * (h.offpeak_kwh + h.capacity_kwh);
        shares.insert(h.id.clone(), share);
    }
    Ok(Allocation {
        shares,
        grand_cost: coalition_cost(&grand, t).total(),
        regime,
    })
}

/// Savings of each household from joining the grand coalition,
/// `G_i = J(i) - xi_i`. Equals `(lambda_h - mu_h)` times the household's
/// excess in the deficit regime and times its deficit in the surplus regime.
pub fn individual_savings(c: &CommunityDay, t: &Tariff) -> Result<BTreeMap<String, f64>> {
    let alloc = allocate(c, t)?;
    let mut savings = BTreeMap::new();
    for h in c.households() {
        let traded = match alloc.regime {
            Regime::Deficit => h.excess_kwh(),
            Regime::Surplus => h.deficit_kwh(),
        };
        savings.insert(h.id.clone(), (t.lambda_h - t.mu_h) * traded);
    }
    Ok(savings)
}

/// The four balance cases of a disjoint coalition pair, by which side of
/// `X >= B` each of `S`, `T` and their union fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairCase {
    BothDeficit,
    MixedUnionDeficit,
    MixedUnionSurplus,
    BothSurplus,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubadditivityViolation {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub case: PairCase,
    /// `J(S u T) - (J(S) + J(T))`, positive when subadditivity fails.
    pub excess: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubadditivityReport {
    pub trials: usize,
    pub case_counts: BTreeMap<String, usize>,
    pub violations: Vec<SubadditivityViolation>,
}

impl SubadditivityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Draws `trials` random disjoint coalition pairs and checks
/// `J(S u T) <= J(S) + J(T)` on each, classifying every pair into its
/// balance case.
pub fn check_subadditivity(
    c: &CommunityDay,
    t: &Tariff,
    trials: usize,
    seed: u64,
) -> Result<SubadditivityReport> {
    let n = c.len();
    if n < 2 {
        return Err(Error::Data(
            "subadditivity check needs at least two households".into(),
        ));
    }
    assert!(n <= 64, "subadditivity sampling uses bitmasks; N must be <= 64");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SubadditivityReport {
        trials,
        case_counts: BTreeMap::new(),
        violations: Vec::new(),
    };
    let mut indices: Vec<usize> = (0..n).collect();
    for _ in 0..trials {
        // random split: shuffle, then carve two disjoint non-empty prefixes
        indices.shuffle(&mut rng);
        let left_len = rng.gen_range(1..n);
        let right_len = rng.gen_range(1..=n - left_len);
        let mut left_mask = 0u64;
        let mut right_mask = 0u64;
        for &i in &indices[..left_len] {
            left_mask |= 1 << i;
        }
        for &i in &indices[left_len..left_len + right_len] {
            right_mask |= 1 << i;
        }
        let left = c.aggregate_mask(left_mask)?;
        let right = c.aggregate_mask(right_mask)?;
        let union = c.aggregate_mask(left_mask | right_mask)?;
        let case = match (
            left.peak_kwh >= left.capacity_kwh,
            right.peak_kwh >= right.capacity_kwh,
            union.peak_kwh >= union.capacity_kwh,
        ) {
            (true, true, _) => PairCase::BothDeficit,
            (false, false, _) => PairCase::BothSurplus,
            (_, _, true) => PairCase::MixedUnionDeficit,
            (_, _, false) => PairCase::MixedUnionSurplus,
        };
        *report.case_counts.entry(format!("{case:?}")).or_insert(0) += 1;
        let joint = coalition_cost(&union, t).total();
        let split = coalition_cost(&left, t).total() + coalition_cost(&right, t).total();
        if !tol::approx_le(joint, split) {
            report.violations.push(SubadditivityViolation {
                left: left.members,
                right: right.members,
                case,
                excess: joint - split,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoreViolationKind {
    /// A coalition would pay less on its own: `xi_S > J(S)`.
    Excess,
    /// The closed-form gap `J(S) - xi_S` does not match the allocation.
    GapMismatch,
    /// Budget balance or individual rationality failed.
    Imputation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoreViolation {
    pub members: Vec<String>,
    pub kind: CoreViolationKind,
    pub amount: f64,
}

/// Result of a core-membership check over many (or all) coalitions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoreReport {
    pub num_households: usize,
    pub num_coalitions_checked: usize,
    pub exhaustive: bool,
    pub violations: Vec<CoreViolation>,
    /// Largest `xi_S - J(S)` seen over all checked coalitions.
    pub max_excess: f64,
}

impl CoreReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively enumerates all `2^N - 1` non-empty coalitions and checks
/// that the allocation never charges a coalition more than its standalone
/// cost, that the closed-form gap matches, and that the allocation is a
/// budget-balanced, individually rational imputation.
pub fn check_core(c: &CommunityDay, t: &Tariff, enum_cap: usize) -> Result<CoreReport> {
    let n = c.len();
    if n > enum_cap || n > 63 {
        return Err(Error::EnumerationCapExceeded {
            n,
            cap: enum_cap.min(63),
        });
    }
    let alloc = allocate(c, t)?;
    let mut report = new_report(n, true);
    check_imputation(c, t, &alloc, &mut report);

    // incremental enumeration: shares and aggregates of mask are extended
    // from mask without its lowest set bit, so each subset costs O(1)
    let households = c.households();
    let total = 1u64 << n;
    let mut share_of = vec![0.0f64; total as usize];
    let mut peak = vec![0.0f64; total as usize];
    let mut capacity = vec![0.0f64; total as usize];
    let mut offpeak = vec![0.0f64; total as usize];
    let mut capital = vec![0.0f64; total as usize];
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = (mask & (mask - 1)) as usize;
        let h = &households[low];
        let m = mask as usize;
        share_of[m] = share_of[rest] + alloc.shares[&h.id];
        peak[m] = peak[rest] + h.peak_kwh;
        capacity[m] = capacity[rest] + h.capacity_kwh;
        offpeak[m] = offpeak[rest] + h.offpeak_kwh;
        capital[m] = capital[rest] + h.capital_cost();
        let standalone = capital[m] + t.lambda_h * tol::pos(peak[m] - capacity[m])
            - t.mu_h * tol::pos(capacity[m] - peak[m])
            + t.lambda_l * (offpeak[m] + capacity[m]);
        record_coalition(
            c,
            t,
            mask,
            share_of[m],
            standalone,
            peak[m],
            capacity[m],
            alloc.regime,
            &mut report,
        );
    }
    Ok(report)
}

/// Core check by random subset sampling, for communities over the
/// enumeration cap. Same assertions as [`check_core`], on `samples` random
/// non-empty coalitions.
pub fn check_core_sampled(
    c: &CommunityDay,
    t: &Tariff,
    samples: usize,
    seed: u64,
) -> Result<CoreReport> {
    let n = c.len();
    assert!(n <= 64, "sampled core checking uses bitmasks; N must be <= 64");
    let alloc = allocate(c, t)?;
    let mut report = new_report(n, false);
    check_imputation(c, t, &alloc, &mut report);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    for _ in 0..samples {
        let mut mask = rng.gen::<u64>() & full;
        if mask == 0 {
            mask = 1 << rng.gen_range(0..n);
        }
        let view = c.aggregate_mask(mask)?;
        let share: f64 = view.members.iter().map(|id| alloc.shares[id]).sum();
        let standalone = coalition_cost(&view, t).total();
        record_coalition(
            c,
            t,
            mask,
            share,
            standalone,
            view.peak_kwh,
            view.capacity_kwh,
            alloc.regime,
            &mut report,
        );
    }
    Ok(report)
}

fn new_report(n: usize, exhaustive: bool) -> CoreReport {
    CoreReport {
        num_households: n,
        num_coalitions_checked: 0,
        exhaustive,
        violations: Vec::new(),
        max_excess: f64::NEG_INFINITY,
    }
}

fn check_imputation(c: &CommunityDay, t: &Tariff, alloc: &Allocation, report: &mut CoreReport) {
    let sum: f64 = alloc.shares.values().sum();
    if !tol::approx_eq(sum, alloc.grand_cost) {
        report.violations.push(CoreViolation {
            members: c.ids().map(String::from).collect(),
            kind: CoreViolationKind::Imputation,
            amount: sum - alloc.grand_cost,
        });
    }
    for h in c.households() {
        let standalone = cost_net_metering(h, t).total();
        let share = alloc.shares[&h.id];
        if !tol::approx_le(share, standalone) {
            report.violations.push(CoreViolation {
                members: vec![h.id.clone()],
                kind: CoreViolationKind::Imputation,
                amount: share - standalone,
            });
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn record_coalition(
    c: &CommunityDay,
    t: &Tariff,
    mask: u64,
    share: f64,
    standalone: f64,
    peak: f64,
    capacity: f64,
    regime: Regime,
    report: &mut CoreReport,
) {
    report.num_coalitions_checked += 1;
    let excess = share - standalone;
    if excess > report.max_excess {
        report.max_excess = excess;
    }
    if !tol::approx_le(share, standalone) {
        report.violations.push(CoreViolation {
            members: members_of(c, mask),
            kind: CoreViolationKind::Excess,
            amount: excess,
        });
    }
    // Theorem 4 closed form: the gap a coalition forgoes by staying is the
    // margin on whichever side it trades against the community regime.
    let expected_gap = match regime {
        Regime::Deficit => (t.lambda_h - t.mu_h) * tol::pos(capacity - peak),
        Regime::Surplus => (t.lambda_h - t.mu_h) * tol::pos(peak - capacity),
    };
    if !tol::approx_eq(standalone - share, expected_gap) {
        report.violations.push(CoreViolation {
            members: members_of(c, mask),
            kind: CoreViolationKind::GapMismatch,
            amount: (standalone - share) - expected_gap,
        });
    }
}

fn members_of(c: &CommunityDay, mask: u64) -> Vec<String> {
    c.households()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, h)| h.id.clone())
        .collect()
}
