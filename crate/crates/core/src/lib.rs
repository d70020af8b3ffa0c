//! Cooperative peer-to-peer sharing of household energy storage under
//! time-of-use pricing and net metering.
//!
//! The library models a residential community in which each household owns a
//! storage unit, charges it off-peak and discharges it during the peak
//! window. Pooling the units forms a coalitional game with a subadditive
//! daily cost; the analytic allocation implemented in [`game`] lies in the
//! core of that game, and [`settlement`] produces the matching P2P trade
//! ledger. [`pipeline`] adds CSV ingestion, synthetic data generation and a
//! year-long simulation driver behind the `storshare` CLI.

pub mod cost;
pub mod game;
pub mod model;
pub mod pipeline;
pub mod settlement;
pub mod tariff;
pub mod tol;

#[cfg(test)]
pub(crate) mod testutil;

pub use cost::CostBreakdown;
pub use game::{Allocation, CoreReport, Regime, SubadditivityReport};
pub use model::{CoalitionView, CommunityDay, HouseholdDay};
pub use settlement::{SharingPrices, TradeLedger, TradePosition};
pub use tariff::Tariff;

/// Errors produced across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("tariff is invalid: {0}")]
    InvalidTariff(String),
    #[error("community must contain at least one household")]
    EmptyCommunity,
    #[error("duplicate household id `{0}`")]
    DuplicateHousehold(String),
    #[error("unknown household id `{0}`")]
    UnknownHousehold(String),
    #[error("coalition must be non-empty")]
    EmptyCoalition,
    #[error("household `{id}` has a non-finite or negative field `{field}`")]
    InvalidHousehold { id: String, field: &'static str },
    #[error(
        "community of {n} households exceeds the enumeration cap of {cap}; \
         use sampled core checking instead"
    )]
    EnumerationCapExceeded { n: usize, cap: usize },
    #[error("household sets do not match: {0}")]
    MismatchedHouseholds(String),
    #[error("{0}")]
    Data(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
