//! Data ingestion, synthetic load generation, the year-long simulation
//! driver and report emission.

mod config;
mod ingest;
mod report;
mod simulate;
mod synth;

pub use config::{HouseholdSpec, PeakWindow, SimulationConfig};
pub use ingest::{
    ingest_csv, read_capacities_csv, write_capacities_csv, write_loads_csv, HourlyLoadRecord,
    IngestSummary, LoadTable,
};
pub use report::emit_report;
pub use simulate::{
    simulate, split_day, AnnualReport, CommunityTotals, DaySummary, HouseholdAnnual,
};
pub use synth::{generate_synthetic, SyntheticDataset};
