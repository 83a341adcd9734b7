//! Monte-Carlo simulation harness for the `polar` crate: configured BLER
//! sweeps, PMP-table collection, and sorter-complexity reports, all with
//! deterministic, worker-count-invariant results and frozen CSV schemas.

pub mod config;
pub mod report;
pub mod run;

pub use config::{ConfigError, DecoderKind, PmpBox, RawConfig, SimConfig};
pub use report::{cas_table, write_bler_csv, write_boxes_csv, write_cas_csv, CasRow};
pub use run::{
    clopper_pearson_95, run_bler_sweep, run_pmp_collection, PmpReport, PointRecord, SimError,
};

/// All node classes, in table order, for aggregate PMP reporting.
pub const ALL_NODE_CLASSES: [polar::decode::NodeClass; 4] = [
    polar::decode::NodeClass::Rate0,
    polar::decode::NodeClass::Rate1,
    polar::decode::NodeClass::Spc,
    polar::decode::NodeClass::Generic,
];
