//! Experiment engine around the transversal solver: random and extremal
//! instance generators, target-graph families, and threshold sweeps that
//! tally solver outcomes per grid cell into CSV.

pub mod config;
pub mod error;
pub mod extremal;
pub mod instance;
pub mod sweep;
pub mod target;

pub use error::{HarnessError, Result};
pub use extremal::{extremal_instance, ExtremalKind};
pub use instance::{gen_collection, InstanceSpec, LayerModel};
pub use sweep::{threshold_sweep, SweepConfig, SweepRow, TrialResult};
pub use target::{gen_target, Family, GeneratedTarget, TargetSpec};
