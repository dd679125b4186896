//! Audit plumbing on top of `vdc-core`: kernel names, single-cell audits,
//! JSON records, and deterministic parameter-grid sweeps.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod defaults;
pub mod error;
pub mod grid;
pub mod kernel_spec;
pub mod record;

pub use error::{AuditError, AuditResult};
pub use grid::{run_grid, GridSpec};
pub use kernel_spec::KernelSpec;
pub use record::{audit_cell, beta_seed, CellSpec, Record};
