//! Scheduling jobs that share a single continuous resource.
//!
//! Every job `j` has a processing volume `v_j` and a resource requirement
//! `r_j ∈ (0, 1]`. A schedule assigns each job a piecewise-constant share
//! `R_j(t)` of the unit resource; the job may never receive more than `r_j`
//! and the shares may never sum above one.
//!
//! The crate provides:
//!
//! - [`model`]: jobs, schedules, feasibility validation and objectives
//!   (makespan, total and fractional completion time, upper resource
//!   distribution and the flatness preorder).
//! - [`makespan`]: the offline optimum, water-filling steps, the online
//!   WaterFill algorithm, universal schedules and extendability checks.
//! - [`linesched`]: dual lines, line schedules built from a priority vector,
//!   the fixed-point solver for target volumes and duality bookkeeping.
//! - [`lp`]: the time-slotted linear program with a dense simplex and a
//!   network-flow solver, both returning primal and dual solutions.
//! - [`tct`]: Greedy, the lower bounds, exact line schedules, LSApprox and
//!   the best-of combination for total completion time.
//!
//! The crate is `no_std` (it needs `alloc`); enable the `std` feature to get
//! `std::error::Error` impls.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod func;
pub mod linesched;
pub mod lp;
pub mod makespan;
pub mod model;
pub mod tct;

mod num;

pub use error::{Error, Result};
pub use func::{PiecewiseLinear, StepFunction};
pub use model::{Job, JobSet, Schedule, ValidationReport, Violation, ViolationKind};

/// Default absolute tolerance used by validators and comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;
