#![allow(dead_code)]

use proptest::prelude::*;
use resched_core::{Job, JobSet};

/// Volumes log-uniform on `[0.1, 10]`, requirements on `[0.05, 1]`, ties
/// perturbed apart.
pub fn jobs(min_n: usize, max_n: usize) -> impl Strategy<Value = JobSet> {
    prop::collection::vec((-1.0f64..1.0, 0.05f64..=1.0), min_n..=max_n).prop_map(|raw| {
        let jobs = raw.into_iter().map(|(e, r)| Job::new(10f64.powf(e), r).unwrap()).collect();
        JobSet::new(jobs).perturb_ties()
    })
}

pub fn rel_err(x: f64, want: f64) -> f64 {
    (x - want).abs() / want.abs().max(1e-300)
}
