//! The slotted LP as a min-cost flow `source -> job -> slot -> sink`,
//! solved by successive shortest paths.
//!
//! Arc `job j -> slot k` has capacity `r_j δ` and cost `c_jk`, arc
//! `slot -> sink` capacity `δ`, and `source -> job j` capacity `target_j`.
//! Shortest paths alternate between jobs and slots, so Bellman-Ford runs on
//! the job layer only and converges in at most `n + 1` rounds. Duals come
//! from distances to the sink in the final residual graph.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub(crate) struct FlowProblem<'a, F: Fn(usize, usize) -> f64> {
    pub targets: &'a [f64],
    /// Per-job arc capacity `r_j δ`.
    pub arc_cap: &'a [f64],
    pub slot_cap: f64,
    pub slots: usize,
    /// `cost(j, k)`.
    pub cost: F,
}

pub(crate) struct FlowSolution {
    pub volumes: Vec<Vec<f64>>,
    pub alpha: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
    pub gamma: Vec<f64>,
}

#[derive(Clone, Copy)]
enum Pred {
    None,
    Source,
    Slot(usize),
}

pub(crate) fn solve<F: Fn(usize, usize) -> f64>(p: &FlowProblem<'_, F>) -> Result<FlowSolution> {
    let n = p.targets.len();
    let s = p.slots;
    let cost = &p.cost;
    let tiny = 1e-13 * p.slot_cap;
    let mut v = vec![vec![0.0f64; s]; n];
    let mut flow = vec![0.0f64; n];
    let mut load = vec![0.0f64; s];

    let mut d_job = vec![f64::INFINITY; n];
    let mut pred_job = vec![Pred::None; n];
    let mut d_slot = vec![f64::INFINITY; s];
    let mut pred_slot = vec![usize::MAX; s];
    let mut augmentations = 0usize;
    let demand: f64 = p.targets.iter().sum();
    let max_aug = 64 * (n + 1) * (s + 1) + 1000;

    loop {
        let remaining: f64 = p.targets.iter().zip(&flow).map(|(t, f)| t - f).sum();
        if remaining <= 1e-12 * demand.max(p.slot_cap) {
            break;
        }
        for j in 0..n {
            if p.targets[j] - flow[j] > tiny {
                d_job[j] = 0.0;
                pred_job[j] = Pred::Source;
            } else {
                d_job[j] = f64::INFINITY;
                pred_job[j] = Pred::None;
            }
        }
        d_slot.fill(f64::INFINITY);
        pred_slot.fill(usize::MAX);
        let mut rounds = 0;
        loop {
            rounds += 1;
            // labels only move on strict improvement, which keeps the
            // predecessor graph a tree
            for j in 0..n {
                if !d_job[j].is_finite() {
                    continue;
                }
                let open = p.arc_cap[j] - tiny;
                for k in 0..s {
                    if v[j][k] < open {
                        let cand = d_job[j] + cost(j, k);
                        if cand < d_slot[k] - 1e-12 * (1.0 + cand.abs()) {
                            d_slot[k] = cand;
                            pred_slot[k] = j;
                        }
                    }
                }
            }
            let mut changed = false;
            for j in 0..n {
                for k in 0..s {
                    if v[j][k] > tiny && d_slot[k].is_finite() {
                        let cand = d_slot[k] - cost(j, k);
                        if cand < d_job[j] - 1e-12 * (1.0 + cand.abs()) {
                            d_job[j] = cand;
                            pred_job[j] = Pred::Slot(k);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
            if rounds > n + 2 {
                return Err(Error::Solver("negative cycle in residual graph"));
            }
        }
        let end = (0..s)
            .filter(|&k| load[k] < p.slot_cap - tiny && d_slot[k].is_finite())
            .min_by(|&a, &b| d_slot[a].total_cmp(&d_slot[b]));
        let Some(end) = end else {
            return Err(Error::Infeasible("slot capacity cannot absorb the targets"));
        };

        // walk back, collecting (job, slot, forward?) hops
        let mut hops: Vec<(usize, usize, bool)> = Vec::new();
        let mut k = end;
        let start;
        loop {
            let j = pred_slot[k];
            hops.push((j, k, true));
            match pred_job[j] {
                Pred::Source => {
                    start = j;
                    break;
                }
                Pred::Slot(prev) => {
                    hops.push((j, prev, false));
                    k = prev;
                }
                Pred::None => return Err(Error::Solver("broken predecessor chain")),
            }
            if hops.len() > 2 * (n + 2) {
                return Err(Error::Solver("broken predecessor chain"));
            }
        }
        let mut amount = (p.slot_cap - load[end]).min(p.targets[start] - flow[start]);
        for &(j, k, fwd) in &hops {
            amount = amount.min(if fwd { p.arc_cap[j] - v[j][k] } else { v[j][k] });
        }
        if amount <= 0.0 {
            return Err(Error::Solver("zero-capacity augmenting path"));
        }
        for &(j, k, fwd) in &hops {
            if fwd {
                v[j][k] += amount;
                if p.arc_cap[j] - v[j][k] <= tiny {
                    v[j][k] = p.arc_cap[j];
                }
            } else {
                v[j][k] -= amount;
                if v[j][k] <= tiny {
                    v[j][k] = 0.0;
                }
            }
        }
        load[end] += amount;
        if p.slot_cap - load[end] <= tiny {
            load[end] = p.slot_cap;
        }
        flow[start] += amount;
        if p.targets[start] - flow[start] <= tiny {
            flow[start] = p.targets[start];
        }
        augmentations += 1;
        if augmentations > max_aug {
            return Err(Error::Solver("augmentation limit reached"));
        }
    }

    let (alpha, beta, gamma) = duals(p, &v, &load, tiny);
    Ok(FlowSolution { volumes: v, alpha, beta, gamma })
}

/// Distances to the sink; nodes that cannot reach it get a large finite
/// label through a virtual arc so all residual arcs keep non-negative
/// reduced cost.
fn duals<F: Fn(usize, usize) -> f64>(
    p: &FlowProblem<'_, F>,
    v: &[Vec<f64>],
    load: &[f64],
    tiny: f64,
) -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
    let n = p.targets.len();
    let s = p.slots;
    let cost = &p.cost;
    let cmax = (0..n)
        .flat_map(|j| [cost(j, 0), cost(j, s.saturating_sub(1))])
        .fold(0.0f64, |a, c| a.max(c.abs()));
    let big = 4.0 * cmax * (n as f64 + 2.0) + 1.0;
    let mut l_job = vec![big; n];
    let mut l_slot: Vec<f64> = load.iter().map(|&x| if x < p.slot_cap - tiny { 0.0 } else { big }).collect();
    for _ in 0..2 * n + 4 {
        let mut changed = false;
        for j in 0..n {
            for k in 0..s {
                if v[j][k] < p.arc_cap[j] - tiny {
                    let cand = cost(j, k) + l_slot[k];
                    if cand < l_job[j] - 1e-13 * (1.0 + cand.abs()) {
                        l_job[j] = cand;
                        changed = true;
                    }
                }
            }
        }
        for k in 0..s {
            for j in 0..n {
                if v[j][k] > tiny {
                    let cand = l_job[j] - cost(j, k);
                    if cand < l_slot[k] - 1e-13 * (1.0 + cand.abs()) {
                        l_slot[k] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let alpha: Vec<f64> = l_job.iter().map(|x| x.max(0.0)).collect();
    let gamma: Vec<f64> = l_slot.iter().map(|x| x.max(0.0)).collect();
    let beta = (0..n)
        .map(|j| (0..s).map(|k| (alpha[j] - gamma[k] - cost(j, k)).max(0.0)).collect())
        .collect();
    (alpha, beta, gamma)
}
