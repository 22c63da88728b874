//! The time-slotted linear program for fractional completion time.
//!
//! Time `[0, T)` is cut into `S = T/δ` slots; `V_{j,k}` is the volume of job
//! `j` in slot `k`, charged at the slot midpoint:
//!
//! ```text
//! min  Σ_j Σ_k V_{j,k} (k + 1/2) δ / v_j
//! s.t. Σ_k V_{j,k} >= target_j      (α_j)
//!      V_{j,k} <= r_j δ             (β_{j,k})
//!      Σ_j V_{j,k} <= δ             (γ_k)
//! ```
//!
//! Small instances go to a dense simplex, larger ones to a min-cost-flow
//! solver; both report optimal duals.

pub mod simplex;
mod flow;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::func::StepFunction;
use crate::model::{JobSet, Schedule};
use crate::num::{round, stable_sum};
use simplex::{LinearProgram, Relation};

/// Instances with at most this many variables are solved by the simplex
/// under [`LpMethod::Auto`].
pub const SIMPLEX_MAX_VARIABLES: usize = 200;

/// Pivot budget for the simplex.
pub const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LpInstance {
    jobs: JobSet,
    targets: Vec<f64>,
    horizon: f64,
    delta: f64,
    slots: usize,
}

/// `n · p_max`, the smallest horizon that can hold every job at full
/// volume under any reasonable schedule.
pub fn guarantee_horizon(jobs: &JobSet) -> f64 {
    jobs.len() as f64 * jobs.max_processing_time()
}

/// Builds the slotted LP. `δ` must divide `T` up to a relative `1e-9`.
pub fn build_discretized_lp(jobs: &JobSet, targets: &[f64], horizon: f64, delta: f64) -> Result<LpInstance> {
    if targets.len() != jobs.len() {
        return Err(Error::LengthMismatch { expected: jobs.len(), found: targets.len() });
    }
    if targets.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidParameter("targets must be finite and non-negative"));
    }
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidParameter("horizon must be positive"));
    }
    if !(delta.is_finite() && delta > 0.0 && delta <= horizon * (1.0 + 1e-9)) {
        return Err(Error::InvalidParameter("slot width must lie in (0, T]"));
    }
    let ratio = horizon / delta;
    let slots = round(ratio);
    if (slots * delta - horizon).abs() > 1e-9 * horizon || slots < 1.0 {
        return Err(Error::InvalidParameter("slot width must divide the horizon"));
    }
    Ok(LpInstance {
        jobs: jobs.clone(),
        targets: targets.to_vec(),
        horizon,
        delta,
        slots: slots as usize,
    })
}

impl LpInstance {
    pub fn jobs(&self) -> &JobSet {
        &self.jobs
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn num_variables(&self) -> usize {
        self.jobs.len() * self.slots
    }

    pub fn slot_mid(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.delta
    }

    pub fn cost(&self, j: usize, k: usize) -> f64 {
        self.slot_mid(k) / self.jobs.jobs()[j].volume()
    }

    /// Slot boundaries `0, δ, ..., Sδ`.
    pub fn slot_grid(&self) -> Vec<f64> {
        (0..=self.slots).map(|k| k as f64 * self.delta).collect()
    }

    /// Σ targets ≤ T and target_j ≤ r_j T, which together are necessary and
    /// sufficient.
    pub fn check_feasible(&self) -> Result<()> {
        let slack = 1.0 + 1e-12;
        if stable_sum(self.targets.iter().copied()) > self.horizon * slack {
            return Err(Error::Infeasible("total target exceeds the horizon"));
        }
        for (t, j) in self.targets.iter().zip(self.jobs.iter()) {
            if *t > j.requirement() * self.horizon * slack {
                return Err(Error::Infeasible("a target exceeds r_j times the horizon"));
            }
        }
        Ok(())
    }

    fn var(&self, j: usize, k: usize) -> usize {
        j * self.slots + k
    }

    /// Dense form: demand rows, then box rows, then capacity rows.
    pub fn to_linear_program(&self) -> LinearProgram {
        let n = self.jobs.len();
        let nv = self.num_variables();
        let mut objective = vec![0.0; nv];
        for j in 0..n {
            for k in 0..self.slots {
                objective[self.var(j, k)] = self.cost(j, k);
            }
        }
        let mut lp = LinearProgram::new(objective);
        for j in 0..n {
            let mut row = vec![0.0; nv];
            for k in 0..self.slots {
                row[self.var(j, k)] = 1.0;
            }
            lp.push(row, Relation::Ge, self.targets[j]);
        }
        for (j, job) in self.jobs.iter().enumerate() {
            for k in 0..self.slots {
                let mut row = vec![0.0; nv];
                row[self.var(j, k)] = 1.0;
                lp.push(row, Relation::Le, job.requirement() * self.delta);
            }
        }
        for k in 0..self.slots {
            let mut row = vec![0.0; nv];
            for j in 0..n {
                row[self.var(j, k)] = 1.0;
            }
            lp.push(row, Relation::Le, self.delta);
        }
        lp
    }

    /// Plain-text dump: objective line, then one line per constraint in the
    /// order demand, box, capacity. Variables are named `V<j>_<k>`.
    pub fn write_debug<W: fmt::Write>(&self, w: &mut W) -> fmt::Result {
        let n = self.jobs.len();
        write!(w, "min:")?;
        for j in 0..n {
            for k in 0..self.slots {
                write!(w, " {:?} V{j}_{k}", self.cost(j, k))?;
            }
        }
        writeln!(w)?;
        for j in 0..n {
            write!(w, "demand{j}:")?;
            for k in 0..self.slots {
                write!(w, " V{j}_{k}")?;
            }
            writeln!(w, " >= {:?}", self.targets[j])?;
        }
        for (j, job) in self.jobs.iter().enumerate() {
            for k in 0..self.slots {
                writeln!(w, "box{j}_{k}: V{j}_{k} <= {:?}", job.requirement() * self.delta)?;
            }
        }
        for k in 0..self.slots {
            write!(w, "cap{k}:")?;
            for j in 0..n {
                write!(w, " V{j}_{k}")?;
            }
            writeln!(w, " <= {:?}", self.delta)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// `volumes[j][k] = V_{j,k}`.
    pub volumes: Vec<Vec<f64>>,
    pub objective: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
    pub gamma: Vec<f64>,
}

impl LpSolution {
    /// `Σ α_j target_j - Σ r_j δ Σ_k β_{j,k} - δ Σ_k γ_k`.
    pub fn dual_objective(&self, inst: &LpInstance) -> f64 {
        let d = inst.delta;
        let mut parts = Vec::with_capacity(inst.num_variables() + inst.slots + inst.jobs.len());
        for (j, job) in inst.jobs.iter().enumerate() {
            parts.push(self.alpha[j] * inst.targets[j]);
            parts.extend(self.beta[j].iter().map(|b| -job.requirement() * d * b));
        }
        parts.extend(self.gamma.iter().map(|g| -d * g));
        stable_sum(parts)
    }

    /// `|primal - dual| / max(1, |primal|)`.
    pub fn duality_gap(&self, inst: &LpInstance) -> f64 {
        (self.objective - self.dual_objective(inst)).abs() / self.objective.abs().max(1.0)
    }

    /// Largest violation of the demand, box, capacity and sign constraints.
    pub fn primal_violation(&self, inst: &LpInstance) -> f64 {
        let mut worst = 0.0f64;
        for (j, job) in inst.jobs.iter().enumerate() {
            let total = stable_sum(self.volumes[j].iter().copied());
            worst = worst.max(inst.targets[j] - total);
            for &x in &self.volumes[j] {
                worst = worst.max(-x).max(x - job.requirement() * inst.delta);
            }
        }
        for k in 0..inst.slots {
            let load: f64 = self.volumes.iter().map(|v| v[k]).sum();
            worst = worst.max(load - inst.delta);
        }
        worst
    }

    /// Largest violation of `γ_k + β_{j,k} >= α_j - c_{j,k}` and of
    /// non-negativity.
    pub fn dual_violation(&self, inst: &LpInstance) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..inst.jobs.len() {
            worst = worst.max(-self.alpha[j]);
            for k in 0..inst.slots {
                let b = self.beta[j][k];
                worst = worst.max(-b).max(self.alpha[j] - inst.cost(j, k) - b - self.gamma[k]);
            }
        }
        for &g in &self.gamma {
            worst = worst.max(-g);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LpMethod {
    /// Simplex up to [`SIMPLEX_MAX_VARIABLES`] variables, network flow above.
    #[default]
    Auto,
    Simplex,
    NetworkFlow,
}

pub fn solve_lp(inst: &LpInstance) -> Result<LpSolution> {
    solve_lp_with(inst, LpMethod::Auto)
}

pub fn solve_lp_with(inst: &LpInstance, method: LpMethod) -> Result<LpSolution> {
    inst.check_feasible()?;
    let n = inst.jobs.len();
    if n == 0 {
        return Ok(LpSolution {
            volumes: Vec::new(),
            objective: 0.0,
            alpha: Vec::new(),
            beta: Vec::new(),
            gamma: vec![0.0; inst.slots],
        });
    }
    let method = match method {
        LpMethod::Auto if inst.num_variables() <= SIMPLEX_MAX_VARIABLES => LpMethod::Simplex,
        LpMethod::Auto => LpMethod::NetworkFlow,
        m => m,
    };
    let (volumes, alpha, beta, gamma) = match method {
        LpMethod::Simplex => {
            let sol = inst.to_linear_program().solve(MAX_PIVOTS)?;
            let s = inst.slots;
            let volumes = (0..n).map(|j| sol.x[j * s..(j + 1) * s].to_vec()).collect();
            let alpha = sol.duals[..n].iter().map(|y| y.max(0.0)).collect();
            let beta = (0..n)
                .map(|j| sol.duals[n + j * s..n + (j + 1) * s].iter().map(|y| (-y).max(0.0)).collect())
                .collect();
            let gamma = sol.duals[n + n * s..].iter().map(|y| (-y).max(0.0)).collect();
            (volumes, alpha, beta, gamma)
        }
        _ => {
            let caps: Vec<f64> = inst.jobs.iter().map(|j| j.requirement() * inst.delta).collect();
            let inv: Vec<f64> = inst.jobs.iter().map(|j| 1.0 / j.volume()).collect();
            let delta = inst.delta;
            let sol = flow::solve(&flow::FlowProblem {
                targets: &inst.targets,
                arc_cap: &caps,
                slot_cap: delta,
                slots: inst.slots,
                cost: |j: usize, k: usize| (k as f64 + 0.5) * delta * inv[j],
            })?;
            (sol.volumes, sol.alpha, sol.beta, sol.gamma)
        }
    };
    let objective = primal_objective(inst, &volumes);
    Ok(LpSolution { volumes, objective, alpha, beta, gamma })
}

fn primal_objective(inst: &LpInstance, volumes: &[Vec<f64>]) -> f64 {
    stable_sum(
        volumes
            .iter()
            .enumerate()
            .flat_map(|(j, row)| row.iter().enumerate().map(move |(k, x)| x * inst.cost(j, k))),
    )
}

/// Realizes slotted volumes at constant rate `V_{j,k}/δ` inside slot `k`.
pub fn lp_schedule(inst: &LpInstance, sol: &LpSolution) -> Result<Schedule> {
    let grid = inst.slot_grid();
    let assignments = sol
        .volumes
        .iter()
        .zip(inst.jobs.iter())
        .map(|(row, job)| {
            let rates: Vec<f64> =
                row.iter().map(|x| (x / inst.delta).clamp(0.0, job.requirement())).collect();
            StepFunction::from_grid(&grid, &rates)
        })
        .collect::<Result<Vec<_>>>()?;
    Schedule::new(assignments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;

    fn unit() -> JobSet {
        JobSet::from_pairs(&[(1.0, 1.0)]).unwrap()
    }

    #[test]
    fn structure_of_single_job() {
        let inst = build_discretized_lp(&unit(), &[1.0], 1.0, 0.25).unwrap();
        assert_eq!(inst.slots(), 4);
        assert_eq!(inst.num_variables(), 4);
        let lp = inst.to_linear_program();
        assert_eq!(lp.rows.len(), 1 + 4 + 4);
        assert_eq!(lp.rows[0].relation, Relation::Ge);
        assert_eq!(lp.rows[0].rhs, 1.0);
        assert_eq!(lp.rows[8].rhs, 0.25);
        assert_eq!(inst.cost(0, 0), 0.125);
    }

    #[test]
    fn slot_width_must_divide_horizon() {
        assert!(build_discretized_lp(&unit(), &[1.0], 1.0, 0.3).is_err());
        assert!(build_discretized_lp(&unit(), &[1.0], 1.0, 0.0).is_err());
        assert!(build_discretized_lp(&unit(), &[1.0, 2.0], 1.0, 0.5).is_err());
        assert!(build_discretized_lp(&unit(), &[1.0], 1.0, 0.1).is_ok());
    }

    #[test]
    fn three_job_horizon() {
        let jobs = JobSet::from_pairs(&[(1.0, 0.75), (4.0, 0.5), (6.0, 2.0 / 3.0)]).unwrap();
        assert!((guarantee_horizon(&jobs) - 27.0).abs() < 1e-12);
    }

    #[test]
    fn empty_instance() {
        let inst = build_discretized_lp(&JobSet::new(Vec::new()), &[], 1.0, 0.5).unwrap();
        assert_eq!(inst.num_variables(), 0);
        let sol = solve_lp(&inst).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(lp_schedule(&inst, &sol).unwrap().is_empty());
    }

    #[test]
    fn single_job_fills_every_slot() {
        for method in [LpMethod::Simplex, LpMethod::NetworkFlow] {
            let inst = build_discretized_lp(&unit(), &[1.0], 1.0, 0.25).unwrap();
            let sol = solve_lp_with(&inst, method).unwrap();
            assert!((sol.objective - 0.5).abs() < 1e-12);
            for x in &sol.volumes[0] {
                assert!((x - 0.25).abs() < 1e-12);
            }
            assert!(sol.duality_gap(&inst) < 1e-12);
            let s = lp_schedule(&inst, &sol).unwrap();
            assert_eq!(s.assignment(0).values(), &[1.0]);
            assert_eq!(s.assignment(0).end(), 1.0);
        }
    }

    #[test]
    fn single_job_packs_early() {
        for method in [LpMethod::Simplex, LpMethod::NetworkFlow] {
            let inst = build_discretized_lp(&unit(), &[1.0], 2.0, 0.5).unwrap();
            let sol = solve_lp_with(&inst, method).unwrap();
            assert!((sol.objective - 0.5).abs() < 1e-12);
            assert!((sol.volumes[0][0] - 0.5).abs() < 1e-12);
            assert!((sol.volumes[0][1] - 0.5).abs() < 1e-12);
            assert!(sol.volumes[0][2].abs() < 1e-12);
            assert!(sol.dual_violation(&inst) < 1e-12);
            assert!(sol.duality_gap(&inst) < 1e-12);
        }
    }

    #[test]
    fn zero_targets() {
        let jobs = JobSet::from_pairs(&[(1.0, 1.0), (2.0, 0.5)]).unwrap();
        let inst = build_discretized_lp(&jobs, &[0.0, 0.0], 2.0, 0.5).unwrap();
        for method in [LpMethod::Simplex, LpMethod::NetworkFlow] {
            let sol = solve_lp_with(&inst, method).unwrap();
            assert_eq!(sol.objective, 0.0);
            assert!(sol.volumes.iter().flatten().all(|x| *x == 0.0));
        }
    }

    #[test]
    fn infeasible_targets() {
        let jobs = JobSet::from_pairs(&[(1.0, 0.5)]).unwrap();
        let inst = build_discretized_lp(&jobs, &[1.0], 1.0, 0.5).unwrap();
        assert!(matches!(solve_lp(&inst), Err(Error::Infeasible(_))));
    }

    #[test]
    fn two_jobs_methods_agree() {
        let jobs = JobSet::from_pairs(&[(1.0, 0.75), (2.5, 0.5)]).unwrap();
        let inst = build_discretized_lp(&jobs, &[1.0, 2.5], 10.0, 0.5).unwrap();
        let a = solve_lp_with(&inst, LpMethod::Simplex).unwrap();
        let b = solve_lp_with(&inst, LpMethod::NetworkFlow).unwrap();
        assert!((a.objective - b.objective).abs() < 1e-10);
        for sol in [&a, &b] {
            assert!(sol.primal_violation(&inst) < 1e-12);
            assert!(sol.dual_violation(&inst) < 1e-10);
            assert!(sol.duality_gap(&inst) < 1e-10);
        }
    }

    #[test]
    fn debug_dump_order() {
        let inst = build_discretized_lp(&unit(), &[1.0], 1.0, 0.5).unwrap();
        let mut s = String::new();
        inst.write_debug(&mut s).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "min: 0.25 V0_0 0.75 V0_1");
        assert_eq!(lines[1], "demand0: V0_0 V0_1 >= 1.0");
        assert_eq!(lines[2], "box0_0: V0_0 <= 0.5");
        assert_eq!(lines[4], "cap0: V0_0 <= 0.5");
        assert_eq!(lines.len(), 6);
    }
}
