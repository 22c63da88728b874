//! Runs one algorithm on one instance and fills a [`RunRecord`].

use std::str::FromStr;
use std::time::Instant;

use resched_core::makespan::{
    extendability_check_tol, is_flatter_than_universal, optimal_makespan_value, waterfill_online,
    UniversalSchedule, OPTIMAL_RATIO,
};
use resched_core::model::{fractional_completion_time, makespan, total_completion_time, validate_schedule};
use resched_core::tct::{
    best_schedule, greedy, ls_exact_line, lower_bounds, lsapprox, Candidate, LsApproxParams, LS_VOL_TOL,
};
use resched_core::{JobSet, Schedule, ViolationKind};
use serde_json::json;

use crate::report::{BoundsRecord, FailureRecord, ParamsRecord, RunRecord, ValidationRecord, ViolationRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Waterfill,
    Greedy,
    Ls,
    Lsapprox,
    Best,
}

impl Algo {
    pub const ALL: [Algo; 5] = [Algo::Waterfill, Algo::Greedy, Algo::Ls, Algo::Lsapprox, Algo::Best];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Waterfill => "waterfill",
            Algo::Greedy => "greedy",
            Algo::Ls => "ls",
            Algo::Lsapprox => "lsapprox",
            Algo::Best => "best",
        }
    }
}

impl FromStr for Algo {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected waterfill, greedy, ls, lsapprox or best)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunParams {
    pub eps: f64,
    /// Overrides `κ` so that `μ = mu` (still rounded to `1/k`).
    pub mu: Option<f64>,
    /// WaterFill ratio; `e/(e-1)` when absent.
    pub c: Option<f64>,
    pub delta: Option<f64>,
    pub tol: f64,
    pub grid: usize,
    pub exact_ls: bool,
    pub seed: Option<u64>,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams { eps: 1.0, mu: None, c: None, delta: None, tol: 1e-9, grid: 64, exact_ls: true, seed: None }
    }
}

impl RunParams {
    pub fn lsapprox_params(&self) -> LsApproxParams {
        let mut p = LsApproxParams::new(self.eps);
        if let Some(mu) = self.mu {
            p.kappa = mu / self.eps;
        }
        p.delta_override = self.delta;
        p
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(format!("--eps must be positive, got {}", self.eps));
        }
        if let Some(mu) = self.mu {
            if !(mu > 0.0 && mu < 1.0) {
                return Err(format!("--mu must lie in (0, 1), got {mu}"));
            }
        }
        if let Some(c) = self.c {
            if !(c.is_finite() && c >= 1.0) {
                return Err(format!("--c must be at least 1, got {c}"));
            }
        }
        if let Some(d) = self.delta {
            if !(d.is_finite() && d > 0.0) {
                return Err(format!("--delta must be positive, got {d}"));
            }
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(format!("--tol must be non-negative, got {}", self.tol));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub record: RunRecord,
    pub schedule: Option<Schedule>,
    /// α of a line schedule, for the plot overlay.
    pub alpha: Option<Vec<f64>>,
}

impl RunOutput {
    pub fn algorithm_failed(&self) -> bool {
        self.record.failure.is_some()
    }

    pub fn validation_failed(&self) -> bool {
        self.record.validation.as_ref().is_some_and(|v| !v.feasible)
    }
}

fn kind_name(k: ViolationKind) -> &'static str {
    match k {
        ViolationKind::Overuse => "overuse",
        ViolationKind::RequirementExceeded => "requirement_exceeded",
        ViolationKind::VolumeDeficit => "volume_deficit",
    }
}

fn failure(kind: &str, message: String, index: Option<usize>) -> Option<FailureRecord> {
    Some(FailureRecord { kind: kind.into(), message, index })
}

pub fn run(algo: Algo, instance: &str, jobs: &JobSet, params: &RunParams) -> RunOutput {
    let start = Instant::now();
    let mut rec = RunRecord::new(instance, algo.name(), jobs.len());
    rec.seed = params.seed;
    let lsp = params.lsapprox_params();
    let c = params.c.unwrap_or(OPTIMAL_RATIO);
    rec.params = ParamsRecord {
        eps: params.eps,
        mu: lsp.mu().unwrap_or(f64::NAN),
        c,
        tol: params.tol,
        grid: params.grid,
        exact_ls: params.exact_ls,
        ..Default::default()
    };

    let mut alpha = None;
    let mut ls_fractional = None;
    let schedule: Option<Schedule> = match algo {
        Algo::Waterfill => {
            let run = waterfill_online(jobs, c);
            if let Some(f) = run.failure {
                rec.failure = failure(
                    "algorithm",
                    format!("WaterFill with c = {c} cannot place job {} (deficit {:e})", f.index, f.deficit),
                    Some(f.index),
                );
                rec.details.insert("placed".into(), json!(run.placed()));
                None
            } else {
                let usage = run.schedule.total_usage();
                let u = UniversalSchedule::new(jobs.total_volume());
                rec.details.insert("flatter_than_universal".into(), json!(is_flatter_than_universal(&usage, &u, params.tol)));
                rec.details.insert(
                    "extendable".into(),
                    json!(extendability_check_tol(&usage, jobs, c, params.grid, params.tol)),
                );
                Some(run.schedule)
            }
        }
        Algo::Greedy => Some(greedy(jobs)),
        Algo::Ls => match ls_exact_line(jobs, LS_VOL_TOL) {
            Ok(ls) => {
                alpha = Some(ls.alpha.to_vec());
                Some(ls.schedule)
            }
            Err(e) => {
                rec.failure = failure("algorithm", format!("LS: {e}"), None);
                None
            }
        },
        Algo::Lsapprox => match lsapprox(jobs, &lsp) {
            Ok(out) => {
                rec.params.mu = out.mu;
                rec.params.delta = Some(out.delta);
                rec.params.horizon = Some(out.horizon);
                rec.params.guarantee_delta = Some(out.guarantee_delta);
                rec.details.insert("stretch".into(), json!(out.stretch));
                rec.details.insert(
                    "subdivision".into(),
                    json!({
                        "light": out.subdivision.light,
                        "short_heavy": out.subdivision.short_heavy,
                        "long_heavy": out.subdivision.long_heavy,
                    }),
                );
                Some(out.schedule)
            }
            Err(e) => {
                rec.failure = failure("algorithm", format!("LSApprox: {e}"), None);
                None
            }
        },
        Algo::Best => {
            let (s, rep) = best_schedule(jobs, &lsp, params.exact_ls);
            let winner = match rep.winner {
                Candidate::Greedy => "greedy",
                Candidate::LineSchedule => "ls",
            };
            rec.details.insert("winner".into(), json!(winner));
            rec.details.insert("greedy_tct".into(), json!(rep.greedy_tct));
            if let Some(t) = rep.ls_tct {
                rec.details.insert("ls_tct".into(), json!(t));
            }
            if let Some(e) = &rep.ls_error {
                rec.details.insert("ls_error".into(), json!(e.to_string()));
            }
            ls_fractional = rep.ls_fractional;
            Some(s)
        }
    };

    // LB3 needs the fractional objective of the exact line schedule
    if ls_fractional.is_none() {
        ls_fractional = ls_exact_line(jobs, LS_VOL_TOL)
            .ok()
            .and_then(|ls| fractional_completion_time(jobs, &ls.schedule).ok())
            .map(|(_, f)| f);
    }
    let b = lower_bounds(jobs, ls_fractional);
    rec.bounds =
        BoundsRecord { m_star: optimal_makespan_value(jobs), c_a: b.c_a, c_l: b.c_l, lb3: b.lb3, best: b.best };

    if let Some(s) = &schedule {
        rec.makespan = Some(makespan(s));
        rec.tct = Some(total_completion_time(s));
        rec.ftct = fractional_completion_time(jobs, s).ok().map(|(_, f)| f);
        match validate_schedule(jobs, s, params.tol) {
            Ok(rep) => {
                rec.validation = Some(ValidationRecord {
                    feasible: rep.feasible,
                    violations: rep
                        .violations
                        .iter()
                        .map(|v| ViolationRecord {
                            kind: kind_name(v.kind).into(),
                            job: v.job,
                            interval: v.interval,
                            magnitude: v.magnitude,
                        })
                        .collect(),
                });
            }
            Err(e) => rec.failure = failure("validation", e.to_string(), None),
        }
        rec.set_ratio("makespan/m_star", rec.makespan, Some(rec.bounds.m_star));
        rec.set_ratio("tct/best", rec.tct, Some(rec.bounds.best));
        rec.set_ratio("tct/c_a", rec.tct, Some(rec.bounds.c_a));
        rec.set_ratio("tct/c_l", rec.tct, Some(rec.bounds.c_l));
        rec.set_ratio("tct/lb3", rec.tct, rec.bounds.lb3);
    }
    rec.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    RunOutput { record: rec, schedule, alpha }
}
