mod common;

use proptest::prelude::*;
use resched_core::makespan::{
    is_flatter_than_universal, optimal_makespan_value, waterfill_online, waterfill_step, UniversalSchedule,
    WaterfillOutcome, OPTIMAL_RATIO,
};
use resched_core::model::{is_flatter, makespan};
use resched_core::{Job, Schedule, StepFunction};

/// One job whose assignment is a non-increasing staircase.
fn staircase() -> impl Strategy<Value = Schedule> {
    prop::collection::vec((0.05f64..1.0, 0.1f64..2.0), 1..6).prop_map(|mut steps| {
        steps.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut grid = vec![0.0];
        let mut values = Vec::new();
        for (u, w) in steps {
            grid.push(grid.last().unwrap() + w);
            values.push(u);
        }
        Schedule::new(vec![StepFunction::from_grid(&grid, &values).unwrap()]).unwrap()
    })
}

fn new_job() -> impl Strategy<Value = Job> {
    (0.05f64..3.0, 0.05f64..=1.0).prop_map(|(v, r)| Job::new(v, r).unwrap())
}

/// `∫_0^C min(max(h - usage, 0), r)`.
fn poured(usage: &StepFunction, r: f64, h: f64, c: f64) -> f64 {
    let mut total = 0.0;
    let mut last = 0.0;
    for (a, b, u) in usage.intervals() {
        if a >= c {
            break;
        }
        total += (b.min(c) - a) * (h - u).clamp(0.0, r);
        last = b;
    }
    if last < c {
        total += (c - last) * h.clamp(0.0, r);
    }
    total
}

/// Composite Simpson on `[a, b]` with `m` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for k in 1..m {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

proptest! {
    #[test]
    fn wfstep_keeps_usage_a_staircase(s in staircase(), job in new_job(), slack in 1.0f64..3.0) {
        let usage = s.total_usage();
        let c = (usage.end() + job.processing_time()) * slack;
        let out = waterfill_step(&s, &job, c);
        if let WaterfillOutcome::Success { schedule, .. } = out {
            let vals = schedule.total_usage().values().to_vec();
            for w in vals.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-12, "{:?}", vals);
            }
        }
    }

    #[test]
    fn wfstep_preserves_flatness(s in staircase(), k in 1.0f64..3.0, job in new_job(), c in 0.5f64..12.0) {
        let f = s.assignment(0);
        let r = Schedule::new(vec![f.stretch(k).scale(1.0 / k)]).unwrap();
        prop_assume!(is_flatter(&r, &s, 1e-12));
        if let WaterfillOutcome::Success { schedule: s2, .. } = waterfill_step(&s, &job, c) {
            match waterfill_step(&r, &job, c) {
                WaterfillOutcome::Success { schedule: r2, .. } => prop_assert!(is_flatter(&r2, &s2, 1e-9)),
                WaterfillOutcome::Failure { deficit } => prop_assert!(false, "flatter schedule failed, deficit {deficit}"),
            }
        }
    }

    #[test]
    fn water_level_is_minimal(s in staircase(), job in new_job(), slack in 1.0f64..3.0) {
        let usage = s.total_usage();
        let c = (usage.end() + job.processing_time()) * slack;
        if let WaterfillOutcome::Success { schedule, level } = waterfill_step(&s, &job, c) {
            let got = schedule.assignment(1).integral();
            prop_assert!((got - job.volume()).abs() <= 1e-9 * job.volume());
            prop_assert!((poured(&usage, job.requirement(), level, c) - job.volume()).abs() <= 1e-9 * job.volume());
            if level > 1e-6 {
                prop_assert!(poured(&usage, job.requirement(), level - 1e-6, c) < job.volume());
            }
        }
    }

    #[test]
    fn online_prefixes_competitive_and_flat(jobs in common::jobs(1, 20)) {
        let run = waterfill_online(&jobs, OPTIMAL_RATIO);
        prop_assert!(run.succeeded());
        for j in 1..=jobs.len() {
            let prefix = jobs.prefix(j);
            let sched = run.prefix(j);
            prop_assert!(makespan(&sched) <= OPTIMAL_RATIO * optimal_makespan_value(&prefix) + 1e-9);
            let u = UniversalSchedule::new(prefix.total_volume());
            prop_assert!(is_flatter_than_universal(&sched.total_usage(), &u, 1e-9));
        }
    }

    #[test]
    fn universal_schedule_volume(v in 0.01f64..100.0) {
        let u = UniversalSchedule::new(v);
        let split = u.plateau_end();
        let end = std::f64::consts::E * v / (std::f64::consts::E - 1.0);
        let total = simpson(|t| u.eval(t), 0.0, split, 2) + simpson(|t| u.eval(t), split, end, 2000);
        prop_assert!(common::rel_err(total, v) <= 1e-8, "{total} vs {v}");
    }
}
