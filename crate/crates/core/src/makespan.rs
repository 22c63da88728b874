//! Makespan: the offline optimum, water-filling, the online WaterFill
//! algorithm, universal schedules and extendability.

use alloc::vec;
use alloc::vec::Vec;

use crate::func::StepFunction;
use crate::model::{Job, JobSet, Schedule};
use crate::num::{exp, ln, E, E_RATIO};

/// `e / (e - 1)`.
pub const OPTIMAL_RATIO: f64 = E_RATIO;

/// Relative volume slack accepted when deciding whether a water-filling step
/// can complete its job.
pub const WATERFILL_TOL: f64 = 1e-9;

/// `M*(J) = max(V(J), max_j p_j)`.
pub fn optimal_makespan_value(jobs: &JobSet) -> f64 {
    jobs.total_volume().max(jobs.max_processing_time())
}

/// The optimal makespan together with a schedule attaining it: every job
/// runs at the constant rate `v_j / M*` on `[0, M*)`.
pub fn optimal_makespan(jobs: &JobSet) -> (f64, Schedule) {
    let m = optimal_makespan_value(jobs);
    if jobs.is_empty() {
        return (0.0, Schedule::default());
    }
    let assignments = jobs
        .iter()
        .map(|job| StepFunction::from_grid(&[0.0, m], &[job.volume() / m]).expect("finite rate"))
        .collect();
    (m, Schedule::new(assignments).expect("non-negative rates"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum WaterfillOutcome {
    /// The job fits; `schedule` is the input with the new job appended and
    /// `level` is the water level `h*` it was poured to.
    Success { schedule: Schedule, level: f64 },
    /// Even `h = 1` leaves the job short by `deficit` volume.
    Failure { deficit: f64 },
}

impl WaterfillOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, WaterfillOutcome::Success { .. })
    }
}

/// Result of pouring a job into a usage profile.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Pour {
    pub assignment: StepFunction,
    pub level: f64,
}

/// Intervals of `usage` restricted to `[0, c)`, with the idle tail up to `c`.
fn pieces_before(usage: &StepFunction, c: f64) -> Vec<(f64, f64, f64)> {
    let mut out: Vec<(f64, f64, f64)> = usage
        .intervals()
        .take_while(|&(a, _, _)| a < c)
        .map(|(a, b, u)| (a, b.min(c), u))
        .collect();
    let tail = usage.end();
    if tail < c {
        out.push((tail, c, 0.0));
    }
    out
}

fn poured_volume(pieces: &[(f64, f64, f64)], r: f64, h: f64) -> f64 {
    crate::num::stable_sum(pieces.iter().map(|&(a, b, u)| (b - a) * (h - u).clamp(0.0, r)))
}

/// Pours a job of requirement `r` and volume `v` into the free space under
/// level `h*` before time `c`. `Err(deficit)` when `h = 1` is not enough.
pub(crate) fn pour(usage: &StepFunction, job: &Job, c: f64) -> Result<Pour, f64> {
    let (v, r) = (job.volume(), job.requirement());
    if c.is_nan() || c <= 0.0 {
        return Err(v);
    }
    let pieces = pieces_before(usage, c);
    let capacity = poured_volume(&pieces, r, 1.0);
    if capacity < v * (1.0 - WATERFILL_TOL) {
        return Err(v - capacity);
    }
    // volume(h) is continuous, non-decreasing and piecewise linear with kinks
    // at usage levels u and u + r; locate h* exactly among them.
    let mut levels: Vec<f64> = vec![0.0, 1.0];
    for &(_, _, u) in &pieces {
        for cand in [u, u + r] {
            if cand > 0.0 && cand < 1.0 {
                levels.push(cand);
            }
        }
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut level = 1.0;
    let mut prev = (0.0, 0.0);
    for &h in &levels {
        let vol = poured_volume(&pieces, r, h);
        if vol >= v {
            let (h0, v0) = prev;
            level = if vol > v0 { h0 + (v - v0) / (vol - v0) * (h - h0) } else { h };
            break;
        }
        prev = (h, vol);
    }
    let level = level.min(1.0);
    let grid: Vec<f64> = core::iter::once(0.0).chain(pieces.iter().map(|p| p.1)).collect();
    let rates: Vec<f64> = pieces.iter().map(|&(_, _, u)| (level - u).clamp(0.0, r)).collect();
    let assignment = StepFunction::from_grid(&grid, &rates).expect("finite grid");
    Ok(Pour { assignment, level })
}

/// `WFstep(R, ι, C)`: augments `sched` by `job` so that it completes by `c`
/// without touching the existing assignments, pouring it as low as possible.
pub fn waterfill_step(sched: &Schedule, job: &Job, c: f64) -> WaterfillOutcome {
    match pour(&sched.total_usage(), job, c) {
        Ok(p) => {
            let mut schedule = sched.clone();
            schedule.push(p.assignment);
            WaterfillOutcome::Success { schedule, level: p.level }
        }
        Err(deficit) => WaterfillOutcome::Failure { deficit },
    }
}

/// Where an online run stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnlineFailure {
    /// 0-based index of the job that could not be placed.
    pub index: usize,
    pub deficit: f64,
}

/// Trace of the online WaterFill algorithm.
///
/// Existing assignments are never modified, so the prefix schedule
/// `R^(j)` is the first `j` assignments of [`OnlineRun::schedule`].
#[derive(Debug, Clone, PartialEq)]
pub struct OnlineRun {
    pub ratio: f64,
    pub schedule: Schedule,
    /// `H_j = c · M*([j])` for every job that was attempted.
    pub targets: Vec<f64>,
    /// Water level of every placed job.
    pub levels: Vec<f64>,
    pub failure: Option<OnlineFailure>,
}

impl OnlineRun {
    pub fn placed(&self) -> usize {
        self.schedule.len()
    }

    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }

    /// `R^(j)`.
    pub fn prefix(&self, j: usize) -> Schedule {
        self.schedule.prefix(j)
    }
}

/// `c`-WaterFill: job `j` is poured with target completion `c · M*([j])`.
/// Stops at the first job that cannot be placed.
pub fn waterfill_online(jobs: &JobSet, c: f64) -> OnlineRun {
    let mut run = OnlineRun {
        ratio: c,
        schedule: Schedule::default(),
        targets: Vec::with_capacity(jobs.len()),
        levels: Vec::with_capacity(jobs.len()),
        failure: None,
    };
    let mut usage = StepFunction::zero();
    let mut volume = 0.0;
    let mut p_max = 0.0f64;
    for (index, job) in jobs.iter().enumerate() {
        volume += job.volume();
        p_max = p_max.max(job.processing_time());
        let target = c * volume.max(p_max);
        run.targets.push(target);
        match pour(&usage, job, target) {
            Ok(p) => {
                usage = usage.add(&p.assignment);
                run.levels.push(p.level);
                run.schedule.push(p.assignment);
            }
            Err(deficit) => {
                run.failure = Some(OnlineFailure { index, deficit });
                break;
            }
        }
    }
    run
}

/// The analytic one-job reference schedule `U_V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalSchedule {
    volume: f64,
}

impl UniversalSchedule {
    pub fn new(volume: f64) -> Self {
        UniversalSchedule { volume: volume.max(0.0) }
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `V / (e - 1)`: end of the full-resource plateau.
    pub fn plateau_end(&self) -> f64 {
        self.volume / (E - 1.0)
    }

    /// `e V / (e - 1)`: end of the support.
    pub fn support_end(&self) -> f64 {
        E * self.volume / (E - 1.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        universal_eval(self, t)
    }

    /// First time at which the usage drops to `y`, i.e. `U_V(t) > y` iff `t < t_y`.
    fn crossing(&self, y: f64) -> f64 {
        if y >= 1.0 {
            return 0.0;
        }
        if y <= 0.0 {
            return self.support_end();
        }
        self.volume * exp(1.0 - y) / (E - 1.0)
    }

    /// `∫_0^t U_V(s) ds`.
    pub fn integral_to(&self, t: f64) -> f64 {
        let v = self.volume;
        if v == 0.0 || t <= 0.0 {
            return 0.0;
        }
        let t1 = self.plateau_end();
        if t <= t1 {
            return t;
        }
        let t = t.min(self.support_end());
        let k = (E - 1.0) / v;
        // antiderivative of 1 - ln(k s) is 2s - s ln(k s)
        let g = |s: f64| 2.0 * s - s * ln(k * s);
        t1 + g(t) - g(t1)
    }

    /// `A^C_{U_V}(y)`.
    pub fn upper_area(&self, c: f64, y: f64) -> f64 {
        if self.volume == 0.0 || y >= 1.0 {
            return 0.0;
        }
        let y = y.max(0.0);
        let end = c.min(self.crossing(y));
        (self.integral_to(end) - y * end).max(0.0)
    }
}

/// `U_V(t)`: 1 on `[0, V/(e-1))`, then `1 - ln(t (e-1) / V)` until
/// `e V / (e-1)`, then 0.
pub fn universal_eval(u: &UniversalSchedule, t: f64) -> f64 {
    let v = u.volume;
    if v == 0.0 || t < 0.0 {
        return 0.0;
    }
    if t < u.plateau_end() {
        1.0
    } else if t < u.support_end() {
        (1.0 - ln(t * (E - 1.0) / v)).max(0.0)
    } else {
        0.0
    }
}

/// `A^∞_{U_V}(y) = (e^{1-y} - 1) / (e - 1) · V`.
pub fn universal_upper_area(volume: f64, y: f64) -> f64 {
    let y = y.clamp(0.0, 1.0);
    (exp(1.0 - y) - 1.0) / (E - 1.0) * volume
}

/// Anything with an upper resource distribution.
pub trait UpperDistribution {
    /// `A^C(y)`.
    fn upper_area(&self, c: f64, y: f64) -> f64;
    /// Usage levels at which `A^∞(y)` has kinks.
    fn levels(&self) -> Vec<f64>;
}

impl UpperDistribution for StepFunction {
    fn upper_area(&self, c: f64, y: f64) -> f64 {
        StepFunction::upper_area(self, c, y)
    }
    fn levels(&self) -> Vec<f64> {
        self.values().to_vec()
    }
}

impl UpperDistribution for Schedule {
    fn upper_area(&self, c: f64, y: f64) -> f64 {
        self.total_usage().upper_area(c, y)
    }
    fn levels(&self) -> Vec<f64> {
        self.total_usage().values().to_vec()
    }
}

impl UpperDistribution for UniversalSchedule {
    fn upper_area(&self, c: f64, y: f64) -> f64 {
        UniversalSchedule::upper_area(self, c, y)
    }
    fn levels(&self) -> Vec<f64> {
        vec![1.0]
    }
}

/// Checks `A^∞_R(y) <= (c-1) (1-y)/y · max(V, p_max y)` for `y` in
/// `((c-1)/c, 1]`, sampled at the profile's usage levels plus `grid` uniform
/// points. `jobs` supplies `V` and `p_max`.
pub fn extendability_check<P: UpperDistribution + ?Sized>(
    profile: &P,
    jobs: &JobSet,
    c: f64,
    grid: usize,
) -> bool {
    extendability_check_tol(profile, jobs, c, grid, crate::DEFAULT_TOL)
}

pub fn extendability_check_tol<P: UpperDistribution + ?Sized>(
    profile: &P,
    jobs: &JobSet,
    c: f64,
    grid: usize,
    tol: f64,
) -> bool {
    let volume = jobs.total_volume();
    let p_max = jobs.max_processing_time();
    let lo = (c - 1.0) / c;
    let mut ys: Vec<f64> = profile.levels().into_iter().filter(|&y| y > lo && y <= 1.0).collect();
    for k in 1..=grid {
        ys.push(lo + (1.0 - lo) * k as f64 / grid as f64);
    }
    ys.into_iter().all(|y| {
        let bound = (c - 1.0) * (1.0 - y) / y * volume.max(p_max * y);
        profile.upper_area(f64::INFINITY, y) <= bound + tol
    })
}

/// `R ⪯ U_V` for a step-function usage profile.
///
/// For fixed `y`, `A^C_R - A^C_U` is convex in `C` between breakpoints of
/// `R`, so only breakpoints (and `C = ∞`) need checking. For fixed `C`, the
/// difference is concave between usage levels of `R` with a single
/// stationary point, which is evaluated exactly.
pub fn is_flatter_than_universal(usage: &StepFunction, u: &UniversalSchedule, tol: f64) -> bool {
    let mut cs: Vec<f64> = usage.breakpoints().to_vec();
    cs.push(f64::INFINITY);
    let mut levels: Vec<f64> = usage.values().iter().copied().filter(|&y| y > 0.0 && y < 1.0).collect();
    levels.push(0.0);
    levels.push(1.0);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let v = u.volume();
    for &c in &cs {
        let check = |y: f64| usage.upper_area(c, y) <= u.upper_area(c, y) + tol;
        for w in levels.windows(2) {
            let (y0, y1) = (w[0], w[1]);
            if !check(y0) || !check(y1) {
                return false;
            }
            if v == 0.0 {
                continue;
            }
            // d/dy A_R = -m (constant on (y0, y1)); d/dy A_U = -min(C, t_y).
            let mid = 0.5 * (y0 + y1);
            let m = usage.measure_above(c, mid);
            if m > 0.0 && m < c {
                let y_star = 1.0 - ln(m * (E - 1.0) / v);
                if y_star > y0 && y_star < y1 && !check(y_star) {
                    return false;
                }
            }
        }
    }
    true
}

/// The lower-bound family: `n` jobs with `v_j = 1/n` and `r_j = 1/j`.
pub fn adversarial_instance(n: usize) -> JobSet {
    let jobs = (1..=n)
        .map(|j| Job::new(1.0 / n as f64, 1.0 / j as f64).expect("valid job"))
        .collect();
    JobSet::new(jobs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_flatter, validate_schedule};

    fn job(v: f64, r: f64) -> Job {
        Job::new(v, r).unwrap()
    }

    #[test]
    fn offline_optimum() {
        let single = JobSet::from_pairs(&[(2.0, 0.5)]).unwrap();
        let (m, s) = optimal_makespan(&single);
        assert_eq!(m, 4.0);
        assert_eq!(s.assignment(0).values(), &[0.5]);

        let three_jobs = JobSet::from_pairs(&[(1.0, 0.75), (4.0, 0.5), (6.0, 2.0 / 3.0)]).unwrap();
        let (m, s) = optimal_makespan(&three_jobs);
        assert!((m - 11.0).abs() < 1e-12);
        assert!(validate_schedule(&three_jobs, &s, 1e-9).unwrap().feasible);
        assert!((crate::model::makespan(&s) - 11.0).abs() < 1e-12);

        let two = JobSet::from_pairs(&[(1.0, 1.0), (1.0, 1.0)]).unwrap();
        let (m, s) = optimal_makespan(&two);
        assert_eq!(m, 2.0);
        assert_eq!(s.assignment(1).values(), &[0.5]);

        assert_eq!(optimal_makespan(&JobSet::default()).0, 0.0);
    }

    #[test]
    fn pour_into_empty_schedule() {
        match waterfill_step(&Schedule::default(), &job(1.0, 0.5), 2.0) {
            WaterfillOutcome::Success { schedule, level } => {
                assert_eq!(level, 0.5);
                assert_eq!(schedule.assignment(0).breakpoints(), &[0.0, 2.0]);
                assert_eq!(schedule.assignment(0).values(), &[0.5]);
            }
            other => panic!("{other:?}"),
        }
        match waterfill_step(&Schedule::default(), &job(1.0, 0.5), 1.0) {
            WaterfillOutcome::Failure { deficit } => assert_eq!(deficit, 0.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pour_over_a_full_block() {
        let full = Schedule::new(vec![StepFunction::constant_on(0.0, 1.0, 1.0).unwrap()]).unwrap();
        match waterfill_step(&full, &job(1.0, 1.0), 2.0) {
            WaterfillOutcome::Success { schedule, level } => {
                assert!((level - 1.0).abs() < 1e-12);
                let f = schedule.assignment(1);
                assert_eq!(f.eval(0.5), 0.0);
                assert!((f.eval(1.5) - 1.0).abs() < 1e-12);
                assert!((f.integral() - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn level_is_minimal() {
        let base = Schedule::new(vec![
            StepFunction::from_grid(&[0.0, 1.0, 3.0], &[0.7, 0.2]).unwrap(),
        ])
        .unwrap();
        let j = job(0.9, 0.6);
        let WaterfillOutcome::Success { schedule, level } = waterfill_step(&base, &j, 4.0) else {
            panic!()
        };
        assert!((schedule.assignment(1).integral() - 0.9).abs() < 1e-12);
        let pieces = pieces_before(&base.total_usage(), 4.0);
        assert!(poured_volume(&pieces, 0.6, level - 1e-6) < 0.9);
    }

    #[test]
    fn online_examples() {
        let two = JobSet::from_pairs(&[(1.0, 1.0), (1.0, 1.0)]).unwrap();
        let run = waterfill_online(&two, OPTIMAL_RATIO);
        assert!(run.succeeded());
        let first = run.schedule.assignment(0);
        assert!((first.eval(0.0) - (E - 1.0) / E).abs() < 1e-12);
        assert!((first.end() - OPTIMAL_RATIO).abs() < 1e-12);
        let empty = waterfill_online(&JobSet::default(), OPTIMAL_RATIO);
        assert!(empty.succeeded() && empty.placed() == 0);
    }

    #[test]
    fn universal_values() {
        let u = UniversalSchedule::new(1.0);
        assert_eq!(universal_eval(&u, 0.0), 1.0);
        assert_eq!(universal_eval(&u, u.support_end()), 0.0);
        let u = UniversalSchedule::new(E - 1.0);
        assert!((universal_eval(&u, 1.0) - 1.0).abs() < 1e-15);
        assert!((universal_upper_area(E - 1.0, 0.5) - (exp(0.5) - 1.0)).abs() < 1e-12);
        assert!((universal_upper_area(3.0, 0.0) - 3.0).abs() < 1e-12);
        assert_eq!(universal_upper_area(3.0, 1.0), 0.0);
        assert_eq!(universal_eval(&UniversalSchedule::new(0.0), 0.1), 0.0);
    }

    #[test]
    fn universal_closed_forms_match() {
        let u = UniversalSchedule::new(2.5);
        assert!((u.integral_to(f64::INFINITY) - 2.5).abs() < 1e-12);
        for &y in &[0.0, 0.1, 0.37, 0.5, 0.9, 0.999] {
            let a = u.upper_area(f64::INFINITY, y);
            assert!((a - universal_upper_area(2.5, y)).abs() < 1e-12, "y={y}");
        }
    }

    #[test]
    fn extendability_examples() {
        let u = UniversalSchedule::new(2.0);
        let one = JobSet::from_pairs(&[(2.0, 1.0)]).unwrap();
        assert!(extendability_check(&u, &one, OPTIMAL_RATIO, 1000));

        let flat = Schedule::new(vec![StepFunction::constant_on(0.0, 2.0, 1.0).unwrap()]).unwrap();
        assert!(!extendability_check(&flat, &one, OPTIMAL_RATIO, 100));

        assert!(extendability_check(&Schedule::default(), &JobSet::default(), OPTIMAL_RATIO, 10));
    }

    #[test]
    fn adversarial_family() {
        let jobs = adversarial_instance(3);
        let got: Vec<(f64, f64)> = jobs.iter().map(|j| (j.volume(), j.requirement())).collect();
        assert_eq!(got, vec![(1.0 / 3.0, 1.0), (1.0 / 3.0, 0.5), (1.0 / 3.0, 1.0 / 3.0)]);
        let two = adversarial_instance(2);
        assert_eq!(optimal_makespan_value(&two.prefix(1)), 0.5);
        assert_eq!(optimal_makespan_value(&two), 1.0);
        assert_eq!(adversarial_instance(1).jobs()[0], job(1.0, 1.0));
    }

    #[test]
    fn online_prefixes_stay_flatter_than_universal() {
        let jobs = JobSet::from_pairs(&[(0.4, 0.3), (1.2, 0.9), (0.1, 1.0), (2.0, 0.25)]).unwrap();
        let run = waterfill_online(&jobs, OPTIMAL_RATIO);
        assert!(run.succeeded());
        let mut volume = 0.0;
        for j in 1..=jobs.len() {
            volume += jobs.jobs()[j - 1].volume();
            let usage = run.prefix(j).total_usage();
            assert!(is_flatter_than_universal(&usage, &UniversalSchedule::new(volume), 1e-9));
        }
        // a flat block is not flatter than the universal schedule of its volume
        let block = StepFunction::constant_on(0.0, 1.0, 1.0).unwrap();
        assert!(!is_flatter_than_universal(&block, &UniversalSchedule::new(1.0), 1e-9));
        let _ = is_flatter(&run.prefix(1), &run.prefix(2), 1e-9);
    }
}
