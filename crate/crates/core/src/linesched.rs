//! Line schedules.
//!
//! Every job gets a dual line `d_j(t) = α_j - t / v_j`. At each instant the
//! jobs are ranked by the height of their line (ties: larger volume first)
//! and, while their line is above zero, greedily receive
//! `min(r_j, remaining resource)` in that order. The resulting schedule comes
//! with dual functions `β_j` and `γ` that certify optimality for the
//! scheduled volumes `v̄`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};
use crate::func::{PiecewiseLinear, Segment, StepFunction};
use crate::model::{Job, JobSet, Schedule};
use crate::num::stable_sum;

/// Remaining resource below which an interval counts as exhausted.
const EXHAUSTED: f64 = 1e-12;

/// One non-negative priority intercept per job.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaVector(Vec<f64>);

impl AlphaVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::InvalidParameter("alpha entries must be finite and non-negative"));
        }
        Ok(AlphaVector(values))
    }

    pub fn zeros(n: usize) -> Self {
        AlphaVector(vec![0.0; n])
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for AlphaVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// `d_j(t) = α_j - t / v_j`.
pub fn dual_line(job: &Job, alpha_j: f64, t: f64) -> f64 {
    alpha_j - t / job.volume()
}

/// The tuple `(R, α, β, γ, v̄)` on a common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSchedule {
    pub schedule: Schedule,
    pub alpha: AlphaVector,
    pub beta: Vec<PiecewiseLinear>,
    pub gamma: PiecewiseLinear,
    /// Scheduled volume of every job.
    pub vbar: Vec<f64>,
    /// Line intersections above the time axis and line zeros, with 0 first.
    pub grid: Vec<f64>,
}

/// Parts of the primal and dual objectives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityQuantities {
    /// `Σ_j ∫ t R_j(t) / v_j dt`.
    pub p: f64,
    /// `Σ_j α_j v̄_j`.
    pub a: f64,
    /// `Σ_j r_j ∫ β_j`.
    pub b: f64,
    /// `∫ γ`.
    pub gamma: f64,
}

impl DualityQuantities {
    /// `|A - (P + B + Γ)| / A`.
    pub fn duality_gap(&self) -> f64 {
        rel(self.a - (self.p + self.b + self.gamma), self.a)
    }

    /// `|P - (B + Γ)| / P`.
    pub fn balance_gap(&self) -> f64 {
        rel(self.p - (self.b + self.gamma), self.p)
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        diff.abs()
    } else {
        diff.abs() / scale.abs()
    }
}

fn check_inputs(jobs: &JobSet, alpha: &[f64]) -> Result<()> {
    if alpha.len() != jobs.len() {
        return Err(Error::LengthMismatch { expected: jobs.len(), found: alpha.len() });
    }
    if alpha.iter().any(|a| !a.is_finite() || *a < 0.0) {
        return Err(Error::InvalidParameter("alpha entries must be finite and non-negative"));
    }
    jobs.require_non_degenerate()
}

/// All pairwise line intersections in `(0, horizon)` and all line zeros.
fn event_grid(jobs: &[Job], alpha: &[f64]) -> Vec<f64> {
    let horizon = jobs.iter().zip(alpha).map(|(j, a)| a * j.volume()).fold(0.0, f64::max);
    let mut times = vec![0.0];
    if horizon <= 0.0 {
        return times;
    }
    for (j, job) in jobs.iter().enumerate() {
        let zero = alpha[j] * job.volume();
        if zero > 0.0 {
            times.push(zero);
        }
        for k in j + 1..jobs.len() {
            let dslope = 1.0 / job.volume() - 1.0 / jobs[k].volume();
            let t = (alpha[j] - alpha[k]) / dslope;
            if t > 0.0 && t < horizon {
                times.push(t);
            }
        }
    }
    times.sort_by(f64::total_cmp);
    let eps = crate::func::BREAKPOINT_MERGE_REL * horizon;
    let mut grid: Vec<f64> = Vec::with_capacity(times.len());
    for t in times {
        match grid.last() {
            Some(&last) if t - last <= eps => {
                if t == horizon {
                    *grid.last_mut().unwrap() = t;
                }
            }
            _ => grid.push(t),
        }
    }
    grid
}

/// Rates on one grid interval. Returns the lowest-ranked job with positive
/// rate when the resource is exhausted there.
fn allocate(
    jobs: &[Job],
    alpha: &[f64],
    a: f64,
    b: f64,
    order: &mut Vec<usize>,
    rates: &mut [f64],
) -> Option<usize> {
    let mid = 0.5 * (a + b);
    order.clear();
    for (j, job) in jobs.iter().enumerate() {
        rates[j] = 0.0;
        if dual_line(job, alpha[j], mid) > 0.0 {
            order.push(j);
        }
    }
    order.sort_by(|&x, &y| {
        let dx = dual_line(&jobs[x], alpha[x], mid);
        let dy = dual_line(&jobs[y], alpha[y], mid);
        dy.total_cmp(&dx).then(jobs[y].volume().total_cmp(&jobs[x].volume()))
    });
    let mut remaining = 1.0f64;
    let mut last = None;
    for &j in order.iter() {
        if remaining <= EXHAUSTED {
            break;
        }
        let rate = jobs[j].requirement().min(remaining);
        rates[j] = rate;
        remaining -= rate;
        last = Some(j);
    }
    if remaining <= EXHAUSTED {
        last
    } else {
        None
    }
}

fn volumes_unchecked(jobs: &[Job], alpha: &[f64], out: &mut [f64]) {
    let grid = event_grid(jobs, alpha);
    let mut order = Vec::with_capacity(jobs.len());
    let mut rates = vec![0.0; jobs.len()];
    let mut acc: Vec<Vec<f64>> = vec![Vec::with_capacity(grid.len()); jobs.len()];
    for w in grid.windows(2) {
        allocate(jobs, alpha, w[0], w[1], &mut order, &mut rates);
        for (j, &r) in rates.iter().enumerate() {
            if r > 0.0 {
                acc[j].push(r * (w[1] - w[0]));
            }
        }
    }
    for (o, parts) in out.iter_mut().zip(acc) {
        *o = stable_sum(parts);
    }
}

/// `v(α)`: the volume every job receives in the line schedule of `alpha`.
pub fn scheduled_volumes(jobs: &JobSet, alpha: &AlphaVector) -> Result<Vec<f64>> {
    check_inputs(jobs, alpha)?;
    let mut out = vec![0.0; jobs.len()];
    volumes_unchecked(jobs.jobs(), alpha, &mut out);
    Ok(out)
}

/// Builds the line schedule of `alpha`.
///
/// `γ` follows the lowest-ranked scheduled job's line only where the
/// resource is exhausted and is zero elsewhere, which is what the
/// `γ (1 - Σ R) = 0` slackness condition requires.
pub fn build_line_schedule(jobs: &JobSet, alpha: &AlphaVector) -> Result<LineSchedule> {
    check_inputs(jobs, alpha)?;
    let js = jobs.jobs();
    let n = js.len();
    let grid = event_grid(js, alpha);
    let m = grid.len().saturating_sub(1);

    let mut rates_by_job = vec![Vec::with_capacity(m); n];
    let mut gamma_segs = Vec::with_capacity(m);
    let mut beta_segs = vec![Vec::with_capacity(m); n];
    let mut vol_parts: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut rates = vec![0.0; n];

    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let last = allocate(js, alpha, a, b, &mut order, &mut rates);
        let gamma = match last {
            Some(j) => {
                let seg = Segment { value: dual_line(&js[j], alpha[j], a), slope: -1.0 / js[j].volume() };
                if seg.value + seg.slope * (mid - a) > 0.0 {
                    seg
                } else {
                    Segment { value: 0.0, slope: 0.0 }
                }
            }
            None => Segment { value: 0.0, slope: 0.0 },
        };
        gamma_segs.push(gamma);
        for j in 0..n {
            rates_by_job[j].push(rates[j]);
            if rates[j] > 0.0 {
                vol_parts[j].push(rates[j] * (b - a));
            }
            let slope = -1.0 / js[j].volume() - gamma.slope;
            let at = |t: f64| dual_line(&js[j], alpha[j], t) - (gamma.value + gamma.slope * (t - a));
            let seg = if at(mid) > 0.0 {
                Segment { value: at(a), slope }
            } else {
                Segment { value: 0.0, slope: 0.0 }
            };
            beta_segs[j].push(seg);
        }
    }

    let assignments = rates_by_job
        .iter()
        .map(|r| StepFunction::from_grid(&grid, r))
        .collect::<Result<Vec<_>>>()?;
    let schedule = Schedule::new(assignments)?;
    let gamma = PiecewiseLinear::new(grid.clone(), gamma_segs)?;
    let beta = beta_segs
        .into_iter()
        .map(|s| PiecewiseLinear::new(grid.clone(), s))
        .collect::<Result<Vec<_>>>()?;
    let vbar = vol_parts.into_iter().map(stable_sum).collect();
    Ok(LineSchedule { schedule, alpha: alpha.clone(), beta, gamma, vbar, grid })
}

/// Outcome of [`solve_alpha_detailed`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSolve {
    pub alpha: AlphaVector,
    pub volumes: Vec<f64>,
    pub residual: f64,
    pub sweeps: usize,
}

/// Finds `α` whose line schedule delivers `targets`; see
/// [`solve_alpha_detailed`].
pub fn solve_alpha(
    jobs: &JobSet,
    targets: &[f64],
    vol_tol: f64,
    max_iters: usize,
) -> Result<AlphaVector> {
    solve_alpha_detailed(jobs, targets, vol_tol, max_iters).map(|s| s.alpha)
}

/// Coordinate-wise fixed-point iteration from `α = 0`, accelerated by
/// Newton steps.
///
/// Each sweep first tries Newton's method from the current point and, if
/// that stalls, visits the jobs in descending target order and moves `α_j`
/// (others fixed) until `v_j(α) = target_j`; `α_j ↦ v_j(α)` is continuous
/// and non-decreasing, so a bracketed bisection does this. Sweeps stop once
/// `max_j |v_j(α) - target_j| <= vol_tol`.
pub fn solve_alpha_detailed(
    jobs: &JobSet,
    targets: &[f64],
    vol_tol: f64,
    max_iters: usize,
) -> Result<AlphaSolve> {
    let n = jobs.len();
    if targets.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: targets.len() });
    }
    if targets.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidParameter("targets must be finite and non-negative"));
    }
    jobs.require_non_degenerate()?;
    let js = jobs.jobs();
    let total: f64 = targets.iter().sum();
    let min_r = jobs.min_requirement();
    let upper: Vec<f64> = js.iter().map(|j| total / (j.volume() * min_r) + 1.0).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| targets[b].total_cmp(&targets[a]).then(a.cmp(&b)));

    let mut alpha = vec![0.0; n];
    let mut vols = vec![0.0; n];
    let residual_of = |vols: &[f64]| {
        vols.iter().zip(targets).map(|(v, t)| (v - t).abs()).fold(0.0, f64::max)
    };

    for sweep in 0..max_iters {
        volumes_unchecked(js, &alpha, &mut vols);
        let residual = residual_of(&vols);
        if residual <= vol_tol {
            return Ok(AlphaSolve { alpha: AlphaVector(alpha), volumes: vols, residual, sweeps: sweep });
        }
        if newton(js, targets, &mut alpha, vol_tol) {
            continue;
        }
        for &j in &order {
            solve_coordinate(js, &mut alpha, j, targets[j], upper[j], vol_tol, &mut vols);
        }
    }
    volumes_unchecked(js, &alpha, &mut vols);
    let residual = residual_of(&vols);
    if residual <= vol_tol {
        return Ok(AlphaSolve { alpha: AlphaVector(alpha), volumes: vols, residual, sweeps: max_iters });
    }
    Err(Error::NotConverged { iterations: max_iters, residual })
}

/// Newton iterations on `v(α) = targets`; `v` is piecewise linear in `α`,
/// so once the crossing structure settles a single step lands on the
/// solution. Steps are halved until the residual drops. Returns whether the
/// residual reached `vol_tol`.
fn newton(jobs: &[Job], targets: &[f64], alpha: &mut [f64], vol_tol: f64) -> bool {
    let n = jobs.len();
    let active: Vec<usize> = (0..n).filter(|&j| targets[j] > 0.0).collect();
    let m = active.len();
    let mut vols = vec![0.0; n];
    let mut probe = vec![0.0; n];
    let residual_of = |v: &[f64]| v.iter().zip(targets).map(|(v, t)| (v - t).abs()).fold(0.0, f64::max);
    volumes_unchecked(jobs, alpha, &mut vols);
    let mut residual = residual_of(&vols);
    for _ in 0..32 {
        if residual <= vol_tol {
            return true;
        }
        let mut jac = vec![0.0; m * m];
        for (c, &k) in active.iter().enumerate() {
            let h = 1e-7 * alpha[k].max(1e-3);
            let saved = alpha[k];
            alpha[k] = saved + h;
            volumes_unchecked(jobs, alpha, &mut probe);
            alpha[k] = saved;
            for (row, &j) in active.iter().enumerate() {
                jac[row * m + c] = (probe[j] - vols[j]) / h;
            }
        }
        let mut rhs: Vec<f64> = active.iter().map(|&j| targets[j] - vols[j]).collect();
        if !solve_dense(&mut jac, &mut rhs, m) {
            return false;
        }
        let mut step = 1.0;
        let mut accepted = false;
        let mut cand = alpha.to_vec();
        for _ in 0..30 {
            for (row, &j) in active.iter().enumerate() {
                cand[j] = (alpha[j] + step * rhs[row]).max(0.0);
            }
            volumes_unchecked(jobs, &cand, &mut probe);
            let r = residual_of(&probe);
            if r < residual {
                alpha.copy_from_slice(&cand);
                vols.copy_from_slice(&probe);
                residual = r;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return false;
        }
    }
    residual <= vol_tol
}

/// Gaussian elimination with partial pivoting; the solution overwrites `b`.
fn solve_dense(a: &mut [f64], b: &mut [f64], m: usize) -> bool {
    for col in 0..m {
        let piv = (col..m).max_by(|&x, &y| a[x * m + col].abs().total_cmp(&a[y * m + col].abs()));
        let Some(piv) = piv else { return false };
        if a[piv * m + col].abs() < 1e-300 || !a[piv * m + col].is_finite() {
            return false;
        }
        if piv != col {
            for k in 0..m {
                a.swap(piv * m + k, col * m + k);
            }
            b.swap(piv, col);
        }
        for row in col + 1..m {
            let f = a[row * m + col] / a[col * m + col];
            if f != 0.0 {
                for k in col..m {
                    a[row * m + k] -= f * a[col * m + k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    for col in (0..m).rev() {
        let mut acc = b[col];
        for k in col + 1..m {
            acc -= a[col * m + k] * b[k];
        }
        b[col] = acc / a[col * m + col];
    }
    b.iter().all(|x| x.is_finite())
}

/// Moves `alpha[j]` so that job `j` receives `target`.
fn solve_coordinate(
    jobs: &[Job],
    alpha: &mut [f64],
    j: usize,
    target: f64,
    upper: f64,
    vol_tol: f64,
    scratch: &mut [f64],
) {
    if target == 0.0 {
        alpha[j] = 0.0;
        return;
    }
    let mut eval = |a: f64, alpha: &mut [f64]| {
        alpha[j] = a;
        volumes_unchecked(jobs, alpha, scratch);
        scratch[j]
    };
    let current = alpha[j];
    let here = eval(current, alpha);
    let (mut lo, mut hi) = if here < target { (current, upper) } else { (0.0, current) };
    if here < target && eval(hi, alpha) < target {
        alpha[j] = hi;
        return;
    }
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = eval(mid, alpha);
        if (v - target).abs() <= 1e-3 * vol_tol {
            lo = mid;
            break;
        }
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    alpha[j] = lo;
}

/// `P`, `A`, `B` and `Γ` of a line schedule, integrated exactly per segment.
pub fn duality_quantities(ls: &LineSchedule, jobs: &JobSet) -> DualityQuantities {
    let js = jobs.jobs();
    let p = stable_sum(
        ls.schedule.assignments().iter().zip(js).map(|(f, j)| f.first_moment() / j.volume()),
    );
    let a = stable_sum(ls.alpha.iter().zip(&ls.vbar).map(|(a, v)| a * v));
    let b = stable_sum(ls.beta.iter().zip(js).map(|(f, j)| j.requirement() * f.integral()));
    let gamma = ls.gamma.integral();
    DualityQuantities { p, a, b, gamma }
}

/// Largest violation of each slackness condition and of dual feasibility.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SlacknessReport {
    /// `α_j (v̄_j - ∫ R_j)`.
    pub alpha: f64,
    /// `β_j (r_j - R_j)`.
    pub beta: f64,
    /// `γ (1 - Σ R_j)`.
    pub gamma: f64,
    /// `R_j (d_j - β_j - γ)`.
    pub rate: f64,
    /// `max(0, d_j - β_j - γ)`.
    pub dual_feasibility: f64,
    /// Most negative value of `β` or `γ`, as a positive number.
    pub negativity: f64,
}

impl SlacknessReport {
    pub fn max_slackness(&self) -> f64 {
        self.alpha.max(self.beta).max(self.gamma).max(self.rate)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_slackness() <= tol && self.dual_feasibility <= tol && self.negativity <= tol
    }
}

/// Probes every grid interval at its midpoint and just inside both ends.
pub fn check_slackness(ls: &LineSchedule, jobs: &JobSet, _tol: f64) -> SlacknessReport {
    let js = jobs.jobs();
    let mut rep = SlacknessReport::default();
    for (j, f) in ls.schedule.assignments().iter().enumerate() {
        let alpha = ls.alpha.get(j).copied().unwrap_or(0.0);
        rep.alpha = rep.alpha.max((alpha * (ls.vbar[j] - f.integral())).abs());
    }
    let mut grid = crate::func::merged_grid([
        ls.grid.as_slice(),
        ls.gamma.breakpoints(),
        ls.schedule.grid().as_slice(),
    ]);
    // a probe past the end catches anything left over
    let end = *grid.last().unwrap();
    grid.push(end + 1.0 + end);
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = b - a;
        for frac in [1e-6, 0.5, 1.0 - 1e-6] {
            let t = a + frac * len;
            let gamma = ls.gamma.eval(t);
            let rates: Vec<f64> = ls.schedule.assignments().iter().map(|f| f.eval(t)).collect();
            let total: f64 = rates.iter().sum();
            rep.gamma = rep.gamma.max((gamma * (1.0 - total)).abs());
            rep.negativity = rep.negativity.max(-gamma);
            for (j, job) in js.iter().enumerate() {
                let beta = ls.beta[j].eval(t);
                let d = dual_line(job, ls.alpha[j], t);
                rep.beta = rep.beta.max((beta * (job.requirement() - rates[j])).abs());
                rep.rate = rep.rate.max((rates[j] * (d - beta - gamma)).abs());
                rep.dual_feasibility = rep.dual_feasibility.max(d - beta - gamma);
                rep.negativity = rep.negativity.max(-beta);
            }
        }
    }
    rep
}

/// `c(t) = Σ_j R_j(t) / v_j`.
pub fn cost_rate(ls: &LineSchedule, jobs: &JobSet, t: f64) -> f64 {
    ls.schedule.assignments().iter().zip(jobs.jobs()).map(|(f, j)| f.eval(t) / j.volume()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_jobs() -> JobSet {
        JobSet::from_pairs(&[(1.0, 0.75), (4.0, 0.5), (6.0, 2.0 / 3.0)]).unwrap()
    }

    fn three_job_alpha() -> AlphaVector {
        AlphaVector::new(vec![51.0 / 16.0, 39.0 / 16.0, 31.0 / 16.0]).unwrap()
    }

    #[test]
    fn dual_line_values() {
        let j = Job::new(1.0, 1.0).unwrap();
        assert_eq!(dual_line(&j, 1.0, 0.0), 1.0);
        assert_eq!(dual_line(&j, 1.0, 1.0), 0.0);
        assert_eq!(dual_line(&j, 51.0 / 16.0, 1.0), 35.0 / 16.0);
    }

    #[test]
    fn single_unit_job() {
        let jobs = JobSet::from_pairs(&[(1.0, 1.0)]).unwrap();
        let ls = build_line_schedule(&jobs, &AlphaVector::new(vec![1.0]).unwrap()).unwrap();
        assert_eq!(ls.schedule.assignment(0).values(), &[1.0]);
        assert_eq!(ls.schedule.assignment(0).end(), 1.0);
        assert_eq!(ls.gamma.eval(0.25), 0.75);
        assert_eq!(ls.beta[0].integral(), 0.0);
        let q = duality_quantities(&ls, &jobs);
        assert_eq!((q.p, q.a, q.b, q.gamma), (0.5, 1.0, 0.0, 0.5));
        assert_eq!(cost_rate(&ls, &jobs, 0.5), 1.0);
        assert_eq!(cost_rate(&ls, &jobs, 2.0), 0.0);
    }

    #[test]
    fn single_job_below_capacity_has_zero_gamma() {
        let jobs = JobSet::from_pairs(&[(1.0, 0.5)]).unwrap();
        let ls = build_line_schedule(&jobs, &AlphaVector::new(vec![2.0]).unwrap()).unwrap();
        assert_eq!(ls.schedule.assignment(0).values(), &[0.5]);
        assert_eq!(ls.schedule.assignment(0).end(), 2.0);
        assert_eq!(ls.gamma.integral(), 0.0);
        assert_eq!(ls.beta[0].eval(0.5), 1.5);
        let q = duality_quantities(&ls, &jobs);
        assert_eq!((q.p, q.a, q.b, q.gamma), (1.0, 2.0, 1.0, 0.0));
        assert!(check_slackness(&ls, &jobs, 1e-12).holds(1e-12));
    }

    #[test]
    fn three_job_structure() {
        let jobs = three_jobs();
        let ls = build_line_schedule(&jobs, &three_job_alpha()).unwrap();
        for t in [1.0, 1.5, 6.0] {
            assert!(ls.grid.iter().any(|&g| (g - t).abs() < 1e-12), "missing {t}");
        }
        let s = &ls.schedule;
        assert_eq!(s.assignment(0).eval(0.5), 0.75);
        assert_eq!(s.assignment(1).eval(0.5), 0.25);
        assert_eq!(s.assignment(1).eval(2.0), 0.5);
        assert_eq!(s.assignment(2).eval(0.5), 0.0);
        assert_eq!(s.assignment(2).eval(3.0), 0.5);
        assert!((s.assignment(2).eval(7.0) - 2.0 / 3.0).abs() < 1e-15);
        for (got, want) in ls.vbar.iter().zip([1.0, 4.0, 6.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let q = duality_quantities(&ls, &jobs);
        assert!((q.a - 393.0 / 16.0).abs() < 1e-12);
        assert!((q.p - 393.0 / 32.0).abs() < 1e-12);
        assert!((cost_rate(&ls, &jobs, 0.5) - 0.8125).abs() < 1e-15);
        assert!(check_slackness(&ls, &jobs, 1e-12).holds(1e-12));
    }

    #[test]
    fn zero_alpha_schedules_nothing() {
        let v = scheduled_volumes(&three_jobs(), &AlphaVector::zeros(3)).unwrap();
        assert_eq!(v, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn degenerate_sets_are_rejected() {
        let jobs = JobSet::from_pairs(&[(1.0, 1.0), (1.0, 0.5)]).unwrap();
        assert!(matches!(
            build_line_schedule(&jobs, &AlphaVector::zeros(2)),
            Err(Error::Degenerate { .. })
        ));
        assert!(AlphaVector::new(vec![-1.0]).is_err());
    }

    #[test]
    fn fixed_point_single_job() {
        let jobs = JobSet::from_pairs(&[(3.0, 0.25)]).unwrap();
        let a = solve_alpha(&jobs, &[3.0], 1e-12, 100).unwrap();
        assert!((a[0] - 4.0).abs() < 1e-9);
    }

    #[test]
    fn fixed_point_three_jobs() {
        let jobs = three_jobs();
        let a = solve_alpha(&jobs, &[1.0, 4.0, 6.0], 1e-8, 10_000).unwrap();
        for (got, want) in a.iter().zip([3.1875, 2.4375, 1.9375]) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn violated_gamma_slackness_is_reported() {
        let jobs = JobSet::from_pairs(&[(1.0, 0.5)]).unwrap();
        let mut ls = build_line_schedule(&jobs, &AlphaVector::new(vec![2.0]).unwrap()).unwrap();
        ls.gamma = PiecewiseLinear::new(vec![0.0, 2.0], vec![Segment { value: 0.5, slope: 0.0 }]).unwrap();
        let rep = check_slackness(&ls, &jobs, 1e-9);
        assert!((rep.gamma - 0.25).abs() < 1e-12);
        assert!(!rep.holds(1e-9));
        assert_eq!(rep.alpha, 0.0);
    }
}
