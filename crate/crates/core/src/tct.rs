//! Total completion time: Greedy, lower bounds, exact line schedules,
//! LSApprox and the best-of combination.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::func::StepFunction;
use crate::linesched::{
    build_line_schedule, duality_quantities, solve_alpha, AlphaVector, DualityQuantities, LineSchedule,
};
use crate::lp::{build_discretized_lp, solve_lp};
use crate::model::{fractional_completion_time, total_completion_time, JobSet, Schedule};
use crate::num::{ceil, stable_sum};

/// Rates below this count as zero when pouring Greedy.
const RATE_EPS: f64 = 1e-12;

/// Default absolute volume tolerance of [`ls_exact`].
pub const LS_VOL_TOL: f64 = 1e-10;

/// Sweep budget of the fixed-point solver inside [`ls_exact`].
pub const LS_MAX_SWEEPS: usize = 1000;

/// Default slot count of the LSApprox LP when no slot width is given.
pub const DEFAULT_SLOTS: usize = 1024;

/// How often LSApprox halves its default slot width when a long-heavy job
/// ends up with no volume.
pub const MAX_REFINEMENTS: usize = 8;

/// Jobs in ascending volume order (ties by index), each taking
/// `min(r_j, 1 - usage)` as early as possible.
pub fn greedy(jobs: &JobSet) -> Schedule {
    let mut usage = StepFunction::zero();
    let mut out = vec![StepFunction::zero(); jobs.len()];
    for j in jobs.ascending_volume_order() {
        let job = jobs.jobs()[j];
        let mut bps = vec![0.0];
        let mut vals = Vec::new();
        let mut left = job.volume();
        let pieces = usage.intervals().chain(core::iter::once((usage.end(), f64::INFINITY, 0.0)));
        for (a, b, u) in pieces {
            let rate = job.requirement().min(1.0 - u);
            let rate = if rate < RATE_EPS { 0.0 } else { rate };
            if rate > 0.0 && left <= rate * (b - a) {
                bps.push(a + left / rate);
                vals.push(rate);
                left = 0.0;
                break;
            }
            bps.push(b);
            vals.push(rate);
            left -= rate * (b - a);
        }
        debug_assert_eq!(left, 0.0);
        let f = StepFunction::new(bps, vals).expect("greedy pieces are ordered");
        usage = usage.add(&f);
        out[j] = f;
    }
    Schedule::new(out).expect("greedy rates are non-negative")
}

/// Lower bounds on the optimal total completion time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    /// `Σ_j Σ_{i≤j} v_i` over ascending volumes.
    pub c_a: f64,
    /// `Σ_j p_j`.
    pub c_l: f64,
    /// `C^F + C_L / 2` for the supplied fractional objective.
    pub lb3: Option<f64>,
    pub best: f64,
}

pub fn lower_bounds(jobs: &JobSet, fractional_opt: Option<f64>) -> Bounds {
    let mut vols = jobs.volumes();
    vols.sort_by(f64::total_cmp);
    let mut prefix = 0.0;
    let c_a = stable_sum(vols.iter().map(|v| {
        prefix += v;
        prefix
    }));
    let c_l = stable_sum(jobs.iter().map(|j| j.processing_time()));
    let lb3 = fractional_opt.map(|f| f + 0.5 * c_l);
    let best = c_a.max(c_l).max(lb3.unwrap_or(0.0));
    Bounds { c_a, c_l, lb3, best }
}

/// Line schedule whose volumes match the job volumes.
pub fn ls_exact_line(jobs: &JobSet, vol_tol: f64) -> Result<LineSchedule> {
    let alpha = solve_alpha(jobs, &jobs.volumes(), vol_tol, LS_MAX_SWEEPS)?;
    build_line_schedule(jobs, &alpha)
}

pub fn ls_exact(jobs: &JobSet, vol_tol: f64) -> Result<(Schedule, AlphaVector, DualityQuantities)> {
    let ls = ls_exact_line(jobs, vol_tol)?;
    let q = duality_quantities(&ls, jobs);
    Ok((ls.schedule, ls.alpha, q))
}

/// Light, short-heavy and long-heavy job ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    pub light: Vec<usize>,
    pub short_heavy: Vec<usize>,
    pub long_heavy: Vec<usize>,
    pub mu: f64,
}

/// Light: `r_j ≤ μ/n`. Short-heavy: `r_j > μ/n` and `p_j ≤ (μ/n)² p_max`.
/// Long-heavy: the rest.
pub fn subdivide(jobs: &JobSet, mu: f64) -> Result<Subdivision> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidParameter("mu must lie in (0, 1)"));
    }
    let n = jobs.len() as f64;
    let p_max = jobs.max_processing_time();
    let share = mu / n;
    let mut sub = Subdivision { light: Vec::new(), short_heavy: Vec::new(), long_heavy: Vec::new(), mu };
    for (j, job) in jobs.iter().enumerate() {
        if job.requirement() <= share {
            sub.light.push(j);
        } else if job.processing_time() <= share * share * p_max {
            sub.short_heavy.push(j);
        } else {
            sub.long_heavy.push(j);
        }
    }
    Ok(sub)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsApproxParams {
    pub epsilon: f64,
    pub kappa: f64,
    /// Slot width; `T / DEFAULT_SLOTS` when absent.
    pub delta_override: Option<f64>,
    /// Horizon; `n · p_max(long-heavy)` when absent.
    pub horizon_override: Option<f64>,
}

impl LsApproxParams {
    pub const DEFAULT_KAPPA: f64 = 1.0 / 20.0;

    pub fn new(epsilon: f64) -> Self {
        LsApproxParams { epsilon, kappa: Self::DEFAULT_KAPPA, delta_override: None, horizon_override: None }
    }

    /// `κε` rounded down to `1/k` with integer `k ≥ 2`.
    pub fn mu(&self) -> Result<f64> {
        let x = self.kappa * self.epsilon;
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidParameter("epsilon and kappa must be positive"));
        }
        let k = ceil(1.0 / x - 1e-9).max(2.0);
        Ok(1.0 / k)
    }
}

impl Default for LsApproxParams {
    fn default() -> Self {
        LsApproxParams::new(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsApproxOutcome {
    pub schedule: Schedule,
    pub subdivision: Subdivision,
    pub mu: f64,
    pub horizon: f64,
    pub delta: f64,
    /// `T (μ/n)⁶`, the slot width the worst-case analysis asks for.
    pub guarantee_delta: f64,
    /// `s = max v_j / v̄_j` over long-heavy jobs.
    pub stretch: f64,
    /// LP duals of the long-heavy jobs.
    pub alpha: Option<AlphaVector>,
}

/// Cuts `f` where its integral reaches `volume`.
fn trim_to_volume(f: &StepFunction, volume: f64) -> StepFunction {
    let mut acc = 0.0;
    for (a, b, v) in f.intervals() {
        let piece = v * (b - a);
        if v > 0.0 && acc + piece >= volume {
            return f.truncate(a + (volume - acc) / v);
        }
        acc += piece;
    }
    f.clone()
}

/// LP duals of the long-heavy jobs and their line schedule.
fn long_heavy_lines(lh: &JobSet, horizon: f64, delta: f64) -> Result<(AlphaVector, LineSchedule)> {
    let inst = build_discretized_lp(lh, &lh.volumes(), horizon, delta).map_err(|e| e.in_stage("lp"))?;
    let sol = solve_lp(&inst).map_err(|e| e.in_stage("lp"))?;
    let alpha = AlphaVector::new(sol.alpha).map_err(|e| e.in_stage("line schedule"))?;
    let ls = build_line_schedule(lh, &alpha).map_err(|e| e.in_stage("line schedule"))?;
    Ok((alpha, ls))
}

/// The LSApprox pipeline.
///
/// Long-heavy jobs get a line schedule from the LP duals, stretched so each
/// reaches its volume and squashed into `1 - μ` of the resource. Every other
/// job runs at `min(μ/n, r_j)` from time 0. Without a slot-width override
/// the default width is halved (up to [`MAX_REFINEMENTS`] times) while some
/// long-heavy job receives no volume.
pub fn lsapprox(jobs: &JobSet, params: &LsApproxParams) -> Result<LsApproxOutcome> {
    let mu = params.mu()?;
    let n = jobs.len();
    let sub = subdivide(jobs, mu).map_err(|e| e.in_stage("subdivide"))?;
    let share = mu / n.max(1) as f64;
    let mut out = vec![StepFunction::zero(); n];

    for &j in sub.light.iter().chain(&sub.short_heavy) {
        let job = jobs.jobs()[j];
        let rate = share.min(job.requirement());
        out[j] = StepFunction::constant_on(0.0, job.volume() / rate, rate)?;
    }

    let lh = jobs.select(&sub.long_heavy);
    let p_max = lh.max_processing_time();
    let horizon = params.horizon_override.unwrap_or(n as f64 * p_max);
    let mut delta = params.delta_override.unwrap_or(horizon / DEFAULT_SLOTS as f64);
    let guarantee_delta = horizon * libm::pow(share, 6.0);
    let mut stretch = 1.0;
    let mut alpha_out = None;

    if !lh.is_empty() {
        lh.require_non_degenerate().map_err(|e| e.in_stage("subdivide"))?;
        let mut refinements = 0;
        let (alpha, ls) = loop {
            let (alpha, ls) = long_heavy_lines(&lh, horizon, delta)?;
            if ls.vbar.iter().all(|v| *v > 0.0) {
                break (alpha, ls);
            }
            // slots wider than a job let its dual line be dominated everywhere
            if params.delta_override.is_some() || refinements == MAX_REFINEMENTS {
                return Err(Error::InvalidParameter("a long-heavy job receives no volume").in_stage("stretch"));
            }
            refinements += 1;
            delta /= 2.0;
        };
        stretch = lh.iter().zip(&ls.vbar).map(|(j, vb)| j.volume() / vb).fold(0.0, f64::max);
        let factor = stretch / (1.0 - mu);
        for (pos, &j) in sub.long_heavy.iter().enumerate() {
            let f = ls.schedule.assignment(pos).stretch(factor).scale(1.0 - mu);
            out[j] = trim_to_volume(&f, jobs.jobs()[j].volume());
        }
        alpha_out = Some(alpha);
    }

    Ok(LsApproxOutcome {
        schedule: Schedule::new(out)?,
        subdivision: sub,
        mu,
        horizon,
        delta,
        guarantee_delta,
        stretch,
        alpha: alpha_out,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Candidate {
    Greedy,
    LineSchedule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestReport {
    pub winner: Candidate,
    pub greedy_tct: f64,
    pub ls_tct: Option<f64>,
    /// `C^F` of the exact line schedule, when it ran.
    pub ls_fractional: Option<f64>,
    pub ls_error: Option<Error>,
    pub bounds: Bounds,
}

/// Greedy against LS (exact or LSApprox); the smaller total completion time
/// wins, Greedy on ties and when LS fails.
pub fn best_schedule(jobs: &JobSet, params: &LsApproxParams, use_exact_ls: bool) -> (Schedule, BestReport) {
    let g = greedy(jobs);
    let greedy_tct = total_completion_time(&g);
    let mut ls_fractional = None;
    let ls = if use_exact_ls {
        ls_exact_line(jobs, LS_VOL_TOL).map(|ls| {
            ls_fractional = fractional_completion_time(jobs, &ls.schedule).ok().map(|(_, f)| f);
            ls.schedule
        })
    } else {
        lsapprox(jobs, params).map(|o| o.schedule)
    };
    let bounds = lower_bounds(jobs, ls_fractional);
    match ls {
        Ok(s) => {
            let ls_tct = total_completion_time(&s);
            let (winner, schedule) =
                if ls_tct < greedy_tct { (Candidate::LineSchedule, s) } else { (Candidate::Greedy, g) };
            let report =
                BestReport { winner, greedy_tct, ls_tct: Some(ls_tct), ls_fractional, ls_error: None, bounds };
            (schedule, report)
        }
        Err(e) => {
            let report = BestReport {
                winner: Candidate::Greedy,
                greedy_tct,
                ls_tct: None,
                ls_fractional: None,
                ls_error: Some(e),
                bounds,
            };
            (g, report)
        }
    }
}
