//! Jobs, schedules, feasibility and objectives.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::func::{merged_grid, StepFunction};

/// A job with processing volume `v > 0` and resource requirement `0 < r <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Job {
    volume: f64,
    requirement: f64,
}

impl Job {
    pub fn new(volume: f64, requirement: f64) -> Result<Job> {
        let ok = volume.is_finite()
            && volume > 0.0
            && requirement.is_finite()
            && requirement > 0.0
            && requirement <= 1.0;
        if !ok {
            return Err(Error::InvalidJob { index: 0, volume, requirement });
        }
        Ok(Job { volume, requirement })
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn requirement(&self) -> f64 {
        self.requirement
    }

    /// `p = v / r`, the shortest possible duration.
    pub fn processing_time(&self) -> f64 {
        self.volume / self.requirement
    }
}

/// An ordered list of jobs; the position is the job id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JobSet {
    jobs: Vec<Job>,
}

impl JobSet {
    pub fn new(jobs: Vec<Job>) -> JobSet {
        JobSet { jobs }
    }

    /// Builds a job set from `(volume, requirement)` pairs, reporting the
    /// index of the first invalid pair.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<JobSet> {
        let jobs = pairs
            .iter()
            .enumerate()
            .map(|(index, &(v, r))| {
                Job::new(v, r).map_err(|_| Error::InvalidJob { index, volume: v, requirement: r })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(JobSet { jobs })
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Job> {
        self.jobs.iter()
    }

    pub fn get(&self, j: usize) -> Option<&Job> {
        self.jobs.get(j)
    }

    pub fn volumes(&self) -> Vec<f64> {
        self.jobs.iter().map(Job::volume).collect()
    }

    pub fn total_volume(&self) -> f64 {
        crate::num::stable_sum(self.jobs.iter().map(Job::volume))
    }

    pub fn max_processing_time(&self) -> f64 {
        self.jobs.iter().map(Job::processing_time).fold(0.0, f64::max)
    }

    pub fn min_requirement(&self) -> f64 {
        self.jobs.iter().map(Job::requirement).fold(1.0, f64::min)
    }

    /// The first `k` jobs.
    pub fn prefix(&self, k: usize) -> JobSet {
        JobSet { jobs: self.jobs[..k.min(self.jobs.len())].to_vec() }
    }

    /// Jobs at the given indices, in the given order.
    pub fn select(&self, ids: &[usize]) -> JobSet {
        JobSet { jobs: ids.iter().map(|&j| self.jobs[j]).collect() }
    }

    /// Indices sorted by ascending volume, ties by index.
    pub fn ascending_volume_order(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.len()).collect();
        ids.sort_by(|&a, &b| self.jobs[a].volume.total_cmp(&self.jobs[b].volume).then(a.cmp(&b)));
        ids
    }

    /// First pair of jobs with equal volumes, if any.
    pub fn find_tie(&self) -> Option<(usize, usize)> {
        let ids = self.ascending_volume_order();
        ids.windows(2)
            .find(|w| self.jobs[w[0]].volume == self.jobs[w[1]].volume)
            .map(|w| (w[0], w[1]))
    }

    /// All volumes pairwise distinct.
    pub fn is_non_degenerate(&self) -> bool {
        self.find_tie().is_none()
    }

    pub fn require_non_degenerate(&self) -> Result<()> {
        match self.find_tie() {
            Some((first, second)) => Err(Error::Degenerate { first, second }),
            None => Ok(()),
        }
    }

    /// Breaks volume ties explicitly: the job at index `j` that shares its
    /// volume with an earlier job is scaled by `1 + 1e-12 · j`. Repeats until
    /// the set is non-degenerate.
    pub fn perturb_ties(&self) -> JobSet {
        let mut out = self.clone();
        let mut round = 1.0;
        while let Some((a, b)) = out.find_tie() {
            let j = a.max(b);
            let job = &mut out.jobs[j];
            job.volume *= 1.0 + 1e-12 * round * j as f64;
            round += 1.0;
        }
        out
    }
}

impl<'a> IntoIterator for &'a JobSet {
    type Item = &'a Job;
    type IntoIter = core::slice::Iter<'a, Job>;
    fn into_iter(self) -> Self::IntoIter {
        self.jobs.iter()
    }
}

/// One step function per job.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Schedule {
    assignments: Vec<StepFunction>,
}

impl Schedule {
    /// Fails if any assignment takes a negative value.
    pub fn new(assignments: Vec<StepFunction>) -> Result<Schedule> {
        if assignments.iter().any(|f| f.min_value() < 0.0) {
            return Err(Error::InvalidFunction("resource assignments must be non-negative"));
        }
        Ok(Schedule { assignments })
    }

    /// `n` jobs that never receive resource.
    pub fn idle(n: usize) -> Schedule {
        Schedule { assignments: alloc::vec![StepFunction::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn assignments(&self) -> &[StepFunction] {
        &self.assignments
    }

    pub fn assignment(&self, j: usize) -> &StepFunction {
        &self.assignments[j]
    }

    pub fn into_assignments(self) -> Vec<StepFunction> {
        self.assignments
    }

    /// The first `k` assignments.
    pub fn prefix(&self, k: usize) -> Schedule {
        Schedule { assignments: self.assignments[..k.min(self.len())].to_vec() }
    }

    pub(crate) fn push(&mut self, f: StepFunction) {
        self.assignments.push(f);
    }

    /// Total usage `R̄(t) = Σ_j R_j(t)`.
    pub fn total_usage(&self) -> StepFunction {
        StepFunction::sum(&self.assignments)
    }

    /// Sorted union of all breakpoints.
    pub fn grid(&self) -> Vec<f64> {
        merged_grid(self.assignments.iter().map(StepFunction::breakpoints))
    }

    /// `C_j = sup { t : R_j(t) > 0 }`.
    pub fn completion_time(&self, j: usize) -> f64 {
        self.assignments[j].support_end()
    }

    pub fn completion_times(&self) -> Vec<f64> {
        self.assignments.iter().map(StepFunction::support_end).collect()
    }

    pub fn volumes(&self) -> Vec<f64> {
        self.assignments.iter().map(StepFunction::integral).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `Σ_j R_j(t) > 1`.
    Overuse,
    /// `R_j(t) > r_j`.
    RequirementExceeded,
    /// `∫ R_j < v_j`.
    VolumeDeficit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub job: Option<usize>,
    pub interval: Option<(f64, f64)>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn worst(&self, kind: ViolationKind) -> f64 {
        self.violations
            .iter()
            .filter(|v| v.kind == kind)
            .map(|v| v.magnitude)
            .fold(0.0, f64::max)
    }
}

/// Checks the three feasibility clauses. Resource clauses use the absolute
/// tolerance `tol`; volume deficits are compared against `tol · max(1, v_j)`.
pub fn validate_schedule(jobs: &JobSet, sched: &Schedule, tol: f64) -> Result<ValidationReport> {
    if jobs.len() != sched.len() {
        return Err(Error::LengthMismatch { expected: jobs.len(), found: sched.len() });
    }
    let mut violations = Vec::new();
    let grid = sched.grid();
    let samples: Vec<Vec<f64>> = sched.assignments().iter().map(|f| f.sample(&grid)).collect();
    for (k, w) in grid.windows(2).enumerate() {
        let mut total = 0.0;
        for (j, job) in jobs.iter().enumerate() {
            let rate = samples[j][k];
            total += rate;
            let excess = rate - job.requirement();
            if excess > tol {
                violations.push(Violation {
                    kind: ViolationKind::RequirementExceeded,
                    job: Some(j),
                    interval: Some((w[0], w[1])),
                    magnitude: excess,
                });
            }
        }
        if total - 1.0 > tol {
            violations.push(Violation {
                kind: ViolationKind::Overuse,
                job: None,
                interval: Some((w[0], w[1])),
                magnitude: total - 1.0,
            });
        }
    }
    for (j, job) in jobs.iter().enumerate() {
        let deficit = job.volume() - sched.assignment(j).integral();
        if deficit > tol * job.volume().max(1.0) {
            violations.push(Violation {
                kind: ViolationKind::VolumeDeficit,
                job: Some(j),
                interval: None,
                magnitude: deficit,
            });
        }
    }
    Ok(ValidationReport { feasible: violations.is_empty(), violations })
}

/// `M(R) = max_j C_j`; 0 for an empty schedule.
pub fn makespan(sched: &Schedule) -> f64 {
    sched.completion_times().into_iter().fold(0.0, f64::max)
}

/// `C(R) = Σ_j C_j`.
pub fn total_completion_time(sched: &Schedule) -> f64 {
    crate::num::stable_sum(sched.completion_times())
}

/// Per-job fractional completion times `∫ t R_j(t) / v_j dt` and their sum.
pub fn fractional_completion_time(jobs: &JobSet, sched: &Schedule) -> Result<(Vec<f64>, f64)> {
    if jobs.len() != sched.len() {
        return Err(Error::LengthMismatch { expected: jobs.len(), found: sched.len() });
    }
    let per_job: Vec<f64> = jobs
        .iter()
        .zip(sched.assignments())
        .map(|(job, f)| f.first_moment() / job.volume())
        .collect();
    let total = crate::num::stable_sum(per_job.iter().copied());
    Ok((per_job, total))
}

/// `A^C_R(y) = ∫_0^C max(R̄(t) - y, 0) dt`.
pub fn upper_resource_distribution(sched: &Schedule, c: f64, y: f64) -> f64 {
    sched.total_usage().upper_area(c, y)
}

/// `R ⪯ S` on total-usage profiles; see [`is_flatter`].
pub fn is_flatter_profile(r: &StepFunction, s: &StepFunction, tol: f64) -> bool {
    // A^C(y) is linear in C between breakpoints and piecewise linear in y
    // with kinks at usage levels, so the product grid is exhaustive.
    let mut cs = merged_grid([r.breakpoints(), s.breakpoints()]);
    cs.push(f64::INFINITY);
    let mut ys: Vec<f64> = r.values().iter().chain(s.values()).copied().collect();
    ys.push(0.0);
    ys.push(1.0);
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    cs.iter().all(|&c| ys.iter().all(|&y| r.upper_area(c, y) <= s.upper_area(c, y) + tol))
}

/// `R ⪯ S`: `A^C_R(y) <= A^C_S(y) + tol` for all `C >= 0` and `y ∈ [0, 1]`.
pub fn is_flatter(r: &Schedule, s: &Schedule, tol: f64) -> bool {
    is_flatter_profile(&r.total_usage(), &s.total_usage(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn three_jobs() -> JobSet {
        JobSet::from_pairs(&[(1.0, 0.75), (4.0, 0.5), (6.0, 2.0 / 3.0)]).unwrap()
    }

    #[test]
    fn job_validation() {
        assert!(Job::new(1.0, 0.0).is_err());
        assert!(Job::new(0.0, 0.5).is_err());
        assert!(Job::new(1.0, 1.5).is_err());
        assert!(Job::new(f64::INFINITY, 0.5).is_err());
        let j = Job::new(2.0, 0.5).unwrap();
        assert_eq!(j.processing_time(), 4.0);
        match JobSet::from_pairs(&[(1.0, 1.0), (1.0, 0.0)]) {
            Err(Error::InvalidJob { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degeneracy_and_perturbation() {
        let jobs = JobSet::from_pairs(&[(1.0, 1.0), (2.0, 0.5), (1.0, 0.5), (1.0, 0.2)]).unwrap();
        assert!(!jobs.is_non_degenerate());
        assert!(matches!(jobs.require_non_degenerate(), Err(Error::Degenerate { .. })));
        let p = jobs.perturb_ties();
        assert!(p.is_non_degenerate());
        assert_eq!(p.jobs()[0].volume(), 1.0);
        for (a, b) in jobs.iter().zip(p.iter()) {
            assert!((a.volume() - b.volume()).abs() <= 1e-10 * a.volume());
        }
        assert!(three_jobs().is_non_degenerate());
    }

    #[test]
    fn overuse_reported_with_magnitude() {
        let jobs = JobSet::from_pairs(&[(0.6, 1.0), (0.6, 1.0)]).unwrap();
        let f = StepFunction::constant_on(0.0, 1.0, 0.6).unwrap();
        let sched = Schedule::new(vec![f.clone(), f]).unwrap();
        let rep = validate_schedule(&jobs, &sched, 1e-9).unwrap();
        assert!(!rep.feasible);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].kind, ViolationKind::Overuse);
        assert!((rep.violations[0].magnitude - 0.2).abs() < 1e-12);
    }

    #[test]
    fn volume_deficit_reported() {
        let jobs = JobSet::from_pairs(&[(1.0, 1.0)]).unwrap();
        let sched = Schedule::new(vec![StepFunction::constant_on(0.0, 0.5, 1.0).unwrap()]).unwrap();
        let rep = validate_schedule(&jobs, &sched, 1e-9).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].kind, ViolationKind::VolumeDeficit);
        assert_eq!(rep.violations[0].magnitude, 0.5);
    }

    #[test]
    fn requirement_exceeded_reported() {
        let jobs = JobSet::from_pairs(&[(1.0, 0.5)]).unwrap();
        let sched = Schedule::new(vec![StepFunction::constant_on(0.0, 1.0, 1.0).unwrap()]).unwrap();
        let rep = validate_schedule(&jobs, &sched, 1e-9).unwrap();
        assert_eq!(rep.worst(ViolationKind::RequirementExceeded), 0.5);
    }

    #[test]
    fn tolerance_accepts_small_errors() {
        let jobs = JobSet::from_pairs(&[(1.0, 1.0)]).unwrap();
        let sched =
            Schedule::new(vec![StepFunction::constant_on(0.0, 1.0 - 1e-12, 1.0 + 1e-12).unwrap()])
                .unwrap();
        assert!(validate_schedule(&jobs, &sched, 1e-9).unwrap().feasible);
    }

    #[test]
    fn cardinality_mismatch_is_an_error() {
        let jobs = JobSet::from_pairs(&[(1.0, 1.0)]).unwrap();
        assert!(validate_schedule(&jobs, &Schedule::idle(2), 1e-9).is_err());
    }

    #[test]
    fn negative_assignments_rejected() {
        let f = StepFunction::constant_on(0.0, 1.0, -0.1).unwrap();
        assert!(Schedule::new(vec![f]).is_err());
    }

    #[test]
    fn objectives() {
        assert_eq!(makespan(&Schedule::default()), 0.0);
        let half = StepFunction::constant_on(0.0, 2.0, 0.5).unwrap();
        let sched = Schedule::new(vec![half]).unwrap();
        assert_eq!(makespan(&sched), 2.0);
        let jobs = JobSet::from_pairs(&[(1.0, 0.5)]).unwrap();
        assert_eq!(fractional_completion_time(&jobs, &sched).unwrap().1, 1.0);

        let unit = JobSet::from_pairs(&[(1.0, 1.0)]).unwrap();
        let s = Schedule::new(vec![StepFunction::constant_on(0.0, 1.0, 1.0).unwrap()]).unwrap();
        assert_eq!(total_completion_time(&s), 1.0);
        assert_eq!(fractional_completion_time(&unit, &s).unwrap().1, 0.5);
        let shifted = Schedule::new(vec![StepFunction::constant_on(2.5, 3.5, 1.0).unwrap()]).unwrap();
        assert_eq!(fractional_completion_time(&unit, &shifted).unwrap().1, 3.0);
    }

    #[test]
    fn upper_distribution_examples() {
        let s = Schedule::new(vec![StepFunction::constant_on(0.0, 1.0, 1.0).unwrap()]).unwrap();
        assert_eq!(upper_resource_distribution(&s, f64::INFINITY, 0.5), 0.5);
        assert_eq!(upper_resource_distribution(&s, f64::INFINITY, 0.0), 1.0);
        assert_eq!(upper_resource_distribution(&s, f64::INFINITY, 1.0), 0.0);
        assert_eq!(upper_resource_distribution(&s, 0.25, 0.0), 0.25);
    }

    #[test]
    fn flatness_examples() {
        let r = Schedule::new(vec![StepFunction::constant_on(0.0, 2.0, 0.5).unwrap()]).unwrap();
        let s = Schedule::new(vec![StepFunction::constant_on(0.0, 1.0, 1.0).unwrap()]).unwrap();
        assert!(is_flatter(&r, &s, 1e-12));
        assert!(!is_flatter(&s, &r, 1e-12));
        assert!(is_flatter(&s, &s, 0.0));
        assert!(is_flatter(&Schedule::default(), &s, 0.0));
    }
}
