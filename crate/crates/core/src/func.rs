//! Finitely supported piecewise functions of time.
//!
//! Both carriers use right-open intervals `[t_k, t_{k+1})` over a strictly
//! increasing breakpoint list that starts at `0`, and are zero from the last
//! breakpoint on.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Relative width under which adjacent breakpoints are merged.
pub const BREAKPOINT_MERGE_REL: f64 = 1e-12;

/// Piecewise-constant function with bounded support.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl Default for StepFunction {
    fn default() -> Self {
        StepFunction::zero()
    }
}

impl StepFunction {
    pub fn zero() -> Self {
        StepFunction { breakpoints: vec![0.0], values: Vec::new() }
    }

    /// Builds a step function from `breakpoints` (starting at 0, strictly
    /// increasing) and one value per interval between consecutive breakpoints.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidFunction("no breakpoints"));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::InvalidFunction("first breakpoint must be 0"));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::LengthMismatch {
                expected: breakpoints.len().saturating_sub(1),
                found: values.len(),
            });
        }
        if breakpoints.iter().any(|t| !t.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction("non-finite entry"));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidFunction("breakpoints must be strictly increasing"));
        }
        Ok(Self::canonical(breakpoints, values))
    }

    /// Like [`StepFunction::new`] but the grid may start after 0 (the
    /// function is zero before it) and degenerate intervals are dropped.
    pub fn from_grid(grid: &[f64], values: &[f64]) -> Result<Self> {
        if grid.len() != values.len() + 1 {
            return Err(Error::LengthMismatch {
                expected: grid.len().saturating_sub(1),
                found: values.len(),
            });
        }
        if grid.is_empty() {
            return Ok(Self::zero());
        }
        if grid[0] < 0.0 || grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidFunction("grid must be finite and non-negative"));
        }
        let mut bps = Vec::with_capacity(grid.len() + 1);
        let mut vals = Vec::with_capacity(values.len() + 1);
        bps.push(0.0);
        if grid[0] > 0.0 {
            bps.push(grid[0]);
            vals.push(0.0);
        }
        for (k, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidFunction("non-finite value"));
            }
            let end = grid[k + 1];
            if end < grid[k] {
                return Err(Error::InvalidFunction("grid must be non-decreasing"));
            }
            if end > *bps.last().unwrap() {
                bps.push(end);
                vals.push(v);
            }
        }
        Ok(Self::canonical(bps, vals))
    }

    /// Constant `value` on `[start, end)`.
    pub fn constant_on(start: f64, end: f64, value: f64) -> Result<Self> {
        if !(start >= 0.0 && end >= start && end.is_finite() && value.is_finite()) {
            return Err(Error::InvalidFunction("need 0 <= start <= end < inf"));
        }
        Self::from_grid(&[start, end], &[value])
    }

    fn canonical(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        let last = *breakpoints.last().unwrap();
        let eps = BREAKPOINT_MERGE_REL * last;
        let mut bps: Vec<f64> = Vec::with_capacity(breakpoints.len());
        let mut vals: Vec<f64> = Vec::with_capacity(values.len());
        bps.push(0.0);
        for (k, &v) in values.iter().enumerate() {
            let end = breakpoints[k + 1];
            let start = *bps.last().unwrap();
            if end - start < eps {
                // sliver: the next interval absorbs it
                continue;
            }
            if vals.last() == Some(&v) {
                *bps.last_mut().unwrap() = end;
            } else {
                bps.push(end);
                vals.push(v);
            }
        }
        while vals.last() == Some(&0.0) {
            vals.pop();
            bps.pop();
        }
        StepFunction { breakpoints: bps, values: vals }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// End of the last interval; 0 for the zero function.
    pub fn end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// `(start, end, value)` for every interval.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.breakpoints[k], self.breakpoints[k + 1], v))
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 || self.values.is_empty() || t >= self.end() {
            return 0.0;
        }
        // index of the last breakpoint <= t
        let k = self.breakpoints.partition_point(|&b| b <= t) - 1;
        self.values[k]
    }

    /// `sup { t : f(t) > 0 }`, or 0 if the function is never positive.
    pub fn support_end(&self) -> f64 {
        self.intervals()
            .filter(|&(_, _, v)| v > 0.0)
            .map(|(_, e, _)| e)
            .last()
            .unwrap_or(0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::min)
    }

    pub fn integral(&self) -> f64 {
        crate::num::stable_sum(self.intervals().map(|(a, b, v)| v * (b - a)))
    }

    /// `∫_0^c f(t) dt`.
    pub fn integral_to(&self, c: f64) -> f64 {
        crate::num::stable_sum(
            self.intervals()
                .take_while(|&(a, _, _)| a < c)
                .map(|(a, b, v)| v * (b.min(c) - a)),
        )
    }

    /// `∫_0^∞ t · f(t) dt`.
    pub fn first_moment(&self) -> f64 {
        crate::num::stable_sum(self.intervals().map(|(a, b, v)| v * (b - a) * (a + b) * 0.5))
    }

    /// `∫_0^c max(f(t) - y, 0) dt`; `c` may be infinite.
    pub fn upper_area(&self, c: f64, y: f64) -> f64 {
        crate::num::stable_sum(
            self.intervals()
                .take_while(|&(a, _, _)| a < c)
                .map(|(a, b, v)| (v - y).max(0.0) * (b.min(c) - a)),
        )
    }

    /// Lebesgue measure of `{ t < c : f(t) > y }`.
    pub fn measure_above(&self, c: f64, y: f64) -> f64 {
        self.intervals()
            .take_while(|&(a, _, _)| a < c)
            .filter(|&(_, _, v)| v > y)
            .map(|(a, b, _)| b.min(c) - a)
            .sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let values = self.values.iter().map(|v| v * factor).collect();
        Self::canonical(self.breakpoints.clone(), values)
    }

    /// `t ↦ f(t / s)`, stretching the time axis by `s > 0`.
    pub fn stretch(&self, s: f64) -> Self {
        let bps = self.breakpoints.iter().map(|t| t * s).collect();
        Self::canonical(bps, self.values.clone())
    }

    /// Zero from `c` on.
    pub fn truncate(&self, c: f64) -> Self {
        if c >= self.end() {
            return self.clone();
        }
        let mut bps = Vec::new();
        let mut vals = Vec::new();
        bps.push(0.0);
        for (a, b, v) in self.intervals() {
            if a >= c {
                break;
            }
            bps.push(b.min(c));
            vals.push(v);
        }
        if bps.len() == 1 {
            return Self::zero();
        }
        Self::canonical(bps, vals)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::sum(&[self.clone(), other.clone()])
    }

    /// Pointwise sum of many step functions.
    pub fn sum(fs: &[StepFunction]) -> Self {
        let grid = merged_grid(fs.iter().map(|f| f.breakpoints()));
        if grid.len() < 2 {
            return Self::zero();
        }
        let mut values = vec![0.0; grid.len() - 1];
        for f in fs {
            for (k, v) in sample_on_grid(f, &grid).into_iter().enumerate() {
                values[k] += v;
            }
        }
        Self::canonical(grid, values)
    }

    /// Value of `self` on every interval of `grid`; `grid` must contain all
    /// of `self`'s breakpoints that lie inside it.
    pub fn sample(&self, grid: &[f64]) -> Vec<f64> {
        sample_on_grid(self, grid)
    }
}

/// Sorted union of several breakpoint lists, always containing 0.
pub fn merged_grid<'a, I>(lists: I) -> Vec<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut grid: Vec<f64> = vec![0.0];
    for l in lists {
        grid.extend_from_slice(l);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn sample_on_grid(f: &StepFunction, grid: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len().saturating_sub(1));
    let mut k = 0usize;
    for w in grid.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        while k < f.values.len() && f.breakpoints[k + 1] <= mid {
            k += 1;
        }
        if k < f.values.len() && f.breakpoints[k] <= mid {
            out.push(f.values[k]);
        } else {
            out.push(0.0);
        }
    }
    out
}

/// One affine piece: value at the left endpoint and slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub value: f64,
    pub slope: f64,
}

/// Piecewise-linear (not necessarily continuous) function with bounded
/// support.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
}

impl Default for PiecewiseLinear {
    fn default() -> Self {
        PiecewiseLinear::zero()
    }
}

impl PiecewiseLinear {
    pub fn zero() -> Self {
        PiecewiseLinear { breakpoints: vec![0.0], segments: Vec::new() }
    }

    pub fn new(breakpoints: Vec<f64>, segments: Vec<Segment>) -> Result<Self> {
        if breakpoints.first() != Some(&0.0) {
            return Err(Error::InvalidFunction("first breakpoint must be 0"));
        }
        if segments.len() + 1 != breakpoints.len() {
            return Err(Error::LengthMismatch {
                expected: breakpoints.len() - 1,
                found: segments.len(),
            });
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0])
            || breakpoints.iter().any(|t| !t.is_finite())
            || segments.iter().any(|s| !s.value.is_finite() || !s.slope.is_finite())
        {
            return Err(Error::InvalidFunction("malformed breakpoints or segments"));
        }
        Ok(PiecewiseLinear { breakpoints, segments })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    fn locate(&self, t: f64) -> Option<usize> {
        if t < 0.0 || self.segments.is_empty() || t >= self.end() {
            return None;
        }
        Some(self.breakpoints.partition_point(|&b| b <= t) - 1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.locate(t) {
            Some(k) => {
                let s = self.segments[k];
                s.value + s.slope * (t - self.breakpoints[k])
            }
            None => 0.0,
        }
    }

    /// Left limit `lim_{s↑t} f(s)`.
    pub fn eval_left(&self, t: f64) -> f64 {
        if t <= 0.0 || self.segments.is_empty() || t > self.end() {
            return 0.0;
        }
        let k = self.breakpoints.partition_point(|&b| b < t) - 1;
        let s = self.segments[k];
        s.value + s.slope * (t - self.breakpoints[k])
    }

    pub fn integral(&self) -> f64 {
        crate::num::stable_sum(self.segments.iter().enumerate().map(|(k, s)| {
            let len = self.breakpoints[k + 1] - self.breakpoints[k];
            len * (s.value + 0.5 * s.slope * len)
        }))
    }

    /// Largest jump between the left limit and the value at any breakpoint.
    pub fn max_jump(&self) -> f64 {
        self.breakpoints
            .iter()
            .skip(1)
            .map(|&t| (self.eval(t) - self.eval_left(t)).abs())
            .fold(0.0, f64::max)
    }
}
