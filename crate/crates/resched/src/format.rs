//! JSON instance and schedule files.
//!
//! Numbers are written with 17 significant digits (`%.17g` style) so a
//! write/read/write cycle is byte-stable.

use std::fmt::Write as _;

use resched_core::{Error as CoreError, JobSet, Schedule, StepFunction};
use serde::Deserialize;

#[derive(Debug)]
pub enum FormatError {
    Json(serde_json::Error),
    Invalid(String),
    Core(CoreError),
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormatError::Json(e) => write!(f, "malformed JSON: {e}"),
            FormatError::Invalid(m) => write!(f, "{m}"),
            FormatError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

impl From<CoreError> for FormatError {
    fn from(e: CoreError) -> Self {
        FormatError::Core(e)
    }
}

/// `%.17g`: 17 significant digits, trailing zeros dropped, exponent form
/// below `1e-4` and from `1e17` on.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        // JSON has no representation; callers never pass these
        return "null".into();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mant = strip_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mant}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    strip_zeros(&format!("{x:.decimals$}")).to_string()
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_list(out: &mut String, xs: &[f64]) {
    out.push('[');
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_g17(*x));
    }
    out.push(']');
}

#[derive(Deserialize)]
struct JobEntry {
    v: f64,
    r: f64,
}

#[derive(Deserialize)]
struct InstanceFile {
    jobs: Vec<JobEntry>,
}

pub fn parse_instance(text: &str) -> Result<JobSet, FormatError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let pairs: Vec<(f64, f64)> = file.jobs.iter().map(|j| (j.v, j.r)).collect();
    Ok(JobSet::from_pairs(&pairs)?)
}

pub fn write_instance(jobs: &JobSet) -> String {
    let mut out = String::from("{\"jobs\":[");
    for (i, j) in jobs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{{\"v\":{},\"r\":{}}}", fmt_g17(j.volume()), fmt_g17(j.requirement()));
    }
    out.push_str("]}\n");
    out
}

/// A schedule file, optionally carrying the α vector of a line schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleFile {
    pub schedule: Schedule,
    pub alpha: Option<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawSchedule {
    breakpoints: Vec<f64>,
    assignments: Vec<Vec<f64>>,
    #[serde(default)]
    completion_times: Option<Vec<f64>>,
    #[serde(default)]
    alpha: Option<Vec<f64>>,
}

pub fn parse_schedule(text: &str) -> Result<ScheduleFile, FormatError> {
    let raw: RawSchedule = serde_json::from_str(text)?;
    if raw.breakpoints.first().is_some_and(|t| *t != 0.0) {
        return Err(FormatError::Invalid("first breakpoint must be 0".into()));
    }
    let intervals = raw.breakpoints.len().saturating_sub(1);
    let mut fs = Vec::with_capacity(raw.assignments.len());
    for (j, row) in raw.assignments.iter().enumerate() {
        if row.len() != intervals {
            return Err(FormatError::Invalid(format!(
                "job {j} has {} values for {intervals} intervals",
                row.len()
            )));
        }
        fs.push(if intervals == 0 { StepFunction::zero() } else { StepFunction::from_grid(&raw.breakpoints, row)? });
    }
    let schedule = Schedule::new(fs)?;
    if let Some(c) = &raw.completion_times {
        if c.len() != schedule.len() {
            return Err(FormatError::Invalid("completion_times length differs from assignments".into()));
        }
    }
    if let Some(a) = &raw.alpha {
        if a.len() != schedule.len() {
            return Err(FormatError::Invalid("alpha length differs from assignments".into()));
        }
    }
    Ok(ScheduleFile { schedule, alpha: raw.alpha })
}

pub fn write_schedule(schedule: &Schedule, alpha: Option<&[f64]>) -> String {
    let grid = schedule.grid();
    let grid = if grid.len() < 2 { vec![0.0] } else { grid };
    let mut out = String::from("{\"breakpoints\":");
    write_list(&mut out, &grid);
    out.push_str(",\"assignments\":[");
    for (j, f) in schedule.assignments().iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        let vals = if grid.len() < 2 { Vec::new() } else { f.sample(&grid) };
        write_list(&mut out, &vals);
    }
    out.push_str("],\"completion_times\":");
    write_list(&mut out, &schedule.completion_times());
    if let Some(a) = alpha {
        out.push_str(",\"alpha\":");
        write_list(&mut out, a);
    }
    out.push_str("}\n");
    out
}
