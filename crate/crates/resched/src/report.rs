//! Run records and the comparison CSV.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

pub const CSV_HEADER: [&str; 12] =
    ["instance", "algo", "n", "makespan", "tct", "ftct", "c_a", "c_l", "lb3", "ratio_best", "wall_ms", "seed"];

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct BoundsRecord {
    /// Optimal makespan `max(V, p_max)`.
    pub m_star: f64,
    pub c_a: f64,
    pub c_l: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lb3: Option<f64>,
    /// Largest available lower bound on total completion time.
    pub best: f64,
}

/// Effective parameter values, after rounding and defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ParamsRecord {
    pub eps: f64,
    pub mu: f64,
    pub c: f64,
    pub tol: f64,
    pub grid: usize,
    pub exact_ls: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guarantee_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationRecord {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub job: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<(f64, f64)>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationRecord {
    pub feasible: bool,
    pub violations: Vec<ViolationRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub algo: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub makespan: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ftct: Option<f64>,
    pub bounds: BoundsRecord,
    /// `objective / bound`, only for positive bounds.
    pub ratios: BTreeMap<String, f64>,
    pub wall_ms: f64,
    pub params: ParamsRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureRecord>,
    /// Algorithm-specific extras such as the winning candidate.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
}

impl RunRecord {
    pub fn new(instance: &str, algo: &str, n: usize) -> Self {
        RunRecord {
            instance: instance.to_string(),
            algo: algo.to_string(),
            n,
            seed: None,
            makespan: None,
            tct: None,
            ftct: None,
            bounds: BoundsRecord::default(),
            ratios: BTreeMap::new(),
            wall_ms: 0.0,
            params: ParamsRecord::default(),
            validation: None,
            failure: None,
            details: BTreeMap::new(),
        }
    }

    pub fn set_ratio(&mut self, name: &str, objective: Option<f64>, bound: Option<f64>) {
        if let (Some(o), Some(b)) = (objective, bound) {
            if b > 0.0 {
                self.ratios.insert(name.to_string(), o / b);
            }
        }
    }

    /// The CSV `ratio_best` column: makespan over `M*` for WaterFill, total
    /// completion time over the best lower bound otherwise.
    pub fn ratio_best(&self) -> Option<f64> {
        let key = if self.algo == "waterfill" { "makespan/m_star" } else { "tct/best" };
        self.ratios.get(key).copied()
    }

    pub fn failed(&self) -> bool {
        self.failure.is_some() || self.validation.as_ref().is_some_and(|v| !v.feasible)
    }
}

fn num(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

/// Writes the header, one row per record and one summary row per algorithm
/// holding the largest `ratio_best`. Failed rows carry `failed` in
/// `ratio_best`. `timing = false` blanks `wall_ms` so reruns are
/// byte-identical.
pub fn write_csv<W: Write>(out: W, records: &[RunRecord], algos: &[String], timing: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let ratio = if r.failed() { "failed".to_string() } else { num(r.ratio_best()) };
        let wall = if timing { format!("{:.3}", r.wall_ms) } else { String::new() };
        w.write_record([
            r.instance.clone(),
            r.algo.clone(),
            r.n.to_string(),
            num(r.makespan),
            num(r.tct),
            num(r.ftct),
            num(Some(r.bounds.c_a)),
            num(Some(r.bounds.c_l)),
            num(r.bounds.lb3),
            ratio,
            wall,
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    for a in algos {
        let max = records
            .iter()
            .filter(|r| &r.algo == a && !r.failed())
            .filter_map(|r| r.ratio_best())
            .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
        let mut row = vec![String::new(); CSV_HEADER.len()];
        row[0] = "summary".into();
        row[1] = a.clone();
        row[9] = num(max);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(algo: &str, tct: f64, best: f64) -> RunRecord {
        let mut r = RunRecord::new("a.json", algo, 2);
        r.tct = Some(tct);
        r.bounds.best = best;
        r.set_ratio("tct/best", r.tct, Some(best));
        r
    }

    #[test]
    fn ratios_need_positive_bounds() {
        let mut r = RunRecord::new("x", "greedy", 0);
        r.set_ratio("tct/best", Some(1.0), Some(0.0));
        assert!(r.ratios.is_empty());
        assert_eq!(rec("greedy", 3.0, 2.0).ratio_best(), Some(1.5));
    }

    #[test]
    fn csv_layout() {
        let records = vec![rec("greedy", 3.0, 2.0), rec("greedy", 2.0, 2.0)];
        let mut buf = Vec::new();
        write_csv(&mut buf, &records, &["greedy".into()], false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "instance,algo,n,makespan,tct,ftct,c_a,c_l,lb3,ratio_best,wall_ms,seed");
        assert_eq!(lines[1], "a.json,greedy,2,,3,,0,0,,1.5,,");
        assert_eq!(lines[3], "summary,greedy,,,,,,,,1.5,,");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn failed_rows_are_marked() {
        let mut r = rec("ls", 3.0, 2.0);
        r.failure = Some(FailureRecord { kind: "algorithm".into(), message: "x".into(), index: None });
        let mut buf = Vec::new();
        write_csv(&mut buf, &[r], &["ls".into()], true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().contains(",failed,"));
        assert_eq!(text.lines().nth(2).unwrap(), "summary,ls,,,,,,,,,,");
    }
}
