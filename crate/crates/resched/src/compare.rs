//! Batch comparison over many instance files.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::format::parse_instance;
use crate::report::{FailureRecord, RunRecord};
use crate::runner::{run, Algo, RunParams};

/// Expands glob patterns into a sorted, de-duplicated file list.
pub fn expand(patterns: &[String]) -> Result<Vec<PathBuf>, String> {
    let mut out = Vec::new();
    for p in patterns {
        let paths = glob::glob(p).map_err(|e| format!("bad pattern `{p}`: {e}"))?;
        for entry in paths {
            out.push(entry.map_err(|e| e.to_string())?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Runs every algorithm on every instance across `workers` threads. Rows
/// come back ordered by (instance, algorithm) whatever the finishing order.
pub fn compare(files: &[PathBuf], algos: &[Algo], params: &RunParams, workers: usize) -> Vec<RunRecord> {
    let tasks: Vec<(usize, usize)> =
        (0..files.len()).flat_map(|i| (0..algos.len()).map(move |a| (i, a))).collect();
    let slots: Vec<Mutex<Option<RunRecord>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers.max(1).min(tasks.len().max(1)) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, a)) = tasks.get(k) else { break };
                let rec = run_one(&files[i], algos[a], params);
                *slots[k].lock().unwrap() = Some(rec);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap().expect("every task ran")).collect()
}

fn run_one(path: &PathBuf, algo: Algo, params: &RunParams) -> RunRecord {
    let name = path.display().to_string();
    let loaded = std::fs::read_to_string(path).map_err(|e| e.to_string()).and_then(|t| {
        parse_instance(&t).map_err(|e| e.to_string())
    });
    match loaded {
        Ok(jobs) => run(algo, &name, &jobs, params).record,
        Err(e) => {
            let mut r = RunRecord::new(&name, algo.name(), 0);
            r.failure = Some(FailureRecord { kind: "input".into(), message: e, index: None });
            r
        }
    }
}
