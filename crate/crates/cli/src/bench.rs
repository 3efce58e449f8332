//! `bench`: one CSV row per instance and algorithm.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::Zero;
use pcsteiner::oracle::oracle_solve;
use pcsteiner::rational::{self, Rational};
use pcsteiner::Instance;
use serde::Serialize;

use crate::failure::CliResult;
use crate::run::{run, Algorithm, RunConfig};

#[derive(Debug, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: Algorithm,
    pub value: String,
    /// Blank when the oracle is over budget.
    pub ratio: String,
    pub wall_ms: String,
    pub error: String,
}

/// The `*.json` files of `dir` in name order, bundle manifests excluded.
pub fn corpus(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.file_name().is_some_and(|n| n != "manifest.json"))
        .collect();
    files.sort();
    Ok(files)
}

fn ratio(value: &Rational, exact: Option<&Rational>) -> String {
    match exact {
        Some(x) if !x.is_zero() => rational::format(&(value / x)),
        Some(_) if value.is_zero() => "1".into(),
        _ => String::new(),
    }
}

pub fn bench(dir: &Path, algs: &[Algorithm], cfg: &RunConfig, timing: bool) -> CliResult<Vec<BenchRow>> {
    let mut rows = Vec::new();
    let ms = |start: Instant| if timing { format!("{:.3}", start.elapsed().as_secs_f64() * 1e3) } else { String::new() };
    for path in corpus(dir)? {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let row = |algorithm, value: String, ratio: String, wall_ms: String, error: String| BenchRow {
            instance: name.clone(),
            algorithm,
            value,
            ratio,
            wall_ms,
            error,
        };
        let inst = match Instance::load(&path) {
            Ok(inst) => inst,
            Err(e) => {
                for &alg in algs {
                    rows.push(row(alg, String::new(), String::new(), String::new(), e.to_string()));
                }
                continue;
            }
        };
        let start = Instant::now();
        let exact = oracle_solve(&inst, cfg.problem_for(&inst), &cfg.budget).map(|s| s.total);
        let exact_ms = ms(start);
        if let Err(e) = &exact {
            log::info!("{name}: no exact reference ({e})");
        }
        let reference = exact.as_ref().ok();
        for &alg in algs {
            if alg == Algorithm::Exact {
                rows.push(match &exact {
                    Ok(v) => row(alg, rational::format(v), ratio(v, reference), exact_ms.clone(), String::new()),
                    Err(e) => row(alg, String::new(), String::new(), exact_ms.clone(), e.to_string()),
                });
                continue;
            }
            let start = Instant::now();
            let result = run(&inst, alg, cfg);
            let wall = ms(start);
            rows.push(match result {
                Ok(r) => {
                    let v = r.solution.total;
                    row(alg, rational::format(&v), ratio(&v, reference), wall, String::new())
                }
                Err(e) => row(alg, String::new(), String::new(), wall, e.message),
            });
        }
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], out: Option<&Path>) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| std::io::Error::other(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    crate::emit(&String::from_utf8_lossy(&bytes), out)
}
