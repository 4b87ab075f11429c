//! Benchmark harness: every solver on every instance file of a directory.

use std::fmt::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::io::parse_instance;
use crate::model::{evaluate_objective, Instance, Solution, Weight};

pub type SolverFn<'a> = Box<dyn Fn(&Instance) -> Result<Solution> + 'a>;

pub struct NamedSolver<'a> {
    pub name: String,
    pub solve: SolverFn<'a>,
}

impl<'a> NamedSolver<'a> {
    pub fn new(name: impl Into<String>, solve: impl Fn(&Instance) -> Result<Solution> + 'a) -> Self {
        NamedSolver { name: name.into(), solve: Box::new(solve) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchRow {
    pub instance: String,
    pub algo: String,
    pub median_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimum: Option<Weight>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Instances on which solvers reported different optima, or a coloring
    /// did not evaluate to its claimed value.
    pub disagreements: Vec<String>,
    pub file_errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl BenchReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<40} {:<10} {:>12} {:>10}", "instance", "algo", "median ms", "optimum");
        for r in &self.rows {
            let opt = match (&r.optimum, &r.error) {
                (Some(o), _) => o.to_string(),
                (None, Some(e)) => format!("error: {e}"),
                _ => "-".into(),
            };
            let _ = writeln!(s, "{:<40} {:<10} {:>12.3} {:>10}", r.instance, r.algo, r.median_ms, opt);
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        for e in &self.file_errors {
            let _ = writeln!(s, "file error: {e}");
        }
        for d in &self.disagreements {
            let _ = writeln!(s, "DISAGREEMENT: {d}");
        }
        s
    }

    pub fn to_json_lines(&self) -> String {
        self.rows.iter().map(|r| serde_json::to_string(r).expect("row serializes") + "\n").collect()
    }
}

/// Instance files (`*.happy`) in `dir`, sorted by path.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "happy"))
        .collect();
    files.sort();
    Ok(files)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs.get(xs.len().saturating_sub(1) / 2).copied().unwrap_or(0.0)
}

pub fn bench(dir: &Path, solvers: &[NamedSolver<'_>], repetitions: usize) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    let files = instance_files(dir)?;
    if files.is_empty() {
        report.warnings.push(format!("no *.happy files in {}", dir.display()));
    }
    for path in files {
        let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        let inst = match std::fs::read_to_string(&path).map_err(Into::into).and_then(|t| parse_instance(&t)) {
            Ok(i) => i,
            Err(e) => {
                report.file_errors.push(format!("{name}: {e}"));
                continue;
            }
        };
        let mut optima: Vec<(String, Weight)> = Vec::new();
        for solver in solvers {
            let mut times = Vec::new();
            let mut outcome = None;
            for _ in 0..repetitions.max(1) {
                let start = Instant::now();
                let res = (solver.solve)(&inst);
                times.push(start.elapsed().as_secs_f64() * 1e3);
                outcome = Some(res);
            }
            let (optimum, error) = match outcome.expect("at least one run") {
                Ok(sol) => {
                    match evaluate_objective(&inst, &sol.coloring) {
                        Ok(v) if v == sol.happy_weight => {}
                        _ => report.disagreements.push(format!(
                            "{name}: {} claims {} but its coloring does not evaluate to it",
                            solver.name, sol.happy_weight
                        )),
                    }
                    optima.push((solver.name.clone(), sol.happy_weight));
                    (Some(sol.happy_weight), None)
                }
                Err(e) => (None, Some(e.to_string())),
            };
            report.rows.push(BenchRow {
                instance: name.clone(),
                algo: solver.name.clone(),
                median_ms: (median(times) * 1e3).round() / 1e3,
                optimum,
                error,
            });
        }
        if optima.windows(2).any(|w| w[0].1 != w[1].1) {
            let parts: Vec<String> = optima.iter().map(|(a, o)| format!("{a}={o}")).collect();
            report.disagreements.push(format!("{name}: {}", parts.join(", ")));
        }
    }
    Ok(report)
}
