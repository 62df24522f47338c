//! Batch front end: JSON job configs in, JSON reports and CSV tables out.
//!
//! A config names a task and the spaces it works on:
//!
//! ```json
//! {
//!   "task": "sweep",
//!   "source": {"scale": "n", "d": 1, "s": 1.0, "p": 1.0, "q": 2.0,
//!              "phi": {"family": "power", "u": 2.0}},
//!   "target": {"scale": "n", "d": 1, "s": 0.0, "p": 2.0, "q": 2.0,
//!              "phi": {"family": "power", "u": 4.0}},
//!   "sweep": {"parameter": "s2", "start": -2.0, "stop": 2.0, "step": 0.1}
//! }
//! ```
//!
//! Tasks are `verdict`, `norms`, `sweep`, `witness` and `selftest`. Exponents accept
//! the string `"inf"`. Every report is assembled in memory before anything is written,
//! so a failing job leaves no partial output.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::seqspace::{b_norm, besov_sup_norm, n_norm_morrey, n_norm_star, DyadicSeq, MAX_LEVEL};
use crate::verdict::{decide, Scale, SpaceSpec, Verdict};
use crate::witness::{random_seq, run_witness, Distribution, WitnessReport};

/// Exit status for a config that does not parse or validate.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for an internal invariant violation.
pub const EXIT_INVARIANT: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "morrey-embed", about = "Embedding verdicts, norms, sweeps and witnesses for Besov-Morrey spaces")]
pub struct Args {
    /// Job config (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Where to write the report; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps and probes.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Run the acceptance suite and print one line per criterion.
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Verdict,
    Norms,
    Sweep,
    Witness,
    Selftest,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// One of `s1`, `s2`, `p1`, `p2`, `q1`, `q2`.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    pub density: f64,
    #[serde(default = "default_distribution")]
    pub distribution: Distribution,
}

fn default_distribution() -> Distribution {
    Distribution::Uniform01
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub task: Task,
    #[serde(default)]
    pub source: Option<Value>,
    #[serde(default)]
    pub target: Option<Value>,
    #[serde(default)]
    pub sweep: Option<SweepAxis>,
    /// Truncation level.
    #[serde(default = "default_truncation", rename = "J")]
    pub truncation: u32,
    /// Witness family size.
    #[serde(default = "default_members")]
    pub members: usize,
    #[serde(default)]
    pub seed: u64,
    /// Sequence for the `norms` task.
    #[serde(default)]
    pub sequence: Option<DyadicSeq>,
    /// Random sequence for the `norms` task, drawn with `seed` at truncation `J`.
    #[serde(default)]
    pub random: Option<RandomSpec>,
    #[serde(default)]
    pub output: Outputs,
}

fn default_truncation() -> u32 {
    40
}

fn default_members() -> usize {
    6
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> CliError {
        CliError { code: EXIT_CONFIG, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = if matches!(e, Error::Invariant(_)) { EXIT_INVARIANT } else { EXIT_CONFIG };
        CliError { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Rendered report bodies.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Rendered {
    /// The main report in the requested format.
    pub body: String,
    /// A CSV table, for tasks that have one.
    pub csv: Option<String>,
    /// Whether every self-test criterion passed (`selftest` only).
    pub all_passed: Option<bool>,
}

impl JobConfig {
    pub fn from_json(text: &str) -> CliResult<JobConfig> {
        let cfg: JobConfig = serde_json::from_str(text).map_err(|e| CliError::config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        if self.truncation > MAX_LEVEL {
            return Err(CliError::config(format!("J = {} exceeds the limit {MAX_LEVEL}", self.truncation)));
        }
        let need = |field: &Option<Value>, name: &str| {
            if field.is_none() {
                Err(CliError::config(format!("task {:?} needs a {name} space", self.task)))
            } else {
                Ok(())
            }
        };
        match self.task {
            Task::Verdict | Task::Witness => {
                need(&self.source, "source")?;
                need(&self.target, "target")?;
            }
            Task::Sweep => {
                need(&self.source, "source")?;
                need(&self.target, "target")?;
                let axis = self.sweep.as_ref().ok_or_else(|| CliError::config("sweep task needs a sweep axis"))?;
                axis_slot(&axis.parameter)?;
                if !(axis.step > 0.0 && axis.step.is_finite() && axis.start.is_finite() && axis.stop >= axis.start) {
                    return Err(CliError::config("sweep range must be non-empty with a positive step"));
                }
            }
            Task::Norms => {
                need(&self.source, "source")?;
                if self.sequence.is_some() == self.random.is_some() {
                    return Err(CliError::config("norms task needs exactly one of sequence and random"));
                }
            }
            Task::Selftest => {}
        }
        if matches!(self.task, Task::Witness) && self.members == 0 {
            return Err(CliError::config("members must be positive"));
        }
        Ok(())
    }
}

fn space(v: &Option<Value>, name: &str) -> CliResult<SpaceSpec> {
    let v = v.as_ref().ok_or_else(|| CliError::config(format!("missing {name} space")))?;
    serde_json::from_value(v.clone()).map_err(|e| CliError::config(format!("{name}: {e}")))
}

/// Which space and which field a sweep parameter moves.
fn axis_slot(parameter: &str) -> CliResult<(bool, &'static str)> {
    Ok(match parameter {
        "s1" => (true, "s"),
        "p1" => (true, "p"),
        "q1" => (true, "q"),
        "s2" => (false, "s"),
        "p2" => (false, "p"),
        "q2" => (false, "q"),
        other => return Err(CliError::config(format!("unknown sweep parameter {other:?}"))),
    })
}

/// Grid values `start + i·step`, rounded to ten decimals so the printed axis is clean.
pub fn sweep_values(axis: &SweepAxis) -> Vec<f64> {
    let n = ((axis.stop - axis.start) / axis.step + 1e-9).floor() as usize + 1;
    (0..n)
        .map(|i| {
            let v = axis.start + i as f64 * axis.step;
            (v * 1e10).round() / 1e10
        })
        .collect()
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError { code: EXIT_INVARIANT, message: e.to_string() })?;
    s.push('\n');
    Ok(s)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| CliError { code: EXIT_INVARIANT, message: e.to_string() })?;
    String::from_utf8(bytes).map_err(|e| CliError { code: EXIT_INVARIANT, message: e.to_string() })
}

fn csv_err(e: csv::Error) -> CliError {
    CliError { code: EXIT_INVARIANT, message: e.to_string() }
}

/// One sweep grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub continuous: String,
    pub compact: String,
    pub rules: String,
    pub note: String,
}

/// Evaluates every grid point of a sweep, in parallel, in grid order.
pub fn run_sweep(cfg: &JobConfig) -> CliResult<Vec<SweepRow>> {
    let axis = cfg.sweep.as_ref().ok_or_else(|| CliError::config("sweep task needs a sweep axis"))?;
    let (on_source, field) = axis_slot(&axis.parameter)?;
    let values = sweep_values(axis);
    values
        .par_iter()
        .map(|&x| {
            let mut src = cfg.source.clone();
            let mut tgt = cfg.target.clone();
            let slot = if on_source { &mut src } else { &mut tgt };
            if let Some(Value::Object(map)) = slot {
                map.insert(field.to_string(), serde_json::json!(x));
            }
            let (src, tgt) = (space(&src, "source")?, space(&tgt, "target")?);
            match decide(&src, &tgt) {
                Ok(v) => Ok(SweepRow {
                    value: x,
                    continuous: v.continuous.to_string(),
                    compact: v.compact.to_string(),
                    rules: v.rules.join(";"),
                    note: String::new(),
                }),
                Err(Error::Invariant(m)) => Err(CliError { code: EXIT_INVARIANT, message: m }),
                Err(e) => Ok(SweepRow {
                    value: x,
                    continuous: "error".to_string(),
                    compact: "error".to_string(),
                    rules: String::new(),
                    note: e.to_string(),
                }),
            }
        })
        .collect()
}

fn sweep_csv(parameter: &str, rows: &[SweepRow]) -> CliResult<String> {
    let mut w = csv_writer();
    w.write_record([parameter, "continuous", "compact", "rules", "note"]).map_err(csv_err)?;
    for r in rows {
        w.write_record([r.value.to_string(), r.continuous.clone(), r.compact.clone(), r.rules.clone(), r.note.clone()])
            .map_err(csv_err)?;
    }
    csv_finish(w)
}

fn verdict_csv(v: &Verdict) -> CliResult<String> {
    let mut w = csv_writer();
    w.write_record(["continuous", "compact", "rules"]).map_err(csv_err)?;
    w.write_record([v.continuous.to_string(), v.compact.to_string(), v.rules.join(";")]).map_err(csv_err)?;
    csv_finish(w)
}

fn witness_csv(r: &WitnessReport) -> CliResult<String> {
    let mut w = csv_writer();
    w.write_record(["k", "level", "source_norm", "gap"]).map_err(csv_err)?;
    if let Some(p) = &r.probe {
        for (i, norm) in p.source_norms.iter().enumerate() {
            let gap = p.consecutive_gaps.get(i).map(|g| g.to_string()).unwrap_or_default();
            w.write_record([(i + 1).to_string(), p.levels[i].to_string(), norm.to_string(), gap]).map_err(csv_err)?;
        }
    }
    csv_finish(w)
}

/// All norms of one sequence that a space's parameters support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormsEntry {
    pub role: String,
    pub space: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_norm_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_norm_morrey: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_norm: Option<f64>,
    pub besov_sup_norm: f64,
}

fn norms_for(lambda: &DyadicSeq, spec: &SpaceSpec, role: &str) -> CliResult<NormsEntry> {
    let mut e = NormsEntry {
        role: role.to_string(),
        space: spec.label(),
        n_norm_star: None,
        n_norm_morrey: None,
        b_norm: None,
        besov_sup_norm: besov_sup_norm(lambda, spec.s, spec.q),
    };
    if spec.p.is_finite() && !matches!(spec.scale, Scale::Lr | Scale::M) {
        let params = spec.norm_params()?;
        e.n_norm_star = Some(n_norm_star(lambda, &params)?);
        e.n_norm_morrey = Some(n_norm_morrey(lambda, &params)?);
        e.b_norm = Some(b_norm(lambda, &params)?);
    }
    Ok(e)
}

fn run_norms(cfg: &JobConfig) -> CliResult<Vec<NormsEntry>> {
    let src = space(&cfg.source, "source")?;
    let lambda = match (&cfg.sequence, &cfg.random) {
        (Some(seq), _) => seq.clone(),
        (None, Some(r)) => random_seq(cfg.seed, src.d, cfg.truncation, r.density, r.distribution)?,
        (None, None) => return Err(CliError::config("norms task needs a sequence")),
    };
    let mut out = vec![norms_for(&lambda, &src, "source")?];
    if cfg.target.is_some() {
        out.push(norms_for(&lambda, &space(&cfg.target, "target")?, "target")?);
    }
    Ok(out)
}

fn norms_csv(entries: &[NormsEntry]) -> CliResult<String> {
    let mut w = csv_writer();
    w.write_record(["role", "norm", "value"]).map_err(csv_err)?;
    for e in entries {
        let named = [
            ("n_norm_star", e.n_norm_star),
            ("n_norm_morrey", e.n_norm_morrey),
            ("b_norm", e.b_norm),
            ("besov_sup_norm", Some(e.besov_sup_norm)),
        ];
        for (name, v) in named {
            if let Some(v) = v {
                w.write_record([e.role.as_str(), name, &v.to_string()]).map_err(csv_err)?;
            }
        }
    }
    csv_finish(w)
}

/// Text summary of the acceptance suite.
pub fn selftest_summary() -> (String, bool) {
    let results = crate::acceptance::run_all();
    let mut out = String::new();
    for r in &results {
        let _ = writeln!(out, "{r}");
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} criteria passed", results.len());
    (out, passed == results.len())
}

/// Runs a job and renders its report without touching the file system.
pub fn render(cfg: &JobConfig, format: Option<Format>) -> CliResult<Rendered> {
    let json = format != Some(Format::Csv);
    Ok(match cfg.task {
        Task::Verdict => {
            let v = decide(&space(&cfg.source, "source")?, &space(&cfg.target, "target")?)?;
            let csv = verdict_csv(&v)?;
            Rendered { body: if json { to_json(&v)? } else { csv.clone() }, csv: Some(csv), all_passed: None }
        }
        Task::Sweep => {
            let rows = run_sweep(cfg)?;
            let axis = cfg.sweep.as_ref().map(|a| a.parameter.as_str()).unwrap_or("value");
            let csv = sweep_csv(axis, &rows)?;
            let body = if format == Some(Format::Json) { to_json(&rows)? } else { csv.clone() };
            Rendered { body, csv: Some(csv), all_passed: None }
        }
        Task::Witness => {
            let r = run_witness(
                &space(&cfg.source, "source")?,
                &space(&cfg.target, "target")?,
                cfg.truncation,
                cfg.members,
            )?;
            let csv = witness_csv(&r)?;
            Rendered { body: if json { to_json(&r)? } else { csv.clone() }, csv: Some(csv), all_passed: None }
        }
        Task::Norms => {
            let entries = run_norms(cfg)?;
            let csv = norms_csv(&entries)?;
            Rendered { body: if json { to_json(&entries)? } else { csv.clone() }, csv: Some(csv), all_passed: None }
        }
        Task::Selftest => {
            let (body, ok) = selftest_summary();
            Rendered { body, csv: None, all_passed: Some(ok) }
        }
    })
}

fn write_file(path: &PathBuf, body: &str) -> CliResult<()> {
    fs::write(path, body).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

fn run_inner(args: &Args) -> CliResult<i32> {
    let (rendered, cfg_out) = if args.selftest {
        let (body, ok) = selftest_summary();
        (Rendered { body, csv: None, all_passed: Some(ok) }, Outputs::default())
    } else {
        let path = args.config.as_ref().ok_or_else(|| CliError::config("either --config or --selftest is required"))?;
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let cfg = JobConfig::from_json(&text)?;
        (render(&cfg, args.format)?, cfg.output)
    };
    match args.out.as_ref().or(cfg_out.report.as_ref()) {
        Some(path) => write_file(path, &rendered.body)?,
        None => print!("{}", rendered.body),
    }
    if let (Some(path), Some(csv)) = (cfg_out.csv.as_ref(), rendered.csv.as_ref()) {
        write_file(path, csv)?;
    }
    Ok(if rendered.all_passed == Some(false) { EXIT_INVARIANT } else { 0 })
}

/// Runs the command line and returns the process exit status.
pub fn main_with(args: Args) -> i32 {
    let run = || match run_inner(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    match args.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                eprintln!("error: cannot start {n} worker threads: {e}");
                EXIT_CONFIG
            }
        },
        None => run(),
    }
}

/// Number of changes of the `(continuous, compact)` pair along a sweep.
pub fn transitions(rows: &[SweepRow]) -> usize {
    rows.windows(2)
        .filter(|w| (w[0].continuous.as_str(), w[0].compact.as_str()) != (w[1].continuous.as_str(), w[1].compact.as_str()))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLASSICAL: &str = r#"{
        "task": "verdict",
        "source": {"scale": "n", "d": 1, "s": 1.0, "p": 1.0, "q": 2.0, "phi": {"family": "power", "u": 2.0}},
        "target": {"scale": "n", "d": 1, "s": 0.0, "p": 2.0, "q": 2.0, "phi": {"family": "power", "u": 4.0}}
    }"#;

    #[test]
    fn verdict_report() {
        let cfg = JobConfig::from_json(CLASSICAL).unwrap();
        let out = render(&cfg, None).unwrap();
        let v: Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!(v["compact"], "yes");
        assert!(v["rules"].as_array().unwrap().iter().any(|r| r == "comp-class_new"));
    }

    #[test]
    fn sweep_regions() {
        let mut cfg = JobConfig::from_json(CLASSICAL).unwrap();
        cfg.task = Task::Sweep;
        cfg.sweep = Some(SweepAxis { parameter: "s2".into(), start: -2.0, stop: 2.0, step: 0.05 });
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 81);
        assert_eq!(transitions(&rows), 2);
        // the Morrey loss is (p1/u1)(1/p1 − 1/p2) = 1/4: s2 < 3/4 is compact, equality
        // is continuous only
        let at = |x: f64| rows.iter().find(|r| (r.value - x).abs() < 1e-9).unwrap();
        assert_eq!((at(0.7).continuous.as_str(), at(0.7).compact.as_str()), ("yes", "yes"));
        assert_eq!((at(0.75).continuous.as_str(), at(0.75).compact.as_str()), ("yes", "no"));
        assert_eq!(at(0.8).continuous, "no");
        assert_eq!(render(&cfg, None).unwrap().body, render(&cfg, None).unwrap().body);
    }

    #[test]
    fn config_errors() {
        assert_eq!(JobConfig::from_json("{not json").unwrap_err().code, EXIT_CONFIG);
        assert_eq!(JobConfig::from_json(r#"{"task": "verdict"}"#).unwrap_err().code, EXIT_CONFIG);
        assert_eq!(JobConfig::from_json(r#"{"task": "selftest", "J": 99}"#).unwrap_err().code, EXIT_CONFIG);
        let bad = r#"{"task": "sweep", "source": {}, "target": {},
                      "sweep": {"parameter": "s2", "start": 1.0, "stop": 0.0, "step": 0.1}}"#;
        assert_eq!(JobConfig::from_json(bad).unwrap_err().code, EXIT_CONFIG);
    }

    #[test]
    fn norms_task() {
        let cfg = JobConfig::from_json(
            r#"{"task": "norms", "J": 3, "seed": 5,
                "source": {"scale": "n", "d": 1, "s": 0.5, "p": 2.0, "q": "inf", "phi": {"family": "power", "u": 2.0}},
                "random": {"density": 0.5}}"#,
        )
        .unwrap();
        let out = render(&cfg, None).unwrap();
        let v: Value = serde_json::from_str(&out.body).unwrap();
        let star = v[0]["n_norm_star"].as_f64().unwrap();
        let b = v[0]["b_norm"].as_f64().unwrap();
        assert!((star - b).abs() <= 1e-12 * star);
        assert!(out.csv.unwrap().starts_with("role,norm,value\n"));
    }
}
