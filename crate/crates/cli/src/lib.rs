//! Experiment runner: a registry of named experiments, versioned config
//! files, seeded execution on a sized thread pool, and JSON/CSV reports.

mod experiments;

use serde::Deserialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use experiments::registry;

/// Environment variable that sets the worker count.
pub const THREADS_ENV: &str = "QLECTRA_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),
    #[error("{0}")]
    SchemaViolation(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Numerical(#[from] qlectra_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::UnknownExperiment(_) => "unknown_experiment",
            CliError::SchemaViolation(_) => "schema_violation",
            CliError::Io(_) => "io_failure",
            CliError::Numerical(_) => "numerical",
        }
    }

    /// `{"error": kind, "message": text}` for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Float,
    Bool,
    Text,
}

/// One accepted parameter with its default.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

impl ParamSpec {
    fn parse(&self, raw: &str) -> CliResult<Value> {
        let bad = || CliError::SchemaViolation(format!("parameter '{}' expects {:?}, got '{raw}'", self.name, self.kind));
        Ok(match self.kind {
            Kind::Int => {
                let v: f64 = raw.trim().parse().map_err(|_| bad())?;
                if v.fract() != 0.0 || v < 0.0 || v > 9.0e15 {
                    return Err(bad());
                }
                Value::from(v as u64)
            }
            Kind::Float => {
                let v: f64 = raw.trim().parse().map_err(|_| bad())?;
                if !v.is_finite() {
                    return Err(bad());
                }
                Value::from(v)
            }
            Kind::Bool => Value::Bool(raw.trim().parse().map_err(|_| bad())?),
            Kind::Text => Value::String(raw.to_string()),
        })
    }

    fn coerce(&self, v: &Value) -> CliResult<Value> {
        match (self.kind, v) {
            (Kind::Text, Value::String(_)) | (Kind::Bool, Value::Bool(_)) => Ok(v.clone()),
            (Kind::Text, other) => Ok(Value::String(other.to_string())),
            (_, Value::String(s)) => self.parse(s),
            (_, other) => self.parse(&other.to_string()),
        }
    }
}

/// Resolved parameters: every schema entry present, checked against its kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Params(BTreeMap<String, Value>);

impl Params {
    pub fn values(&self) -> &BTreeMap<String, Value> {
        &self.0
    }

    fn get(&self, key: &str) -> &Value {
        self.0.get(key).unwrap_or_else(|| panic!("parameter '{key}' missing from schema"))
    }

    pub fn f64(&self, key: &str) -> f64 {
        self.get(key).as_f64().expect("float parameter")
    }

    pub fn usize(&self, key: &str) -> usize {
        self.get(key).as_u64().expect("integer parameter") as usize
    }

    pub fn u64(&self, key: &str) -> u64 {
        self.get(key).as_u64().expect("integer parameter")
    }

    pub fn bool(&self, key: &str) -> bool {
        self.get(key).as_bool().expect("boolean parameter")
    }

    pub fn text(&self, key: &str) -> &str {
        self.get(key).as_str().expect("text parameter")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Num(v as f64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Series {
    pub fn new(columns: &[&str]) -> Self {
        Series { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// What an experiment computes; the runner adds the bookkeeping.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub metrics: BTreeMap<String, f64>,
    pub series: Option<Series>,
}

impl Outcome {
    pub fn metric(&mut self, key: &str, v: f64) -> &mut Self {
        self.metrics.insert(key.to_string(), v);
        self
    }
}

pub type RunFn = fn(&Params, u64) -> CliResult<Outcome>;

pub struct Experiment {
    pub id: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub run: RunFn,
}

impl Experiment {
    /// Defaults overlaid with `given`; unknown keys are rejected.
    pub fn resolve(&self, given: &BTreeMap<String, Value>) -> CliResult<Params> {
        for key in given.keys() {
            if !self.params.iter().any(|p| p.name == key) {
                return Err(CliError::SchemaViolation(format!(
                    "experiment '{}' has no parameter '{key}'",
                    self.id
                )));
            }
        }
        let mut out = BTreeMap::new();
        for p in self.params {
            let v = match given.get(p.name) {
                Some(v) => p.coerce(v)?,
                None => p.parse(p.default)?,
            };
            out.insert(p.name.to_string(), v);
        }
        Ok(Params(out))
    }
}

pub fn find(id: &str) -> CliResult<&'static Experiment> {
    registry().iter().find(|e| e.id == id).ok_or_else(|| CliError::UnknownExperiment(id.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(CliError::SchemaViolation(format!("unknown format '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// Config file layout, `{"schema": 1, "name", "seed", "params", "output"}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    pub output: Option<OutputSpec>,
}

impl ExperimentConfig {
    pub fn new(name: &str) -> Self {
        ExperimentConfig { schema: 1, name: name.to_string(), seed: 0, params: BTreeMap::new(), output: None }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::SchemaViolation(format!("config: {e}")))?;
        if cfg.schema != 1 {
            return Err(CliError::SchemaViolation(format!("unsupported config schema {}", cfg.schema)));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Apply a `key=value` override; the value is typed by the schema later.
    pub fn set_param(&mut self, assignment: &str) -> CliResult<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::SchemaViolation(format!("expected key=value, got '{assignment}'")))?;
        self.params.insert(k.trim().to_string(), Value::String(v.to_string()));
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub name: String,
    pub params: Params,
    pub seed: u64,
    pub metrics: BTreeMap<String, f64>,
    pub series: Option<Series>,
    pub wall_time: f64,
}

/// Worker count from `QLECTRA_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Run `cfg` on a pool of `threads` workers (rayon's default when `None`).
pub fn run_config(cfg: &ExperimentConfig, threads: Option<usize>) -> CliResult<Report> {
    let exp = find(&cfg.name)?;
    let params = exp.resolve(&cfg.params)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let outcome = pool.install(|| (exp.run)(&params, cfg.seed))?;
    if outcome.metrics.is_empty() {
        return Err(CliError::SchemaViolation(format!("experiment '{}' produced no metrics", exp.id)));
    }
    Ok(Report {
        name: exp.id.to_string(),
        params,
        seed: cfg.seed,
        metrics: outcome.metrics,
        series: outcome.series,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Floats with 17 significant digits; non-finite values become `null`.
fn json_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

fn json_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) => json_num(*v),
        Cell::Text(s) => Value::String(s.clone()).to_string(),
    }
}

/// `"metrics": {...}` exactly as it appears in the JSON report.
pub fn metrics_json(report: &Report) -> String {
    let body: Vec<String> = report
        .metrics
        .iter()
        .map(|(k, v)| format!("{}: {}", Value::String(k.clone()), json_num(*v)))
        .collect();
    format!("{{{}}}", body.join(", "))
}

pub fn to_json(report: &Report) -> String {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"name\": {},", Value::String(report.name.clone()));
    let _ = writeln!(s, "  \"seed\": {},", report.seed);
    let params: Vec<String> = report
        .params
        .values()
        .iter()
        .map(|(k, v)| {
            let v = match v {
                Value::Number(n) if n.is_f64() => json_num(n.as_f64().unwrap_or(f64::NAN)),
                other => other.to_string(),
            };
            format!("{}: {v}", Value::String(k.clone()))
        })
        .collect();
    let _ = writeln!(s, "  \"params\": {{{}}},", params.join(", "));
    let _ = writeln!(s, "  \"metrics\": {},", metrics_json(report));
    match &report.series {
        None => s.push_str("  \"series\": null,\n"),
        Some(series) => {
            let cols: Vec<String> = series.columns.iter().map(|c| Value::String(c.clone()).to_string()).collect();
            let rows: Vec<String> = series
                .rows
                .iter()
                .map(|r| format!("[{}]", r.iter().map(json_cell).collect::<Vec<_>>().join(", ")))
                .collect();
            let _ = writeln!(
                s,
                "  \"series\": {{\"columns\": [{}], \"rows\": [{}]}},",
                cols.join(", "),
                rows.join(", ")
            );
        }
    }
    let _ = writeln!(s, "  \"wall_time\": {}", json_num(report.wall_time));
    s.push_str("}\n");
    s
}

/// Header plus series rows; without a series, metric names and one row.
pub fn to_csv(report: &Report) -> CliResult<String> {
    let io = |e: csv::Error| CliError::Io(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    match &report.series {
        Some(series) => {
            w.write_record(&series.columns).map_err(io)?;
            for row in &series.rows {
                let cells: Vec<String> = row
                    .iter()
                    .map(|c| match c {
                        Cell::Num(v) => format!("{v:.16e}"),
                        Cell::Text(t) => t.clone(),
                    })
                    .collect();
                w.write_record(&cells).map_err(io)?;
            }
        }
        None => {
            w.write_record(report.metrics.keys()).map_err(io)?;
            w.write_record(report.metrics.values().map(|v| format!("{v:.16e}"))).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn render(report: &Report, format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(to_json(report)),
        Format::Csv => to_csv(report),
    }
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete_and_unique() {
        let ids: Vec<&str> = registry().iter().map(|e| e.id).collect();
        assert_eq!(ids.len(), 20);
        let unique: std::collections::BTreeSet<_> = ids.iter().collect();
        assert_eq!(unique.len(), ids.len());
        for e in registry() {
            assert!(!e.params.is_empty(), "{}", e.id);
            assert!(e.resolve(&BTreeMap::new()).is_ok(), "{}", e.id);
        }
    }

    #[test]
    fn params_are_typed() {
        let e = find("grover").unwrap();
        let mut given = BTreeMap::new();
        given.insert("n".to_string(), Value::String("4".into()));
        assert_eq!(e.resolve(&given).unwrap().usize("n"), 4);
        given.insert("n".to_string(), Value::String("4.5".into()));
        assert!(matches!(e.resolve(&given), Err(CliError::SchemaViolation(_))));
        given.clear();
        given.insert("bogus".to_string(), Value::from(1));
        assert!(matches!(e.resolve(&given), Err(CliError::SchemaViolation(_))));
    }

    #[test]
    fn config_schema_is_versioned() {
        let ok = ExperimentConfig::from_json(r#"{"schema":1,"name":"grover","seed":3,"params":{"n":2}}"#).unwrap();
        assert_eq!(ok.seed, 3);
        assert!(ExperimentConfig::from_json(r#"{"schema":2,"name":"grover"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"schema":1,"name":"grover","extra":0}"#).is_err());
    }

    #[test]
    fn unknown_experiment_exit_code() {
        let e = run_config(&ExperimentConfig::new("nope"), Some(1)).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let v: Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["error"], "unknown_experiment");
    }

    #[test]
    fn numerical_errors_exit_three() {
        let mut cfg = ExperimentConfig::new("shor");
        cfg.set_param("q=13").unwrap();
        let e = run_config(&cfg, Some(1)).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn json_report_parses() {
        let mut cfg = ExperimentConfig::new("grover");
        cfg.set_param("n=3").unwrap();
        let r = run_config(&cfg, Some(1)).unwrap();
        let v: Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(v["name"], "grover");
        assert_eq!(v["metrics"]["iterations"].as_f64(), Some(2.0));
        assert!((v["metrics"]["success_prob"].as_f64().unwrap() - 0.9453).abs() < 1e-4);
    }

    #[test]
    fn csv_without_series_has_metric_header() {
        let r = run_config(&ExperimentConfig::new("grover-continuous"), Some(1)).unwrap();
        let text = to_csv(&r).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), r.metrics.keys().cloned().collect::<Vec<_>>().join(","));
        assert_eq!(lines.count(), 1);
    }

    #[test]
    fn empty_series_csv_is_header_only() {
        let r = Report {
            name: "x".into(),
            params: Params(BTreeMap::new()),
            seed: 0,
            metrics: BTreeMap::from([("a".to_string(), 1.0)]),
            series: Some(Series::new(&["t", "p"])),
            wall_time: 0.0,
        };
        assert_eq!(to_csv(&r).unwrap(), "t,p\n");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, "first").unwrap();
        write_atomic(&p, "second").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
