//! Published reference tables, shipped as CSV files under `data/`.
//!
//! The files are compiled into the crate; [`ReferenceData::from_dir`] reads
//! replacements with the same names from a directory instead. Each file
//! starts with `#` comment lines, one of which must read
//! `# format-version: 1`.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::distributions::{AlternativeModel, Measure, Model, ParametricModel, TsallisOrder};
use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::gof::{self, GofTest, PowerConfig, Simulation};
use crate::mc::{best_window, run_study, EstimatorPattern, McCell, McStudyConfig, SweepKey};

pub const FORMAT_VERSION: u32 = 1;

const TABLE2: &str = include_str!("../data/table2.csv");
const WINDOW_TABLES: &str = include_str!("../data/window_tables.csv");
const TABLE7: &str = include_str!("../data/table7.csv");
const TABLE8: &str = include_str!("../data/table8.csv");

pub const FILE_NAMES: [&str; 4] = ["table2.csv", "window_tables.csv", "table7.csv", "table8.csv"];

/// Bias and MSE of the plug-in and L-statistic estimators at α = 2.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct BiasMseRow {
    pub model: ParametricModel,
    pub n: usize,
    pub estimator: EstimatorKind,
    pub bias: f64,
    pub mse: f64,
}

/// Bias and MSE of a windowed estimator at α = 2; `bold` marks the
/// published minimum over `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowRow {
    pub table: u8,
    pub model: ParametricModel,
    pub n: usize,
    pub m: usize,
    pub estimator: EstimatorKind,
    pub bias: f64,
    pub mse: f64,
    pub bold: bool,
}

#[derive(Deserialize)]
struct WindowRaw {
    table: u8,
    model: ParametricModel,
    n: usize,
    m: usize,
    estimator: EstimatorKind,
    bias: f64,
    mse: f64,
    bold: u8,
}

/// Published 2.5% / 97.5% null quantiles of the WCRTE (or WCRE) statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalRow {
    pub n: usize,
    pub measure: Measure,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Deserialize)]
struct CriticalRaw {
    n: usize,
    alpha: f64,
    lower: f64,
    upper: f64,
}

/// Published power at the 5% level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerRow {
    pub n: usize,
    pub alternative: AlternativeModel,
    pub test: GofTest,
    pub power: f64,
}

#[derive(Deserialize)]
struct PowerRaw {
    n: usize,
    alternative: AlternativeModel,
    test: String,
    power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceData {
    pub bias_mse: Vec<BiasMseRow>,
    pub windows: Vec<WindowRow>,
    pub critical: Vec<CriticalRow>,
    pub power: Vec<PowerRow>,
}

impl ReferenceData {
    /// The tables compiled into the crate.
    pub fn embedded() -> Result<Self> {
        Self::from_texts([TABLE2, WINDOW_TABLES, TABLE7, TABLE8], ["table2.csv", "window_tables.csv", "table7.csv", "table8.csv"])
    }

    /// Reads the four files named in [`FILE_NAMES`] from `dir`.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let mut texts = Vec::with_capacity(4);
        for name in FILE_NAMES {
            let path = dir.join(name);
            texts.push(std::fs::read_to_string(&path).map_err(|source| Error::Io { path, source })?);
        }
        Self::from_texts([&texts[0], &texts[1], &texts[2], &texts[3]], FILE_NAMES)
    }

    fn from_texts(texts: [&str; 4], names: [&str; 4]) -> Result<Self> {
        let bias_mse = parse::<BiasMseRow>(texts[0], names[0])?;
        let windows = parse::<WindowRaw>(texts[1], names[1])?
            .into_iter()
            .map(|r| WindowRow {
                table: r.table,
                model: r.model,
                n: r.n,
                m: r.m,
                estimator: r.estimator,
                bias: r.bias,
                mse: r.mse,
                bold: r.bold != 0,
            })
            .collect();
        let critical = parse::<CriticalRaw>(texts[2], names[2])?
            .into_iter()
            .map(|r| {
                Ok(CriticalRow { n: r.n, measure: Measure::from_alpha(r.alpha)?, lower: r.lower, upper: r.upper })
            })
            .collect::<Result<_>>()?;
        let power = parse::<PowerRaw>(texts[3], names[3])?
            .into_iter()
            .map(|r| Ok(PowerRow { n: r.n, alternative: r.alternative, test: r.test.parse()?, power: r.power }))
            .collect::<Result<_>>()?;
        Ok(Self { bias_mse, windows, critical, power })
    }
}

fn check_version(text: &str, name: &str) -> Result<()> {
    let version = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.trim_start_matches('#').trim().strip_prefix("format-version:").map(str::trim));
    match version {
        Some(v) if v == FORMAT_VERSION.to_string() => Ok(()),
        Some(v) => Err(Error::Parse(format!("{name}: unsupported format-version {v}"))),
        None => Err(Error::Parse(format!("{name}: missing `# format-version` line"))),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, name: &str) -> Result<Vec<T>> {
    check_version(text, name)?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    reader
        .deserialize()
        .enumerate()
        .map(|(k, row)| row.map_err(|e| Error::Parse(format!("{name}: record {}: {e}", k + 1))))
        .collect()
}

/// Tables that [`verify_table`] can recompute.
pub const VERIFIABLE_TABLES: [u8; 7] = [2, 3, 4, 5, 6, 7, 8];

/// A published value next to its recomputation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub table: u8,
    /// Identifies the cell, e.g. `exp:lambda=1 n=30 plugin`.
    pub row: String,
    pub quantity: String,
    pub reference: f64,
    pub computed: f64,
    pub abs_diff: f64,
}

impl Comparison {
    fn new(table: u8, row: String, quantity: &str, reference: f64, computed: f64) -> Self {
        Self { table, row, quantity: quantity.to_string(), reference, computed, abs_diff: (reference - computed).abs() }
    }
}

/// Replication settings for [`verify_table`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    pub replications: usize,
    pub seed: u64,
    pub threads: Option<usize>,
}

fn alpha2() -> Measure {
    Measure::Wcrte(TsallisOrder::new(2.0).expect("2 is a valid order"))
}

fn distinct<T: PartialEq + Copy>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn find_cell<'a>(cells: &'a [McCell], model: &ParametricModel, n: usize, kind: EstimatorKind, m: Option<usize>) -> Result<&'a McCell> {
    cells
        .iter()
        .find(|c| c.model == *model && c.n == n && c.estimator == kind && c.m == m)
        .ok_or_else(|| Error::Numerical(format!("no simulated cell for {model} n={n} {kind} m={m:?}")))
}

/// Recomputes published table `table` and pairs every value with the
/// reference.
///
/// Table 8 rows for the entropy test record the window used.
pub fn verify_table(table: u8, data: &ReferenceData, settings: &VerifySettings) -> Result<Vec<Comparison>> {
    match table {
        2 => verify_bias_mse(data, settings),
        3..=6 => verify_windows(table, data, settings),
        7 => verify_critical(data, settings),
        8 => verify_power(data, settings),
        other => Err(Error::Spec(format!("table {other} cannot be verified; choose one of {VERIFIABLE_TABLES:?}"))),
    }
}

fn verify_bias_mse(data: &ReferenceData, settings: &VerifySettings) -> Result<Vec<Comparison>> {
    let config = McStudyConfig {
        models: distinct(data.bias_mse.iter().map(|r| r.model)),
        sample_sizes: distinct(data.bias_mse.iter().map(|r| r.n)),
        alphas: vec![alpha2()],
        estimators: distinct(data.bias_mse.iter().map(|r| r.estimator)).into_iter().map(EstimatorPattern::new).collect(),
        replications: settings.replications,
        seed: settings.seed,
        threads: settings.threads,
    };
    let cells = run_study(&config)?.cells;
    let mut out = Vec::new();
    for r in &data.bias_mse {
        let c = find_cell(&cells, &r.model, r.n, r.estimator, None)?;
        let row = format!("{} n={} {}", r.model, r.n, r.estimator);
        out.push(Comparison::new(2, row.clone(), "bias", r.bias, c.bias));
        out.push(Comparison::new(2, row, "mse", r.mse, c.mse));
    }
    Ok(out)
}

fn verify_windows(table: u8, data: &ReferenceData, settings: &VerifySettings) -> Result<Vec<Comparison>> {
    let rows: Vec<&WindowRow> = data.windows.iter().filter(|w| w.table == table).collect();
    if rows.is_empty() {
        return Err(Error::Spec(format!("no reference rows for table {table}")));
    }
    let config = McStudyConfig {
        models: distinct(rows.iter().map(|r| r.model)),
        sample_sizes: distinct(rows.iter().map(|r| r.n)),
        alphas: vec![alpha2()],
        estimators: distinct(rows.iter().map(|r| r.estimator)).into_iter().map(EstimatorPattern::new).collect(),
        replications: settings.replications,
        seed: settings.seed,
        threads: settings.threads,
    };
    let cells = run_study(&config)?.cells;
    let best = best_window(&cells)?;
    let mut out = Vec::new();
    for r in &rows {
        let c = find_cell(&cells, &r.model, r.n, r.estimator, Some(r.m))?;
        let row = format!("{} n={} {} m={}", r.model, r.n, r.estimator, r.m);
        out.push(Comparison::new(table, row.clone(), "bias", r.bias, c.bias));
        out.push(Comparison::new(table, row, "mse", r.mse, c.mse));
    }
    for r in rows.iter().filter(|r| r.bold) {
        let key = SweepKey { model: r.model.to_string(), n: r.n, alpha: alpha2().to_string(), estimator: r.estimator };
        if let Some(b) = best.get(&key) {
            let row = format!("{} n={} {}", r.model, r.n, r.estimator);
            out.push(Comparison::new(table, row, "best_m", r.m as f64, b.m as f64));
        }
    }
    Ok(out)
}

fn verify_critical(data: &ReferenceData, settings: &VerifySettings) -> Result<Vec<Comparison>> {
    let sim = Simulation { gamma: 0.05, replications: settings.replications, seed: settings.seed, threads: settings.threads };
    let mut out = Vec::new();
    for n in distinct(data.critical.iter().map(|r| r.n)) {
        let rows: Vec<&CriticalRow> = data.critical.iter().filter(|r| r.n == n).collect();
        let tests: Vec<GofTest> = rows
            .iter()
            .map(|r| match r.measure {
                Measure::Wcre => GofTest::Wcre,
                Measure::Wcrte(a) => GofTest::Wcrte(a),
            })
            .collect();
        let pairs = gof::critical_values_many(&tests, n, &sim)?;
        for (r, p) in rows.iter().zip(pairs) {
            let row = format!("n={n} alpha={}", r.measure);
            out.push(Comparison::new(7, row.clone(), "lower", r.lower, p.lower.unwrap_or(f64::NAN)));
            out.push(Comparison::new(7, row, "upper", r.upper, p.upper.unwrap_or(f64::NAN)));
        }
    }
    Ok(out)
}

fn verify_power(data: &ReferenceData, settings: &VerifySettings) -> Result<Vec<Comparison>> {
    let config = PowerConfig {
        alternatives: distinct(data.power.iter().map(|r| Model::Alternative(r.alternative))),
        sample_sizes: distinct(data.power.iter().map(|r| r.n)),
        tests: distinct(data.power.iter().map(|r| r.test)),
        simulation: Simulation { gamma: 0.05, replications: settings.replications, seed: settings.seed, threads: settings.threads },
        critical_replications: None,
    };
    let rows = gof::power_study(&config)?;
    let mut out = Vec::new();
    for r in &data.power {
        let p = rows
            .iter()
            .find(|p| p.n == r.n && p.alternative == Model::Alternative(r.alternative) && p.test == r.test)
            .ok_or_else(|| Error::Numerical(format!("no simulated power for {} n={} {}", r.alternative, r.n, r.test)))?;
        let test = match p.m {
            Some(m) => format!("{} m={m}", r.test),
            None => r.test.to_string(),
        };
        out.push(Comparison::new(8, format!("n={} {} {test}", r.n, r.alternative), "power", r.power, p.power));
    }
    Ok(out)
}

/// CSV with columns `table,row,quantity,reference,computed,abs_diff`.
pub fn write_comparisons_csv<W: Write>(rows: &[Comparison], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::Io { path: "<output>".into(), source: e })?;
    Ok(())
}
