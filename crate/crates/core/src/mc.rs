//! Seeded Monte Carlo bias/MSE studies.
//!
//! Every `(model, n)` pair is a sample group with its own family of random
//! streams; replication `r` of group `g` always draws from
//! `RandomStream::derive(seed, g, r)`. All estimators, windows and orders in
//! a group are evaluated on the same samples. Replications are processed in
//! fixed-size chunks whose partial sums are merged in chunk order, so results
//! are bit-identical for any number of worker threads.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::distributions::{closed_value, Measure, Model, ParametricModel};
use crate::error::{Error, Result};
use crate::estimators::{EstimatorKind, EstimatorSpec, Plotting};
use crate::numeric::CompensatedSum;
use crate::rng::{RandomStream, DEFAULT_SEED, MAX_INDEX};
use crate::sample::Sample;

/// Replications per work unit.
pub const CHUNK: usize = 256;

/// Window chosen from `n` by the rule of thumb derived from the MSE tables:
/// `⌊n/2⌋ − 1` for n ≤ 20 and `⌊n/3⌋` above for the Vasicek and Ebrahimi
/// kinds, `⌊n/4⌋ + 1` for the modified kind, clamped into `[1, ⌈n/2⌉ − 1]`.
pub fn heuristic_window(kind: EstimatorKind, n: usize) -> usize {
    let raw = match kind {
        EstimatorKind::ModifiedN => n / 4 + 1,
        _ if n <= 20 => (n / 2).saturating_sub(1),
        _ => n / 3,
    };
    let upper = (n.div_ceil(2)).saturating_sub(1).max(1);
    raw.clamp(1, upper)
}

/// Largest admissible window for sample size `n`.
pub fn max_window(n: usize) -> usize {
    n.div_ceil(2).saturating_sub(1)
}

/// Runs `f` on a pool with `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Spec("thread count must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Spec(format!("cannot build a pool with {t} threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Folds replications `0..reps` chunk by chunk in parallel and merges the
/// chunk results in order.
pub(crate) fn chunked_fold<A: Send>(
    reps: usize,
    init: impl Fn() -> A + Sync,
    step: impl Fn(&mut A, usize) + Sync,
    mut merge: impl FnMut(&mut A, A),
) -> A {
    let parts: Vec<A> = (0..reps.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for r in c * CHUNK..((c + 1) * CHUNK).min(reps) {
                step(&mut acc, r);
            }
            acc
        })
        .collect();
    let mut total = init();
    for p in parts {
        merge(&mut total, p);
    }
    total
}

/// Window selection for an estimator pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowPattern {
    /// Every admissible `m` in `1..=⌈n/2⌉−1`.
    Sweep,
    /// [`heuristic_window`].
    Auto,
    Fixed(usize),
}

impl Serialize for WindowPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            WindowPattern::Sweep => s.serialize_str("sweep"),
            WindowPattern::Auto => s.serialize_str("auto"),
            WindowPattern::Fixed(m) => s.serialize_u64(*m as u64),
        }
    }
}

impl<'de> Deserialize<'de> for WindowPattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(usize),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(m) => Ok(WindowPattern::Fixed(m)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for WindowPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sweep" | "all" => Ok(WindowPattern::Sweep),
            "auto" => Ok(WindowPattern::Auto),
            t => t
                .parse()
                .map(WindowPattern::Fixed)
                .map_err(|_| Error::Parse(format!("window must be a count, `auto` or `sweep`, got {s:?}"))),
        }
    }
}

/// An estimator kind with a window rule, expanded per `n` and order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorPattern {
    pub kind: EstimatorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowPattern>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plotting: Option<Plotting>,
}

impl EstimatorPattern {
    pub fn new(kind: EstimatorKind) -> Self {
        let window = kind.uses_window().then_some(WindowPattern::Sweep);
        Self { kind, window, plotting: None }
    }

    pub fn with_window(mut self, window: WindowPattern) -> Self {
        self.window = Some(window);
        self
    }

    fn windows(&self, n: usize) -> Vec<Option<usize>> {
        if !self.kind.uses_window() {
            return vec![None];
        }
        match self.window.unwrap_or(WindowPattern::Sweep) {
            WindowPattern::Sweep => (1..=max_window(n)).map(Some).collect(),
            WindowPattern::Auto => vec![Some(heuristic_window(self.kind, n))],
            WindowPattern::Fixed(m) => vec![Some(m)],
        }
    }
}

fn default_replications() -> usize {
    10_000
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Grid and replication settings for [`run_study`]. Serialized as JSON.
///
/// ```json
/// { "models": ["exp:lambda=1"], "sample_sizes": [10, 20], "alphas": [2, "wcre"],
///   "estimators": [{"kind": "lstat"}, {"kind": "vasicek", "window": "sweep"}],
///   "replications": 10000, "seed": 12648430 }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McStudyConfig {
    pub models: Vec<ParametricModel>,
    pub sample_sizes: Vec<usize>,
    pub alphas: Vec<Measure>,
    pub estimators: Vec<EstimatorPattern>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl McStudyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Spec("replications must be at least 1".into()));
        }
        if self.models.is_empty() || self.sample_sizes.is_empty() || self.alphas.is_empty() || self.estimators.is_empty() {
            return Err(Error::Spec("models, sample_sizes, alphas and estimators must be nonempty".into()));
        }
        if let Some(&n) = self.sample_sizes.iter().find(|&&n| n < 2) {
            return Err(Error::Spec(format!("sample size {n} is below 2")));
        }
        if self.replications as u64 > MAX_INDEX {
            return Err(Error::Spec(format!("at most {MAX_INDEX} replications are supported")));
        }
        let groups = self.models.len() as u64 * self.sample_sizes.len() as u64;
        if groups > MAX_INDEX {
            return Err(Error::Spec("too many (model, n) groups".into()));
        }
        Ok(())
    }
}

/// Bias and MSE of one estimator configuration over `replications` samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCell {
    pub model: ParametricModel,
    pub n: usize,
    pub alpha: Measure,
    pub estimator: EstimatorKind,
    pub m: Option<usize>,
    pub bias: f64,
    pub mse: f64,
    pub replications: usize,
    pub seed: u64,
    /// Standard error of `mse` as a Monte Carlo mean.
    #[serde(skip)]
    pub mse_se: f64,
}

/// A grid point that was not simulated, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCell {
    pub model: ParametricModel,
    pub n: usize,
    pub alpha: Measure,
    pub estimator: EstimatorKind,
    pub m: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct McStudyResult {
    pub cells: Vec<McCell>,
    #[serde(default)]
    pub skipped: Vec<SkippedCell>,
}

struct Job {
    spec: EstimatorSpec,
    truth: f64,
}

#[derive(Clone)]
struct Moments {
    e: CompensatedSum,
    e2: CompensatedSum,
    e4: CompensatedSum,
}

impl Moments {
    fn new() -> Self {
        Self { e: CompensatedSum::new(), e2: CompensatedSum::new(), e4: CompensatedSum::new() }
    }

    fn push(&mut self, err: f64) {
        let sq = err * err;
        self.e.add(err);
        self.e2.add(sq);
        self.e4.add(sq * sq);
    }

    fn merge(&mut self, other: &Moments) {
        self.e.add(other.e.value());
        self.e2.add(other.e2.value());
        self.e4.add(other.e4.value());
    }
}

/// Simulates every grid cell of `config`.
///
/// Cells whose true value is infinite, or whose estimator is undefined for
/// the cell (for example a window too large for `n`), are listed in
/// [`McStudyResult::skipped`].
pub fn run_study(config: &McStudyConfig) -> Result<McStudyResult> {
    config.validate()?;
    with_threads(config.threads, || run_study_inner(config))?
}

fn run_study_inner(config: &McStudyConfig) -> Result<McStudyResult> {
    let mut result = McStudyResult::default();
    let mut group = 0u64;
    for model in &config.models {
        for &n in &config.sample_sizes {
            let jobs = plan_group(model, n, config, &mut result.skipped);
            if !jobs.is_empty() {
                let moments = simulate_group(*model, n, group, &jobs, config)?;
                let r = config.replications as f64;
                for (job, mo) in jobs.iter().zip(moments) {
                    let bias = mo.e.value() / r;
                    let mse = mo.e2.value() / r;
                    let var_sq = (mo.e4.value() / r - mse * mse).max(0.0);
                    result.cells.push(McCell {
                        model: *model,
                        n,
                        alpha: job.spec.measure,
                        estimator: job.spec.kind,
                        m: job.spec.window,
                        bias,
                        mse,
                        replications: config.replications,
                        seed: config.seed,
                        mse_se: (var_sq / r).sqrt(),
                    });
                }
            }
            group += 1;
        }
    }
    Ok(result)
}

fn plan_group(model: &ParametricModel, n: usize, config: &McStudyConfig, skipped: &mut Vec<SkippedCell>) -> Vec<Job> {
    let mut jobs = Vec::new();
    for &measure in &config.alphas {
        let truth = closed_value(model, measure);
        for pattern in &config.estimators {
            for m in pattern.windows(n) {
                let skip = |reason: String| SkippedCell {
                    model: *model,
                    n,
                    alpha: measure,
                    estimator: pattern.kind,
                    m,
                    reason,
                };
                let truth = match &truth {
                    Ok(t) => *t,
                    Err(e) => {
                        skipped.push(skip(e.to_string()));
                        continue;
                    }
                };
                let spec = EstimatorSpec { kind: pattern.kind, measure, window: m, plotting: pattern.plotting };
                match spec.validate(n) {
                    Ok(()) => jobs.push(Job { spec, truth }),
                    Err(e) => skipped.push(skip(e.to_string())),
                }
            }
        }
    }
    jobs
}

fn simulate_group(model: ParametricModel, n: usize, group: u64, jobs: &[Job], config: &McStudyConfig) -> Result<Vec<Moments>> {
    let model = Model::Parametric(model);
    let seed = config.seed;
    type Acc = (Vec<Moments>, Vec<f64>, Option<Error>);
    let init = || -> Acc { (vec![Moments::new(); jobs.len()], Vec::with_capacity(n), None) };
    let step = |acc: &mut Acc, r: usize| {
        if acc.2.is_some() {
            return;
        }
        let mut stream = RandomStream::derive(seed, group, r as u64);
        model.sample_into(n, &mut stream, &mut acc.1);
        let sample = match Sample::new(std::mem::take(&mut acc.1)) {
            Ok(s) => s,
            Err(e) => {
                acc.2 = Some(e);
                return;
            }
        };
        for (job, mo) in jobs.iter().zip(acc.0.iter_mut()) {
            match job.spec.estimate(&sample) {
                Ok(est) => mo.push(est.value - job.truth),
                Err(e) => {
                    acc.2 = Some(e);
                    return;
                }
            }
        }
    };
    let merge = |total: &mut Acc, part: Acc| {
        for (t, p) in total.0.iter_mut().zip(&part.0) {
            t.merge(p);
        }
        if total.2.is_none() {
            total.2 = part.2;
        }
    };
    let (moments, _, err) = chunked_fold(config.replications, init, step, merge);
    match err {
        Some(e) => Err(e),
        None => Ok(moments),
    }
}

/// Identifies one window sweep: all cells that differ only in `m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SweepKey {
    pub model: String,
    pub n: usize,
    pub alpha: String,
    pub estimator: EstimatorKind,
}

impl fmt::Display for SweepKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} alpha={} {}", self.model, self.n, self.alpha, self.estimator)
    }
}

/// The MSE-minimizing window of one sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestWindow {
    pub m: usize,
    pub mse: f64,
    pub mse_se: f64,
}

/// Argmin of MSE over `m` for every sweep in `cells`; ties go to the smaller `m`.
pub fn best_window(cells: &[McCell]) -> Result<BTreeMap<SweepKey, BestWindow>> {
    let mut best: BTreeMap<SweepKey, BestWindow> = BTreeMap::new();
    for cell in cells {
        let Some(m) = cell.m else { continue };
        let key = SweepKey {
            model: cell.model.to_string(),
            n: cell.n,
            alpha: cell.alpha.to_string(),
            estimator: cell.estimator,
        };
        let candidate = BestWindow { m, mse: cell.mse, mse_se: cell.mse_se };
        best.entry(key)
            .and_modify(|b| {
                if cell.mse < b.mse || (cell.mse == b.mse && m < b.m) {
                    *b = candidate;
                }
            })
            .or_insert(candidate);
    }
    if best.is_empty() {
        return Err(Error::Spec("no windowed cells to choose a window from".into()));
    }
    Ok(best)
}

pub const CSV_HEADER: [&str; 9] = ["model", "n", "alpha", "estimator", "m", "bias", "mse", "R", "seed"];

/// Writes cells as CSV with columns `model,n,alpha,estimator,m,bias,mse,R,seed`.
pub fn write_csv<W: Write>(cells: &[McCell], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for c in cells {
        w.write_record([
            c.model.to_string(),
            c.n.to_string(),
            c.alpha.to_string(),
            c.estimator.to_string(),
            c.m.map(|m| m.to_string()).unwrap_or_default(),
            c.bias.to_string(),
            c.mse.to_string(),
            c.replications.to_string(),
            c.seed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Io { path: "<output>".into(), source: e })?;
    Ok(())
}
