//! Tests of uniformity on `[0, 1]`.
//!
//! The WCRTE and WCRE tests use the plug-in estimators as statistics. Under
//! U(0, 1) their values lie in `[0, 1/(2α^{α/(α−1)})]` and `[0, 1/(2e)]`
//! respectively, and the null hypothesis is rejected when the statistic is
//! small or large. Critical values of every test, including the classical
//! competitors, are simulated under the null.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{Model, ParametricModel, TsallisOrder};
use crate::error::{Error, Result};
use crate::estimators::{wcre_empirical, wcrte_empirical, Warning};
use crate::mc::{chunked_fold, with_threads};
use crate::numeric::{quantile_type7, sort_floats, CompensatedSum};
use crate::rng::{RandomStream, DEFAULT_SEED};
use crate::sample::Sample;

/// The order at which the null value `(α+4)/(6(α+1)(α+2))` of the WCRTE
/// statistic sits at the midpoint of its range `[0, 1/(2α^{α/(α−1)})]`.
pub const ALPHA_CENTERED: f64 = 6.586506;

/// Observations are pulled into `[AD_CLAMP, 1 − AD_CLAMP]` before taking logs.
pub const AD_CLAMP: f64 = 1e-12;

/// Lower limit for `log` of a spacing in the entropy statistic.
pub const LOG_FLOOR: f64 = -745.0;

/// Upper bound of the WCRTE statistic on `[0, 1]` data.
pub fn wcrte_statistic_bound(alpha: TsallisOrder) -> f64 {
    let a = alpha.value();
    0.5 / a.powf(a / (a - 1.0))
}

/// Upper bound `1/(2e)` of the WCRE statistic on `[0, 1]` data.
pub fn wcre_statistic_bound() -> f64 {
    0.5 / std::f64::consts::E
}

fn require_unit(sample: &Sample) -> Result<()> {
    if sample.in_unit_interval() {
        Ok(())
    } else {
        Err(Error::Domain("uniformity tests need every observation in [0, 1]".into()))
    }
}

/// WCRTE plug-in statistic of a sample in `[0, 1]`.
pub fn test_statistic_wcrte(sample: &Sample, alpha: TsallisOrder) -> Result<f64> {
    require_unit(sample)?;
    wcrte_empirical(sample, alpha)
}

/// WCRE plug-in statistic `−(1/2) Σ (X²(i+1) − X²(i)) (1−i/n) log(1−i/n)`.
pub fn test_statistic_wcre(sample: &Sample) -> Result<f64> {
    require_unit(sample)?;
    wcre_empirical(sample)
}

/// Kolmogorov–Smirnov distance to U(0, 1) of sorted data.
pub fn ks_statistic(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let i = (k + 1) as f64;
            (i / n - x).max(x - (i - 1.0) / n)
        })
        .fold(0.0, f64::max)
}

/// Cramér–von Mises statistic of sorted data.
pub fn cvm_statistic(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    let nf = n as f64;
    let acc: CompensatedSum = sorted
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let d = x - (2 * k + 1) as f64 / (2.0 * nf);
            d * d
        })
        .collect();
    1.0 / (12.0 * nf) + acc.value()
}

/// Anderson–Darling statistic of sorted data. Returns whether any
/// observation had to be clamped away from 0 or 1.
pub fn ad_statistic(sorted: &[f64]) -> (f64, bool) {
    let n = sorted.len();
    let mut clamped = false;
    let mut clamp = |x: f64| {
        let c = x.clamp(AD_CLAMP, 1.0 - AD_CLAMP);
        clamped |= c != x;
        c
    };
    let mut acc = CompensatedSum::new();
    for i in 0..n {
        let lo = clamp(sorted[i]);
        let hi = clamp(sorted[n - 1 - i]);
        acc.add((2 * i + 1) as f64 * (lo.ln() + (-hi).ln_1p()));
    }
    (-(n as f64) - acc.value() / n as f64, clamped)
}

/// Sample-entropy statistic `(1/n) Σ log[(n/(2m)) (X(k+m) − X(k−m))]`.
/// Returns whether a zero spacing hit [`LOG_FLOOR`].
pub fn ent_statistic(sorted: &[f64], m: usize) -> Result<(f64, bool)> {
    let n = sorted.len();
    if m == 0 || 2 * m >= n {
        return Err(Error::Spec(format!("entropy window m = {m} must satisfy 1 ≤ m < n/2 (n = {n})")));
    }
    let scale = n as f64 / (2 * m) as f64;
    let mut floored = false;
    let mut acc = CompensatedSum::new();
    for k in 0..n {
        let d = sorted[(k + m).min(n - 1)] - sorted[k.saturating_sub(m)];
        let mut l = (scale * d).ln();
        if l < LOG_FLOOR {
            l = LOG_FLOOR;
            floored = true;
        }
        acc.add(l);
    }
    Ok((acc.value() / n as f64, floored))
}

/// Default entropy-test window `⌊√n⌋ + 1`, reduced when needed so that `m < n/2`.
pub fn default_ent_window(n: usize) -> usize {
    let m = (n as f64).sqrt().floor() as usize + 1;
    m.min(n.div_ceil(2).saturating_sub(1)).max(1)
}

/// A uniformity test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GofTest {
    Wcrte(TsallisOrder),
    Wcre,
    Ks,
    Cvm,
    Ad,
    /// Entropy test; `None` selects [`default_ent_window`].
    Ent(Option<usize>),
}

/// Which tail of the null distribution leads to rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Both,
    Lower,
    Upper,
}

impl GofTest {
    pub fn tail(&self) -> Tail {
        match self {
            GofTest::Wcrte(_) | GofTest::Wcre => Tail::Both,
            GofTest::Ent(_) => Tail::Lower,
            GofTest::Ks | GofTest::Cvm | GofTest::Ad => Tail::Upper,
        }
    }

    /// The seven tests reported alongside the four standard orders.
    pub fn standard_set() -> Vec<GofTest> {
        let mut tests = vec![GofTest::Wcre];
        tests.extend([2.0, 5.0, 7.0, 10.0].map(|a| GofTest::Wcrte(TsallisOrder::new(a).unwrap())));
        tests.extend([GofTest::Ent(None), GofTest::Ks, GofTest::Cvm, GofTest::Ad]);
        tests
    }

    /// Short name without parameters: `wcrte`, `wcre`, `ks`, `cvm`, `ad`, `ent`.
    pub fn name(&self) -> &'static str {
        match self {
            GofTest::Wcrte(_) => "wcrte",
            GofTest::Wcre => "wcre",
            GofTest::Ks => "ks",
            GofTest::Cvm => "cvm",
            GofTest::Ad => "ad",
            GofTest::Ent(_) => "ent",
        }
    }

    /// α for the entropy-based tests (1 for WCRE), `None` otherwise.
    pub fn alpha_label(&self) -> Option<f64> {
        match self {
            GofTest::Wcrte(a) => Some(a.value()),
            GofTest::Wcre => Some(1.0),
            _ => None,
        }
    }

    /// The entropy-test window used at sample size `n`.
    pub fn window(&self, n: usize) -> Option<usize> {
        match self {
            GofTest::Ent(m) => Some(m.unwrap_or_else(|| default_ent_window(n))),
            _ => None,
        }
    }

    /// The statistic on sorted data in `[0, 1]`, without a range check.
    fn statistic_sorted(&self, sorted: &[f64], sample: &Sample) -> Result<(f64, Option<Warning>)> {
        Ok(match self {
            GofTest::Wcrte(a) => (wcrte_empirical(sample, *a)?, None),
            GofTest::Wcre => (wcre_empirical(sample)?, None),
            GofTest::Ks => (ks_statistic(sorted), None),
            GofTest::Cvm => (cvm_statistic(sorted), None),
            GofTest::Ad => {
                let (v, c) = ad_statistic(sorted);
                (v, c.then_some(Warning::ClampedObservations))
            }
            GofTest::Ent(_) => {
                let (v, f) = ent_statistic(sorted, self.window(sorted.len()).unwrap())?;
                (v, f.then_some(Warning::LogFloor))
            }
        })
    }

    /// The statistic of a sample in `[0, 1]`, with any diagnostics.
    pub fn statistic(&self, sample: &Sample) -> Result<(f64, Option<Warning>)> {
        require_unit(sample)?;
        self.statistic_sorted(sample.sorted(), sample)
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::Domain(format!("need n ≥ 2 observations, got {n}")));
        }
        if let Some(m) = self.window(n) {
            if m == 0 || 2 * m >= n {
                return Err(Error::Spec(format!("entropy window m = {m} must satisfy 1 ≤ m < n/2 (n = {n})")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GofTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GofTest::Wcrte(a) => write!(f, "wcrte:{a}"),
            GofTest::Ent(Some(m)) => write!(f, "ent:m={m}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for GofTest {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let (name, arg) = match t.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (t.as_str(), None),
        };
        let test = match (name, arg) {
            ("wcrte", Some(a)) => {
                let a = a.strip_prefix("alpha=").unwrap_or(a);
                let alpha: f64 = a.parse().map_err(|_| Error::Parse(format!("bad order in test {s:?}")))?;
                if (alpha - 1.0).abs() < TsallisOrder::ONE_TOLERANCE {
                    GofTest::Wcre
                } else {
                    GofTest::Wcrte(TsallisOrder::new(alpha)?)
                }
            }
            ("wcre", None) => GofTest::Wcre,
            ("ks", None) => GofTest::Ks,
            ("cvm", None) => GofTest::Cvm,
            ("ad", None) => GofTest::Ad,
            ("ent", None) => GofTest::Ent(None),
            ("ent", Some(m)) => {
                let m = m.strip_prefix("m=").unwrap_or(m);
                GofTest::Ent(Some(m.parse().map_err(|_| Error::Parse(format!("bad window in test {s:?}")))?))
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unknown test {s:?}; expected wcrte:<alpha>, wcre, ks, cvm, ad, ent or ent:m=<m>"
                )))
            }
        };
        Ok(test)
    }
}

impl TryFrom<String> for GofTest {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GofTest> for String {
    fn from(t: GofTest) -> String {
        t.to_string()
    }
}

/// Simulated critical values of one test at one sample size.
///
/// Two-sided tests carry both bounds (the `γ/2` and `1 − γ/2` null
/// quantiles); the entropy test only `lower` (the `γ` quantile); KS, CvM and
/// AD only `upper` (the `1 − γ` quantile).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPair {
    pub test: GofTest,
    pub n: usize,
    pub m: Option<usize>,
    pub gamma: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub replications: usize,
    pub seed: u64,
}

impl CriticalPair {
    /// Rejects when the statistic is at or beyond a critical value.
    pub fn rejects(&self, statistic: f64) -> bool {
        self.lower.is_some_and(|l| statistic <= l) || self.upper.is_some_and(|u| statistic >= u)
    }
}

/// Outcome of a single test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub statistic: f64,
    pub critical: CriticalPair,
    pub reject: bool,
    pub warnings: Vec<Warning>,
}

/// Settings shared by the simulation entry points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Simulation {
    pub gamma: f64,
    pub replications: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl Default for Simulation {
    fn default() -> Self {
        Self { gamma: 0.05, replications: 10_000, seed: DEFAULT_SEED, threads: None }
    }
}

impl Simulation {
    fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Spec(format!("significance level must lie in (0, 1), got {}", self.gamma)));
        }
        if self.replications == 0 {
            return Err(Error::Spec("replications must be at least 1".into()));
        }
        Ok(())
    }
}

const MAX_GOF_N: usize = 0xFFFF;

/// Stream group for samples of size `n` from `model`; the null U(0, 1)
/// samples used for critical values (`model = None`) have their own groups.
fn stream_group(model: Option<&Model>, n: usize) -> Result<u64> {
    if n > MAX_GOF_N {
        return Err(Error::Spec(format!("sample size {n} exceeds the supported maximum {MAX_GOF_N}")));
    }
    Ok(match model {
        None => n as u64,
        Some(m) => {
            let tag = m.to_string().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
            (1 << 31) | ((tag & 0x7FFF) << 16) | n as u64
        }
    })
}

fn uniform() -> Model {
    Model::Parametric(ParametricModel::uniform(1.0).expect("θ = 1 is valid"))
}

/// Statistics of every test on `replications` samples of size `n` from
/// `model`, one row per replication in replication order.
fn simulate_statistics(model: &Model, group: u64, n: usize, tests: &[GofTest], sim: &Simulation) -> Result<Vec<Vec<f64>>> {
    (0..sim.replications)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(n),
            |buf, r| {
                let mut stream = RandomStream::derive(sim.seed, group, r as u64);
                model.sample_into(n, &mut stream, buf);
                let sample = Sample::new(std::mem::take(buf))?;
                tests
                    .iter()
                    .map(|t| t.statistic_sorted(sample.sorted(), &sample).map(|(v, _)| v))
                    .collect()
            },
        )
        .collect()
}

/// Null statistics of `test` at size `n`, sorted ascending.
pub fn null_distribution(test: GofTest, n: usize, sim: &Simulation) -> Result<Vec<f64>> {
    sim.validate()?;
    test.check_n(n)?;
    let rows = with_threads(sim.threads, || simulate_statistics(&uniform(), stream_group(None, n)?, n, &[test], sim))??;
    let mut values: Vec<f64> = rows.into_iter().map(|r| r[0]).collect();
    sort_floats(&mut values);
    Ok(values)
}

fn pair_from_null(test: GofTest, n: usize, sorted: &[f64], sim: &Simulation) -> CriticalPair {
    let g = sim.gamma;
    let (lower, upper) = match test.tail() {
        Tail::Both => (Some(quantile_type7(sorted, g / 2.0)), Some(quantile_type7(sorted, 1.0 - g / 2.0))),
        Tail::Lower => (Some(quantile_type7(sorted, g)), None),
        Tail::Upper => (None, Some(quantile_type7(sorted, 1.0 - g))),
    };
    CriticalPair {
        test,
        n,
        m: test.window(n),
        gamma: g,
        lower,
        upper,
        replications: sim.replications,
        seed: sim.seed,
    }
}

/// Critical values of several tests at size `n`, all from the same null samples.
pub fn critical_values_many(tests: &[GofTest], n: usize, sim: &Simulation) -> Result<Vec<CriticalPair>> {
    sim.validate()?;
    for t in tests {
        t.check_n(n)?;
    }
    let rows = with_threads(sim.threads, || simulate_statistics(&uniform(), stream_group(None, n)?, n, tests, sim))??;
    let mut column = vec![0.0; rows.len()];
    Ok(tests
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            for (c, row) in column.iter_mut().zip(&rows) {
                *c = row[k];
            }
            sort_floats(&mut column);
            pair_from_null(t, n, &column, sim)
        })
        .collect())
}

/// Critical values of `test` at size `n` from `sim.replications` U(0, 1) samples,
/// using type-7 empirical quantiles.
pub fn critical_values(test: GofTest, n: usize, sim: &Simulation) -> Result<CriticalPair> {
    Ok(critical_values_many(&[test], n, sim)?.remove(0))
}

/// Runs `test` on `sample` against simulated critical values.
pub fn run_test(test: GofTest, sample: &Sample, sim: &Simulation) -> Result<GofResult> {
    let (statistic, warning) = test.statistic(sample)?;
    let critical = critical_values(test, sample.n(), sim)?;
    Ok(GofResult { statistic, critical, reject: critical.rejects(statistic), warnings: warning.into_iter().collect() })
}

/// Settings for [`power_study`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerConfig {
    /// Models to draw from; U(0, 1) gives the empirical size.
    pub alternatives: Vec<Model>,
    pub sample_sizes: Vec<usize>,
    pub tests: Vec<GofTest>,
    #[serde(flatten)]
    pub simulation: Simulation,
    /// Null replications for the critical values; defaults to `replications`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_replications: Option<usize>,
}

/// One entry of a power table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub alternative: Model,
    pub n: usize,
    pub test: GofTest,
    pub m: Option<usize>,
    pub power: f64,
    pub replications: usize,
    pub seed: u64,
}

/// Rejection rate of every test against every model.
///
/// Critical values come from [`critical_values_many`] with the same seed;
/// samples from the models use separate stream groups, so a U(0, 1) entry
/// in `alternatives` measures the size on fresh data.
pub fn power_study(config: &PowerConfig) -> Result<Vec<PowerRow>> {
    let sim = config.simulation;
    sim.validate()?;
    with_threads(sim.threads, || {
        let mut rows = Vec::new();
        for &n in &config.sample_sizes {
            let null_sim = Simulation { replications: config.critical_replications.unwrap_or(sim.replications), ..sim };
            let critical = critical_values_many(&config.tests, n, &Simulation { threads: None, ..null_sim })?;
            for alt in &config.alternatives {
                let group = stream_group(Some(alt), n)?;
                let counts = count_rejections(alt, group, n, &config.tests, &critical, &sim)?;
                for ((test, pair), count) in config.tests.iter().zip(&critical).zip(counts) {
                    rows.push(PowerRow {
                        alternative: *alt,
                        n,
                        test: *test,
                        m: pair.m,
                        power: count as f64 / sim.replications as f64,
                        replications: sim.replications,
                        seed: sim.seed,
                    });
                }
            }
        }
        Ok(rows)
    })?
}

fn count_rejections(
    model: &Model,
    group: u64,
    n: usize,
    tests: &[GofTest],
    critical: &[CriticalPair],
    sim: &Simulation,
) -> Result<Vec<u64>> {
    type Acc = (Vec<u64>, Vec<f64>, Option<Error>);
    let init = || -> Acc { (vec![0; tests.len()], Vec::with_capacity(n), None) };
    let step = |acc: &mut Acc, r: usize| {
        if acc.2.is_some() {
            return;
        }
        let mut stream = RandomStream::derive(sim.seed, group, r as u64);
        model.sample_into(n, &mut stream, &mut acc.1);
        let sample = match Sample::new(std::mem::take(&mut acc.1)) {
            Ok(s) => s,
            Err(e) => {
                acc.2 = Some(e);
                return;
            }
        };
        for ((t, c), count) in tests.iter().zip(critical).zip(acc.0.iter_mut()) {
            match t.statistic_sorted(sample.sorted(), &sample) {
                Ok((v, _)) => *count += c.rejects(v) as u64,
                Err(e) => {
                    acc.2 = Some(e);
                    return;
                }
            }
        }
    };
    let merge = |total: &mut Acc, part: Acc| {
        for (t, p) in total.0.iter_mut().zip(part.0) {
            *t += p;
        }
        if total.2.is_none() {
            total.2 = part.2;
        }
    };
    let (counts, _, err) = chunked_fold(sim.replications, init, step, merge);
    err.map_or(Ok(counts), Err)
}

fn opt(v: Option<impl ToString>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV with columns `test,n,alpha,m,gamma,lower,upper,statistic,reject`.
pub fn write_results_csv<W: Write>(results: &[GofResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["test", "n", "alpha", "m", "gamma", "lower", "upper", "statistic", "reject"])?;
    for r in results {
        let c = &r.critical;
        w.write_record([
            c.test.name().to_string(),
            c.n.to_string(),
            opt(c.test.alpha_label()),
            opt(c.m),
            c.gamma.to_string(),
            opt(c.lower),
            opt(c.upper),
            r.statistic.to_string(),
            r.reject.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Io { path: "<output>".into(), source: e })?;
    Ok(())
}

/// CSV of critical values with the single-test columns; `statistic` and
/// `reject` are left empty.
pub fn write_critical_csv<W: Write>(pairs: &[CriticalPair], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["test", "n", "alpha", "m", "gamma", "lower", "upper", "statistic", "reject"])?;
    for c in pairs {
        w.write_record([
            c.test.name().to_string(),
            c.n.to_string(),
            opt(c.test.alpha_label()),
            opt(c.m),
            c.gamma.to_string(),
            opt(c.lower),
            opt(c.upper),
            String::new(),
            String::new(),
        ])?;
    }
    w.flush().map_err(|e| Error::Io { path: "<output>".into(), source: e })?;
    Ok(())
}

/// CSV with columns `alternative,n,test,alpha,m,power,R,seed`.
pub fn write_power_csv<W: Write>(rows: &[PowerRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alternative", "n", "test", "alpha", "m", "power", "R", "seed"])?;
    for r in rows {
        w.write_record([
            r.alternative.to_string(),
            r.n.to_string(),
            r.test.name().to_string(),
            opt(r.test.alpha_label()),
            opt(r.m),
            r.power.to_string(),
            r.replications.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Io { path: "<output>".into(), source: e })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> TsallisOrder {
        TsallisOrder::new(a).unwrap()
    }

    fn sim(reps: usize) -> Simulation {
        Simulation { gamma: 0.05, replications: reps, seed: 11, threads: None }
    }

    #[test]
    fn alpha_centered_solves_midpoint_equation() {
        let g = |a: f64| (a + 4.0) / (6.0 * (a + 1.0) * (a + 2.0)) - 0.25 / a.powf(a / (a - 1.0));
        let (mut lo, mut hi) = (2.0, 20.0);
        assert!(g(lo).signum() != g(hi).signum());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid).signum() == g(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((0.5 * (lo + hi) - ALPHA_CENTERED).abs() < 5e-5);
    }

    #[test]
    fn bounds_have_expected_values() {
        assert_eq!(wcrte_statistic_bound(order(2.0)), 0.125);
        assert!((wcre_statistic_bound() - 0.1839).abs() < 1e-4);
    }

    #[test]
    fn competitor_hand_values() {
        assert_eq!(ks_statistic(&[0.5]), 0.5);
        let n = 8;
        let grid: Vec<f64> = (1..=n).map(|i| (2 * i - 1) as f64 / (2 * n) as f64).collect();
        assert!((cvm_statistic(&grid) - 1.0 / (12.0 * n as f64)).abs() < 1e-15);
        assert!((ks_statistic(&grid) - 0.5 / n as f64).abs() < 1e-15);
        // n = 1 at x = 1/2: AD = −1 − (log 1/2 + log 1/2)
        let (ad, clamped) = ad_statistic(&[0.5]);
        assert!((ad - (-1.0 + 2.0 * 2f64.ln())).abs() < 1e-15);
        assert!(!clamped);
        assert!(ad_statistic(&[0.0, 0.5, 1.0]).1);
    }

    #[test]
    fn ent_on_regular_grid_and_ties() {
        let n = 10;
        let grid: Vec<f64> = (1..=n).map(|i| (2 * i - 1) as f64 / (2 * n) as f64).collect();
        let (h, floored) = ent_statistic(&grid, 2).unwrap();
        assert!(h < 0.0 && h > -0.5);
        assert!(!floored);
        let (h, floored) = ent_statistic(&[0.3; 6], 1).unwrap();
        assert_eq!(h, LOG_FLOOR);
        assert!(floored);
        assert!(ent_statistic(&grid, 5).is_err());
        assert_eq!(default_ent_window(100), 11);
        assert_eq!(default_ent_window(4), 1);
    }

    #[test]
    fn statistics_reject_data_outside_unit_interval() {
        let s = Sample::new(vec![0.2, 1.5]).unwrap();
        assert!(matches!(test_statistic_wcre(&s), Err(Error::Domain(_))));
        assert!(test_statistic_wcrte(&s, order(2.0)).is_err());
        let equal = Sample::new(vec![0.4; 5]).unwrap();
        assert_eq!(test_statistic_wcrte(&equal, order(2.0)).unwrap(), 0.0);
    }

    #[test]
    fn test_names_round_trip() {
        for t in GofTest::standard_set().into_iter().chain([GofTest::Ent(Some(3))]) {
            assert_eq!(t.to_string().parse::<GofTest>().unwrap(), t);
        }
        assert_eq!("wcrte:1".parse::<GofTest>().unwrap(), GofTest::Wcre);
        assert_eq!("wcrte:alpha=5".parse::<GofTest>().unwrap(), GofTest::Wcrte(order(5.0)));
        assert!("chi2".parse::<GofTest>().is_err());
    }

    #[test]
    fn critical_pair_ordering_and_bound() {
        let p = critical_values(GofTest::Wcrte(order(2.0)), 10, &sim(2000)).unwrap();
        let (l, u) = (p.lower.unwrap(), p.upper.unwrap());
        assert!(0.0 < l && l < u && u <= 0.125);
        assert!(p.rejects(l) && p.rejects(u) && !p.rejects(0.5 * (l + u)));
        let ks = critical_values(GofTest::Ks, 10, &sim(2000)).unwrap();
        assert!(ks.lower.is_none() && ks.upper.unwrap() > 0.0);
        let ent = critical_values(GofTest::Ent(None), 10, &sim(2000)).unwrap();
        assert!(ent.upper.is_none() && ent.lower.unwrap() < 0.0);
        assert_eq!(ent.m, Some(4));
    }

    #[test]
    fn critical_values_are_thread_independent() {
        let tests = GofTest::standard_set();
        let mut s = sim(1500);
        s.threads = Some(1);
        let a = critical_values_many(&tests, 12, &s).unwrap();
        s.threads = Some(3);
        let b = critical_values_many(&tests, 12, &s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn power_against_uniform_is_near_gamma() {
        let config = PowerConfig {
            alternatives: vec![uniform()],
            sample_sizes: vec![20],
            tests: vec![GofTest::Wcrte(order(2.0)), GofTest::Ks],
            simulation: sim(4000),
            critical_replications: None,
        };
        for row in power_study(&config).unwrap() {
            assert!((row.power - 0.05).abs() < 0.02, "{row:?}");
        }
    }

    #[test]
    fn csv_headers() {
        let p = critical_values(GofTest::Wcre, 10, &sim(1000)).unwrap();
        let mut buf = Vec::new();
        write_critical_csv(&[p], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("test,n,alpha,m,gamma,lower,upper,statistic,reject\nwcre,10,1,,0.05,"));
    }
}
