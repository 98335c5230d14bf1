//! Order-statistic estimators of WCRTE and WCRE.
//!
//! Every estimator is a function of the sorted sample only. With `q_i = 1 − i/n`
//! and the WCRTE weight `w_i = q_i − q_i^α` (WCRE: `g_i = −q_i log q_i`):
//!
//! | Kind | WCRTE |
//! |---|---|
//! | plug-in | `1/(2(α−1)) Σ_{i<n} (X²(i+1) − X²(i)) w_i` |
//! | Vasicek | `1/(4m(α−1)) Σ_i (X²(i+m) − X²(i−m)) w_i` |
//! | Ebrahimi | `1/(2m(α−1)) Σ_i (X²(i+m) − X²(i−m)) w_i / C_i` |
//! | modified | `1/(m(α−1)) Σ_i (X²(i+m) − X²(i−m)) w_i / C_i²` |
//! | L-statistic | `1/(2(α−1)) (1/n) Σ_i X²(i) (1 − α(1 − p_i)^{α−1})` |
//!
//! Out-of-range order statistics are clamped to `X(1)` / `X(n)`. The WCRE
//! versions replace `w_i/(α−1)` by `g_i` and sum over `i < n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::distributions::{Measure, TsallisOrder};
use crate::error::{Error, Result};
use crate::mc::heuristic_window;
use crate::numeric::CompensatedSum;
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    #[serde(rename = "plugin")]
    EmpiricalPlugin,
    #[serde(rename = "vasicek")]
    VasicekType,
    #[serde(rename = "ebrahimi")]
    EbrahimiType,
    #[serde(rename = "modified")]
    ModifiedN,
    #[serde(rename = "lstat")]
    LStatistic,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 5] = [
        EstimatorKind::EmpiricalPlugin,
        EstimatorKind::VasicekType,
        EstimatorKind::EbrahimiType,
        EstimatorKind::ModifiedN,
        EstimatorKind::LStatistic,
    ];

    pub fn uses_window(self) -> bool {
        matches!(self, Self::VasicekType | Self::EbrahimiType | Self::ModifiedN)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::EmpiricalPlugin => "plugin",
            Self::VasicekType => "vasicek",
            Self::EbrahimiType => "ebrahimi",
            Self::ModifiedN => "modified",
            Self::LStatistic => "lstat",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "plugin" | "emp" | "empirical" | "p" => Self::EmpiricalPlugin,
            "vasicek" | "v" => Self::VasicekType,
            "ebrahimi" | "e" => Self::EbrahimiType,
            "modified" | "n" | "modified-n" => Self::ModifiedN,
            "lstat" | "l" => Self::LStatistic,
            other => return Err(Error::Parse(format!("unknown estimator kind {other:?}"))),
        })
    }
}

/// Plotting position assigned to `X(i)` by the L-statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Plotting {
    /// `p_i = i/n`
    #[serde(rename = "n")]
    OverN,
    /// `p_i = i/(n+1)`
    #[serde(rename = "n+1")]
    OverNPlusOne,
}

impl Plotting {
    /// `i/n` for WCRTE; `i/(n+1)` for WCRE.
    pub fn default_for(measure: Measure) -> Self {
        match measure {
            Measure::Wcrte(_) => Plotting::OverN,
            Measure::Wcre => Plotting::OverNPlusOne,
        }
    }

    #[inline]
    fn position(self, i: usize, n: usize) -> f64 {
        match self {
            Plotting::OverN => i as f64 / n as f64,
            Plotting::OverNPlusOne => i as f64 / (n + 1) as f64,
        }
    }
}

impl FromStr for Plotting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "n" => Ok(Plotting::OverN),
            "n+1" | "n1" => Ok(Plotting::OverNPlusOne),
            other => Err(Error::Parse(format!("plotting position must be `n` or `n+1`, got {other:?}"))),
        }
    }
}

/// Diagnostics attached to an estimate. None of them invalidate the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Warning {
    /// Spacing estimator used with α < 1; the population value needs
    /// higher moments than the variance to be finite.
    AlphaBelowOne,
    /// WCRE L-statistic with `p_i = i/n`: the `i = n` term (log 0) was dropped.
    DroppedLogZeroTerm,
    /// The plug-in variance estimate came out negative.
    NegativeVariance,
    /// Observations at exactly 0 or 1 were pulled inside the open interval.
    ClampedObservations,
    /// A zero spacing hit the log floor.
    LogFloor,
}

/// A value together with any diagnostics raised while computing it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub warnings: Vec<Warning>,
}

impl Estimate {
    pub fn clean(value: f64) -> Self {
        Self { value, warnings: Vec::new() }
    }

    pub fn with(value: f64, warning: Option<Warning>) -> Self {
        Self { value, warnings: warning.into_iter().collect() }
    }
}

/// Ebrahimi boundary weights `C_1..C_n` for window `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct EbrahimiWeights {
    c: Vec<f64>,
}

impl EbrahimiWeights {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        check_window(n, m)?;
        Ok(Self { c: (1..=n).map(|i| ebrahimi_weight(i, n, m)).collect() })
    }

    /// `C_i` for a 1-based index.
    pub fn get(&self, i: usize) -> f64 {
        self.c[i - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c
    }
}

#[inline]
fn ebrahimi_weight(i: usize, n: usize, m: usize) -> f64 {
    if i <= m {
        1.0 + (i - 1) as f64 / m as f64
    } else if i <= n - m {
        2.0
    } else {
        1.0 + (n - i) as f64 / m as f64
    }
}

/// Checks `1 ≤ m < n/2`.
pub fn check_window(n: usize, m: usize) -> Result<()> {
    if m == 0 || 2 * m >= n {
        return Err(Error::Spec(format!("window m = {m} must satisfy 1 ≤ m < n/2 (n = {n})")));
    }
    Ok(())
}

#[inline]
fn wcrte_weight(i: usize, n: usize, alpha: f64) -> f64 {
    let q = (n - i) as f64 / n as f64;
    q - q.powf(alpha)
}

#[inline]
fn wcre_weight(i: usize, n: usize) -> f64 {
    let q = (n - i) as f64 / n as f64;
    if q > 0.0 {
        -q * q.ln()
    } else {
        0.0
    }
}

#[derive(Clone, Copy)]
enum Boundary {
    None,
    Ebrahimi,
    EbrahimiSquared,
}

/// `Σ_{i=1}^{last} (X²(i+m) − X²(i−m)) · weight(i) / C_i^k`
fn windowed_sum(sample: &Sample, m: usize, last: usize, boundary: Boundary, weight: impl Fn(usize) -> f64) -> f64 {
    let n = sample.n();
    let m_signed = m as isize;
    let mut acc = CompensatedSum::new();
    for i in 1..=last {
        let hi = sample.clamp_order_stat(i as isize + m_signed);
        let lo = sample.clamp_order_stat(i as isize - m_signed);
        let spacing = hi * hi - lo * lo;
        if spacing == 0.0 {
            continue;
        }
        let divisor = match boundary {
            Boundary::None => 1.0,
            Boundary::Ebrahimi => ebrahimi_weight(i, n, m),
            Boundary::EbrahimiSquared => {
                let c = ebrahimi_weight(i, n, m);
                c * c
            }
        };
        acc.add(spacing * weight(i) / divisor);
    }
    acc.value()
}

/// `Σ_{i=1}^{n−1} (X²(i+1) − X²(i)) · weight(i)`
fn adjacent_sum(sample: &Sample, weight: impl Fn(usize) -> f64) -> f64 {
    let x = sample.sorted();
    let mut acc = CompensatedSum::new();
    for (k, pair) in x.windows(2).enumerate() {
        let spacing = pair[1] * pair[1] - pair[0] * pair[0];
        if spacing != 0.0 {
            acc.add(spacing * weight(k + 1));
        }
    }
    acc.value()
}

/// Plug-in estimator obtained by substituting the empirical survival function.
pub fn wcrte_empirical(sample: &Sample, alpha: TsallisOrder) -> Result<f64> {
    let a = alpha.value();
    let n = sample.n();
    Ok(adjacent_sum(sample, |i| wcrte_weight(i, n, a)) / (2.0 * (a - 1.0)))
}

/// Plug-in estimator of WCRE: `(1/2) Σ (X²(i+1) − X²(i)) (−q_i log q_i)`.
pub fn wcre_empirical(sample: &Sample) -> Result<f64> {
    let n = sample.n();
    Ok(0.5 * adjacent_sum(sample, |i| wcre_weight(i, n)))
}

/// Vasicek-type spacing estimator with window `m`.
pub fn wcrte_vasicek(sample: &Sample, alpha: TsallisOrder, m: usize) -> Result<f64> {
    let n = sample.n();
    check_window(n, m)?;
    let a = alpha.value();
    Ok(windowed_sum(sample, m, n, Boundary::None, |i| wcrte_weight(i, n, a)) / (4.0 * m as f64 * (a - 1.0)))
}

/// Ebrahimi-type spacing estimator: Vasicek terms divided by `C_i`.
pub fn wcrte_ebrahimi(sample: &Sample, alpha: TsallisOrder, m: usize) -> Result<f64> {
    let n = sample.n();
    check_window(n, m)?;
    let a = alpha.value();
    Ok(windowed_sum(sample, m, n, Boundary::Ebrahimi, |i| wcrte_weight(i, n, a)) / (2.0 * m as f64 * (a - 1.0)))
}

/// Spacing estimator with the Ebrahimi correction applied to both the slope
/// and the location, giving `C_i²` in the denominator.
pub fn wcrte_modified_n(sample: &Sample, alpha: TsallisOrder, m: usize) -> Result<f64> {
    let n = sample.n();
    check_window(n, m)?;
    let a = alpha.value();
    Ok(windowed_sum(sample, m, n, Boundary::EbrahimiSquared, |i| wcrte_weight(i, n, a)) / (m as f64 * (a - 1.0)))
}

/// L-statistic `1/(2(α−1)) (1/n) Σ X²(i) (1 − α(1 − p_i)^{α−1})`; requires α > 1.
pub fn wcrte_lstat(sample: &Sample, alpha: TsallisOrder, plotting: Plotting) -> Result<f64> {
    let a = alpha.value();
    if a < 1.0 {
        return Err(Error::Spec(format!(
            "the L-statistic needs α > 1 (got {a}); use the WCRE L-statistic for the α → 1 limit"
        )));
    }
    let n = sample.n();
    let acc: CompensatedSum = sample
        .sorted()
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let p = plotting.position(k + 1, n);
            x * x * (1.0 - a * (1.0 - p).powf(a - 1.0))
        })
        .collect();
    Ok(acc.value() / (2.0 * (a - 1.0) * n as f64))
}

pub fn wcre_vasicek(sample: &Sample, m: usize) -> Result<f64> {
    let n = sample.n();
    check_window(n, m)?;
    Ok(windowed_sum(sample, m, n - 1, Boundary::None, |i| wcre_weight(i, n)) / (4.0 * m as f64))
}

pub fn wcre_ebrahimi(sample: &Sample, m: usize) -> Result<f64> {
    let n = sample.n();
    check_window(n, m)?;
    Ok(windowed_sum(sample, m, n - 1, Boundary::Ebrahimi, |i| wcre_weight(i, n)) / (2.0 * m as f64))
}

pub fn wcre_modified_n(sample: &Sample, m: usize) -> Result<f64> {
    let n = sample.n();
    check_window(n, m)?;
    Ok(windowed_sum(sample, m, n - 1, Boundary::EbrahimiSquared, |i| wcre_weight(i, n)) / m as f64)
}

/// WCRE L-statistic `−(1/(2n)) Σ X²(i) (1 + log(1 − p_i))`.
///
/// With `p_i = i/n` the last term contains `log 0`; it is left out of the
/// sum and [`Warning::DroppedLogZeroTerm`] is raised.
pub fn wcre_lstat(sample: &Sample, plotting: Plotting) -> Result<Estimate> {
    let n = sample.n();
    let last = match plotting {
        Plotting::OverN => n - 1,
        Plotting::OverNPlusOne => n,
    };
    let acc: CompensatedSum = sample.sorted()[..last]
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let p = plotting.position(k + 1, n);
            x * x * (1.0 + (-p).ln_1p())
        })
        .collect();
    let value = -acc.value() / (2.0 * n as f64);
    let warning = (plotting == Plotting::OverN).then_some(Warning::DroppedLogZeroTerm);
    Ok(Estimate::with(value, warning))
}

/// Factor in front of the double sum in the plug-in asymptotic variance of
/// the L-statistics. Replacing `x dx` by half a squared spacing turns
/// `σ² = 2/(α−1)² ∫∫_{y<x} x y F(y) S(x) ψ(x) ψ(y) dx dy` into
/// `1/(2(α−1)²) Σ_j Σ_{i>j} …`.
const VARIANCE_PREFACTOR: f64 = 0.5;

/// `Σ_{j=1}^{n−1} Σ_{i=j+1}^{n−1} (j/n)(1 − i/n) ψ_i ψ_j D_i D_j`, with
/// `D_k = X²(k+1) − X²(k)`, in O(n) via a compensated prefix sum.
fn variance_double_sum(sample: &Sample, psi: impl Fn(usize) -> f64) -> f64 {
    let n = sample.n();
    let x = sample.sorted();
    let nf = n as f64;
    let mut prefix = CompensatedSum::new();
    let mut total = CompensatedSum::new();
    for k in 1..n {
        let d = x[k] * x[k] - x[k - 1] * x[k - 1];
        let w = psi(k) * d;
        if k > 1 {
            total.add((1.0 - k as f64 / nf) * w * prefix.value());
        }
        prefix.add(k as f64 / nf * w);
    }
    total.value()
}

fn check_variance_n(sample: &Sample) -> Result<()> {
    if sample.n() < 3 {
        return Err(Error::Domain(format!("variance estimate needs n ≥ 3, got {}", sample.n())));
    }
    Ok(())
}

/// Plug-in estimate of the asymptotic variance of `√n (L − WCRTE_α)`.
///
/// Not guaranteed nonnegative at small n; callers should check the sign
/// (see [`EstimatorSpec::variance`]).
pub fn wcrte_lstat_variance(sample: &Sample, alpha: TsallisOrder) -> Result<f64> {
    check_variance_n(sample)?;
    let a = alpha.value();
    if a < 1.0 {
        return Err(Error::Spec(format!("the L-statistic variance needs α > 1 (got {a})")));
    }
    let n = sample.n();
    let s = variance_double_sum(sample, |k| {
        let q = (n - k) as f64 / n as f64;
        1.0 - a * q.powf(a - 1.0)
    });
    Ok(VARIANCE_PREFACTOR * s / ((a - 1.0) * (a - 1.0)))
}

/// Plug-in estimate of the asymptotic variance of `√n (L − WCRE)`.
pub fn wcre_lstat_variance(sample: &Sample) -> Result<f64> {
    check_variance_n(sample)?;
    let n = sample.n();
    let s = variance_double_sum(sample, |k| {
        let q = (n - k) as f64 / n as f64;
        1.0 + q.ln()
    });
    Ok(VARIANCE_PREFACTOR * s)
}

/// A fully specified estimator: kind, target measure, window and plotting
/// position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSpec {
    pub kind: EstimatorKind,
    pub measure: Measure,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plotting: Option<Plotting>,
}

impl EstimatorSpec {
    pub fn new(kind: EstimatorKind, measure: Measure, window: Option<usize>) -> Result<Self> {
        let spec = Self { kind, measure, window, plotting: None };
        spec.validate_shape()?;
        Ok(spec)
    }

    pub fn with_plotting(mut self, plotting: Plotting) -> Self {
        self.plotting = Some(plotting);
        self
    }

    pub fn plotting(&self) -> Plotting {
        self.plotting.unwrap_or_else(|| Plotting::default_for(self.measure))
    }

    fn validate_shape(&self) -> Result<()> {
        match (self.kind.uses_window(), self.window) {
            (true, None) => Err(Error::Spec(format!("{} estimator needs a window m", self.kind))),
            (false, Some(m)) => Err(Error::Spec(format!("{} estimator takes no window (got m = {m})", self.kind))),
            (true, Some(0)) => Err(Error::Spec("window m must be at least 1".into())),
            _ => Ok(()),
        }
    }

    /// Checks the spec against a sample size.
    pub fn validate(&self, n: usize) -> Result<()> {
        self.validate_shape()?;
        if n < 2 {
            return Err(Error::Domain(format!("need n ≥ 2 observations, got {n}")));
        }
        if let Some(m) = self.window {
            check_window(n, m)?;
        }
        if self.kind == EstimatorKind::LStatistic {
            if let Measure::Wcrte(o) = self.measure {
                if o.value() < 1.0 {
                    return Err(Error::Spec(format!("the L-statistic needs α > 1 (got {o})")));
                }
            }
        }
        Ok(())
    }

    pub fn estimate(&self, sample: &Sample) -> Result<Estimate> {
        self.validate(sample.n())?;
        let below_one = match self.measure {
            Measure::Wcrte(o) if o.value() < 1.0 && self.kind.uses_window() => Some(Warning::AlphaBelowOne),
            _ => None,
        };
        let m = self.window.unwrap_or(0);
        let value = match (self.measure, self.kind) {
            (Measure::Wcrte(a), EstimatorKind::EmpiricalPlugin) => wcrte_empirical(sample, a)?,
            (Measure::Wcrte(a), EstimatorKind::VasicekType) => wcrte_vasicek(sample, a, m)?,
            (Measure::Wcrte(a), EstimatorKind::EbrahimiType) => wcrte_ebrahimi(sample, a, m)?,
            (Measure::Wcrte(a), EstimatorKind::ModifiedN) => wcrte_modified_n(sample, a, m)?,
            (Measure::Wcrte(a), EstimatorKind::LStatistic) => wcrte_lstat(sample, a, self.plotting())?,
            (Measure::Wcre, EstimatorKind::EmpiricalPlugin) => wcre_empirical(sample)?,
            (Measure::Wcre, EstimatorKind::VasicekType) => wcre_vasicek(sample, m)?,
            (Measure::Wcre, EstimatorKind::EbrahimiType) => wcre_ebrahimi(sample, m)?,
            (Measure::Wcre, EstimatorKind::ModifiedN) => wcre_modified_n(sample, m)?,
            (Measure::Wcre, EstimatorKind::LStatistic) => return wcre_lstat(sample, self.plotting()),
        };
        Ok(Estimate::with(value, below_one))
    }

    /// Plug-in asymptotic variance for the L-statistics; `None` for other
    /// kinds. Negative values are returned as computed and flagged.
    pub fn variance(&self, sample: &Sample) -> Result<Option<Estimate>> {
        if self.kind != EstimatorKind::LStatistic {
            return Ok(None);
        }
        let v = match self.measure {
            Measure::Wcrte(a) => wcrte_lstat_variance(sample, a)?,
            Measure::Wcre => wcre_lstat_variance(sample)?,
        };
        Ok(Some(Estimate::with(v, (v < 0.0).then_some(Warning::NegativeVariance))))
    }
}

/// Standard error `sqrt(σ²/n)` and the two-sided normal interval at
/// confidence `level` around `value`.
pub fn normal_interval(value: f64, variance: f64, n: usize, level: f64) -> Result<(f64, f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("confidence level must lie in (0, 1), got {level}")));
    }
    if variance.is_nan() || variance < 0.0 || n == 0 {
        return Err(Error::Domain(format!("need a nonnegative variance and n ≥ 1, got {variance} and {n}")));
    }
    let z = Normal::standard().inverse_cdf(0.5 + level / 2.0);
    let se = (variance / n as f64).sqrt();
    Ok((se, value - z * se, value + z * se))
}

impl fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.measure {
            Measure::Wcrte(a) => write!(f, "wcrte:{},alpha={a}", self.kind)?,
            Measure::Wcre => write!(f, "wcre:{}", self.kind)?,
        }
        if let Some(m) = self.window {
            write!(f, ",m={m}")?;
        }
        if let Some(p) = self.plotting {
            write!(f, ",plotting={}", if p == Plotting::OverN { "n" } else { "n+1" })?;
        }
        Ok(())
    }
}

/// Window as requested by a user: absent, fixed, or chosen from n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowRequest {
    None,
    Fixed(usize),
    Auto,
}

/// An estimator spec parsed from text whose window may depend on n.
///
/// Grammar: `wcrte:<kind>,alpha=<a>[,m=<m|auto>][,plotting=<n|n+1>]` or
/// `wcre:<kind>[,m=<m|auto>][,plotting=<n|n+1>]`, where kind is one of
/// `plugin`, `v`, `e`, `n`, `l` (or the long names).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorRequest {
    pub kind: EstimatorKind,
    pub measure: Measure,
    pub window: WindowRequest,
    pub plotting: Option<Plotting>,
}

impl EstimatorRequest {
    pub fn resolve(&self, n: usize) -> Result<EstimatorSpec> {
        let window = match self.window {
            WindowRequest::None => None,
            WindowRequest::Fixed(m) => Some(m),
            WindowRequest::Auto => Some(heuristic_window(self.kind, n)),
        };
        let mut spec = EstimatorSpec::new(self.kind, self.measure, window)?;
        spec.plotting = self.plotting;
        spec.validate(n)?;
        Ok(spec)
    }
}

impl FromStr for EstimatorRequest {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (measure_name, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("estimator {s:?}: expected `wcrte:<kind>,...` or `wcre:<kind>,...`")))?;
        let mut tokens = rest.split(',').map(str::trim);
        let kind: EstimatorKind = tokens.next().unwrap_or("").parse()?;
        let mut alpha: Option<f64> = None;
        let mut window = WindowRequest::None;
        let mut plotting = None;
        for token in tokens.filter(|t| !t.is_empty()) {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("estimator {s:?}: unexpected token {token:?}")))?;
            match key.trim().to_ascii_lowercase().as_str() {
                "alpha" | "a" => {
                    alpha = Some(value.trim().parse().map_err(|_| {
                        Error::Parse(format!("estimator {s:?}: bad alpha in {token:?}"))
                    })?)
                }
                "m" | "window" => {
                    window = if value.trim().eq_ignore_ascii_case("auto") {
                        WindowRequest::Auto
                    } else {
                        WindowRequest::Fixed(value.trim().parse().map_err(|_| {
                            Error::Parse(format!("estimator {s:?}: bad window in {token:?}"))
                        })?)
                    }
                }
                "plotting" | "p" => plotting = Some(value.parse()?),
                other => return Err(Error::Parse(format!("estimator {s:?}: unknown key {other:?}"))),
            }
        }
        let measure = match measure_name.trim().to_ascii_lowercase().as_str() {
            "wcrte" => {
                let a = alpha.ok_or_else(|| Error::Parse(format!("estimator {s:?}: wcrte needs alpha=<a>")))?;
                Measure::Wcrte(TsallisOrder::new(a)?)
            }
            "wcre" => {
                if alpha.is_some() {
                    return Err(Error::Parse(format!("estimator {s:?}: wcre takes no alpha")));
                }
                Measure::Wcre
            }
            other => return Err(Error::Parse(format!("unknown measure {other:?} in {s:?}"))),
        };
        if kind.uses_window() && window == WindowRequest::None {
            return Err(Error::Parse(format!("estimator {s:?}: {kind} needs m=<m|auto>")));
        }
        if !kind.uses_window() && window != WindowRequest::None {
            return Err(Error::Parse(format!("estimator {s:?}: {kind} takes no window")));
        }
        Ok(Self { kind, measure, window, plotting })
    }
}
