//! Reference distributions, inverse-cdf sampling and population values of
//! the weighted cumulative residual measures.
//!
//! Two model families live here:
//!
//! | Model | cdf | WCRTE_α |
//! |---|---|---|
//! | Uniform(θ) | x/θ on (0, θ) | θ²(α+4) / (6(α+1)(α+2)) |
//! | Exponential(λ) | 1 − e^{−λx} | (α+1) / (αλ²) |
//! | Rayleigh(σ) | 1 − e^{−x²/(2σ²)} | σ²/α |
//! | Pareto I(k, δ) | 1 − (k/x)^δ on x > k | δk² / ((δ−2)(δα−2)) |
//! | Weibull(λ, p) | 1 − e^{−(λx)^p} | Γ(2/p)(1 − α^{−2/p}) / (pλ²(α−1)) |
//!
//! and the [0, 1]-supported alternatives A_j, B_j, C_j used as departures
//! from uniformity.
//!
//! The exponential entry of the table above is the conventional reference
//! value used throughout the bias/MSE tables; direct integration of the
//! survival function gives (α+1)/(α²λ²) instead (the Weibull row with
//! p = 1). [`closed_wcrte`] returns the tabulated expression and
//! [`wcrte_by_quadrature`] the integral, so both are available.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity};
use crate::rng::RandomStream;
use crate::sample::Sample;

/// Tsallis order α: finite, positive and not equal to one.
///
/// The α → 1 limit is not a `TsallisOrder`; it is [`Measure::Wcre`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct TsallisOrder(f64);

impl TsallisOrder {
    pub const ONE_TOLERANCE: f64 = 1e-12;

    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Parameter(format!("Tsallis order must be finite and positive, got {alpha}")));
        }
        if (alpha - 1.0).abs() < Self::ONE_TOLERANCE {
            return Err(Error::Parameter(
                "Tsallis order α = 1 is the WCRE limit; use the WCRE measure instead".into(),
            ));
        }
        Ok(Self(alpha))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for TsallisOrder {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<TsallisOrder> for f64 {
    fn from(o: TsallisOrder) -> f64 {
        o.0
    }
}

impl fmt::Display for TsallisOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which measure is targeted: WCRTE of a given order or its α → 1 limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub enum Measure {
    Wcrte(TsallisOrder),
    Wcre,
}

impl Measure {
    /// Maps a user-facing α to a measure, reading α = 1 as the WCRE limit.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if (alpha - 1.0).abs() < TsallisOrder::ONE_TOLERANCE {
            Ok(Measure::Wcre)
        } else {
            Ok(Measure::Wcrte(TsallisOrder::new(alpha)?))
        }
    }

    /// α as a plain number, with 1 standing for the WCRE limit.
    pub fn alpha_label(self) -> f64 {
        match self {
            Measure::Wcrte(o) => o.value(),
            Measure::Wcre => 1.0,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Wcrte(o) => write!(f, "{o}"),
            Measure::Wcre => f.write_str("wcre"),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("wcre") {
            return Ok(Measure::Wcre);
        }
        let alpha: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("cannot parse {t:?} as a Tsallis order (number or \"wcre\")")))?;
        Measure::from_alpha(alpha)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MeasureRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<MeasureRepr> for Measure {
    type Error = Error;
    fn try_from(r: MeasureRepr) -> Result<Self> {
        match r {
            MeasureRepr::Number(a) => Measure::from_alpha(a),
            MeasureRepr::Text(s) => s.parse(),
        }
    }
}

impl From<Measure> for MeasureRepr {
    fn from(m: Measure) -> Self {
        match m {
            Measure::Wcrte(o) => MeasureRepr::Number(o.value()),
            Measure::Wcre => MeasureRepr::Text("wcre".into()),
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be finite and positive, got {v}")))
    }
}

/// Parametric lifetime models with closed-form measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ParametricModel {
    Uniform { theta: f64 },
    Exponential { lambda: f64 },
    Rayleigh { sigma: f64 },
    ParetoI { k: f64, delta: f64 },
    Weibull { lambda: f64, p: f64 },
}

impl ParametricModel {
    pub fn uniform(theta: f64) -> Result<Self> {
        check_positive("theta", theta)?;
        Ok(Self::Uniform { theta })
    }

    pub fn exponential(lambda: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        Ok(Self::Exponential { lambda })
    }

    pub fn rayleigh(sigma: f64) -> Result<Self> {
        check_positive("sigma", sigma)?;
        Ok(Self::Rayleigh { sigma })
    }

    pub fn pareto1(k: f64, delta: f64) -> Result<Self> {
        check_positive("k", k)?;
        check_positive("delta", delta)?;
        Ok(Self::ParetoI { k, delta })
    }

    pub fn weibull(lambda: f64, p: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        check_positive("p", p)?;
        Ok(Self::Weibull { lambda, p })
    }

    fn validate(self) -> Result<Self> {
        match self {
            Self::Uniform { theta } => Self::uniform(theta),
            Self::Exponential { lambda } => Self::exponential(lambda),
            Self::Rayleigh { sigma } => Self::rayleigh(sigma),
            Self::ParetoI { k, delta } => Self::pareto1(k, delta),
            Self::Weibull { lambda, p } => Self::weibull(lambda, p),
        }
    }

    /// Lower end of the support and, when bounded, the upper end.
    pub fn support(&self) -> (f64, Option<f64>) {
        match *self {
            Self::Uniform { theta } => (0.0, Some(theta)),
            Self::ParetoI { k, .. } => (k, None),
            _ => (0.0, None),
        }
    }

    /// `log S(x)` for `x` inside the support (and `0` below it).
    pub fn ln_survival(&self, x: f64) -> f64 {
        if x <= self.support().0 {
            return 0.0;
        }
        match *self {
            Self::Uniform { theta } => {
                if x >= theta {
                    f64::NEG_INFINITY
                } else {
                    (-x / theta).ln_1p()
                }
            }
            Self::Exponential { lambda } => -lambda * x,
            Self::Rayleigh { sigma } => -x * x / (2.0 * sigma * sigma),
            Self::ParetoI { k, delta } => delta * (k / x).ln(),
            Self::Weibull { lambda, p } => -(lambda * x).powf(p),
        }
    }

    pub fn survival(&self, x: f64) -> f64 {
        self.ln_survival(x).exp()
    }

    /// Log density on the interior of the support.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform { theta } => {
                if x > 0.0 && x < theta {
                    -theta.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Self::Exponential { lambda } => {
                if x >= 0.0 {
                    lambda.ln() - lambda * x
                } else {
                    f64::NEG_INFINITY
                }
            }
            Self::Rayleigh { sigma } => {
                if x > 0.0 {
                    x.ln() - 2.0 * sigma.ln() - x * x / (2.0 * sigma * sigma)
                } else {
                    f64::NEG_INFINITY
                }
            }
            Self::ParetoI { k, delta } => {
                if x > k {
                    delta.ln() + delta * k.ln() - (delta + 1.0) * x.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Self::Weibull { lambda, p } => {
                if x > 0.0 {
                    let z = lambda * x;
                    p.ln() + lambda.ln() + (p - 1.0) * z.ln() - z.powf(p)
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.support().0 {
            return 0.0;
        }
        if let Self::Uniform { theta } = *self {
            return (x / theta).min(1.0);
        }
        -self.ln_survival(x).exp_m1()
    }

    fn quantile_unchecked(&self, u: f64) -> f64 {
        // −log(1 − u), accurate for small u
        let cum_hazard = -(-u).ln_1p();
        match *self {
            Self::Uniform { theta } => u * theta,
            Self::Exponential { lambda } => cum_hazard / lambda,
            Self::Rayleigh { sigma } => sigma * (2.0 * cum_hazard).sqrt(),
            Self::ParetoI { k, delta } => k * (cum_hazard / delta).exp(),
            Self::Weibull { lambda, p } => cum_hazard.powf(1.0 / p) / lambda,
        }
    }

    /// Whether `E X²` is finite, the existence condition for both measures.
    fn second_moment_finite(&self) -> bool {
        match *self {
            Self::ParetoI { delta, .. } => delta > 2.0,
            _ => true,
        }
    }
}

impl fmt::Display for ParametricModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Uniform { theta } => write!(f, "uniform:theta={theta}"),
            Self::Exponential { lambda } => write!(f, "exp:lambda={lambda}"),
            Self::Rayleigh { sigma } => write!(f, "rayleigh:sigma={sigma}"),
            Self::ParetoI { k, delta } => write!(f, "pareto1:k={k},delta={delta}"),
            Self::Weibull { lambda, p } => write!(f, "weibull:lambda={lambda},p={p}"),
        }
    }
}

impl FromStr for ParametricModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<Model>()? {
            Model::Parametric(m) => Ok(m),
            Model::Alternative(_) => Err(Error::Parse(format!(
                "{s:?} is an alternative on [0, 1]; a parametric model is required here"
            ))),
        }
    }
}

impl TryFrom<String> for ParametricModel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ParametricModel> for String {
    fn from(m: ParametricModel) -> String {
        m.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlternativeFamily {
    /// Mass pushed towards 0 (shift in mean).
    A,
    /// Mass pushed towards 1/2 (smaller variance).
    B,
    /// Mass pushed towards both ends (larger variance).
    C,
}

/// Departures from U(0, 1) of the A_j / B_j / C_j families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AlternativeModel {
    family: AlternativeFamily,
    j: f64,
}

impl AlternativeModel {
    pub fn new(family: AlternativeFamily, j: f64) -> Result<Self> {
        check_positive("j", j)?;
        Ok(Self { family, j })
    }

    pub fn family(&self) -> AlternativeFamily {
        self.family
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    /// The seven alternatives of the standard power comparison.
    pub fn standard_set() -> Vec<Self> {
        use AlternativeFamily::*;
        [(A, 1.5), (A, 2.0), (B, 1.5), (B, 2.0), (B, 3.0), (C, 1.5), (C, 2.0)]
            .into_iter()
            .map(|(f, j)| Self { family: f, j })
            .collect()
    }

    /// False when `j` is outside the tabulated set for its family; such
    /// models are valid but extrapolate beyond the usual comparison.
    pub fn is_standard(&self) -> bool {
        Self::standard_set().contains(self)
    }

    pub fn cdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        if z >= 1.0 {
            return 1.0;
        }
        let j = self.j;
        let c = 2f64.powf(j - 1.0);
        match self.family {
            AlternativeFamily::A => -((1.0 - z).powf(j) - 1.0),
            AlternativeFamily::B => {
                if z <= 0.5 {
                    c * z.powf(j)
                } else {
                    1.0 - c * (1.0 - z).powf(j)
                }
            }
            AlternativeFamily::C => {
                if z <= 0.5 {
                    0.5 - c * (0.5 - z).powf(j)
                } else {
                    0.5 + c * (z - 0.5).powf(j)
                }
            }
        }
    }

    fn quantile_unchecked(&self, u: f64) -> f64 {
        let j = self.j;
        let c = 2f64.powf(j - 1.0);
        match self.family {
            AlternativeFamily::A => 1.0 - (1.0 - u).powf(1.0 / j),
            // u = 1/2 resolves to the lower piece; both pieces give z = 1/2.
            AlternativeFamily::B => {
                if u <= 0.5 {
                    (u / c).powf(1.0 / j)
                } else {
                    1.0 - ((1.0 - u) / c).powf(1.0 / j)
                }
            }
            AlternativeFamily::C => {
                if u <= 0.5 {
                    0.5 - ((0.5 - u) / c).powf(1.0 / j)
                } else {
                    0.5 + ((u - 0.5) / c).powf(1.0 / j)
                }
            }
        }
    }
}

impl fmt::Display for AlternativeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alt:{:?},j={}", self.family, self.j)
    }
}

impl FromStr for AlternativeModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<Model>()? {
            Model::Alternative(m) => Ok(m),
            Model::Parametric(_) => Err(Error::Parse(format!("{s:?} is not an alternative model"))),
        }
    }
}

impl TryFrom<String> for AlternativeModel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AlternativeModel> for String {
    fn from(m: AlternativeModel) -> String {
        m.to_string()
    }
}

/// Any model that can be sampled: a parametric model or an alternative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Model {
    Parametric(ParametricModel),
    Alternative(AlternativeModel),
}

impl Model {
    pub fn cdf(&self, x: f64) -> f64 {
        cdf(self, x)
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        quantile(self, u)
    }

    /// Draws `n` values into `out` (cleared first).
    pub fn sample_into(&self, n: usize, stream: &mut RandomStream, out: &mut Vec<f64>) {
        out.clear();
        out.extend((0..n).map(|_| {
            let u = stream.next_open01();
            match self {
                Model::Parametric(m) => m.quantile_unchecked(u),
                Model::Alternative(m) => m.quantile_unchecked(u),
            }
        }));
    }
}

impl From<ParametricModel> for Model {
    fn from(m: ParametricModel) -> Self {
        Model::Parametric(m)
    }
}

impl From<AlternativeModel> for Model {
    fn from(m: AlternativeModel) -> Self {
        Model::Alternative(m)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Parametric(m) => m.fmt(f),
            Model::Alternative(m) => m.fmt(f),
        }
    }
}

impl TryFrom<String> for Model {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Model> for String {
    fn from(m: Model) -> String {
        m.to_string()
    }
}

/// Parses `name:key=value,...`, e.g. `exp:lambda=2`, `pareto1:k=1,delta=3`,
/// `alt:B,j=1.5`. Names and keys are case-insensitive.
impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("model {s:?}: expected `name:key=value,...`")))?;
        let name = name.trim().to_ascii_lowercase();
        let mut params: Vec<(String, f64)> = Vec::new();
        let mut family: Option<AlternativeFamily> = None;
        for token in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let Some((key, value)) = token.split_once('=') else {
                if name == "alt" && family.is_none() {
                    family = Some(parse_family(token)?);
                    continue;
                }
                return Err(Error::Parse(format!("model {s:?}: unexpected token {token:?}")));
            };
            let key = key.trim().to_ascii_lowercase();
            if key == "family" {
                family = Some(parse_family(value)?);
                continue;
            }
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("model {s:?}: bad number in {token:?}")))?;
            params.push((key, value));
        }

        let mut take = |key: &str| -> Result<f64> {
            let pos = params
                .iter()
                .position(|(k, _)| k == key)
                .ok_or_else(|| Error::Parse(format!("model {s:?}: missing parameter `{key}`")))?;
            Ok(params.remove(pos).1)
        };
        let model = match name.as_str() {
            "uniform" | "unif" => Model::Parametric(ParametricModel::uniform(take("theta")?)?),
            "exp" | "exponential" => Model::Parametric(ParametricModel::exponential(take("lambda")?)?),
            "rayleigh" => Model::Parametric(ParametricModel::rayleigh(take("sigma")?)?),
            "pareto1" | "pareto" => {
                let k = take("k")?;
                let delta = take("delta")?;
                Model::Parametric(ParametricModel::pareto1(k, delta)?)
            }
            "weibull" => {
                let lambda = take("lambda")?;
                let p = take("p")?;
                Model::Parametric(ParametricModel::weibull(lambda, p)?)
            }
            "alt" => {
                let family =
                    family.ok_or_else(|| Error::Parse(format!("model {s:?}: missing family A, B or C")))?;
                Model::Alternative(AlternativeModel::new(family, take("j")?)?)
            }
            other => return Err(Error::Parse(format!("unknown model {other:?} in {s:?}"))),
        };
        if let Some((key, _)) = params.first() {
            return Err(Error::Parse(format!("model {s:?}: unknown parameter `{key}`")));
        }
        Ok(model)
    }
}

fn parse_family(token: &str) -> Result<AlternativeFamily> {
    match token.trim().to_ascii_uppercase().as_str() {
        "A" => Ok(AlternativeFamily::A),
        "B" => Ok(AlternativeFamily::B),
        "C" => Ok(AlternativeFamily::C),
        other => Err(Error::Parse(format!("unknown alternative family {other:?}"))),
    }
}

/// Distribution function of `model` at `x`.
pub fn cdf(model: &Model, x: f64) -> f64 {
    match model {
        Model::Parametric(m) => m.cdf(x),
        Model::Alternative(m) => m.cdf(x),
    }
}

/// Inverse distribution function for `u ∈ (0, 1)`.
pub fn quantile(model: &Model, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {u}")));
    }
    Ok(match model {
        Model::Parametric(m) => m.validate()?.quantile_unchecked(u),
        Model::Alternative(m) => m.quantile_unchecked(u),
    })
}

/// `n` i.i.d. draws by inversion of uniform variates from `stream`.
pub fn sample(model: &Model, n: usize, stream: &mut RandomStream) -> Result<Sample> {
    if let Model::Parametric(m) = model {
        m.validate()?;
    }
    let mut values = Vec::with_capacity(n);
    model.sample_into(n, stream, &mut values);
    Sample::new(values)
}

const WCRE_ABS_TOL: f64 = 1e-10;
const BOUND_ABS_TOL: f64 = 1e-8;

fn integrate_over_support<F: Fn(f64) -> f64>(model: &ParametricModel, f: F, tol: f64) -> Result<f64> {
    let r = match model.support() {
        (lo, Some(hi)) => integrate(f, lo, hi, tol)?,
        (lo, None) => integrate_to_infinity(f, lo, tol)?,
    };
    Ok(r.value)
}

/// WCRTE of `model` from the closed-form expressions in the module table.
///
/// Pareto I is accepted only when `δ > 2` and `δα > 2`; outside that region
/// the measure is infinite.
pub fn closed_wcrte(model: &ParametricModel, order: TsallisOrder) -> Result<f64> {
    let model = model.validate()?;
    let a = order.value();
    Ok(match model {
        ParametricModel::Uniform { theta } => theta * theta * (a + 4.0) / (6.0 * (a + 1.0) * (a + 2.0)),
        ParametricModel::Exponential { lambda } => (a + 1.0) / (a * lambda * lambda),
        ParametricModel::Rayleigh { sigma } => sigma * sigma / a,
        ParametricModel::ParetoI { k, delta } => {
            if delta <= 2.0 || delta * a <= 2.0 {
                return Err(Error::Divergent(format!(
                    "Pareto I WCRTE requires δ > 2 and δα > 2 (δ = {delta}, α = {a})"
                )));
            }
            delta * k * k / ((delta - 2.0) * (delta * a - 2.0))
        }
        ParametricModel::Weibull { lambda, p } => {
            gamma(2.0 / p) * (1.0 - a.powf(-2.0 / p)) / (p * lambda * lambda * (a - 1.0))
        }
    })
}

/// WCRE `−∫ x S(x) log S(x) dx` by adaptive quadrature (absolute tolerance 1e-10).
pub fn closed_wcre(model: &ParametricModel) -> Result<f64> {
    let model = model.validate()?;
    if !model.second_moment_finite() {
        return Err(Error::Divergent(format!("WCRE of {model} is infinite (needs δ > 2)")));
    }
    integrate_over_support(
        &model,
        |x| {
            let ls = model.ln_survival(x);
            if ls == 0.0 || ls == f64::NEG_INFINITY {
                0.0
            } else {
                -x * ls.exp() * ls
            }
        },
        WCRE_ABS_TOL,
    )
}

/// Population value of either measure, dispatching to [`closed_wcrte`] or
/// [`closed_wcre`].
pub fn closed_value(model: &ParametricModel, measure: Measure) -> Result<f64> {
    match measure {
        Measure::Wcrte(order) => closed_wcrte(model, order),
        Measure::Wcre => closed_wcre(model),
    }
}

/// WCRTE `1/(α−1) ∫ x (S − S^α) dx` evaluated by quadrature against the
/// survival function, independent of the closed-form table.
pub fn wcrte_by_quadrature(model: &ParametricModel, order: TsallisOrder) -> Result<f64> {
    let model = model.validate()?;
    let a = order.value();
    if let ParametricModel::ParetoI { delta, .. } = model {
        if delta <= 2.0 || delta * a <= 2.0 {
            return Err(Error::Divergent(format!(
                "Pareto I WCRTE requires δ > 2 and δα > 2 (δ = {delta}, α = {a})"
            )));
        }
    }
    let integral = integrate_over_support(
        &model,
        |x| {
            let ls = model.ln_survival(x);
            if ls == 0.0 || ls == f64::NEG_INFINITY {
                0.0
            } else {
                // S − S^α = S(1 − S^{α−1})
                x * ls.exp() * -((a - 1.0) * ls).exp_m1()
            }
        },
        WCRE_ABS_TOL,
    )?;
    Ok(integral / (a - 1.0))
}

/// `η(α) = ∫₀¹ log((u − u^α)/(α−1)) du`.
///
/// The integrand has logarithmic singularities at both ends; the interval is
/// split at 1/2 and the log argument floored at 1e-300.
pub fn eta(order: TsallisOrder) -> Result<f64> {
    let a = order.value();
    let f = |u: f64| {
        let lu = u.ln();
        // (u − u^α)/(α−1) = u · (1 − u^{α−1})/(α−1)
        let ratio = -((a - 1.0) * lu).exp_m1() / (a - 1.0);
        lu + ratio.max(1e-300).ln()
    };
    let left = integrate(f, 0.0, 0.5, BOUND_ABS_TOL / 2.0)
        .map_err(|e| Error::Numerical(format!("η({a}) on (0, 1/2]: {e}")))?;
    let right = integrate(f, 0.5, 1.0, BOUND_ABS_TOL / 2.0)
        .map_err(|e| Error::Numerical(format!("η({a}) on [1/2, 1): {e}")))?;
    Ok(left.value + right.value)
}

/// The entropy lower bound and the pieces it is assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    /// `exp(H + E log X + η(α))`.
    pub value: f64,
    /// Differential entropy `H(X)`.
    pub entropy: f64,
    /// `E log X`.
    pub mean_log: f64,
    pub eta: f64,
}

/// `WCRTE_α(X) ≥ exp(H(X) + E log X + η(α))`, with every integral computed
/// by quadrature (absolute tolerance 1e-8).
pub fn wcrte_lower_bound(model: &ParametricModel, order: TsallisOrder) -> Result<LowerBound> {
    let model = model.validate()?;
    let entropy = integrate_over_support(
        &model,
        |x| {
            let lf = model.ln_pdf(x);
            if lf == f64::NEG_INFINITY {
                0.0
            } else {
                -lf.exp() * lf
            }
        },
        BOUND_ABS_TOL,
    )
    .map_err(|e| Error::Numerical(format!("entropy of {model}: {e}")))?;
    let mean_log = integrate_over_support(
        &model,
        |x| {
            let lf = model.ln_pdf(x);
            if lf == f64::NEG_INFINITY || x <= 0.0 {
                0.0
            } else {
                lf.exp() * x.ln()
            }
        },
        BOUND_ABS_TOL,
    )
    .map_err(|e| Error::Numerical(format!("E log X of {model}: {e}")))?;
    let eta = eta(order)?;
    Ok(LowerBound { value: (entropy + mean_log + eta).exp(), entropy, mean_log, eta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> TsallisOrder {
        TsallisOrder::new(a).unwrap()
    }

    fn all_models() -> Vec<Model> {
        let mut v: Vec<Model> = vec![
            ParametricModel::uniform(1.0).unwrap().into(),
            ParametricModel::uniform(2.5).unwrap().into(),
            ParametricModel::exponential(1.0).unwrap().into(),
            ParametricModel::exponential(2.0).unwrap().into(),
            ParametricModel::rayleigh(1.0).unwrap().into(),
            ParametricModel::pareto1(1.0, 3.0).unwrap().into(),
            ParametricModel::weibull(1.0, 2.0).unwrap().into(),
            ParametricModel::weibull(0.7, 0.6).unwrap().into(),
        ];
        v.extend(AlternativeModel::standard_set().into_iter().map(Model::from));
        v
    }

    #[test]
    fn tsallis_order_rejects_one_and_nonpositive() {
        assert!(TsallisOrder::new(1.0).is_err());
        assert!(TsallisOrder::new(1.0 + 1e-13).is_err());
        assert!(TsallisOrder::new(0.0).is_err());
        assert!(TsallisOrder::new(-2.0).is_err());
        assert!(TsallisOrder::new(f64::INFINITY).is_err());
        assert!(TsallisOrder::new(1.0 + 1e-6).is_ok());
        assert_eq!(Measure::from_alpha(1.0).unwrap(), Measure::Wcre);
        assert_eq!("WCRE".parse::<Measure>().unwrap(), Measure::Wcre);
        assert_eq!("2".parse::<Measure>().unwrap(), Measure::Wcrte(order(2.0)));
    }

    #[test]
    fn cdf_examples() {
        let u = Model::from(ParametricModel::uniform(1.0).unwrap());
        assert!((u.cdf(0.3) - 0.3).abs() < 1e-15);
        let b2: Model = "alt:B,j=2".parse().unwrap();
        assert!((b2.cdf(0.5) - 0.5).abs() < 1e-15);
        let a2: Model = "alt:A,j=2".parse().unwrap();
        assert!((a2.cdf(0.5) - 0.75).abs() < 1e-15);
        let p: Model = "pareto1:k=2,delta=3".parse().unwrap();
        assert_eq!(p.cdf(1.5), 0.0);
    }

    #[test]
    fn quantile_examples() {
        let e = Model::from(ParametricModel::exponential(1.0).unwrap());
        let u = 1.0 - (-1.0f64).exp();
        assert!((e.quantile(u).unwrap() - 1.0).abs() < 1e-14);
        let c: Model = "alt:C,j=1.5".parse().unwrap();
        assert!((c.quantile(0.5).unwrap() - 0.5).abs() < 1e-15);
        let b2: Model = "alt:B,j=2".parse().unwrap();
        assert!((b2.quantile(0.125).unwrap() - 0.25).abs() < 1e-14);
        assert!(e.quantile(0.0).is_err());
        assert!(e.quantile(1.0).is_err());
    }

    #[test]
    fn quantile_matches_bisection_oracle() {
        fn bisect(m: &Model, u: f64, mut lo: f64, mut hi: f64) -> f64 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if m.cdf(mid) < u {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
        for m in AlternativeModel::standard_set().into_iter().map(Model::from) {
            for &u in &[0.01, 0.125, 0.3, 0.45, 0.55, 0.77, 0.99] {
                let q = m.quantile(u).unwrap();
                let b = bisect(&m, u, 0.0, 1.0);
                assert!((q - b).abs() < 1e-10, "{m} u={u}: {q} vs {b}");
            }
        }
    }

    #[test]
    fn cdf_quantile_round_trip() {
        let mut levels = vec![0.001];
        levels.extend((1..100).map(|k| k as f64 / 100.0));
        levels.push(0.999);
        for m in all_models() {
            for &u in &levels {
                let x = m.quantile(u).unwrap();
                assert!((m.cdf(x) - u).abs() < 1e-10, "{m} u={u}");
            }
        }
    }

    #[test]
    fn alternative_cdfs_are_proper() {
        for m in AlternativeModel::standard_set() {
            assert_eq!(m.cdf(0.0), 0.0);
            assert_eq!(m.cdf(1.0), 1.0);
            let mut prev = 0.0;
            for k in 0..=1000 {
                let v = m.cdf(k as f64 / 1000.0);
                assert!(v >= prev - 1e-15, "{m}");
                prev = v;
            }
            // continuity at the junction
            assert!((m.cdf(0.5 - 1e-12) - m.cdf(0.5 + 1e-12)).abs() < 1e-9);
        }
        assert!(!AlternativeModel::new(AlternativeFamily::C, 3.0).unwrap().is_standard());
    }

    #[test]
    fn model_strings_round_trip() {
        for m in all_models() {
            let s = m.to_string();
            assert_eq!(s.parse::<Model>().unwrap(), m, "{s}");
        }
        assert_eq!(
            "WEIBULL:Lambda=1,P=2".parse::<Model>().unwrap(),
            Model::from(ParametricModel::weibull(1.0, 2.0).unwrap())
        );
        assert!("exp:lambda=-1".parse::<Model>().is_err());
        assert!("exp:rate=1".parse::<Model>().is_err());
        assert!("exp:lambda=1,zeta=2".parse::<Model>().is_err());
        assert!("gamma:k=1".parse::<Model>().is_err());
        assert!("alt:D,j=2".parse::<Model>().is_err());
        assert!("alt:family=b,j=3".parse::<Model>().is_ok());
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = Model::from(ParametricModel::uniform(1.0).unwrap());
        let s = sample(&m, 3, &mut RandomStream::from_seed(5)).unwrap();
        let mut st = RandomStream::from_seed(5);
        let expect: Vec<f64> = (0..3).map(|_| st.next_open01()).collect();
        assert_eq!(s.values(), expect.as_slice());
    }

    #[test]
    fn glivenko_cantelli_smoke() {
        let m = Model::from(ParametricModel::exponential(1.0).unwrap());
        let s = sample(&m, 100_000, &mut RandomStream::from_seed(11)).unwrap();
        let n = s.n() as f64;
        let d = s
            .sorted()
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = m.cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max);
        assert!(d < 0.01, "sup distance {d}");
    }

    #[test]
    fn closed_form_examples() {
        let u = ParametricModel::uniform(1.0).unwrap();
        assert!((closed_wcrte(&u, order(2.0)).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        let e = ParametricModel::exponential(1.0).unwrap();
        assert!((closed_wcrte(&e, order(2.0)).unwrap() - 1.5).abs() < 1e-15);
        let w = ParametricModel::weibull(1.0, 2.0).unwrap();
        let r = ParametricModel::rayleigh(1.0 / 2f64.sqrt()).unwrap();
        let wv = closed_wcrte(&w, order(2.0)).unwrap();
        assert!((wv - 0.25).abs() < 1e-12);
        assert!((wv - closed_wcrte(&r, order(2.0)).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn weibull_rayleigh_consistency() {
        for &lambda in &[0.5, 1.0, 3.0] {
            let w = ParametricModel::weibull(lambda, 2.0).unwrap();
            let r = ParametricModel::rayleigh(1.0 / (lambda * 2f64.sqrt())).unwrap();
            for &a in &[1.5, 2.0, 5.0, 10.0] {
                let x = closed_wcrte(&w, order(a)).unwrap();
                let y = closed_wcrte(&r, order(a)).unwrap();
                assert!((x - y).abs() < 1e-12 * y.max(1.0), "λ={lambda} α={a}");
            }
        }
    }

    #[test]
    fn quadrature_agrees_with_closed_forms() {
        let cases = [
            ParametricModel::uniform(1.0).unwrap(),
            ParametricModel::uniform(3.0).unwrap(),
            ParametricModel::rayleigh(1.3).unwrap(),
            ParametricModel::pareto1(1.0, 3.0).unwrap(),
            ParametricModel::pareto1(2.0, 5.0).unwrap(),
            ParametricModel::weibull(1.0, 2.0).unwrap(),
            ParametricModel::weibull(0.5, 0.8).unwrap(),
        ];
        for m in cases {
            for &a in &[0.5, 1.5, 2.0, 5.0, 10.0] {
                let o = order(a);
                let (Ok(c), Ok(q)) = (closed_wcrte(&m, o), wcrte_by_quadrature(&m, o)) else {
                    continue;
                };
                assert!((c - q).abs() < 1e-8 * c.max(1.0), "{m} α={a}: {c} vs {q}");
            }
        }
    }

    #[test]
    fn exponential_quadrature_is_weibull_with_unit_shape() {
        // Direct integration gives (α+1)/(α²λ²), the p = 1 Weibull value.
        for &lambda in &[1.0, 2.0] {
            let e = ParametricModel::exponential(lambda).unwrap();
            let w = ParametricModel::weibull(lambda, 1.0).unwrap();
            for &a in &[1.5, 2.0, 5.0] {
                let q = wcrte_by_quadrature(&e, order(a)).unwrap();
                let expect = (a + 1.0) / (a * a * lambda * lambda);
                assert!((q - expect).abs() < 1e-9);
                assert!((closed_wcrte(&w, order(a)).unwrap() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wcre_values() {
        let u = ParametricModel::uniform(1.0).unwrap();
        assert!((closed_wcre(&u).unwrap() - 5.0 / 36.0).abs() < 1e-10);
        let e = ParametricModel::exponential(1.0).unwrap();
        assert!((closed_wcre(&e).unwrap() - 2.0).abs() < 1e-9);
        let r = ParametricModel::rayleigh(1.0).unwrap();
        assert!((closed_wcre(&r).unwrap() - 1.0).abs() < 1e-9);
        let p = ParametricModel::pareto1(1.0, 2.0).unwrap();
        assert!(matches!(closed_wcre(&p), Err(Error::Divergent(_))));
    }

    #[test]
    fn alpha_to_one_continuity() {
        for m in [
            ParametricModel::exponential(1.0).unwrap(),
            ParametricModel::uniform(1.0).unwrap(),
            ParametricModel::rayleigh(1.0).unwrap(),
        ] {
            let limit = closed_wcre(&m).unwrap();
            for a in [1.0 - 1e-4, 1.0 + 1e-4] {
                let v = closed_wcrte(&m, order(a)).unwrap();
                assert!((v - limit).abs() < 1e-3 * limit, "{m}: {v} vs {limit}");
            }
        }
    }

    #[test]
    fn pareto_gate() {
        let p = ParametricModel::pareto1(1.0, 2.0).unwrap();
        assert!(matches!(closed_wcrte(&p, order(2.0)), Err(Error::Divergent(_))));
        let p = ParametricModel::pareto1(1.0, 1.5).unwrap();
        assert!(matches!(closed_wcrte(&p, order(3.0)), Err(Error::Divergent(_))));
        let p = ParametricModel::pareto1(1.0, 3.0).unwrap();
        // δα = 1.5 ≤ 2
        assert!(matches!(closed_wcrte(&p, order(0.5)), Err(Error::Divergent(_))));
        assert!((closed_wcrte(&p, order(2.0)).unwrap() - 3.0 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn eta_of_two_is_minus_two() {
        assert!((eta(order(2.0)).unwrap() + 2.0).abs() < 1e-8);
    }

    #[test]
    fn eta_matches_series_form() {
        // η(α) = −1 + ∫ log(1 − u^{α−1}) du − log(α−1), and for α = 3
        // ∫ log(1 − u²) du = 2 log 2 − 2.
        let expect = -1.0 + (2.0 * 2f64.ln() - 2.0) - 2f64.ln();
        assert!((eta(order(3.0)).unwrap() - expect).abs() < 1e-8);
    }

    #[test]
    fn lower_bound_below_measure() {
        let models = [
            ParametricModel::uniform(1.0).unwrap(),
            ParametricModel::exponential(1.0).unwrap(),
            ParametricModel::exponential(2.0).unwrap(),
            ParametricModel::rayleigh(1.0).unwrap(),
            ParametricModel::pareto1(1.0, 3.0).unwrap(),
            ParametricModel::weibull(1.0, 2.0).unwrap(),
            ParametricModel::weibull(1.0, 0.7).unwrap(),
        ];
        for m in models {
            for &a in &[1.5, 2.0, 5.0, 10.0] {
                let b = wcrte_lower_bound(&m, order(a)).unwrap();
                let v = wcrte_by_quadrature(&m, order(a)).unwrap();
                assert!(b.value <= v * (1.0 + 1e-6), "{m} α={a}: {} > {v}", b.value);
                let c = closed_wcrte(&m, order(a)).unwrap();
                assert!(b.value <= c * (1.0 + 1e-6));
            }
        }
    }

    #[test]
    fn lower_bound_components_exponential() {
        // H = 1 − log λ, E log X = −γ − log λ
        let b = wcrte_lower_bound(&ParametricModel::exponential(1.0).unwrap(), order(2.0)).unwrap();
        assert!((b.entropy - 1.0).abs() < 1e-7);
        assert!((b.mean_log + 0.577_215_664_901_532_9).abs() < 1e-7);
        assert!((b.value - (1.0 - 0.577_215_664_901_532_9 - 2.0f64).exp()).abs() < 1e-7);
    }
}
