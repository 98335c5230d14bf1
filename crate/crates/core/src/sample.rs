use std::path::Path;

use crate::error::{Error, Result};
use crate::numeric::sort_floats;

/// A batch of nonnegative observations together with its order statistics.
///
/// Immutable after construction. At least two observations are required.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Domain(format!("need n ≥ 2 observations, got {}", values.len())));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::Domain(format!(
                "observation {} is {v}; values must be finite and nonnegative",
                i + 1
            )));
        }
        let mut sorted = values.clone();
        sort_floats(&mut sorted);
        Ok(Self { values, sorted })
    }

    /// Parses one decimal value per line. Blank lines and lines starting with
    /// `#` are skipped; trailing `#` comments are stripped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let v: f64 = content.parse().map_err(|_| {
                Error::Parse(format!("line {}: cannot parse {content:?} as a number", lineno + 1))
            })?;
            values.push(v);
        }
        Self::new(values)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    /// Observations in their original order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order statistics `X(1) ≤ … ≤ X(n)`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// `X(i)` for a 1-based index, with `X(i) = X(1)` for `i < 1` and
    /// `X(i) = X(n)` for `i > n`.
    #[inline]
    pub fn clamp_order_stat(&self, i: isize) -> f64 {
        let idx = i.clamp(1, self.n() as isize) as usize;
        self.sorted[idx - 1]
    }

    /// The sample multiplied by `theta > 0`.
    pub fn scaled(&self, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::Parameter(format!("scale must be positive, got {theta}")));
        }
        Ok(Self {
            values: self.values.iter().map(|v| v * theta).collect(),
            sorted: self.sorted.iter().map(|v| v * theta).collect(),
        })
    }

    /// Whether all observations lie in `[0, 1]`.
    pub fn in_unit_interval(&self) -> bool {
        self.sorted[self.n() - 1] <= 1.0
    }
}
