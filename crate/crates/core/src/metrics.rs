//! NRMSE / RRSD between a true metric series `y` and its estimate `y'`.
//!
//! Sums are accumulated exactly; only the final ratio goes through `f64`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricKind {
    /// Observable Max Payoff against the true Max Payoff.
    ObservableMax,
    /// Supremum Payoff against the true Max Payoff.
    Supremum,
    /// Observable Expected Payoff against the true Expected Payoff.
    ObservableExpected,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [
        MetricKind::ObservableMax,
        MetricKind::Supremum,
        MetricKind::ObservableExpected,
    ];

    pub fn label(self) -> &'static str {
        match self {
            MetricKind::ObservableMax => "observable-max-vs-max",
            MetricKind::Supremum => "supremum-vs-max",
            MetricKind::ObservableExpected => "observable-expected-vs-expected",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.label() == label)
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Paired per-round values; `truth[t]` and `estimate[t]` belong to round `t + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSeries {
    kind: MetricKind,
    truth: Vec<Rational>,
    estimate: Vec<Rational>,
}

impl MetricSeries {
    pub fn new(kind: MetricKind) -> Self {
        Self {
            kind,
            truth: Vec::new(),
            estimate: Vec::new(),
        }
    }

    pub fn from_values(kind: MetricKind, truth: Vec<Rational>, estimate: Vec<Rational>) -> Result<Self> {
        if truth.len() != estimate.len() {
            return Err(Error::DimensionMismatch {
                expected: truth.len(),
                found: estimate.len(),
            });
        }
        Ok(Self { kind, truth, estimate })
    }

    /// Convenience for integer-valued series.
    pub fn from_integers(kind: MetricKind, truth: &[i64], estimate: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        Self::from_values(kind, conv(truth), conv(estimate))
    }

    pub fn push(&mut self, truth: Rational, estimate: Rational) {
        self.truth.push(truth);
        self.estimate.push(estimate);
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.truth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truth.is_empty()
    }

    pub fn truth(&self) -> &[Rational] {
        &self.truth
    }

    pub fn estimate(&self) -> &[Rational] {
        &self.estimate
    }

    fn count(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.len()))
    }

    fn mean_truth(&self) -> Option<Rational> {
        if self.is_empty() {
            return None;
        }
        let mean = self.truth.iter().fold(Rational::zero(), |acc, y| acc + y) / self.count();
        (!mean.is_zero()).then_some(mean)
    }

    fn residuals(&self) -> impl Iterator<Item = Rational> + '_ {
        self.estimate.iter().zip(&self.truth).map(|(e, y)| e - y)
    }

    pub fn mean_residual(&self) -> Option<Rational> {
        if self.is_empty() {
            return None;
        }
        Some(self.residuals().fold(Rational::zero(), |acc, r| acc + r) / self.count())
    }

    /// `sqrt(sum r^2 / N) / mean(y)`; `None` when the series is empty or `mean(y) = 0`.
    pub fn nrmse(&self) -> Option<f64> {
        let mean = self.mean_truth()?;
        let msq = self.residuals().fold(Rational::zero(), |acc, r| acc + &r * &r) / self.count();
        Some(normalized_sqrt(&msq, &mean))
    }

    /// `sqrt(sum (r - mean r)^2 / N) / mean(y)`; `None` in the same cases as [`Self::nrmse`].
    pub fn rrsd(&self) -> Option<f64> {
        let mean = self.mean_truth()?;
        let bias = self.mean_residual()?;
        let var = self.residuals().fold(Rational::zero(), |acc, r| {
            let c = r - &bias;
            acc + &c * &c
        }) / self.count();
        Some(normalized_sqrt(&var, &mean))
    }

    pub fn summary(&self) -> ErrorSummary {
        ErrorSummary {
            nrmse: self.nrmse(),
            rrsd: self.rrsd(),
        }
    }
}

fn normalized_sqrt(square: &Rational, mean: &Rational) -> f64 {
    let s = square.to_f64().unwrap_or(f64::INFINITY);
    let m = mean.to_f64().unwrap_or(f64::INFINITY);
    libm::sqrt(s) / m.abs()
}

/// NRMSE and RRSD of one series. `None` marks an undefined value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    pub nrmse: Option<f64>,
    pub rrsd: Option<f64>,
}

/// Three decimals with the leading zero dropped (`0.082` as `.082`), or `undef`.
pub struct Cell(pub Option<f64>);

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => f.write_str("undef"),
            Some(v) => {
                let s = alloc::format!("{v:.3}");
                match s.strip_prefix("0.") {
                    Some(rest) => write!(f, ".{rest}"),
                    None => f.write_str(&s),
                }
            }
        }
    }
}

impl fmt::Display for ErrorSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\u{b1}{}", Cell(self.nrmse), Cell(self.rrsd))
    }
}
