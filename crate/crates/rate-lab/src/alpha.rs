//! Shape parameters held as exact rationals.
//!
//! The rate display branches on whether α_⋆ + N equals, exceeds, or falls
//! below the thresholds 1 and 1/2. Floating-point summation cannot decide
//! equality reliably, so the shapes are parsed from their decimal text into
//! rationals and every regime comparison is performed exactly; the float
//! values handed to the numerical layers are derived from the rationals.

use laguerre_core::ModelParams;
use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Exact rational scalar used for regime arithmetic.
pub type Exact = Ratio<i128>;

/// A vector of shape parameters carrying three synchronized views: the
/// decimal text it was parsed from (echoed into reports), the exact
/// rational values (regime decisions), and the float model parameters
/// (samplers, kernels, solvers).
#[derive(Clone, Debug)]
pub struct ExactAlpha {
    text: Vec<String>,
    values: Vec<Exact>,
    params: ModelParams,
}

impl ExactAlpha {
    /// Parse a comma-separated list of decimals, e.g. `"-0.5"` or `"0,1.3"`.
    pub fn parse_list(list: &str) -> Result<Self> {
        let parts: Vec<&str> = list.split(',').map(str::trim).collect();
        Self::from_decimals(&parts)
    }

    /// Build from individual decimal strings.
    pub fn from_decimals<S: AsRef<str>>(parts: &[S]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Config("at least one shape parameter".into()));
        }
        let mut text = Vec::with_capacity(parts.len());
        let mut values = Vec::with_capacity(parts.len());
        for part in parts {
            let part = part.as_ref().trim();
            values.push(parse_decimal(part)?);
            text.push(part.to_string());
        }
        let floats: Vec<f64> = values.iter().map(ratio_to_f64).collect();
        let params = ModelParams::new(floats)?;
        Ok(Self {
            text,
            values,
            params,
        })
    }

    /// Number of coordinates N.
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Float model parameters for the numerical layers.
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Exact rational values.
    pub fn values(&self) -> &[Exact] {
        self.values.as_slice()
    }

    /// The decimal strings as supplied (trimmed), echoed into reports.
    pub fn text(&self) -> &[String] {
        self.text.as_slice()
    }

    /// α_⋆ + N = Σ(α_i + 1), exactly.
    pub fn sum_plus_dim(&self) -> Exact {
        self.values.iter().sum::<Exact>() + Exact::from_integer(self.values.len() as i128)
    }

    /// Index and value of the first shape below −1/2, if any; the rate
    /// classification is defined only when there is none.
    pub fn below_half(&self) -> Option<(usize, &str)> {
        let floor = -Exact::new(1, 2);
        self.values
            .iter()
            .position(|v| *v < floor)
            .map(|i| (i, self.text[i].as_str()))
    }
}

impl PartialEq for ExactAlpha {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl std::fmt::Display for ExactAlpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text.join(","))
    }
}

fn ratio_to_f64(r: &Exact) -> f64 {
    r.to_f64().expect("i128 ratio fits in f64 range")
}

/// Parse a plain decimal (optional sign, digits, optional fractional part)
/// into an exact rational. Scientific notation is rejected: the point of the
/// exact representation is that the text states the value literally.
fn parse_decimal(text: &str) -> Result<Exact> {
    let bad = |reason: &'static str| Error::BadDecimal {
        text: text.to_string(),
        reason,
    };
    if text.is_empty() {
        return Err(bad("empty"));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad("expected only digits around an optional decimal point"));
    }
    if int_part.len() + frac_part.len() > 30 {
        return Err(bad("too many digits for exact arithmetic"));
    }
    let mut numerator: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numerator = numerator
            .checked_mul(10)
            .and_then(|v| v.checked_add((b - b'0') as i128))
            .ok_or_else(|| bad("magnitude overflows exact arithmetic"))?;
    }
    let denominator = 10i128
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(|| bad("fractional part too long"))?;
    if negative {
        numerator = -numerator;
    }
    Ok(Exact::new(numerator, denominator))
}
