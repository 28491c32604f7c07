use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Terms with exponent at or above this are dropped by multiplication.
pub const DEFAULT_TRUNCATION: i32 = 8;

/// A formal Laurent series in `e` with exact rational coefficients.
///
/// Only finitely many terms are stored. When a product had to drop terms,
/// or an operand was already truncated, `precision` records the first
/// exponent whose coefficient is no longer known.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    low: i32,
    coeffs: Vec<BigRational>,
    precision: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad Laurent series {input:?}: {reason}")]
pub struct LaurentParseError {
    pub input: String,
    pub reason: String,
}

impl LaurentSeries {
    pub fn zero() -> Self {
        LaurentSeries {
            low: 0,
            coeffs: Vec::new(),
            precision: None,
        }
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * e^k`.
    pub fn monomial(c: BigRational, k: i32) -> Self {
        Self::from_terms([(k, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, BigRational)>) -> Self {
        let terms: Vec<(i32, BigRational)> = terms.into_iter().collect();
        let Some(low) = terms.iter().map(|(k, _)| *k).min() else {
            return Self::zero();
        };
        let high = terms.iter().map(|(k, _)| *k).max().unwrap_or(low);
        let mut coeffs = vec![BigRational::zero(); (high - low + 1) as usize];
        for (k, c) in terms {
            coeffs[(k - low) as usize] += c;
        }
        LaurentSeries {
            low,
            coeffs,
            precision: None,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        if let Some(p) = self.precision {
            let keep = (p - self.low).clamp(0, self.coeffs.len() as i32) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn lowest_exponent(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn highest_exponent(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn coefficient(&self, k: i32) -> BigRational {
        usize::try_from(k - self.low)
            .ok()
            .and_then(|i| self.coeffs.get(i))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i32, c))
    }

    /// First exponent whose coefficient is unknown, if any.
    pub fn precision(&self) -> Option<i32> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// No strictly negative exponents.
    pub fn is_finite(&self) -> bool {
        self.lowest_exponent().is_none_or(|k| k >= 0)
    }

    /// Only strictly negative exponents.
    pub fn is_pole_part(&self) -> bool {
        self.highest_exponent().is_none_or(|k| k < 0)
    }

    /// The terms whose exponent passes `keep`, exactness carried over.
    pub fn restricted(&self, keep: impl Fn(i32) -> bool) -> Self {
        let mut out = Self::from_terms(
            self.terms()
                .filter(|(k, _)| keep(*k))
                .map(|(k, c)| (k, c.clone())),
        );
        out.precision = self.precision;
        out.normalized()
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        for x in &mut out.coeffs {
            *x = &*x * c;
        }
        out.normalized()
    }

    /// Product with terms at exponent `order` and above dropped.
    pub fn mul_truncated(&self, rhs: &Self, order: i32) -> Self {
        let mut precision = min_opt(
            self.precision.map(|p| p + rhs.low_or(p)),
            rhs.precision.map(|p| p + self.low_or(p)),
        );
        if self.is_zero() || rhs.is_zero() {
            return LaurentSeries {
                precision,
                ..Self::zero()
            };
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let low = self.low + rhs.low;
        let cut = (order - low).clamp(0, coeffs.len() as i32) as usize;
        if coeffs[cut..].iter().any(|c| !c.is_zero()) {
            precision = min_opt(precision, Some(order));
        }
        coeffs.truncate(cut);
        LaurentSeries {
            low,
            coeffs,
            precision,
        }
        .normalized()
    }

    pub fn pow_truncated(&self, n: u32, order: i32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul_truncated(self, order))
    }

    fn low_or(&self, fallback: i32) -> i32 {
        self.lowest_exponent().unwrap_or(fallback)
    }
}

fn min_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Default for LaurentSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        let mut out =
            LaurentSeries::from_terms(self.terms().chain(rhs.terms()).map(|(k, c)| (k, c.clone())));
        out.precision = min_opt(self.precision, rhs.precision);
        out.normalized()
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scaled(&-BigRational::one())
    }
}

impl Sub<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &-rhs
    }
}

impl Mul<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.mul_truncated(rhs, DEFAULT_TRUNCATION)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            let body = if k == 0 {
                c.abs().to_string()
            } else {
                format!("{}*e^{k}", c.abs())
            };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        match (first, self.precision) {
            (true, None) => write!(f, "0"),
            (true, Some(p)) => write!(f, "O(e^{p})"),
            (false, Some(p)) => write!(f, " + O(e^{p})"),
            (false, None) => Ok(()),
        }
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries({self})")
    }
}

impl FromStr for LaurentSeries {
    type Err = LaurentParseError;

    /// Accepts the printed form: `-3/2*e^-1 + 2 - e^2 + O(e^4)`. A bare
    /// rational is a constant term and `e^k` alone has coefficient 1.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| LaurentParseError {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut pieces = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if matches!(bytes[i], b'+' | b'-') && bytes[i - 1] != b'^' {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);

        let mut terms = Vec::new();
        let mut precision = None;
        for piece in pieces {
            let (negative, body) = match piece.as_bytes()[0] {
                b'-' => (true, &piece[1..]),
                b'+' => (false, &piece[1..]),
                _ => (false, piece),
            };
            if let Some(p) = body.strip_prefix("O(e^").and_then(|r| r.strip_suffix(')')) {
                if negative || precision.is_some() {
                    return Err(err("misplaced order term"));
                }
                precision = Some(p.parse::<i32>().map_err(|_| err("bad order exponent"))?);
                continue;
            }
            let (coef, exp) = match body.split_once("e^") {
                Some((c, k)) => {
                    let c = match c {
                        "" => "1",
                        c => c
                            .strip_suffix('*')
                            .ok_or_else(|| err("expected '*' before e^"))?,
                    };
                    (c, k.parse::<i32>().map_err(|_| err("bad exponent"))?)
                }
                None => (body, 0),
            };
            let mut c = parse_rational(coef).ok_or_else(|| err("bad coefficient"))?;
            if negative {
                c = -c;
            }
            terms.push((exp, c));
        }
        let mut out = LaurentSeries::from_terms(terms);
        out.precision = precision;
        Ok(out.normalized())
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if s.is_empty() || s.starts_with(['+', '-']) {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n).ok()?;
            let d = BigInt::from_str(d).ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(BigInt::from_str(s).ok()?)),
    }
}
