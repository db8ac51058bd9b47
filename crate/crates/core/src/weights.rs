//! Vertex and per-axis edge weights.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Exact,
    Real,
}

impl fmt::Display for Arithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arithmetic::Exact => "exact",
            Arithmetic::Real => "real",
        })
    }
}

impl std::str::FromStr for Arithmetic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Arithmetic::Exact),
            "real" => Ok(Arithmetic::Real),
            other => Err(Error::Parse(format!("unknown arithmetic `{other}`"))),
        }
    }
}

/// Most digits accepted in a numerator or denominator.
pub const MAX_DIGITS: usize = 4096;

/// Parses `7`, `-3/4`, `0.25`, `1e-3` or `2.5E2` into an exact rational.
/// Decimal input is bounded so that its `p/q` form is accepted again.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("`{t}` is not a rational number"));
    if t.is_empty() || t.len() > 2 * MAX_DIGITS + 3 {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = parse_int(p.trim()).ok_or_else(bad)?;
        let q: BigInt = parse_int(q.trim()).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(Error::Parse(format!("`{t}` has a zero denominator")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..].parse().map_err(|_| bad())?;
            if e.unsigned_abs() > MAX_DIGITS as u64 {
                return Err(bad());
            }
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if int.len() + frac.len() + exp.unsigned_abs() as usize >= MAX_DIGITS {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || body.len() > MAX_DIGITS || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Comma separated rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSpec {
    pub x: BigRational,
    pub a: Vec<BigRational>,
    pub arithmetic: Arithmetic,
}

impl WeightSpec {
    pub fn new(x: BigRational, a: Vec<BigRational>) -> Self {
        WeightSpec {
            x,
            a,
            arithmetic: Arithmetic::Exact,
        }
    }

    pub fn from_ints(x: i64, a: &[i64]) -> Self {
        WeightSpec::new(
            BigRational::from_integer(x.into()),
            a.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn unit(d: usize) -> Self {
        WeightSpec::new(BigRational::one(), vec![BigRational::one(); d])
    }

    pub fn with_arithmetic(mut self, arithmetic: Arithmetic) -> Self {
        self.arithmetic = arithmetic;
        self
    }

    pub fn with_x(mut self, x: BigRational) -> Self {
        self.x = x;
        self
    }

    /// `x` is a single rational, `a` a comma separated list.
    pub fn parse(x: &str, a: &str) -> Result<Self> {
        Ok(WeightSpec::new(parse_rational(x)?, parse_rational_list(a)?))
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn check_dim(&self, d: usize) -> Result<()> {
        if self.a.len() != d {
            return Err(Error::InvalidWeights(format!(
                "{} edge weights given for a {d}-dimensional grid",
                self.a.len()
            )));
        }
        Ok(())
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.a.iter().all(|v| v.is_integer())
    }

    pub fn all_positive(&self) -> bool {
        self.a.iter().all(|v| v.is_positive())
    }

    pub fn a_arg(&self) -> String {
        self.a
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={} a=({})", self.x, self.a_arg())
    }
}

/// Uniform-ish rational in `[lo, hi]` with denominator at most 12.
pub fn random_rational<R: Rng>(rng: &mut R, lo: &BigRational, hi: &BigRational) -> BigRational {
    let q: i64 = rng.gen_range(1..=12);
    let qb = BigRational::from_integer(q.into());
    let lo_n = (lo * &qb).ceil().to_integer();
    let hi_n = (hi * &qb).floor().to_integer();
    let span: i64 = (&hi_n - &lo_n).try_into().unwrap_or(0).max(0);
    let p = lo_n + BigInt::from(rng.gen_range(0..=span));
    BigRational::new(p, q.into())
}

/// Random weights with every entry in `[1/4, 4]`.
pub fn random_weights<R: Rng>(rng: &mut R, d: usize) -> WeightSpec {
    let lo = BigRational::new(1.into(), 4.into());
    let hi = BigRational::from_integer(4.into());
    let x = random_rational(rng, &lo, &hi);
    let a = (0..d).map(|_| random_rational(rng, &lo, &hi)).collect();
    WeightSpec::new(x, a)
}
