//! High-precision binary floating point helpers on top of `astro-float`.

use astro_float::{BigFloat, Consts, Exponent, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const DEFAULT_PRECISION_BITS: usize = 128;
pub const PRECISION_ENV: &str = "GRIDMONO_PRECISION_BITS";
pub const MIN_PRECISION_BITS: usize = 64;
pub const MAX_PRECISION_BITS: usize = 1 << 16;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Validates a precision given as text.
pub fn parse_precision(s: &str) -> Option<usize> {
    let p: usize = s.trim().parse().ok()?;
    (MIN_PRECISION_BITS..=MAX_PRECISION_BITS)
        .contains(&p)
        .then_some(p)
}

/// Working precision in bits: `GRIDMONO_PRECISION_BITS` when set and valid, else 128.
pub fn precision_bits() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| parse_precision(&s))
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

pub fn from_bigint(n: &BigInt) -> BigFloat {
    let words = n.magnitude().to_u64_digits();
    if words.is_empty() {
        return BigFloat::from_word(0, 64);
    }
    let sign = if n.is_negative() {
        Sign::Neg
    } else {
        Sign::Pos
    };
    BigFloat::from_words(&words, sign, (64 * words.len()) as Exponent)
}

pub fn from_rational(r: &BigRational, p: usize) -> BigFloat {
    let num = from_bigint(r.numer());
    if r.denom().is_one() {
        let mut v = num;
        if v.precision().is_some_and(|q| q > p) {
            v.set_precision(p, RM).ok();
        }
        return v;
    }
    num.div(&from_bigint(r.denom()), p, RM)
}

/// Exact dyadic value of a finite float.
pub fn to_rational(f: &BigFloat) -> Option<BigRational> {
    if f.is_zero() {
        return Some(BigRational::zero());
    }
    let (words, _, sign, e, _) = f.as_raw_parts()?;
    let m = BigInt::from(BigUint::new(
        words
            .iter()
            .flat_map(|w| [*w as u32, (*w >> 32) as u32])
            .collect(),
    ));
    let m = if sign == Sign::Neg { -m } else { m };
    let shift = e as i64 - 64 * words.len() as i64;
    let two = BigInt::from(2);
    Some(if shift >= 0 {
        BigRational::from_integer(m * num_traits::pow(two, shift as usize))
    } else {
        BigRational::new(m, num_traits::pow(two, (-shift) as usize))
    })
}

pub fn to_f64(f: &BigFloat) -> f64 {
    to_rational(f).and_then(|r| r.to_f64()).unwrap_or(f64::NAN)
}

/// `sin(q·π)` and friends for rational `q`.
pub struct Trig {
    p: usize,
    cc: Consts,
    pi: BigFloat,
}

impl Trig {
    pub fn new(p: usize) -> Self {
        let mut cc = Consts::new().expect("astro-float constant cache");
        let pi = cc.pi(p + 32, RM);
        Trig { p, cc, pi }
    }

    fn angle(&self, q: &BigRational) -> BigFloat {
        self.pi.mul(&from_rational(q, self.p + 32), self.p + 32, RM)
    }

    pub fn sin_pi(&mut self, q: &BigRational) -> BigFloat {
        let a = self.angle(q);
        a.sin(self.p + 16, RM, &mut self.cc)
    }

    pub fn cos_pi(&mut self, q: &BigRational) -> BigFloat {
        let a = self.angle(q);
        a.cos(self.p + 16, RM, &mut self.cc)
    }
}

/// Nearest integer (ties away from zero) together with the absolute distance to it.
pub fn nearest_integer(r: &BigRational) -> (BigInt, BigRational) {
    let n = r.round().to_integer();
    let dist = (r - BigRational::from_integer(n.clone())).abs();
    (n, dist)
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// Decimal scientific rendering with at most `digits` significant digits.
pub fn format_sci(r: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let bits = a.numer().bits() as f64 - a.denom().bits() as f64;
    let mut e10 = (bits * std::f64::consts::LOG10_2).floor() as i64;
    let scale = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(pow10(e as u32))
        } else {
            BigRational::new(BigInt::one(), pow10((-e) as u32))
        }
    };
    while a >= scale(e10 + 1) {
        e10 += 1;
    }
    while a < scale(e10) {
        e10 -= 1;
    }
    let scaled = &a / scale(e10) * scale(digits as i64 - 1);
    let mut m = scaled.round().to_integer();
    if BigRational::from_integer(m.clone()) >= scale(digits as i64) {
        m = m.div_floor(&BigInt::from(10));
        e10 += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    out.push_str(&format!("e{e10}"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bigint_roundtrip() {
        for v in [
            "0",
            "1",
            "-7",
            "18446744073709551617",
            "-340282366920938463463374607431768211457",
        ] {
            let n: BigInt = v.parse().unwrap();
            let f = from_bigint(&n);
            assert_eq!(
                to_rational(&f).unwrap(),
                BigRational::from_integer(n),
                "{v}"
            );
        }
    }

    #[test]
    fn rational_rounding() {
        let f = from_rational(&q(1, 3), 128);
        let back = to_rational(&f).unwrap();
        let err = (back - q(1, 3)).abs();
        assert!(err < q(1, 1) / BigRational::from_integer(num_traits::pow(BigInt::from(2), 127)));
    }

    #[test]
    fn trig_values() {
        let mut t = Trig::new(128);
        let s = to_f64(&t.sin_pi(&q(1, 6)));
        assert!((s - 0.5).abs() < 1e-30);
        let c = to_f64(&t.cos_pi(&q(1, 3)));
        assert!((c - 0.5).abs() < 1e-30);
    }

    #[test]
    fn sci_format() {
        assert_eq!(format_sci(&q(390625, 1), 20), "3.90625e5");
        assert_eq!(format_sci(&q(-1, 8), 20), "-1.25e-1");
        assert_eq!(format_sci(&q(999999, 1), 3), "1e6");
        assert_eq!(format_sci(&q(2, 3), 4), "6.667e-1");
    }

    #[test]
    fn nearest() {
        let (n, d) = nearest_integer(&q(5, 2));
        assert_eq!(n, BigInt::from(3));
        assert_eq!(d, q(1, 2));
    }

    #[test]
    fn precision_parsing() {
        assert_eq!(parse_precision("256"), Some(256));
        assert_eq!(parse_precision("12"), None);
        assert_eq!(parse_precision("abc"), None);
    }
}
