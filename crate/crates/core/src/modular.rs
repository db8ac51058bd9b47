//! Word-sized prime fields, used by the multi-modular determinant and Pfaffian.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Descending primes below 2^62.
pub struct Primes {
    next: u64,
}

impl Default for Primes {
    fn default() -> Self {
        Primes {
            next: (1u64 << 62) - 1,
        }
    }
}

impl Iterator for Primes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let c = self.next;
            self.next -= 2;
            if is_prime(c) {
                return Some(c);
            }
        }
        None
    }
}

/// Montgomery arithmetic modulo an odd `n < 2^62`.
#[derive(Debug, Clone, Copy)]
pub struct Field {
    pub n: u64,
    ninv: u64,
    r2: u64,
}

impl Field {
    pub fn new(n: u64) -> Self {
        assert!(n % 2 == 1 && n < (1 << 62));
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r2 = ((u128::MAX % n as u128 + 1) % n as u128) as u64;
        Field {
            n,
            ninv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.ninv);
        let u = ((t + m as u128 * self.n as u128) >> 64) as u64;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    /// Into Montgomery form.
    pub fn enter(&self, a: u64) -> u64 {
        self.mul(a % self.n, self.r2)
    }

    /// Out of Montgomery form.
    pub fn leave(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn one(&self) -> u64 {
        self.enter(1)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.n as i64) as u64;
        self.enter(r)
    }

    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.n));
        self.enter(r.to_u64().expect("residue fits"))
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero Montgomery-form element.
    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.n - 2)
    }
}

/// Incremental Chinese remaindering with a symmetric final representative.
#[derive(Debug, Clone)]
pub struct Crt {
    value: BigInt,
    modulus: BigInt,
}

impl Default for Crt {
    fn default() -> Self {
        Crt {
            value: BigInt::zero(),
            modulus: BigInt::one(),
        }
    }
}

impl Crt {
    /// Adds the plain (non-Montgomery) residue `r` modulo prime `p`.
    pub fn push(&mut self, r: u64, p: u64) {
        let pb = BigInt::from(p);
        let cur = self.value.mod_floor(&pb).to_u64().unwrap();
        let minv = self.modulus.mod_floor(&pb).to_u64().unwrap();
        let minv = pow_mod(minv, p - 2, p);
        let diff = (r + p - cur) % p;
        let t = mul_mod(diff, minv, p);
        self.value += &self.modulus * BigInt::from(t);
        self.modulus *= pb;
    }

    pub fn modulus_bits(&self) -> u64 {
        self.modulus.bits()
    }

    /// Representative in `(−M/2, M/2]`.
    pub fn symmetric(&self) -> BigInt {
        let half = &self.modulus >> 1;
        if self.value > half {
            &self.value - &self.modulus
        } else {
            self.value.clone()
        }
    }
}

/// Residues of an integer matrix, cheap when every entry fits in `i64`.
pub(crate) enum IntEntries<'a> {
    Small(Vec<i64>),
    Big(&'a [BigInt]),
}

impl<'a> IntEntries<'a> {
    pub(crate) fn new(entries: &'a [BigInt]) -> Self {
        match entries
            .iter()
            .map(|v| v.to_i64())
            .collect::<Option<Vec<_>>>()
        {
            Some(v) => IntEntries::Small(v),
            None => IntEntries::Big(entries),
        }
    }

    pub(crate) fn reduce(&self, f: &Field) -> Vec<u64> {
        match self {
            IntEntries::Small(v) => v
                .iter()
                .map(|&x| if x == 0 { 0 } else { f.from_i64(x) })
                .collect(),
            IntEntries::Big(v) => v
                .iter()
                .map(|x| if x.is_zero() { 0 } else { f.from_bigint(x) })
                .collect(),
        }
    }
}

/// `log2` of a Euclidean norm given the `log2` of each entry's magnitude.
pub(crate) fn log2_norm(logs: &[f64]) -> f64 {
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let s: f64 = logs.iter().map(|&b| (2.0 * (b - m)).exp2()).sum();
    m + 0.5 * s.log2()
}

pub(crate) fn log2_abs(v: &BigInt) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        v.magnitude().to_f64().unwrap().log2()
    } else {
        let shift = bits - 60;
        (v.magnitude() >> shift).to_f64().unwrap().log2() + shift as f64
    }
}
