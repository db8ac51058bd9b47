//! Closed-form trigonometric products for dimer and monopole-dimer partition
//! functions, evaluated in high-precision binary floating point.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{self, nearest_integer, precision_bits, Trig, RM};
use crate::spec::{GridSpec, Mode};
use crate::value::{Method, PartitionValue, Value};
use crate::weights::WeightSpec;

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormulaId {
    Dimer2DFree,
    Dimer2DCyl,
    Dimer2DTor,
    Dimer2DMob,
    Dimer2DKlein,
    MD_Free_d,
    MD_Cyl_d,
    MD_Mixed_d,
    MD_Tor_d,
    MD_Mob_3,
    MD_Klein_3,
}

impl FormulaId {
    pub const ALL: [FormulaId; 11] = [
        FormulaId::Dimer2DFree,
        FormulaId::Dimer2DCyl,
        FormulaId::Dimer2DTor,
        FormulaId::Dimer2DMob,
        FormulaId::Dimer2DKlein,
        FormulaId::MD_Free_d,
        FormulaId::MD_Cyl_d,
        FormulaId::MD_Mixed_d,
        FormulaId::MD_Tor_d,
        FormulaId::MD_Mob_3,
        FormulaId::MD_Klein_3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Dimer2DFree => "dimer2d-free",
            FormulaId::Dimer2DCyl => "dimer2d-cyl",
            FormulaId::Dimer2DTor => "dimer2d-tor",
            FormulaId::Dimer2DMob => "dimer2d-mob",
            FormulaId::Dimer2DKlein => "dimer2d-klein",
            FormulaId::MD_Free_d => "md-free",
            FormulaId::MD_Cyl_d => "md-cyl",
            FormulaId::MD_Mixed_d => "md-mixed",
            FormulaId::MD_Tor_d => "md-tor",
            FormulaId::MD_Mob_3 => "md-mob3",
            FormulaId::MD_Klein_3 => "md-klein3",
        }
    }

    /// Dimer ids count perfect matchings and ignore the vertex weight.
    pub fn is_dimer(self) -> bool {
        matches!(
            self,
            FormulaId::Dimer2DFree
                | FormulaId::Dimer2DCyl
                | FormulaId::Dimer2DTor
                | FormulaId::Dimer2DMob
                | FormulaId::Dimer2DKlein
        )
    }

    /// The monopole-dimer product matching a spec's boundary, if there is one.
    pub fn monopole_for(spec: &GridSpec) -> Option<FormulaId> {
        let d = spec.dim();
        match spec.mode() {
            Mode::Free => Some(FormulaId::MD_Free_d),
            Mode::Cylindrical(1) => Some(FormulaId::MD_Cyl_d),
            Mode::Cylindrical(l) if l == d => Some(FormulaId::MD_Tor_d),
            Mode::Cylindrical(_) => Some(FormulaId::MD_Mixed_d),
            Mode::Moebius if d == 3 => Some(FormulaId::MD_Mob_3),
            Mode::Klein if d == 3 => Some(FormulaId::MD_Klein_3),
            _ => None,
        }
    }

    /// The two-dimensional dimer product matching a spec's boundary, if there is one.
    pub fn dimer_for(spec: &GridSpec) -> Option<FormulaId> {
        if spec.dim() != 2 {
            return None;
        }
        match spec.mode() {
            Mode::Free => Some(FormulaId::Dimer2DFree),
            Mode::Cylindrical(1) => Some(FormulaId::Dimer2DCyl),
            Mode::Cylindrical(2) => Some(FormulaId::Dimer2DTor),
            Mode::Moebius => Some(FormulaId::Dimer2DMob),
            Mode::Klein => Some(FormulaId::Dimer2DKlein),
            _ => None,
        }
    }

    /// Fails with the violated constraint unless `spec` is in this id's family.
    pub fn check_spec(self, spec: &GridSpec) -> Result<()> {
        let d = spec.dim();
        let mode = spec.mode();
        let (ok, want) = match self {
            FormulaId::Dimer2DFree => (d == 2 && mode == Mode::Free, "free, d = 2"),
            FormulaId::Dimer2DCyl => (
                d == 2 && mode == Mode::Cylindrical(1),
                "cylindrical:1, d = 2",
            ),
            FormulaId::Dimer2DTor => (d == 2 && spec.is_toroidal(), "toroidal, d = 2"),
            FormulaId::Dimer2DMob => (d == 2 && mode == Mode::Moebius, "moebius, d = 2"),
            FormulaId::Dimer2DKlein => (d == 2 && mode == Mode::Klein, "klein, d = 2"),
            FormulaId::MD_Free_d => (mode == Mode::Free, "free"),
            FormulaId::MD_Cyl_d => (mode == Mode::Cylindrical(1), "cylindrical:1"),
            FormulaId::MD_Mixed_d => (matches!(mode, Mode::Cylindrical(_)), "cylindrical:<ℓ>"),
            FormulaId::MD_Tor_d => (spec.is_toroidal(), "toroidal"),
            FormulaId::MD_Mob_3 => (d == 3 && mode == Mode::Moebius, "moebius, d = 3"),
            FormulaId::MD_Klein_3 => (d == 3 && mode == Mode::Klein, "klein, d = 3"),
        };
        if !ok {
            return Err(Error::Unsupported(format!(
                "{} needs {want}; got {} with d = {d}",
                self.name(),
                spec.mode_arg()
            )));
        }
        spec.require_even()
    }

    fn axis_kinds(self, spec: &GridSpec) -> Vec<AxisKind> {
        let d = spec.dim();
        let l = spec.cylinder_count();
        (0..d)
            .map(|q| match self {
                FormulaId::Dimer2DFree | FormulaId::MD_Free_d => AxisKind::Path,
                FormulaId::Dimer2DCyl | FormulaId::MD_Cyl_d => {
                    if q == 0 {
                        AxisKind::Cycle
                    } else {
                        AxisKind::Path
                    }
                }
                FormulaId::MD_Mixed_d => {
                    if q < l {
                        AxisKind::Cycle
                    } else {
                        AxisKind::Path
                    }
                }
                FormulaId::Dimer2DTor | FormulaId::MD_Tor_d => AxisKind::Cycle,
                FormulaId::Dimer2DMob | FormulaId::MD_Mob_3 => {
                    if q == 0 {
                        AxisKind::Twist
                    } else {
                        AxisKind::Path
                    }
                }
                FormulaId::Dimer2DKlein | FormulaId::MD_Klein_3 => {
                    if q == 0 {
                        AxisKind::Twist
                    } else {
                        AxisKind::Cycle
                    }
                }
            })
            .collect()
    }

    fn exponent(self, d: usize) -> usize {
        if self.is_dimer() {
            1
        } else {
            1 << (d - 1)
        }
    }

    /// Total degree of the product as a polynomial in the weights.
    pub fn degree(self, spec: &GridSpec) -> usize {
        if self.is_dimer() {
            spec.num_vertices() / 2
        } else {
            spec.num_vertices()
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown formula `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AxisKind {
    /// `cos²(iπ/(2m+1))`
    Path,
    /// `sin²((2i−1)π/2m)`
    Cycle,
    /// `sin²((4i−1)π/4m)`
    Twist,
}

impl AxisKind {
    fn angle(self, i: usize, m: usize) -> BigRational {
        let (num, den) = match self {
            AxisKind::Path => (i, 2 * m + 1),
            AxisKind::Cycle => (2 * i - 1, 2 * m),
            AxisKind::Twist => (4 * i - 1, 4 * m),
        };
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn squared_trig(self, t: &mut Trig, q: &BigRational, p: usize) -> BigFloat {
        let v = match self {
            AxisKind::Path => t.cos_pi(q),
            AxisKind::Cycle | AxisKind::Twist => t.sin_pi(q),
        };
        v.mul(&v, p, RM)
    }

    fn squared_trig_f64(self, q: f64) -> f64 {
        let a = q * std::f64::consts::PI;
        match self {
            AxisKind::Path => a.cos().powi(2),
            AxisKind::Cycle | AxisKind::Twist => a.sin().powi(2),
        }
    }
}

fn for_each_index(ms: &[usize], mut f: impl FnMut(&[usize])) {
    if ms.contains(&0) {
        return;
    }
    let mut idx = vec![1; ms.len()];
    loop {
        f(&idx);
        let mut q = 0;
        loop {
            if q == ms.len() {
                return;
            }
            if idx[q] < ms[q] {
                idx[q] += 1;
                break;
            }
            idx[q] = 1;
            q += 1;
        }
    }
}

/// `log2` of the product evaluated in double precision, for sizing the working precision.
fn log2_estimate(id: FormulaId, spec: &GridSpec, w: &WeightSpec) -> f64 {
    let kinds = id.axis_kinds(spec);
    let ms: Vec<usize> = spec.dims().iter().map(|n| n / 2).collect();
    let x2 = if id.is_dimer() {
        0.0
    } else {
        w.x.to_f64().unwrap_or(0.0).powi(2)
    };
    let terms: Vec<Vec<f64>> = (0..spec.dim())
        .map(|q| {
            let a = w.a[q].to_f64().unwrap_or(0.0);
            (1..=ms[q])
                .map(|i| {
                    let ang = kinds[q].angle(i, ms[q]).to_f64().unwrap_or(0.0);
                    4.0 * a * a * kinds[q].squared_trig_f64(ang)
                })
                .collect()
        })
        .collect();
    let mut total = 0.0;
    for_each_index(&ms, |idx| {
        let f: f64 = x2 + (0..idx.len()).map(|q| terms[q][idx[q] - 1]).sum::<f64>();
        total += f.abs().max(f64::MIN_POSITIVE).log2();
    });
    total * id.exponent(spec.dim()) as f64
}

fn float_cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    a.cmp(b).unwrap_or(0).cmp(&0)
}

/// The product at `p` bits together with a relative error estimate.
fn eval_float(id: FormulaId, spec: &GridSpec, w: &WeightSpec, p: usize) -> Result<(BigFloat, f64)> {
    w.check_dim(spec.dim())?;
    id.check_spec(spec)?;
    let wp = p + 16;
    let kinds = id.axis_kinds(spec);
    let ms: Vec<usize> = spec.dims().iter().map(|n| n / 2).collect();
    let mut trig = Trig::new(wp);
    let four = BigFloat::from_word(4, 64);
    let terms: Vec<Vec<BigFloat>> = (0..spec.dim())
        .map(|q| {
            let a = real::from_rational(&w.a[q], wp);
            let a2 = four.mul(&a.mul(&a, wp, RM), wp, RM);
            (1..=ms[q])
                .map(|i| {
                    let t = kinds[q].squared_trig(&mut trig, &kinds[q].angle(i, ms[q]), wp);
                    a2.mul(&t, wp, RM)
                })
                .collect()
        })
        .collect();
    let x2 = if id.is_dimer() {
        BigFloat::from_word(0, 64)
    } else {
        let x = real::from_rational(&w.x, wp);
        x.mul(&x, wp, RM)
    };
    let mut factors = Vec::new();
    for_each_index(&ms, |idx| {
        let mut f = x2.clone();
        for (q, &i) in idx.iter().enumerate() {
            f = f.add(&terms[q][i - 1], wp, RM);
        }
        factors.push(f);
    });
    factors.sort_by(float_cmp);
    let mut prod = BigFloat::from_word(1, 64);
    for f in &factors {
        prod = prod.mul(f, wp, RM);
    }
    let e = id.exponent(spec.dim());
    let value = prod.powi(e, p, RM);
    let ops = (factors.len() * (spec.dim() + 8) + 64) as f64 * e as f64;
    let rel_error = ops * (-(wp as f64)).exp2() + (-(p as f64)).exp2();
    Ok((value, rel_error))
}

/// Evaluates the product at the default working precision.
pub fn eval_formula(id: FormulaId, spec: &GridSpec, w: &WeightSpec) -> Result<PartitionValue> {
    eval_formula_at(id, spec, w, precision_bits())
}

pub fn eval_formula_at(
    id: FormulaId,
    spec: &GridSpec,
    w: &WeightSpec,
    p: usize,
) -> Result<PartitionValue> {
    let (v, rel_error) = eval_float(id, spec, w, p)?;
    Ok(PartitionValue {
        value: Value::Real {
            value: real::to_rational(&v).unwrap_or_else(BigRational::zero),
            rel_error,
            precision: p,
        },
        method: Method::Formula,
        spec: spec.clone(),
        weights: w.clone(),
    })
}

/// Exact value of the product for rational weights.
///
/// The product is a homogeneous integer polynomial in the weights, so it is
/// evaluated at integer weights `L·w` with enough precision to round to the
/// exact integer, then divided by `L^degree`.
pub fn eval_formula_exact(id: FormulaId, spec: &GridSpec, w: &WeightSpec) -> Result<BigRational> {
    w.check_dim(spec.dim())?;
    id.check_spec(spec)?;
    let mut l = BigInt::one();
    if !id.is_dimer() {
        l = l.lcm(w.x.denom());
    }
    for a in &w.a {
        l = l.lcm(a.denom());
    }
    let lq = BigRational::from_integer(l.clone());
    let scaled = WeightSpec::new(&w.x * &lq, w.a.iter().map(|a| a * &lq).collect());
    let bits = log2_estimate(id, spec, &scaled).max(0.0).ceil() as usize;
    let p = precision_bits().max(bits + 64);
    let (v, _) = eval_float(id, spec, &scaled, p)?;
    let r = real::to_rational(&v).unwrap_or_else(BigRational::zero);
    let (n, dist) = nearest_integer(&r);
    if dist > BigRational::new(1.into(), 4.into()) {
        return Err(Error::Inconsistent(format!(
            "{id} did not round to an integer at scaled weights (distance {})",
            dist.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(BigRational::new(n, num_traits::pow(l, id.degree(spec))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rounded {
    Integer(BigInt),
    Unchanged(BigRational),
}

/// Snaps `v` to the nearest integer when `|v − round(v)| ≤ tol·max(1, |v|)`.
pub fn round_if_near_integer(v: &BigRational, tol: f64) -> Rounded {
    let (n, dist) = nearest_integer(v);
    let scale = v.abs().to_f64().unwrap_or(f64::INFINITY).max(1.0);
    if dist.to_f64().unwrap_or(f64::INFINITY) <= tol * scale {
        Rounded::Integer(n)
    } else {
        Rounded::Unchanged(v.clone())
    }
}

/// Whether the cylindrical product on `4n1×2n2×2n3` equals the square of the
/// Möbius product on `2n1×2n2×2n3`, compared exactly.
pub fn check_cyl_moebius_relation(n1: usize, n2: usize, n3: usize, w: &WeightSpec) -> Result<bool> {
    if n1 == 0 || n2 == 0 || n3 == 0 {
        return Err(Error::InvalidInput("relation needs n1, n2, n3 ≥ 1".into()));
    }
    let cyl = GridSpec::new(vec![4 * n1, 2 * n2, 2 * n3], Mode::Cylindrical(1))?;
    let mob = GridSpec::new(vec![2 * n1, 2 * n2, 2 * n3], Mode::Moebius)?;
    let zc = eval_formula_exact(FormulaId::MD_Cyl_d, &cyl, w)?;
    let zm = eval_formula_exact(FormulaId::MD_Mob_3, &mob, w)?;
    Ok(zc == &zm * &zm)
}
