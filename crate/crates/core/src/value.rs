//! Partition-function values tagged with the route that produced them.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::real::format_sci;
use crate::spec::GridSpec;
use crate::weights::WeightSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Det,
    Formula,
    Enumeration,
    Pfaffian,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Det => "det",
            Method::Formula => "formula",
            Method::Enumeration => "enumeration",
            Method::Pfaffian => "pfaffian",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigRational),
    /// A binary float held exactly as a dyadic rational.
    Real {
        value: BigRational,
        rel_error: f64,
        precision: usize,
    },
}

impl Value {
    pub fn rational(&self) -> &BigRational {
        match self {
            Value::Exact(v) => v,
            Value::Real { value, .. } => value,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        self.rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal digits worth printing for a real value.
    fn digits(precision: usize) -> usize {
        ((precision as f64) * std::f64::consts::LOG10_2)
            .floor()
            .max(1.0) as usize
            - 1
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(v) => write!(f, "{v}"),
            Value::Real {
                value, precision, ..
            } => f.write_str(&format_sci(value, Value::digits(*precision).min(30))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionValue {
    pub value: Value,
    pub method: Method,
    pub spec: GridSpec,
    pub weights: WeightSpec,
}

impl PartitionValue {
    pub fn exact(v: BigRational, method: Method, spec: &GridSpec, w: &WeightSpec) -> Self {
        PartitionValue {
            value: Value::Exact(v),
            method,
            spec: spec.clone(),
            weights: w.clone(),
        }
    }
}

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_deviation(a: &BigRational, b: &BigRational) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale.is_zero() {
        return 0.0;
    }
    ((a - b).abs() / scale).to_f64().unwrap_or(f64::INFINITY)
}
