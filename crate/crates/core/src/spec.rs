//! Grid family descriptors: side lengths plus boundary condition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary condition of a grid.
///
/// `Toroidal` is accepted on input and normalised to `Cylindrical(d)` once the
/// dimension is known, see [`GridSpec::new`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Free,
    /// Cycles on the first `ℓ` axes, paths on the rest.
    Cylindrical(usize),
    Toroidal,
    /// Twisted identification along axis 1, paths elsewhere.
    Moebius,
    /// Twisted identification along axis 1, cycles on axes 2..d.
    Klein,
}

impl Mode {
    pub fn is_twisted(self) -> bool {
        matches!(self, Mode::Moebius | Mode::Klein)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Free => f.write_str("free"),
            Mode::Cylindrical(l) => write!(f, "cylindrical:{l}"),
            Mode::Toroidal => f.write_str("toroidal"),
            Mode::Moebius => f.write_str("moebius"),
            Mode::Klein => f.write_str("klein"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    /// Grammar: `free | cylindrical:<ℓ> | toroidal | moebius | klein`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "free" => return Ok(Mode::Free),
            "toroidal" => return Ok(Mode::Toroidal),
            "moebius" => return Ok(Mode::Moebius),
            "klein" => return Ok(Mode::Klein),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("cylindrical:") {
            let l: usize = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad cylinder count in mode `{s}`")))?;
            if l == 0 {
                return Err(Error::Parse("cylindrical:<ℓ> needs ℓ ≥ 1".into()));
            }
            return Ok(Mode::Cylindrical(l));
        }
        if s == "cylindrical" {
            return Err(Error::Parse(
                "mode `cylindrical` needs an explicit count, e.g. `cylindrical:1`".into(),
            ));
        }
        Err(Error::Parse(format!(
            "unknown mode `{s}` (expected free | cylindrical:<ℓ> | toroidal | moebius | klein)"
        )))
    }
}

/// Parses a comma separated list of positive side lengths, e.g. `4,2,2`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty dimension list".into()));
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad side length `{t}`")))
        })
        .collect()
}

/// Axis lengths together with a boundary condition; validated on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridSpec {
    dims: Vec<usize>,
    mode: Mode,
}

impl GridSpec {
    pub fn new(dims: Vec<usize>, mode: Mode) -> Result<Self> {
        let d = dims.len();
        if d == 0 {
            return Err(Error::InvalidSpec("at least one axis is required".into()));
        }
        if let Some(i) = dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidSpec(format!("axis {} has length 0", i + 1)));
        }
        if dims
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .is_none()
        {
            return Err(Error::InvalidSpec("vertex count overflows".into()));
        }
        let mode = match mode {
            Mode::Toroidal => Mode::Cylindrical(d),
            Mode::Cylindrical(l) if l == 0 || l > d => {
                return Err(Error::InvalidSpec(format!(
                    "cylindrical:{l} needs 1 ≤ ℓ ≤ d = {d}"
                )))
            }
            m => m,
        };
        if mode.is_twisted() {
            if d < 2 {
                return Err(Error::InvalidSpec(format!(
                    "{mode} boundary needs at least two axes"
                )));
            }
            if dims[0] < 2 {
                return Err(Error::InvalidSpec(
                    "the twisted axis needs length ≥ 2".into(),
                ));
            }
        }
        let spec = GridSpec { dims, mode };
        for axis in 0..d {
            if spec.is_cyclic(axis) && spec.dims[axis] < 2 {
                return Err(Error::InvalidSpec(format!(
                    "cyclic axis {} needs length ≥ 2",
                    axis + 1
                )));
            }
        }
        Ok(spec)
    }

    pub fn parse(dims: &str, mode: &str) -> Result<Self> {
        GridSpec::new(parse_dims(dims)?, mode.parse()?)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.dims.iter().product()
    }

    /// Number of leading cyclic axes in cylindrical mode, 0 otherwise.
    pub fn cylinder_count(&self) -> usize {
        match self.mode {
            Mode::Cylindrical(l) => l,
            _ => 0,
        }
    }

    pub fn is_toroidal(&self) -> bool {
        self.mode == Mode::Cylindrical(self.dim())
    }

    /// Whether axis `axis` (0-based) closes into a cycle.
    pub fn is_cyclic(&self, axis: usize) -> bool {
        match self.mode {
            Mode::Cylindrical(l) => axis < l,
            Mode::Klein => axis >= 1,
            _ => false,
        }
    }

    pub fn all_even(&self) -> bool {
        self.dims.iter().all(|n| n % 2 == 0)
    }

    /// Fails unless every side length is even.
    pub fn require_even(&self) -> Result<()> {
        match self.dims.iter().position(|n| n % 2 != 0) {
            None => Ok(()),
            Some(i) => Err(Error::InvalidSpec(format!(
                "closed forms need even side lengths; axis {} has length {}",
                i + 1,
                self.dims[i]
            ))),
        }
    }

    /// `4x2x2`-style rendering of the side lengths.
    pub fn dims_label(&self) -> String {
        self.dims
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }

    /// Comma separated side lengths, the inverse of [`parse_dims`].
    pub fn dims_arg(&self) -> String {
        self.dims
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Canonical mode string; `toroidal` for `Cylindrical(d)` when d ≥ 2.
    pub fn mode_arg(&self) -> String {
        match self.mode {
            Mode::Cylindrical(l) if l == self.dim() && l >= 2 => "toroidal".into(),
            m => m.to_string(),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.mode_arg(), self.dims_label())
    }
}

#[derive(Serialize, Deserialize)]
struct GridSpecRepr {
    dims: Vec<usize>,
    mode: String,
}

impl Serialize for GridSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridSpecRepr {
            dims: self.dims.clone(),
            mode: self.mode_arg(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GridSpecRepr::deserialize(d)?;
        let mode: Mode = repr.mode.parse().map_err(serde::de::Error::custom)?;
        GridSpec::new(repr.dims, mode).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_grammar() {
        assert_eq!("free".parse::<Mode>().unwrap(), Mode::Free);
        assert_eq!(
            "cylindrical:3".parse::<Mode>().unwrap(),
            Mode::Cylindrical(3)
        );
        assert_eq!("toroidal".parse::<Mode>().unwrap(), Mode::Toroidal);
        assert_eq!("moebius".parse::<Mode>().unwrap(), Mode::Moebius);
        assert_eq!("klein".parse::<Mode>().unwrap(), Mode::Klein);
        assert!("cylindrical".parse::<Mode>().is_err());
        assert!("cylindrical:0".parse::<Mode>().is_err());
        assert!("cylindrical:x".parse::<Mode>().is_err());
        assert!("torus".parse::<Mode>().is_err());
    }

    #[test]
    fn toroidal_normalises() {
        let s = GridSpec::parse("4,4", "toroidal").unwrap();
        assert_eq!(s.mode(), Mode::Cylindrical(2));
        assert!(s.is_toroidal());
        assert_eq!(s.mode_arg(), "toroidal");
        let t = GridSpec::parse("4,4", "cylindrical:2").unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn validation() {
        assert!(GridSpec::new(vec![], Mode::Free).is_err());
        assert!(GridSpec::new(vec![3, 0], Mode::Free).is_err());
        assert!(GridSpec::new(vec![4], Mode::Moebius).is_err());
        assert!(GridSpec::new(vec![1, 2], Mode::Klein).is_err());
        assert!(GridSpec::new(vec![2, 2], Mode::Cylindrical(3)).is_err());
        assert!(GridSpec::new(vec![1, 2], Mode::Cylindrical(1)).is_err());
        assert!(GridSpec::new(vec![2, 1], Mode::Klein).is_err());
        // path axes may be degenerate
        assert!(GridSpec::new(vec![4, 1, 1], Mode::Moebius).is_ok());
        assert!(GridSpec::new(vec![1], Mode::Free).is_ok());
    }

    #[test]
    fn require_even_names_axis() {
        let s = GridSpec::parse("4,3", "free").unwrap();
        let err = s.require_even().unwrap_err().to_string();
        assert!(err.contains("axis 2"), "{err}");
    }

    #[test]
    fn serde_roundtrip() {
        let s = GridSpec::parse("4,2,2", "cylindrical:1").unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"dims":[4,2,2],"mode":"cylindrical:1"}"#);
        let back: GridSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
