//! Runs the requested methods on one (spec, weights) point and compares them.

use gridmono::formulas::FormulaId;
use gridmono::oracle::LOOP_VERTEX_CAP;
use gridmono::real::precision_bits;
use gridmono::value::relative_deviation;
use gridmono::weights::Arithmetic;
use gridmono::{
    build_grid, build_k_from_graph, det_exact, det_real, enumerate_loop_vertex, eval_formula,
    eval_formula_exact, Error, GridSpec, Method, PartitionValue, Value, WeightSpec,
};
use num_rational::BigRational;
use serde_json::{json, Value as Json};

use crate::request::MethodSel;

/// Outcome of one method.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Value(PartitionValue),
    Skipped(String),
    Failed(String),
    NotRequested,
}

impl Cell {
    fn value(&self) -> Option<&BigRational> {
        match self {
            Cell::Value(v) => Some(v.value.rational()),
            _ => None,
        }
    }

    /// Exact value, real value in scientific notation, `skipped(reason)`,
    /// `error(reason)` or empty.
    pub fn text(&self) -> String {
        match self {
            Cell::Value(v) => v.value.to_string(),
            Cell::Skipped(r) => format!("skipped({r})"),
            Cell::Failed(r) => format!("error({r})"),
            Cell::NotRequested => String::new(),
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Cell::Value(v) => match &v.value {
                Value::Exact(q) => json!({ "value": q.to_string(), "exact": true }),
                Value::Real {
                    rel_error,
                    precision,
                    ..
                } => json!({
                    "value": v.value.to_string(),
                    "exact": false,
                    "precision_bits": precision,
                    "rel_error": rel_error,
                }),
            },
            Cell::Skipped(r) => json!({ "skipped": r }),
            Cell::Failed(r) => json!({ "error": r }),
            Cell::NotRequested => Json::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub det: Cell,
    pub formula: Cell,
    pub enumeration: Cell,
    /// Largest pairwise relative deviation among the values present.
    pub rel_dev: Option<f64>,
    /// Set once at least two values are present.
    pub agree: Option<bool>,
}

impl Evaluation {
    pub fn cells(&self) -> [(Method, &Cell); 3] {
        [
            (Method::Det, &self.det),
            (Method::Formula, &self.formula),
            (Method::Enumeration, &self.enumeration),
        ]
    }

    pub fn has_failure(&self) -> bool {
        self.cells()
            .iter()
            .any(|(_, c)| matches!(c, Cell::Failed(_)))
    }
}

fn det_cell(spec: &GridSpec, w: &WeightSpec) -> Cell {
    let run = || -> gridmono::Result<PartitionValue> {
        let k = build_k_from_graph(&build_grid(spec)?, w)?.matrix;
        let value = match w.arithmetic {
            Arithmetic::Exact => Value::Exact(det_exact(&k)?),
            Arithmetic::Real => {
                let p = precision_bits();
                let r = det_real(&k, p)?;
                Value::Real {
                    value: r.to_rational(),
                    rel_error: r.rel_error,
                    precision: p,
                }
            }
        };
        Ok(PartitionValue {
            value,
            method: Method::Det,
            spec: spec.clone(),
            weights: w.clone(),
        })
    };
    run().map_or_else(|e| Cell::Failed(e.to_string()), Cell::Value)
}

/// The closed form for a spec, or the reason there is none.
pub fn formula_for(spec: &GridSpec) -> Result<FormulaId, Error> {
    let id = FormulaId::monopole_for(spec).ok_or_else(|| {
        Error::Unsupported(format!(
            "no monopole-dimer product for {} with d = {}",
            spec.mode_arg(),
            spec.dim()
        ))
    })?;
    id.check_spec(spec)?;
    Ok(id)
}

/// Real value of the closed form, and its exact value when the weights are exact.
fn formula_cells(spec: &GridSpec, w: &WeightSpec) -> (Cell, Option<BigRational>) {
    let id = match formula_for(spec) {
        Ok(id) => id,
        Err(e) => return (Cell::Skipped(e.to_string()), None),
    };
    let real = match eval_formula(id, spec, w) {
        Ok(v) => v,
        Err(e) => return (Cell::Failed(e.to_string()), None),
    };
    if w.arithmetic == Arithmetic::Real {
        return (Cell::Value(real), None);
    }
    match eval_formula_exact(id, spec, w) {
        Ok(q) => {
            let exact = PartitionValue::exact(q, Method::Formula, spec, w);
            (Cell::Value(exact), Some(real.value.rational().clone()))
        }
        Err(_) => (Cell::Value(real), None),
    }
}

fn enumeration_cell(spec: &GridSpec, w: &WeightSpec) -> Cell {
    let n = spec.num_vertices();
    if n > LOOP_VERTEX_CAP {
        return Cell::Skipped(format!("N={n} > enumeration cap {LOOP_VERTEX_CAP}"));
    }
    let run = || enumerate_loop_vertex(&build_grid(spec)?, w);
    run().map_or_else(|e| Cell::Failed(e.to_string()), Cell::Value)
}

/// Evaluates the selected methods. Closed forms are compared against the
/// determinant through their floating value with tolerance `tol`; exact values
/// are compared exactly.
pub fn evaluate(spec: &GridSpec, w: &WeightSpec, method: MethodSel, tol: f64) -> Evaluation {
    let want = |m: MethodSel| method == m || method == MethodSel::All;
    let det = if want(MethodSel::Det) {
        det_cell(spec, w)
    } else {
        Cell::NotRequested
    };
    let (formula, formula_real) = if want(MethodSel::Formula) {
        formula_cells(spec, w)
    } else {
        (Cell::NotRequested, None)
    };
    let enumeration = if want(MethodSel::Enumerate) {
        enumeration_cell(spec, w)
    } else {
        Cell::NotRequested
    };

    let mut present: Vec<(&BigRational, bool)> = Vec::new();
    if let Some(v) = det.value() {
        present.push((v, matches!(&det, Cell::Value(p) if p.value.is_exact())));
    }
    if let Some(v) = formula_real.as_ref().or(formula.value()) {
        present.push((v, false));
    }
    if let Some(v) = enumeration.value() {
        present.push((v, true));
    }
    let mut rel_dev = None;
    let mut agree = None;
    if present.len() >= 2 {
        let mut worst = 0.0f64;
        let mut ok = true;
        for i in 0..present.len() {
            for j in i + 1..present.len() {
                let (a, ea) = present[i];
                let (b, eb) = present[j];
                let dev = relative_deviation(a, b);
                worst = worst.max(dev);
                ok &= if ea && eb { a == b } else { dev <= tol };
            }
        }
        rel_dev = Some(worst);
        agree = Some(ok);
    }
    Evaluation {
        det,
        formula,
        enumeration,
        rel_dev,
        agree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_method_has_no_verdict() {
        let s = GridSpec::new(vec![2, 2], gridmono::Mode::Free).unwrap();
        let e = evaluate(&s, &WeightSpec::unit(2), MethodSel::Det, 1e-8);
        assert_eq!(e.det.text(), "9");
        assert_eq!(e.formula, Cell::NotRequested);
        assert_eq!(e.agree, None);
    }

    #[test]
    fn missing_closed_form_is_skipped() {
        let s = GridSpec::new(vec![3, 2], gridmono::Mode::Free).unwrap();
        let e = evaluate(&s, &WeightSpec::unit(2), MethodSel::All, 1e-8);
        assert!(e.formula.text().starts_with("skipped("));
        assert_eq!(e.agree, Some(true));
    }
}
