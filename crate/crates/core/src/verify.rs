//! Self-check suites comparing the independent computation routes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::det::{det_exact, pfaffian_exact};
use crate::error::{Error, Result};
use crate::formulas::{check_cyl_moebius_relation, eval_formula, eval_formula_exact, FormulaId};
use crate::grid::{build_grid, orientation_report, verify_odd_orientation};
use crate::kasteleyn::{
    build_k_from_graph, build_k_kronecker, dashed_kronecker_term, dashed_part_from_graph,
    dimer_matrix, graph_entries, kronecker_entries,
};
use crate::oracle::{enumerate_loop_vertex, enumerate_perfect_matchings};
use crate::spec::{GridSpec, Mode};
use crate::value::relative_deviation;
use crate::weights::{format_rational, random_weights, WeightSpec};

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Relative tolerance for floating formula values.
pub const FORMULA_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Small,
    Formulas,
    Counterexamples,
    Relation,
    Dimers,
    Orientation,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Small,
        Suite::Formulas,
        Suite::Counterexamples,
        Suite::Relation,
        Suite::Dimers,
        Suite::Orientation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Small => "small",
            Suite::Formulas => "formulas",
            Suite::Counterexamples => "counterexamples",
            Suite::Relation => "relation",
            Suite::Dimers => "dimers",
            Suite::Orientation => "orientation",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub suite: Suite,
    pub case: String,
    pub pass: bool,
    pub detail: Json,
}

impl CaseResult {
    fn new(suite: Suite, case: String, outcome: Result<(bool, Json)>) -> Self {
        let (pass, detail) = match outcome {
            Ok(v) => v,
            Err(e) => (false, json!({ "error": e.to_string() })),
        };
        CaseResult {
            suite,
            case,
            pass,
            detail,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn count_passed(&self) -> usize {
        self.cases.iter().filter(|c| c.pass).count()
    }
}

fn q(v: &BigRational) -> String {
    format_rational(v)
}

fn weights_json(w: &WeightSpec) -> Json {
    json!({ "x": q(&w.x), "a": w.a.iter().map(q).collect::<Vec<_>>() })
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// All dimension tuples with entries in `lo..` (step `step`), length `1..=max_d`
/// and product at most `max_n`, in lexicographic order.
pub fn dims_up_to(max_n: usize, max_d: usize, lo: usize, step: usize) -> Vec<Vec<usize>> {
    fn rec(
        cur: &mut Vec<usize>,
        prod: usize,
        max_n: usize,
        max_d: usize,
        lo: usize,
        step: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_d {
            return;
        }
        let mut n = lo;
        while prod * n <= max_n {
            cur.push(n);
            rec(cur, prod * n, max_n, max_d, lo, step, out);
            cur.pop();
            n += step;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 1, max_n, max_d, lo, step, &mut out);
    out
}

/// Specs for the loop-vertex oracle comparison: every valid spec with at most
/// three axes and `N ≤ max_n` in the modes free, cylindrical:1, toroidal,
/// Möbius (d = 2, 3) and Klein (d = 3).
pub fn small_specs(max_n: usize) -> Vec<GridSpec> {
    let mut out: Vec<GridSpec> = Vec::new();
    for dims in dims_up_to(max_n, 3, 1, 1) {
        let d = dims.len();
        let mut modes = vec![Mode::Free, Mode::Cylindrical(1)];
        if d >= 2 {
            modes.push(Mode::Toroidal);
            modes.push(Mode::Moebius);
        }
        if d == 3 {
            modes.push(Mode::Klein);
        }
        for m in modes {
            if let Ok(s) = GridSpec::new(dims.clone(), m) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Loop-vertex enumeration against the exact determinant.
pub fn small_suite(seed: u64, max_n: usize, tuples: usize) -> SuiteReport {
    let mut r = rng(seed, 1);
    let mut report = SuiteReport::default();
    for spec in small_specs(max_n) {
        for t in 0..tuples {
            let w = random_weights(&mut r, spec.dim());
            let outcome = (|| {
                let g = build_grid(&spec)?;
                let det = det_exact(&build_k_from_graph(&g, &w)?.matrix)?;
                let enu = enumerate_loop_vertex(&g, &w)?;
                let enu = enu.value.rational();
                Ok((
                    &det == enu,
                    json!({ "weights": weights_json(&w), "det": q(&det), "enum": q(enu) }),
                ))
            })();
            report.cases.push(CaseResult::new(
                Suite::Small,
                format!("{spec} #{t}"),
                outcome,
            ));
        }
    }
    report
}

/// Every spec with all-even sides ≥ 2 and `N ≤ max_n` that some formula
/// covers, each with the formulas that apply to it.
pub fn formula_cases(max_n: usize) -> Vec<(GridSpec, Vec<FormulaId>)> {
    let mut out: Vec<(GridSpec, Vec<FormulaId>)> = Vec::new();
    for dims in dims_up_to(max_n, usize::MAX, 2, 2) {
        let d = dims.len();
        let mut modes = vec![Mode::Free, Mode::Toroidal];
        modes.extend((1..=d).map(Mode::Cylindrical));
        if d >= 2 {
            modes.push(Mode::Moebius);
            modes.push(Mode::Klein);
        }
        for m in modes {
            let Ok(s) = GridSpec::new(dims.clone(), m) else {
                continue;
            };
            if out.iter().any(|(t, _)| *t == s) {
                continue;
            }
            let ids: Vec<FormulaId> = FormulaId::ALL
                .into_iter()
                .filter(|id| id.check_spec(&s).is_ok())
                .collect();
            if !ids.is_empty() {
                out.push((s, ids));
            }
        }
    }
    out
}

/// Determinant side of a formula comparison: `det K` for monopole-dimer
/// formulas, `|Pf K|` at zero vertex weight for dimer formulas.
pub fn reference_value(id: FormulaId, spec: &GridSpec, w: &WeightSpec) -> Result<BigRational> {
    let g = build_grid(spec)?;
    if id.is_dimer() {
        Ok(pfaffian_exact(&dimer_matrix(&g, w)?.matrix)?.abs())
    } else {
        det_exact(&build_k_from_graph(&g, w)?.matrix)
    }
}

fn formula_case(
    id: FormulaId,
    spec: &GridSpec,
    w: &WeightSpec,
    reference: &BigRational,
) -> Result<(bool, Json)> {
    let real = eval_formula(id, spec, w)?;
    let dev = relative_deviation(reference, real.value.rational());
    let exact = eval_formula_exact(id, spec, w)?;
    let pass = dev <= FORMULA_TOLERANCE && exact == *reference;
    Ok((
        pass,
        json!({
            "weights": weights_json(w),
            "reference": q(reference),
            "formula": real.value.to_string(),
            "formula_exact": q(&exact),
            "rel_dev": dev,
        }),
    ))
}

fn small_int_weights(r: &mut ChaCha8Rng, d: usize) -> WeightSpec {
    let x = r.gen_range(1..=3);
    let a: Vec<i64> = (0..d).map(|_| r.gen_range(1..=3)).collect();
    WeightSpec::from_ints(x, &a)
}

/// Formula evaluations against determinants and Pfaffians. Every spec runs at a
/// random small-integer tuple; specs with `N ≤ small_n` also at unit weights and
/// at a random rational tuple. Reference values are shared between the
/// formulas covering the same spec.
pub fn formula_suite(seed: u64, max_n: usize, small_n: usize) -> SuiteReport {
    let mut r = rng(seed, 2);
    let mut report = SuiteReport::default();
    for (spec, ids) in formula_cases(max_n) {
        let d = spec.dim();
        let mut ws = vec![("int", small_int_weights(&mut r, d))];
        if spec.num_vertices() <= small_n {
            ws.push(("unit", WeightSpec::unit(d)));
            ws.push(("rational", random_weights(&mut r, d)));
        }
        for (tag, w) in ws {
            let mut md: Option<Result<BigRational>> = None;
            let mut dimer: Option<Result<BigRational>> = None;
            for &id in &ids {
                let slot = if id.is_dimer() { &mut dimer } else { &mut md };
                let reference = slot.get_or_insert_with(|| reference_value(id, &spec, &w));
                let outcome = match reference {
                    Ok(v) => formula_case(id, &spec, &w, v),
                    Err(e) => Err(e.clone()),
                };
                report.cases.push(CaseResult::new(
                    Suite::Formulas,
                    format!("{} {spec} {tag}", id.name()),
                    outcome,
                ));
            }
        }
    }
    report
}

fn sum_sq(a: &[BigRational]) -> BigRational {
    a.iter().fold(BigRational::zero(), |s, v| s + v * v)
}

/// `(4a_1² + a_2² + a_3² + a_4²)^4 (a_2² + a_3² + a_4²)^4`
pub fn moebius_4d_closed_form(a: &[BigRational]) -> BigRational {
    let four = BigRational::from_integer(4.into());
    let tail = sum_sq(&a[1..]);
    let first = &four * &a[0] * &a[0] + &tail;
    num_traits::pow(first * tail, 4)
}

/// `2^16 (a_1² + a_2² + a_3² + a_4²)^4 (a_2² + a_3² + a_4²)^4`
pub fn klein_4d_closed_form(a: &[BigRational]) -> BigRational {
    let tail = sum_sq(&a[1..]);
    let all = sum_sq(a);
    BigRational::from_integer(BigInt::one() << 16) * num_traits::pow(all * tail, 4)
}

/// Whether `r` is the `k`-th power of a rational.
pub fn is_perfect_power(r: &BigRational, k: u32) -> bool {
    if r.is_negative() && k % 2 == 0 {
        return false;
    }
    let root_of = |n: &BigInt| {
        let m = n.abs().nth_root(k);
        if num_traits::pow(m.clone(), k as usize) == n.abs() {
            Some(m)
        } else {
            None
        }
    };
    root_of(r.numer()).is_some() && root_of(r.denom()).is_some()
}

fn det_at_zero(spec: &GridSpec, a: &[BigRational]) -> Result<BigRational> {
    let w = WeightSpec::new(BigRational::zero(), a.to_vec());
    det_exact(&build_k_from_graph(&build_grid(spec)?, &w)?.matrix)
}

fn closed_form_cases(
    suite: Suite,
    mode: Mode,
    f: fn(&[BigRational]) -> BigRational,
    r: &mut ChaCha8Rng,
    samples: usize,
) -> Vec<CaseResult> {
    let spec = GridSpec::new(vec![2; 4], mode).expect("valid");
    let mut out = Vec::new();
    for t in 0..samples {
        let w = random_weights(r, 4);
        let outcome = (|| {
            let det = det_at_zero(&spec, &w.a)?;
            let rhs = f(&w.a);
            Ok((
                det == rhs,
                json!({ "a": w.a.iter().map(q).collect::<Vec<_>>(), "det": q(&det), "closed_form": q(&rhs) }),
            ))
        })();
        out.push(CaseResult::new(suite, format!("{spec} #{t}"), outcome));
    }
    out
}

/// Determinant identity on the four-axis Möbius grid, plus the unit-weight
/// value `194481` and its failure to be an eighth power.
pub fn moebius_4d_cases(seed: u64, samples: usize) -> Vec<CaseResult> {
    let mut r = rng(seed, 3);
    let mut out = closed_form_cases(
        Suite::Counterexamples,
        Mode::Moebius,
        moebius_4d_closed_form,
        &mut r,
        samples,
    );
    let spec = GridSpec::new(vec![2; 4], Mode::Moebius).expect("valid");
    let outcome = (|| {
        let det = det_at_zero(&spec, &WeightSpec::unit(4).a)?;
        let expect = BigRational::from_integer(194_481.into());
        let eighth = is_perfect_power(&det, 8);
        Ok((
            det == expect && !eighth,
            json!({ "det": q(&det), "expected": "194481", "eighth_power": eighth }),
        ))
    })();
    out.push(CaseResult::new(
        Suite::Counterexamples,
        format!("{spec} unit"),
        outcome,
    ));
    out
}

pub fn klein_4d_cases(seed: u64, samples: usize) -> Vec<CaseResult> {
    let mut r = rng(seed, 4);
    closed_form_cases(
        Suite::Counterexamples,
        Mode::Klein,
        klein_4d_closed_form,
        &mut r,
        samples,
    )
}

pub const RELATION_TRIPLES: [(usize, usize, usize); 4] =
    [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)];

/// `Z(Cyl_{4n1,2n2,2n3}) = Z(Möb_{2n1,2n2,2n3})²` through the closed forms, and
/// through determinants as an independent check.
pub fn relation_suite(seed: u64) -> SuiteReport {
    let mut r = rng(seed, 5);
    let mut report = SuiteReport::default();
    for (n1, n2, n3) in RELATION_TRIPLES {
        for (tag, w) in [
            ("unit", WeightSpec::unit(3)),
            ("rational", random_weights(&mut r, 3)),
        ] {
            let outcome = (|| {
                let formulas = check_cyl_moebius_relation(n1, n2, n3, &w)?;
                let cyl = GridSpec::new(vec![4 * n1, 2 * n2, 2 * n3], Mode::Cylindrical(1))?;
                let mob = GridSpec::new(vec![2 * n1, 2 * n2, 2 * n3], Mode::Moebius)?;
                let zc = det_exact(&build_k_from_graph(&build_grid(&cyl)?, &w)?.matrix)?;
                let zm = det_exact(&build_k_from_graph(&build_grid(&mob)?, &w)?.matrix)?;
                let dets = zc == &zm * &zm;
                Ok((
                    formulas && dets,
                    json!({
                        "weights": weights_json(&w),
                        "formulas": formulas,
                        "det_cyl": q(&zc),
                        "det_mob": q(&zm),
                        "dets": dets,
                    }),
                ))
            })();
            report.cases.push(CaseResult::new(
                Suite::Relation,
                format!("({n1},{n2},{n3}) {tag}"),
                outcome,
            ));
        }
    }
    report
}

/// Two-axis specs with even sides at most 4 in every mode that has a dimer formula.
pub fn dimer_specs() -> Vec<GridSpec> {
    let mut out = Vec::new();
    for mode in [
        Mode::Free,
        Mode::Cylindrical(1),
        Mode::Toroidal,
        Mode::Moebius,
        Mode::Klein,
    ] {
        for n1 in [2, 4] {
            for n2 in [2, 4] {
                out.push(GridSpec::new(vec![n1, n2], mode).expect("valid"));
            }
        }
    }
    out
}

/// Perfect-matching enumeration against `|Pf K|` and the rounded dimer formula.
pub fn dimer_suite() -> SuiteReport {
    let mut report = SuiteReport::default();
    for spec in dimer_specs() {
        for (a, b) in [(1, 1), (1, 2)] {
            let w = WeightSpec::from_ints(0, &[a, b]);
            let outcome = (|| {
                let g = build_grid(&spec)?;
                let pm = enumerate_perfect_matchings(&g, &w)?
                    .value
                    .rational()
                    .clone();
                let pf = pfaffian_exact(&dimer_matrix(&g, &w)?.matrix)?.abs();
                let id = FormulaId::dimer_for(&spec)
                    .ok_or_else(|| Error::Unsupported(format!("no dimer formula for {spec}")))?;
                let formula = eval_formula_exact(id, &spec, &w)?;
                Ok((
                    pm == pf && pf == formula,
                    json!({
                        "a": [a, b],
                        "matchings": q(&pm),
                        "pfaffian": q(&pf),
                        "formula": q(&formula),
                    }),
                ))
            })();
            report.cases.push(CaseResult::new(
                Suite::Dimers,
                format!("{spec} a=({a},{b})"),
                outcome,
            ));
        }
    }
    report
}

/// Twisted specs (d ≥ 2, sides ≥ 2) with `N ≤ max_n`.
pub fn twisted_specs(max_n: usize) -> Vec<GridSpec> {
    let mut out = Vec::new();
    for dims in dims_up_to(max_n, usize::MAX, 2, 1) {
        if dims.len() < 2 {
            continue;
        }
        for mode in [Mode::Moebius, Mode::Klein] {
            out.push(GridSpec::new(dims.clone(), mode).expect("valid"));
        }
    }
    out
}

/// Every spec the Kronecker builder accepts with all-even sides and `N ≤ max_n`.
pub fn kronecker_specs(max_n: usize) -> Vec<GridSpec> {
    let mut out: Vec<GridSpec> = Vec::new();
    for dims in dims_up_to(max_n, usize::MAX, 2, 2) {
        let d = dims.len();
        let mut modes = vec![Mode::Free];
        modes.extend((1..=d).map(Mode::Cylindrical));
        if d == 3 {
            modes.push(Mode::Moebius);
            modes.push(Mode::Klein);
        }
        for m in modes {
            let s = GridSpec::new(dims.clone(), m).expect("valid");
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

pub fn odd_orientation_cases(max_n: usize) -> Vec<CaseResult> {
    twisted_specs(max_n)
        .into_iter()
        .map(|spec| {
            let outcome = build_grid(&spec).map(|g| {
                let r = orientation_report(&g);
                let detail = json!({
                    "axis_odd": r.axis_odd,
                    "axis_squares": r.axis_total,
                    "dashed_odd": r.dashed_odd,
                    "dashed_squares": r.dashed_total,
                });
                (verify_odd_orientation(&g), detail)
            });
            CaseResult::new(Suite::Orientation, format!("odd {spec}"), outcome)
        })
        .collect()
}

/// Dashed part of the graph-built matrix against the Kronecker dashed term on
/// three-axis twisted grids with even sides.
pub fn dashed_pattern_cases(max_n: usize) -> Vec<CaseResult> {
    kronecker_specs(max_n)
        .into_iter()
        .filter(|s| s.dim() == 3 && s.mode().is_twisted())
        .map(|spec| {
            let outcome = (|| {
                let g = build_grid(&spec)?;
                let one = BigRational::one();
                Ok((
                    dashed_part_from_graph(&g, &one) == dashed_kronecker_term(&spec, &one)?,
                    Json::Null,
                ))
            })();
            CaseResult::new(Suite::Orientation, format!("dashed {spec}"), outcome)
        })
        .collect()
}

/// Graph builder against Kronecker builder. The matrices are compared entrywise;
/// determinants are compared as well up to order `det_max_n` and whenever the
/// matrices differ.
pub fn builder_cases(seed: u64, max_n: usize, det_max_n: usize) -> Vec<CaseResult> {
    let mut r = rng(seed, 6);
    kronecker_specs(max_n)
        .into_iter()
        .map(|spec| {
            let w = random_weights(&mut r, spec.dim());
            let outcome = (|| {
                let grid = build_grid(&spec)?;
                let same = graph_entries(&grid, &w)? == kronecker_entries(&spec, &w)?;
                let mut detail = json!({ "weights": weights_json(&w), "entrywise_equal": same });
                let mut pass = same;
                if !same || spec.num_vertices() <= det_max_n {
                    let g = build_k_from_graph(&grid, &w)?.matrix;
                    let k = build_k_kronecker(&spec, &w)?.matrix;
                    let (dg, dk) = (det_exact(&g)?, det_exact(&k)?);
                    detail["det_graph"] = json!(q(&dg));
                    detail["det_kronecker"] = json!(q(&dk));
                    pass = dg == dk;
                }
                Ok((pass, detail))
            })();
            CaseResult::new(Suite::Orientation, format!("builders {spec}"), outcome)
        })
        .collect()
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let cases = match suite {
        Suite::Small => small_suite(seed, 10, 3).cases,
        Suite::Formulas => formula_suite(seed, 256, 64).cases,
        Suite::Counterexamples => {
            let mut c = moebius_4d_cases(seed, 5);
            c.extend(klein_4d_cases(seed, 5));
            c
        }
        Suite::Relation => relation_suite(seed).cases,
        Suite::Dimers => dimer_suite().cases,
        Suite::Orientation => {
            let mut c = odd_orientation_cases(256);
            c.extend(dashed_pattern_cases(256));
            c.extend(builder_cases(seed, 512, 64));
            c
        }
    };
    SuiteReport { cases }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_enumeration() {
        let d = dims_up_to(4, 2, 2, 2);
        assert_eq!(d, vec![vec![2], vec![2, 2], vec![4]]);
        assert!(dims_up_to(10, 3, 1, 1).contains(&vec![1, 5, 2]));
    }

    #[test]
    fn perfect_powers() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert!(is_perfect_power(&r(256, 6561), 8));
        assert!(!is_perfect_power(&r(194_481, 1), 8));
        assert!(is_perfect_power(&r(194_481, 1), 4));
    }

    #[test]
    fn closed_forms_at_unit() {
        let one = vec![BigRational::one(); 4];
        assert_eq!(
            moebius_4d_closed_form(&one),
            BigRational::from_integer(194_481.into())
        );
        assert_eq!(
            klein_4d_closed_form(&one),
            BigRational::from_integer((BigInt::from(1) << 16) * BigInt::from(12).pow(4))
        );
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suite_tiny() {
        let r = small_suite(1, 4, 1);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.cases.len() > 5);
    }
}
