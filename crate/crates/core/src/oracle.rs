//! Brute-force enumeration of matchings and loop-vertex configurations.
//!
//! Everything here works from the edge list of an [`OrientedGrid`] only and
//! never touches the matrix builders.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grid::OrientedGrid;
use crate::spec::Mode;
use crate::value::{Method, PartitionValue};
use crate::weights::WeightSpec;

/// Vertex cap for loop-vertex enumeration.
pub const LOOP_VERTEX_CAP: usize = 14;
/// Vertex cap for matching enumeration (bitmask width).
pub const MATCHING_CAP: usize = 64;

/// Scale factor making every weight integral.
fn common_denominator(w: &WeightSpec) -> BigInt {
    w.a.iter()
        .fold(w.x.denom().clone(), |acc, a| acc.lcm(a.denom()))
}

fn integral(v: &BigRational, l: &BigInt) -> BigInt {
    (v * BigRational::from_integer(l.clone())).to_integer()
}

/// Merged edge weights between distinct labels (0-based), parallel edges summed.
struct Weighted {
    x: BigInt,
    /// Unsigned merged weight, for matchings.
    plain: HashMap<(usize, usize), BigInt>,
    /// Orientation-signed merged weight `s(u, v) = −s(v, u)`.
    signed: HashMap<(usize, usize), BigInt>,
    nbrs: Vec<Vec<usize>>,
    scale: BigInt,
}

impl Weighted {
    fn new(grid: &OrientedGrid, w: &WeightSpec) -> Result<Self> {
        w.check_dim(grid.spec().dim())?;
        let n = grid.num_vertices();
        let l = common_denominator(w);
        let a: Vec<BigInt> = w.a.iter().map(|v| integral(v, &l)).collect();
        let mut plain: HashMap<(usize, usize), BigInt> = HashMap::new();
        let mut signed: HashMap<(usize, usize), BigInt> = HashMap::new();
        for e in grid.edges() {
            let (t, h) = (e.tail - 1, e.head - 1);
            let wt = &a[e.axis - 1];
            *plain.entry((t.min(h), t.max(h))).or_default() += wt;
            *signed.entry((t, h)).or_default() += wt;
            *signed.entry((h, t)).or_default() -= wt;
        }
        let mut nbrs = vec![Vec::new(); n];
        for &(u, v) in plain.keys() {
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
        for list in &mut nbrs {
            list.sort_unstable();
        }
        Ok(Weighted {
            x: integral(&w.x, &l),
            plain,
            signed,
            nbrs,
            scale: l,
        })
    }

    fn plain(&self, u: usize, v: usize) -> &BigInt {
        &self.plain[&(u.min(v), u.max(v))]
    }

    fn signed(&self, u: usize, v: usize) -> BigInt {
        self.signed.get(&(u, v)).cloned().unwrap_or_default()
    }

    /// Undo the weight scaling of a homogeneous degree-`deg` sum.
    fn unscale(&self, v: BigInt, deg: usize) -> BigRational {
        BigRational::new(v, num_traits::pow(self.scale.clone(), deg))
    }
}

fn perfect_matchings(
    g: &Weighted,
    mask: u64,
    full: u64,
    memo: &mut HashMap<u64, BigInt>,
) -> BigInt {
    if mask == full {
        return BigInt::one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let v = (!mask).trailing_zeros() as usize;
    let with_v = mask | (1 << v);
    let mut total = BigInt::zero();
    for &u in &g.nbrs[v] {
        if with_v & (1 << u) != 0 {
            continue;
        }
        let w = g.plain(v, u);
        if w.is_zero() {
            continue;
        }
        total += w * perfect_matchings(g, with_v | (1 << u), full, memo);
    }
    memo.insert(mask, total.clone());
    total
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    Ok(())
}

/// Weighted sum over perfect matchings; zero for odd vertex counts.
pub fn enumerate_perfect_matchings(grid: &OrientedGrid, w: &WeightSpec) -> Result<PartitionValue> {
    let n = grid.num_vertices();
    check_cap(n, MATCHING_CAP)?;
    let g = Weighted::new(grid, w)?;
    let value = if n % 2 == 1 {
        BigRational::zero()
    } else {
        let s = perfect_matchings(&g, 0, full_mask(n), &mut HashMap::new());
        g.unscale(s, n / 2)
    };
    Ok(PartitionValue::exact(
        value,
        Method::Enumeration,
        grid.spec(),
        w,
    ))
}

/// Weighted sum over all matchings, each unmatched vertex contributing `x`.
pub fn enumerate_matchings(grid: &OrientedGrid, w: &WeightSpec) -> Result<PartitionValue> {
    let n = grid.num_vertices();
    check_cap(n, MATCHING_CAP)?;
    let g = Weighted::new(grid, w)?;
    let s = all_matchings_rescaled(&g, n)?;
    Ok(PartitionValue::exact(
        s,
        Method::Enumeration,
        grid.spec(),
        w,
    ))
}

/// Scaled monomer-dimer sums are not homogeneous (k edges carry degree n − k),
/// so the sum is split by matching size.
fn all_matchings_rescaled(g: &Weighted, n: usize) -> Result<BigRational> {
    fn rec(
        g: &Weighted,
        mask: u64,
        full: u64,
        memo: &mut HashMap<u64, Vec<BigInt>>,
    ) -> Vec<BigInt> {
        if mask == full {
            return vec![BigInt::one()];
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let v = (!mask).trailing_zeros() as usize;
        let with_v = mask | (1 << v);
        // index k = number of matching edges
        let mut acc: Vec<BigInt> = rec(g, with_v, full, memo)
            .into_iter()
            .map(|c| c * &g.x)
            .collect();
        for &u in &g.nbrs[v] {
            if with_v & (1 << u) != 0 {
                continue;
            }
            let w = g.plain(v, u);
            if w.is_zero() {
                continue;
            }
            let sub = rec(g, with_v | (1 << u), full, memo);
            if acc.len() < sub.len() + 1 {
                acc.resize(sub.len() + 1, BigInt::zero());
            }
            for (k, c) in sub.into_iter().enumerate() {
                acc[k + 1] += c * w;
            }
        }
        memo.insert(mask, acc.clone());
        acc
    }
    let by_size = rec(g, 0, full_mask(n), &mut HashMap::new());
    let mut total = BigRational::zero();
    for (k, c) in by_size.into_iter().enumerate() {
        total += g.unscale(c, n - k);
    }
    Ok(total)
}

/// Sums of loop-vertex configuration weights, keyed by assigned-vertex mask.
struct LoopVertex<'a> {
    g: &'a Weighted,
    full: u32,
    memo: HashMap<u32, BigInt>,
}

impl LoopVertex<'_> {
    fn total(&mut self, mask: u32) -> BigInt {
        if mask == self.full {
            return BigInt::one();
        }
        if let Some(v) = self.memo.get(&mask) {
            return v.clone();
        }
        let g = self.g;
        let v = (!mask).trailing_zeros() as usize;
        let with_v = mask | (1 << v);
        let mut sum = &g.x * self.total(with_v);
        for &u in &g.nbrs[v] {
            if with_v & (1 << u) != 0 {
                continue;
            }
            let s = g.signed(v, u);
            if s.is_zero() {
                continue;
            }
            sum += &s * &s * self.total(with_v | (1 << u));
        }
        let mut loops: Vec<(u32, BigInt)> = Vec::new();
        collect_loops(
            g,
            v,
            with_v,
            &mut vec![v],
            BigInt::one(),
            &mut loops,
            &mut None,
        );
        for (used, w) in loops {
            sum -= w * self.total(used);
        }
        self.memo.insert(mask, sum.clone());
        sum
    }
}

/// Every directed simple cycle of even length ≥ 4 through `start` avoiding `used`;
/// yields the covered mask and `∏ s` along the cycle (without the leading minus),
/// plus the cycle itself when `paths` is given.
fn collect_loops(
    g: &Weighted,
    start: usize,
    used: u32,
    path: &mut Vec<usize>,
    prod: BigInt,
    out: &mut Vec<(u32, BigInt)>,
    paths: &mut Option<Vec<Vec<usize>>>,
) {
    let cur = *path.last().unwrap();
    for &u in &g.nbrs[cur] {
        let s = g.signed(cur, u);
        if s.is_zero() {
            continue;
        }
        if u == start && path.len() >= 4 && path.len() % 2 == 0 {
            out.push((used, &prod * &s));
            if let Some(p) = paths {
                p.push(path.clone());
            }
            continue;
        }
        if used & (1 << u) != 0 {
            continue;
        }
        path.push(u);
        collect_loops(g, start, used | (1 << u), path, &prod * &s, out, paths);
        path.pop();
    }
}

/// Sum of `w(C)` over all loop-vertex configurations.
pub fn enumerate_loop_vertex(grid: &OrientedGrid, w: &WeightSpec) -> Result<PartitionValue> {
    let n = grid.num_vertices();
    check_cap(n, LOOP_VERTEX_CAP)?;
    let g = Weighted::new(grid, w)?;
    let mut lv = LoopVertex {
        g: &g,
        full: ((1u64 << n) - 1) as u32,
        memo: HashMap::new(),
    };
    let total = lv.total(0);
    Ok(PartitionValue::exact(
        g.unscale(total, n),
        Method::Enumeration,
        grid.spec(),
        w,
    ))
}

/// One loop-vertex configuration; labels are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopVertexConfig {
    pub isolated: Vec<usize>,
    pub doubled: Vec<(usize, usize)>,
    pub loops: Vec<Vec<usize>>,
    pub weight: BigRational,
}

impl LoopVertexConfig {
    /// `isolated=[..] doubled=[u-v ..] loops=[(a b c d) ..] weight=w`
    pub fn dump_line(&self) -> String {
        let mut s = String::from("isolated=[");
        s.push_str(
            &self
                .isolated
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        s.push_str("] doubled=[");
        s.push_str(
            &self
                .doubled
                .iter()
                .map(|(u, v)| format!("{u}-{v}"))
                .collect::<Vec<_>>()
                .join(","),
        );
        s.push_str("] loops=[");
        let loops: Vec<String> = self
            .loops
            .iter()
            .map(|l| {
                format!(
                    "({})",
                    l.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                )
            })
            .collect();
        s.push_str(&loops.join(","));
        let _ = write!(s, "] weight={}", self.weight);
        s
    }
}

/// Calls `visit` on every configuration (no memoisation; small grids only).
pub fn visit_loop_vertex_configs(
    grid: &OrientedGrid,
    w: &WeightSpec,
    mut visit: impl FnMut(&LoopVertexConfig),
) -> Result<usize> {
    let n = grid.num_vertices();
    check_cap(n, LOOP_VERTEX_CAP)?;
    let g = Weighted::new(grid, w)?;
    let mut cfg = LoopVertexConfig {
        isolated: Vec::new(),
        doubled: Vec::new(),
        loops: Vec::new(),
        weight: BigRational::zero(),
    };
    let mut count = 0;
    visit_rec(
        &g,
        0,
        ((1u64 << n) - 1) as u32,
        BigInt::one(),
        &mut cfg,
        &mut |c| {
            count += 1;
            visit(c)
        },
        n,
    );
    Ok(count)
}

fn visit_rec(
    g: &Weighted,
    mask: u32,
    full: u32,
    weight: BigInt,
    cfg: &mut LoopVertexConfig,
    visit: &mut dyn FnMut(&LoopVertexConfig),
    n: usize,
) {
    if mask == full {
        cfg.weight = g.unscale(weight, n);
        visit(cfg);
        return;
    }
    let v = (!mask).trailing_zeros() as usize;
    let with_v = mask | (1 << v);
    cfg.isolated.push(v + 1);
    visit_rec(g, with_v, full, &weight * &g.x, cfg, visit, n);
    cfg.isolated.pop();
    for &u in &g.nbrs[v] {
        if with_v & (1 << u) != 0 {
            continue;
        }
        let s = g.signed(v, u);
        if s.is_zero() {
            continue;
        }
        cfg.doubled.push((v + 1, u + 1));
        visit_rec(g, with_v | (1 << u), full, &weight * &s * &s, cfg, visit, n);
        cfg.doubled.pop();
    }
    let mut found = Vec::new();
    let mut paths = Some(Vec::new());
    collect_loops(
        g,
        v,
        with_v,
        &mut vec![v],
        BigInt::one(),
        &mut found,
        &mut paths,
    );
    for ((used, p), path) in found.into_iter().zip(paths.unwrap_or_default()) {
        cfg.loops.push(path.iter().map(|x| x + 1).collect());
        visit_rec(g, used, full, -(&weight * p), cfg, visit, n);
        cfg.loops.pop();
    }
}

/// Orientation based weight `−∏ s(v_i, v_{i+1})` of a directed loop given by 1-based labels.
pub fn loop_weight(grid: &OrientedGrid, w: &WeightSpec, lp: &[usize]) -> Result<BigRational> {
    check_loop(grid, lp)?;
    w.check_dim(grid.spec().dim())?;
    let mut prod = BigRational::one();
    for i in 0..lp.len() {
        let (u, v) = (lp[i], lp[(i + 1) % lp.len()]);
        let mut s = BigRational::zero();
        for e in grid.edges() {
            if (e.tail, e.head) == (u, v) {
                s += &w.a[e.axis - 1];
            } else if (e.tail, e.head) == (v, u) {
                s -= &w.a[e.axis - 1];
            }
        }
        prod *= s;
    }
    Ok(-prod)
}

fn check_loop(grid: &OrientedGrid, lp: &[usize]) -> Result<()> {
    let n = grid.num_vertices();
    if lp.len() < 3 {
        return Err(Error::InvalidInput(
            "a loop needs at least three vertices".into(),
        ));
    }
    let mut seen = vec![false; n + 1];
    for &v in lp {
        if v == 0 || v > n {
            return Err(Error::InvalidInput(format!("label {v} out of range")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidInput(format!("loop revisits {v}")));
        }
    }
    for i in 0..lp.len() {
        let (u, v) = (lp[i], lp[(i + 1) % lp.len()]);
        if !grid
            .edges()
            .iter()
            .any(|e| e.u() == u.min(v) && e.v() == u.max(v))
        {
            return Err(Error::InvalidInput(format!("{u} and {v} are not adjacent")));
        }
    }
    Ok(())
}

/// Whether lattice point `p` lies strictly inside the lattice polygon `poly`
/// (exact ray casting towards +x).
fn inside(poly: &[(i64, i64)], p: (i64, i64)) -> bool {
    let mut crossings = 0;
    for i in 0..poly.len() {
        let (x1, y1) = poly[i];
        let (x2, y2) = poly[(i + 1) % poly.len()];
        if (y1 > p.1) != (y2 > p.1) {
            // x of the crossing is x1 + (p.1 − y1)(x2 − x1)/(y2 − y1); compare without division
            let lhs = (p.0 - x1) * (y2 - y1);
            let rhs = (p.1 - y1) * (x2 - x1);
            let right_of_point = if y2 > y1 { rhs > lhs } else { rhs < lhs };
            if right_of_point {
                crossings += 1;
            }
        }
    }
    crossings % 2 == 1
}

/// `(−1)^{#enclosed vertices} · ∏ edge weights` for a loop in a two-dimensional free grid.
pub fn plane_loop_weight(grid: &OrientedGrid, w: &WeightSpec, lp: &[usize]) -> Result<BigRational> {
    let spec = grid.spec();
    if spec.dim() != 2 || spec.mode() != Mode::Free {
        return Err(Error::Unsupported(format!(
            "plane loop weights need a two-dimensional free grid, got {spec}"
        )));
    }
    check_loop(grid, lp)?;
    w.check_dim(2)?;
    let coord = |l: usize| {
        let c = &grid.vertex(l).coords;
        (c[0] as i64, c[1] as i64)
    };
    let poly: Vec<(i64, i64)> = lp.iter().map(|&l| coord(l)).collect();
    let on_loop: Vec<bool> = {
        let mut m = vec![false; grid.num_vertices() + 1];
        for &l in lp {
            m[l] = true;
        }
        m
    };
    let enclosed = (1..=grid.num_vertices())
        .filter(|&l| !on_loop[l] && inside(&poly, coord(l)))
        .count();
    let mut prod = BigRational::one();
    for i in 0..lp.len() {
        let (u, v) = (lp[i], lp[(i + 1) % lp.len()]);
        let e = grid
            .edges()
            .iter()
            .find(|e| e.u() == u.min(v) && e.v() == u.max(v))
            .expect("checked adjacency");
        prod *= &w.a[e.axis - 1];
    }
    Ok(if enclosed % 2 == 1 { -prod } else { prod })
}
