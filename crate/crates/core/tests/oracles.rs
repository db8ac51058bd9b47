use gridmono::cartesian::agrees_with_grid;
use gridmono::det::pfaffian_exact;
use gridmono::grid::{orient_dashed_edges_with, DashedSeed};
use gridmono::kasteleyn::dimer_matrix;
use gridmono::oracle::{loop_weight, plane_loop_weight, visit_loop_vertex_configs};
use gridmono::weights::WeightSpec;
use gridmono::{
    build_grid, build_k_from_graph, det_exact, enumerate_loop_vertex, enumerate_matchings,
    enumerate_perfect_matchings, verify_odd_orientation, GridSpec, Mode, OrientedGrid,
};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn det_of(g: &OrientedGrid, w: &WeightSpec) -> BigRational {
    det_exact(&build_k_from_graph(g, w).unwrap().matrix).unwrap()
}

fn adjacency(g: &OrientedGrid) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.num_vertices() + 1];
    for e in g.edges() {
        if !adj[e.tail].contains(&e.head) {
            adj[e.tail].push(e.head);
            adj[e.head].push(e.tail);
        }
    }
    adj
}

/// Directed simple cycles of length in `4..=max_len`, each once per direction,
/// rooted at their smallest label.
fn simple_cycles(g: &OrientedGrid, max_len: usize) -> Vec<Vec<usize>> {
    fn go(adj: &[Vec<usize>], path: &mut Vec<usize>, max_len: usize, out: &mut Vec<Vec<usize>>) {
        let (root, last) = (path[0], *path.last().unwrap());
        for &u in &adj[last] {
            if u == root && path.len() >= 4 {
                out.push(path.clone());
            } else if u > root && !path.contains(&u) && path.len() < max_len {
                path.push(u);
                go(adj, path, max_len, out);
                path.pop();
            }
        }
    }
    let adj = adjacency(g);
    let mut out = Vec::new();
    for v in 1..=g.num_vertices() {
        go(&adj, &mut vec![v], max_len, &mut out);
    }
    out
}

fn spec_strategy(max_n: usize) -> impl Strategy<Value = GridSpec> {
    (prop::collection::vec(1usize..5, 1..4), 0usize..5).prop_filter_map(
        "invalid",
        move |(dims, m)| {
            let d = dims.len();
            let mode = match m {
                0 => Mode::Free,
                1 => Mode::Cylindrical(1),
                2 => Mode::Cylindrical(d),
                3 => Mode::Moebius,
                _ => Mode::Klein,
            };
            GridSpec::new(dims, mode)
                .ok()
                .filter(|s| s.num_vertices() <= max_n && build_grid(s).is_ok())
        },
    )
}

fn small_weights(d: usize) -> impl Strategy<Value = WeightSpec> {
    (-3i64..4, prop::collection::vec(-3i64..4, d)).prop_map(|(x, a)| WeightSpec::from_ints(x, &a))
}

#[test]
fn plane_weights_match_orientation_weights_on_q44() {
    let g = build_grid(&GridSpec::new(vec![4, 4], Mode::Free).unwrap()).unwrap();
    let w = WeightSpec::parse("1", "2,3").unwrap();
    let cycles = simple_cycles(&g, 8);
    assert!(cycles.len() > 40);
    for c in &cycles {
        assert_eq!(
            loop_weight(&g, &w, c).unwrap(),
            plane_loop_weight(&g, &w, c).unwrap(),
            "{c:?}"
        );
    }
}

#[test]
fn even_loops_weigh_the_same_in_both_directions() {
    for (dims, mode) in [
        (vec![4, 4], Mode::Toroidal),
        (vec![2, 2, 2], Mode::Klein),
        (vec![4, 2, 2], Mode::Moebius),
    ] {
        let g = build_grid(&GridSpec::new(dims, mode).unwrap()).unwrap();
        let w = WeightSpec::from_ints(1, &vec![2; g.spec().dim()]).with_x(q(1));
        let w = WeightSpec::new(
            w.x,
            w.a.iter()
                .enumerate()
                .map(|(i, a)| a + q(i as i64))
                .collect(),
        );
        for c in simple_cycles(&g, 6) {
            if c.len() % 2 == 0 {
                let rev: Vec<usize> = c.iter().rev().copied().collect();
                assert_eq!(
                    loop_weight(&g, &w, &c).unwrap(),
                    loop_weight(&g, &w, &rev).unwrap()
                );
            }
        }
    }
}

#[test]
fn square_loops_are_positive_at_unit_weights() {
    for (dims, mode) in [
        (vec![4, 4], Mode::Free),
        (vec![4, 4], Mode::Toroidal),
        (vec![4, 4, 4], Mode::Moebius),
        (vec![4, 4, 4], Mode::Klein),
    ] {
        let g = build_grid(&GridSpec::new(dims, mode).unwrap()).unwrap();
        let w = WeightSpec::unit(g.spec().dim());
        for sq in g.squares() {
            let lp: Vec<usize> = sq.vertices.to_vec();
            assert_eq!(loop_weight(&g, &w, &lp).unwrap(), q(1), "{lp:?}");
        }
    }
}

#[test]
fn visitor_and_memo_totals_agree() {
    let g = build_grid(&GridSpec::new(vec![2, 3, 2], Mode::Moebius).unwrap()).unwrap();
    let w = WeightSpec::from_ints(2, &[1, 3, -1]);
    let mut total = BigRational::zero();
    let count = visit_loop_vertex_configs(&g, &w, |c| total += &c.weight).unwrap();
    assert!(count > 0);
    assert_eq!(
        &total,
        enumerate_loop_vertex(&g, &w).unwrap().value.rational()
    );
    assert_eq!(total, det_of(&g, &w));
}

#[test]
fn planar_pfaffian_counts_dimers() {
    for dims in [vec![2, 2], vec![4, 3], vec![4, 4], vec![6, 5], vec![8, 8]] {
        let g = build_grid(&GridSpec::new(dims.clone(), Mode::Free).unwrap()).unwrap();
        let w = WeightSpec::from_ints(1, &[1, 2]);
        let pf = pfaffian_exact(&dimer_matrix(&g, &w).unwrap().matrix).unwrap();
        assert_eq!(
            &pf.abs(),
            enumerate_perfect_matchings(&g, &w)
                .unwrap()
                .value
                .rational(),
            "{dims:?}"
        );
    }
}

#[test]
fn torus_4x4_dimer_gap() {
    // the single-Pfaffian count on the torus misses 16 coverings at unit weights
    let g = build_grid(&GridSpec::new(vec![4, 4], Mode::Toroidal).unwrap()).unwrap();
    let w = WeightSpec::unit(2);
    let pf = pfaffian_exact(&dimer_matrix(&g, &w).unwrap().matrix).unwrap();
    assert_eq!(pf.abs(), q(256));
    assert_eq!(
        enumerate_perfect_matchings(&g, &w)
            .unwrap()
            .value
            .rational(),
        &q(272)
    );
    let w = WeightSpec::from_ints(1, &[1, 2]);
    let pf = pfaffian_exact(&dimer_matrix(&g, &w).unwrap().matrix).unwrap();
    assert_eq!(pf.abs(), q(10000));
    assert_eq!(
        enumerate_perfect_matchings(&g, &w)
            .unwrap()
            .value
            .rational(),
        &q(10256)
    );
}

#[test]
fn odd_cyclic_klein_grids() {
    let g = build_grid(&GridSpec::new(vec![4, 3], Mode::Klein).unwrap()).unwrap();
    assert!(!verify_odd_orientation(&g));
    assert!(build_grid(&GridSpec::new(vec![2, 3, 2], Mode::Klein).unwrap()).is_err());
    let g = build_grid(&GridSpec::new(vec![3, 3], Mode::Toroidal).unwrap()).unwrap();
    assert!(!verify_odd_orientation(&g));
}

#[test]
fn inward_seed_gives_another_odd_orientation() {
    for dims in [vec![2, 2, 2], vec![4, 2, 2], vec![2, 4, 2], vec![4, 2, 4]] {
        for mode in [Mode::Moebius, Mode::Klein] {
            let spec = GridSpec::new(dims.clone(), mode).unwrap();
            let out = build_grid(&spec).unwrap();
            let inw = orient_dashed_edges_with(&out, DashedSeed::Inward).unwrap();
            assert!(verify_odd_orientation(&inw));
            assert_ne!(out, inw);
            let w = WeightSpec::from_ints(1, &[2, 3, 5]);
            assert_eq!(det_of(&out, &w), det_of(&inw, &w), "{dims:?} {mode:?}");
        }
    }
}

#[test]
fn cartesian_products_match_builder() {
    for (dims, mode) in [
        (vec![4, 2, 2], Mode::Free),
        (vec![4, 3], Mode::Cylindrical(1)),
        (vec![4, 4], Mode::Toroidal),
        (vec![3, 4, 2], Mode::Cylindrical(2)),
        (vec![2, 2, 2, 2], Mode::Cylindrical(4)),
    ] {
        let g = build_grid(&GridSpec::new(dims.clone(), mode).unwrap()).unwrap();
        assert!(agrees_with_grid(&g).unwrap(), "{dims:?} {mode:?}");
    }
}

#[test]
fn oracle_caps() {
    let g = build_grid(&GridSpec::new(vec![4, 4], Mode::Free).unwrap()).unwrap();
    assert!(enumerate_loop_vertex(&g, &WeightSpec::unit(2)).is_err());
    assert!(enumerate_matchings(&g, &WeightSpec::unit(2)).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn loop_vertex_expansion_is_the_determinant(s in spec_strategy(12).prop_flat_map(|s| {
        let d = s.dim();
        (Just(s), small_weights(d))
    })) {
        let (s, w) = s;
        let g = build_grid(&s).unwrap();
        prop_assume!(verify_odd_orientation(&g));
        let z = enumerate_loop_vertex(&g, &w).unwrap();
        prop_assert_eq!(z.value.rational(), &det_of(&g, &w));
    }

    #[test]
    fn without_monopoles_the_expansion_is_a_pfaffian_square(s in spec_strategy(12).prop_flat_map(|s| {
        let d = s.dim();
        (Just(s), small_weights(d))
    })) {
        let (s, w) = s;
        prop_assume!(s.num_vertices() % 2 == 0);
        let g = build_grid(&s).unwrap();
        let w0 = w.with_x(BigRational::zero());
        let pf = pfaffian_exact(&dimer_matrix(&g, &w0).unwrap().matrix).unwrap();
        let z = enumerate_loop_vertex(&g, &w0).unwrap();
        prop_assert_eq!(z.value.rational(), &(&pf * &pf));
    }

    #[test]
    fn matchings_at_zero_edge_weight_are_trivial(s in spec_strategy(20), x in -4i64..5) {
        let g = build_grid(&s).unwrap();
        let w = WeightSpec::from_ints(x, &vec![0; s.dim()]);
        let n = s.num_vertices();
        let z = enumerate_matchings(&g, &w).unwrap();
        prop_assert_eq!(z.value.rational(), &num_traits::pow(q(x), n));
    }
}
