use gridmono::det::{bareiss, det_multimodular, det_real, pfaffian_exact};
use gridmono::kasteleyn::{det_kron_identity_check, dimer_matrix};
use gridmono::matrix::{parse_matrix_dump, Matrix, QMatrix};
use gridmono::weights::WeightSpec;
use gridmono::{build_grid, build_k_from_graph, build_k_kronecker, det_exact, GridSpec, Mode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = GridSpec> {
    let dims = prop::collection::vec(1usize..5, 1..4);
    (dims, 0usize..5).prop_filter_map("invalid spec", |(dims, m)| {
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
            .filter(|s| s.num_vertices() <= 24 && build_grid(s).is_ok())
    })
}

fn weights_strategy(d: usize) -> impl Strategy<Value = WeightSpec> {
    let r = || (-6i64..7, 1i64..5).prop_map(|(n, q)| BigRational::new(n.into(), q.into()));
    (r(), prop::collection::vec(r(), d)).prop_map(|(x, a)| WeightSpec::new(x, a))
}

fn spec_and_weights() -> impl Strategy<Value = (GridSpec, WeightSpec)> {
    spec_strategy().prop_flat_map(|s| {
        let d = s.dim();
        (Just(s), weights_strategy(d))
    })
}

fn even_spec_and_weights() -> impl Strategy<Value = (GridSpec, WeightSpec)> {
    (
        prop::collection::vec(1usize..3, 1..4),
        0usize..3,
        any::<bool>(),
    )
        .prop_filter_map("no block form", |(half, m, twist)| {
            let dims: Vec<usize> = half.iter().map(|h| 2 * h).collect();
            let d = dims.len();
            let mode = match (twist && d == 3, m) {
                (true, 0) => Mode::Moebius,
                (true, _) => Mode::Klein,
                (false, 0) => Mode::Free,
                (false, 1) => Mode::Cylindrical(1),
                (false, _) => Mode::Cylindrical(d),
            };
            GridSpec::new(dims, mode).ok()
        })
        .prop_flat_map(|s| {
            let d = s.dim();
            (Just(s), weights_strategy(d))
        })
}

fn k_of(spec: &GridSpec, w: &WeightSpec) -> QMatrix {
    build_k_from_graph(&build_grid(spec).unwrap(), w)
        .unwrap()
        .matrix
}

#[test]
fn matrix_dump_roundtrip() {
    let s = GridSpec::new(vec![2, 2, 2], Mode::Klein).unwrap();
    let w = WeightSpec::parse("1/2", "1,-3,7/5").unwrap();
    let k = build_k_from_graph(&build_grid(&s).unwrap(), &w).unwrap();
    assert_eq!(parse_matrix_dump(&k.dump()).unwrap(), k.matrix);
}

#[test]
fn bareiss_and_multimodular_agree_on_grid_matrices() {
    let s = GridSpec::new(vec![6, 6], Mode::Toroidal).unwrap();
    let k = k_of(&s, &WeightSpec::from_ints(3, &[2, 5]));
    let m: Matrix<BigInt> = k.map(|v| v.to_integer());
    assert_eq!(bareiss(&m), det_multimodular(&m));
}

#[test]
fn pfaffian_beyond_expansion_size() {
    // 6x6 free grid at unit weights carries 6728 dimer coverings
    let s = GridSpec::new(vec![6, 6], Mode::Free).unwrap();
    let g = build_grid(&s).unwrap();
    let pf = pfaffian_exact(&dimer_matrix(&g, &WeightSpec::unit(2)).unwrap().matrix).unwrap();
    assert_eq!(pf.abs(), BigRational::from_integer(6728.into()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shifted_antisymmetric((s, w) in spec_and_weights()) {
        let k = build_k_from_graph(&build_grid(&s).unwrap(), &w).unwrap();
        prop_assert!(k.is_shifted_antisymmetric());
        for i in 0..k.order() {
            prop_assert_eq!(k.matrix.get(i, i), &w.x);
        }
    }

    #[test]
    fn pfaffian_squares_to_determinant((s, w) in spec_and_weights()) {
        prop_assume!(s.num_vertices() % 2 == 0);
        let g = build_grid(&s).unwrap();
        let k0 = dimer_matrix(&g, &w).unwrap().matrix;
        let pf = pfaffian_exact(&k0).unwrap();
        prop_assert_eq!(&pf * &pf, det_exact(&k0).unwrap());
    }

    #[test]
    fn real_determinant_tracks_exact((s, w) in spec_and_weights()) {
        let k = k_of(&s, &w);
        let exact = det_exact(&k).unwrap();
        let real = det_real(&k, 192).unwrap();
        let diff = (real.to_rational() - &exact).abs();
        let scale: BigRational = (0..k.rows())
            .map(|i| k.row(i).iter().map(|v| v.abs()).sum::<BigRational>() + BigRational::from_integer(1.into()))
            .product();
        prop_assert!(diff <= scale * BigRational::new(1.into(), BigInt::from(1) << 100),
            "{} vs {}", real.to_rational(), exact);
    }

    #[test]
    fn homogeneous_of_degree_n((s, w) in spec_and_weights(), t in 1i64..5, u in 1i64..4) {
        let tq = BigRational::new(t.into(), u.into());
        let scaled = WeightSpec::new(&w.x * &tq, w.a.iter().map(|a| a * &tq).collect());
        let n = s.num_vertices();
        prop_assert_eq!(
            det_exact(&k_of(&s, &scaled)).unwrap(),
            det_exact(&k_of(&s, &w)).unwrap() * num_traits::pow(tq, n)
        );
    }

    #[test]
    fn builders_agree((s, w) in even_spec_and_weights()) {
        let g = k_of(&s, &w);
        let k = build_k_kronecker(&s, &w).unwrap().matrix;
        prop_assert_eq!(&g, &k);
        prop_assert_eq!(det_exact(&g).unwrap(), det_exact(&k).unwrap());
    }

    #[test]
    fn kronecker_determinant_identity(a in prop::collection::vec(-4i64..5, 4), b in prop::collection::vec(-3i64..4, 9)) {
        let q = |v: &[i64], n: usize| QMatrix::from_fn(n, n, |i, j| BigRational::from_integer(v[i * n + j].into()));
        prop_assert!(det_kron_identity_check(&q(&a, 2), &q(&b, 3)).unwrap());
    }

    #[test]
    fn zero_weights_kill_everything_but_the_diagonal((s, w) in spec_and_weights()) {
        let w0 = WeightSpec::new(w.x.clone(), vec![BigRational::zero(); s.dim()]);
        prop_assert_eq!(det_exact(&k_of(&s, &w0)).unwrap(), num_traits::pow(w.x.clone(), s.num_vertices()));
    }
}
