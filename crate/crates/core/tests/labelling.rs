use gridmono::label::{boustrophedon_labels, coords_of, label_of};
use proptest::prelude::*;

/// Piecewise labels of `(p, q, r)` in `Q_{2n1,2n2,2n3}`, written out case by case.
fn explicit(n1: usize, n2: usize, p: usize, q: usize, r: usize) -> i64 {
    let (n1, n2, p) = (n1 as i64, n2 as i64, p as i64);
    let s = (q / 2) as i64;
    let t = (r / 2) as i64;
    match (q % 2, r % 2) {
        (1, 1) => 8 * t * n1 * n2 + 4 * s * n1 + p,
        (0, 1) => 8 * t * n1 * n2 + 4 * s * n1 - p + 1,
        (1, 0) => 8 * t * n1 * n2 - 4 * s * n1 - p + 1,
        _ => 8 * t * n1 * n2 - 4 * s * n1 + p,
    }
}

#[test]
fn frozen_422_labels() {
    let d = [4, 2, 2];
    assert_eq!(label_of(&d, &[1, 1, 1]), 1);
    assert_eq!(label_of(&d, &[2, 2, 1]), 7);
    assert_eq!(label_of(&d, &[3, 2, 2]), 11);
    assert_eq!(label_of(&d, &[1, 1, 2]), 16);
}

#[test]
fn q33_rows_snake() {
    let rows: Vec<Vec<usize>> = (1..=3)
        .map(|y| (1..=3).map(|x| label_of(&[3, 3], &[x, y])).collect())
        .collect();
    assert_eq!(rows, vec![vec![1, 2, 3], vec![6, 5, 4], vec![7, 8, 9]]);
}

#[test]
fn explicit_agrees_on_small_even_boxes() {
    for a in [2, 4, 6] {
        for b in [2, 4] {
            for c in [2, 4, 6] {
                let l = boustrophedon_labels(&[a, b, c]).unwrap();
                for (x, v) in l.iter() {
                    assert_eq!(explicit(a / 2, b / 2, x[0], x[1], x[2]), v as i64, "{x:?}");
                }
            }
        }
    }
}

#[test]
fn consecutive_labels_are_adjacent() {
    for dims in [vec![5], vec![3, 4], vec![2, 3, 3], vec![3, 2, 2, 2]] {
        let n: usize = dims.iter().product();
        for l in 1..n {
            let (a, b) = (coords_of(&dims, l), coords_of(&dims, l + 1));
            let dist: usize = a.iter().zip(&b).map(|(x, y)| x.abs_diff(*y)).sum();
            assert_eq!(dist, 1, "{dims:?} {l}");
        }
    }
}

#[test]
fn rejects_empty_and_zero() {
    assert!(boustrophedon_labels(&[]).is_err());
    assert!(boustrophedon_labels(&[3, 0]).is_err());
}

proptest! {
    #[test]
    fn labelling_is_bijective(dims in prop::collection::vec(1usize..7, 1..5)) {
        let l = boustrophedon_labels(&dims).unwrap();
        let n: usize = dims.iter().product();
        let mut seen = vec![false; n + 1];
        for (c, v) in l.iter() {
            prop_assert!(v >= 1 && v <= n);
            prop_assert!(!seen[v]);
            seen[v] = true;
            prop_assert_eq!(coords_of(&dims, v), c);
        }
        prop_assert_eq!(l.len(), n);
    }

    #[test]
    fn explicit_formula_matches(a in 1usize..6, b in 1usize..6, c in 1usize..6) {
        let dims = [2 * a, 2 * b, 2 * c];
        for (x, v) in boustrophedon_labels(&dims).unwrap().iter() {
            prop_assert_eq!(explicit(a, b, x[0], x[1], x[2]), v as i64);
        }
    }
}
