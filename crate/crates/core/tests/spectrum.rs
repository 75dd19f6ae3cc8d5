use proptest::prelude::*;

use cuspcount::formal_curves::{
    check_assumption_a, check_assumption_b, enumerate_symp_curves, symp_energy, symp_index,
};
use cuspcount::repro::oracle::{self, Pair, PairShape};
use cuspcount::spectrum::{capacity, cz_index, delta_path, orbit_at, rank_of, spectrum};
use cuspcount::{EllipsoidShape, PerturbedRational, ReebOrbit};

fn pair_shape(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PairShape> {
    prop::collection::vec((1i64..=30, -3i64..=3).prop_map(|(r, c)| Pair(r, c)), dims)
        .prop_map(PairShape)
        .prop_filter("tie-free", PairShape::is_tie_free)
}

/// Multisets `i_1 ≤ … ≤ i_k` with `k ≥ 2` and `Σ i + k − 1 ≤ top`.
fn rank_multisets(top: usize) -> Vec<Vec<usize>> {
    fn extend(min: usize, current: &mut Vec<usize>, top: usize, out: &mut Vec<Vec<usize>>) {
        let used: usize = current.iter().sum::<usize>() + current.len();
        if current.len() >= 2 {
            out.push(current.clone());
        }
        // Adding a part r costs r + 1 against the budget top + 1.
        for r in min.. {
            if used + r + 1 > top + 1 {
                break;
            }
            current.push(r);
            extend(r, current, top, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(1, &mut Vec::new(), top, &mut out);
    out
}

fn sum_actions(values: &[Pair], ranks: &[usize]) -> Pair {
    ranks
        .iter()
        .fold(Pair(0, 0), |acc, &r| acc.plus(values[r - 1]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_matches_sorted_multiples(a in pair_shape(2..=4)) {
        let shape = a.to_shape();
        let got = spectrum(&shape, 30).unwrap();
        let want = oracle::spectrum(&a, 30);
        for (entry, (value, axis, mult)) in got.iter().zip(&want) {
            prop_assert_eq!(entry.orbit, ReebOrbit::new(*axis, *mult as u64));
            prop_assert_eq!(&entry.action, &value.to_perturbed());
        }
    }

    #[test]
    fn ranks_and_orbits_are_inverse(a in pair_shape(2..=4), k in 1usize..=40) {
        let shape = a.to_shape();
        let orbit = orbit_at(&shape, k).unwrap();
        prop_assert_eq!(rank_of(&shape, orbit).unwrap(), k);
        prop_assert_eq!(cz_index(&shape, orbit).unwrap(), shape.dim() as i64 - 1 + 2 * k as i64);
        prop_assert!(capacity(&shape, k).unwrap() < capacity(&shape, k + 1).unwrap());
    }

    #[test]
    fn scaling_scales_actions(a in pair_shape(2..=3), lambda in 1i64..=6) {
        let shape = a.to_shape();
        let l = PerturbedRational::from_int(lambda);
        let scaled = shape.scaled(&l).unwrap();
        for (x, y) in spectrum(&shape, 20).unwrap().iter().zip(&spectrum(&scaled, 20).unwrap()) {
            prop_assert_eq!(x.orbit, y.orbit);
            prop_assert_eq!(&(&x.action * &l), &y.action);
        }
    }

    #[test]
    fn delta_path_matches_compositions(a in pair_shape(2..=3), k in 1usize..=12) {
        let (tuple, _, unique) = oracle::delta_tuple(&a, k);
        prop_assume!(unique);
        let got = delta_path(&a.to_shape(), k).unwrap();
        prop_assert_eq!(got.entries(), tuple.as_slice());
        prop_assert_eq!(got.sum() as usize, a.dim() + k - 1);
    }

    #[test]
    fn assumptions_match_explicit_multisets(a in pair_shape(2..=3), c1 in 2i64..=24) {
        let top = (c1 - 1) as usize;
        let values: Vec<Pair> = oracle::spectrum(&a, top).into_iter().map(|e| e.0).collect();
        let sets = rank_multisets(top);
        let holds_a = sets.iter().all(|s| {
            let target = s.iter().sum::<usize>() + s.len() - 1;
            sum_actions(&values, s) <= values[target - 1]
        });
        let holds_b = sets
            .iter()
            .filter(|s| s.iter().sum::<usize>() + s.len() - 1 == top)
            .all(|s| sum_actions(&values, s) < values[top - 1]);
        let shape = a.to_shape();
        prop_assert_eq!(check_assumption_a(&shape, c1).unwrap().holds(), holds_a);
        prop_assert_eq!(check_assumption_b(&shape, c1).unwrap().holds(), holds_b);
    }

    #[test]
    fn planar_low_index_curves_have_even_nonnegative_index(a in pair_shape(2..=2), k in 1usize..=10) {
        let shape = a.to_shape();
        let neg = orbit_at(&shape, k).unwrap();
        for curve in enumerate_symp_curves(&shape, neg, 2).unwrap() {
            prop_assert!(!symp_energy(&curve).signum().is_lt());
            let index = symp_index(&curve).unwrap();
            prop_assert!(index >= 0);
            prop_assert_eq!(index % 2, 0);
        }
    }
}

#[test]
fn rank_multisets_are_complete() {
    // top = 5: parts (i, j) with i + j ≤ 4, and (1, 1, 1).
    let sets = rank_multisets(5);
    assert_eq!(
        sets,
        vec![
            vec![1, 1],
            vec![1, 1, 1],
            vec![1, 2],
            vec![1, 3],
            vec![2, 2]
        ]
    );
}

#[test]
fn tied_shapes_are_reported() {
    let tied = EllipsoidShape::from_ints(&[2, 2]).unwrap();
    assert!(spectrum(&tied, 2).unwrap_err().is_ambiguity());
    let tied = EllipsoidShape::from_ints(&[2, 4]).unwrap();
    assert!(delta_path(&tied, 3).unwrap_err().is_ambiguity());
}
