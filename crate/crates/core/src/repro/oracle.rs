//! Brute-force reference implementations used by the acceptance criteria.
//!
//! Values `r + cδ` are stored as integer pairs `(r, c)` and compared
//! lexicographically, so nothing here goes through the library's number
//! type or search code.

use std::cmp::Ordering;

use num::rational::BigRational;
use num::traits::{One, Zero};

use crate::numbers::PerturbedRational;
use crate::spectrum::EllipsoidShape;

/// `r + cδ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair(pub i64, pub i64);

impl Pair {
    pub fn times(self, j: i64) -> Pair {
        Pair(self.0 * j, self.1 * j)
    }

    pub fn plus(self, other: Pair) -> Pair {
        Pair(self.0 + other.0, self.1 + other.1)
    }

    pub fn to_perturbed(self) -> PerturbedRational {
        PerturbedRational::from_int(self.0) + PerturbedRational::delta().scale_int(self.1)
    }
}

/// A shape whose factors are `r_s + c_s δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairShape(pub Vec<Pair>);

impl PairShape {
    pub fn to_shape(&self) -> EllipsoidShape {
        EllipsoidShape::new(self.0.iter().map(|p| p.to_perturbed()).collect())
            .expect("positive factors")
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// No two multiples `j a_i`, `j' a_s` with `i ≠ s` coincide.
    pub fn is_tie_free(&self) -> bool {
        let a = &self.0;
        (0..a.len()).all(|i| (i + 1..a.len()).all(|s| a[i].1 * a[s].0 != a[s].1 * a[i].0))
    }
}

/// The first `count` actions with their orbits `(axis, mult)`, from the
/// sorted list of all multiples `j a_i` with `j ≤ count`.
pub fn spectrum(a: &PairShape, count: usize) -> Vec<(Pair, usize, i64)> {
    let mut all: Vec<(Pair, usize, i64)> = Vec::with_capacity(count * a.dim());
    for (i, &x) in a.0.iter().enumerate() {
        for j in 1..=count as i64 {
            all.push((x.times(j), i + 1, j));
        }
    }
    all.sort();
    all.truncate(count);
    all
}

/// `max over i_1 + … + i_n = n + k − 1` of `min_s a_s i_s`, by listing
/// every composition. Returns the maximizer and whether it is unique.
pub fn delta_tuple(a: &PairShape, k: usize) -> (Vec<u64>, Pair, bool) {
    let n = a.dim();
    let total = (n + k - 1) as u64;
    let mut best: Option<(Pair, Vec<u64>)> = None;
    let mut unique = true;
    let mut current = vec![0u64; n];
    compositions(total, 0, &mut current, &mut |tuple| {
        let value = tuple
            .iter()
            .zip(&a.0)
            .map(|(&i, x)| x.times(i as i64))
            .min()
            .expect("n ≥ 1");
        match &best {
            Some((b, _)) if value < *b => {}
            Some((b, _)) if value == *b => unique = false,
            _ => {
                best = Some((value, tuple.to_vec()));
                unique = true;
            }
        }
    });
    let (value, tuple) = best.expect("at least one composition");
    (tuple, value, unique)
}

fn compositions(
    remaining: u64,
    slot: usize,
    current: &mut Vec<u64>,
    visit: &mut impl FnMut(&[u64]),
) {
    let n = current.len();
    if slot + 1 == n {
        if remaining >= 1 {
            current[slot] = remaining;
            visit(current);
        }
        return;
    }
    let slots_after = (n - slot - 1) as u64;
    for v in 1..=remaining.saturating_sub(slots_after) {
        current[slot] = v;
        compositions(remaining - v, slot + 1, current, visit);
    }
}

/// `⌊x / y⌋` for positive `x`, `y` with `δ` infinitesimal.
pub fn floor_pair(x: Pair, y: Pair) -> i64 {
    let base = x.0.div_euclid(y.0);
    if x.0.rem_euclid(y.0) != 0 {
        return base;
    }
    // x − base·y has zero real part; its sign is the sign of the δ part.
    if x.1 - base * y.1 >= 0 {
        base
    } else {
        base - 1
    }
}

/// `CZ(ν_i^j) = (n − 1) + 2j + 2 Σ_{s ≠ i} ⌊j a_i / a_s⌋`.
pub fn cz(a: &PairShape, axis: usize, mult: i64) -> i64 {
    let n = a.dim() as i64;
    let x = a.0[axis - 1].times(mult);
    let floors: i64 = (0..a.dim())
        .filter(|&s| s != axis - 1)
        .map(|s| floor_pair(x, a.0[s]))
        .sum();
    n - 1 + 2 * mult + 2 * floors
}

/// Positive-end multisets `(axis, mult)` of genus-zero curves in the
/// symplectization of a four-dimensional ellipsoid with negative end `neg`,
/// nonnegative energy and index `≤ 0`.
///
/// For `n = 2` the index is `k − 1 + Σ CZ⁺ − CZ⁻`, so every positive end
/// costs `CZ + 1 ≥ 4` and the search is finite: only orbits with
/// `CZ ≤ CZ⁻` can appear.
pub fn low_index_curves_planar(a: &PairShape, neg: (usize, i64)) -> Vec<Vec<(usize, i64)>> {
    assert_eq!(a.dim(), 2, "planar shapes only");
    let cz_neg = cz(a, neg.0, neg.1);
    let neg_action = a.0[neg.0 - 1].times(neg.1);
    let mut orbits = Vec::new();
    for axis in 1..=2 {
        for mult in 1.. {
            let c = cz(a, axis, mult);
            if c > cz_neg {
                break;
            }
            orbits.push((axis, mult, c, a.0[axis - 1].times(mult)));
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    // `budget` is what remains of the allowance Σ (CZ + 1) ≤ CZ⁻ + 1.
    fn walk(
        orbits: &[(usize, i64, i64, Pair)],
        start: usize,
        budget: i64,
        chosen: &mut Vec<usize>,
        neg_action: Pair,
        out: &mut Vec<Vec<(usize, i64)>>,
    ) {
        if !chosen.is_empty() {
            let action = chosen
                .iter()
                .fold(Pair(0, 0), |acc, &i| acc.plus(orbits[i].3));
            if action >= neg_action {
                out.push(chosen.iter().map(|&i| (orbits[i].0, orbits[i].1)).collect());
            }
        }
        for i in start..orbits.len() {
            let cost = orbits[i].2 + 1;
            if cost <= budget {
                chosen.push(i);
                walk(orbits, i, budget - cost, chosen, neg_action, out);
                chosen.pop();
            }
        }
    }
    walk(&orbits, 0, cz_neg + 1, &mut chosen, neg_action, &mut out);
    out
}

/// `Σ_i min_s a_s m^i_s − min_s a_s m_s` at `a = (x, y)`.
pub fn gap2(m: (i64, i64), parts: &[(i64, i64)], x: i64, y: i64) -> i64 {
    let f = |t: (i64, i64)| (x * t.0).min(y * t.1);
    parts.iter().map(|&t| f(t)).sum::<i64>() - f(m)
}

/// Searches directions `(b, a)` with `a/b` in the Farey sequence of the
/// given order, plus two extreme directions, for a negative gap.
pub fn grid_violation(m: (i64, i64), parts: &[(i64, i64)], order: i64) -> Option<(i64, i64)> {
    let extreme = 1000 * order;
    let mut dirs = vec![(extreme, 1), (1, extreme)];
    for b in 1..=order {
        for a in 1..=order {
            dirs.push((b, a));
        }
    }
    dirs.into_iter().find(|&(x, y)| gap2(m, parts, x, y) < 0)
}

/// `c_1 ± 1/(c_2 ± …)`.
pub fn eval_cf(coeffs: &[i64], sign: i64) -> Option<BigRational> {
    let mut value: Option<BigRational> = None;
    for &c in coeffs.iter().rev() {
        let c = BigRational::from_integer(c.into());
        value = Some(match value {
            None => c,
            Some(v) if v.is_zero() => return None,
            Some(v) => c + BigRational::from_integer(sign.into()) * (BigRational::one() / v),
        });
    }
    value
}

pub fn compare(a: &PerturbedRational, b: Pair) -> Ordering {
    a.cmp(&b.to_perturbed())
}
