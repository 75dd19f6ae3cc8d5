//! Index and energy bookkeeping for formal curves, and the numerical
//! assumptions on `(a, c_1)` under which the ellipsoidal superpotential is a
//! robust count.
//!
//! A formal curve in the symplectization `R × ∂E(a)` is a pair of end
//! multisets; a formal curve in the cobordism `M_a` is a multiset of negative
//! ends together with a homology class. Only `c_1`, the area, the
//! self-intersection and the divisibility of the class ever enter the
//! formulas, so [`HomologySurrogate`] carries exactly those.

use num::integer::Integer;
use num::rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numbers::PerturbedRational;
use crate::spectrum::{
    action, capacity, cz_index, rank_of, spectrum, EllipsoidShape, LatticeTuple, ReebOrbit,
};

/// The numerical shadow of a class `A ∈ H_2(M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySurrogate {
    pub c1: i64,
    pub area: PerturbedRational,
    pub divisibility: u64,
    pub self_int: Option<i64>,
}

impl HomologySurrogate {
    pub fn new(c1: i64, area: PerturbedRational) -> Self {
        Self {
            c1,
            area,
            divisibility: 1,
            self_int: None,
        }
    }

    pub fn with_divisibility(mut self, divisibility: u64) -> Result<Self> {
        if divisibility == 0 {
            return Err(Error::domain("divisibility must be at least 1"));
        }
        self.divisibility = divisibility;
        Ok(self)
    }

    pub fn with_self_intersection(mut self, self_int: i64) -> Self {
        self.self_int = Some(self_int);
        self
    }
}

/// Genus zero formal curve in `R × ∂E(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplectizationCurve {
    pub positive_ends: Vec<ReebOrbit>,
    pub negative_ends: Vec<ReebOrbit>,
    pub ambient: EllipsoidShape,
}

impl SymplectizationCurve {
    pub fn new(
        ambient: EllipsoidShape,
        positive_ends: Vec<ReebOrbit>,
        negative_ends: Vec<ReebOrbit>,
    ) -> Result<Self> {
        if positive_ends.is_empty() {
            return Err(Error::domain("a formal curve needs a positive end"));
        }
        for orbit in positive_ends.iter().chain(&negative_ends) {
            action(&ambient, *orbit)?;
        }
        Ok(Self {
            positive_ends,
            negative_ends,
            ambient,
        })
    }

    /// One positive and one negative end on the same orbit.
    pub fn is_trivial_cylinder(&self) -> bool {
        self.positive_ends.len() == 1 && self.positive_ends == self.negative_ends
    }

    /// Ends sorted so that curves differing only by end order compare equal.
    pub fn canonical(mut self) -> Self {
        self.positive_ends.sort();
        self.negative_ends.sort();
        self
    }
}

/// Genus zero formal curve in `M_a` with negative ends only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobordismCurve {
    pub negative_ends: Vec<ReebOrbit>,
    pub klass: HomologySurrogate,
    pub ambient: EllipsoidShape,
}

impl CobordismCurve {
    pub fn new(
        ambient: EllipsoidShape,
        klass: HomologySurrogate,
        negative_ends: Vec<ReebOrbit>,
    ) -> Result<Self> {
        for orbit in &negative_ends {
            action(&ambient, *orbit)?;
        }
        Ok(Self {
            negative_ends,
            klass,
            ambient,
        })
    }
}

fn total_action(a: &EllipsoidShape, ends: &[ReebOrbit]) -> PerturbedRational {
    ends.iter()
        .map(|o| action(a, *o).expect("ends validated at construction"))
        .sum()
}

fn total_cz(a: &EllipsoidShape, ends: &[ReebOrbit]) -> Result<i64> {
    ends.iter().map(|o| cz_index(a, *o)).sum()
}

/// `Σ A(γ⁺) − Σ A(γ⁻)`; negative values mean the curve is not valid.
pub fn symp_energy(curve: &SymplectizationCurve) -> PerturbedRational {
    total_action(&curve.ambient, &curve.positive_ends)
        - total_action(&curve.ambient, &curve.negative_ends)
}

/// `(n − 3)(2 − k⁺ − k⁻) + Σ CZ(γ⁺) − Σ CZ(γ⁻)`.
pub fn symp_index(curve: &SymplectizationCurve) -> Result<i64> {
    let n = curve.ambient.dim() as i64;
    let ends = (curve.positive_ends.len() + curve.negative_ends.len()) as i64;
    Ok(
        (n - 3) * (2 - ends) + total_cz(&curve.ambient, &curve.positive_ends)?
            - total_cz(&curve.ambient, &curve.negative_ends)?,
    )
}

/// `(n − 3)(2 − k) + 2c_1(A) − Σ CZ(γ_i)`.
pub fn cob_index(curve: &CobordismCurve) -> Result<i64> {
    let n = curve.ambient.dim() as i64;
    let k = curve.negative_ends.len() as i64;
    Ok((n - 3) * (2 - k) + 2 * curve.klass.c1 - total_cz(&curve.ambient, &curve.negative_ends)?)
}

/// `[ω]·A − Σ A(γ_i)`.
pub fn cob_energy(curve: &CobordismCurve) -> PerturbedRational {
    &curve.klass.area - &total_action(&curve.ambient, &curve.negative_ends)
}

/// Result of checking one of the numerical assumptions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AssumptionCheck {
    Holds,
    /// `ranks` is a multiset `i_1 ≤ … ≤ i_k` whose action sum is too large
    /// compared with `M_target`.
    Fails {
        ranks: Vec<usize>,
        target: usize,
    },
}

impl AssumptionCheck {
    pub fn holds(&self) -> bool {
        matches!(self, AssumptionCheck::Holds)
    }
}

/// Maximum of `Σ M_{i_s}` over multisets of `parts` ranks with the given
/// rank sum, for every `parts ≥ 2` and rank sum up to `max_sum`.
///
/// `best[k][s]` is the maximum over multisets of exactly `k` ranks summing to
/// `s`, and `choice[k][s]` one rank of a maximizer, so witnesses can be read
/// back by peeling off one part at a time.
struct RankSumTable {
    best: Vec<Vec<Option<PerturbedRational>>>,
    choice: Vec<Vec<usize>>,
}

impl RankSumTable {
    fn build(values: &[PerturbedRational], max_parts: usize, max_sum: usize) -> Self {
        let mut best = vec![vec![None; max_sum + 1]; max_parts + 1];
        let mut choice = vec![vec![0usize; max_sum + 1]; max_parts + 1];
        best[0][0] = Some(PerturbedRational::zero());
        // Order of parts is irrelevant to the maximum, so a knapsack over
        // (parts, sum) suffices.
        for k in 1..=max_parts {
            for s in k..=max_sum {
                let mut top: Option<(PerturbedRational, usize)> = None;
                for r in 1..=(s - (k - 1)).min(values.len()) {
                    let Some(prev) = &best[k - 1][s - r] else {
                        continue;
                    };
                    let candidate = prev + &values[r - 1];
                    if top.as_ref().is_none_or(|(t, _)| candidate > *t) {
                        top = Some((candidate, r));
                    }
                }
                if let Some((value, r)) = top {
                    best[k][s] = Some(value);
                    choice[k][s] = r;
                }
            }
        }
        Self { best, choice }
    }

    fn witness(&self, parts: usize, sum: usize) -> Vec<usize> {
        let mut ranks = Vec::with_capacity(parts);
        let (mut k, mut s) = (parts, sum);
        while k > 0 {
            let r = self.choice[k][s];
            ranks.push(r);
            k -= 1;
            s -= r;
        }
        ranks.sort_unstable();
        ranks
    }
}

fn check_c1(c1: i64) -> Result<usize> {
    if c1 < 2 {
        return Err(Error::domain(format!("c1 = {c1} must be at least 2")));
    }
    Ok(c1 as usize)
}

/// Assumption A: `M_{i_1} + … + M_{i_k} ≤ M_{i_1+…+i_k+k−1}` for every
/// `k ≥ 2` with `Σ i_s + k − 1 ≤ c_1 − 1`.
pub fn check_assumption_a(a: &EllipsoidShape, c1: i64) -> Result<AssumptionCheck> {
    let top = check_c1(c1)? - 1;
    let values: Vec<_> = spectrum(a, top)?.into_iter().map(|e| e.action).collect();
    let max_parts = top.div_ceil(2).max(2);
    let table = RankSumTable::build(&values, max_parts, top);
    for target in 1..=top {
        for k in 2..=max_parts {
            // Σ i_s = target − k + 1 ≥ k
            if target + 1 < 2 * k {
                break;
            }
            let sum = target + 1 - k;
            if let Some(best) = &table.best[k][sum] {
                if *best > values[target - 1] {
                    return Ok(AssumptionCheck::Fails {
                        ranks: table.witness(k, sum),
                        target,
                    });
                }
            }
        }
    }
    Ok(AssumptionCheck::Holds)
}

/// Assumption B: strict inequality against `M_{c_1−1}` for every multiset
/// with `Σ i_s + k − 1 = c_1 − 1`, `k ≥ 2`.
pub fn check_assumption_b(a: &EllipsoidShape, c1: i64) -> Result<AssumptionCheck> {
    let target = check_c1(c1)? - 1;
    let values: Vec<_> = spectrum(a, target)?.into_iter().map(|e| e.action).collect();
    let max_parts = target.div_ceil(2).max(2);
    let table = RankSumTable::build(&values, max_parts, target);
    for k in 2..=max_parts {
        if target + 1 < 2 * k {
            break;
        }
        let sum = target + 1 - k;
        if let Some(best) = &table.best[k][sum] {
            if *best >= values[target - 1] {
                return Ok(AssumptionCheck::Fails {
                    ranks: table.witness(k, sum),
                    target,
                });
            }
        }
    }
    Ok(AssumptionCheck::Holds)
}

/// Assumption C: the class and the orbit share no divisibility.
pub fn check_assumption_c(klass: &HomologySurrogate, orbit: ReebOrbit) -> bool {
    klass.divisibility.gcd(&orbit.mult) == 1
}

/// Sufficient condition for Assumption A: `a_3, …, a_n > M^{(a_1,a_2)}_{c_1−1}`.
pub fn sufficient_a(a: &EllipsoidShape, c1: i64) -> Result<bool> {
    let top = check_c1(c1)? - 1;
    if a.dim() <= 2 {
        return Ok(true);
    }
    let planar = EllipsoidShape::new(a.factors()[..2].to_vec())?;
    let bound = capacity(&planar, top)?;
    Ok(a.factors()[2..].iter().all(|x| *x > bound))
}

/// Sufficient condition for Assumptions A and B: up to scaling,
/// `a = (q, p ± δ, a_3, …)` with `gcd(p, q) = 1`, `p + q = c_1` and every
/// `a_s > pq` for `s ≥ 3`.
pub fn sufficient_b(a: &EllipsoidShape, c1: i64) -> Result<bool> {
    check_c1(c1)?;
    if a.dim() < 2 {
        return Ok(false);
    }
    let (first, second) = (&a.factors()[0], &a.factors()[1]);
    if !first.is_constant() || second.degree() != 1 {
        return Ok(false);
    }
    let r1 = first.constant_term();
    let r2 = second.constant_term();
    let total = &r1 + &r2;
    let c1q = BigRational::from_integer(c1.into());
    let q = &c1q * &r1 / &total;
    let p = &c1q * &r2 / &total;
    if !p.is_integer() || !q.is_integer() {
        return Ok(false);
    }
    let (p, q) = (p.to_integer(), q.to_integer());
    if p.gcd(&q) != 1.into() {
        return Ok(false);
    }
    // λ scales a_1 to q.
    let lambda = BigRational::from_integer(q.clone()) / &r1;
    let pq = PerturbedRational::from_rational(BigRational::from_integer(p * q));
    Ok(a.factors()[2..].iter().all(|x| x.scale(&lambda) > pq))
}

/// The index-zero condition `Σ m_s = c_1 + n − 2` for the constraint
/// `⟪C^m pt⟫`.
pub fn constraint_index_ok(m: &LatticeTuple, c1: i64, n: usize) -> bool {
    m.len() == n && m.sum() as i64 == c1 + n as i64 - 2
}

/// Default cap on candidate end multisets in [`enumerate_symp_curves`].
pub const DEFAULT_SEARCH_BUDGET: usize = 2_000_000;

/// All formal curves with the single negative end `neg`, nonnegative
/// energy and index at most `max_index`, up to reordering of the ends.
///
/// Since `CZ(o_j) = n − 1 + 2j`, a curve with positive ends `o_{r_1}, …,
/// o_{r_k}` and negative end `o_m` has index `2(Σ r_i + k − 1 − m)`. So
/// only multisets with `Σ r_i + k − 1 ≤ m + ⌊max_index/2⌋` can qualify;
/// those are enumerated and each survivor's index is recomputed from the
/// Conley–Zehnder formula.
pub fn enumerate_symp_curves(
    a: &EllipsoidShape,
    neg: ReebOrbit,
    max_index: i64,
) -> Result<Vec<SymplectizationCurve>> {
    enumerate_symp_curves_with_budget(a, neg, max_index, DEFAULT_SEARCH_BUDGET)
}

pub fn enumerate_symp_curves_with_budget(
    a: &EllipsoidShape,
    neg: ReebOrbit,
    max_index: i64,
    budget: usize,
) -> Result<Vec<SymplectizationCurve>> {
    let m = rank_of(a, neg)? as i64;
    let bound = m + max_index.div_euclid(2);
    if bound < 1 {
        return Ok(Vec::new());
    }
    let bound = bound as usize;
    let entries = spectrum(a, bound)?;
    let neg_action = action(a, neg)?;

    let mut out = Vec::new();
    let mut explored = 0usize;
    let mut ranks = Vec::new();
    let mut stack_err = None;
    visit_rank_multisets(bound, 1, &mut ranks, &mut |ranks| {
        explored += 1;
        if explored > budget {
            stack_err = Some(Error::SearchBudgetExceeded {
                explored,
                bound: budget,
            });
            return false;
        }
        let positive: PerturbedRational =
            ranks.iter().map(|&r| entries[r - 1].action.clone()).sum();
        if positive < neg_action {
            return true;
        }
        let curve = SymplectizationCurve {
            positive_ends: ranks.iter().map(|&r| entries[r - 1].orbit).collect(),
            negative_ends: vec![neg],
            ambient: a.clone(),
        };
        match symp_index(&curve) {
            Ok(index) if index <= max_index => out.push(curve.canonical()),
            Ok(_) => {}
            Err(e) => {
                stack_err = Some(e);
                return false;
            }
        }
        true
    });
    if let Some(e) = stack_err {
        return Err(e);
    }
    out.sort_by(|x, y| x.positive_ends.cmp(&y.positive_ends));
    Ok(out)
}

/// Calls `f` on every nonempty nondecreasing rank sequence with
/// `Σ r_i + k − 1 ≤ budget`. Stops early when `f` returns false.
fn visit_rank_multisets(
    budget: usize,
    min_rank: usize,
    ranks: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let sum: usize = ranks.iter().sum();
    let k = ranks.len();
    for r in min_rank.. {
        // Σ r_i + k − 1 after appending r.
        if sum + r + k > budget {
            break;
        }
        ranks.push(r);
        let keep_going = f(ranks) && visit_rank_multisets(budget, r, ranks, f);
        ranks.pop();
        if !keep_going {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(c0: i64, c1: i64) -> PerturbedRational {
        PerturbedRational::from_int(c0) + PerturbedRational::delta().scale_int(c1)
    }

    fn shape(entries: Vec<PerturbedRational>) -> EllipsoidShape {
        EllipsoidShape::new(entries).unwrap()
    }

    fn nu(axis: usize, mult: u64) -> ReebOrbit {
        ReebOrbit::new(axis, mult)
    }

    fn branched_cover_shape() -> EllipsoidShape {
        shape(vec![
            pr(1, 0),
            PerturbedRational::from_int(1) + PerturbedRational::delta_pow(2),
            pr(1, 1),
        ])
    }

    #[test]
    fn symplectization_energy() {
        let a = shape(vec![pr(2, 0), pr(3, 1)]);
        let c = SymplectizationCurve::new(a.clone(), vec![nu(1, 3)], vec![nu(1, 3)]).unwrap();
        assert!(symp_energy(&c).is_zero());
        assert!(c.is_trivial_cylinder());
        let c =
            SymplectizationCurve::new(a.clone(), vec![nu(1, 1), nu(1, 2)], vec![nu(1, 3)]).unwrap();
        assert!(symp_energy(&c).is_zero());
        let c = SymplectizationCurve::new(a, vec![nu(2, 2)], vec![nu(1, 3)]).unwrap();
        assert_eq!(symp_energy(&c), pr(0, 2));
    }

    #[test]
    fn symplectization_index() {
        let a = shape(vec![pr(2, 0), pr(3, 1)]);
        // CZ(ν_1^1) = 3, CZ(ν_1^2) = 7, CZ(ν_1^3) = 9; (−1)(2 − 3) + 3 + 7 − 9
        let c =
            SymplectizationCurve::new(a.clone(), vec![nu(1, 1), nu(1, 2)], vec![nu(1, 3)]).unwrap();
        assert_eq!(symp_index(&c).unwrap(), 2);
        for orbit in [nu(1, 4), nu(2, 3)] {
            let c = SymplectizationCurve::new(a.clone(), vec![orbit], vec![orbit]).unwrap();
            assert_eq!(symp_index(&c).unwrap(), 0);
        }
        let cover = branched_cover_shape();
        for k in 2..=6u64 {
            let c = SymplectizationCurve::new(
                cover.clone(),
                vec![nu(1, 1); k as usize],
                vec![nu(1, k)],
            )
            .unwrap();
            assert_eq!(symp_index(&c).unwrap(), 2 - 2 * k as i64);
        }
    }

    #[test]
    fn cobordism_index_and_energy() {
        let a = shape(vec![pr(2, 0), pr(3, 1)]);
        let closed =
            CobordismCurve::new(a.clone(), HomologySurrogate::new(3, pr(3, 0)), vec![]).unwrap();
        assert_eq!(cob_index(&closed).unwrap(), 4);
        for c1 in 2..12 {
            let top = crate::spectrum::orbit_at(&a, (c1 - 1) as usize).unwrap();
            let c =
                CobordismCurve::new(a.clone(), HomologySurrogate::new(c1, pr(100, 0)), vec![top])
                    .unwrap();
            assert_eq!(cob_index(&c).unwrap(), 0);
        }
        let b = EllipsoidShape::from_ints(&[8, 13, 22]).unwrap();
        let c = CobordismCurve::new(
            b.clone(),
            HomologySurrogate::new(5, pr(22, 1)),
            vec![nu(3, 1)],
        )
        .unwrap();
        assert_eq!(cob_index(&c).unwrap(), 0);
        assert_eq!(cob_energy(&c), pr(0, 1));
        let c =
            CobordismCurve::new(a, HomologySurrogate::new(2, pr(1, 0)), vec![nu(1, 1)]).unwrap();
        assert_eq!(cob_energy(&c), pr(-1, 0));
    }

    #[test]
    fn assumptions_for_three_axis_example() {
        let a = EllipsoidShape::from_ints(&[8, 13, 22]).unwrap();
        assert!(check_assumption_a(&a, 5).unwrap().holds());
        assert!(check_assumption_b(&a, 5).unwrap().holds());
        assert!(!sufficient_a(&a, 5).unwrap());
        assert!(!sufficient_b(&a, 5).unwrap());
    }

    #[test]
    fn assumptions_for_short_orbit_shapes() {
        for (p, q) in [(3, 2), (5, 2), (5, 3), (7, 3), (8, 5)] {
            for sign in [1, -1] {
                let a = shape(vec![pr(q, 0), pr(p, sign)]);
                assert!(
                    check_assumption_a(&a, p + q).unwrap().holds(),
                    "{p} {q} {sign}"
                );
                assert!(
                    check_assumption_b(&a, p + q).unwrap().holds(),
                    "{p} {q} {sign}"
                );
                assert!(sufficient_b(&a, p + q).unwrap());
            }
        }
    }

    #[test]
    fn assumption_a_fails_for_branched_cover_shape() {
        let a = branched_cover_shape();
        match check_assumption_a(&a, 10).unwrap() {
            AssumptionCheck::Fails { ranks, target } => {
                assert_eq!(ranks, vec![1, 1]);
                assert_eq!(target, 3);
            }
            AssumptionCheck::Holds => panic!("expected a violation"),
        }
    }

    #[test]
    fn assumption_b_vacuous_for_c1_two() {
        let a = shape(vec![pr(1, 0), pr(1, 1)]);
        assert!(check_assumption_b(&a, 2).unwrap().holds());
        assert!(check_assumption_a(&a, 2).unwrap().holds());
    }

    #[test]
    fn assumption_c() {
        let k1 = HomologySurrogate::new(3, pr(1, 0));
        assert!(check_assumption_c(&k1, nu(2, 6)));
        let k2 = k1.clone().with_divisibility(2).unwrap();
        assert!(!check_assumption_c(&k2, nu(1, 4)));
        let k3 = k1.with_divisibility(3).unwrap();
        assert!(check_assumption_c(&k3, nu(1, 5)));
    }

    #[test]
    fn sufficient_conditions() {
        let (p, q) = (3, 2);
        assert!(sufficient_a(&shape(vec![pr(q, 0), pr(p, 1), pr(p * q + 1, 0)]), p + q).unwrap());
        assert!(sufficient_a(&shape(vec![pr(2, 0), pr(3, 1)]), 5).unwrap());
        assert!(sufficient_b(&shape(vec![pr(2, 0), pr(3, 1)]), 5).unwrap());
        assert!(sufficient_b(&shape(vec![pr(2, 0), pr(3, 1), pr(7, 0)]), 5).unwrap());
        assert!(!sufficient_b(&shape(vec![pr(2, 0), pr(3, 1), pr(6, 0)]), 5).unwrap());
        // scaled copy
        assert!(sufficient_b(&shape(vec![pr(4, 0), pr(6, -1), pr(13, 0)]), 5).unwrap());
        assert!(!sufficient_b(&shape(vec![pr(2, 0), pr(3, 0)]), 5).unwrap());
        assert!(!sufficient_b(&shape(vec![pr(2, 0), pr(4, 1)]), 6).unwrap());
    }

    #[test]
    fn constraint_index() {
        assert!(constraint_index_ok(
            &LatticeTuple::new(vec![3, 2]).unwrap(),
            5,
            2
        ));
        assert!(constraint_index_ok(
            &LatticeTuple::new(vec![1, 1, 1, 1]).unwrap(),
            2,
            4
        ));
        assert!(constraint_index_ok(
            &LatticeTuple::new(vec![8, 1]).unwrap(),
            9,
            2
        ));
        assert!(!constraint_index_ok(
            &LatticeTuple::new(vec![8, 2]).unwrap(),
            9,
            2
        ));
    }

    #[test]
    fn enumeration_examples() {
        let a = shape(vec![pr(2, 0), pr(3, 1)]);
        let found = enumerate_symp_curves(&a, nu(1, 1), 0).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].is_trivial_cylinder());

        let (p, q) = (5, 3);
        let a = shape(vec![pr(q, 0), pr(p, 1)]);
        let found = enumerate_symp_curves(&a, nu(1, p as u64), 0).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].is_trivial_cylinder());

        let cover = branched_cover_shape();
        let found = enumerate_symp_curves(&cover, nu(1, 2), -2).unwrap();
        assert!(found
            .iter()
            .any(|c| c.positive_ends == vec![nu(1, 1), nu(1, 1)]));
        for c in &found {
            assert!(symp_index(c).unwrap() <= -2);
            assert!(symp_energy(c).signum() != std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn enumeration_budget() {
        let a = shape(vec![pr(2, 0), pr(3, 1)]);
        assert!(matches!(
            enumerate_symp_curves_with_budget(&a, nu(1, 5), 6, 10),
            Err(Error::SearchBudgetExceeded { .. })
        ));
    }
}
