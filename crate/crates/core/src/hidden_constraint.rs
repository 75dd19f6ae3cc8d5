//! Degenerations of multidirectional tangency constraints.
//!
//! If `⟪C^m pt⟫` degenerates into `⟪C^{m_1} pt⟫, …, ⟪C^{m_k} pt⟫`, then
//! `Σ_i min_s a_s m^i_s ≥ min_s a_s m_s` for every direction `a > 0`. The
//! difference of the two sides is piecewise linear and homogeneous in `a`,
//! so the condition can be decided exactly.

use itertools::Itertools;
use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::{find_point, Inequality};
use crate::spectrum::LatticeTuple;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HiddenConstraint {
    Admissible,
    /// A primitive integer direction `a` at which the inequality fails.
    Violated {
        #[serde(with = "decimal_strings")]
        direction: Vec<BigInt>,
    },
}

mod decimal_strings {
    use num::bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.parse().map_err(D::Error::custom))
            .collect()
    }
}

impl HiddenConstraint {
    pub fn is_admissible(&self) -> bool {
        matches!(self, HiddenConstraint::Admissible)
    }
}

fn q(v: u64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn min_action(a: &[BigRational], m: &LatticeTuple) -> BigRational {
    a.iter()
        .zip(m.entries())
        .map(|(x, &e)| x * q(e))
        .min()
        .expect("nonempty")
}

/// `Σ_i min_s a_s m^i_s − min_s a_s m_s` at a concrete direction.
pub fn hidden_constraint_gap(
    m: &LatticeTuple,
    parts: &[LatticeTuple],
    a: &[BigRational],
) -> BigRational {
    parts.iter().map(|p| min_action(a, p)).sum::<BigRational>() - min_action(a, m)
}

fn check_lengths(m: &LatticeTuple, parts: &[LatticeTuple]) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::domain("a degeneration needs at least one part"));
    }
    if let Some(p) = parts.iter().find(|p| p.len() != m.len()) {
        return Err(Error::domain(format!(
            "part {:?} has length {} but m has length {}",
            p.entries(),
            p.len(),
            m.len()
        )));
    }
    Ok(())
}

/// Decides whether the inequality holds for every `a ∈ R^n_{>0}`.
pub fn hidden_constraint_admissible(
    m: &LatticeTuple,
    parts: &[LatticeTuple],
) -> Result<HiddenConstraint> {
    check_lengths(m, parts)?;
    match m.len() {
        1 => {
            let total: u64 = parts.iter().map(|p| p.entries()[0]).sum();
            Ok(if total >= m.entries()[0] {
                HiddenConstraint::Admissible
            } else {
                HiddenConstraint::Violated {
                    direction: vec![BigInt::one()],
                }
            })
        }
        2 => Ok(planar(m, parts)),
        _ => by_cones(m, parts),
    }
}

/// Two-dimensional case. With `a = (1, t)` the gap is piecewise linear in
/// `t`, linear through the origin before the first breakpoint and constant
/// after the last, so it suffices to inspect the breakpoints
/// `m^i_1 / m^i_2`, `m_1 / m_2` and the two end slopes.
fn planar(m: &LatticeTuple, parts: &[LatticeTuple]) -> HiddenConstraint {
    let ratio = |t: &LatticeTuple| BigRational::new(t.entries()[0].into(), t.entries()[1].into());
    let mut breaks: Vec<BigRational> = parts.iter().map(ratio).chain([ratio(m)]).collect();
    breaks.sort();
    breaks.dedup();

    let at = |t: BigRational| {
        let a = [BigRational::one(), t];
        (hidden_constraint_gap(m, parts, &a), a)
    };

    let near_zero: i128 =
        parts.iter().map(|p| p.entries()[1] as i128).sum::<i128>() - m.entries()[1] as i128;
    if near_zero < 0 {
        let (_, a) = at(&breaks[0] / BigRational::from_integer(2.into()));
        return violated(&a);
    }
    for b in &breaks {
        let (gap, a) = at(b.clone());
        if gap.is_negative() {
            return violated(&a);
        }
    }
    let far: i128 =
        parts.iter().map(|p| p.entries()[0] as i128).sum::<i128>() - m.entries()[0] as i128;
    if far < 0 {
        let last = breaks.last().expect("nonempty");
        let (_, a) = at(last * BigRational::from_integer(2.into()));
        return violated(&a);
    }
    HiddenConstraint::Admissible
}

/// General case. Fix which axis attains each minimum; on the resulting
/// closed cone the gap is linear, and the cone (normalized by `a ≥ 1`)
/// either contains a point with negative gap or not. That is decided
/// exactly by Fourier–Motzkin elimination.
pub fn by_cones(m: &LatticeTuple, parts: &[LatticeTuple]) -> Result<HiddenConstraint> {
    check_lengths(m, parts)?;
    let n = m.len();
    let tuples: Vec<&LatticeTuple> = parts.iter().chain([m]).collect();
    let zero = || vec![BigRational::zero(); n];

    for assignment in (0..tuples.len()).map(|_| 0..n).multi_cartesian_product() {
        let mut system = Vec::new();
        for s in 0..n {
            let mut c = zero();
            c[s] = -BigRational::one();
            system.push(Inequality::new(c, -BigRational::one(), false));
        }
        for (tuple, &axis) in tuples.iter().zip(&assignment) {
            let e = tuple.entries();
            for s in (0..n).filter(|&s| s != axis) {
                let mut c = zero();
                c[axis] += q(e[axis]);
                c[s] -= q(e[s]);
                system.push(Inequality::new(c, BigRational::zero(), false));
            }
        }
        let mut gap = zero();
        for (tuple, &axis) in tuples.iter().zip(&assignment).take(parts.len()) {
            gap[axis] += q(tuple.entries()[axis]);
        }
        let m_axis = *assignment.last().expect("nonempty");
        gap[m_axis] -= q(m.entries()[m_axis]);
        system.push(Inequality::new(gap, BigRational::zero(), true));

        if let Some(point) = find_point(&system, n) {
            debug_assert!(hidden_constraint_gap(m, parts, &point).is_negative());
            return Ok(violated(&point));
        }
    }
    Ok(HiddenConstraint::Admissible)
}

fn violated(a: &[BigRational]) -> HiddenConstraint {
    HiddenConstraint::Violated {
        direction: primitive(a),
    }
}

fn primitive(a: &[BigRational]) -> Vec<BigInt> {
    let lcm = a.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = a
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// For `n = 2`, `gcd(m) = 1` and at least two parts, an admissible
/// degeneration has `Σ (p_i + q_i) ≥ p + q + 1`. Returns whether that
/// implication holds for this instance; instances outside its hypotheses
/// are exempt and return `true`.
pub fn degeneration_sum_bound(m: &LatticeTuple, parts: &[LatticeTuple]) -> Result<bool> {
    check_lengths(m, parts)?;
    if m.len() != 2 || parts.len() < 2 {
        return Ok(true);
    }
    let (p, q) = (m.entries()[0], m.entries()[1]);
    if p.gcd(&q) != 1 {
        return Ok(true);
    }
    if !hidden_constraint_admissible(m, parts)?.is_admissible() {
        return Ok(true);
    }
    let total: u64 = parts.iter().map(|t| t.sum()).sum();
    Ok(total > p + q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(e: &[u64]) -> LatticeTuple {
        LatticeTuple::new(e.to_vec()).unwrap()
    }

    #[test]
    fn trefoil_constraint_cannot_split_evenly() {
        let result = hidden_constraint_admissible(&t(&[3, 2]), &[t(&[2, 1]), t(&[1, 1])]).unwrap();
        let HiddenConstraint::Violated { direction } = result else {
            panic!("expected a violation")
        };
        assert_eq!(direction, vec![BigInt::from(2), BigInt::from(3)]);
        let a: Vec<BigRational> = direction
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        // 4 ∧ 3 + 2 ∧ 3 = 5 < 6 ∧ 6
        assert_eq!(
            hidden_constraint_gap(&t(&[3, 2]), &[t(&[2, 1]), t(&[1, 1])], &a),
            BigRational::from_integer((-1).into())
        );
    }

    #[test]
    fn admissible_examples() {
        assert!(hidden_constraint_admissible(&t(&[5, 3]), &[t(&[5, 3])])
            .unwrap()
            .is_admissible());
        assert!(
            hidden_constraint_admissible(&t(&[2, 1]), &[t(&[1, 1]), t(&[1, 1])])
                .unwrap()
                .is_admissible()
        );
    }

    #[test]
    fn uneven_split_fails_between_breakpoints() {
        // At a = (2, 3): 3 + 2 = 5 < 6.
        let r = hidden_constraint_admissible(&t(&[3, 2]), &[t(&[3, 1]), t(&[1, 2])]).unwrap();
        assert_eq!(
            r,
            HiddenConstraint::Violated {
                direction: vec![BigInt::from(2), BigInt::from(3)]
            }
        );
    }

    #[test]
    fn end_slopes_are_checked() {
        // Σ second entries 1 < 2: violated for small a_2/a_1.
        let r = hidden_constraint_admissible(&t(&[1, 2]), &[t(&[5, 1])]).unwrap();
        assert!(!r.is_admissible());
        let r = hidden_constraint_admissible(&t(&[2, 1]), &[t(&[1, 5])]).unwrap();
        assert!(!r.is_admissible());
    }

    #[test]
    fn cones_agree_with_breakpoints_in_the_plane() {
        let m = t(&[3, 2]);
        for parts in [
            vec![t(&[2, 1]), t(&[1, 1])],
            vec![t(&[3, 1]), t(&[1, 2])],
            vec![t(&[2, 2]), t(&[2, 1])],
            vec![t(&[1, 1]), t(&[1, 1]), t(&[1, 1])],
            vec![t(&[4, 1]), t(&[1, 1])],
        ] {
            assert_eq!(
                planar(&m, &parts).is_admissible(),
                by_cones(&m, &parts).unwrap().is_admissible(),
                "{parts:?}"
            );
        }
    }

    #[test]
    fn three_dimensional_instance() {
        let m = t(&[2, 2, 1]);
        let split = [t(&[1, 1, 1]), t(&[1, 1, 1])];
        assert!(hidden_constraint_admissible(&m, &split)
            .unwrap()
            .is_admissible());
        let bad = [t(&[1, 1, 1]), t(&[1, 2, 1])];
        let r = hidden_constraint_admissible(&t(&[3, 2, 1]), &bad).unwrap();
        if let HiddenConstraint::Violated { direction } = &r {
            let a: Vec<BigRational> = direction
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            assert!(hidden_constraint_gap(&t(&[3, 2, 1]), &bad, &a).is_negative());
        }
    }

    #[test]
    fn length_mismatch() {
        assert!(hidden_constraint_admissible(&t(&[1, 1]), &[t(&[1])]).is_err());
        assert!(hidden_constraint_admissible(&t(&[1, 1]), &[]).is_err());
    }

    #[test]
    fn sum_bound() {
        assert!(degeneration_sum_bound(&t(&[2, 1]), &[t(&[1, 1]), t(&[1, 1])]).unwrap());
        assert!(degeneration_sum_bound(&t(&[3, 2]), &[t(&[3, 2])]).unwrap());
        assert!(degeneration_sum_bound(&t(&[3, 2]), &[t(&[2, 2]), t(&[2, 1])]).unwrap());
    }
}
