//! Perfect exceptional classes on the first Hirzebruch surface `F_1`.
//!
//! The sequence `1, 1, 1, 1, 2, 4, …` with `a_{j+6} = 6 a_{j+3} − a_j`
//! produces quadruples `(p, q, d, m) = (a_{j+3}, a_j, d_j, m_j)` such that
//! `dℓ − me` is `(p,q)`-perfect.

use std::collections::HashMap;

use num::integer::{Integer, Roots};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blowup::{perfect_exceptional_report, BlowupClass, PerfectReport};
use crate::cusp::{double_points, require_coprime};
use crate::error::{Error, Result};

/// `(a_1, …, a_count)`.
pub fn seed_sequence(count: usize) -> Result<Vec<i64>> {
    let mut a: Vec<i64> = [1, 1, 1, 1, 2, 4].into_iter().take(count).collect();
    while a.len() < count {
        let j = a.len() - 6;
        let next = a[j + 3]
            .checked_mul(6)
            .and_then(|v| v.checked_sub(a[j]))
            .ok_or_else(|| Error::domain(format!("a_{} overflows i64", a.len() + 1)))?;
        a.push(next);
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StaircaseQuadruple {
    pub p: i64,
    pub q: i64,
    pub d: i64,
    pub m: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
}

impl StaircaseQuadruple {
    pub fn pq(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    pub fn class(&self) -> BlowupClass {
        BlowupClass::f1(self.d, self.m, Vec::new())
    }
}

fn discriminant(p: i64, q: i64) -> Option<i64> {
    p.checked_mul(p)?
        .checked_sub(p.checked_mul(q)?.checked_mul(6)?)?
        .checked_add(q.checked_mul(q)?)?
        .checked_add(8)
}

fn exact_sqrt(value: i64) -> Option<i64> {
    if value < 0 {
        return None;
    }
    let t = value.sqrt();
    (t * t == value).then_some(t)
}

fn dm_for_sign(p: i64, q: i64, t: i64, eps: i64) -> Option<(i64, i64)> {
    let d = 3 * p + 3 * q + eps * t;
    let m = p + q + 3 * eps * t;
    (d % 8 == 0 && m % 8 == 0).then_some((d / 8, m / 8))
}

pub fn quadruple(j: usize) -> Result<StaircaseQuadruple> {
    if j == 0 {
        return Err(Error::domain("the recursion index starts at j = 1"));
    }
    let a = seed_sequence(j + 3)?;
    let (p, q) = (a[j + 2], a[j - 1]);
    let t_sq = discriminant(p, q).ok_or_else(|| Error::domain("discriminant overflows i64"))?;
    let t = exact_sqrt(t_sq).ok_or_else(|| Error::NonIntegralData {
        j,
        what: format!("t² = {t_sq} is not a square"),
    })?;
    let eps = if j % 2 == 1 { 1 } else { -1 };
    let (d, m) = dm_for_sign(p, q, t, eps).ok_or_else(|| Error::NonIntegralData {
        j,
        what: format!("d or m is not an integer for t = {t}"),
    })?;
    Ok(StaircaseQuadruple {
        p,
        q,
        d,
        m,
        j: Some(j),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DmSolution {
    pub d: i64,
    pub m: i64,
    pub epsilon: i64,
    pub t: i64,
}

/// The unique `(d, m)` with `d = (3p + 3q + εt)/8` and `m = (p + q + 3εt)/8`
/// integral, where `t² = p² − 6pq + q² + 8`.
pub fn unique_dm(p: i64, q: i64) -> Result<DmSolution> {
    require_coprime(p, q)?;
    let t_sq = discriminant(p, q).ok_or_else(|| Error::domain("discriminant overflows i64"))?;
    let t = exact_sqrt(t_sq).ok_or(Error::NotSquare { value: t_sq })?;
    let solutions: Vec<DmSolution> = [1, -1]
        .into_iter()
        .filter_map(|eps| {
            dm_for_sign(p, q, t, eps).map(|(d, m)| DmSolution {
                d,
                m,
                epsilon: eps,
                t,
            })
        })
        .collect();
    match solutions.as_slice() {
        [] => Err(Error::NoIntegralSolution { p, q }),
        [only] => Ok(*only),
        [a, b] if (a.d, a.m) == (b.d, b.m) => Ok(*a),
        _ => Err(Error::domain(format!(
            "both signs give integral (d, m) for ({p}, {q})"
        ))),
    }
}

pub fn apply_s(p: i64, q: i64) -> (i64, i64) {
    (6 * p - q, p)
}

pub fn apply_r(p: i64, q: i64) -> Result<(i64, i64)> {
    if p <= 6 * q {
        return Err(Error::RatioTooSmall { p, q });
    }
    Ok((6 * p - 35 * q, p - 6 * q))
}

/// `p/q < 3 + 2√2`, decided exactly.
pub fn in_corollary_branch(p: i64, q: i64) -> bool {
    let (p, q) = (i128::from(p), i128::from(q));
    p <= 3 * q || (p - 3 * q).pow(2) < 8 * q * q
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfEntry {
    #[serde(flatten)]
    pub quadruple: StaircaseQuadruple,
    pub ratio: String,
    pub in_corollary_branch: bool,
    pub double_points: i64,
    pub certification: PerfectReport,
}

/// All coprime `p ≥ q ≥ 1` with `p ≤ max_p` for which `unique_dm` exists and
/// `dℓ − me` is `(p,q)`-perfect, sorted by `p/q`. Entries on the recursion
/// carry their index `j`.
pub fn enumerate_perf(max_p: i64) -> Result<Vec<PerfEntry>> {
    if max_p < 1 {
        return Err(Error::domain("max_p must be at least 1"));
    }
    let mut on_recursion = HashMap::new();
    for j in 1.. {
        let quad = quadruple(j)?;
        if quad.p > max_p {
            break;
        }
        on_recursion.insert(quad.pq(), j);
    }

    let found: Vec<Result<Option<PerfEntry>>> = (1..=max_p)
        .into_par_iter()
        .flat_map_iter(|p| (1..=p).filter(move |q| p.gcd(q) == 1).map(move |q| (p, q)))
        .map(|(p, q)| {
            let dm = match unique_dm(p, q) {
                Ok(dm) => dm,
                Err(Error::NotSquare { .. } | Error::NoIntegralSolution { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let report =
                perfect_exceptional_report(&BlowupClass::f1(dm.d, dm.m, Vec::new()), p, q)?;
            if !report.perfect {
                return Ok(None);
            }
            let double_points = double_points(report.self_intersection + p * q, p + q, p, q)?;
            Ok(Some(PerfEntry {
                quadruple: StaircaseQuadruple {
                    p,
                    q,
                    d: dm.d,
                    m: dm.m,
                    j: on_recursion.get(&(p, q)).copied(),
                },
                ratio: format!("{p}/{q}"),
                in_corollary_branch: in_corollary_branch(p, q),
                double_points,
                certification: report,
            }))
        })
        .collect();
    let mut entries: Vec<PerfEntry> = found
        .into_iter()
        .filter_map(Result::transpose)
        .collect::<Result<_>>()?;
    entries.sort_by(|a, b| {
        let (x, y) = (&a.quadruple, &b.quadruple);
        (i128::from(x.p) * i128::from(y.q)).cmp(&(i128::from(y.p) * i128::from(x.q)))
    });
    Ok(entries)
}
