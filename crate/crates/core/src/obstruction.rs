//! Embedding obstructions `c ≤ [ω]·A / M^a_{c_1(A) − 1}` from a nonvanishing
//! count of curves in class `A` with a negative end on an ellipsoid.

use std::cmp::Ordering;
use std::fmt;

use num::rational::BigRational;
use num::traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_curves::HomologySurrogate;
use crate::numbers::{rational_to_string, PerturbedRational};
use crate::spectrum::{action, orbit_at, EllipsoidShape, ReebOrbit};

/// `numerator / denominator` with a positive denominator. A quotient of
/// polynomials in `δ` is generally not a polynomial, so it is kept as a
/// fraction; `value` is filled in when the denominator is free of `δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionBound {
    pub numerator: PerturbedRational,
    pub denominator: PerturbedRational,
    pub value: Option<PerturbedRational>,
    /// The limit as `δ → 0`, as an exact rational string; absent if infinite.
    pub limit: Option<String>,
}

impl ObstructionBound {
    pub fn new(numerator: PerturbedRational, denominator: PerturbedRational) -> Result<Self> {
        if !denominator.is_positive() {
            return Err(Error::domain(
                "obstruction bound needs a positive denominator",
            ));
        }
        let value = denominator
            .as_rational()
            .map(|d| numerator.scale(&d.recip()));
        let limit = fraction_limit(&numerator, &denominator).map(|l| rational_to_string(&l));
        Ok(Self {
            numerator,
            denominator,
            value,
            limit,
        })
    }

    pub fn limit_value(&self) -> Option<BigRational> {
        fraction_limit(&self.numerator, &self.denominator)
    }

    /// The same bound divided by `λ > 0`.
    pub fn divided_by(&self, lambda: &PerturbedRational) -> Result<Self> {
        Self::new(self.numerator.clone(), &self.denominator * lambda)
    }

    /// Compares as fractions by cross-multiplication.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        (&self.numerator * &other.denominator).cmp(&(&other.numerator * &self.denominator))
    }

    pub fn same_value(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl fmt::Display for ObstructionBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "({})/({})", self.numerator, self.denominator),
        }
    }
}

/// `lim_{δ→0} x(δ)/y(δ)`, or `None` when it diverges.
fn fraction_limit(x: &PerturbedRational, y: &PerturbedRational) -> Option<BigRational> {
    let order = (0..=y.degree()).find(|&i| !y.coeff(i).is_zero())?;
    if (0..order).any(|i| !x.coeff(i).is_zero()) {
        return None;
    }
    Some(x.coeff(order) / y.coeff(order))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionRecord {
    pub klass: HomologySurrogate,
    pub shape: EllipsoidShape,
    pub rank: usize,
    pub orbit: ReebOrbit,
    pub action: PerturbedRational,
    pub bound: ObstructionBound,
    /// Nonvanishing of the curve count is a hypothesis supplied by the caller.
    pub nonvanishing_asserted: bool,
}

impl ObstructionRecord {
    pub fn assert_nonvanishing(mut self) -> Self {
        self.nonvanishing_asserted = true;
        self
    }
}

pub fn embedding_bound(klass: &HomologySurrogate, a: &EllipsoidShape) -> Result<ObstructionRecord> {
    if klass.c1 < 2 {
        return Err(Error::domain(format!(
            "c1 must be at least 2, got {}",
            klass.c1
        )));
    }
    let rank = (klass.c1 - 1) as usize;
    let orbit = orbit_at(a, rank)?;
    let action = action(a, orbit)?;
    let bound = ObstructionBound::new(klass.area.clone(), action.clone())?;
    Ok(ObstructionRecord {
        klass: klass.clone(),
        shape: a.clone(),
        rank,
        orbit,
        action,
        bound,
        nonvanishing_asserted: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

/// The target of a profile row: class `klass` obstructs `E(1, p/q ± δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileInput {
    pub klass: HomologySurrogate,
    pub p: i64,
    pub q: i64,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub p: i64,
    pub q: i64,
    pub ratio: String,
    pub bound: ObstructionBound,
}

impl ProfileRow {
    fn ratio_value(&self) -> BigRational {
        BigRational::new(self.p.into(), self.q.into())
    }
}

/// `E(1, p/q ± δ)`.
pub fn staircase_shape(p: i64, q: i64, side: Side) -> Result<EllipsoidShape> {
    let ratio = PerturbedRational::from_ratio(p, q);
    let delta = PerturbedRational::delta();
    let b = match side {
        Side::Plus => ratio + delta,
        Side::Minus => ratio - delta,
    };
    EllipsoidShape::new(vec![PerturbedRational::from_int(1), b])
}

/// One row per distinct `p/q`, sorted, keeping the largest bound at a ratio.
pub fn staircase_profile(records: &[ProfileInput]) -> Result<Vec<ProfileRow>> {
    let mut rows = Vec::with_capacity(records.len());
    for r in records {
        crate::cusp::require_coprime(r.p, r.q)?;
        if r.klass.c1 != r.p + r.q {
            return Err(Error::domain(format!(
                "class with c1 = {} does not match p + q = {}",
                r.klass.c1,
                r.p + r.q
            )));
        }
        let record = embedding_bound(&r.klass, &staircase_shape(r.p, r.q, r.side)?)?;
        rows.push(ProfileRow {
            p: r.p,
            q: r.q,
            ratio: format!("{}/{}", r.p, r.q),
            bound: record.bound,
        });
    }
    rows.sort_by(|a, b| {
        a.ratio_value()
            .cmp(&b.ratio_value())
            .then(b.bound.cmp_value(&a.bound))
    });
    rows.dedup_by(|later, kept| later.ratio_value() == kept.ratio_value());
    Ok(rows)
}
