//! Reeb orbits on the boundary of an ellipsoid `E(a)`.
//!
//! The simple orbits `ν_1, …, ν_n` sit on the coordinate axes with actions
//! `a_1, …, a_n`; every orbit is an iterate `ν_i^m` of action `m·a_i`.
//! Sorting all iterates by action gives the orbits `o_1, o_2, …` and the
//! action spectrum `M_k = A(o_k)`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use num::traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numbers::{floor_quotient, PerturbedRational};

/// The area factors `a = (a_1, …, a_n)` of an ellipsoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<PerturbedRational>", into = "Vec<PerturbedRational>")]
pub struct EllipsoidShape {
    factors: Vec<PerturbedRational>,
}

impl EllipsoidShape {
    pub fn new(factors: Vec<PerturbedRational>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::domain("an ellipsoid needs at least one factor"));
        }
        if let Some(bad) = factors.iter().find(|a| !a.is_positive()) {
            return Err(Error::domain(format!("factor {bad} is not positive")));
        }
        Ok(Self { factors })
    }

    /// Shape with integer factors and no perturbation.
    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&v| PerturbedRational::from_int(v))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[PerturbedRational] {
        &self.factors
    }

    /// `a_axis`, one-based.
    pub fn factor(&self, axis: usize) -> Result<&PerturbedRational> {
        axis.checked_sub(1)
            .and_then(|i| self.factors.get(i))
            .ok_or_else(|| Error::domain(format!("axis {axis} out of range 1..={}", self.dim())))
    }

    pub fn scaled(&self, lambda: &PerturbedRational) -> Result<Self> {
        Self::new(self.factors.iter().map(|a| a * lambda).collect())
    }
}

impl TryFrom<Vec<PerturbedRational>> for EllipsoidShape {
    type Error = Error;

    fn try_from(value: Vec<PerturbedRational>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<EllipsoidShape> for Vec<PerturbedRational> {
    fn from(value: EllipsoidShape) -> Self {
        value.factors
    }
}

impl fmt::Display for EllipsoidShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// The iterate `ν_axis^mult`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReebOrbit {
    pub axis: usize,
    pub mult: u64,
}

impl ReebOrbit {
    pub fn new(axis: usize, mult: u64) -> Self {
        Self { axis, mult }
    }
}

impl fmt::Display for ReebOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ν_{}^{}", self.axis, self.mult)
    }
}

/// A tuple of positive integers, one per axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct LatticeTuple(Vec<u64>);

impl LatticeTuple {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("lattice tuple is empty"));
        }
        if entries.contains(&0) {
            return Err(Error::domain(format!(
                "lattice tuple {entries:?} has a zero entry"
            )));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl TryFrom<Vec<u64>> for LatticeTuple {
    type Error = Error;

    fn try_from(value: Vec<u64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<LatticeTuple> for Vec<u64> {
    fn from(value: LatticeTuple) -> Self {
        value.0
    }
}

/// One entry of the spectrum: the orbit and its action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub orbit: ReebOrbit,
    pub action: PerturbedRational,
}

pub fn action(a: &EllipsoidShape, orbit: ReebOrbit) -> Result<PerturbedRational> {
    if orbit.mult == 0 {
        return Err(Error::domain("orbit multiplicity must be positive"));
    }
    Ok(a.factor(orbit.axis)?.scale_int(orbit.mult as i64))
}

#[derive(PartialEq, Eq)]
struct HeapItem {
    action: PerturbedRational,
    axis: usize,
    mult: u64,
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.action
            .cmp(&other.action)
            .then(self.axis.cmp(&other.axis))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Iterates the spectrum in order of increasing action by an `n`-way merge
/// of the arithmetic progressions `m·a_i`. Equal actions are yielded in
/// axis order; callers decide whether that is a tie.
pub struct SpectrumIter<'a> {
    shape: &'a EllipsoidShape,
    heap: BinaryHeap<Reverse<HeapItem>>,
}

impl<'a> SpectrumIter<'a> {
    pub fn new(shape: &'a EllipsoidShape) -> Self {
        let heap = shape
            .factors
            .iter()
            .enumerate()
            .map(|(i, a)| {
                Reverse(HeapItem {
                    action: a.clone(),
                    axis: i + 1,
                    mult: 1,
                })
            })
            .collect();
        Self { shape, heap }
    }
}

impl Iterator for SpectrumIter<'_> {
    type Item = SpectrumEntry;

    fn next(&mut self) -> Option<SpectrumEntry> {
        let Reverse(item) = self.heap.pop()?;
        let base = &self.shape.factors[item.axis - 1];
        self.heap.push(Reverse(HeapItem {
            action: &item.action + base,
            axis: item.axis,
            mult: item.mult + 1,
        }));
        Some(SpectrumEntry {
            orbit: ReebOrbit::new(item.axis, item.mult),
            action: item.action,
        })
    }
}

/// The first `count` spectrum entries, rejecting any coincident actions
/// among them.
pub fn spectrum(a: &EllipsoidShape, count: usize) -> Result<Vec<SpectrumEntry>> {
    let entries: Vec<_> = SpectrumIter::new(a).take(count).collect();
    check_distinct(&entries)?;
    Ok(entries)
}

fn check_distinct(entries: &[SpectrumEntry]) -> Result<()> {
    match entries.windows(2).position(|w| w[0].action == w[1].action) {
        Some(i) => Err(Error::TieInSpectrum { rank: i + 1 }),
        None => Ok(()),
    }
}

fn check_rank(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("spectrum ranks start at 1"));
    }
    Ok(())
}

/// `M_k`, the `k`-th smallest action.
pub fn capacity(a: &EllipsoidShape, k: usize) -> Result<PerturbedRational> {
    check_rank(k)?;
    let mut entries = spectrum(a, k)?;
    Ok(entries.pop().expect("k >= 1").action)
}

/// `o_k`, the orbit realizing `M_k`. Also rejects `M_k = M_{k+1}`, since
/// then the `k`-th orbit is not well defined.
pub fn orbit_at(a: &EllipsoidShape, k: usize) -> Result<ReebOrbit> {
    check_rank(k)?;
    let entries: Vec<_> = SpectrumIter::new(a).take(k + 1).collect();
    check_distinct(&entries)?;
    Ok(entries[k - 1].orbit)
}

/// Rank `k` with `o_k = orbit`, provided the spectrum is tie-free through it.
pub fn rank_of(a: &EllipsoidShape, orbit: ReebOrbit) -> Result<usize> {
    let target = action(a, orbit)?;
    let mut iter = SpectrumIter::new(a).peekable();
    let mut previous: Option<PerturbedRational> = None;
    let mut rank = 0;
    while let Some(entry) = iter.next() {
        rank += 1;
        if previous.as_ref() == Some(&entry.action) {
            return Err(Error::TieInSpectrum { rank: rank - 1 });
        }
        if entry.orbit == orbit {
            let next = iter.peek().expect("spectrum is infinite");
            if next.action == entry.action {
                return Err(Error::TieInSpectrum { rank });
            }
            return Ok(rank);
        }
        debug_assert!(entry.action <= target);
        previous = Some(entry.action);
    }
    unreachable!("every iterate appears in the spectrum")
}

/// `Δ_k`: the tuple with entries summing to `n + k - 1` that maximizes
/// `min_s a_s i_s`.
///
/// A water-filling pass seeds the incumbent, then a depth-first search over
/// all compositions proves optimality and uniqueness. A branch dies as soon
/// as its partial minimum drops strictly below the incumbent.
pub fn delta_path(a: &EllipsoidShape, k: usize) -> Result<LatticeTuple> {
    check_rank(k)?;
    let n = a.dim();
    let total = (n + k - 1) as u64;
    let seed = water_fill(a, total);
    let seed_value = min_action(a, &seed);

    let mut search = PathSearch {
        shape: a,
        best_value: seed_value,
        best: None,
        rival: None,
        prefix: Vec::with_capacity(n),
    };
    search.descend(total, None);

    let best = search.best.expect("the seed tuple is always revisited");
    if let Some(rival) = search.rival {
        return Err(Error::AmbiguousMaximizer {
            first: best,
            second: rival,
        });
    }
    LatticeTuple::new(best)
}

fn min_action(a: &EllipsoidShape, tuple: &[u64]) -> PerturbedRational {
    a.factors
        .iter()
        .zip(tuple)
        .map(|(f, &i)| f.scale_int(i as i64))
        .min()
        .expect("nonempty")
}

fn water_fill(a: &EllipsoidShape, total: u64) -> Vec<u64> {
    let n = a.dim();
    let mut tuple = vec![1u64; n];
    let mut values: Vec<_> = a.factors.clone();
    for _ in n as u64..total {
        let (s, _) = values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.cmp(y.1))
            .expect("nonempty");
        tuple[s] += 1;
        values[s] = &values[s] + &a.factors[s];
    }
    tuple
}

struct PathSearch<'a> {
    shape: &'a EllipsoidShape,
    best_value: PerturbedRational,
    best: Option<Vec<u64>>,
    rival: Option<Vec<u64>>,
    prefix: Vec<u64>,
}

impl PathSearch<'_> {
    fn descend(&mut self, remaining: u64, current_min: Option<PerturbedRational>) {
        let n = self.shape.dim();
        let axis = self.prefix.len();
        if current_min.as_ref().is_some_and(|m| *m < self.best_value) {
            return;
        }
        let factor = &self.shape.factors[axis];
        if axis + 1 == n {
            let value = factor.scale_int(remaining as i64);
            let value = match current_min {
                Some(m) if m < value => m,
                _ => value,
            };
            self.record(remaining, value);
            return;
        }
        let slots_after = (n - axis - 1) as u64;
        for i in 1..=remaining - slots_after {
            let value = factor.scale_int(i as i64);
            if value < self.best_value {
                continue;
            }
            let next_min = match &current_min {
                Some(m) if *m < value => m.clone(),
                _ => value,
            };
            self.prefix.push(i);
            self.descend(remaining - i, Some(next_min));
            self.prefix.pop();
        }
    }

    fn record(&mut self, last: u64, value: PerturbedRational) {
        let mut tuple = self.prefix.clone();
        tuple.push(last);
        match value.cmp(&self.best_value) {
            Ordering::Less => {}
            Ordering::Greater => {
                self.best_value = value;
                self.best = Some(tuple);
                self.rival = None;
            }
            Ordering::Equal => {
                if self.best.is_none() {
                    self.best = Some(tuple);
                } else if self.rival.is_none() {
                    self.rival = Some(tuple);
                }
            }
        }
    }
}

/// `o_{-v}`: the iterate `ν_i^{v_i}` with `a_i v_i` minimal.
pub fn orbit_from_negative_tuple(a: &EllipsoidShape, v: &LatticeTuple) -> Result<ReebOrbit> {
    if v.len() != a.dim() {
        return Err(Error::domain(format!(
            "tuple has {} entries but the shape has {} factors",
            v.len(),
            a.dim()
        )));
    }
    let mut best: Option<(usize, PerturbedRational)> = None;
    let mut tie: Option<(usize, usize)> = None;
    for (i, (f, &m)) in a.factors.iter().zip(v.entries()).enumerate() {
        let value = f.scale_int(m as i64);
        match &best {
            None => best = Some((i, value)),
            Some((j, b)) => match value.cmp(b) {
                Ordering::Less => {
                    best = Some((i, value));
                    tie = None;
                }
                Ordering::Equal => tie = Some((j + 1, i + 1)),
                Ordering::Greater => {}
            },
        }
    }
    if let Some((first, second)) = tie {
        return Err(Error::AmbiguousMinimizer { first, second });
    }
    let (i, _) = best.expect("nonempty");
    Ok(ReebOrbit::new(i + 1, v.entries()[i]))
}

/// Conley–Zehnder index of `ν_i^j` in the global trivialization:
/// `(n - 1) + 2j + 2 Σ_{s ≠ i} ⌊j a_i / a_s⌋`, floors taken for small `δ`.
pub fn cz_index(a: &EllipsoidShape, orbit: ReebOrbit) -> Result<i64> {
    let top = action(a, orbit)?;
    let n = a.dim() as i64;
    let mut index = (n - 1) + 2 * orbit.mult as i64;
    for (s, other) in a.factors.iter().enumerate() {
        if s + 1 == orbit.axis {
            continue;
        }
        let fl = floor_quotient(&top, other)?;
        index += 2 * fl
            .to_i64()
            .ok_or_else(|| Error::domain("floor overflows i64"))?;
    }
    Ok(index)
}
