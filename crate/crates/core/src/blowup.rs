//! Second homology of iterated blowups of `CP²` and `F_1`, proper transforms
//! of classes through a `(p,q)` cusp, and Cremona reduction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cusp::{require_coprime, weight_sequence};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceBase {
    /// `H_2 = ⟨L⟩`, `L·L = 1`, `c_1(L) = 3`.
    Cp2,
    /// `H_2 = ⟨ℓ, e⟩`, `ℓ·ℓ = 1`, `e·e = −1`, `ℓ·e = 0`, `c_1(dℓ − me) = 3d − m`.
    F1,
}

impl SurfaceBase {
    pub fn rank(self) -> usize {
        match self {
            SurfaceBase::Cp2 => 1,
            SurfaceBase::F1 => 2,
        }
    }
}

/// The class `dL − Σ k_i e_i` on a blowup of `CP²`, or
/// `dℓ − me − Σ k_i e_i` on a blowup of `F_1`. `base_coeffs` is `[d]` or
/// `[d, m]` and `exc_coeffs` is `(k_1, …, k_L)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlowupClass {
    pub base: SurfaceBase,
    pub base_coeffs: Vec<i64>,
    pub exc_coeffs: Vec<i64>,
}

impl BlowupClass {
    pub fn new(base: SurfaceBase, base_coeffs: Vec<i64>, exc_coeffs: Vec<i64>) -> Result<Self> {
        if base_coeffs.len() != base.rank() {
            return Err(Error::domain(format!(
                "{base:?} classes take {} base coefficients, got {}",
                base.rank(),
                base_coeffs.len()
            )));
        }
        Ok(Self {
            base,
            base_coeffs,
            exc_coeffs,
        })
    }

    pub fn cp2(d: i64, exc: Vec<i64>) -> Self {
        Self {
            base: SurfaceBase::Cp2,
            base_coeffs: vec![d],
            exc_coeffs: exc,
        }
    }

    pub fn f1(d: i64, m: i64, exc: Vec<i64>) -> Self {
        Self {
            base: SurfaceBase::F1,
            base_coeffs: vec![d, m],
            exc_coeffs: exc,
        }
    }

    /// The exceptional sphere `e_i` (1-based) among `len` blowups.
    pub fn exceptional(base: SurfaceBase, i: usize, len: usize) -> Self {
        let mut exc = vec![0; len];
        exc[i - 1] = -1;
        Self {
            base,
            base_coeffs: vec![0; base.rank()],
            exc_coeffs: exc,
        }
    }

    pub fn degree(&self) -> i64 {
        self.base_coeffs[0]
    }
}

impl fmt::Display for BlowupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(i64, String)> = match self.base {
            SurfaceBase::Cp2 => vec![(self.base_coeffs[0], "L".into())],
            SurfaceBase::F1 => vec![
                (self.base_coeffs[0], "l".into()),
                (-self.base_coeffs[1], "e".into()),
            ],
        };
        terms.extend(
            self.exc_coeffs
                .iter()
                .enumerate()
                .map(|(i, k)| (-k, format!("e{}", i + 1))),
        );
        let mut first = true;
        for (c, name) in terms.into_iter().filter(|(c, _)| *c != 0) {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn same_lattice(a: &BlowupClass, b: &BlowupClass) -> Result<()> {
    if a.base != b.base || a.exc_coeffs.len() != b.exc_coeffs.len() {
        return Err(Error::domain(format!(
            "classes live in different lattices: {:?} with {} blowups vs {:?} with {}",
            a.base,
            a.exc_coeffs.len(),
            b.base,
            b.exc_coeffs.len()
        )));
    }
    Ok(())
}

pub fn intersect(a: &BlowupClass, b: &BlowupClass) -> Result<i64> {
    same_lattice(a, b)?;
    let base = match a.base {
        SurfaceBase::Cp2 => a.base_coeffs[0] * b.base_coeffs[0],
        SurfaceBase::F1 => {
            a.base_coeffs[0] * b.base_coeffs[0] - a.base_coeffs[1] * b.base_coeffs[1]
        }
    };
    let exc: i64 = a
        .exc_coeffs
        .iter()
        .zip(&b.exc_coeffs)
        .map(|(x, y)| x * y)
        .sum();
    Ok(base - exc)
}

pub fn self_intersection(a: &BlowupClass) -> i64 {
    intersect(a, a).expect("a class shares its own lattice")
}

pub fn chern(a: &BlowupClass) -> i64 {
    let base = match a.base {
        SurfaceBase::Cp2 => 3 * a.base_coeffs[0],
        SurfaceBase::F1 => 3 * a.base_coeffs[0] - a.base_coeffs[1],
    };
    base - a.exc_coeffs.iter().sum::<i64>()
}

/// `Ã = A − m_1 e_{L0+1} − ⋯ − m_L e_{L0+L}` with `(m_i) = W(p,q)`.
pub fn proper_transform_class(a: &BlowupClass, p: i64, q: i64) -> Result<BlowupClass> {
    let w = weight_sequence(p, q)?;
    let mut out = a.clone();
    out.exc_coeffs.extend(w.weights);
    Ok(out)
}

pub fn is_numerically_exceptional(a: &BlowupClass) -> bool {
    chern(a) == 1 && self_intersection(a) == -1
}

/// `dℓ − me − Σ k_i e_i ↦ dL − m e_0 − Σ k_i e_i`, with `e_0` placed first.
pub fn f1_to_cp2(a: &BlowupClass) -> BlowupClass {
    match a.base {
        SurfaceBase::Cp2 => a.clone(),
        SurfaceBase::F1 => {
            let mut exc = Vec::with_capacity(a.exc_coeffs.len() + 1);
            exc.push(a.base_coeffs[1]);
            exc.extend(&a.exc_coeffs);
            BlowupClass::cp2(a.base_coeffs[0], exc)
        }
    }
}

/// `dL − Σ m_i e_i` with the nonzero `m_i` sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CremonaState {
    pub d: i64,
    pub m: Vec<i64>,
}

impl CremonaState {
    fn normalized(d: i64, mut m: Vec<i64>) -> Self {
        m.retain(|&v| v != 0);
        m.sort_unstable_by(|a, b| b.cmp(a));
        Self { d, m }
    }
}

impl fmt::Display for CremonaState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.d)?;
        for (i, v) in self.m.iter().enumerate() {
            write!(f, "{}{v}", if i == 0 { "" } else { "," })?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CremonaOutcome {
    Representable {
        trace: Vec<CremonaState>,
    },
    NotRepresentable {
        trace: Vec<CremonaState>,
        reason: String,
    },
}

impl CremonaOutcome {
    pub fn is_representable(&self) -> bool {
        matches!(self, CremonaOutcome::Representable { .. })
    }

    pub fn trace(&self) -> &[CremonaState] {
        match self {
            CremonaOutcome::Representable { trace }
            | CremonaOutcome::NotRepresentable { trace, .. } => trace,
        }
    }
}

/// Applies the move `(d; m_1, m_2, m_3) ↦ (2d − m_1 − m_2 − m_3; d − m_2 − m_3, d − m_1 − m_3, d − m_1 − m_2)`
/// to the three largest coefficients until the class is some `e_i` or is
/// seen not to be representable by an embedded sphere.
pub fn cremona_reduce(a: &BlowupClass) -> Result<CremonaOutcome> {
    if a.base != SurfaceBase::Cp2 {
        return Err(Error::domain(
            "Cremona reduction needs a class over CP2; convert with f1_to_cp2 first",
        ));
    }
    let mut state = CremonaState::normalized(a.base_coeffs[0], a.exc_coeffs.clone());
    let mut trace = Vec::new();
    loop {
        trace.push(state.clone());
        let fail = |trace: Vec<CremonaState>, reason: &str| {
            Ok(CremonaOutcome::NotRepresentable {
                trace,
                reason: reason.to_string(),
            })
        };
        let d = state.d;
        if d == 0 {
            if state.m == [-1] {
                return Ok(CremonaOutcome::Representable { trace });
            }
            return fail(trace, "degree zero but not a single exceptional sphere");
        }
        if d < 0 {
            return fail(trace, "negative degree");
        }
        if state.m.last().is_some_and(|&v| v < 0) {
            return fail(
                trace,
                "negative coefficient on an exceptional sphere at positive degree",
            );
        }
        let mut m = state.m.clone();
        if m.len() < 3 {
            m.resize(3, 0);
        }
        let top = m[0] + m[1] + m[2];
        if top <= d {
            return fail(trace, "reduced class of positive degree");
        }
        let (m1, m2, m3) = (m[0], m[1], m[2]);
        m[0] = d - m2 - m3;
        m[1] = d - m1 - m3;
        m[2] = d - m1 - m2;
        state = CremonaState::normalized(2 * d - top, m);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectReport {
    pub perfect: bool,
    pub class: String,
    pub proper_transform: BlowupClass,
    pub proper_transform_text: String,
    pub chern: i64,
    pub self_intersection: i64,
    pub numerically_exceptional: bool,
    /// Present only for numerically exceptional proper transforms.
    pub cremona: Option<CremonaOutcome>,
}

pub fn perfect_exceptional_report(a: &BlowupClass, p: i64, q: i64) -> Result<PerfectReport> {
    require_coprime(p, q)?;
    let tilde = proper_transform_class(a, p, q)?;
    let numerically_exceptional = is_numerically_exceptional(&tilde);
    let cremona = if numerically_exceptional {
        Some(cremona_reduce(&f1_to_cp2(&tilde))?)
    } else {
        None
    };
    Ok(PerfectReport {
        perfect: cremona
            .as_ref()
            .is_some_and(CremonaOutcome::is_representable),
        class: a.to_string(),
        proper_transform_text: tilde.to_string(),
        chern: chern(&tilde),
        self_intersection: self_intersection(&tilde),
        numerically_exceptional,
        proper_transform: tilde,
        cremona,
    })
}

/// Whether `Ã` is numerically exceptional and certified by Cremona reduction.
pub fn is_perfect_exceptional(a: &BlowupClass, p: i64, q: i64) -> Result<bool> {
    Ok(perfect_exceptional_report(a, p, q)?.perfect)
}
