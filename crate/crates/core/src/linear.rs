//! Exact feasibility of small systems of linear inequalities by
//! Fourier–Motzkin elimination, with a witness point on success.

use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

/// `Σ coeffs[j]·x_j < rhs` when `strict`, else `≤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
    pub strict: bool,
}

impl Inequality {
    pub fn new(coeffs: Vec<BigRational>, rhs: BigRational, strict: bool) -> Self {
        Self {
            coeffs,
            rhs,
            strict,
        }
    }

    fn normalized(mut self) -> Self {
        // Scale so the first nonzero coefficient has magnitude one.
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.coeffs {
                *c /= &lead;
            }
            self.rhs /= &lead;
        }
        self
    }

    fn holds_at(&self, x: &[BigRational]) -> bool {
        let lhs: BigRational = self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
        if self.strict {
            lhs < self.rhs
        } else {
            lhs <= self.rhs
        }
    }
}

/// Returns a point satisfying every inequality, or `None` if the system is
/// infeasible. All rows must have `vars` coefficients.
pub fn find_point(system: &[Inequality], vars: usize) -> Option<Vec<BigRational>> {
    // levels[v] involves only x_0 … x_{v-1}.
    let mut levels: Vec<Vec<Inequality>> = vec![Vec::new(); vars + 1];
    levels[vars] = system.to_vec();
    for v in (0..vars).rev() {
        levels[v] = eliminate(&levels[v + 1], v);
    }
    if !levels[0].iter().all(|row| row.holds_at(&[])) {
        return None;
    }

    let mut point: Vec<BigRational> = Vec::with_capacity(vars);
    for v in 0..vars {
        let value = choose_value(&levels[v + 1], v, &point)?;
        point.push(value);
    }
    debug_assert!(system.iter().all(|row| row.holds_at(&point)));
    Some(point)
}

fn eliminate(rows: &[Inequality], v: usize) -> Vec<Inequality> {
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut out = Vec::new();
    for row in rows {
        let c = &row.coeffs[v];
        if c.is_positive() {
            upper.push(row);
        } else if c.is_negative() {
            lower.push(row);
        } else {
            out.push(row.clone());
        }
    }
    for up in &upper {
        for lo in &lower {
            let cu = up.coeffs[v].clone();
            let cl = -lo.coeffs[v].clone();
            let coeffs: Vec<BigRational> = up
                .coeffs
                .iter()
                .zip(&lo.coeffs)
                .map(|(a, b)| a * &cl + b * &cu)
                .collect();
            let rhs = &up.rhs * &cl + &lo.rhs * &cu;
            out.push(Inequality::new(coeffs, rhs, up.strict || lo.strict));
        }
    }
    let mut out: Vec<_> = out.into_iter().map(Inequality::normalized).collect();
    out.sort_by(|a, b| {
        a.coeffs
            .cmp(&b.coeffs)
            .then(a.rhs.cmp(&b.rhs))
            .then(a.strict.cmp(&b.strict))
    });
    out.dedup();
    out
}

/// Picks `x_v` given `x_0 … x_{v-1}` so that every row of `rows` (which
/// involve only `x_0 … x_v`) holds.
fn choose_value(rows: &[Inequality], v: usize, known: &[BigRational]) -> Option<BigRational> {
    let mut lo: Option<(BigRational, bool)> = None;
    let mut hi: Option<(BigRational, bool)> = None;
    for row in rows {
        let c = &row.coeffs[v];
        if c.is_zero() {
            if !row.holds_at(known) {
                return None;
            }
            continue;
        }
        let rest: BigRational = row.coeffs[..v].iter().zip(known).map(|(a, x)| a * x).sum();
        let bound = (&row.rhs - rest) / c;
        if c.is_positive() {
            let tighter = match &hi {
                None => true,
                Some((h, s)) => bound < *h || (bound == *h && row.strict && !s),
            };
            if tighter {
                hi = Some((bound, row.strict));
            }
        } else {
            let tighter = match &lo {
                None => true,
                Some((l, s)) => bound > *l || (bound == *l && row.strict && !s),
            };
            if tighter {
                lo = Some((bound, row.strict));
            }
        }
    }
    let one = BigRational::one();
    match (lo, hi) {
        (None, None) => Some(BigRational::zero()),
        (Some((l, _)), None) => Some(l + one),
        (None, Some((h, _))) => Some(h - one),
        (Some((l, ls)), Some((h, hs))) => {
            if l < h {
                Some((l + h) / BigRational::from_integer(2.into()))
            } else if l == h && !ls && !hs {
                Some(l)
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn row(c: &[i64], rhs: i64, strict: bool) -> Inequality {
        Inequality::new(c.iter().map(|&v| q(v)).collect(), q(rhs), strict)
    }

    #[test]
    fn feasible_triangle() {
        // x ≥ 1, y ≥ 1, x + y < 3
        let sys = [
            row(&[-1, 0], -1, false),
            row(&[0, -1], -1, false),
            row(&[1, 1], 3, true),
        ];
        let p = find_point(&sys, 2).unwrap();
        assert!(sys.iter().all(|r| r.holds_at(&p)));
    }

    #[test]
    fn strictness_matters() {
        // x ≥ 1, x ≤ 1 is feasible; x ≥ 1, x < 1 is not.
        assert_eq!(
            find_point(&[row(&[-1], -1, false), row(&[1], 1, false)], 1),
            Some(vec![q(1)])
        );
        assert_eq!(
            find_point(&[row(&[-1], -1, false), row(&[1], 1, true)], 1),
            None
        );
    }

    #[test]
    fn infeasible_cone() {
        // x ≥ 1, y ≥ 1, x ≤ y, y ≤ x, x − y < 0
        let sys = [
            row(&[-1, 0], -1, false),
            row(&[0, -1], -1, false),
            row(&[1, -1], 0, false),
            row(&[-1, 1], 0, false),
            row(&[1, -1], 0, true),
        ];
        assert_eq!(find_point(&sys, 2), None);
    }

    #[test]
    fn no_constraints() {
        assert_eq!(find_point(&[], 3), Some(vec![q(0), q(0), q(0)]));
    }
}
