//! Combinatorics of the `(p,q)` cusp `{x^p + y^q = 0}`: the square
//! decomposition of the `p × q` rectangle, continued fractions, and the
//! exceptional divisor chain of its normal-crossing resolution.

use std::fmt::{self, Write as _};

use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn require_coprime(p: i64, q: i64) -> Result<()> {
    if p < 1 || q < 1 {
        return Err(Error::domain(format!(
            "cusp parameters must be positive, got ({p}, {q})"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSequence {
    pub p: i64,
    pub q: i64,
    pub weights: Vec<i64>,
}

impl WeightSequence {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn sum_of_squares(&self) -> i64 {
        self.weights.iter().map(|m| m * m).sum()
    }

    /// Lengths of the runs of equal weights.
    pub fn multiplicities(&self) -> Vec<i64> {
        let mut out: Vec<i64> = Vec::new();
        let mut prev = None;
        for &w in &self.weights {
            if prev == Some(w) {
                *out.last_mut().expect("run started") += 1;
            } else {
                out.push(1);
                prev = Some(w);
            }
        }
        out
    }
}

/// Side lengths of the squares cut off by the subtractive Euclidean algorithm.
pub fn weight_sequence(p: i64, q: i64) -> Result<WeightSequence> {
    require_coprime(p, q)?;
    let (mut a, mut b) = (p.max(q), p.min(q));
    let mut weights = Vec::new();
    while b > 0 {
        weights.extend(std::iter::repeat_n(b, (a / b) as usize));
        (a, b) = (b, a % b);
    }
    Ok(WeightSequence { p, q, weights })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareKind {
    Horizontal,
    Vertical,
    Last,
}

impl fmt::Display for SquareKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareKind::Horizontal => "hor",
            SquareKind::Vertical => "ver",
            SquareKind::Last => "last",
        })
    }
}

/// A square of the box diagram with lower-left corner `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Square {
    pub size: i64,
    pub x: i64,
    pub y: i64,
    pub kind: SquareKind,
}

impl Square {
    fn right(&self) -> i64 {
        self.x + self.size
    }

    fn top(&self) -> i64 {
        self.y + self.size
    }

    /// Whether `other` shares a boundary segment of positive length with the
    /// right or top side of `self`.
    pub fn is_followed_by(&self, other: &Square) -> bool {
        let overlap = |a0: i64, a1: i64, b0: i64, b1: i64| a1.min(b1) > a0.max(b0);
        (other.x == self.right() && overlap(self.y, self.top(), other.y, other.top()))
            || (other.y == self.top() && overlap(self.x, self.right(), other.x, other.right()))
    }
}

/// The rectangle `[0,p] × [0,q]` tiled by squares, each placed flush with
/// the lower-left corner of what remains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxDiagram {
    pub p: i64,
    pub q: i64,
    pub squares: Vec<Square>,
}

impl BoxDiagram {
    pub fn count(&self, kind: SquareKind) -> usize {
        self.squares.iter().filter(|s| s.kind == kind).count()
    }

    pub fn area(&self) -> i64 {
        self.squares.iter().map(|s| s.size * s.size).sum()
    }
}

pub fn box_diagram(p: i64, q: i64) -> Result<BoxDiagram> {
    require_coprime(p, q)?;
    let (mut x, mut y, mut w, mut h) = (0, 0, p, q);
    let mut placed = Vec::new();
    while w > 0 && h > 0 {
        if w >= h {
            placed.push((h, x, y));
            x += h;
            w -= h;
        } else {
            placed.push((w, x, y));
            y += w;
            h -= w;
        }
    }
    let last = placed.len() - 1;
    let squares = placed
        .into_iter()
        .enumerate()
        .map(|(i, (size, x, y))| {
            let kind = if i == last {
                SquareKind::Last
            } else if y + size == q {
                SquareKind::Horizontal
            } else if x + size == p {
                SquareKind::Vertical
            } else {
                unreachable!("every square but the last touches the top or right side")
            };
            Square { size, x, y, kind }
        })
        .collect();
    Ok(BoxDiagram { p, q, squares })
}

/// Regular continued fraction coefficients of `p/q`, read off as the
/// multiplicities of the distinct weights.
pub fn cf_plus(p: i64, q: i64) -> Result<Vec<i64>> {
    require_coprime(p, q)?;
    if p <= q && !(p == 1 && q == 1) {
        return Err(Error::domain(format!("expected p > q, got ({p}, {q})")));
    }
    Ok(weight_sequence(p, q)?.multiplicities())
}

/// `c_1 + 1/(c_2 + 1/(… + 1/c_k))`.
pub fn eval_cf_plus(coeffs: &[i64]) -> Option<BigRational> {
    let (last, rest) = coeffs.split_last()?;
    let mut value = BigRational::from_integer((*last).into());
    for &c in rest.iter().rev() {
        if value.is_zero() {
            return None;
        }
        value = BigRational::from_integer(c.into()) + value.recip();
    }
    Some(value)
}

/// `c_1 − 1/(c_2 − 1/(… − 1/c_k))`; `None` for an empty list or a zero
/// denominator along the way.
pub fn eval_cf_minus(coeffs: &[i64]) -> Option<BigRational> {
    let (last, rest) = coeffs.split_last()?;
    let mut value = BigRational::from_integer((*last).into());
    for &c in rest.iter().rev() {
        if value.is_zero() {
            return None;
        }
        value = BigRational::from_integer(c.into()) - value.recip();
    }
    Some(value)
}

/// Self-intersection magnitudes of the horizontal and vertical chains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HjExpansions {
    pub hor: Vec<i64>,
    pub ver: Vec<i64>,
}

pub fn hj_expansions(p: i64, q: i64) -> Result<HjExpansions> {
    require_coprime(p, q)?;
    if p <= q {
        return Err(Error::domain(format!("expected p > q, got ({p}, {q})")));
    }
    let chain = chain_classes(p, q)?;
    let pick = |kind| {
        chain
            .labels
            .iter()
            .zip(&chain.self_ints)
            .filter(|(l, _)| **l == kind)
            .map(|(_, s)| -s)
            .collect()
    };
    Ok(HjExpansions {
        hor: pick(SquareKind::Horizontal),
        ver: pick(SquareKind::Vertical),
    })
}

/// The exceptional curves `F_1, …, F_L` of the resolution, with classes in
/// the basis `e_1, …, e_L` of exceptional spheres of the individual blowups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorChain {
    pub p: i64,
    pub q: i64,
    pub weights: Vec<i64>,
    pub classes: Vec<Vec<i64>>,
    pub self_ints: Vec<i64>,
    pub adjacency: Vec<Vec<u8>>,
    pub labels: Vec<SquareKind>,
}

impl DivisorChain {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Product under `diag(−1, …, −1)`.
    pub fn product(&self, i: usize, j: usize) -> i64 {
        -self.classes[i]
            .iter()
            .zip(&self.classes[j])
            .map(|(a, b)| a * b)
            .sum::<i64>()
    }
}

pub fn chain_classes(p: i64, q: i64) -> Result<DivisorChain> {
    let diagram = box_diagram(p, q)?;
    let squares = &diagram.squares;
    let len = squares.len();
    let classes: Vec<Vec<i64>> = (0..len)
        .map(|i| {
            let mut class = vec![0; len];
            class[i] = 1;
            for j in i + 1..len {
                if squares[i].is_followed_by(&squares[j]) {
                    class[j] = -1;
                }
            }
            class
        })
        .collect();
    let self_ints = classes
        .iter()
        .map(|c| -c.iter().map(|v| v * v).sum::<i64>())
        .collect();
    let mut chain = DivisorChain {
        p,
        q,
        weights: squares.iter().map(|s| s.size).collect(),
        classes,
        self_ints,
        adjacency: Vec::new(),
        labels: squares.iter().map(|s| s.kind).collect(),
    };
    chain.adjacency = (0..len)
        .map(|i| {
            (0..len)
                .map(|j| u8::from(i != j && chain.product(i, j) != 0))
                .collect()
        })
        .collect();
    Ok(chain)
}

/// Converts Newton–Puiseux pairs `(p_i, r_i)` to cabling parameters
/// `(p_i, s_i)` with `s_1 = r_1` and `s_i = r_i − r_{i−1} p_i + p_{i−1} p_i s_{i−1}`.
pub fn puiseux_to_cabling(pairs: &[(i64, i64)]) -> Result<Vec<(i64, i64)>> {
    if pairs.is_empty() {
        return Err(Error::domain("at least one Puiseux pair is required"));
    }
    let overflow = || Error::domain("cabling parameter overflows i64");
    let mut denom: i64 = 1;
    let mut prev_exponent: Option<BigRational> = None;
    for (i, &(p, r)) in pairs.iter().enumerate() {
        if p < 1 || r < 1 {
            return Err(Error::domain(format!(
                "pair {} = ({p}, {r}) must be positive",
                i + 1
            )));
        }
        if p.gcd(&r) != 1 {
            return Err(Error::domain(format!(
                "pair {} = ({p}, {r}) is not relatively prime",
                i + 1
            )));
        }
        denom = denom.checked_mul(p).ok_or_else(overflow)?;
        let exponent = BigRational::new(r.into(), denom.into());
        if prev_exponent.as_ref().is_some_and(|e| *e >= exponent) {
            return Err(Error::domain(format!(
                "exponent {r}/{denom} of pair {} does not increase",
                i + 1
            )));
        }
        prev_exponent = Some(exponent);
    }

    let mut out = vec![pairs[0]];
    for w in pairs.windows(2) {
        let ((p_prev, r_prev), (p, r)) = (w[0], w[1]);
        let s_prev = out.last().expect("nonempty").1;
        let s = r
            .checked_sub(r_prev.checked_mul(p).ok_or_else(overflow)?)
            .and_then(|v| v.checked_add(p_prev.checked_mul(p)?.checked_mul(s_prev)?))
            .ok_or_else(overflow)?;
        out.push((p, s));
    }
    Ok(out)
}

/// Number of double points forced by adjunction on a rational curve in
/// class `A` with one `(p,q)` cusp: `½(2 + A·A − c_1(A) − (p−1)(q−1))`.
pub fn double_points(self_int: i64, c1: i64, p: i64, q: i64) -> Result<i64> {
    let numerator = 2 + self_int - c1 - (p - 1) * (q - 1);
    if numerator.is_odd() {
        return Err(Error::NonIntegral { numerator });
    }
    if numerator < 0 {
        return Err(Error::NegativeCount {
            value: numerator / 2,
        });
    }
    Ok(numerator / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg { scale: u32 },
}

fn label(i: usize) -> char {
    std::char::from_digit((i % 36) as u32, 36).expect("digit below 36")
}

/// Renders the box diagram. ASCII marks each unit cell with the base-36
/// index of its square, top row first; SVG emits one `rect` per square.
pub fn render_box(p: i64, q: i64, format: RenderFormat) -> Result<String> {
    let diagram = box_diagram(p, q)?;
    match format {
        RenderFormat::Ascii => {
            let mut grid = vec![vec![' '; p as usize]; q as usize];
            for (i, s) in diagram.squares.iter().enumerate() {
                for row in s.y..s.top() {
                    for col in s.x..s.right() {
                        grid[row as usize][col as usize] = label(i);
                    }
                }
            }
            let mut out = String::new();
            for row in grid.iter().rev() {
                out.extend(row);
                out.push('\n');
            }
            Ok(out)
        }
        RenderFormat::Svg { scale } => {
            if scale == 0 {
                return Err(Error::domain("scale must be positive"));
            }
            let k = i64::from(scale);
            let mut out = String::new();
            let _ = writeln!(
                out,
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
                p * k,
                q * k,
                p * k,
                q * k
            );
            for (i, s) in diagram.squares.iter().enumerate() {
                let _ = writeln!(
                    out,
                    r#"  <rect x="{}" y="{}" width="{}" height="{}" class="{}" data-index="{}" fill="{}" stroke="black"/>"#,
                    s.x * k,
                    (q - s.top()) * k,
                    s.size * k,
                    s.size * k,
                    s.kind,
                    i + 1,
                    match s.kind {
                        SquareKind::Horizontal => "#cfe3f7",
                        SquareKind::Vertical => "#f7dccf",
                        SquareKind::Last => "#d9f2cf",
                    }
                );
            }
            out.push_str("</svg>\n");
            Ok(out)
        }
    }
}

/// `r(p,q)`, the remainder of `p` divided by `q`, and the two fractions the
/// chains expand: `p/(p−q)` and `q/(q−r)`.
pub fn hj_targets(p: i64, q: i64) -> (BigRational, BigRational) {
    let r = p % q;
    (
        BigRational::new(p.into(), (p - q).into()),
        BigRational::new(q.into(), (q - r).into()),
    )
}

/// Tolerates the empty vertical chain when `q = 1`, where `q/(q−r) = 1`.
pub fn hj_matches(p: i64, q: i64, hj: &HjExpansions) -> bool {
    let (hor_target, ver_target) = hj_targets(p, q);
    let ver_ok = if hj.ver.is_empty() {
        ver_target.is_one()
    } else {
        eval_cf_minus(&hj.ver) == Some(ver_target)
    };
    eval_cf_minus(&hj.hor) == Some(hor_target) && ver_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(
            weight_sequence(51, 23).unwrap().weights,
            vec![23, 23, 5, 5, 5, 5, 3, 2, 1, 1]
        );
        assert_eq!(weight_sequence(3, 2).unwrap().weights, vec![2, 1, 1]);
        assert_eq!(weight_sequence(7, 1).unwrap().weights, vec![1; 7]);
        assert_eq!(weight_sequence(1, 1).unwrap().weights, vec![1]);
        assert_eq!(weight_sequence(4, 6), Err(Error::NotCoprime { p: 4, q: 6 }));
        assert!(weight_sequence(0, 1).is_err());
    }

    #[test]
    fn trefoil_box() {
        let b = box_diagram(3, 2).unwrap();
        let placed: Vec<_> = b
            .squares
            .iter()
            .map(|s| (s.size, s.x, s.y, s.kind))
            .collect();
        assert_eq!(
            placed,
            vec![
                (2, 0, 0, SquareKind::Horizontal),
                (1, 2, 0, SquareKind::Vertical),
                (1, 2, 1, SquareKind::Last)
            ]
        );
        let single = box_diagram(1, 1).unwrap();
        assert_eq!(single.squares.len(), 1);
        assert_eq!(single.squares[0].kind, SquareKind::Last);
    }

    #[test]
    fn big_box_counts() {
        let b = box_diagram(51, 23).unwrap();
        assert_eq!(b.count(SquareKind::Horizontal), 4);
        assert_eq!(b.count(SquareKind::Vertical), 5);
        assert_eq!(b.count(SquareKind::Last), 1);
        assert_eq!(b.area(), 51 * 23);
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(cf_plus(51, 23).unwrap(), vec![2, 4, 1, 1, 2]);
        assert_eq!(cf_plus(3, 2).unwrap(), vec![1, 2]);
        assert_eq!(cf_plus(9, 1).unwrap(), vec![9]);
        assert_eq!(
            eval_cf_plus(&[2, 4, 1, 1, 2]),
            Some(BigRational::new(51.into(), 23.into()))
        );
        assert_eq!(
            eval_cf_minus(&[2, 6, 3, 2]),
            Some(BigRational::new(51.into(), 28.into()))
        );
        assert_eq!(eval_cf_minus(&[]), None);
    }

    #[test]
    fn hirzebruch_jung() {
        let hj = hj_expansions(51, 23).unwrap();
        assert_eq!(hj.hor, vec![2, 6, 3, 2]);
        assert_eq!(hj.ver, vec![2, 2, 2, 3, 3]);
        assert!(hj_matches(51, 23, &hj));
        let hj = hj_expansions(3, 2).unwrap();
        assert_eq!((hj.hor, hj.ver), (vec![3], vec![2]));
        let hj = hj_expansions(5, 1).unwrap();
        assert!(hj.ver.is_empty());
        assert!(hj_matches(5, 1, &hj));
    }

    #[test]
    fn trefoil_chain() {
        let c = chain_classes(3, 2).unwrap();
        assert_eq!(
            c.classes,
            vec![vec![1, -1, -1], vec![0, 1, -1], vec![0, 0, 1]]
        );
        assert_eq!(c.self_ints, vec![-3, -2, -1]);
        assert_eq!(
            c.adjacency,
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 0]]
        );
        let c = chain_classes(2, 1).unwrap();
        assert_eq!(c.classes, vec![vec![1, -1], vec![0, 1]]);
        assert_eq!(c.self_ints, vec![-2, -1]);
    }

    #[test]
    fn last_curve_meets_last_of_each_chain() {
        for (p, q) in [(51, 23), (3, 2), (13, 8), (7, 3)] {
            let c = chain_classes(p, q).unwrap();
            let last = c.len() - 1;
            assert_eq!(c.self_ints[last], -1);
            let partners: Vec<usize> = (0..last).filter(|&i| c.adjacency[last][i] == 1).collect();
            let final_of = |kind| (0..last).rfind(|&i| c.labels[i] == kind).unwrap();
            let mut expected = vec![
                final_of(SquareKind::Horizontal),
                final_of(SquareKind::Vertical),
            ];
            expected.sort_unstable();
            assert_eq!(partners, expected);
        }
    }

    #[test]
    fn puiseux() {
        assert_eq!(puiseux_to_cabling(&[(2, 3)]).unwrap(), vec![(2, 3)]);
        assert_eq!(
            puiseux_to_cabling(&[(2, 3), (2, 7)]).unwrap(),
            vec![(2, 3), (2, 13)]
        );
        assert_eq!(puiseux_to_cabling(&[(5, 8)]).unwrap(), vec![(5, 8)]);
        assert!(puiseux_to_cabling(&[(2, 4)]).is_err());
        assert!(puiseux_to_cabling(&[(2, 3), (2, 5)]).is_err());
        assert!(puiseux_to_cabling(&[]).is_err());
    }

    #[test]
    fn adjunction() {
        assert_eq!(double_points(0, 2, 1, 1), Ok(0));
        assert_eq!(double_points(9, 9, 8, 1), Ok(1));
        // Proper transform exceptional: A·A = −1 + pq, c1 = p + q.
        assert_eq!(double_points(-1 + 22, 13, 11, 2), Ok(0));
        assert_eq!(
            double_points(0, 1, 1, 1),
            Err(Error::NonIntegral { numerator: 1 })
        );
        assert_eq!(
            double_points(-4, 0, 1, 1),
            Err(Error::NegativeCount { value: -1 })
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(render_box(1, 1, RenderFormat::Ascii).unwrap(), "0\n");
        assert_eq!(render_box(3, 2, RenderFormat::Ascii).unwrap(), "002\n001\n");
        let svg = render_box(51, 23, RenderFormat::Svg { scale: 4 }).unwrap();
        assert_eq!(svg.matches("<rect").count(), 10);
        assert!(svg.contains(r#"width="204" height="92""#));
    }
}
