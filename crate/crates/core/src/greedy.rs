//! Greedy elements `x[a1, a2]` of `A(b, c)`, by three independent methods,
//! with the support bounds of their pointed grids and the `d(p, q)` statistic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{multiset_row, plus_part};
use crate::dyck::{count_compatible, max_dyck_path, DyckError};
use crate::laurent::LaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GreedyError {
    #[error("nonzero coefficient outside the support rectangle at ({0},{1})")]
    OutsideRectangle(usize, usize),
    #[error("branch mismatch on tie at ({0},{1})")]
    BranchMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Dyck(#[from] DyckError),
}

/// A pointed element `x1^{-a1} x2^{-a2} sum c(p,q) x1^{bp} x2^{cq}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedElement {
    pub b: u32,
    pub c: u32,
    pub a1: i64,
    pub a2: i64,
    /// Nonzero coefficients only.
    pub grid: BTreeMap<(usize, usize), BigInt>,
}

impl PointedElement {
    pub fn coeff(&self, p: usize, q: usize) -> BigInt {
        self.grid.get(&(p, q)).cloned().unwrap_or_default()
    }

    /// The pointed support `{(p,q) : c(p,q) != 0}`.
    pub fn pointed_support(&self) -> BTreeSet<(usize, usize)> {
        self.grid.keys().copied().collect()
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        let (b, c) = (self.b as i64, self.c as i64);
        LaurentPoly::from_terms(
            self.grid.iter().map(|(&(p, q), v)| ((-self.a1 + b * p as i64, -self.a2 + c * q as i64), v.clone())),
        )
    }

    /// Reads a polynomial as pointed: its lex-min monomial `x1^{-a1} x2^{-a2}`
    /// has coefficient 1 and every other exponent differs from it by
    /// `(bp, cq)` with `p, q >= 0`.
    pub fn from_laurent(b: u32, c: u32, x: &LaurentPoly) -> Option<PointedElement> {
        let ((d1, d2), lead) = x.lex_min()?;
        if !lead.is_one() {
            return None;
        }
        let (b64, c64) = (b as i64, c as i64);
        let mut grid = BTreeMap::new();
        for (&(e1, e2), v) in x.terms() {
            let (s1, s2) = (e1 - d1, e2 - d2);
            if s1 < 0 || s2 < 0 || s1 % b64 != 0 || s2 % c64 != 0 {
                return None;
            }
            grid.insert(((s1 / b64) as usize, (s2 / c64) as usize), v.clone());
        }
        Some(PointedElement { b, c, a1: -d1, a2: -d2, grid })
    }

    /// Dense rows `c(p, 0..=[a1]_+)` for `p = 0..=[a2]_+`.
    pub fn dense_grid(&self) -> Vec<Vec<BigInt>> {
        let (rows, cols) = (plus_part(self.a2) as usize + 1, plus_part(self.a1) as usize + 1);
        (0..rows).map(|p| (0..cols).map(|q| self.coeff(p, q)).collect()).collect()
    }

    /// `d(p,q) = sum_{k=0}^{q} (-1)^k c(p,q-k) binom(a1-bp+k-1, k)`, for `bp < a1`.
    pub fn d_stat(&self, p: usize, q: usize) -> Result<BigInt, GreedyError> {
        let n = self.a1 - self.b as i64 * p as i64;
        if n <= 0 {
            return Err(GreedyError::Precondition(format!("bp < a1 violated at p={p}")));
        }
        let row = multiset_row(n, q + 1);
        let mut acc = BigInt::zero();
        for (k, bin) in row.iter().enumerate() {
            let term = self.coeff(p, q - k) * bin;
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for PointedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_laurent())
    }
}

/// Which method produced or should produce a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    MaxRecurrence,
    LinearRecurrence,
    Dyck,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::MaxRecurrence, Method::LinearRecurrence, Method::Dyck];

    pub fn name(self) -> &'static str {
        match self {
            Method::MaxRecurrence => "recurrence",
            Method::LinearRecurrence => "linear",
            Method::Dyck => "dyck",
        }
    }

    pub fn applies(self, a1: i64, a2: i64) -> bool {
        self != Method::LinearRecurrence || (a1 > 0 && a2 > 0)
    }
}

pub fn greedy(b: u32, c: u32, a1: i64, a2: i64, method: Method) -> Result<PointedElement, GreedyError> {
    match method {
        Method::MaxRecurrence => greedy_max_recurrence(b, c, a1, a2),
        Method::LinearRecurrence => greedy_linear_recurrence(b, c, a1, a2),
        Method::Dyck => greedy_dyck(b, c, a1, a2),
    }
}

fn check_seed(b: u32, c: u32) -> Result<(), GreedyError> {
    if b == 0 || c == 0 {
        return Err(GreedyError::Precondition(format!("b and c must be positive, got ({b},{c})")));
    }
    Ok(())
}

// Binomial rows for the two alternating sums at (p,q).
struct Sums {
    // rows_q[q][k] = binom(a2 - cq + k - 1, k), rows_p[p][k] = binom(a1 - bp + k - 1, k)
    rows_q: Vec<Vec<BigInt>>,
    rows_p: Vec<Vec<BigInt>>,
}

fn alternating(terms: impl Iterator<Item = BigInt>) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, t) in terms.enumerate() {
        if i % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

impl Sums {
    fn new(b: u32, c: u32, a1: i64, a2: i64, pmax: usize, qmax: usize) -> Sums {
        Sums {
            rows_q: (0..=qmax).map(|q| multiset_row(a2 - c as i64 * q as i64, pmax + 1)).collect(),
            rows_p: (0..=pmax).map(|p| multiset_row(a1 - b as i64 * p as i64, qmax + 1)).collect(),
        }
    }

    fn first(&self, grid: &[Vec<BigInt>], p: usize, q: usize) -> BigInt {
        alternating((1..=p).map(|k| &grid[p - k][q] * &self.rows_q[q][k]))
    }

    fn second(&self, grid: &[Vec<BigInt>], p: usize, q: usize) -> BigInt {
        alternating((1..=q).map(|k| &grid[p][q - k] * &self.rows_p[p][k]))
    }
}

// Fills the rectangle plus one border row and column in (p+q, p) order and
// checks the border vanishes.
fn run_recurrence<F>(b: u32, c: u32, a1: i64, a2: i64, mut rule: F) -> Result<PointedElement, GreedyError>
where
    F: FnMut(&Sums, &[Vec<BigInt>], usize, usize) -> Result<BigInt, GreedyError>,
{
    check_seed(b, c)?;
    let (pmax, qmax) = (plus_part(a2) as usize + 1, plus_part(a1) as usize + 1);
    let sums = Sums::new(b, c, a1, a2, pmax, qmax);
    let mut grid = vec![vec![BigInt::zero(); qmax + 1]; pmax + 1];
    grid[0][0] = BigInt::one();
    for total in 1..=pmax + qmax {
        for p in total.saturating_sub(qmax)..=total.min(pmax) {
            let q = total - p;
            let v = rule(&sums, &grid, p, q)?;
            if !v.is_zero() && (p == pmax || q == qmax) {
                return Err(GreedyError::OutsideRectangle(p, q));
            }
            grid[p][q] = v;
        }
    }
    let mut out = BTreeMap::new();
    for (p, row) in grid.into_iter().enumerate() {
        for (q, v) in row.into_iter().enumerate() {
            if !v.is_zero() {
                out.insert((p, q), v);
            }
        }
    }
    Ok(PointedElement { b, c, a1, a2, grid: out })
}

/// Greedy element from `c(p,q) = max(first sum, second sum)`.
pub fn greedy_max_recurrence(b: u32, c: u32, a1: i64, a2: i64) -> Result<PointedElement, GreedyError> {
    run_recurrence(b, c, a1, a2, |s, g, p, q| Ok(s.first(g, p, q).max(s.second(g, p, q))))
}

/// Greedy element from the branch rule: first sum when `c a1 q < b a2 p`,
/// second when greater, both (asserted equal) on a tie.
pub fn greedy_linear_recurrence(b: u32, c: u32, a1: i64, a2: i64) -> Result<PointedElement, GreedyError> {
    if a1 <= 0 || a2 <= 0 {
        return Err(GreedyError::Precondition(format!("linear recurrence needs a1, a2 > 0, got ({a1},{a2})")));
    }
    let (lhs_k, rhs_k) = (c as i128 * a1 as i128, b as i128 * a2 as i128);
    run_recurrence(b, c, a1, a2, |s, g, p, q| {
        let (lhs, rhs) = (lhs_k * q as i128, rhs_k * p as i128);
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => Ok(s.first(g, p, q)),
            std::cmp::Ordering::Greater => Ok(s.second(g, p, q)),
            std::cmp::Ordering::Equal => {
                let (x, y) = (s.first(g, p, q), s.second(g, p, q));
                if x == y {
                    Ok(x)
                } else {
                    Err(GreedyError::BranchMismatch(p, q))
                }
            }
        }
    })
}

/// Greedy element from counting compatible pairs on `D^{[a1]_+ x [a2]_+}`.
pub fn greedy_dyck(b: u32, c: u32, a1: i64, a2: i64) -> Result<PointedElement, GreedyError> {
    check_seed(b, c)?;
    let path = max_dyck_path(plus_part(a1) as usize, plus_part(a2) as usize);
    let counts = count_compatible(&path, b as usize, c as usize)?;
    let mut grid = BTreeMap::new();
    for (p, row) in counts.into_iter().enumerate() {
        for (q, v) in row.into_iter().enumerate() {
            if !v.is_zero() {
                grid.insert((p, q), v);
            }
        }
    }
    Ok(PointedElement { b, c, a1, a2, grid })
}

/// A rational point `(p, q)`.
pub type RatPoint = (BigRational, BigRational);

/// Upper bound for a pointed support: a polygon in `(p, q)` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportRegion {
    /// Which of the six cases applies.
    pub case: u8,
    pub vertices: Vec<RatPoint>,
    /// `edge_included[i]` is for the edge from `vertices[i]` to `vertices[i+1]` (cyclically).
    pub edge_included: Vec<bool>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn cross(o: &RatPoint, a: &RatPoint, b: &RatPoint) -> BigRational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

fn on_segment(a: &RatPoint, b: &RatPoint, x: &RatPoint) -> bool {
    cross(a, b, x).is_zero()
        && x.0 >= a.0.clone().min(b.0.clone())
        && x.0 <= a.0.clone().max(b.0.clone())
        && x.1 >= a.1.clone().min(b.1.clone())
        && x.1 <= a.1.clone().max(b.1.clone())
}

impl SupportRegion {
    fn edges(&self) -> impl Iterator<Item = (&RatPoint, &RatPoint, bool)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n], self.edge_included[i]))
    }

    // even-odd rule; only called for points off the boundary
    fn strictly_inside(&self, x: &RatPoint) -> bool {
        if self.vertices.len() < 3 {
            return false;
        }
        let mut inside = false;
        for (a, b, _) in self.edges() {
            if (a.1 > x.1) != (b.1 > x.1) {
                let t = (&x.1 - &a.1) / (&b.1 - &a.1);
                let cross_x = &a.0 + t * (&b.0 - &a.0);
                if x.0 < cross_x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn contains(&self, p: i64, q: i64) -> bool {
        let x = (rat(p), rat(q));
        let mut on_boundary = false;
        for (a, b, included) in self.edges() {
            if on_segment(a, b, &x) {
                if included {
                    return true;
                }
                on_boundary = true;
            }
        }
        !on_boundary && self.strictly_inside(&x)
    }

    /// All lattice points of the region, sorted.
    pub fn lattice_points(&self) -> BTreeSet<(usize, usize)> {
        let ceil = |r: &BigRational| -> i64 {
            let v = r.ceil().to_integer();
            i64::try_from(v).unwrap_or(i64::MAX)
        };
        let pmax = self.vertices.iter().map(|v| ceil(&v.0)).max().unwrap_or(0);
        let qmax = self.vertices.iter().map(|v| ceil(&v.1)).max().unwrap_or(0);
        let mut out = BTreeSet::new();
        for p in 0..=pmax {
            for q in 0..=qmax {
                if self.contains(p, q) {
                    out.insert((p as usize, q as usize));
                }
            }
        }
        out
    }
}

/// The region bounding the pointed support of `x[a1, a2]`, by the first of
/// the six cases whose condition holds.
pub fn support_region(b: u32, c: u32, a1: i64, a2: i64) -> SupportRegion {
    let (b, c) = (b as i64, c as i64);
    let pt = |p: i64, q: i64| (rat(p), rat(q));
    let closed = |case: u8, vertices: Vec<RatPoint>| {
        let n = vertices.len();
        SupportRegion { case, vertices, edge_included: vec![true; n] }
    };
    if a1 <= 0 && a2 <= 0 {
        closed(1, vec![pt(0, 0)])
    } else if a1 <= 0 {
        closed(2, vec![pt(0, 0), pt(a2, 0)])
    } else if a2 <= 0 {
        closed(3, vec![pt(0, 0), pt(0, a1)])
    } else if a1 >= b * a2 {
        closed(4, vec![pt(0, 0), pt(a2, 0), pt(a2, a1 - b * a2), pt(0, a1)])
    } else if a2 >= c * a1 {
        closed(5, vec![pt(0, 0), pt(a2, 0), pt(a2 - c * a1, a1), pt(0, a1)])
    } else {
        let corner =
            (BigRational::new(BigInt::from(a1), BigInt::from(b)), BigRational::new(BigInt::from(a2), BigInt::from(c)));
        SupportRegion {
            case: 6,
            vertices: vec![pt(0, 0), pt(a2, 0), corner, pt(0, a1)],
            edge_included: vec![true, false, false, true],
        }
    }
}

/// `c(p,q)` is at least each alternating sum at every nonzero `(p,q)`;
/// returns the first violating point if any.
pub fn inequality_violation(e: &PointedElement) -> Option<(usize, usize)> {
    let dense = e.dense_grid();
    let (rows, cols) = (dense.len(), dense[0].len());
    // one extra row and column of zeros
    let mut grid = vec![vec![BigInt::zero(); cols + 1]; rows + 1];
    for (p, row) in dense.into_iter().enumerate() {
        for (q, v) in row.into_iter().enumerate() {
            grid[p][q] = v;
        }
    }
    let sums = Sums::new(e.b, e.c, e.a1, e.a2, rows, cols);
    for p in 0..=rows {
        for q in 0..=cols {
            if (p, q) == (0, 0) {
                continue;
            }
            let v = &grid[p][q];
            if v < &sums.first(&grid, p, q) || v < &sums.second(&grid, p, q) {
                return Some((p, q));
            }
        }
    }
    None
}

/// True if every coefficient in the pointed grid is nonnegative.
pub fn has_nonnegative_grid(e: &PointedElement) -> bool {
    e.grid.values().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_of(entries: &[((usize, usize), i64)]) -> BTreeMap<(usize, usize), BigInt> {
        entries.iter().map(|&(k, v)| (k, BigInt::from(v))).collect()
    }

    fn x33_grid() -> BTreeMap<(usize, usize), BigInt> {
        grid_of(&[
            ((0, 0), 1),
            ((0, 1), 3),
            ((0, 2), 3),
            ((0, 3), 1),
            ((1, 0), 3),
            ((2, 0), 3),
            ((3, 0), 1),
            ((1, 1), 3),
        ])
    }

    #[test]
    fn worked_example_all_methods() {
        for m in Method::ALL {
            let e = greedy(3, 2, 3, 3, m).unwrap();
            assert_eq!(e.grid, x33_grid(), "{m:?}");
        }
    }

    #[test]
    fn nonpositive_pointing_is_a_monomial() {
        let e = greedy_max_recurrence(4, 1, -2, -3).unwrap();
        assert_eq!(e.grid, grid_of(&[((0, 0), 1)]));
        assert_eq!(e.to_laurent(), LaurentPoly::x(2, 3));
    }

    #[test]
    fn small_hand_values() {
        let e = greedy_max_recurrence(2, 2, 1, 1).unwrap();
        assert_eq!(e.grid, grid_of(&[((0, 0), 1), ((1, 0), 1), ((0, 1), 1)]));
        let e = greedy_linear_recurrence(2, 2, 2, 2).unwrap();
        assert_eq!(e.grid, grid_of(&[((0, 0), 1), ((1, 0), 2), ((0, 1), 2), ((2, 0), 1), ((0, 2), 1)]));
        let e = greedy_linear_recurrence(1, 1, 1, 1).unwrap();
        assert_eq!(e.grid, grid_of(&[((0, 0), 1), ((1, 0), 1), ((0, 1), 1)]));
        assert!(greedy_linear_recurrence(1, 1, 0, 1).is_err());
    }

    #[test]
    fn quarter_plane_closed_form() {
        let e = greedy_max_recurrence(2, 2, -1, 1).unwrap();
        assert_eq!(e.to_laurent(), LaurentPoly::from_terms([((1, -1), 1), ((3, -1), 1)]));
        assert!(greedy_dyck(5, 7, 0, 0).unwrap().to_laurent().is_one());
    }

    #[test]
    fn to_laurent_of_worked_example() {
        let x = greedy_max_recurrence(3, 2, 3, 3).unwrap().to_laurent();
        assert_eq!(x.len(), 8);
        let back = PointedElement::from_laurent(3, 2, &x).unwrap();
        assert_eq!((back.a1, back.a2), (3, 3));
        assert_eq!(back.grid, x33_grid());
    }

    #[test]
    fn support_region_cases() {
        let r = support_region(3, 3, -1, 1);
        assert_eq!(r.case, 2);
        assert_eq!(r.lattice_points(), [(0, 0), (1, 0)].into_iter().collect());
        let r = support_region(2, 2, 1, 1);
        assert_eq!(r.case, 6);
        assert_eq!(r.lattice_points(), [(0, 0), (1, 0), (0, 1)].into_iter().collect());
        let r = support_region(1, 1, 5, 2);
        assert_eq!(r.case, 4);
        assert_eq!(r.vertices, vec![(rat(0), rat(0)), (rat(2), rat(0)), (rat(2), rat(3)), (rat(0), rat(5))]);
        assert!(r.contains(2, 3) && r.contains(1, 4) && !r.contains(2, 4));
        assert_eq!(support_region(1, 1, 0, 0).case, 1);
        assert_eq!(support_region(1, 1, 2, -1).case, 3);
        assert_eq!(support_region(1, 2, 1, 3).case, 5);
    }

    #[test]
    fn d_stat_basics() {
        let e = greedy_max_recurrence(3, 2, 3, 3).unwrap();
        for q in 0..=3 {
            assert!(!e.d_stat(0, q).unwrap().is_negative());
        }
        assert_eq!(e.d_stat(0, 0).unwrap(), e.coeff(0, 0));
        assert!(e.d_stat(1, 0).is_err());
    }

    #[test]
    fn inequality_holds_on_worked_example() {
        assert_eq!(inequality_violation(&greedy_max_recurrence(3, 2, 3, 3).unwrap()), None);
        let mut broken = greedy_max_recurrence(3, 2, 3, 3).unwrap();
        broken.grid.remove(&(1, 1));
        assert_eq!(inequality_violation(&broken), Some((1, 1)));
    }
}
