//! Standard monomials and expansions in pointed bases.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::plus_part;
use crate::cluster::{ClusterError, SeedParams};
use crate::greedy::{greedy_max_recurrence, GreedyError};
use crate::laurent::{LaurentError, LaurentPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("iteration cap exceeded after {0} steps")]
    CapExceeded(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Greedy(#[from] GreedyError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Standard,
    Greedy,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Standard => "standard",
            BasisKind::Greedy => "greedy",
        }
    }
}

pub const DEFAULT_CAP: usize = 1_000_000;

/// `z[a1,a2] = x0^{[a2]_+} x1^{[-a1]_+} x2^{[-a2]_+} x3^{[a1]_+}` in `{x1, x2}`.
pub fn standard_monomial(s: SeedParams, a1: i64, a2: i64) -> Result<LaurentPoly, BasisError> {
    let (b, c) = (s.b as i64, s.c as i64);
    let x0 = (LaurentPoly::x(b, 0) + LaurentPoly::one()).shift((0, -1));
    let x3 = (LaurentPoly::x(0, c) + LaurentPoly::one()).shift((-1, 0));
    let mono = LaurentPoly::x(plus_part(-a1), plus_part(-a2));
    Ok(&(&x0.pow(plus_part(a2))? * &x3.pow(plus_part(a1))?) * &mono)
}

pub fn basis_element(s: SeedParams, kind: BasisKind, a1: i64, a2: i64) -> Result<LaurentPoly, BasisError> {
    match kind {
        BasisKind::Standard => standard_monomial(s, a1, a2),
        BasisKind::Greedy => Ok(greedy_max_recurrence(s.b, s.c, a1, a2)?.to_laurent()),
    }
}

/// `sum u(b1,b2) * basis_element(b1,b2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisExpansion {
    pub kind: BasisKind,
    pub coeffs: BTreeMap<(i64, i64), BigInt>,
}

impl BasisExpansion {
    pub fn coeff(&self, a1: i64, a2: i64) -> BigInt {
        self.coeffs.get(&(a1, a2)).cloned().unwrap_or_default()
    }

    /// Rebuilds the expanded element.
    pub fn reconstruct(&self, s: SeedParams) -> Result<LaurentPoly, BasisError> {
        let mut acc = LaurentPoly::zero();
        for (&(a1, a2), u) in &self.coeffs {
            acc += &basis_element(s, self.kind, a1, a2)?.scale(u);
        }
        Ok(acc)
    }
}

/// Expands `x` by repeatedly cancelling the lex-min monomial of the remainder
/// with the basis element pointed there.
pub fn expand_pointed_basis(
    x: &LaurentPoly,
    s: SeedParams,
    kind: BasisKind,
    cap: usize,
) -> Result<BasisExpansion, BasisError> {
    let mut memo: HashMap<(i64, i64), LaurentPoly> = HashMap::new();
    let mut rem = x.clone();
    let mut coeffs = BTreeMap::new();
    let mut steps = 0;
    while let Some(((d1, d2), u)) = rem.lex_min() {
        if steps == cap {
            return Err(BasisError::CapExceeded(cap));
        }
        steps += 1;
        let u = u.clone();
        let key = (-d1, -d2);
        let elem = match memo.entry(key) {
            Entry::Occupied(o) => o.into_mut(),
            Entry::Vacant(v) => v.insert(basis_element(s, kind, key.0, key.1)?),
        };
        rem -= &elem.scale(&u);
        coeffs.insert(key, u);
    }
    Ok(BasisExpansion { kind, coeffs })
}

/// `u(a1,a2) = 1` and every other term has `[b1]_+ + [b2]_+ < a1 + a2`.
pub fn verify_triangular(e: &BasisExpansion, a1: i64, a2: i64) -> Result<bool, BasisError> {
    if a1 <= 0 || a2 <= 0 {
        return Err(BasisError::Precondition(format!("triangularity needs a1, a2 > 0, got ({a1},{a2})")));
    }
    let weight = |b1: i64, b2: i64| plus_part(b1) + plus_part(b2);
    Ok(e.coeff(a1, a2).is_one()
        && e.coeffs
            .iter()
            .filter(|(&k, _)| k != (a1, a2))
            .all(|(&(b1, b2), u)| !u.is_zero() && weight(b1, b2) < weight(a1, a2)))
}

/// The transition matrix from greedy elements to standard monomials on a
/// finite index set `T = T+ ∪ T-`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisWindow {
    /// `{a in Z_{>0}^2 : a1 + a2 <= d}` ordered by `(a1 + a2, a1)`.
    pub t_plus: Vec<(i64, i64)>,
    /// Nonpositive indices met in the expansions, sorted.
    pub t_minus: Vec<(i64, i64)>,
    /// `matrix[i][j]` = coefficient of `z[T_i]` in `x[T_j]`, `T = t_plus ++ t_minus`.
    pub matrix: Vec<Vec<BigInt>>,
}

impl BasisWindow {
    pub fn index(&self) -> Vec<(i64, i64)> {
        self.t_plus.iter().chain(&self.t_minus).copied().collect()
    }

    /// Block form `[[U, 0], [C, I]]` with `U` upper unitriangular.
    pub fn is_unitriangular_block(&self) -> bool {
        let np = self.t_plus.len();
        let n = np + self.t_minus.len();
        (0..n).all(|j| {
            (0..n).all(|i| {
                let v = &self.matrix[i][j];
                if i == j {
                    v.is_one()
                } else if j >= np || i < np {
                    // identity columns for T-, strictly upper inside U
                    v.is_zero() || (j < np && i < j)
                } else {
                    true
                }
            })
        })
    }
}

pub fn basis_window(s: SeedParams, d: i64) -> Result<BasisWindow, BasisError> {
    let mut t_plus = Vec::new();
    for total in 2..=d {
        for a1 in 1..total {
            t_plus.push((a1, total - a1));
        }
    }
    let mut expansions = Vec::with_capacity(t_plus.len());
    let mut minus = std::collections::BTreeSet::new();
    for &(a1, a2) in &t_plus {
        let x = basis_element(s, BasisKind::Greedy, a1, a2)?;
        let e = expand_pointed_basis(&x, s, BasisKind::Standard, DEFAULT_CAP)?;
        for &(b1, b2) in e.coeffs.keys() {
            if b1 <= 0 || b2 <= 0 {
                minus.insert((b1, b2));
            } else if b1 + b2 > d {
                return Err(BasisError::Precondition(format!("x[{a1},{a2}] needs z[{b1},{b2}] outside T+")));
            }
        }
        expansions.push(e);
    }
    let t_minus: Vec<(i64, i64)> = minus.into_iter().collect();
    let index: Vec<(i64, i64)> = t_plus.iter().chain(&t_minus).copied().collect();
    let pos: HashMap<(i64, i64), usize> = index.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let n = index.len();
    let mut matrix = vec![vec![BigInt::zero(); n]; n];
    for (j, e) in expansions.iter().enumerate() {
        for (k, u) in &e.coeffs {
            matrix[pos[k]][j] = u.clone();
        }
    }
    // x[b] = z[b] off the positive quadrant
    for (j, row) in matrix.iter_mut().enumerate().skip(t_plus.len()) {
        row[j] = BigInt::one();
    }
    Ok(BasisWindow { t_plus, t_minus, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(b: u32, c: u32) -> SeedParams {
        SeedParams::new(b, c).unwrap()
    }

    fn expansion(entries: &[((i64, i64), i64)]) -> BTreeMap<(i64, i64), BigInt> {
        entries.iter().map(|&(k, v)| (k, BigInt::from(v))).collect()
    }

    #[test]
    fn standard_monomial_examples() {
        let s = seed(2, 2);
        assert_eq!(standard_monomial(s, -1, -1).unwrap(), LaurentPoly::x(1, 1));
        let want = LaurentPoly::from_terms([((-1, -1), 1), ((1, -1), 1), ((-1, 1), 1), ((1, 1), 1)]);
        assert_eq!(standard_monomial(s, 1, 1).unwrap(), want);
    }

    #[test]
    fn expansions_of_small_elements() {
        let s = seed(3, 2);
        let z = standard_monomial(s, 3, -2).unwrap();
        let e = expand_pointed_basis(&z, s, BasisKind::Standard, DEFAULT_CAP).unwrap();
        assert_eq!(e.coeffs, expansion(&[((3, -2), 1)]));

        let s = seed(2, 2);
        let x11 = basis_element(s, BasisKind::Greedy, 1, 1).unwrap();
        let e = expand_pointed_basis(&x11, s, BasisKind::Standard, DEFAULT_CAP).unwrap();
        assert_eq!(e.coeffs, expansion(&[((1, 1), 1), ((-1, -1), -1)]));
        assert!(verify_triangular(&e, 1, 1).unwrap());
        assert_eq!(e.reconstruct(s).unwrap(), x11);

        let sq = &x11 * &x11;
        let e = expand_pointed_basis(&sq, s, BasisKind::Greedy, DEFAULT_CAP).unwrap();
        assert_eq!(e.coeffs, expansion(&[((2, 2), 1), ((0, 0), 2)]));
    }

    #[test]
    fn cap_and_preconditions() {
        let s = seed(2, 2);
        let x = basis_element(s, BasisKind::Greedy, 3, 3).unwrap();
        assert_eq!(expand_pointed_basis(&x, s, BasisKind::Standard, 1), Err(BasisError::CapExceeded(1)));
        let e = expand_pointed_basis(&LaurentPoly::zero(), s, BasisKind::Greedy, 5).unwrap();
        assert!(e.coeffs.is_empty());
        assert!(verify_triangular(&e, 3, -2).is_err());
    }

    #[test]
    fn small_window_is_unitriangular() {
        let w = basis_window(seed(2, 2), 4).unwrap();
        assert_eq!(w.t_plus.len(), 6);
        assert!(w.is_unitriangular_block());
        let mut broken = w.clone();
        broken.matrix[1][0] = BigInt::one();
        assert!(!broken.is_unitriangular_block());
    }
}
