//! Cluster variables, expansions at other clusters, the automorphisms
//! `sigma_1`, `sigma_2`, Chebyshev denominators and positivity probes.
//!
//! Cluster `m` is `{x_m, x_{m+1}}`; expansions there are returned with `x_m`
//! in slot 1 and `x_{m+1}` in slot 2.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClusterError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not in the algebra at cluster {0}")]
    NotInAlgebra(i64),
    #[error("exact division failed computing x_{0}")]
    ExchangeFailed(i64),
    #[error("out of formula domain: {0}")]
    OutOfFormulaDomain(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedParams {
    pub b: u32,
    pub c: u32,
}

impl SeedParams {
    pub fn new(b: u32, c: u32) -> Result<Self, ClusterError> {
        if b == 0 || c == 0 {
            return Err(ClusterError::Precondition(format!("b and c must be positive, got ({b},{c})")));
        }
        Ok(SeedParams { b, c })
    }

    /// Exponent in the exchange relation `x_{m-1} x_{m+1} = x_m^e + 1`.
    pub fn exponent(&self, m: i64) -> i64 {
        if m.rem_euclid(2) == 1 {
            self.b as i64
        } else {
            self.c as i64
        }
    }

    /// Period of `m -> x_m` in finite type, `None` when `bc >= 4`.
    pub fn period(&self) -> Option<i64> {
        match self.b * self.c {
            1 => Some(5),
            2 => Some(6),
            3 => Some(8),
            _ => None,
        }
    }

    // x^e + 1 in the given variable
    fn binomial(&self, v: Var, e: i64) -> LaurentPoly {
        let mono = match v {
            Var::X1 => LaurentPoly::x(e, 0),
            Var::X2 => LaurentPoly::x(0, e),
        };
        mono + LaurentPoly::one()
    }
}

/// Cluster variables `x_m` for `m` in `range`, expanded in `{x1, x2}`.
pub fn cluster_variables(
    s: SeedParams,
    range: RangeInclusive<i64>,
) -> Result<BTreeMap<i64, LaurentPoly>, ClusterError> {
    let (lo, hi) = (*range.start(), *range.end());
    let mut vars = BTreeMap::new();
    vars.insert(1, LaurentPoly::x(1, 0));
    vars.insert(2, LaurentPoly::x(0, 1));
    for m in 3..=hi {
        // x_m = (x_{m-1}^e + 1) / x_{m-2}, e from index m-1
        let num = vars[&(m - 1)].pow(s.exponent(m - 1))? + LaurentPoly::one();
        let x = num.exact_div(&vars[&(m - 2)]).map_err(|_| ClusterError::ExchangeFailed(m))?;
        vars.insert(m, x);
    }
    for m in (lo..=0).rev() {
        // x_m = (x_{m+1}^e + 1) / x_{m+2}, e from index m+1
        let num = vars[&(m + 1)].pow(s.exponent(m + 1))? + LaurentPoly::one();
        let x = num.exact_div(&vars[&(m + 2)]).map_err(|_| ClusterError::ExchangeFailed(m))?;
        vars.insert(m, x);
    }
    Ok(vars.into_iter().filter(|(m, _)| range.contains(m)).collect())
}

pub fn cluster_variable(s: SeedParams, m: i64) -> Result<LaurentPoly, ClusterError> {
    Ok(cluster_variables(s, m..=m)?.remove(&m).expect("requested index"))
}

// One rewriting step between adjacent clusters; `k` is the current cluster.
fn step_forward(s: SeedParams, x: &LaurentPoly, k: i64) -> Result<LaurentPoly, ClusterError> {
    // x_k = (x_{k+1}^e + 1) / x_{k+2}
    let g = s.binomial(Var::X2, s.exponent(k + 1));
    let y = x.substitute_inverse(Var::X1, &g).map_err(|_| ClusterError::NotInAlgebra(k + 1))?;
    Ok(y.swap_vars())
}

fn step_backward(s: SeedParams, x: &LaurentPoly, k: i64) -> Result<LaurentPoly, ClusterError> {
    // x_{k+1} = (x_k^e + 1) / x_{k-1}
    let g = s.binomial(Var::X1, s.exponent(k));
    let y = x.substitute_inverse(Var::X2, &g).map_err(|_| ClusterError::NotInAlgebra(k - 1))?;
    Ok(y.swap_vars())
}

/// `x` (given in `{x1, x2}`) rewritten in the cluster `{x_m, x_{m+1}}`.
pub fn expand_at_cluster(x: &LaurentPoly, s: SeedParams, m: i64) -> Result<LaurentPoly, ClusterError> {
    let mut cur = x.clone();
    if m >= 1 {
        for k in 1..m {
            cur = step_forward(s, &cur, k)?;
        }
    } else {
        for k in (m + 1..=1).rev() {
            cur = step_backward(s, &cur, k)?;
        }
    }
    Ok(cur)
}

/// Walks from cluster 1 towards `target`, yielding `(m, expansion)` for every
/// cluster passed. Stops early, returning the first cluster skipped, once an
/// expansion exceeds `max_terms` or the growth of the last step projects that
/// the next one would.
fn walk(
    x: &LaurentPoly,
    s: SeedParams,
    target: i64,
    max_terms: Option<usize>,
    mut visit: impl FnMut(i64, &LaurentPoly),
) -> Result<Option<i64>, ClusterError> {
    let mut cur = x.clone();
    let mut prev_len = 0usize;
    let mut k = 1;
    visit(1, &cur);
    while k != target {
        let next = if target > k { k + 1 } else { k - 1 };
        if let Some(cap) = max_terms {
            let projected = (cur.len() as u128 * cur.len() as u128).checked_div(prev_len as u128).unwrap_or(0);
            if projected > cap as u128 {
                return Ok(Some(next));
            }
        }
        prev_len = cur.len();
        cur = if target > k { step_forward(s, &cur, k)? } else { step_backward(s, &cur, k)? };
        k = next;
        if max_terms.is_some_and(|cap| cur.len() > cap) {
            return Ok(Some(k));
        }
        visit(k, &cur);
    }
    Ok(None)
}

/// `sigma_1` (`x2 -> (x1^b + 1)/x2`) or `sigma_2` (`x1 -> (x2^c + 1)/x1`).
pub fn sigma(s: SeedParams, p: u8, x: &LaurentPoly) -> Result<LaurentPoly, ClusterError> {
    match p {
        1 => Ok(x.substitute_inverse(Var::X2, &s.binomial(Var::X1, s.b as i64))?),
        2 => Ok(x.substitute_inverse(Var::X1, &s.binomial(Var::X2, s.c as i64))?),
        _ => Err(ClusterError::Precondition(format!("sigma index must be 1 or 2, got {p}"))),
    }
}

/// Coefficients of `S_p(t)` in increasing degree.
pub fn chebyshev(p: i64) -> Result<Vec<BigInt>, ClusterError> {
    if p < -1 {
        return Err(ClusterError::Precondition(format!("Chebyshev index must be >= -1, got {p}")));
    }
    let (mut prev, mut cur) = (Vec::<BigInt>::new(), vec![BigInt::one()]);
    if p == -1 {
        return Ok(prev);
    }
    for _ in 0..p {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, a) in cur.iter().enumerate() {
            next[i + 1] += a;
        }
        for (i, a) in prev.iter().enumerate() {
            next[i] -= a;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

pub fn chebyshev_eval(p: i64, t: &BigInt) -> Result<BigInt, ClusterError> {
    if p < -1 {
        return Err(ClusterError::Precondition(format!("Chebyshev index must be >= -1, got {p}")));
    }
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    if p == -1 {
        return Ok(prev);
    }
    for _ in 0..p {
        let next = t * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Denominator vector of `x_m`: the Chebyshev formula for `bc >= 4`, the
/// initial cluster for `m` in `{1, 2}`, and the pointed monomial of `x_m`
/// (reduced modulo the period) in finite type.
pub fn denominator_vector_of(s: SeedParams, m: i64) -> Result<(BigInt, BigInt), ClusterError> {
    match m {
        1 => return Ok((BigInt::from(-1), BigInt::zero())),
        2 => return Ok((BigInt::zero(), BigInt::from(-1))),
        _ => {}
    }
    if let Some(period) = s.period() {
        let r = (m - 1).rem_euclid(period) + 1;
        let x = cluster_variable(s, r)?;
        let ((d1, d2), _) = x.lex_min().expect("cluster variables are nonzero");
        return Ok((BigInt::from(-d1), BigInt::from(-d2)));
    }
    let t = BigInt::from(s.b as i64 * s.c as i64 - 2);
    let sp = |p: i64| chebyshev_eval(p, &t);
    let (b, c) = (BigInt::from(s.b), BigInt::from(s.c));
    let v = if m >= 3 && m % 2 == 1 {
        let p = (m - 3) / 2;
        (sp(p)? + sp(p - 1)?, c * sp(p - 1)?)
    } else if m >= 4 {
        let p = (m - 4) / 2;
        (b * sp(p)?, sp(p)? + sp(p - 1)?)
    } else if m % 2 == 0 {
        let p = -m / 2;
        (b * sp(p - 1)?, sp(p)? + sp(p - 1)?)
    } else {
        let p = (-m - 1) / 2;
        (sp(p)? + sp(p - 1)?, c * sp(p)?)
    };
    Ok(v)
}

/// Outcome at one cluster of a positivity probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClusterStatus {
    Evaluated {
        terms: usize,
        min_coefficient: BigInt,
    },
    /// The expansion would exceed the term budget.
    Unevaluated {
        reached_terms_above: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub window: (i64, i64),
    pub clusters: BTreeMap<i64, ClusterStatus>,
}

impl ProbeReport {
    /// All clusters evaluated and every coefficient nonnegative.
    pub fn all_nonnegative(&self) -> bool {
        self.clusters.values().all(|st| match st {
            ClusterStatus::Evaluated { min_coefficient, .. } => !min_coefficient.is_negative(),
            ClusterStatus::Unevaluated { .. } => false,
        })
    }

    pub fn unevaluated(&self) -> Vec<i64> {
        self.clusters
            .iter()
            .filter(|(_, st)| matches!(st, ClusterStatus::Unevaluated { .. }))
            .map(|(&m, _)| m)
            .collect()
    }

    /// Clusters where some coefficient is negative.
    pub fn negative_at(&self) -> Vec<i64> {
        self.clusters
            .iter()
            .filter(|(_, st)| matches!(st, ClusterStatus::Evaluated { min_coefficient, .. } if min_coefficient.is_negative()))
            .map(|(&m, _)| m)
            .collect()
    }
}

pub const DEFAULT_WINDOW: (i64, i64) = (-8, 11);
pub const DEFAULT_TERM_BUDGET: usize = 2_000_000;

/// Expands `x` at every cluster in `window` (walking outward from cluster 1 in
/// both directions) and records the minimum coefficient at each. Clusters
/// whose expansion exceeds, or is projected to exceed, `max_terms` are
/// reported as unevaluated.
pub fn probe_positivity(
    x: &LaurentPoly,
    s: SeedParams,
    window: (i64, i64),
    max_terms: usize,
) -> Result<ProbeReport, ClusterError> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(ClusterError::Precondition(format!("empty window [{lo},{hi}]")));
    }
    let targets: Vec<i64> = [lo.min(1), hi.max(1)].into_iter().collect();
    let parts = targets
        .into_par_iter()
        .map(|target| {
            let mut seen = BTreeMap::new();
            let stop = walk(x, s, target, Some(max_terms), |m, e| {
                let min_coefficient = e.min_coefficient().cloned().unwrap_or_default();
                seen.insert(m, ClusterStatus::Evaluated { terms: e.len(), min_coefficient });
            })?;
            if let Some(first) = stop {
                let range = if target >= first { first..=target } else { target..=first };
                for m in range {
                    seen.insert(m, ClusterStatus::Unevaluated { reached_terms_above: max_terms });
                }
            }
            Ok(seen)
        })
        .collect::<Result<Vec<_>, ClusterError>>()?;
    let mut clusters = BTreeMap::new();
    for part in parts {
        for (m, st) in part {
            if (lo..=hi).contains(&m) {
                clusters.insert(m, st);
            }
        }
    }
    Ok(ProbeReport { window, clusters })
}

/// True iff `x` is nonzero and has nonnegative coefficients at every cluster
/// `m` in `range`. A finite probe, not a certificate of positivity.
pub fn is_positive_at(x: &LaurentPoly, s: SeedParams, range: RangeInclusive<i64>) -> Result<bool, ClusterError> {
    if x.is_zero() {
        return Ok(false);
    }
    let report = probe_positivity(x, s, (*range.start(), *range.end()), usize::MAX)?;
    Ok(report.all_nonnegative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greedy::greedy_max_recurrence;

    fn seed(b: u32, c: u32) -> SeedParams {
        SeedParams::new(b, c).unwrap()
    }

    fn greedy(b: u32, c: u32, a1: i64, a2: i64) -> LaurentPoly {
        greedy_max_recurrence(b, c, a1, a2).unwrap().to_laurent()
    }

    #[test]
    fn initial_and_periodic_variables() {
        let s = seed(1, 1);
        assert_eq!(cluster_variable(s, 1).unwrap(), LaurentPoly::x(1, 0));
        assert_eq!(cluster_variable(s, 2).unwrap(), LaurentPoly::x(0, 1));
        assert_eq!(cluster_variable(s, 6).unwrap(), LaurentPoly::x(1, 0));
        assert_eq!(cluster_variable(s, 7).unwrap(), LaurentPoly::x(0, 1));
        assert!(SeedParams::new(0, 1).is_err());
    }

    #[test]
    fn x5_at_two_two_is_greedy() {
        assert_eq!(cluster_variable(seed(2, 2), 5).unwrap(), greedy(2, 2, 3, 2));
    }

    #[test]
    fn expansion_basics() {
        let s = seed(3, 2);
        let x1 = LaurentPoly::x(1, 0);
        assert_eq!(expand_at_cluster(&x1, s, 1).unwrap(), x1);
        // x1 = (x2^c + 1)/x3, slots (x2, x3)
        let at2 = expand_at_cluster(&x1, s, 2).unwrap();
        assert_eq!(at2, LaurentPoly::from_terms([((0, -1), 1), ((2, -1), 1)]));
        let junk = LaurentPoly::x(1, 0) + LaurentPoly::x(-1, -1);
        assert!(matches!(expand_at_cluster(&junk, s, 3), Err(ClusterError::NotInAlgebra(_))));
    }

    #[test]
    fn d_stat_is_a_coefficient_at_cluster_two() {
        let s = seed(3, 2);
        let e = greedy_max_recurrence(3, 2, 3, 3).unwrap();
        let at2 = expand_at_cluster(&e.to_laurent(), s, 2).unwrap();
        for q in 0..=3usize {
            let want = at2.coeff((-3 + 2 * q as i64, 3));
            assert_eq!(e.d_stat(0, q).unwrap(), want);
        }
    }

    #[test]
    fn sigma_examples() {
        let s = seed(2, 3);
        let x1 = LaurentPoly::x(1, 0);
        assert_eq!(sigma(s, 2, &x1).unwrap(), cluster_variable(s, 3).unwrap());
        assert_eq!(sigma(s, 2, &LaurentPoly::x(0, 1)).unwrap(), LaurentPoly::x(0, 1));
        let s = seed(2, 2);
        assert_eq!(sigma(s, 2, &greedy(2, 2, -1, 1)).unwrap(), greedy(2, 2, 3, 1));
        assert!(sigma(s, 3, &x1).is_err());
    }

    #[test]
    fn chebyshev_small() {
        assert!(chebyshev(-1).unwrap().is_empty());
        assert_eq!(chebyshev(0).unwrap(), vec![BigInt::one()]);
        assert_eq!(chebyshev(1).unwrap(), vec![BigInt::zero(), BigInt::one()]);
        assert_eq!(chebyshev(2).unwrap(), vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]);
        for p in 0..=20 {
            assert_eq!(chebyshev_eval(p, &BigInt::from(2)).unwrap(), BigInt::from(p + 1));
        }
        assert!(chebyshev(-2).is_err());
    }

    #[test]
    fn denominator_examples() {
        let s = seed(3, 3);
        assert_eq!(denominator_vector_of(s, 3).unwrap(), (BigInt::one(), BigInt::zero()));
        assert_eq!(denominator_vector_of(s, 0).unwrap(), (BigInt::zero(), BigInt::one()));
        assert_eq!(denominator_vector_of(seed(2, 2), 5).unwrap(), (BigInt::from(3), BigInt::from(2)));
        assert_eq!(denominator_vector_of(seed(1, 2), 8).unwrap(), denominator_vector_of(seed(1, 2), 2).unwrap());
    }

    #[test]
    fn exchange_relations_hold() {
        for (b, c) in [(2, 2), (3, 2), (1, 4)] {
            let s = seed(b, c);
            let vars = cluster_variables(s, -5..=8).unwrap();
            for m in -4..=7 {
                let lhs = &vars[&(m - 1)] * &vars[&(m + 1)];
                let rhs = vars[&m].pow(s.exponent(m)).unwrap() + LaurentPoly::one();
                assert_eq!(lhs, rhs, "({b},{c}) m={m}");
            }
        }
    }

    #[test]
    fn positivity_small() {
        let s = seed(2, 2);
        assert!(is_positive_at(&LaurentPoly::x(1, 0), s, -3..=4).unwrap());
        assert!(is_positive_at(&greedy(2, 2, 1, 1), s, -5..=6).unwrap());
        assert!(!is_positive_at(&LaurentPoly::zero(), s, 1..=1).unwrap());
        let neg = LaurentPoly::x(1, 0) - LaurentPoly::x(0, 1);
        let report = probe_positivity(&neg, s, (1, 1), 10).unwrap();
        assert_eq!(report.negative_at(), vec![1]);
    }

    #[test]
    fn probe_reports_budget_overrun() {
        let s = seed(3, 3);
        let report = probe_positivity(&greedy(3, 3, 1, 1), s, (-3, 4), 20).unwrap();
        assert!(!report.unevaluated().is_empty());
        assert!(!report.all_nonnegative());
        assert!(report.negative_at().is_empty());
        assert_eq!(report.clusters.len(), 8);
    }
}
