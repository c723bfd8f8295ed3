//! Property suites over parameter boxes, with deterministic reports.

use std::fmt;

use num_traits::One;
use rayon::prelude::*;

use crate::arith::plus_part;
use crate::basisops::{basis_window, expand_pointed_basis, verify_triangular, BasisKind, DEFAULT_CAP};
use crate::cluster::{is_positive_at, sigma, SeedParams};
use crate::greedy::{
    greedy, greedy_max_recurrence, has_nonnegative_grid, inequality_violation, support_region, Method,
};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Symmetry,
    Supports,
    Equivalence,
    Inequality,
    Basis,
    Positivity,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Symmetry, Suite::Supports, Suite::Equivalence, Suite::Inequality, Suite::Basis, Suite::Positivity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Symmetry => "symmetry",
            Suite::Supports => "supports",
            Suite::Equivalence => "equivalence",
            Suite::Inequality => "inequality",
            Suite::Basis => "basis",
            Suite::Positivity => "positivity",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub suite: Suite,
    pub cases: Vec<CaseResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{tag} {} {}", self.suite.name(), c.label)?;
            } else {
                writeln!(f, "{tag} {} {}: {}", self.suite.name(), c.label, c.detail)?;
            }
        }
        let failed = self.cases.iter().filter(|c| !c.pass).count();
        write!(
            f,
            "{} {}: {} cases, {} failed",
            self.suite.name(),
            if failed == 0 { "passed" } else { "failed" },
            self.cases.len(),
            failed
        )
    }
}

/// Parameters shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyParams {
    pub seed: SeedParams,
    /// `(a1, a2)` ranges over `[min, max]^2`; positivity starts at 0.
    pub min: i64,
    pub max: i64,
    /// Cluster window for the positivity suite.
    pub window: (i64, i64),
}

/// Evaluates `f` on every cell of `[lo, hi]^2` in parallel; results come back
/// sorted by `(a1, a2)`.
pub fn sweep<T, F>(lo: i64, hi: i64, f: F) -> Vec<((i64, i64), T)>
where
    T: Send,
    F: Fn(i64, i64) -> T + Sync,
{
    let cells: Vec<(i64, i64)> = (lo..=hi).flat_map(|a1| (lo..=hi).map(move |a2| (a1, a2))).collect();
    let mut out: Vec<((i64, i64), T)> = cells.into_par_iter().map(|(a1, a2)| ((a1, a2), f(a1, a2))).collect();
    out.sort_by_key(|(k, _)| *k);
    out
}

fn case(a1: i64, a2: i64, result: Result<(), String>) -> CaseResult {
    CaseResult { label: format!("x[{a1},{a2}]"), pass: result.is_ok(), detail: result.err().unwrap_or_default() }
}

fn greedy_poly(s: SeedParams, a1: i64, a2: i64) -> Result<LaurentPoly, String> {
    greedy_max_recurrence(s.b, s.c, a1, a2).map(|e| e.to_laurent()).map_err(|e| e.to_string())
}

fn check_equivalence(s: SeedParams, a1: i64, a2: i64) -> Result<(), String> {
    let base = greedy(s.b, s.c, a1, a2, Method::MaxRecurrence).map_err(|e| e.to_string())?;
    for m in [Method::LinearRecurrence, Method::Dyck] {
        if !m.applies(a1, a2) {
            continue;
        }
        let other = greedy(s.b, s.c, a1, a2, m).map_err(|e| format!("{}: {e}", m.name()))?;
        if other.grid != base.grid {
            return Err(format!("{} grid differs from recurrence", m.name()));
        }
    }
    Ok(())
}

fn check_symmetry(s: SeedParams, a1: i64, a2: i64) -> Result<(), String> {
    let x = greedy_poly(s, a1, a2)?;
    let (b, c) = (s.b as i64, s.c as i64);
    let images = [(1u8, (a1, c * plus_part(a1) - a2)), (2u8, (b * plus_part(a2) - a1, a2))];
    for (p, (t1, t2)) in images {
        let y = sigma(s, p, &x).map_err(|e| format!("sigma_{p}: {e}"))?;
        if y != greedy_poly(s, t1, t2)? {
            return Err(format!("sigma_{p}(x[{a1},{a2}]) != x[{t1},{t2}]"));
        }
        if sigma(s, p, &y).map_err(|e| e.to_string())? != x {
            return Err(format!("sigma_{p} is not an involution here"));
        }
    }
    Ok(())
}

fn check_supports(s: SeedParams, a1: i64, a2: i64) -> Result<(), String> {
    let e = greedy_max_recurrence(s.b, s.c, a1, a2).map_err(|e| e.to_string())?;
    let region = support_region(s.b, s.c, a1, a2);
    if let Some(&(p, q)) = e.grid.keys().find(|&&(p, q)| !region.contains(p as i64, q as i64)) {
        return Err(format!("c({p},{q}) outside case-{} region", region.case));
    }
    if a1.max(a2) > 0 {
        if let Some((d, _)) = e.to_laurent().terms().find(|(d, _)| d.0 >= 0 && d.1 >= 0) {
            return Err(format!("support meets the nonnegative quadrant at {d:?}"));
        }
    }
    Ok(())
}

fn check_inequality(s: SeedParams, a1: i64, a2: i64) -> Result<(), String> {
    let e = greedy_max_recurrence(s.b, s.c, a1, a2).map_err(|e| e.to_string())?;
    if let Some((p, q)) = inequality_violation(&e) {
        return Err(format!("inequality fails at ({p},{q})"));
    }
    if !has_nonnegative_grid(&e) {
        return Err("negative grid entry".into());
    }
    Ok(())
}

fn check_basis(s: SeedParams, a1: i64, a2: i64) -> Result<(), String> {
    let x = greedy_poly(s, a1, a2)?;
    let e = expand_pointed_basis(&x, s, BasisKind::Standard, DEFAULT_CAP).map_err(|e| e.to_string())?;
    if a1 > 0 && a2 > 0 {
        if !verify_triangular(&e, a1, a2).map_err(|e| e.to_string())? {
            return Err("expansion is not unitriangular".into());
        }
    } else if e.coeffs.len() != 1 || !e.coeff(a1, a2).is_one() {
        return Err("standard monomial differs from greedy element".into());
    }
    if e.reconstruct(s).map_err(|e| e.to_string())? != x {
        return Err("reconstruction differs".into());
    }
    Ok(())
}

fn check_positivity(s: SeedParams, a1: i64, a2: i64, window: (i64, i64)) -> Result<(), String> {
    let x = greedy_poly(s, a1, a2)?;
    match is_positive_at(&x, s, window.0..=window.1) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("negative coefficient in clusters {}..{}", window.0, window.1)),
        Err(e) => Err(e.to_string()),
    }
}

pub fn run_suite(suite: Suite, params: &VerifyParams) -> Report {
    let s = params.seed;
    let cell = |a1: i64, a2: i64| match suite {
        Suite::Symmetry => check_symmetry(s, a1, a2),
        Suite::Supports => check_supports(s, a1, a2),
        Suite::Equivalence => check_equivalence(s, a1, a2),
        Suite::Inequality => check_inequality(s, a1, a2),
        Suite::Basis => check_basis(s, a1, a2),
        Suite::Positivity => check_positivity(s, a1, a2, params.window),
    };
    let lo = match suite {
        Suite::Positivity => params.min.max(0),
        _ => params.min,
    };
    let mut cases: Vec<CaseResult> =
        sweep(lo, params.max, cell).into_iter().map(|((a1, a2), r)| case(a1, a2, r)).collect();
    if suite == Suite::Basis && params.max >= 1 {
        let d = 2 * params.max;
        let label = format!("window a1+a2<={d}");
        let result = match basis_window(s, d) {
            Ok(w) if w.is_unitriangular_block() => Ok(()),
            Ok(_) => Err("transition matrix is not block unitriangular".to_string()),
            Err(e) => Err(e.to_string()),
        };
        cases.push(CaseResult { label, pass: result.is_ok(), detail: result.err().unwrap_or_default() });
    }
    Report { suite, cases }
}
