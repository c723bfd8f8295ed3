//! Sparse bivariate Laurent polynomials over the integers.
//!
//! A [`LaurentPoly`] is a finite map from exponent pairs `(d1, d2)` to nonzero
//! [`BigInt`] coefficients, standing for `sum c * x1^d1 * x2^d2`. The map is a
//! `BTreeMap`, so iteration and serialization are lexicographic ascending on
//! `(d1, d2)` and two equal polynomials always serialize to the same bytes.
//!
//! Besides ring arithmetic the module provides exact division (leading-term
//! elimination from the lex-minimal end) and the substitution
//! `x_i -> g / x_i` used for mutations and the reflections of the algebra.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exponent pair `(d1, d2)` of the monomial `x1^d1 x2^d2`.
pub type Exponent = (i64, i64);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("not divisible")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("not Laurent after substitution")]
    NotLaurent,
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

/// One of the two variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X1,
    X2,
}

impl Var {
    pub fn from_index(i: u8) -> Option<Var> {
        match i {
            1 => Some(Var::X1),
            2 => Some(Var::X2),
            _ => None,
        }
    }

    fn pick(self, e: Exponent) -> i64 {
        match self {
            Var::X1 => e.0,
            Var::X2 => e.1,
        }
    }

    fn other(self) -> Var {
        match self {
            Var::X1 => Var::X2,
            Var::X2 => Var::X1,
        }
    }

    fn with(self, d: i64, other: i64) -> Exponent {
        match self {
            Var::X1 => (d, other),
            Var::X2 => (other, d),
        }
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

/// Key set of a [`LaurentPoly`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Support {
    pub points: BTreeSet<Exponent>,
}

impl Support {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, e: Exponent) -> bool {
        self.points.contains(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Exponent> {
        self.points.iter()
    }
}

/// Inclusive bounding box of a support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentBox {
    pub lo: Exponent,
    pub hi: Exponent,
}

impl ExponentBox {
    fn cells(&self) -> Option<usize> {
        let w1 = usize::try_from(self.hi.0 - self.lo.0 + 1).ok()?;
        let w2 = usize::try_from(self.hi.1 - self.lo.1 + 1).ok()?;
        w1.checked_mul(w2)
    }

    fn contains(&self, e: Exponent) -> bool {
        self.lo.0 <= e.0 && e.0 <= self.hi.0 && self.lo.1 <= e.1 && e.1 <= self.hi.1
    }
}

// Dense scratch space over a box; cell order is lex order on exponents.
struct Dense {
    bx: ExponentBox,
    w2: usize,
    cells: Vec<BigInt>,
}

const DENSE_CELL_LIMIT: usize = 1 << 24;

impl Dense {
    fn new(bx: ExponentBox) -> Option<Dense> {
        let n = bx.cells()?;
        if n > DENSE_CELL_LIMIT {
            return None;
        }
        let w2 = (bx.hi.1 - bx.lo.1 + 1) as usize;
        Some(Dense { bx, w2, cells: vec![BigInt::zero(); n] })
    }

    #[inline]
    fn idx(&self, e: Exponent) -> usize {
        (e.0 - self.bx.lo.0) as usize * self.w2 + (e.1 - self.bx.lo.1) as usize
    }

    #[inline]
    fn exp(&self, idx: usize) -> Exponent {
        (self.bx.lo.0 + (idx / self.w2) as i64, self.bx.lo.1 + (idx % self.w2) as i64)
    }

    fn into_poly(self) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        let Dense { bx, w2, cells } = self;
        for (i, c) in cells.into_iter().enumerate() {
            if !c.is_zero() {
                terms.insert((bx.lo.0 + (i / w2) as i64, bx.lo.1 + (i % w2) as i64), c);
            }
        }
        LaurentPoly { terms }
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial((0, 0), BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial((0, 0), c.into())
    }

    pub fn monomial(e: Exponent, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    /// `x1^d1 x2^d2` with coefficient one.
    pub fn x(d1: i64, d2: i64) -> Self {
        Self::monomial((d1, d2), BigInt::one())
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X1 => Self::x(1, 0),
            Var::X2 => Self::x(0, 1),
        }
    }

    /// Builds a polynomial from possibly repeated terms, summing duplicates
    /// and dropping zeros.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, C)>,
        C: Into<BigInt>,
    {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            let c: BigInt = c.into();
            if c.is_zero() {
                continue;
            }
            add_term(&mut out, e, c);
        }
        LaurentPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic ascending order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Exponent) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> Support {
        Support { points: self.terms.keys().copied().collect() }
    }

    pub fn lex_min(&self) -> Option<(Exponent, &BigInt)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn lex_max(&self) -> Option<(Exponent, &BigInt)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn bounding_box(&self) -> Option<ExponentBox> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        let (mut lo, mut hi) = (first, first);
        for &(d1, d2) in it {
            lo.0 = lo.0.min(d1);
            lo.1 = lo.1.min(d2);
            hi.0 = hi.0.max(d1);
            hi.1 = hi.1.max(d2);
        }
        Some(ExponentBox { lo, hi })
    }

    /// Smallest coefficient, `None` for the zero polynomial.
    pub fn min_coefficient(&self) -> Option<&BigInt> {
        self.terms.values().min()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Multiplies by the monomial `x1^s1 x2^s2`.
    pub fn shift(&self, s: Exponent) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&(d1, d2), c)| ((d1 + s.0, d2 + s.1), c.clone())).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect() }
    }

    /// Exchanges the roles of `x1` and `x2`.
    pub fn swap_vars(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&(d1, d2), c)| ((d2, d1), c.clone())).collect() }
    }

    /// True when no term mentions `v`.
    pub fn is_free_of(&self, v: Var) -> bool {
        self.terms.keys().all(|&e| v.pick(e) == 0)
    }

    pub fn pow(&self, e: i64) -> Result<Self, LaurentError> {
        if e < 0 {
            return Err(LaurentError::NegativeExponent(e));
        }
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Exact quotient `self / den` in the Laurent polynomial ring.
    ///
    /// Eliminates the lex-minimal term of the running remainder against the
    /// lex-minimal term of `den`. Quotient terms are confined to the box
    /// `[min(num) - min(den), max(num) - max(den)]` coordinatewise; a term
    /// outside it (or a coefficient that does not divide) proves there is no
    /// exact quotient.
    pub fn exact_div(&self, den: &LaurentPoly) -> Result<Self, LaurentError> {
        let (pivot_e, pivot_c) = den.lex_min().ok_or(LaurentError::DivisionByZero)?;
        let (Some(nb), Some(db)) = (self.bounding_box(), den.bounding_box()) else {
            return Ok(Self::zero());
        };
        let qbox =
            ExponentBox { lo: (nb.lo.0 - db.lo.0, nb.lo.1 - db.lo.1), hi: (nb.hi.0 - db.hi.0, nb.hi.1 - db.hi.1) };
        if qbox.lo.0 > qbox.hi.0 || qbox.lo.1 > qbox.hi.1 {
            return Err(LaurentError::NotDivisible);
        }
        if den.len() == 1 {
            // monomial divisor
            let mut terms = BTreeMap::new();
            for (&(d1, d2), c) in &self.terms {
                let (q, r) = c.div_rem(pivot_c);
                if !r.is_zero() {
                    return Err(LaurentError::NotDivisible);
                }
                terms.insert((d1 - pivot_e.0, d2 - pivot_e.1), q);
            }
            return Ok(LaurentPoly { terms });
        }
        let den_terms: Vec<(Exponent, &BigInt)> = den.terms.iter().map(|(e, c)| (*e, c)).collect();
        let dense_ok = nb.cells().is_some_and(|n| n <= 64 * (self.len() + den.len()) + 4096);
        if dense_ok {
            if let Some(mut rem) = Dense::new(nb) {
                for (e, c) in &self.terms {
                    let i = rem.idx(*e);
                    rem.cells[i] = c.clone();
                }
                let mut quot = BTreeMap::new();
                for i in 0..rem.cells.len() {
                    if rem.cells[i].is_zero() {
                        continue;
                    }
                    let m = rem.exp(i);
                    let t = (m.0 - pivot_e.0, m.1 - pivot_e.1);
                    if !qbox.contains(t) {
                        return Err(LaurentError::NotDivisible);
                    }
                    let (q, r) = rem.cells[i].div_rem(pivot_c);
                    if !r.is_zero() {
                        return Err(LaurentError::NotDivisible);
                    }
                    for &(e, c) in &den_terms {
                        let j = rem.idx((t.0 + e.0, t.1 + e.1));
                        rem.cells[j] -= &q * c;
                    }
                    debug_assert!(rem.cells[i].is_zero());
                    quot.insert(t, q);
                }
                return Ok(LaurentPoly { terms: quot });
            }
        }
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((m, c)) = rem.pop_first() {
            let t = (m.0 - pivot_e.0, m.1 - pivot_e.1);
            if !qbox.contains(t) {
                return Err(LaurentError::NotDivisible);
            }
            let (q, r) = c.div_rem(pivot_c);
            if !r.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            for &(e, dc) in den_terms.iter().skip(1) {
                add_term(&mut rem, (t.0 + e.0, t.1 + e.1), -(&q * dc));
            }
            quot.insert(t, q);
        }
        Ok(LaurentPoly { terms: quot })
    }

    /// Image of `self` under `x_var -> g / x_var`.
    ///
    /// When `g` does not involve `x_var`, each slice of fixed `x_var`-degree
    /// `d` maps to `slice * g^d * x_var^{-d}` and slices with `d < 0` must be
    /// divisible by `g^{-d}`. Otherwise all negative powers of `g` are cleared
    /// at once and the whole numerator is divided by the common power.
    pub fn substitute_inverse(&self, var: Var, g: &LaurentPoly) -> Result<Self, LaurentError> {
        if g.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut slices: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (&e, c) in &self.terms {
            let d = var.pick(e);
            slices.entry(d).or_default().terms.insert(var.with(0, var.other().pick(e)), c.clone());
        }
        let lo = *slices.keys().next().unwrap();
        let hi = *slices.keys().next_back().unwrap();
        let max_pow = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
        let mut powers = vec![LaurentPoly::one()];
        for k in 1..=max_pow {
            let next = &powers[k - 1] * g;
            powers.push(next);
        }
        if g.is_free_of(var) {
            let mut out = BTreeMap::new();
            for (d, slice) in slices {
                let image = if d >= 0 {
                    &slice * &powers[d as usize]
                } else {
                    slice.exact_div(&powers[d.unsigned_abs() as usize]).map_err(|_| LaurentError::NotLaurent)?
                };
                for (&e, c) in &image.terms {
                    let other = var.other().pick(e);
                    add_term(&mut out, var.with(-d, other), c.clone());
                }
            }
            return Ok(LaurentPoly { terms: out });
        }
        let clear = lo.min(0).unsigned_abs() as usize;
        let mut numer = LaurentPoly::zero();
        for (d, slice) in slices {
            let k = (d + clear as i64) as usize;
            let g_pow = if k < powers.len() { powers[k].clone() } else { g.pow(k as i64)? };
            numer += &(&slice * &g_pow).shift(var.with(-d, 0));
        }
        numer.exact_div(&powers[clear]).map_err(|_| LaurentError::NotLaurent)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_wire()).expect("terms serialize")
    }

    /// Compact JSON text, terms lex ascending.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("terms serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, LaurentError> {
        let wire: WirePoly = serde_json::from_value(v.clone()).map_err(|e| LaurentError::Json(e.to_string()))?;
        wire.into_poly()
    }

    pub fn from_json_str(s: &str) -> Result<Self, LaurentError> {
        let wire: WirePoly = serde_json::from_str(s).map_err(|e| LaurentError::Json(e.to_string()))?;
        wire.into_poly()
    }

    fn to_wire(&self) -> WirePoly {
        WirePoly {
            terms: self
                .terms
                .iter()
                .map(|(&(d1, d2), c)| WireTerm { e: [d1, d2], c: WireCoeff::Text(c.to_string()) })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WirePoly {
    terms: Vec<WireTerm>,
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    e: [i64; 2],
    c: WireCoeff,
}

// Coefficients are written as decimal strings; bare JSON integers are
// accepted on input.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireCoeff {
    Text(String),
    Int(i64),
}

impl WirePoly {
    fn into_poly(self) -> Result<LaurentPoly, LaurentError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            let c = match t.c {
                WireCoeff::Text(s) => {
                    s.trim().parse::<BigInt>().map_err(|e| LaurentError::Json(format!("coefficient {s:?}: {e}")))?
                }
                WireCoeff::Int(i) => BigInt::from(i),
            };
            terms.push(((t.e[0], t.e[1]), c));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

fn add_term(map: &mut BTreeMap<Exponent, BigInt>, e: Exponent, c: BigInt) {
    use std::collections::btree_map::Entry;
    match map.entry(e) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn mul_polys(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() || b.is_zero() {
        return LaurentPoly::zero();
    }
    if a.len() == 1 || b.len() == 1 {
        let (mono, other) = if a.len() == 1 { (a, b) } else { (b, a) };
        let (e, c) = mono.lex_min().unwrap();
        let shifted = other.shift(e);
        return if c.is_one() { shifted } else { shifted.scale(c) };
    }
    let ab = a.bounding_box().unwrap();
    let bb = b.bounding_box().unwrap();
    let bx = ExponentBox { lo: (ab.lo.0 + bb.lo.0, ab.lo.1 + bb.lo.1), hi: (ab.hi.0 + bb.hi.0, ab.hi.1 + bb.hi.1) };
    let pairs = a.len().saturating_mul(b.len());
    let dense_ok = bx.cells().is_some_and(|n| n <= 16 * pairs + 4096);
    if dense_ok {
        if let Some(mut acc) = Dense::new(bx) {
            for (ea, ca) in &a.terms {
                for (eb, cb) in &b.terms {
                    let i = acc.idx((ea.0 + eb.0, ea.1 + eb.1));
                    acc.cells[i] += ca * cb;
                }
            }
            return acc.into_poly();
        }
    }
    let mut acc: HashMap<Exponent, BigInt> = HashMap::with_capacity(a.len() + b.len());
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            *acc.entry((ea.0 + eb.0, ea.1 + eb.1)).or_default() += ca * cb;
        }
    }
    LaurentPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        mul_polys(self, rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        mul_polys(&self, &rhs)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            add_term(&mut self.terms, *e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            add_term(&mut self.terms, *e, -c);
        }
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, (d1, d2): Exponent) -> fmt::Result {
    let mut first = true;
    for (name, d) in [("x1", d1), ("x2", d2)] {
        if d == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if d == 1 {
            f.write_str(name)?;
        } else {
            write!(f, "{name}^{d}")?;
        }
    }
    Ok(())
}

/// Plain text, lex ascending: `x1^-1*x2^-1 + x1^-1*x2 + x1*x2^-1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if e == (0, 0) {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write_monomial(f, e)?;
            } else {
                write!(f, "{mag}*")?;
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}
