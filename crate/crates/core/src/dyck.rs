//! Maximal Dyck paths and compatible pairs of edge subsets.
//!
//! Horizontal edges are `u_1..u_{a1}` (left to right) and vertical edges
//! `v_1..v_{a2}` (bottom to top); all indices here are 1-based. Subpaths wrap
//! around: the endpoint `(a1, a2)` is glued to the origin, so a path has
//! `a1 + a2` distinct lattice points and a subpath from a point to itself is
//! the whole loop.
//!
//! Internally a path is the cyclic sequence of its `n = a1 + a2` edges.
//! Vertex `t` (for `0 <= t < n`) is the point reached after `t` edges, and
//! edge position `t` (1-based) joins vertex `t - 1` to vertex `t`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::binom;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DyckError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("point ({0},{1}) is not on the path")]
    NotOnPath(usize, usize),
    #[error("path {0}x{1} is too large to enumerate edge subsets")]
    TooLarge(usize, usize),
    #[error("remote-shadow pieces ({0},{1}) and ({2},{3}) differ in size")]
    PieceMismatch(usize, usize, usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: usize,
    pub y: usize,
}

impl LatticePoint {
    pub fn new(x: usize, y: usize) -> Self {
        LatticePoint { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// `u_k`
    H(usize),
    /// `v_j`
    V(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyckPath {
    a1: usize,
    a2: usize,
    edges: Vec<Edge>,
    vertices: Vec<LatticePoint>,
    pos_u: Vec<usize>,
    pos_v: Vec<usize>,
    // prefix counts over two laps of the edge sequence
    h_pre: Vec<u32>,
    v_pre: Vec<u32>,
}

/// A candidate pair `(S1, S2)`: `s1` holds horizontal indices, `s2` vertical.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSubsetPair {
    pub s1: BTreeSet<usize>,
    pub s2: BTreeSet<usize>,
}

impl EdgeSubsetPair {
    pub fn new(s1: impl IntoIterator<Item = usize>, s2: impl IntoIterator<Item = usize>) -> Self {
        EdgeSubsetPair { s1: s1.into_iter().collect(), s2: s2.into_iter().collect() }
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// The maximal Dyck path `D^{a1 x a2}`.
pub fn max_dyck_path(a1: usize, a2: usize) -> DyckPath {
    let mut edges = Vec::with_capacity(a1 + a2);
    if a2 == 0 {
        edges.extend((1..=a1).map(Edge::H));
    } else {
        let mut x = 0;
        for j in 1..=a2 {
            let top = ceil_div(j * a1, a2);
            while x < top {
                x += 1;
                edges.push(Edge::H(x));
            }
            edges.push(Edge::V(j));
        }
    }
    DyckPath::from_edges(a1, a2, edges)
}

impl DyckPath {
    fn from_edges(a1: usize, a2: usize, edges: Vec<Edge>) -> DyckPath {
        let n = edges.len();
        let mut vertices = Vec::with_capacity(n + 1);
        let mut p = LatticePoint::new(0, 0);
        vertices.push(p);
        let mut pos_u = vec![0; a1 + 1];
        let mut pos_v = vec![0; a2 + 1];
        for (i, e) in edges.iter().enumerate() {
            match *e {
                Edge::H(k) => {
                    p.x += 1;
                    pos_u[k] = i + 1;
                }
                Edge::V(j) => {
                    p.y += 1;
                    pos_v[j] = i + 1;
                }
            }
            vertices.push(p);
        }
        let mut h_pre = vec![0u32; 2 * n + 1];
        let mut v_pre = vec![0u32; 2 * n + 1];
        for t in 1..=2 * n {
            let e = edges[(t - 1) % n];
            h_pre[t] = h_pre[t - 1] + matches!(e, Edge::H(_)) as u32;
            v_pre[t] = v_pre[t - 1] + matches!(e, Edge::V(_)) as u32;
        }
        DyckPath { a1, a2, edges, vertices, pos_u, pos_v, h_pre, v_pre }
    }

    pub fn a1(&self) -> usize {
        self.a1
    }

    pub fn a2(&self) -> usize {
        self.a2
    }

    /// Number of edges, `a1 + a2`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in path order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertices from `(0,0)` to `(a1,a2)` inclusive.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Left endpoint of `u_k`.
    pub fn left_end(&self, k: usize) -> LatticePoint {
        self.vertices[self.pos_u[k] - 1]
    }

    /// Upper endpoint `F_j` of `v_j`; `F_0` is the origin.
    pub fn upper_end(&self, j: usize) -> LatticePoint {
        if j == 0 {
            return LatticePoint::new(0, 0);
        }
        self.vertices[self.pos_v[j]]
    }

    /// Height of the horizontal edge `u_k`.
    pub fn height_of(&self, k: usize) -> usize {
        self.left_end(k).y
    }

    /// Horizontal edges lying at height `h`.
    pub fn edges_at_height(&self, h: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.a1).filter(move |&k| self.height_of(k) == h)
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.vertices.get(p.x + p.y) == Some(&p)
    }

    fn vertex_index(&self, p: LatticePoint) -> Result<usize, DyckError> {
        if !self.contains(p) {
            return Err(DyckError::NotOnPath(p.x, p.y));
        }
        // (a1, a2) is glued to the origin
        Ok(if self.is_empty() { 0 } else { (p.x + p.y) % self.len() })
    }

    /// Cyclic length of the subpath from vertex `from` to vertex `to`.
    fn cyclic_len(&self, from: usize, to: usize) -> usize {
        let n = self.len();
        let d = (to + n - from % n) % n;
        if d == 0 {
            n
        } else {
            d
        }
    }

    /// Edge sets of the subpath `AB`, by the two-case formula on coordinates.
    pub fn subpath(&self, a: LatticePoint, b: LatticePoint) -> Result<(BTreeSet<usize>, BTreeSet<usize>), DyckError> {
        self.vertex_index(a)?;
        self.vertex_index(b)?;
        let (i, j, i2, j2) = (a.x, a.y, b.x, b.y);
        let northeast = a != b && i <= i2 && j <= j2;
        if northeast {
            Ok(((i + 1..=i2).collect(), (j + 1..=j2).collect()))
        } else {
            let h = (1..=self.a1).filter(|&k| !(i2 < k && k <= i)).collect();
            let v = (1..=self.a2).filter(|&l| !(j2 < l && l <= j)).collect();
            Ok((h, v))
        }
    }

    /// Lattice points strictly inside the subpath `AB`.
    pub fn interior(&self, a: LatticePoint, b: LatticePoint) -> Result<Vec<LatticePoint>, DyckError> {
        let ia = self.vertex_index(a)?;
        let ib = self.vertex_index(b)?;
        let len = self.cyclic_len(ia, ib);
        Ok((1..len).map(|s| self.vertices[(ia + s) % self.len()]).collect())
    }

    fn check_pair(&self, pair: &EdgeSubsetPair) -> Result<(), DyckError> {
        if let Some(&k) = pair.s1.iter().find(|&&k| k == 0 || k > self.a1) {
            return Err(DyckError::IndexOutOfRange(format!("u_{k}")));
        }
        if let Some(&j) = pair.s2.iter().find(|&&j| j == 0 || j > self.a2) {
            return Err(DyckError::IndexOutOfRange(format!("v_{j}")));
        }
        Ok(())
    }

    // Prefix counts (two laps) of the edges that belong to a subset.
    fn member_prefix(&self, s1: &[bool], s2: &[bool]) -> (Vec<u32>, Vec<u32>) {
        let n = self.len();
        let mut p1 = vec![0u32; 2 * n + 1];
        let mut p2 = vec![0u32; 2 * n + 1];
        for t in 1..=2 * n {
            let (i1, i2) = match self.edges[(t - 1) % n] {
                Edge::H(k) => (s1[k] as u32, 0),
                Edge::V(j) => (0, s2[j] as u32),
            };
            p1[t] = p1[t - 1] + i1;
            p2[t] = p2[t - 1] + i2;
        }
        (p1, p2)
    }

    // Does some interior point A of EF satisfy |(AF)_1| = b |(AF)_2 ∩ S2|?
    fn first_condition(&self, k: usize, j: usize, b: usize, s2_pre: &[u32]) -> bool {
        let e = self.pos_u[k] - 1;
        let len = self.cyclic_len(e, self.pos_v[j]);
        let end = e + len;
        (1..len).any(|s| {
            let h = (self.h_pre[end] - self.h_pre[e + s]) as usize;
            let v = (s2_pre[end] - s2_pre[e + s]) as usize;
            h == b * v
        })
    }

    // Does some interior point A of EF satisfy |(EA)_2| = c |(EA)_1 ∩ S1|?
    fn second_condition(&self, k: usize, j: usize, c: usize, s1_pre: &[u32]) -> bool {
        let e = self.pos_u[k] - 1;
        let len = self.cyclic_len(e, self.pos_v[j]);
        (1..len).any(|s| {
            let v = (self.v_pre[e + s] - self.v_pre[e]) as usize;
            let h = (s1_pre[e + s] - s1_pre[e]) as usize;
            v == c * h
        })
    }

    fn membership(&self, pair: &EdgeSubsetPair) -> (Vec<bool>, Vec<bool>) {
        let mut s1 = vec![false; self.a1 + 1];
        let mut s2 = vec![false; self.a2 + 1];
        pair.s1.iter().for_each(|&k| s1[k] = true);
        pair.s2.iter().for_each(|&j| s2[j] = true);
        (s1, s2)
    }

    /// Compatibility of `(S1, S2)`: every `u` in `S1` and `v` in `S2` admit an
    /// interior point `A` of `EF` (E the left end of `u`, F the upper end of
    /// `v`) with `|(AF)_1| = b|(AF)_2 ∩ S2|` or `|(EA)_2| = c|(EA)_1 ∩ S1|`.
    pub fn is_compatible(&self, pair: &EdgeSubsetPair, b: usize, c: usize) -> Result<bool, DyckError> {
        self.check_pair(pair)?;
        let (s1, s2) = self.membership(pair);
        let (p1, p2) = self.member_prefix(&s1, &s2);
        Ok(pair.s1.iter().all(|&k| {
            pair.s2.iter().all(|&j| self.first_condition(k, j, b, &p2) || self.second_condition(k, j, c, &p1))
        }))
    }

    /// `f(h, j) = b |(F_h F_j)_2 ∩ S2| - |(F_h F_j)_1|` for `0 <= h < j <= a2`.
    pub fn f_stat(&self, s2: &BTreeSet<usize>, b: usize, h: usize, j: usize) -> Result<i64, DyckError> {
        if h >= j || j > self.a2 {
            return Err(DyckError::IndexOutOfRange(format!("f({h},{j}) on a path of height {}", self.a2)));
        }
        let in_s2 = s2.range(h + 1..=j).count() as i64;
        let horiz = (self.upper_end(j).x - self.upper_end(h).x) as i64;
        Ok(b as i64 * in_s2 - horiz)
    }
}

/// Shadows of a set `S2` of vertical edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShadowReport {
    pub sh: BTreeSet<usize>,
    pub rsh: BTreeSet<usize>,
    /// `v_j -> sh(v_j; S2)`
    pub local: BTreeMap<usize, BTreeSet<usize>>,
    /// `(h, j) -> rsh(S2)_{h;j}`, each an interval of horizontal indices.
    pub pieces: BTreeMap<(usize, usize), Vec<usize>>,
}

/// Local shadows, shadow, remote shadow and its pieces for `S2` with
/// exchange exponent `b`.
pub fn shadow(path: &DyckPath, s2: &BTreeSet<usize>, b: usize) -> Result<ShadowReport, DyckError> {
    if path.a1 == 0 || path.a2 == 0 {
        return Err(DyckError::Precondition(format!("shadows need a1 > 0 and a2 > 0, got {}x{}", path.a1, path.a2)));
    }
    path.check_pair(&EdgeSubsetPair { s1: BTreeSet::new(), s2: s2.clone() })?;
    let n = path.len();
    let mut member = vec![false; path.a2 + 1];
    s2.iter().for_each(|&j| member[j] = true);
    let (_, p2) = path.member_prefix(&vec![false; path.a1 + 1], &member);

    let mut report = ShadowReport::default();
    for &j in s2 {
        // F = vertex pos_v[j]; walk A back from F, AF = last d edges
        let f = path.pos_v[j] + n;
        let hit = (1..n).find(|&d| {
            let h = path.h_pre[f] - path.h_pre[f - d];
            let v = p2[f] - p2[f - d];
            h as usize == b * v as usize
        });
        let local: BTreeSet<usize> = match hit {
            Some(d) => (f - d + 1..=f)
                .filter_map(|t| match path.edges[(t - 1) % n] {
                    Edge::H(k) => Some(k),
                    Edge::V(_) => None,
                })
                .collect(),
            None => (1..=path.a1).collect(),
        };
        report.sh.extend(local.iter().copied());
        report.local.insert(j, local);
    }
    report.rsh = report.sh.iter().copied().filter(|&k| !member[path.height_of(k) + 1]).collect();
    for &k in &report.rsh {
        // first v_j in S2 after u_k whose local shadow holds u_k
        let start = path.pos_u[k];
        let owner = (1..=n).find_map(|s| match path.edges[(start + s - 1) % n] {
            Edge::V(j) if member[j] && report.local[&j].contains(&k) => Some(j),
            _ => None,
        });
        let j = owner.expect("remote-shadow edge lies in some local shadow");
        report.pieces.entry((path.height_of(k), j)).or_default().push(k);
    }
    Ok(report)
}

/// The order-preserving bijection between remote shadows of `S2` in
/// `D^{a1 x a2}` and of `S2'` in `D^{(b a2 - a1) x a2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theta {
    pub a1_prime: usize,
    pub s2_prime: BTreeSet<usize>,
    /// `u_k` of the original path to `u'_k'` of the dual path.
    pub map: BTreeMap<usize, usize>,
    pub source: ShadowReport,
    pub target: ShadowReport,
}

/// `S2' = { v'_j : v_{a2+1-j} not in S2 }`.
pub fn dual_subset(a2: usize, s2: &BTreeSet<usize>) -> BTreeSet<usize> {
    (1..=a2).filter(|&j| !s2.contains(&(a2 + 1 - j))).collect()
}

pub fn theta(a1: usize, a2: usize, b: usize, s2: &BTreeSet<usize>) -> Result<Theta, DyckError> {
    if !(0 < a1 && a1 < b * a2) {
        return Err(DyckError::Precondition(format!("theta needs 0 < a1 < b*a2, got a1={a1} a2={a2} b={b}")));
    }
    let a1_prime = b * a2 - a1;
    let d = max_dyck_path(a1, a2);
    let d_prime = max_dyck_path(a1_prime, a2);
    let s2_prime = dual_subset(a2, s2);
    let source = shadow(&d, s2, b)?;
    let target = shadow(&d_prime, &s2_prime, b)?;
    let mut map = BTreeMap::new();
    for (&(h, j), piece) in &source.pieces {
        let key = (a2 - j, a2 - h);
        let image = target.pieces.get(&key).map(Vec::as_slice).unwrap_or(&[]);
        if image.len() != piece.len() {
            return Err(DyckError::PieceMismatch(h, j, key.0, key.1));
        }
        map.extend(piece.iter().copied().zip(image.iter().copied()));
    }
    if map.len() != target.rsh.len() {
        return Err(DyckError::Precondition("theta is not onto the dual remote shadow".into()));
    }
    Ok(Theta { a1_prime, s2_prime, map, source, target })
}

/// How [`count_compatible_with`] enumerates `S1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountStrategy {
    /// All `S1` for every `S2`.
    Naive,
    /// When `0 < a1 < b a2`, only `S1` inside the remote shadow; edges outside
    /// the shadow are free and contribute a binomial factor.
    Shadow,
}

/// `grid[p][q]` = number of compatible pairs with `|S2| = p`, `|S1| = q`.
pub type CountGrid = Vec<Vec<BigInt>>;

pub const MAX_ENUMERATED_SIDE: usize = 63;

pub fn count_compatible(path: &DyckPath, b: usize, c: usize) -> Result<CountGrid, DyckError> {
    count_compatible_with(path, b, c, CountStrategy::Shadow)
}

pub fn count_compatible_with(
    path: &DyckPath,
    b: usize,
    c: usize,
    strategy: CountStrategy,
) -> Result<CountGrid, DyckError> {
    let (a1, a2) = (path.a1, path.a2);
    if a1 > MAX_ENUMERATED_SIDE || a2 > MAX_ENUMERATED_SIDE {
        return Err(DyckError::TooLarge(a1, a2));
    }
    // one side empty: every pair is vacuously compatible
    if a1 == 0 || a2 == 0 {
        let grid = (0..=a2)
            .map(|p| {
                (0..=a1)
                    .map(|q| {
                        if p == 0 || q == 0 {
                            binom(a2 as i64, p as i64) * binom(a1 as i64, q as i64)
                        } else {
                            BigInt::from(0)
                        }
                    })
                    .collect()
            })
            .collect();
        return Ok(grid);
    }
    let use_shadow = strategy == CountStrategy::Shadow && a1 < b * a2;
    let counts = (0u64..1 << a2)
        .into_par_iter()
        .map(|m2| {
            let mut local = vec![vec![0u128; a1 + 1]; a2 + 1];
            let s2: BTreeSet<usize> = (1..=a2).filter(|j| m2 >> (j - 1) & 1 == 1).collect();
            let p = s2.len();
            let enumerator = SubsetChecker::new(path, &s2, b, c);
            if use_shadow && !s2.is_empty() {
                let rep = shadow(path, &s2, b).expect("valid shadow input");
                let free = a1 - rep.sh.len();
                let rsh: Vec<usize> = rep.rsh.iter().copied().collect();
                for sub in 0u64..1 << rsh.len() {
                    let s1 = (0..rsh.len()).filter(|i| sub >> i & 1 == 1).fold(0u64, |m, i| m | 1 << (rsh[i] - 1));
                    if enumerator.compatible(s1) {
                        let q0 = sub.count_ones() as usize;
                        for extra in 0..=free {
                            local[p][q0 + extra] += binom_u128(free, extra);
                        }
                    }
                }
            } else {
                for s1 in 0u64..1 << a1 {
                    if enumerator.compatible(s1) {
                        local[p][s1.count_ones() as usize] += 1;
                    }
                }
            }
            local
        })
        .reduce(
            || vec![vec![0u128; a1 + 1]; a2 + 1],
            |mut acc, part| {
                for (row, prow) in acc.iter_mut().zip(part) {
                    for (x, y) in row.iter_mut().zip(prow) {
                        *x += y;
                    }
                }
                acc
            },
        );
    Ok(counts.into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect())
}

fn binom_u128(n: usize, k: usize) -> u128 {
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All compatible pairs, in increasing order of `(S2 mask, S1 mask)`.
pub fn compatible_pairs(path: &DyckPath, b: usize, c: usize) -> Result<Vec<EdgeSubsetPair>, DyckError> {
    let (a1, a2) = (path.a1, path.a2);
    if a1 > 20 || a2 > 20 || a1 + a2 > 24 {
        return Err(DyckError::TooLarge(a1, a2));
    }
    let mut out = Vec::new();
    for m2 in 0u64..1 << a2 {
        let s2: BTreeSet<usize> = (1..=a2).filter(|j| m2 >> (j - 1) & 1 == 1).collect();
        let checker = SubsetChecker::new(path, &s2, b, c);
        for m1 in 0u64..1 << a1 {
            if checker.compatible(m1) {
                out.push(EdgeSubsetPair { s1: (1..=a1).filter(|k| m1 >> (k - 1) & 1 == 1).collect(), s2: s2.clone() });
            }
        }
    }
    Ok(out)
}

/// Compatibility test for a fixed `S2` against many `S1` given as bitmasks
/// (bit `k-1` stands for `u_k`). The first condition depends on `S2` only,
/// so it is tabulated once.
pub(crate) struct SubsetChecker<'a> {
    path: &'a DyckPath,
    c: usize,
    s2: Vec<usize>,
    // for each j in s2 (same order): u's for which the first condition fails
    needs_second: Vec<u64>,
}

impl<'a> SubsetChecker<'a> {
    pub(crate) fn new(path: &'a DyckPath, s2: &BTreeSet<usize>, b: usize, c: usize) -> Self {
        let mut member = vec![false; path.a2 + 1];
        s2.iter().for_each(|&j| member[j] = true);
        let (_, p2) = path.member_prefix(&vec![false; path.a1 + 1], &member);
        let needs_second = s2
            .iter()
            .map(|&j| {
                (1..=path.a1).filter(|&k| !path.first_condition(k, j, b, &p2)).fold(0u64, |m, k| m | 1 << (k - 1))
            })
            .collect();
        SubsetChecker { path, c, s2: s2.iter().copied().collect(), needs_second }
    }

    pub(crate) fn compatible(&self, s1: u64) -> bool {
        if s1 == 0 || self.s2.is_empty() {
            return true;
        }
        if self.needs_second.iter().all(|&m| m & s1 == 0) {
            return true;
        }
        let path = self.path;
        let n = path.len();
        let mut p1 = vec![0u32; 2 * n + 1];
        for t in 1..=2 * n {
            let inc = match path.edges[(t - 1) % n] {
                Edge::H(k) => (s1 >> (k - 1) & 1) as u32,
                Edge::V(_) => 0,
            };
            p1[t] = p1[t - 1] + inc;
        }
        self.s2.iter().zip(&self.needs_second).all(|(&j, &mask)| {
            let mut pending = mask & s1;
            while pending != 0 {
                let k = pending.trailing_zeros() as usize + 1;
                pending &= pending - 1;
                if !path.second_condition(k, j, self.c, &p1) {
                    return false;
                }
            }
            true
        })
    }
}
