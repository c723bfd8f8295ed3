use std::collections::BTreeSet;

use greedy_core::dyck::*;
use proptest::prelude::*;

// Walks the glued path from `from` to `to` one lattice step at a time and
// returns the visited points (endpoints included) and the edges crossed.
fn walk(path: &DyckPath, from: LatticePoint, to: LatticePoint) -> (Vec<LatticePoint>, Vec<Edge>) {
    let verts = path.vertices();
    let n = path.len();
    let start = verts.iter().position(|&p| p == from).unwrap() % n;
    let mut points = vec![from];
    let mut edges = Vec::new();
    let mut i = start;
    loop {
        let (a, b) = (verts[i], verts[i + 1]);
        edges.push(if b.x > a.x { Edge::H(b.x) } else { Edge::V(b.y) });
        i = (i + 1) % n;
        let here = verts[i];
        points.push(here);
        if here == to || (i == 0 && to == verts[n]) {
            break;
        }
    }
    (points, edges)
}

fn oracle_compatible(path: &DyckPath, s1: &BTreeSet<usize>, s2: &BTreeSet<usize>, b: usize, c: usize) -> bool {
    let verts = path.vertices();
    for &k in s1 {
        let e = verts.windows(2).find(|w| w[1].x == k && w[0].x + 1 == k).unwrap()[0];
        for &j in s2 {
            let f = verts.windows(2).find(|w| w[1].y == j && w[0].y + 1 == j).unwrap()[1];
            let (points, _) = walk(path, e, f);
            let ok = points[1..points.len() - 1].iter().any(|&a| {
                let (_, af) = walk(path, a, f);
                let (_, ea) = walk(path, e, a);
                let h_af = af.iter().filter(|x| matches!(x, Edge::H(_))).count();
                let v_af_s2 = af.iter().filter(|x| matches!(x, Edge::V(j) if s2.contains(j))).count();
                let v_ea = ea.iter().filter(|x| matches!(x, Edge::V(_))).count();
                let h_ea_s1 = ea.iter().filter(|x| matches!(x, Edge::H(k) if s1.contains(k))).count();
                h_af == b * v_af_s2 || v_ea == c * h_ea_s1
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

fn subsets(n: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (0u32..1 << n).map(move |m| (1..=n).filter(|i| m >> (i - 1) & 1 == 1).collect())
}

#[test]
fn maximal_path_stays_closest_to_the_diagonal() {
    for a1 in 0..=12usize {
        for a2 in 0..=12usize {
            let path = max_dyck_path(a1, a2);
            assert_eq!(path.len(), a1 + a2);
            let verts = path.vertices();
            // never above the diagonal
            assert!(verts.iter().all(|p| p.y * a1 <= p.x * a2 || a1 == 0));
            // every lattice point strictly above the path is strictly above the diagonal
            for x in 0..=a1 {
                let floor = verts.iter().filter(|p| p.x == x).map(|p| p.y).max().unwrap();
                for y in floor + 1..=a2 {
                    assert!(y * a1 > x * a2, "({x},{y}) in {a1}x{a2}");
                }
            }
            for j in 1..=a2 {
                assert_eq!(path.upper_end(j).x, (j * a1).div_ceil(a2));
            }
        }
    }
}

#[test]
fn subpath_formula_matches_walking() {
    for (a1, a2) in [(6, 4), (5, 3), (3, 5), (4, 4), (7, 2)] {
        let path = max_dyck_path(a1, a2);
        for &a in &path.vertices()[..path.len()] {
            for &b in &path.vertices()[..path.len()] {
                let (_, edges) = walk(&path, a, b);
                let h: BTreeSet<usize> =
                    edges.iter().filter_map(|e| if let Edge::H(k) = e { Some(*k) } else { None }).collect();
                let v: BTreeSet<usize> =
                    edges.iter().filter_map(|e| if let Edge::V(j) = e { Some(*j) } else { None }).collect();
                assert_eq!(path.subpath(a, b).unwrap(), (h, v), "{a:?}->{b:?} on {a1}x{a2}");
            }
        }
    }
}

#[test]
fn compatibility_matches_oracle() {
    for (a1, a2) in [(3, 3), (4, 2), (2, 4), (5, 3), (3, 4)] {
        let path = max_dyck_path(a1, a2);
        for (b, c) in [(1, 1), (2, 1), (3, 2), (2, 3)] {
            for s2 in subsets(a2) {
                for s1 in subsets(a1) {
                    let pair = EdgeSubsetPair { s1: s1.clone(), s2: s2.clone() };
                    assert_eq!(
                        path.is_compatible(&pair, b, c).unwrap(),
                        oracle_compatible(&path, &s1, &s2, b, c),
                        "{a1}x{a2} b={b} c={c} {pair:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn shadow_pruned_counts_match_naive() {
    for a1 in 1..=7 {
        for a2 in 1..=6 {
            let path = max_dyck_path(a1, a2);
            for (b, c) in [(1, 1), (2, 1), (1, 3), (2, 2), (3, 2), (4, 1)] {
                assert_eq!(
                    count_compatible_with(&path, b, c, CountStrategy::Shadow).unwrap(),
                    count_compatible_with(&path, b, c, CountStrategy::Naive).unwrap(),
                    "{a1}x{a2} b={b} c={c}"
                );
            }
        }
    }
}

#[test]
fn wide_paths_have_b_edges_of_shadow_per_vertical() {
    // a1 >= b a2: compatible iff S1 avoids the b edges before each v in S2
    for (a1, a2, b) in [(6, 3, 2), (7, 2, 3), (4, 4, 1), (9, 3, 3)] {
        let path = max_dyck_path(a1, a2);
        for s2 in subsets(a2) {
            let forbidden: BTreeSet<usize> = s2
                .iter()
                .flat_map(|&j| {
                    let x = path.upper_end(j).x;
                    (x + 1 - b..=x).collect::<Vec<_>>()
                })
                .collect();
            for s1 in subsets(a1) {
                let pair = EdgeSubsetPair { s1: s1.clone(), s2: s2.clone() };
                assert_eq!(path.is_compatible(&pair, b, 2).unwrap(), s1.is_disjoint(&forbidden));
            }
        }
    }
}

fn case3_instances(max_total: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a1 in 1..max_total {
        for a2 in 1..=max_total - a1 {
            for b in 1..=4 {
                if a1 < b * a2 {
                    out.push((a1, a2, b));
                }
            }
        }
    }
    out
}

#[test]
fn shadow_cardinality_and_reduction() {
    for (a1, a2, b) in case3_instances(10) {
        let path = max_dyck_path(a1, a2);
        for s2 in subsets(a2) {
            let rep = shadow(&path, &s2, b).unwrap();
            assert_eq!(rep.sh.len(), a1.min(b * s2.len()), "{a1}x{a2} b={b} {s2:?}");
            assert!(rep.rsh.is_subset(&rep.sh));
            let union: BTreeSet<usize> = rep.pieces.values().flatten().copied().collect();
            assert_eq!(union, rep.rsh);
            assert_eq!(rep.pieces.values().map(Vec::len).sum::<usize>(), rep.rsh.len());
            if a1 + a2 > 9 {
                continue;
            }
            let dead: BTreeSet<usize> = rep.sh.difference(&rep.rsh).copied().collect();
            for s1 in subsets(a1) {
                let c = 2;
                let full = path.is_compatible(&EdgeSubsetPair { s1: s1.clone(), s2: s2.clone() }, b, c).unwrap();
                let core: BTreeSet<usize> = s1.intersection(&rep.rsh).copied().collect();
                let reduced = s1.is_disjoint(&dead)
                    && path.is_compatible(&EdgeSubsetPair { s1: core, s2: s2.clone() }, b, c).unwrap();
                assert_eq!(full, reduced, "{a1}x{a2} b={b} {s1:?} {s2:?}");
            }
        }
    }
}

#[test]
fn proper_local_shadows_are_nested_or_disjoint() {
    for (a1, a2, b) in case3_instances(12) {
        let path = max_dyck_path(a1, a2);
        let all: BTreeSet<usize> = (1..=a1).collect();
        for s2 in subsets(a2) {
            let rep = shadow(&path, &s2, b).unwrap();
            let proper: Vec<&BTreeSet<usize>> = rep.local.values().filter(|s| **s != all).collect();
            for (i, x) in proper.iter().enumerate() {
                for y in &proper[i + 1..] {
                    assert!(x.is_disjoint(y) || x.is_subset(y) || y.is_subset(x));
                }
            }
        }
    }
}

#[test]
fn piece_cardinalities_follow_f() {
    for (a1, a2, b) in case3_instances(12) {
        let path = max_dyck_path(a1, a2);
        for s2 in subsets(a2) {
            let rep = shadow(&path, &s2, b).unwrap();
            for j in 1..=a2 {
                for h in 0..j {
                    if !s2.contains(&j) || s2.contains(&(h + 1)) {
                        continue;
                    }
                    let f = |x, y| path.f_stat(&s2, b, x, y).unwrap();
                    let nonempty = (h + 1..j).all(|k| f(h, k) < 0 && 0 < f(k, j));
                    let size = rep.pieces.get(&(h, j)).map_or(0, Vec::len);
                    assert_eq!(size > 0, nonempty, "{a1}x{a2} b={b} {s2:?} ({h};{j})");
                    if nonempty {
                        let want = (h + 1..j).map(|k| f(k, j).min(-f(h, k))).min().unwrap();
                        assert_eq!(size as i64, want);
                    }
                }
            }
        }
    }
}

#[test]
fn theta_is_exhaustively_compatibility_preserving() {
    for (a1, a2, b) in case3_instances(9) {
        for c in 1..=3 {
            let d = max_dyck_path(a1, a2);
            for s2 in subsets(a2) {
                let t = theta(a1, a2, b, &s2).unwrap();
                let d2 = max_dyck_path(t.a1_prime, a2);
                assert_eq!(dual_subset(a2, &t.s2_prime), s2);
                let rsh: Vec<usize> = t.source.rsh.iter().copied().collect();
                for m in 0u32..1 << rsh.len() {
                    let s1: BTreeSet<usize> = (0..rsh.len()).filter(|i| m >> i & 1 == 1).map(|i| rsh[i]).collect();
                    let image: BTreeSet<usize> = s1.iter().map(|k| t.map[k]).collect();
                    assert_eq!(image.len(), s1.len());
                    let before = d.is_compatible(&EdgeSubsetPair { s1, s2: s2.clone() }, b, c).unwrap();
                    let after = d2.is_compatible(&EdgeSubsetPair { s1: image, s2: t.s2_prime.clone() }, b, c).unwrap();
                    assert_eq!(before, after, "{a1}x{a2} b={b} c={c} {s2:?}");
                }
            }
        }
    }
}

#[test]
fn case_six_claims_hold_for_all_compatible_pairs() {
    for a1 in 1..=8usize {
        for a2 in 1..=(12 - a1).min(8) {
            for (b, c) in [(1, 2), (2, 1), (2, 2), (3, 2), (2, 3), (3, 3), (1, 4)] {
                if !(a1 < b * a2 && a2 < c * a1) {
                    continue;
                }
                let path = max_dyck_path(a1, a2);
                let (a1i, a2i, bi, ci) = (a1 as i64, a2 as i64, b as i64, c as i64);
                for pair in compatible_pairs(&path, b, c).unwrap() {
                    let (p, q) = (pair.s2.len() as i64, pair.s1.len() as i64);
                    if 0 < bi * p && bi * p < a1i {
                        assert!(ci * a1i * q < ci * a1i * (a1i - bi * p) + bi * a2i * p);
                    }
                    if 0 < ci * q && ci * q < a2i {
                        assert!(bi * a2i * p < bi * a2i * (a2i - ci * q) + ci * a1i * q);
                    }
                    assert!(!(bi * p >= a1i && ci * q >= a2i));
                }
            }
        }
    }
}

fn case3_strategy() -> impl Strategy<Value = (usize, usize, usize, u32)> {
    (1usize..=7, 1usize..=7, 1usize..=4, any::<u32>()).prop_filter("case 3", |(a1, a2, b, _)| a1 < &(b * a2))
}

proptest! {
    #[test]
    fn f_is_additive((a1, a2, b, mask) in case3_strategy(), picks in any::<[u8; 3]>()) {
        prop_assume!(a2 >= 2);
        let mut idx = [picks[0] as usize % (a2 + 1), picks[1] as usize % (a2 + 1), picks[2] as usize % (a2 + 1)];
        idx.sort();
        let [h, k, j] = idx;
        prop_assume!(h < k && k < j);
        let path = max_dyck_path(a1, a2);
        let s2: BTreeSet<usize> = (1..=a2).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let f = |x, y| path.f_stat(&s2, b, x, y).unwrap();
        prop_assert_eq!(f(h, k) + f(k, j), f(h, j));
    }

    #[test]
    fn f_duality((a1, a2, b, mask) in case3_strategy(), picks in any::<[u8; 2]>()) {
        let (x, y) = (picks[0] as usize % (a2 + 1), picks[1] as usize % (a2 + 1));
        let (h, j) = (x.min(y), x.max(y));
        prop_assume!(h < j);
        let s2: BTreeSet<usize> = (1..=a2).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let d = max_dyck_path(a1, a2);
        let d2 = max_dyck_path(b * a2 - a1, a2);
        let s2p = dual_subset(a2, &s2);
        prop_assert_eq!(d.f_stat(&s2, b, h, j).unwrap(), -d2.f_stat(&s2p, b, a2 - j, a2 - h).unwrap());
    }

    #[test]
    fn theta_inverse_is_theta_of_dual(a1 in 1usize..=10, a2 in 1usize..=4, b in 1usize..=4, mask in any::<u32>()) {
        prop_assume!(a1 < b * a2);
        let s2: BTreeSet<usize> = (1..=a2).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let t = theta(a1, a2, b, &s2).unwrap();
        let back = theta(t.a1_prime, a2, b, &t.s2_prime).unwrap();
        for (k, v) in &t.map {
            prop_assert_eq!(back.map[v], *k);
        }
    }
}
