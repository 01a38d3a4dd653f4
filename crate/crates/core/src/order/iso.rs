//! Isomorphisms of finite posets and finite distributive lattices.
//!
//! A finite distributive lattice is determined by its poset of
//! join-irreducibles, so lattice isomorphisms are found by matching those
//! posets and extending along joins.

use super::frame::Frame;
use super::poset::Poset;

/// Calls `visit` on every isomorphism `p → q` (as an index map) until it
/// returns `true`. Returns whether the search was stopped by `visit`.
pub fn visit_poset_isomorphisms(
    p: &Poset,
    q: &Poset,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> bool {
    let n = p.size();
    if n != q.size() {
        return false;
    }
    let sig = |poset: &Poset, a: usize| {
        (
            poset.down(a).count_ones(..),
            poset.up(a).count_ones(..),
        )
    };
    let p_sig: Vec<_> = (0..n).map(|a| sig(p, a)).collect();
    let q_sig: Vec<_> = (0..n).map(|a| sig(q, a)).collect();
    let mut ps = p_sig.clone();
    let mut qs = q_sig.clone();
    ps.sort();
    qs.sort();
    if ps != qs {
        return false;
    }
    // Assign in the order of p's linear extension so comparabilities with
    // already-placed elements prune early.
    let order = p.linear_extension().to_vec();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    #[allow(clippy::too_many_arguments)]
    fn go(
        p: &Poset,
        q: &Poset,
        order: &[usize],
        k: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        p_sig: &[(usize, usize)],
        q_sig: &[(usize, usize)],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == order.len() {
            return visit(image);
        }
        let a = order[k];
        for b in 0..q.size() {
            if used[b] || p_sig[a] != q_sig[b] {
                continue;
            }
            let consistent = order[..k].iter().all(|&c| {
                let d = image[c];
                p.leq(a, c) == q.leq(b, d) && p.leq(c, a) == q.leq(d, b)
            });
            if !consistent {
                continue;
            }
            image[a] = b;
            used[b] = true;
            if go(p, q, order, k + 1, image, used, p_sig, q_sig, visit) {
                return true;
            }
            used[b] = false;
            image[a] = usize::MAX;
        }
        false
    }
    go(
        p,
        q,
        &order,
        0,
        &mut image,
        &mut used,
        &p_sig,
        &q_sig,
        &mut visit,
    )
}

pub fn find_poset_isomorphism(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    let mut found = None;
    visit_poset_isomorphisms(p, q, |m| {
        found = Some(m.to_vec());
        true
    });
    found
}

/// Calls `visit` on every lattice isomorphism `f → g` until it returns
/// `true`. Returns whether the search was stopped.
pub fn visit_frame_isomorphisms(
    f: &Frame,
    g: &Frame,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> bool {
    if f.size() != g.size() || f.join_irreducibles().len() != g.join_irreducibles().len() {
        return false;
    }
    let jf = f.join_irreducibles().to_vec();
    let jg = g.join_irreducibles().to_vec();
    let pf = f.poset().induced(&jf);
    let pg = g.poset().induced(&jg);
    visit_poset_isomorphisms(&pf, &pg, |m| {
        let map: Vec<usize> = f
            .elements()
            .map(|a| {
                g.join_all(
                    jf.iter()
                        .enumerate()
                        .filter(|(_, &j)| f.leq(j, a))
                        .map(|(i, _)| jg[m[i]]),
                )
            })
            .collect();
        debug_assert!(is_order_isomorphism(f, g, &map));
        visit(&map)
    })
}

pub fn find_frame_isomorphism(f: &Frame, g: &Frame) -> Option<Vec<usize>> {
    let mut found = None;
    visit_frame_isomorphisms(f, g, |m| {
        found = Some(m.to_vec());
        true
    });
    found
}

pub fn is_isomorphic(f: &Frame, g: &Frame) -> bool {
    find_frame_isomorphism(f, g).is_some()
}

/// Is `map` a bijection with `a ≤ b ⟺ map(a) ≤ map(b)`?
pub fn is_order_isomorphism(f: &Frame, g: &Frame, map: &[usize]) -> bool {
    if map.len() != f.size() || f.size() != g.size() {
        return false;
    }
    let mut hit = vec![false; g.size()];
    for &y in map {
        if y >= g.size() || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    f.elements()
        .all(|a| f.elements().all(|b| f.leq(a, b) == g.leq(map[a], map[b])))
}

/// Canonical form of a relation on `0..n`: the lexicographically least
/// row-major matrix over all relabellings. Feasible for `n ≤ 8`.
pub fn canonical_relation(n: usize, rel: impl Fn(usize, usize) -> bool) -> Vec<bool> {
    use itertools::Itertools;
    let matrix: Vec<bool> = (0..n * n).map(|k| rel(k / n, k % n)).collect();
    let mut best: Option<Vec<bool>> = None;
    let mut bits = vec![false; n * n];
    for perm in (0..n).permutations(n) {
        // perm[i] is the old element placed at position i
        for i in 0..n {
            for j in 0..n {
                bits[i * n + j] = matrix[perm[i] * n + perm[j]];
            }
        }
        if best.as_ref().is_none_or(|b| bits < *b) {
            best = Some(bits.clone());
        }
    }
    best.unwrap_or_default()
}

/// Canonical form of a poset under relabelling.
pub fn poset_canonical_form(p: &Poset) -> Vec<bool> {
    canonical_relation(p.size(), |a, b| p.leq(a, b))
}

/// Canonical form of a distributive lattice: the canonical form of its
/// poset of join-irreducibles.
pub fn frame_canonical_form(f: &Frame) -> Vec<bool> {
    poset_canonical_form(&f.poset().induced(f.join_irreducibles()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains_and_squares() {
        let c4 = Frame::chain(4);
        let sq = Frame::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!is_isomorphic(&c4, &sq));
        assert!(is_isomorphic(&sq, &sq));
        let mut count = 0;
        visit_frame_isomorphisms(&sq, &sq, |_| {
            count += 1;
            false
        });
        assert_eq!(count, 2);
        // relabelled chain
        let c = Frame::from_covers(3, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(find_frame_isomorphism(&Frame::chain(3), &c), Some(vec![2, 0, 1]));
    }

    #[test]
    fn canonical_forms_identify_relabellings() {
        let a = Poset::from_covers(3, &[(0, 1)]).unwrap();
        let b = Poset::from_covers(3, &[(2, 0)]).unwrap();
        let c = Poset::chain(3);
        assert_eq!(poset_canonical_form(&a), poset_canonical_form(&b));
        assert_ne!(poset_canonical_form(&a), poset_canonical_form(&c));
    }
}
