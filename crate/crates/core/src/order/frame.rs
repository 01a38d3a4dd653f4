use fixedbitset::FixedBitSet;

use super::poset::Poset;
use crate::error::{Error, Result};

/// A finite frame, i.e. a finite distributive lattice, with its Heyting
/// structure precomputed.
///
/// Elements are the indices `0..size()`. Frames are immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    poset: Poset,
    meet: Vec<u32>,
    join: Vec<u32>,
    arrow: Vec<u32>,
    bottom: usize,
    top: usize,
    pseudo: Vec<usize>,
    join_irr: Vec<usize>,
    meet_irr: Vec<usize>,
}

impl Frame {
    /// Computes meet and join tables from the order and checks distributivity.
    ///
    /// Distributivity is decided through the join-irreducibles: a finite
    /// lattice is distributive iff every join-irreducible below `y ∨ z` is
    /// below `y` or below `z`. A failure yields the witness triple
    /// `(j, y, z)` with `j ∧ (y ∨ z) = j ≠ (j ∧ y) ∨ (j ∧ z)`.
    pub fn from_poset(poset: Poset) -> Result<Self> {
        let n = poset.size();
        if n == 0 {
            return Err(Error::NotALattice {
                a: 0,
                b: 0,
                missing: "least element",
            });
        }
        let linear = poset.linear_extension().to_vec();
        let mut pos = vec![0usize; n];
        for (i, &a) in linear.iter().enumerate() {
            pos[a] = i;
        }
        // Up- and down-sets indexed by position in the linear extension, so the
        // least element of an up-set is its first bit and the greatest element
        // of a down-set its last.
        let reindex = |row: &FixedBitSet| {
            let mut out = FixedBitSet::with_capacity(n);
            for b in row.ones() {
                out.insert(pos[b]);
            }
            out
        };
        let up: Vec<FixedBitSet> = (0..n).map(|a| reindex(poset.up(a))).collect();
        let down: Vec<FixedBitSet> = (0..n).map(|a| reindex(poset.down(a))).collect();

        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let mut common = up[a].clone();
                common.intersect_with(&up[b]);
                let lub = common
                    .ones()
                    .next()
                    .map(|p| linear[p])
                    .filter(|&c| common.is_subset(&up[c]))
                    .ok_or(Error::NotALattice {
                        a,
                        b,
                        missing: "join",
                    })?;
                let mut common = down[a].clone();
                common.intersect_with(&down[b]);
                let glb = common
                    .ones()
                    .next_back()
                    .map(|p| linear[p])
                    .filter(|&c| common.is_subset(&down[c]))
                    .ok_or(Error::NotALattice {
                        a,
                        b,
                        missing: "meet",
                    })?;
                join[a * n + b] = lub as u32;
                join[b * n + a] = lub as u32;
                meet[a * n + b] = glb as u32;
                meet[b * n + a] = glb as u32;
            }
        }
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x] as usize);
        let top = (0..n).fold(0, |acc, x| join[acc * n + x] as usize);

        let join_irr: Vec<usize> = (0..n)
            .filter(|&a| poset.lower_covers(a).count() == 1)
            .collect();
        let meet_irr: Vec<usize> = (0..n)
            .filter(|&a| poset.upper_covers(a).count() == 1)
            .collect();

        let jbits: Vec<FixedBitSet> = (0..n)
            .map(|a| {
                let mut s = FixedBitSet::with_capacity(join_irr.len());
                for (k, &j) in join_irr.iter().enumerate() {
                    if poset.leq(j, a) {
                        s.insert(k);
                    }
                }
                s
            })
            .collect();
        for a in 0..n {
            for b in (a + 1)..n {
                let ab = join[a * n + b] as usize;
                let mut lhs = jbits[ab].clone();
                lhs.difference_with(&jbits[a]);
                lhs.difference_with(&jbits[b]);
                if let Some(k) = lhs.ones().next() {
                    return Err(Error::NotDistributive {
                        x: join_irr[k],
                        y: a,
                        z: b,
                    });
                }
            }
        }

        // In a distributive lattice {c | a ∧ c ≤ b} is a down-set closed
        // under joins, so its largest element is the join of the
        // join-irreducibles it contains.
        let mut arrow = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = bottom;
                for &j in &join_irr {
                    if poset.leq(meet[a * n + j] as usize, b) {
                        acc = join[acc * n + j] as usize;
                    }
                }
                arrow[a * n + b] = acc as u32;
            }
        }
        let pseudo = (0..n).map(|a| arrow[a * n + bottom] as usize).collect();

        Ok(Frame {
            poset,
            meet,
            join,
            arrow,
            bottom,
            top,
            pseudo,
            join_irr,
            meet_irr,
        })
    }

    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Self> {
        Frame::from_poset(Poset::from_covers(size, covers)?)
    }

    /// The `n`-element chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1, "a frame has at least one element");
        Frame::from_poset(Poset::chain(n)).expect("chains are distributive")
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b] as usize
    }

    /// Heyting implication `a → b`.
    #[inline]
    pub fn arrow(&self, a: usize, b: usize) -> usize {
        self.arrow[a * self.size() + b] as usize
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// `a*`, the largest `c` with `a ∧ c = 0`.
    #[inline]
    pub fn pseudocomplement(&self, a: usize) -> usize {
        self.pseudo[a]
    }

    /// The complement of `a`, when it has one.
    pub fn complement(&self, a: usize) -> Option<usize> {
        let c = self.pseudo[a];
        (self.join(a, c) == self.top).then_some(c)
    }

    /// `a ≺ b`: `a* ∨ b = 1`.
    pub fn rather_below(&self, a: usize, b: usize) -> bool {
        self.join(self.pseudo[a], b) == self.top
    }

    /// The relation `≺≺` as rows `{b | a ≺≺ b}`: the greatest interpolating
    /// relation contained in `≺`.
    pub fn completely_below_relation(&self) -> Vec<FixedBitSet> {
        let n = self.size();
        let mut rel: Vec<FixedBitSet> = (0..n)
            .map(|a| {
                let mut row = FixedBitSet::with_capacity(n);
                for b in 0..n {
                    if self.rather_below(a, b) {
                        row.insert(b);
                    }
                }
                row
            })
            .collect();
        loop {
            let next: Vec<FixedBitSet> = (0..n)
                .map(|a| {
                    let mut reach = FixedBitSet::with_capacity(n);
                    for c in rel[a].ones() {
                        reach.union_with(&rel[c]);
                    }
                    reach.intersect_with(&rel[a]);
                    reach
                })
                .collect();
            if next == rel {
                return rel;
            }
            rel = next;
        }
    }

    pub fn completely_below(&self, a: usize, b: usize) -> bool {
        self.completely_below_relation()[a].contains(b)
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> &[usize] {
        &self.join_irr
    }

    /// Elements with exactly one upper cover.
    pub fn meet_irreducibles(&self) -> &[usize] {
        &self.meet_irr
    }

    /// The complemented elements `B L`.
    pub fn complemented_part(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.complement(a).is_some())
            .collect()
    }

    pub fn is_boolean(&self) -> bool {
        self.elements().all(|a| self.complement(a).is_some())
    }

    /// Every element is a join of complemented elements.
    pub fn is_zero_dimensional(&self) -> bool {
        let comp = self.complemented_part();
        self.elements().all(|a| {
            self.join_all(comp.iter().copied().filter(|&c| self.leq(c, a))) == a
        })
    }

    /// `{a | a* = 0}`.
    pub fn dense_elements(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.pseudo[a] == self.bottom)
            .collect()
    }

    /// `p ≠ 1` and `a ∧ b ≤ p` implies `a ≤ p` or `b ≤ p`.
    pub fn is_prime(&self, p: usize) -> bool {
        if p == self.top {
            return false;
        }
        let n = self.size();
        for a in 0..n {
            if self.leq(a, p) {
                continue;
            }
            for b in a..n {
                if !self.leq(b, p) && self.leq(self.meet(a, b), p) {
                    return false;
                }
            }
        }
        true
    }

    pub fn primes(&self) -> Vec<usize> {
        self.elements().filter(|&p| self.is_prime(p)).collect()
    }

    /// The down-set `↓a` as a sub-frame, with its elements listed.
    pub fn principal_downset(&self, a: usize) -> (Frame, Vec<usize>) {
        let elems: Vec<usize> = self.elements().filter(|&x| self.leq(x, a)).collect();
        (self.subposet_frame(&elems), elems)
    }

    /// The up-set `↑a` as a frame, with its elements listed.
    pub fn principal_upset(&self, a: usize) -> (Frame, Vec<usize>) {
        let elems: Vec<usize> = self.elements().filter(|&x| self.leq(a, x)).collect();
        (self.subposet_frame(&elems), elems)
    }

    /// The frame on a subset closed under the lattice operations of an
    /// interval; panics if the induced order is not a distributive lattice.
    pub(crate) fn subposet_frame(&self, elems: &[usize]) -> Frame {
        Frame::from_poset(self.poset.induced(elems)).expect("sublattice of a distributive lattice")
    }

    /// The smallest subset containing `seeds`, `0` and `1` that is closed
    /// under binary meet and join.
    pub fn generated_sublattice(&self, seeds: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.size());
        let mut members = Vec::new();
        let mut queue: Vec<usize> = vec![self.bottom, self.top];
        queue.extend(seeds);
        while let Some(x) = queue.pop() {
            if set.contains(x) {
                continue;
            }
            set.insert(x);
            for &y in &members {
                queue.push(self.meet(x, y));
                queue.push(self.join(x, y));
            }
            members.push(x);
        }
        set
    }

    /// Is `set` closed under binary meet and join, and does it contain `0`
    /// and `1`? Returns the first violation.
    pub fn sublattice_violation(&self, set: &FixedBitSet) -> Option<String> {
        if !set.contains(self.bottom) {
            return Some(format!("missing bottom {}", self.bottom));
        }
        if !set.contains(self.top) {
            return Some(format!("missing top {}", self.top));
        }
        for x in set.ones() {
            for y in set.ones() {
                if !set.contains(self.meet(x, y)) {
                    return Some(format!("{x} ∧ {y} = {} missing", self.meet(x, y)));
                }
                if !set.contains(self.join(x, y)) {
                    return Some(format!("{x} ∨ {y} = {} missing", self.join(x, y)));
                }
            }
        }
        None
    }

    /// Number of congruences, `2^|J|`, saturating.
    pub fn predicted_congruence_count(&self) -> u64 {
        1u64.checked_shl(self.join_irr.len() as u32)
            .unwrap_or(u64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Frame {
        Frame::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn arrow_oracle(f: &Frame, a: usize, b: usize) -> usize {
        let mut best = None;
        for c in f.elements() {
            if f.leq(f.meet(a, c), b) {
                match best {
                    None => best = Some(c),
                    Some(x) if f.leq(x, c) => best = Some(c),
                    _ => {}
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn three_chain() {
        let f = Frame::chain(3);
        let a = 1;
        assert_eq!(f.meet(a, a), a);
        assert_eq!(f.join(a, a), a);
        assert_eq!(f.pseudocomplement(a), 0);
        assert_eq!(f.pseudocomplement(0), 2);
        assert_eq!(f.arrow(a, 0), 0);
        assert_eq!(f.arrow(a, a), f.top());
        assert_eq!(f.complemented_part(), vec![0, 2]);
        assert_eq!(f.primes(), vec![0, 1]);
        assert_eq!(f.dense_elements(), vec![1, 2]);
        assert!(!f.is_boolean());
        assert!(!f.is_zero_dimensional());
        assert!(!f.rather_below(a, a));
        assert!(f.rather_below(0, a));
        assert!(f.completely_below(a, 2));
        assert_eq!(f.join_irreducibles(), &[1, 2]);
    }

    #[test]
    fn square() {
        let f = diamond();
        let (p, q) = (1, 2);
        assert_eq!(f.arrow(p, 0), q);
        assert!(f.rather_below(p, p));
        assert!(f.is_boolean());
        assert!(f.is_zero_dimensional());
        assert_eq!(f.dense_elements(), vec![3]);
        assert_eq!(f.primes(), vec![1, 2]);
    }

    #[test]
    fn pentagon_rejected() {
        // 0 < a < b < 1, 0 < c < 1
        let err = Frame::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap_err();
        let Error::NotDistributive { x, y, z } = err else {
            panic!("expected a distributivity witness, got {err:?}");
        };
        // Recompute the two sides directly from the order.
        let p = Poset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        let lub = |a: usize, b: usize| {
            (0..5)
                .filter(|&c| p.leq(a, c) && p.leq(b, c))
                .find(|&c| (0..5).all(|d| !(p.leq(a, d) && p.leq(b, d)) || p.leq(c, d)))
                .unwrap()
        };
        let glb = |a: usize, b: usize| {
            (0..5)
                .filter(|&c| p.leq(c, a) && p.leq(c, b))
                .find(|&c| (0..5).all(|d| !(p.leq(d, a) && p.leq(d, b)) || p.leq(d, c)))
                .unwrap()
        };
        assert_ne!(glb(x, lub(y, z)), lub(glb(x, y), glb(x, z)));
    }

    #[test]
    fn m3_rejected() {
        let err = Frame::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]);
        assert!(matches!(err, Err(Error::NotDistributive { .. })));
    }

    #[test]
    fn non_lattice_rejected() {
        // two maximal elements
        let err = Frame::from_covers(3, &[(0, 1), (0, 2)]);
        assert!(matches!(err, Err(Error::NotALattice { missing: "join", .. })));
        assert!(Frame::from_poset(Poset::antichain(0)).is_err());
    }

    #[test]
    fn arrow_matches_brute_force() {
        for f in [Frame::chain(1), Frame::chain(4), diamond()] {
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.arrow(a, b), arrow_oracle(&f, a, b));
                }
            }
        }
    }
}
