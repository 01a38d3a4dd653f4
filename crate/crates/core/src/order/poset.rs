use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A finite partial order on the indices `0..size`.
///
/// The order is stored as up-sets and down-sets (one bit row per element),
/// together with the Hasse diagram and a fixed linear extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    size: usize,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    covers: Vec<(usize, usize)>,
    linear: Vec<usize>,
}

impl Poset {
    /// Builds the reflexive-transitive closure of a cover list.
    ///
    /// Redundant pairs in `covers` are allowed; the stored cover list is the
    /// transitive reduction of the closure.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut succ = vec![Vec::new(); size];
        let mut indegree = vec![0usize; size];
        for &(a, b) in covers {
            for x in [a, b] {
                if x >= size {
                    return Err(Error::IndexOutOfRange { index: x, size });
                }
            }
            if a == b {
                return Err(Error::CycleDetected(a));
            }
            succ[a].push(b);
            indegree[b] += 1;
        }

        // Kahn's algorithm; whatever is left over sits on a cycle.
        let mut order = Vec::with_capacity(size);
        let mut ready: Vec<usize> = (0..size).filter(|&x| indegree[x] == 0).collect();
        while let Some(x) = ready.pop() {
            order.push(x);
            for &y in &succ[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.push(y);
                }
            }
        }
        if order.len() < size {
            let stuck = (0..size).find(|&x| indegree[x] > 0).unwrap_or(0);
            return Err(Error::CycleDetected(stuck));
        }

        let mut up = vec![FixedBitSet::with_capacity(size); size];
        for &x in order.iter().rev() {
            let mut row = FixedBitSet::with_capacity(size);
            row.insert(x);
            for &y in &succ[x] {
                row.union_with(&up[y]);
            }
            up[x] = row;
        }
        Ok(Self::from_up_sets(up))
    }

    /// Builds a poset from an arbitrary relation, checking the order axioms.
    pub fn from_relation(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        for (a, row) in up.iter_mut().enumerate() {
            for b in 0..size {
                if leq(a, b) {
                    row.insert(b);
                }
            }
        }
        for a in 0..size {
            if !up[a].contains(a) {
                return Err(Error::NotAPartialOrder(format!("{a} ≰ {a}")));
            }
            for b in up[a].ones() {
                if b != a && up[b].contains(a) {
                    return Err(Error::NotAPartialOrder(format!(
                        "{a} ≤ {b} and {b} ≤ {a}"
                    )));
                }
                if !up[b].is_subset(&up[a]) {
                    let c = up[b].difference(&up[a]).next().unwrap();
                    return Err(Error::NotAPartialOrder(format!(
                        "{a} ≤ {b} ≤ {c} but {a} ≰ {c}"
                    )));
                }
            }
        }
        Ok(Self::from_up_sets(up))
    }

    fn from_up_sets(up: Vec<FixedBitSet>) -> Self {
        let size = up.len();
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        let mut covers = Vec::new();
        for a in 0..size {
            let mut strict = up[a].clone();
            strict.set(a, false);
            let mut cov = strict.clone();
            for c in strict.ones() {
                let mut above = up[c].clone();
                above.set(c, false);
                cov.difference_with(&above);
            }
            covers.extend(cov.ones().map(|b| (a, b)));
        }
        let mut linear: Vec<usize> = (0..size).collect();
        linear.sort_by_key(|&a| (down[a].count_ones(..), a));
        Poset {
            size,
            up,
            down,
            covers,
            linear,
        }
    }

    pub fn chain(size: usize) -> Self {
        let covers: Vec<_> = (1..size).map(|i| (i - 1, i)).collect();
        Self::from_covers(size, &covers).expect("chain covers are acyclic")
    }

    pub fn antichain(size: usize) -> Self {
        Self::from_covers(size, &[]).expect("empty cover list")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// `{b | a ≤ b}`.
    pub fn up(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    /// `{b | b ≤ a}`.
    pub fn down(&self, a: usize) -> &FixedBitSet {
        &self.down[a]
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.1 == a).map(|c| c.0)
    }

    pub fn upper_covers(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.0 == a).map(|c| c.1)
    }

    /// A linear extension: if `a < b` then `a` appears before `b`.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    /// Length of the longest chain from a minimal element up to each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut height = vec![0usize; self.size];
        for &a in &self.linear {
            height[a] = self
                .lower_covers(a)
                .map(|b| height[b] + 1)
                .max()
                .unwrap_or(0);
        }
        height
    }

    /// All down-closed subsets, in increasing order of their bit patterns
    /// read as (element 0 = least significant) numbers.
    pub fn downsets(&self) -> Vec<FixedBitSet> {
        // Grow down-sets along the linear extension: each element may be
        // added only once everything below it is present.
        let mut out = vec![FixedBitSet::with_capacity(self.size)];
        for &a in &self.linear {
            let mut extended = Vec::new();
            for d in &out {
                let mut below = self.down[a].clone();
                below.set(a, false);
                if below.is_subset(d) {
                    let mut e = d.clone();
                    e.insert(a);
                    extended.push(e);
                }
            }
            out.extend(extended);
        }
        out.sort_by(cmp_bits);
        out
    }

    /// Is `set` closed downwards?
    pub fn is_downset(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|a| self.down[a].is_subset(set))
    }

    /// Order relation as a row-major bit string, used for canonical forms.
    pub fn relation_under(&self, perm: &[usize]) -> Vec<bool> {
        let n = self.size;
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mut bits = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                bits[i * n + j] = self.leq(inv[i], inv[j]);
            }
        }
        bits
    }

    /// The sub-poset induced on `elements` (listed in the order of the new
    /// indices).
    pub fn induced(&self, elements: &[usize]) -> Poset {
        Poset::from_relation(elements.len(), |i, j| self.leq(elements[i], elements[j]))
            .expect("restriction of a partial order is a partial order")
    }

    pub fn dual(&self) -> Poset {
        Poset::from_relation(self.size, |a, b| self.leq(b, a)).expect("dual of a partial order")
    }
}

/// Compares two bit-sets as binary numbers with bit 0 least significant.
pub(crate) fn cmp_bits(x: &FixedBitSet, y: &FixedBitSet) -> std::cmp::Ordering {
    let len = x.len().max(y.len());
    for i in (0..len).rev() {
        let (a, b) = (x.contains(i), y.contains(i));
        if a != b {
            return a.cmp(&b);
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_closure() {
        let p = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p.leq(i, j), i <= j);
            }
        }
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn diamond() {
        let p = Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(p.leq(0, 3));
        assert!(!p.leq(1, 2) && !p.leq(2, 1));
        assert_eq!(p.covers().len(), 4);
    }

    #[test]
    fn redundant_covers_are_reduced() {
        let p = Poset::from_covers(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn cycle_rejected() {
        assert!(matches!(
            Poset::from_covers(2, &[(0, 1), (1, 0)]),
            Err(Error::CycleDetected(_))
        ));
        assert!(matches!(
            Poset::from_covers(1, &[(0, 0)]),
            Err(Error::CycleDetected(0))
        ));
    }

    #[test]
    fn out_of_range() {
        assert_eq!(
            Poset::from_covers(2, &[(0, 2)]),
            Err(Error::IndexOutOfRange { index: 2, size: 2 })
        );
    }

    #[test]
    fn relation_axioms() {
        assert!(Poset::from_relation(2, |a, b| a != b).is_err());
        assert!(Poset::from_relation(2, |_, _| true).is_err());
        // 0 ≤ 1 ≤ 2 without 0 ≤ 2
        let bad = Poset::from_relation(3, |a, b| a == b || (a, b) == (0, 1) || (a, b) == (1, 2));
        assert!(matches!(bad, Err(Error::NotAPartialOrder(_))));
    }

    #[test]
    fn downsets_of_antichain() {
        let p = Poset::antichain(2);
        assert_eq!(p.downsets().len(), 4);
        let p = Poset::chain(3);
        assert_eq!(p.downsets().len(), 4);
        assert_eq!(Poset::antichain(0).downsets().len(), 1);
    }

    #[test]
    fn linear_extension_respects_order() {
        let p = Poset::from_covers(5, &[(3, 0), (0, 4), (1, 4), (2, 1)]).unwrap();
        let pos: Vec<usize> = {
            let mut pos = vec![0; 5];
            for (i, &a) in p.linear_extension().iter().enumerate() {
                pos[a] = i;
            }
            pos
        };
        for a in 0..5 {
            for b in 0..5 {
                if p.lt(a, b) {
                    assert!(pos[a] < pos[b]);
                }
            }
        }
        assert_eq!(p.heights(), vec![1, 1, 0, 0, 2]);
    }
}
