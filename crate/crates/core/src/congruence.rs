//! Congruences on finite frames, stored as nuclei.
//!
//! A congruence `C` is represented by `ν_C`, where `ν_C(x)` is the largest
//! element of the class of `x`. Two congruences are equal iff their nucleus
//! arrays agree, and the lexicographic order of those arrays is the canonical
//! order used for deterministic output.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::order::{same_frame, Frame, FrameHom};

#[derive(Clone, Debug)]
pub struct Congruence {
    frame: Arc<Frame>,
    nu: Vec<usize>,
}

impl PartialEq for Congruence {
    fn eq(&self, other: &Self) -> bool {
        self.nu == other.nu && same_frame(&self.frame, &other.frame)
    }
}

impl Eq for Congruence {}

impl PartialOrd for Congruence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Congruence {
    fn cmp(&self, other: &Self) -> Ordering {
        self.nu.cmp(&other.nu)
    }
}

impl Hash for Congruence {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.nu.hash(state)
    }
}

/// A quotient frame together with the quotient map onto it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub frame: Arc<Frame>,
    pub map: FrameHom,
    /// Class maxima in the source, one per quotient element.
    pub representatives: Vec<usize>,
}

/// Checks the nucleus laws: inflationary, idempotent, preserves binary meets.
pub fn check_nucleus(frame: &Frame, nu: &[usize]) -> Result<()> {
    if nu.len() != frame.size() {
        return Err(Error::Precondition(format!(
            "nucleus has {} entries for a frame of size {}",
            nu.len(),
            frame.size()
        )));
    }
    if let Some(&v) = nu.iter().find(|&&v| v >= frame.size()) {
        return Err(Error::IndexOutOfRange {
            index: v,
            size: frame.size(),
        });
    }
    for x in frame.elements() {
        if !frame.leq(x, nu[x]) {
            return Err(Error::NotANucleus {
                law: "inflationary",
                witness: x,
            });
        }
    }
    for x in frame.elements() {
        if nu[nu[x]] != nu[x] {
            return Err(Error::NotANucleus {
                law: "idempotent",
                witness: x,
            });
        }
    }
    for x in frame.elements() {
        for y in frame.elements() {
            if nu[frame.meet(x, y)] != frame.meet(nu[x], nu[y]) {
                return Err(Error::NotANucleus {
                    law: "meet-preserving",
                    witness: x,
                });
            }
        }
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two distinct classes were merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

impl Congruence {
    pub(crate) fn from_nu_unchecked(frame: &Arc<Frame>, nu: Vec<usize>) -> Self {
        debug_assert!(check_nucleus(frame, &nu).is_ok());
        Congruence {
            frame: frame.clone(),
            nu,
        }
    }

    /// Wraps a nucleus array after checking the nucleus laws.
    pub fn from_nucleus(frame: &Arc<Frame>, nu: Vec<usize>) -> Result<Self> {
        check_nucleus(frame, &nu)?;
        Ok(Congruence {
            frame: frame.clone(),
            nu,
        })
    }

    /// The congruence whose classes are the fibres of `key`.
    ///
    /// The caller guarantees the fibres form a congruence (e.g. `key` is a
    /// lattice homomorphism); the class maxima are taken as joins.
    pub fn from_key<K: Hash + Eq>(frame: &Arc<Frame>, key: impl Fn(usize) -> K) -> Self {
        let keys: Vec<K> = frame.elements().map(key).collect();
        let mut top_of: HashMap<&K, usize> = HashMap::new();
        for (x, k) in keys.iter().enumerate() {
            top_of
                .entry(k)
                .and_modify(|m| *m = frame.join(*m, x))
                .or_insert(x);
        }
        let nu = keys.iter().map(|k| top_of[k]).collect();
        Congruence::from_nu_unchecked(frame, nu)
    }

    /// The diagonal congruence `0`.
    pub fn diagonal(frame: &Arc<Frame>) -> Self {
        Congruence::from_nu_unchecked(frame, frame.elements().collect())
    }

    /// The all-pairs congruence `1`.
    pub fn full(frame: &Arc<Frame>) -> Self {
        Congruence::from_nu_unchecked(frame, vec![frame.top(); frame.size()])
    }

    /// `⟨S⟩`, the least congruence containing every pair in `pairs`.
    ///
    /// Pairs are merged in a union-find structure; every merge is queued once
    /// and its products with all elements are merged in turn. The relation
    /// generated by the merged pairs is then closed under `∧` and `∨`.
    pub fn generated(frame: &Arc<Frame>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = frame.size();
        let mut uf = UnionFind::new(n);
        let mut queue = VecDeque::new();
        for &(a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, size: n });
                }
            }
            if uf.union(a, b) {
                queue.push_back((a, b));
            }
        }
        while let Some((x, y)) = queue.pop_front() {
            for z in 0..n {
                let (p, q) = (frame.meet(x, z), frame.meet(y, z));
                if uf.union(p, q) {
                    queue.push_back((p, q));
                }
                let (p, q) = (frame.join(x, z), frame.join(y, z));
                if uf.union(p, q) {
                    queue.push_back((p, q));
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        Ok(Congruence::from_key(frame, |x| roots[x]))
    }

    /// `∇_a`: `x ~ y ⟺ x ∨ a = y ∨ a`, with `ν(x) = x ∨ a`.
    pub fn nabla(frame: &Arc<Frame>, a: usize) -> Self {
        let nu = frame.elements().map(|x| frame.join(x, a)).collect();
        Congruence::from_nu_unchecked(frame, nu)
    }

    /// `Δ_a`: `x ~ y ⟺ x ∧ a = y ∧ a`.
    pub fn delta(frame: &Arc<Frame>, a: usize) -> Self {
        Congruence::from_key(frame, |x| frame.meet(x, a))
    }

    /// `⟨(a, b)⟩ = ∇_{a∨b} ∧ Δ_{a∧b}`.
    pub fn principal(frame: &Arc<Frame>, a: usize, b: usize) -> Self {
        let (lo, hi) = (frame.meet(a, b), frame.join(a, b));
        Congruence::nabla(frame, hi)
            .meet(&Congruence::delta(frame, lo))
            .expect("same frame")
    }

    /// `D`, the largest dense congruence: the kernel of `x ↦ x**`.
    pub fn largest_dense(frame: &Arc<Frame>) -> Self {
        Congruence::from_key(frame, |x| frame.pseudocomplement(frame.pseudocomplement(x)))
    }

    /// `∂_a`, the kernel of `x ↦ (x → a)`.
    pub fn clear(frame: &Arc<Frame>, a: usize) -> Self {
        Congruence::from_key(frame, |x| frame.arrow(x, a))
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    /// The nucleus array.
    pub fn nu(&self) -> &[usize] {
        &self.nu
    }

    #[inline]
    pub fn nucleus(&self, x: usize) -> usize {
        self.nu[x]
    }

    #[inline]
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.nu[x] == self.nu[y]
    }

    /// The least element of the class of `x`.
    pub fn class_min(&self, x: usize) -> usize {
        let f = &self.frame;
        f.meet_all(f.elements().filter(|&y| self.nu[y] == self.nu[x]))
    }

    /// Classes as sorted index lists, ordered by their least index.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut by_top: HashMap<usize, Vec<usize>> = HashMap::new();
        for (x, &t) in self.nu.iter().enumerate() {
            by_top.entry(t).or_default().push(x);
        }
        let mut blocks: Vec<Vec<usize>> = by_top.into_values().collect();
        blocks.sort();
        blocks
    }

    /// Fixed points of the nucleus, ascending.
    pub fn fixed_points(&self) -> Vec<usize> {
        self.frame
            .elements()
            .filter(|&x| self.nu[x] == x)
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.nu.iter().enumerate().all(|(x, &v)| x == v)
    }

    pub fn is_full(&self) -> bool {
        self.nu[self.frame.bottom()] == self.frame.top()
    }

    /// Inclusion of relations, i.e. `ν_C ≤ ν_D` pointwise.
    pub fn leq(&self, other: &Congruence) -> bool {
        self.frame
            .elements()
            .all(|x| self.frame.leq(self.nu[x], other.nu[x]))
    }

    fn check_same(&self, other: &Congruence) -> Result<()> {
        if same_frame(&self.frame, &other.frame) {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    /// Intersection of the two relations; its nucleus is the pointwise meet.
    pub fn meet(&self, other: &Congruence) -> Result<Congruence> {
        self.check_same(other)?;
        let f = &self.frame;
        let nu = f.elements().map(|x| f.meet(self.nu[x], other.nu[x])).collect();
        Ok(Congruence::from_nu_unchecked(f, nu))
    }

    /// The congruence generated by the union of the two relations.
    ///
    /// `ν_C ∘ ν_D` is inflationary and preserves meets; iterating it until it
    /// stabilises gives the least nucleus above both.
    pub fn join(&self, other: &Congruence) -> Result<Congruence> {
        self.check_same(other)?;
        let mut nu: Vec<usize> = self.frame.elements().map(|x| self.nu[other.nu[x]]).collect();
        loop {
            let next: Vec<usize> = nu.iter().map(|&y| self.nu[other.nu[y]]).collect();
            if next == nu {
                break;
            }
            nu = next;
        }
        Ok(Congruence::from_nu_unchecked(&self.frame, nu))
    }

    /// The same join, computed by closing the union of the two relations
    /// under the lattice operations. Slower; kept as a cross-check.
    pub fn join_by_generation(&self, other: &Congruence) -> Result<Congruence> {
        self.check_same(other)?;
        let pairs: Vec<(usize, usize)> = self
            .frame
            .elements()
            .flat_map(|x| [(x, self.nu[x]), (x, other.nu[x])])
            .collect();
        Congruence::generated(&self.frame, &pairs)
    }

    /// `C ∨ ∇_a`: `x ~ y ⟺ (x ∨ a, y ∨ a) ∈ C`.
    pub fn join_with_nabla(&self, a: usize) -> Congruence {
        let f = &self.frame;
        Congruence::from_key(f, |x| self.nu[f.join(x, a)])
    }

    /// `C ∨ Δ_a`: `x ~ y ⟺ (x ∧ a, y ∧ a) ∈ C`.
    pub fn join_with_delta(&self, a: usize) -> Congruence {
        let f = &self.frame;
        Congruence::from_key(f, |x| self.nu[f.meet(x, a)])
    }

    /// The largest closed congruence below `C`: `∇_{ν(0)}`.
    pub fn closure(&self) -> Congruence {
        Congruence::nabla(&self.frame, self.nu[self.frame.bottom()])
    }

    /// The quotient frame on the class maxima, ordered as in the source.
    pub fn quotient(&self) -> Quotient {
        let reps = self.fixed_points();
        let mut index = vec![usize::MAX; self.frame.size()];
        for (i, &r) in reps.iter().enumerate() {
            index[r] = i;
        }
        let frame = Arc::new(self.frame.subposet_frame(&reps));
        let map = self.nu.iter().map(|&t| index[t]).collect();
        Quotient {
            map: FrameHom::new_unchecked(self.frame.clone(), frame.clone(), map),
            frame,
            representatives: reps,
        }
    }

    /// `ν(0) = 0`: the only closed congruence below `C` is `0`.
    pub fn is_dense(&self) -> bool {
        self.nu[self.frame.bottom()] == self.frame.bottom()
    }

    /// `cl(C) ≤ dn`; requires `dn ≤ C`.
    pub fn is_dense_in(&self, dn: &Congruence) -> Result<bool> {
        self.check_same(dn)?;
        if !dn.leq(self) {
            return Err(Error::Precondition(
                "the reference congruence must lie below C".into(),
            ));
        }
        Ok(self.closure().leq(dn))
    }

    /// `C = ∂_{ν(0)}`.
    pub fn is_clear(&self) -> bool {
        *self == Congruence::clear(&self.frame, self.nu[self.frame.bottom()])
    }

    /// Every interval `a < b` contains a pair `a ≤ c < d ≤ b` with
    /// `(c, d) ∈ C`.
    pub fn is_rare(&self) -> bool {
        let f = &self.frame;
        // (c, d) ∈ C with c < d ≤ b exists iff ν(c) ∧ b > c.
        f.elements().all(|a| {
            f.elements().filter(|&b| f.lt_strict(a, b)).all(|b| {
                f.elements()
                    .filter(|&c| f.leq(a, c) && f.lt_strict(c, b))
                    .any(|c| f.meet(self.nu[c], b) != c)
            })
        })
    }

    /// `{a | ∂_a ≥ C}`; the meet of those `∂_a` is `C`.
    pub fn clear_decomposition(&self) -> Vec<usize> {
        let f = &self.frame;
        f.elements()
            .filter(|&a| self.leq(&Congruence::clear(f, a)))
            .collect()
    }

    /// `D ∨ C = ∂_{a**}` where `cl(C) = ∇_a`.
    pub fn join_with_largest_dense(&self) -> Congruence {
        let f = &self.frame;
        let a = self.nu[f.bottom()];
        Congruence::clear(f, f.pseudocomplement(f.pseudocomplement(a)))
    }
}

impl Frame {
    #[inline]
    pub(crate) fn lt_strict(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }
}

/// The least `b ≥ a` with `(b, 1) ∈ ∂_a`; then `∂_a = ∇_a ∨ Δ_b`.
pub fn beazer_macnab_witness(frame: &Frame, a: usize) -> Result<usize> {
    // (b, 1) ∈ ∂_a iff b → a = 1 → a = a
    let candidates: Vec<usize> = frame
        .elements()
        .filter(|&b| frame.leq(a, b) && frame.arrow(b, a) == a)
        .collect();
    candidates
        .iter()
        .copied()
        .find(|&b| candidates.iter().all(|&c| frame.leq(b, c)))
        .ok_or(Error::NoLeastWitness(a))
}
