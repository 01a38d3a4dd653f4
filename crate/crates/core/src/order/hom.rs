use std::sync::Arc;

use super::frame::Frame;
use crate::congruence::Congruence;
use crate::error::{Error, Result};

/// A frame homomorphism between finite frames: preserves `0`, `1`, binary
/// meets and binary joins.
#[derive(Clone, Debug)]
pub struct FrameHom {
    source: Arc<Frame>,
    target: Arc<Frame>,
    map: Vec<usize>,
}

impl PartialEq for FrameHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && same(&self.source, &other.source)
            && same(&self.target, &other.target)
    }
}

impl Eq for FrameHom {}

pub(crate) fn same(a: &Arc<Frame>, b: &Arc<Frame>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FrameHom {
    pub fn new(source: Arc<Frame>, target: Arc<Frame>, map: Vec<usize>) -> Result<Self> {
        validate(&source, &target, &map)?;
        Ok(FrameHom {
            source,
            target,
            map,
        })
    }

    pub(crate) fn new_unchecked(source: Arc<Frame>, target: Arc<Frame>, map: Vec<usize>) -> Self {
        debug_assert!(validate(&source, &target, &map).is_ok());
        FrameHom {
            source,
            target,
            map,
        }
    }

    pub fn identity(frame: Arc<Frame>) -> Self {
        let map = frame.elements().collect();
        FrameHom {
            source: frame.clone(),
            target: frame,
            map,
        }
    }

    pub fn source(&self) -> &Arc<Frame> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Frame> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &FrameHom) -> Result<FrameHom> {
        if !same(&self.target, &next.source) {
            return Err(Error::HomMismatch);
        }
        let map = self.map.iter().map(|&x| next.map[x]).collect();
        Ok(FrameHom {
            source: self.source.clone(),
            target: next.target.clone(),
            map,
        })
    }

    /// `f_*(y) = ⋁{x | f(x) ≤ y}`.
    pub fn right_adjoint(&self) -> Vec<usize> {
        let (s, t) = (&self.source, &self.target);
        t.elements()
            .map(|y| s.join_all(s.elements().filter(|&x| t.leq(self.map[x], y))))
            .collect()
    }

    /// `{(x, y) | f(x) = f(y)}` as a congruence on the source.
    pub fn kernel(&self) -> Congruence {
        Congruence::from_key(&self.source, |x| self.map[x])
    }

    /// `f(x) = 0` only when `x = 0`.
    pub fn is_dense(&self) -> bool {
        self.source
            .elements()
            .all(|x| self.map[x] != self.target.bottom() || x == self.source.bottom())
    }

    /// `f(x) = 1` only when `x = 1`.
    pub fn is_codense(&self) -> bool {
        self.source
            .elements()
            .all(|x| self.map[x] != self.target.top() || x == self.source.top())
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        self.injectivity_witness().is_none()
    }

    pub(crate) fn injectivity_witness(&self) -> Option<(usize, usize)> {
        let mut seen = vec![usize::MAX; self.target.size()];
        for (x, &y) in self.map.iter().enumerate() {
            if seen[y] != usize::MAX {
                return Some((seen[y], x));
            }
            seen[y] = x;
        }
        None
    }

    /// Is the image contained in the complemented part of the target?
    pub fn has_complemented_image(&self) -> bool {
        self.map.iter().all(|&y| self.target.complement(y).is_some())
    }
}

/// Checks that `map` preserves bottom, top, binary meets and binary joins.
pub fn validate(source: &Frame, target: &Frame, map: &[usize]) -> Result<()> {
    if map.len() != source.size() {
        return Err(Error::Precondition(format!(
            "map has {} entries for a source of size {}",
            map.len(),
            source.size()
        )));
    }
    if let Some(&y) = map.iter().find(|&&y| y >= target.size()) {
        return Err(Error::IndexOutOfRange {
            index: y,
            size: target.size(),
        });
    }
    let (b, t) = (source.bottom(), source.top());
    if map[b] != target.bottom() {
        return Err(Error::NotAHom {
            op: "bottom",
            a: b,
            b,
        });
    }
    if map[t] != target.top() {
        return Err(Error::NotAHom { op: "top", a: t, b: t });
    }
    for x in source.elements() {
        for y in x + 1..source.size() {
            if map[source.meet(x, y)] != target.meet(map[x], map[y]) {
                return Err(Error::NotAHom { op: "meet", a: x, b: y });
            }
            if map[source.join(x, y)] != target.join(map[x], map[y]) {
                return Err(Error::NotAHom { op: "join", a: x, b: y });
            }
        }
    }
    Ok(())
}

/// All frame homomorphisms `source → target` whose values satisfy `allowed`,
/// in lexicographic order of their maps.
///
/// A homomorphism is determined by its values on join-irreducibles, so the
/// search assigns those (monotonically) and extends by joins.
pub fn enumerate_homs_filtered(
    source: &Frame,
    target: &Frame,
    allowed: impl Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let jirr = source.join_irreducibles().to_vec();
    let mut out = Vec::new();
    let mut values = vec![0usize; jirr.len()];
    search(source, target, &jirr, &allowed, 0, &mut values, &mut out);
    out.sort();
    out
}

pub fn enumerate_homs(source: &Frame, target: &Frame) -> Vec<Vec<usize>> {
    enumerate_homs_filtered(source, target, |_, _| true)
}

fn search(
    source: &Frame,
    target: &Frame,
    jirr: &[usize],
    allowed: &impl Fn(usize, usize) -> bool,
    k: usize,
    values: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if k == jirr.len() {
        let map: Vec<usize> = source
            .elements()
            .map(|x| {
                target.join_all(
                    jirr.iter()
                        .zip(values.iter())
                        .filter(|(&j, _)| source.leq(j, x))
                        .map(|(_, &v)| v),
                )
            })
            .collect();
        if map.iter().enumerate().all(|(x, &y)| allowed(x, y))
            && validate(source, target, &map).is_ok()
        {
            out.push(map);
        }
        return;
    }
    for v in target.elements() {
        let monotone = (0..k).all(|i| {
            let (ji, jk) = (jirr[i], jirr[k]);
            (!source.leq(ji, jk) || target.leq(values[i], v))
                && (!source.leq(jk, ji) || target.leq(v, values[i]))
        });
        if monotone && allowed(jirr[k], v) {
            values[k] = v;
            search(source, target, jirr, allowed, k + 1, values, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_homs(s: &Frame, t: &Frame) -> Vec<Vec<usize>> {
        let n = s.size();
        let m = t.size();
        let mut out = Vec::new();
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let map: Vec<usize> = (0..n)
                .map(|_| {
                    let v = c % m;
                    c /= m;
                    v
                })
                .collect();
            if validate(s, t, &map).is_ok() {
                out.push(map);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn quotient_map_kernel() {
        let three = Arc::new(Frame::chain(3));
        let two = Arc::new(Frame::chain(2));
        let q = FrameHom::new(three, two, vec![0, 1, 1]).unwrap();
        let k = q.kernel();
        assert_eq!(k.blocks(), vec![vec![0], vec![1, 2]]);
        assert!(q.is_surjective());
        assert!(q.is_dense());
        assert!(!q.is_codense());
        assert_eq!(q.right_adjoint(), vec![0, 2]);
    }

    #[test]
    fn identity_kernel_is_diagonal() {
        let f = Arc::new(Frame::chain(4));
        let id = FrameHom::identity(f.clone());
        assert_eq!(id.kernel(), Congruence::diagonal(&f));
    }

    #[test]
    fn collapsing_middle_is_not_dense() {
        let three = Arc::new(Frame::chain(3));
        let f = FrameHom::new(three.clone(), three, vec![0, 0, 2]).unwrap();
        assert!(!f.is_dense());
        assert!(f.is_codense());
    }

    #[test]
    fn non_hom_reports_operation() {
        let three = Arc::new(Frame::chain(3));
        let two = Arc::new(Frame::chain(2));
        assert_eq!(
            FrameHom::new(three.clone(), two.clone(), vec![0, 1, 0]).unwrap_err(),
            Error::NotAHom { op: "top", a: 2, b: 2 }
        );
        let square = Arc::new(Frame::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap());
        // p, q ↦ 1 breaks p ∧ q = 0
        assert!(matches!(
            FrameHom::new(square, two, vec![0, 1, 1, 1]),
            Err(Error::NotAHom { op: "meet", .. })
        ));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let frames = [
            Frame::chain(1),
            Frame::chain(2),
            Frame::chain(3),
            Frame::chain(4),
            Frame::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap(),
        ];
        for s in &frames {
            for t in &frames {
                assert_eq!(enumerate_homs(s, t), brute_force_homs(s, t));
            }
        }
    }

    #[test]
    fn galois_connection() {
        let s = Arc::new(Frame::chain(4));
        let t = Arc::new(Frame::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap());
        for map in enumerate_homs(&s, &t) {
            let f = FrameHom::new(s.clone(), t.clone(), map).unwrap();
            let adj = f.right_adjoint();
            for x in s.elements() {
                for y in t.elements() {
                    assert_eq!(t.leq(f.apply(x), y), s.leq(x, adj[y]));
                }
            }
        }
    }
}
