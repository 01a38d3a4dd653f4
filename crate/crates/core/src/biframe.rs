//! Biframes, strict zero-dimensionality and the congruential coreflection.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::assembly::{assemble, functor_on_hom, Assembly};
use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::order::{enumerate_homs, enumerate_homs_filtered, iso, same_frame, Frame, FrameHom};

/// A finite biframe `(L0, L1, L2)`: two sub-lattices of `total` that
/// together generate it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biframe {
    total: Arc<Frame>,
    part1: FixedBitSet,
    part2: FixedBitSet,
}

fn bits(n: usize, items: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(n);
    for x in items {
        out.insert(x);
    }
    out
}

impl Biframe {
    /// Validates the parts; nothing is repaired.
    pub fn new(total: Arc<Frame>, part1: FixedBitSet, part2: FixedBitSet) -> Result<Self> {
        let b = Biframe {
            total,
            part1,
            part2,
        };
        validate_biframe(&b)?;
        Ok(b)
    }

    /// Replaces each part by the sub-lattice it generates before validating.
    pub fn with_closure(total: Arc<Frame>, part1: &[usize], part2: &[usize]) -> Result<Self> {
        let n = total.size();
        if let Some(&x) = part1.iter().chain(part2).find(|&&x| x >= n) {
            return Err(Error::IndexOutOfRange { index: x, size: n });
        }
        let p1 = total.generated_sublattice(part1.iter().copied());
        let p2 = total.generated_sublattice(part2.iter().copied());
        Biframe::new(total, p1, p2)
    }

    pub fn total(&self) -> &Arc<Frame> {
        &self.total
    }

    pub fn part1(&self) -> &FixedBitSet {
        &self.part1
    }

    pub fn part2(&self) -> &FixedBitSet {
        &self.part2
    }

    pub fn part1_elements(&self) -> Vec<usize> {
        self.part1.ones().collect()
    }

    pub fn part2_elements(&self) -> Vec<usize> {
        self.part2.ones().collect()
    }

    /// `L1` as a frame, with its embedding into the total.
    pub fn part1_frame(&self) -> (Arc<Frame>, Vec<usize>) {
        let elems = self.part1_elements();
        (Arc::new(self.total.subposet_frame(&elems)), elems)
    }

    pub fn part2_frame(&self) -> (Arc<Frame>, Vec<usize>) {
        let elems = self.part2_elements();
        (Arc::new(self.total.subposet_frame(&elems)), elems)
    }

    /// Strictly zero-dimensional: every `a ∈ L1` has a complement in `L0`
    /// lying in `L2`, and these complements generate `L2`.
    pub fn is_strictly_zero_dimensional(&self) -> bool {
        let mut comps = Vec::new();
        for a in self.part1.ones() {
            match self.total.complement(a) {
                Some(c) if self.part2.contains(c) => comps.push(c),
                _ => return false,
            }
        }
        self.total.generated_sublattice(comps) == self.part2
    }

    fn require_str0d(&self) -> Result<()> {
        if self.is_strictly_zero_dimensional() {
            Ok(())
        } else {
            Err(Error::NotABiframe("not strictly zero-dimensional".into()))
        }
    }

    /// `L1`: in a strictly zero-dimensional biframe these play the role of
    /// closed congruences.
    pub fn closed_elements(&self) -> Vec<usize> {
        self.part1_elements()
    }

    /// The largest element of `L1` below `x`.
    pub fn closure(&self, x: usize) -> usize {
        self.total
            .join_all(self.part1.ones().filter(|&c| self.total.leq(c, x)))
    }

    /// `x` is the largest element with its closure.
    pub fn is_clear_element(&self, x: usize) -> bool {
        let c = self.closure(x);
        self.total
            .elements()
            .filter(|&y| self.closure(y) == c)
            .all(|y| self.total.leq(y, x))
    }

    pub fn clear_elements(&self) -> Vec<usize> {
        self.total
            .elements()
            .filter(|&x| self.is_clear_element(x))
            .collect()
    }
}

/// Checks both parts are sub-lattices and that together they generate the
/// total.
pub fn validate_biframe(b: &Biframe) -> Result<()> {
    let n = b.total.size();
    if b.part1.len() != n || b.part2.len() != n {
        return Err(Error::NotABiframe(format!(
            "part bit-sets must have length {n}"
        )));
    }
    for (name, part) in [("part1", &b.part1), ("part2", &b.part2)] {
        if let Some(v) = b.total.sublattice_violation(part) {
            return Err(Error::NotABiframe(format!("{name}: {v}")));
        }
    }
    let generated = b.total.generated_sublattice(b.part1.ones().chain(b.part2.ones()));
    if let Some(x) = (0..n).find(|&x| !generated.contains(x)) {
        return Err(Error::NotABiframe(format!(
            "parts do not generate the total: {x} missing"
        )));
    }
    Ok(())
}

/// `(C L, ∇L, ΔL)`.
pub fn congruence_biframe(a: &Assembly) -> Biframe {
    Biframe {
        total: a.frame().clone(),
        part1: a.nabla_part().clone(),
        part2: a.delta_part().clone(),
    }
}

/// A frame homomorphism of totals that maps each part into the same part.
#[derive(Clone, Debug)]
pub struct BiframeHom {
    source: Biframe,
    target: Biframe,
    hom: FrameHom,
}

impl BiframeHom {
    pub fn new(source: &Biframe, target: &Biframe, hom: FrameHom) -> Result<Self> {
        if !same_frame(hom.source(), &source.total) || !same_frame(hom.target(), &target.total) {
            return Err(Error::HomMismatch);
        }
        if !respects_parts(hom.map(), source, target) {
            return Err(Error::HomMismatch);
        }
        Ok(BiframeHom {
            source: source.clone(),
            target: target.clone(),
            hom,
        })
    }

    pub fn identity(b: &Biframe) -> Self {
        BiframeHom {
            source: b.clone(),
            target: b.clone(),
            hom: FrameHom::identity(b.total.clone()),
        }
    }

    pub fn source(&self) -> &Biframe {
        &self.source
    }

    pub fn target(&self) -> &Biframe {
        &self.target
    }

    pub fn hom(&self) -> &FrameHom {
        &self.hom
    }

    /// Monic: the total map is dense.
    pub fn is_mono(&self) -> bool {
        self.hom.is_dense()
    }

    /// The restriction to first parts is injective; equivalent to being
    /// monic between strictly zero-dimensional biframes.
    pub fn is_injective_on_part1(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.target.total.size());
        self.source.part1.ones().all(|x| {
            let y = self.hom.apply(x);
            let fresh = !seen.contains(y);
            seen.insert(y);
            fresh
        })
    }

    /// Extremal epi: surjective with a closed kernel.
    pub fn is_extremal_epi(&self) -> bool {
        if !self.hom.is_surjective() {
            return false;
        }
        let k = self.hom.kernel();
        k == k.closure()
    }
}

fn respects_parts(map: &[usize], source: &Biframe, target: &Biframe) -> bool {
    source.part1.ones().all(|x| target.part1.contains(map[x]))
        && source.part2.ones().all(|x| target.part2.contains(map[x]))
}

pub fn hom_is_mono(f: &BiframeHom) -> bool {
    f.is_mono()
}

pub fn hom_is_extremal_epi(f: &BiframeHom) -> bool {
    f.is_extremal_epi()
}

/// The congruential coreflection `χ : C L1 → B`.
#[derive(Clone, Debug)]
pub struct Coreflection {
    pub assembly: Assembly,
    /// The congruence biframe of `L1`.
    pub source: Biframe,
    pub chi: BiframeHom,
    /// Embedding of `L1` into the total of `B`.
    pub embedding: Vec<usize>,
}

impl Coreflection {
    /// `χ_*`, the right adjoint of `χ`, as assembly indices.
    pub fn right_adjoint(&self) -> Vec<usize> {
        self.chi.hom.right_adjoint()
    }

    /// `χ_*(x)` as a congruence on `L1`.
    pub fn lower(&self, x: usize) -> &Congruence {
        self.assembly.congruence(self.chi.hom.right_adjoint()[x])
    }
}

/// Builds `χ` on generators: `∇_b ∧ Δ_a ↦ b ∧ ¬a`, extended by joins.
pub fn coreflection(b: &Biframe, budget: u64) -> Result<Coreflection> {
    b.require_str0d()?;
    let (l1, embedding) = b.part1_frame();
    let assembly = assemble(&l1, budget)?;
    let t = &b.total;
    let neg = |x: usize| t.complement(x).expect("strictly zero-dimensional");
    let map = assembly
        .congruences()
        .iter()
        .map(|c| {
            t.join_all(
                l1.elements()
                    .filter(|&x| c.nucleus(x) != x)
                    .map(|x| t.meet(embedding[c.nucleus(x)], neg(embedding[x]))),
            )
        })
        .collect();
    let hom = FrameHom::new(assembly.frame().clone(), t.clone(), map)?;
    let source = congruence_biframe(&assembly);
    let chi = BiframeHom::new(&source, b, hom)?;
    Ok(Coreflection {
        assembly,
        source,
        chi,
        embedding,
    })
}

/// The result of testing congruentiality along two independent routes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Congruentiality {
    /// `χ` is injective.
    pub chi_injective: bool,
    /// Every element of `L1` is the closure of some clear element.
    pub no_missing_clear: bool,
}

impl Congruentiality {
    pub fn agree(&self) -> bool {
        self.chi_injective == self.no_missing_clear
    }
}

pub fn congruentiality(b: &Biframe, budget: u64) -> Result<Congruentiality> {
    let c = coreflection(b, budget)?;
    let clear = b.clear_elements();
    let no_missing_clear = b
        .part1
        .ones()
        .all(|p| clear.iter().any(|&x| b.closure(x) == p));
    Ok(Congruentiality {
        chi_injective: c.chi.hom.is_injective(),
        no_missing_clear,
    })
}

/// Is `χ : C L1 → B` an isomorphism? Errors if the two routes disagree.
pub fn is_congruential(b: &Biframe, budget: u64) -> Result<bool> {
    let r = congruentiality(b, budget)?;
    if !r.agree() {
        return Err(Error::Precondition(format!(
            "congruentiality routes disagree: {r:?}"
        )));
    }
    Ok(r.chi_injective)
}

/// The quotient biframes of `C L` by its dense congruences. For finite `L`
/// this is exactly one biframe, `C L` itself.
pub fn str0d_biframes_over(base: &Arc<Frame>, budget: u64) -> Result<Vec<Biframe>> {
    let a = assemble(base, budget)?;
    let cb = congruence_biframe(&a);
    let outer = assemble(a.frame(), budget)?;
    let out: Vec<Biframe> = outer
        .congruences()
        .iter()
        .filter(|d| d.is_dense())
        .map(|d| quotient_biframe(&cb, d))
        .collect();
    debug_assert_eq!(out.len(), 1);
    Ok(out)
}

/// `B / C` with both parts mapped forward along the quotient map.
pub fn quotient_biframe(b: &Biframe, c: &Congruence) -> Biframe {
    let q = c.quotient();
    let n = q.frame.size();
    let image = |part: &FixedBitSet| bits(n, part.ones().map(|x| q.map.apply(x)));
    Biframe {
        part1: image(&b.part1),
        part2: image(&b.part2),
        total: q.frame,
    }
}

/// `B / ∇_a` with both parts mapped forward.
pub fn closed_quotient(b: &Biframe, a: usize) -> Result<Biframe> {
    let n = b.total.size();
    if a >= n {
        return Err(Error::IndexOutOfRange { index: a, size: n });
    }
    Ok(quotient_biframe(b, &Congruence::nabla(&b.total, a)))
}

/// The image of `C ι : C L → C M` for an injective `ι : L → M`, as a
/// biframe with the images of `∇L` and `ΔL` as parts.
pub fn induced_sub_biframe(iota: &FrameHom, budget: u64) -> Result<Biframe> {
    if let Some((x, y)) = iota.injectivity_witness() {
        return Err(Error::NotInjective(x, y));
    }
    let a = assemble(iota.source(), budget)?;
    let b = assemble(iota.target(), budget)?;
    let ci = functor_on_hom(iota, &a, &b)?;
    let mut image: Vec<usize> = ci.map().to_vec();
    image.sort_unstable();
    image.dedup();
    let mut position = vec![usize::MAX; b.size()];
    for (i, &y) in image.iter().enumerate() {
        position[y] = i;
    }
    let total = Arc::new(b.frame().subposet_frame(&image));
    let n = total.size();
    let part = |src: &FixedBitSet| bits(n, src.ones().map(|x| position[ci.apply(x)]));
    Biframe::new(total, part(a.nabla_part()), part(a.delta_part()))
}

/// An isomorphism of totals carrying each part onto the same part.
pub fn find_biframe_isomorphism(a: &Biframe, b: &Biframe) -> Option<Vec<usize>> {
    if a.part1.count_ones(..) != b.part1.count_ones(..)
        || a.part2.count_ones(..) != b.part2.count_ones(..)
    {
        return None;
    }
    let mut found = None;
    iso::visit_frame_isomorphisms(&a.total, &b.total, |m| {
        let ok = a.part1.ones().all(|x| b.part1.contains(m[x]))
            && a.part2.ones().all(|x| b.part2.contains(m[x]));
        if ok {
            found = Some(m.to_vec());
        }
        ok
    });
    found
}

pub fn is_biframe_isomorphic(a: &Biframe, b: &Biframe) -> bool {
    find_biframe_isomorphism(a, b).is_some()
}

/// Biframe homomorphisms `source → target`, as maps of totals.
pub fn enumerate_biframe_homs(source: &Biframe, target: &Biframe) -> Vec<Vec<usize>> {
    enumerate_homs_filtered(&source.total, &target.total, |x, y| {
        (!source.part1.contains(x) || target.part1.contains(y))
            && (!source.part2.contains(x) || target.part2.contains(y))
    })
}

/// Counts on both sides of `Hom(L, P B) ≅ Hom(C L, B)`, and whether
/// precomposition with `∇` is a bijection between them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub frame_homs: usize,
    pub biframe_homs: usize,
    pub bijective: bool,
}

pub fn adjunction_check(base: &Arc<Frame>, b: &Biframe, budget: u64) -> Result<AdjunctionReport> {
    b.require_str0d()?;
    let a = assemble(base, budget)?;
    let cb = congruence_biframe(&a);
    let (l1, embedding) = b.part1_frame();
    let mut position = vec![usize::MAX; b.total.size()];
    for (i, &y) in embedding.iter().enumerate() {
        position[y] = i;
    }
    let mut frame_homs = enumerate_homs(base, &l1);
    frame_homs.sort();
    let biframe_homs = enumerate_biframe_homs(&cb, b);
    let mut restricted: Vec<Vec<usize>> = biframe_homs
        .iter()
        .map(|g| base.elements().map(|x| position[g[a.nabla(x)]]).collect())
        .collect();
    restricted.sort();
    let injective = restricted.windows(2).all(|w| w[0] != w[1]);
    Ok(AdjunctionReport {
        frame_homs: frame_homs.len(),
        biframe_homs: biframe_homs.len(),
        bijective: injective && restricted == frame_homs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> Arc<Frame> {
        Arc::new(Frame::chain(3))
    }

    fn square() -> Arc<Frame> {
        Arc::new(Frame::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
    }

    fn cb(f: &Arc<Frame>) -> (Assembly, Biframe) {
        let a = assemble(f, 1024).unwrap();
        let b = congruence_biframe(&a);
        (a, b)
    }

    #[test]
    fn congruence_biframe_of_three_chain() {
        let (a, b) = cb(&three());
        assert_eq!(b.total().size(), 4);
        assert_eq!(
            b.part1_elements(),
            {
                let mut v = vec![a.nabla(0), a.nabla(1), a.nabla(2)];
                v.sort();
                v
            }
        );
        assert!(b.part2().contains(a.delta(1)));
        assert!(b.is_strictly_zero_dimensional());
    }

    #[test]
    fn generation_failure() {
        let sq = square();
        let part = bits(4, [0, 1, 3]);
        let err = Biframe::new(sq, part.clone(), part).unwrap_err();
        assert!(matches!(err, Error::NotABiframe(m) if m.contains("2 missing")));
    }

    #[test]
    fn trivial_biframe() {
        let one = Arc::new(Frame::chain(1));
        let b = Biframe::new(one.clone(), bits(1, [0]), bits(1, [0])).unwrap();
        assert!(b.is_strictly_zero_dimensional());
        assert!(is_congruential(&b, 64).unwrap());
        assert_eq!(str0d_biframes_over(&one, 64).unwrap().len(), 1);
    }

    #[test]
    fn coreflection_of_congruence_biframe_is_iso() {
        let (_, b) = cb(&three());
        let c = coreflection(&b, 64).unwrap();
        assert!(c.chi.hom().is_injective() && c.chi.hom().is_surjective());
        assert!(c.chi.is_mono() && c.chi.is_extremal_epi());
        // χ_* ∘ χ is a nucleus on the assembly
        let up = c.right_adjoint();
        let nu: Vec<usize> = c.chi.hom().map().iter().map(|&y| up[y]).collect();
        crate::congruence::check_nucleus(c.assembly.frame(), &nu).unwrap();
    }

    #[test]
    fn boolean_total() {
        let sq = square();
        let all = bits(4, 0..4);
        let b = Biframe::new(sq, all.clone(), all).unwrap();
        assert!(b.is_strictly_zero_dimensional());
        let c = coreflection(&b, 64).unwrap();
        assert_eq!(c.assembly.size(), 4);
        assert!(c.chi.hom().is_injective());
    }

    #[test]
    fn clear_elements_of_three_chain() {
        let (a, b) = cb(&three());
        let mut expected = vec![a.delta(1), a.nabla(1), b.total().top()];
        expected.sort();
        assert_eq!(b.clear_elements(), expected);
        assert!(!b.is_clear_element(b.total().bottom()));
        let r = congruentiality(&b, 64).unwrap();
        assert!(r.chi_injective && r.no_missing_clear);
    }

    #[test]
    fn str0d_over_chains() {
        let got = str0d_biframes_over(&three(), 64).unwrap();
        assert_eq!(got.len(), 1);
        assert!(is_biframe_isomorphic(&got[0], &cb(&three()).1));
        let c4 = Arc::new(Frame::chain(4));
        let got = str0d_biframes_over(&c4, 64).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].total().size(), 8);
    }

    #[test]
    fn closed_quotients() {
        let (a, b) = cb(&three());
        assert_eq!(closed_quotient(&b, b.total().bottom()).unwrap(), b);
        let q = closed_quotient(&b, a.nabla(1)).unwrap();
        assert_eq!(q.total().size(), 2);
        assert!(q.is_strictly_zero_dimensional());
        let (l1, _) = q.part1_frame();
        assert_eq!(l1.size(), 2);
    }

    #[test]
    fn closed_quotient_hom_is_extremal_epi_not_mono() {
        let (a, b) = cb(&three());
        let q = Congruence::nabla(b.total(), a.nabla(1)).quotient();
        let target = closed_quotient(&b, a.nabla(1)).unwrap();
        let target = Biframe {
            total: q.frame.clone(),
            ..target
        };
        let h = BiframeHom::new(&b, &target, q.map.clone()).unwrap();
        assert!(h.is_extremal_epi());
        assert!(!h.is_mono());
        assert!(!h.is_injective_on_part1());
        let id = BiframeHom::identity(&b);
        assert!(id.is_mono() && id.is_extremal_epi());
    }

    #[test]
    fn induced_sub_biframes() {
        let f = three();
        let id = FrameHom::identity(f.clone());
        let b = induced_sub_biframe(&id, 64).unwrap();
        assert!(is_biframe_isomorphic(&b, &cb(&f).1));
        let iota = FrameHom::new(f.clone(), square(), vec![0, 1, 3]).unwrap();
        let b = induced_sub_biframe(&iota, 64).unwrap();
        assert_eq!(b.total().size(), 4);
        assert!(b.is_strictly_zero_dimensional());
        let collapse = FrameHom::new(f, Arc::new(Frame::chain(2)), vec![0, 1, 1]).unwrap();
        assert_eq!(
            induced_sub_biframe(&collapse, 64).unwrap_err(),
            Error::NotInjective(1, 2)
        );
    }

    #[test]
    fn adjunction_on_small_frames() {
        let (_, b) = cb(&three());
        for base in [three(), square(), Arc::new(Frame::chain(2))] {
            let r = adjunction_check(&base, &b, 64).unwrap();
            assert!(r.bijective, "{r:?}");
            assert_eq!(r.frame_homs, r.biframe_homs);
        }
    }
}
