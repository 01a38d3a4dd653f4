//! The congruence frame `C L` as an explicit finite frame.
//!
//! Congruences with fewer than κ generators and arbitrary congruences
//! coincide on finite frames, so one `Assembly` serves for both.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::order::{iso, same_frame, Frame, FrameHom, Poset};

#[derive(Clone, Debug)]
pub struct Assembly {
    base: Arc<Frame>,
    congruences: Vec<Congruence>,
    frame: Arc<Frame>,
    index: HashMap<Vec<usize>, usize>,
    nabla_map: Vec<usize>,
    delta_map: Vec<usize>,
    nabla_part: FixedBitSet,
    delta_part: FixedBitSet,
}

/// Builds `C L`, refusing when `2^|J(L)|` exceeds `budget`.
///
/// Every congruence is a join of principal congruences `∇_b ∧ Δ_a`, and a
/// principal congruence is the join of those of the covering steps inside
/// `[a, b]`, so the search closes the covering-pair generators under binary
/// join.
pub fn assemble(base: &Arc<Frame>, budget: u64) -> Result<Assembly> {
    let predicted = base.predicted_congruence_count();
    if predicted > budget {
        return Err(Error::SizeBudgetExceeded { predicted, budget });
    }

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut generators = Vec::new();
    for &(a, b) in base.poset().covers() {
        let g = Congruence::principal(base, a, b);
        if seen.insert(g.nu().to_vec()) {
            generators.push(g);
        }
    }

    let zero = Congruence::diagonal(base);
    let mut found: HashSet<Vec<usize>> = HashSet::from([zero.nu().to_vec()]);
    let mut congruences = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(c) = queue.pop_front() {
        for g in &generators {
            let next = c.join(g)?;
            if found.insert(next.nu().to_vec()) {
                if found.len() as u64 > budget {
                    return Err(Error::SizeBudgetExceeded {
                        predicted: found.len() as u64,
                        budget,
                    });
                }
                congruences.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    congruences.sort();
    Ok(Assembly::from_congruences(base, congruences))
}

impl Assembly {
    fn from_congruences(base: &Arc<Frame>, congruences: Vec<Congruence>) -> Self {
        let index: HashMap<Vec<usize>, usize> = congruences
            .iter()
            .enumerate()
            .map(|(i, c)| (c.nu().to_vec(), i))
            .collect();
        let order = Poset::from_relation(congruences.len(), |i, j| {
            congruences[i].leq(&congruences[j])
        })
        .expect("inclusion of relations is a partial order");
        let frame = Arc::new(Frame::from_poset(order).expect("congruence lattices are distributive"));
        let nabla_map: Vec<usize> = base
            .elements()
            .map(|a| index[Congruence::nabla(base, a).nu()])
            .collect();
        let delta_map: Vec<usize> = base
            .elements()
            .map(|a| index[Congruence::delta(base, a).nu()])
            .collect();
        let nabla_part = frame.generated_sublattice(nabla_map.iter().copied());
        let delta_part = frame.generated_sublattice(delta_map.iter().copied());
        Assembly {
            base: base.clone(),
            congruences,
            frame,
            index,
            nabla_map,
            delta_map,
            nabla_part,
            delta_part,
        }
    }

    pub fn base(&self) -> &Arc<Frame> {
        &self.base
    }

    /// The congruence frame; element `i` is `congruences()[i]`.
    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn size(&self) -> usize {
        self.congruences.len()
    }

    /// All congruences, sorted by nucleus array.
    pub fn congruences(&self) -> &[Congruence] {
        &self.congruences
    }

    pub fn congruence(&self, i: usize) -> &Congruence {
        &self.congruences[i]
    }

    pub fn index_of(&self, c: &Congruence) -> Option<usize> {
        if !same_frame(c.frame(), &self.base) {
            return None;
        }
        self.index.get(c.nu()).copied()
    }

    /// Element of the assembly for `∇_a`.
    pub fn nabla(&self, a: usize) -> usize {
        self.nabla_map[a]
    }

    /// Element of the assembly for `Δ_a`.
    pub fn delta(&self, a: usize) -> usize {
        self.delta_map[a]
    }

    pub fn nabla_map(&self) -> &[usize] {
        &self.nabla_map
    }

    pub fn delta_map(&self) -> &[usize] {
        &self.delta_map
    }

    /// `∇L`: the closed congruences.
    pub fn nabla_part(&self) -> &FixedBitSet {
        &self.nabla_part
    }

    /// `ΔL`: the subframe generated by the open congruences.
    pub fn delta_part(&self) -> &FixedBitSet {
        &self.delta_part
    }

    /// `∇_• : L → C L` as a frame homomorphism.
    pub fn nabla_hom(&self) -> FrameHom {
        FrameHom::new_unchecked(self.base.clone(), self.frame.clone(), self.nabla_map.clone())
    }

    /// Is `∇_•` onto, i.e. is `L → C L` an isomorphism?
    pub fn nabla_is_isomorphism(&self) -> bool {
        self.size() == self.base.size()
    }

    /// `C = C**` in the assembly.
    pub fn is_smooth(&self, c: &Congruence) -> Result<bool> {
        let i = self.index_of(c).ok_or(Error::FrameMismatch)?;
        let f = &self.frame;
        Ok(f.pseudocomplement(f.pseudocomplement(i)) == i)
    }

    /// Fixed points of the double pseudocomplement.
    pub fn smooth_congruences(&self) -> Vec<usize> {
        let f = &self.frame;
        f.elements()
            .filter(|&i| f.pseudocomplement(f.pseudocomplement(i)) == i)
            .collect()
    }

    /// Expresses `C` as a join of generators: `C = ⋁_x ∇_{ν(x)} ∧ Δ_x`.
    pub(crate) fn generator_pairs(c: &Congruence) -> impl Iterator<Item = (usize, usize)> + '_ {
        c.frame()
            .elements()
            .filter(move |&x| c.nucleus(x) != x)
            .map(move |x| (x, c.nucleus(x)))
    }
}

/// `C f`, defined on generators: `∇_b ∧ Δ_a ↦ ∇_{f(b)} ∧ Δ_{f(a)}`.
pub fn functor_on_hom(f: &FrameHom, source: &Assembly, target: &Assembly) -> Result<FrameHom> {
    if !same_frame(f.source(), &source.base) || !same_frame(f.target(), &target.base) {
        return Err(Error::HomMismatch);
    }
    let tf = &target.frame;
    let map = source
        .congruences
        .iter()
        .map(|c| {
            tf.join_all(Assembly::generator_pairs(c).map(|(a, b)| {
                tf.meet(target.nabla(f.apply(b)), target.delta(f.apply(a)))
            }))
        })
        .collect();
    FrameHom::new(source.frame.clone(), target.frame.clone(), map)
}

/// Checks `cl(ker φ) = ∇_{ker(φ ∘ ∇_•)}` for a homomorphism out of an
/// assembled congruence frame.
pub fn kernel_closure_check(phi: &FrameHom, assembly: &Assembly) -> Result<bool> {
    if !same_frame(phi.source(), &assembly.frame) {
        return Err(Error::HomMismatch);
    }
    let lhs = phi.kernel().closure();
    let along_nabla = Congruence::from_key(&assembly.base, |x| phi.apply(assembly.nabla(x)));
    let k = assembly
        .index_of(&along_nabla)
        .expect("every congruence is in the assembly");
    let rhs = Congruence::nabla(&assembly.frame, k);
    Ok(lhs == rhs)
}

/// The comparison map `C L / ∇_C → C (L/C)` and what was verified about it.
#[derive(Clone, Debug)]
pub struct QuotientIso {
    /// From the quotient of `C L` by `∇_C` to the assembly of `L/C`.
    pub map: Vec<usize>,
    pub quotient_assembly: Assembly,
    pub kernel_is_closed_congruence: bool,
    pub is_isomorphism: bool,
    pub preserves_parts: bool,
}

impl QuotientIso {
    pub fn holds(&self) -> bool {
        self.kernel_is_closed_congruence && self.is_isomorphism && self.preserves_parts
    }
}

/// Builds the map `C L / ∇_C → C (L/C)` induced by `∇_a ↦ ∇_{[a]}`,
/// `Δ_a ↦ Δ_{[a]}` and checks it is an isomorphism matching the two parts.
pub fn quotient_iso(assembly: &Assembly, c: &Congruence, budget: u64) -> Result<QuotientIso> {
    let ci = assembly.index_of(c).ok_or(Error::FrameMismatch)?;
    let q = c.quotient();
    let target = assemble(&q.frame, budget)?;
    let cq = functor_on_hom(&q.map, assembly, &target)?;
    let closed = Congruence::nabla(&assembly.frame, ci);
    let kernel_is_closed_congruence = cq.kernel() == closed;
    let outer = closed.quotient();
    let map: Vec<usize> = outer
        .representatives
        .iter()
        .map(|&r| cq.apply(r))
        .collect();
    let is_isomorphism = iso::is_order_isomorphism(&outer.frame, &target.frame, &map);
    let image_of = |part: &FixedBitSet| -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(target.size());
        for x in part.ones() {
            out.insert(cq.apply(x));
        }
        out
    };
    let preserves_parts = image_of(&assembly.nabla_part) == target.nabla_part
        && image_of(&assembly.delta_part) == target.delta_part;
    Ok(QuotientIso {
        map,
        quotient_assembly: target,
        kernel_is_closed_congruence,
        is_isomorphism,
        preserves_parts,
    })
}

/// Iterated congruence frames `C L, C² L, …`.
#[derive(Clone, Debug)]
pub struct Tower {
    pub base: Arc<Frame>,
    pub levels: Vec<Assembly>,
    /// First `k` such that `∇ : C^k L → C^{k+1} L` is an isomorphism
    /// (`C^0 L = L`).
    pub stable_at: Option<usize>,
}

impl Tower {
    /// `|L|` followed by the size of each computed level.
    pub fn sizes(&self) -> Vec<usize> {
        std::iter::once(self.base.size())
            .chain(self.levels.iter().map(Assembly::size))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct TowerError {
    pub error: Error,
    pub partial: Tower,
}

impl std::fmt::Display for TowerError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (after {} levels)", self.error, self.partial.levels.len())
    }
}

impl std::error::Error for TowerError {}

/// Assembles up to `steps` times, stopping once `∇` is an isomorphism.
pub fn tower(base: &Arc<Frame>, steps: usize, budget: u64) -> Result<Tower, TowerError> {
    let mut out = Tower {
        base: base.clone(),
        levels: Vec::new(),
        stable_at: None,
    };
    let mut current = base.clone();
    for k in 0..steps {
        match assemble(&current, budget) {
            Ok(a) => {
                let stable = a.nabla_is_isomorphism();
                current = a.frame.clone();
                out.levels.push(a);
                if stable {
                    out.stable_at = Some(k);
                    break;
                }
            }
            Err(error) => return Err(TowerError { error, partial: out }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::enumerate_homs;

    fn three() -> Arc<Frame> {
        Arc::new(Frame::chain(3))
    }

    fn square() -> Arc<Frame> {
        Arc::new(Frame::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
    }

    #[test]
    fn three_chain_assembly() {
        let f = three();
        let a = assemble(&f, 1024).unwrap();
        assert_eq!(a.size(), 4);
        assert!(a.frame().is_boolean());
        let (n, d) = (a.nabla(1), a.delta(1));
        assert_ne!(n, d);
        assert_eq!(a.frame().meet(n, d), a.frame().bottom());
        assert_eq!(a.frame().join(n, d), a.frame().top());
        assert_eq!(a.nabla_part().count_ones(..), 3);
        assert_eq!(a.delta_part().count_ones(..), 3);
    }

    #[test]
    fn boolean_base_is_fixed() {
        let a = assemble(&square(), 1024).unwrap();
        assert_eq!(a.size(), 4);
        assert!(a.nabla_is_isomorphism());
    }

    #[test]
    fn trivial_frame() {
        let one = Arc::new(Frame::chain(1));
        let a = assemble(&one, 1024).unwrap();
        assert_eq!(a.size(), 1);
    }

    #[test]
    fn budget_refusal() {
        let c8 = Arc::new(Frame::chain(8));
        assert_eq!(
            assemble(&c8, 64).unwrap_err(),
            Error::SizeBudgetExceeded {
                predicted: 128,
                budget: 64
            }
        );
    }

    #[test]
    fn functor_on_quotient_map() {
        let f = three();
        let two = Arc::new(Frame::chain(2));
        let q = FrameHom::new(f.clone(), two.clone(), vec![0, 1, 1]).unwrap();
        let (a, b) = (assemble(&f, 64).unwrap(), assemble(&two, 64).unwrap());
        let cq = functor_on_hom(&q, &a, &b).unwrap();
        assert_eq!(cq.apply(a.nabla(1)), b.frame().top());
        assert_eq!(cq.apply(a.delta(1)), b.frame().bottom());
        let id = FrameHom::identity(f.clone());
        let cid = functor_on_hom(&id, &a, &a).unwrap();
        assert_eq!(cid.map(), FrameHom::identity(a.frame().clone()).map());
        assert_eq!(functor_on_hom(&q, &b, &a).unwrap_err(), Error::HomMismatch);
    }

    #[test]
    fn kernel_closure_examples() {
        let f = three();
        let a = assemble(&f, 64).unwrap();
        let id = FrameHom::identity(a.frame().clone());
        assert!(kernel_closure_check(&id, &a).unwrap());
        let q = Congruence::nabla(a.frame(), a.nabla(1)).quotient();
        assert!(kernel_closure_check(&q.map, &a).unwrap());
    }

    #[test]
    fn quotient_iso_examples() {
        let f = three();
        let a = assemble(&f, 64).unwrap();
        let zero = Congruence::diagonal(&f);
        assert!(quotient_iso(&a, &zero, 64).unwrap().holds());
        let iso = quotient_iso(&a, &Congruence::nabla(&f, 1), 64).unwrap();
        assert!(iso.holds());
        assert_eq!(iso.map.len(), 2);
    }

    #[test]
    fn towers() {
        let t = tower(&square(), 3, 1024).unwrap();
        assert_eq!(t.stable_at, Some(0));
        let t = tower(&three(), 3, 1024).unwrap();
        assert_eq!(t.sizes(), vec![3, 4, 4]);
        assert_eq!(t.stable_at, Some(1));
        let t = tower(&Arc::new(Frame::chain(4)), 2, 1024).unwrap();
        assert_eq!(t.sizes(), vec![4, 8, 8]);
        let err = tower(&Arc::new(Frame::chain(8)), 2, 64).unwrap_err();
        assert!(err.partial.levels.is_empty());
    }

    #[test]
    fn universal_property_on_three_chain() {
        // f: 3 → 2² with image in the complemented part extends uniquely.
        let f = three();
        let sq = square();
        let a = assemble(&f, 64).unwrap();
        let homs = enumerate_homs(a.frame(), &sq);
        for base_hom in enumerate_homs(&f, &sq) {
            let ext = homs
                .iter()
                .filter(|g| (0..3).all(|x| g[a.nabla(x)] == base_hom[x]))
                .count();
            let complemented = base_hom.iter().all(|&y| sq.complement(y).is_some());
            assert_eq!(ext, usize::from(complemented));
        }
    }
}
