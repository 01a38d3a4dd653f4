//! Finite topological spaces and their relation to finite frames: the
//! spectrum, sobriety, `T_D`, subspace congruences and the Skula biframe.
//!
//! Point sets are `u64` bit masks, so spaces have at most 64 points.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::assembly::{functor_on_hom, Assembly};
use crate::biframe::Biframe;
use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::order::{iso, same_frame, Frame, FrameHom, Poset};

pub const MAX_POINTS: usize = 64;

fn full_mask(points: usize) -> u64 {
    if points == 64 {
        u64::MAX
    } else {
        (1u64 << points) - 1
    }
}

/// A finite space given by its full list of open sets, kept sorted by mask
/// value (a linear extension of inclusion).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    points: usize,
    opens: Vec<u64>,
}

/// Closes `sets` under binary union and intersection, together with `∅` and
/// the whole space.
fn lattice_closure(points: usize, sets: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let full = full_mask(points);
    let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::new();
    let mut members: Vec<u64> = Vec::new();
    let mut queue: Vec<u64> = vec![0, full];
    queue.extend(sets);
    while let Some(s) = queue.pop() {
        if !seen.insert(s) {
            continue;
        }
        for &t in &members {
            queue.push(s | t);
            queue.push(s & t);
        }
        members.push(s);
    }
    members.sort_unstable();
    members
}

impl FiniteSpace {
    /// Validates that `opens` contains `∅` and the whole set and is closed
    /// under binary union and intersection. Duplicates are dropped.
    pub fn new(points: usize, mut opens: Vec<u64>) -> Result<Self> {
        if points > MAX_POINTS {
            return Err(Error::InvalidSpace(format!(
                "{points} points exceeds the limit of {MAX_POINTS}"
            )));
        }
        let full = full_mask(points);
        if let Some(&u) = opens.iter().find(|&&u| u & !full != 0) {
            return Err(Error::InvalidSpace(format!(
                "open set {u:#x} mentions a point outside 0..{points}"
            )));
        }
        opens.sort_unstable();
        opens.dedup();
        if opens.first() != Some(&0) {
            return Err(Error::InvalidSpace("the empty set is not open".into()));
        }
        if opens.last() != Some(&full) {
            return Err(Error::InvalidSpace("the whole space is not open".into()));
        }
        for &u in &opens {
            for &v in &opens {
                for (what, w) in [("union", u | v), ("intersection", u & v)] {
                    if opens.binary_search(&w).is_err() {
                        return Err(Error::InvalidSpace(format!(
                            "{what} of {} and {} is not open",
                            fmt_set(u),
                            fmt_set(v)
                        )));
                    }
                }
            }
        }
        Ok(FiniteSpace { points, opens })
    }

    /// The topology generated by a subbasis.
    pub fn from_subbasis(points: usize, sets: &[u64]) -> Result<Self> {
        if points > MAX_POINTS {
            return Err(Error::InvalidSpace(format!(
                "{points} points exceeds the limit of {MAX_POINTS}"
            )));
        }
        FiniteSpace::new(points, lattice_closure(points, sets.iter().copied()))
    }

    pub(crate) fn from_sorted_unchecked(points: usize, opens: Vec<u64>) -> Self {
        debug_assert!(FiniteSpace::new(points, opens.clone()).is_ok());
        FiniteSpace { points, opens }
    }

    pub fn discrete(points: usize) -> Self {
        let opens = (0..=full_mask(points)).collect();
        FiniteSpace { points, opens }
    }

    pub fn indiscrete(points: usize) -> Self {
        let full = full_mask(points);
        let opens = if full == 0 { vec![0] } else { vec![0, full] };
        FiniteSpace { points, opens }
    }

    /// Two points, `{0}` open.
    pub fn sierpinski() -> Self {
        FiniteSpace {
            points: 2,
            opens: vec![0, 1, 3],
        }
    }

    /// The finite space of a preorder: opens are the up-sets.
    pub fn from_preorder(points: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let ups: Vec<u64> = (0..points)
            .map(|x| (0..points).filter(|&y| leq(x, y)).fold(0, |m, y| m | 1 << y))
            .collect();
        FiniteSpace::from_subbasis(points, &ups)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    pub fn full(&self) -> u64 {
        full_mask(self.points)
    }

    pub fn is_open(&self, set: u64) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    pub fn open_index(&self, set: u64) -> Option<usize> {
        self.opens.binary_search(&set).ok()
    }

    /// The smallest open set containing `x`.
    pub fn neighbourhood(&self, x: usize) -> u64 {
        self.opens
            .iter()
            .filter(|&&u| u >> x & 1 == 1)
            .fold(self.full(), |acc, &u| acc & u)
    }

    /// `cl{x}`: the complement of the largest open set missing `x`.
    pub fn point_closure(&self, x: usize) -> u64 {
        let outside = self
            .opens
            .iter()
            .filter(|&&u| u >> x & 1 == 0)
            .fold(0, |acc, &u| acc | u);
        self.full() & !outside
    }

    /// Specialisation order: every open containing `x` contains `y`.
    pub fn specialization_leq(&self, x: usize, y: usize) -> bool {
        self.neighbourhood(x) >> y & 1 == 1
    }

    pub fn is_t0(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        (0..self.points).all(|x| seen.insert(self.neighbourhood(x)))
    }

    /// Every point has an open neighbourhood `U` with `U \ {x}` open.
    pub fn is_td(&self) -> bool {
        (0..self.points).all(|x| self.is_open(self.neighbourhood(x) & !(1 << x)))
    }

    /// The Kolmogorov quotient, with the class index of each point.
    pub fn t0_reflection(&self) -> (FiniteSpace, Vec<usize>) {
        let mut class_of: HashMap<u64, usize> = HashMap::new();
        let map: Vec<usize> = (0..self.points)
            .map(|x| {
                let next = class_of.len();
                *class_of.entry(self.neighbourhood(x)).or_insert(next)
            })
            .collect();
        let k = class_of.len();
        let opens = self
            .opens
            .iter()
            .map(|&u| {
                (0..self.points)
                    .filter(|&x| u >> x & 1 == 1)
                    .fold(0u64, |m, x| m | 1 << map[x])
            })
            .collect::<Vec<_>>();
        let mut opens = opens;
        opens.sort_unstable();
        opens.dedup();
        (FiniteSpace::from_sorted_unchecked(k, opens), map)
    }
}

/// Formats a point set as `{0,2,5}`.
pub fn fmt_set(mask: u64) -> String {
    let items: Vec<String> = (0..64)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// `Ω X`: element `i` is `X.opens()[i]`.
pub fn omega(space: &FiniteSpace) -> Frame {
    let o = &space.opens;
    let poset = Poset::from_relation(o.len(), |i, j| o[i] & !o[j] == 0)
        .expect("inclusion is a partial order");
    Frame::from_poset(poset).expect("open sets form a distributive lattice")
}

/// `Σ L` together with the unit `a ↦ U_a`.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub space: FiniteSpace,
    /// Point `i` is the prime `prime_of_point[i]`.
    pub prime_of_point: Vec<usize>,
    /// `unit[a]` is the index of `U_a` among the opens of `space`.
    pub unit: Vec<usize>,
}

impl SpectrumResult {
    /// Is `a ↦ U_a` a bijection onto the opens? (It is order-reflecting by
    /// construction only when injective.)
    pub fn unit_is_isomorphism(&self, frame: &Frame) -> bool {
        let mut hit = vec![false; self.space.opens.len()];
        for &i in &self.unit {
            if hit[i] {
                return false;
            }
            hit[i] = true;
        }
        hit.into_iter().all(|h| h)
            && frame.elements().all(|a| {
                frame.elements().all(|b| {
                    let (u, v) = (self.space.opens[self.unit[a]], self.space.opens[self.unit[b]]);
                    frame.leq(a, b) == (u & !v == 0)
                })
            })
    }
}

/// `U_a = {p prime | a ≰ p}` as a point mask.
fn spectrum_open(frame: &Frame, primes: &[usize], a: usize) -> u64 {
    primes
        .iter()
        .enumerate()
        .filter(|(_, &p)| !frame.leq(a, p))
        .fold(0, |m, (i, _)| m | 1 << i)
}

pub fn sigma(frame: &Frame) -> Result<SpectrumResult> {
    let primes = frame.primes();
    if primes.len() > MAX_POINTS {
        return Err(Error::InvalidSpace(format!(
            "spectrum has {} points, more than {MAX_POINTS}",
            primes.len()
        )));
    }
    let masks: Vec<u64> = frame
        .elements()
        .map(|a| spectrum_open(frame, &primes, a))
        .collect();
    let mut opens = masks.clone();
    opens.sort_unstable();
    opens.dedup();
    let space = FiniteSpace::new(primes.len(), opens)?;
    let unit = masks
        .iter()
        .map(|&m| space.open_index(m).expect("listed"))
        .collect();
    Ok(SpectrumResult {
        space,
        prime_of_point: primes,
        unit,
    })
}

/// `Σ Ω X` with the map `x ↦ cl{x}ᶜ`.
#[derive(Clone, Debug)]
pub struct Sobrification {
    pub space: FiniteSpace,
    pub point_map: Vec<usize>,
}

pub fn sobrification(space: &FiniteSpace) -> Result<Sobrification> {
    let frame = omega(space);
    let spectrum = sigma(&frame)?;
    let point_map = (0..space.points)
        .map(|x| {
            let p = space
                .open_index(space.full() & !space.point_closure(x))
                .expect("complement of a closure is open");
            spectrum.prime_of_point
                .iter()
                .position(|&q| q == p)
                .expect("complements of point closures are prime")
        })
        .collect();
    Ok(Sobrification {
        space: spectrum.space,
        point_map,
    })
}

/// Is `x ↦ cl{x}ᶜ` a bijection onto the spectrum?
pub fn is_sober(space: &FiniteSpace) -> Result<bool> {
    let s = sobrification(space)?;
    let mut hit = vec![false; s.space.points];
    for &p in &s.point_map {
        if hit[p] {
            return Ok(false);
        }
        hit[p] = true;
    }
    Ok(hit.into_iter().all(|h| h))
}

/// `Ω X` with the mask of each element, for working with subspaces.
#[derive(Clone, Debug)]
pub struct OpenFrame {
    pub space: FiniteSpace,
    pub frame: Arc<Frame>,
}

impl OpenFrame {
    pub fn new(space: &FiniteSpace) -> Self {
        OpenFrame {
            frame: Arc::new(omega(space)),
            space: space.clone(),
        }
    }

    /// `E_A = {(U, V) | U ∩ A = V ∩ A}`.
    pub fn subspace_congruence(&self, subset: u64) -> Result<Congruence> {
        if subset & !self.space.full() != 0 {
            return Err(Error::SpaceMismatch);
        }
        let o = &self.space.opens;
        Ok(Congruence::from_key(&self.frame, |i| o[i] & subset))
    }
}

/// Whether `X` is `T_D` agrees with `E_A ≤ E_B ⟹ B ⊆ A` for all subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TdReport {
    pub is_td: bool,
    pub separates: bool,
}

impl TdReport {
    pub fn holds(&self) -> bool {
        self.is_td == self.separates
    }
}

pub fn td_separation_check(space: &FiniteSpace) -> Result<TdReport> {
    if space.points > 8 {
        return Err(Error::Precondition(format!(
            "subset scan needs at most 8 points, got {}",
            space.points
        )));
    }
    let of = OpenFrame::new(space);
    let subsets = 1u64 << space.points;
    let e: Vec<Congruence> = (0..subsets)
        .map(|a| of.subspace_congruence(a))
        .collect::<Result<_>>()?;
    let separates = (0..subsets).all(|a| {
        (0..subsets).all(|b| !e[a as usize].leq(&e[b as usize]) || b & !a == 0)
    });
    Ok(TdReport {
        is_td: space.is_td(),
        separates,
    })
}

/// Subsets `A, B` with `E_{A∩B} ≠ E_A ∨ E_B`, if any.
pub fn intersection_join_counterexample(space: &FiniteSpace) -> Result<Option<(u64, u64)>> {
    let of = OpenFrame::new(space);
    let subsets = 1u64 << space.points.min(8);
    let e: Vec<Congruence> = (0..subsets)
        .map(|a| of.subspace_congruence(a))
        .collect::<Result<_>>()?;
    for a in 0..subsets {
        for b in a..subsets {
            if e[(a & b) as usize] != e[a as usize].join(&e[b as usize])? {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// The Skula topology: generated by the opens and their complements.
pub fn skula_space(space: &FiniteSpace) -> FiniteSpace {
    let full = space.full();
    let opens = lattice_closure(
        space.points,
        space.opens.iter().flat_map(|&u| [u, full & !u]),
    );
    FiniteSpace::from_sorted_unchecked(space.points, opens)
}

/// `(Ω Sk X, τ, υ)`, with `υ` generated by the closed sets.
///
/// A non-`T0` input is refused unless `reflect` is set, in which case its
/// Kolmogorov quotient is used.
pub fn skula_biframe(space: &FiniteSpace, reflect: bool) -> Result<Biframe> {
    let reflected;
    let space = if space.is_t0() {
        space
    } else if reflect {
        reflected = space.t0_reflection().0;
        &reflected
    } else {
        return Err(Error::NotT0);
    };
    let sk = skula_space(space);
    let total = Arc::new(omega(&sk));
    let n = sk.opens.len();
    let mask_bits = |sets: &[u64]| {
        let mut out = FixedBitSet::with_capacity(n);
        for &s in sets {
            out.insert(sk.open_index(s).expect("Skula-open"));
        }
        out
    };
    let full = space.full();
    let closed = lattice_closure(space.points, space.opens.iter().map(|&u| full & !u));
    let b = Biframe::new(total, mask_bits(&space.opens), mask_bits(&closed))?;
    debug_assert!(b.is_strictly_zero_dimensional());
    Ok(b)
}

/// The comparison `C L → Ω Sk Σ L` sending `C` to the primes `p` with
/// `C ≰ ∂_p`; `∇_a ↦ U_a` and `Δ_a ↦ U_aᶜ`.
#[derive(Clone, Debug)]
pub struct SkulaIso {
    pub spectrum: SpectrumResult,
    pub biframe: Biframe,
    /// Point mask of the image of each congruence.
    pub masks: Vec<u64>,
    /// The same, as elements of the Skula biframe.
    pub map: Vec<usize>,
    pub is_isomorphism: bool,
    pub preserves_parts: bool,
}

impl SkulaIso {
    pub fn holds(&self) -> bool {
        self.is_isomorphism && self.preserves_parts
    }
}

fn skula_masks(assembly: &Assembly, primes: &[usize]) -> Vec<u64> {
    let base = assembly.base();
    let prime_congruences: Vec<Congruence> =
        primes.iter().map(|&p| Congruence::clear(base, p)).collect();
    assembly
        .congruences()
        .iter()
        .map(|c| {
            prime_congruences
                .iter()
                .enumerate()
                .filter(|(_, d)| !c.leq(d))
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect()
}

pub fn skula_iso_check(assembly: &Assembly) -> Result<SkulaIso> {
    let spectrum = sigma(assembly.base())?;
    let biframe = skula_biframe(&spectrum.space, false)?;
    let masks = skula_masks(assembly, &spectrum.prime_of_point);
    let sk = skula_space(&spectrum.space);
    let map: Option<Vec<usize>> = masks.iter().map(|&m| sk.open_index(m)).collect();
    let Some(map) = map else {
        return Ok(SkulaIso {
            spectrum,
            biframe,
            masks,
            map: Vec::new(),
            is_isomorphism: false,
            preserves_parts: false,
        });
    };
    let is_isomorphism = iso::is_order_isomorphism(assembly.frame(), biframe.total(), &map);
    let image = |part: &FixedBitSet| {
        let mut out = FixedBitSet::with_capacity(biframe.total().size());
        for x in part.ones() {
            out.insert(map[x]);
        }
        out
    };
    let preserves_parts = image(assembly.nabla_part()) == *biframe.part1()
        && image(assembly.delta_part()) == *biframe.part2();
    Ok(SkulaIso {
        spectrum,
        biframe,
        masks,
        map,
        is_isomorphism,
        preserves_parts,
    })
}

/// Naturality of the comparison in `f : L → M`: the image of `C f (C)` is
/// the preimage of the image of `C` under `Σ f : q ↦ f_*(q)`.
pub fn skula_naturality_check(f: &FrameHom, source: &Assembly, target: &Assembly) -> Result<bool> {
    if !same_frame(f.source(), source.base()) || !same_frame(f.target(), target.base()) {
        return Err(Error::HomMismatch);
    }
    let cf = functor_on_hom(f, source, target)?;
    let pl = source.base().primes();
    let pm = target.base().primes();
    let up = f.right_adjoint();
    let sigma_f: Vec<usize> = pm
        .iter()
        .map(|&q| {
            pl.iter()
                .position(|&p| p == up[q])
                .expect("right adjoints of frame maps preserve primes")
        })
        .collect();
    let ml = skula_masks(source, &pl);
    let mm = skula_masks(target, &pm);
    Ok(source.frame().elements().all(|c| {
        let preimage = sigma_f
            .iter()
            .enumerate()
            .filter(|(_, &p)| ml[c] >> p & 1 == 1)
            .fold(0u64, |m, (q, _)| m | 1 << q);
        mm[cf.apply(c)] == preimage
    }))
}

/// Prime elements of the assembly frame.
pub fn prime_congruences(assembly: &Assembly) -> Vec<usize> {
    assembly.frame().primes()
}

/// `{∂_p | p prime in L}` as assembly elements, sorted.
pub fn clear_prime_congruences(assembly: &Assembly) -> Vec<usize> {
    let base = assembly.base();
    let mut out: Vec<usize> = base
        .primes()
        .into_iter()
        .map(|p| {
            assembly
                .index_of(&Congruence::clear(base, p))
                .expect("every congruence is assembled")
        })
        .collect();
    out.sort_unstable();
    out
}

/// `σ(C) = ⋀{P prime | C ≤ P}`, as an assembly element.
pub fn spatial_reflection_of_quotient(assembly: &Assembly, c: usize) -> usize {
    let f = assembly.frame();
    f.meet_all(prime_congruences(assembly).into_iter().filter(|&p| f.leq(c, p)))
}

/// Congruences that are meets of primes.
pub fn spatial_congruences(assembly: &Assembly) -> Vec<usize> {
    assembly
        .frame()
        .elements()
        .filter(|&c| spatial_reflection_of_quotient(assembly, c) == c)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assemble;

    fn chain3_space() -> FiniteSpace {
        FiniteSpace::new(3, vec![0, 0b001, 0b011, 0b111]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(FiniteSpace::new(2, vec![0, 1]).is_err());
        assert!(FiniteSpace::new(2, vec![1, 3]).is_err());
        let err = FiniteSpace::new(3, vec![0, 1, 2, 7]).unwrap_err();
        assert!(matches!(err, Error::InvalidSpace(m) if m.contains("union")));
        assert_eq!(
            FiniteSpace::from_subbasis(3, &[1, 2]).unwrap().opens(),
            &[0, 1, 2, 3, 7]
        );
    }

    #[test]
    fn omega_examples() {
        let s = omega(&FiniteSpace::sierpinski());
        assert_eq!(s.size(), 3);
        assert_eq!(s.poset().covers().len(), 2);
        assert!(omega(&FiniteSpace::discrete(2)).is_boolean());
        assert_eq!(omega(&FiniteSpace::indiscrete(2)).size(), 2);
    }

    #[test]
    fn sigma_examples() {
        let s = sigma(&Frame::chain(3)).unwrap();
        assert_eq!(s.prime_of_point, vec![0, 1]);
        assert_eq!(s.space, FiniteSpace::sierpinski());
        let sq = Frame::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(sigma(&sq).unwrap().space, FiniteSpace::discrete(2));
        let one = sigma(&Frame::chain(1)).unwrap();
        assert_eq!(one.space.points(), 0);
        assert!(s.unit_is_isomorphism(&Frame::chain(3)));
    }

    #[test]
    fn separation_axioms() {
        let s = FiniteSpace::sierpinski();
        assert!(s.is_t0() && s.is_td() && is_sober(&s).unwrap());
        let i = FiniteSpace::indiscrete(2);
        assert!(!i.is_t0() && !i.is_td());
        assert!(!is_sober(&i).unwrap());
        let (r, map) = i.t0_reflection();
        assert_eq!((r.points(), map), (1, vec![0, 0]));
        // 3-chain is T0 but not T_D at the middle point? Every point has
        // N(x) \ {x} open here.
        assert!(chain3_space().is_td());
        let non_td = FiniteSpace::new(2, vec![0, 3]).unwrap();
        assert!(!non_td.is_td());
    }

    #[test]
    fn td_separation() {
        for s in [
            FiniteSpace::sierpinski(),
            FiniteSpace::indiscrete(2),
            FiniteSpace::discrete(3),
            chain3_space(),
        ] {
            let r = td_separation_check(&s).unwrap();
            assert!(r.holds(), "{s:?} {r:?}");
        }
        let r = td_separation_check(&FiniteSpace::indiscrete(2)).unwrap();
        assert!(!r.is_td && !r.separates);
    }

    #[test]
    fn intersection_failure_needs_indistinguishable_points() {
        let w = intersection_join_counterexample(&FiniteSpace::indiscrete(2)).unwrap();
        assert_eq!(w, Some((1, 2)));
        assert_eq!(intersection_join_counterexample(&chain3_space()).unwrap(), None);
    }

    #[test]
    fn skula_examples() {
        assert_eq!(skula_space(&FiniteSpace::sierpinski()), FiniteSpace::discrete(2));
        assert_eq!(skula_space(&FiniteSpace::discrete(3)), FiniteSpace::discrete(3));
        assert_eq!(skula_space(&chain3_space()), FiniteSpace::discrete(3));
        let b = skula_biframe(&FiniteSpace::sierpinski(), false).unwrap();
        assert_eq!(b.total().size(), 4);
        assert!(b.is_strictly_zero_dimensional());
        assert_eq!(
            skula_biframe(&FiniteSpace::indiscrete(2), false).unwrap_err(),
            Error::NotT0
        );
        assert!(skula_biframe(&FiniteSpace::indiscrete(2), true).is_ok());
    }

    #[test]
    fn skula_iso_on_small_frames() {
        for f in [
            Frame::chain(1),
            Frame::chain(3),
            Frame::chain(4),
            Frame::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap(),
        ] {
            let a = assemble(&Arc::new(f), 1024).unwrap();
            assert!(skula_iso_check(&a).unwrap().holds());
        }
    }

    #[test]
    fn primes_of_three_chain_assembly() {
        let a = assemble(&Arc::new(Frame::chain(3)), 64).unwrap();
        let mut expected = vec![a.delta(1), a.nabla(1)];
        expected.sort();
        assert_eq!(prime_congruences(&a), expected);
        assert_eq!(clear_prime_congruences(&a), expected);
        assert_eq!(spatial_congruences(&a).len(), a.size());
    }

    #[test]
    fn naturality_for_quotient_map() {
        let l = Arc::new(Frame::chain(3));
        let m = Arc::new(Frame::chain(2));
        let f = FrameHom::new(l.clone(), m.clone(), vec![0, 1, 1]).unwrap();
        let (a, b) = (assemble(&l, 64).unwrap(), assemble(&m, 64).unwrap());
        assert!(skula_naturality_check(&f, &a, &b).unwrap());
    }
}
