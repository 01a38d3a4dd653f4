//! Named examples and exhaustive enumeration of small posets, distributive
//! lattices and finite spaces, deduplicated up to isomorphism.

use std::sync::Arc;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::format;
use crate::order::{
    downset_frame, enumerate_homs, free_frame_on_semilattice, free_meet_semilattice, iso, Frame,
    FrameHom, Poset,
};
use crate::spatial::FiniteSpace;

#[derive(Clone, Debug)]
pub enum Payload {
    Lattice(Arc<Frame>),
    Space(FiniteSpace),
    Hom(FrameHom),
    /// A poset that is not a frame, kept as a negative example.
    ExpectReject(Poset),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Lattice,
    Space,
    Hom,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub payload: Payload,
    /// Generator and parameters, e.g. `chain(3)` or `downsets(poset 3#2)`.
    pub provenance: String,
}

impl CatalogEntry {
    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Lattice(_) | Payload::ExpectReject(_) => Kind::Lattice,
            Payload::Space(_) => Kind::Space,
            Payload::Hom(_) => Kind::Hom,
        }
    }

    pub fn frame(&self) -> Option<&Arc<Frame>> {
        match &self.payload {
            Payload::Lattice(f) => Some(f),
            _ => None,
        }
    }

    pub fn space(&self) -> Option<&FiniteSpace> {
        match &self.payload {
            Payload::Space(s) => Some(s),
            _ => None,
        }
    }
}

/// Registry patterns accepted by [`named`].
pub const NAMES: &[&str] = &[
    "chain(n) for 1 <= n <= 8",
    "boolean(k) for 0 <= k <= 4",
    "sierpinski_frame",
    "sierpinski_space",
    "diamond_M3",
    "pentagon_N5",
    "grid(2,2)",
    "free_frame(g) for g <= 2",
];

fn parse_call<'a>(name: &'a str, head: &str) -> Option<Vec<&'a str>> {
    let rest = name.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')?;
    Some(rest.split(',').map(str::trim).collect())
}

fn one_arg(name: &str, head: &str, max: usize, min: usize) -> Option<Result<usize>> {
    let args = parse_call(name, head)?;
    let bad = || Error::UnknownName(name.to_string());
    Some(match args.as_slice() {
        [x] => match x.parse::<usize>() {
            Ok(v) if (min..=max).contains(&v) => Ok(v),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    })
}

fn lattice(name: &str, frame: Frame, provenance: impl Into<String>) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        payload: Payload::Lattice(Arc::new(frame)),
        provenance: provenance.into(),
    }
}

/// The product of chains with `m + 1` and `n + 1` elements.
pub fn grid(m: usize, n: usize) -> Frame {
    let w = n + 1;
    let size = (m + 1) * w;
    Frame::from_poset(
        Poset::from_relation(size, |a, b| a / w <= b / w && a % w <= b % w)
            .expect("product order"),
    )
    .expect("products of chains are distributive")
}

pub fn boolean(k: usize) -> Frame {
    downset_frame(&Poset::antichain(k)).expect("power sets are frames")
}

pub fn diamond_m3() -> Poset {
    Poset::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("M3")
}

pub fn pentagon_n5() -> Poset {
    Poset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).expect("N5")
}

/// Looks up a registry entry; see [`NAMES`].
pub fn named(name: &str) -> Result<CatalogEntry> {
    let name = name.trim();
    if let Some(n) = one_arg(name, "chain", 8, 1) {
        let n = n?;
        return Ok(lattice(&format!("chain{n}"), Frame::chain(n), format!("chain({n})")));
    }
    if let Some(k) = one_arg(name, "boolean", 4, 0) {
        let k = k?;
        return Ok(lattice(&format!("boolean{k}"), boolean(k), format!("boolean({k})")));
    }
    if let Some(g) = one_arg(name, "free_frame", 2, 0) {
        let g = g?;
        let s = free_meet_semilattice(g)?;
        return Ok(lattice(
            &format!("free_frame{g}"),
            free_frame_on_semilattice(&s)?,
            format!("free_frame({g})"),
        ));
    }
    if let Some(args) = parse_call(name, "grid") {
        if args == ["2", "2"] {
            return Ok(lattice("grid2x2", grid(2, 2), "grid(2,2)"));
        }
        return Err(Error::UnknownName(name.to_string()));
    }
    match name {
        "sierpinski_frame" => Ok(lattice("sierpinski_frame", Frame::chain(3), "sierpinski_frame")),
        "sierpinski_space" => Ok(CatalogEntry {
            name: name.to_string(),
            payload: Payload::Space(FiniteSpace::sierpinski()),
            provenance: name.to_string(),
        }),
        "diamond_M3" => Ok(CatalogEntry {
            name: name.to_string(),
            payload: Payload::ExpectReject(diamond_m3()),
            provenance: name.to_string(),
        }),
        "pentagon_N5" => Ok(CatalogEntry {
            name: name.to_string(),
            payload: Payload::ExpectReject(pentagon_n5()),
            provenance: name.to_string(),
        }),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Every concrete name in the registry, in a fixed order.
pub fn registry() -> Vec<String> {
    let mut out: Vec<String> = (1..=8).map(|n| format!("chain({n})")).collect();
    out.extend((0..=4).map(|k| format!("boolean({k})")));
    out.extend(
        ["sierpinski_frame", "sierpinski_space", "diamond_M3", "pentagon_N5", "grid(2,2)"]
            .map(String::from),
    );
    out.extend((0..=2).map(|g| format!("free_frame({g})")));
    out
}

pub const MAX_POSET_SIZE: usize = 6;

fn poset_from_matrix(n: usize, bits: &[bool]) -> Poset {
    Poset::from_relation(n, |a, b| bits[a * n + b]).expect("canonical forms of partial orders")
}

/// Posets on exactly `n` points up to isomorphism, each relabelled to its
/// canonical form and sorted by it.
///
/// Every poset on `n` points arises from one on `n − 1` points by adding a
/// maximal element above some down-set, so the search extends the previous
/// level and deduplicates by canonical form.
pub fn enumerate_posets(n: usize) -> Result<Vec<Poset>> {
    if n > MAX_POSET_SIZE {
        return Err(Error::SizeBudgetExceeded {
            predicted: n as u64,
            budget: MAX_POSET_SIZE as u64,
        });
    }
    let mut level: Vec<Poset> = vec![Poset::antichain(0)];
    for k in 1..=n {
        let candidates: Vec<(Poset, fixedbitset::FixedBitSet)> = level
            .iter()
            .flat_map(|p| p.downsets().into_iter().map(move |d| (p.clone(), d)))
            .collect();
        let mut forms: Vec<Vec<bool>> = candidates
            .par_iter()
            .map(|(p, d)| {
                let top = k - 1;
                iso::canonical_relation(k, |a, b| {
                    if a == top {
                        b == top
                    } else if b == top {
                        d.contains(a)
                    } else {
                        p.leq(a, b)
                    }
                })
            })
            .collect();
        forms.sort();
        forms.dedup();
        level = forms.iter().map(|bits| poset_from_matrix(k, bits)).collect();
    }
    Ok(level)
}

/// Posets on `0..=max_n` points.
pub fn posets_up_to(max_n: usize) -> Result<Vec<Poset>> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        out.extend(enumerate_posets(n)?);
    }
    Ok(out)
}

/// Distributive lattices `O(P)` for posets `P` on at most `max_poset`
/// points, keeping those with at most `max_elements` elements, ordered by
/// size (stably). Distinct posets give non-isomorphic lattices.
pub fn enumerate_distributive_lattices(max_poset: usize, max_elements: usize) -> Result<Vec<(Poset, Frame)>> {
    if max_elements > 64 {
        return Err(Error::SizeBudgetExceeded {
            predicted: max_elements as u64,
            budget: 64,
        });
    }
    let mut out = Vec::new();
    for p in posets_up_to(max_poset)? {
        let f = downset_frame(&p)?;
        if f.size() <= max_elements {
            out.push((p, f));
        }
    }
    out.sort_by_key(|(_, f)| f.size());
    Ok(out)
}

/// Topologies on `n` points up to homeomorphism. A finite topology is a
/// preorder; each is a poset of indistinguishability classes with a class
/// size attached to every element.
pub fn enumerate_spaces(n: usize) -> Result<Vec<FiniteSpace>> {
    if n > MAX_POSET_SIZE {
        return Err(Error::SizeBudgetExceeded {
            predicted: n as u64,
            budget: MAX_POSET_SIZE as u64,
        });
    }
    if n == 0 {
        return Ok(vec![FiniteSpace::discrete(0)]);
    }
    let mut preorders: Vec<Vec<usize>> = Vec::new(); // class of each point
    let mut shapes = Vec::new();
    for k in 1..=n {
        for p in enumerate_posets(k)? {
            for sizes in compositions(n, k) {
                let class: Vec<usize> = sizes
                    .iter()
                    .enumerate()
                    .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
                    .collect();
                preorders.push(class);
                shapes.push(p.clone());
            }
        }
    }
    let mut forms: Vec<Vec<bool>> = preorders
        .par_iter()
        .zip(shapes.par_iter())
        .map(|(class, p)| iso::canonical_relation(n, |a, b| p.leq(class[a], class[b])))
        .collect();
    forms.sort();
    forms.dedup();
    forms
        .iter()
        .map(|bits| FiniteSpace::from_preorder(n, |a, b| bits[a * n + b]))
        .collect()
}

/// Ordered ways to write `n` as a sum of `k` positive parts.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Largest poset whose down-set lattices enter the corpus.
pub const CORPUS_POSET_SIZE: usize = 4;
/// Largest spaces in the corpus.
pub const CORPUS_SPACE_POINTS: usize = 6;
/// Homomorphisms are listed between corpus lattices of at most this size.
pub const CORPUS_HOM_SIZE: usize = 4;

/// The pinned instance collection used by the property suites.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub lattices: Vec<CatalogEntry>,
    pub spaces: Vec<CatalogEntry>,
    pub homs: Vec<CatalogEntry>,
    /// Indices into `lattices` of each hom's source and target.
    pub hom_ends: Vec<(usize, usize)>,
}

/// Named lattices first (registry order), then down-set lattices of posets
/// with at most four points not already present; spaces likewise.
pub fn corpus() -> Result<Corpus> {
    let mut lattices: Vec<CatalogEntry> = Vec::new();
    let mut forms: Vec<Vec<bool>> = Vec::new();
    let mut spaces = Vec::new();
    let mut push_lattice = |e: CatalogEntry, lattices: &mut Vec<CatalogEntry>| {
        let form = iso::frame_canonical_form(e.frame().expect("lattice"));
        if !forms.contains(&form) {
            forms.push(form);
            lattices.push(e);
        }
    };
    for name in registry() {
        let e = named(&name)?;
        match e.payload {
            Payload::Lattice(_) => push_lattice(e, &mut lattices),
            Payload::Space(_) => spaces.push(e),
            _ => {}
        }
    }
    for n in 0..=CORPUS_POSET_SIZE {
        for (i, p) in enumerate_posets(n)?.into_iter().enumerate() {
            let e = lattice(
                &format!("downsets_p{n}_{i}"),
                downset_frame(&p)?,
                format!("downsets(poset {n}#{i})"),
            );
            push_lattice(e, &mut lattices);
        }
    }
    let mut seen: std::collections::HashSet<(usize, Vec<bool>)> = spaces
        .iter()
        .filter_map(|e| e.space())
        .map(|s| (s.points(), space_form(s)))
        .collect();
    for n in 0..=CORPUS_SPACE_POINTS {
        for (i, s) in enumerate_spaces(n)?.into_iter().enumerate() {
            if !seen.insert((n, space_form(&s))) {
                continue;
            }
            spaces.push(CatalogEntry {
                name: format!("space_{n}_{i}"),
                payload: Payload::Space(s),
                provenance: format!("preorder({n}#{i})"),
            });
        }
    }
    let mut homs = Vec::new();
    let mut hom_ends = Vec::new();
    for (i, l) in lattices.iter().enumerate() {
        for (j, m) in lattices.iter().enumerate() {
            let (lf, mf) = (l.frame().unwrap(), m.frame().unwrap());
            if lf.size() > CORPUS_HOM_SIZE || mf.size() > CORPUS_HOM_SIZE {
                continue;
            }
            for (k, map) in enumerate_homs(lf, mf).into_iter().enumerate() {
                homs.push(CatalogEntry {
                    name: format!("{}_to_{}_{k}", l.name, m.name),
                    payload: Payload::Hom(FrameHom::new(lf.clone(), mf.clone(), map)?),
                    provenance: format!("hom({}, {})#{k}", l.name, m.name),
                });
                hom_ends.push((i, j));
            }
        }
    }
    Ok(Corpus {
        lattices,
        spaces,
        homs,
        hom_ends,
    })
}

/// Spaces are compared through the canonical form of their specialisation
/// preorder, which determines a finite topology.
pub fn homeomorphic(a: &FiniteSpace, b: &FiniteSpace) -> bool {
    a.points() == b.points() && a.opens().len() == b.opens().len() && space_form(a) == space_form(b)
}

fn space_form(s: &FiniteSpace) -> Vec<bool> {
    iso::canonical_relation(s.points(), |x, y| s.specialization_leq(x, y))
}

impl Corpus {
    /// Lattices with at most `max_size` elements, in corpus order.
    pub fn lattices_up_to(&self, max_size: usize) -> impl Iterator<Item = (usize, &CatalogEntry)> {
        self.lattices
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.frame().unwrap().size() <= max_size)
    }

    pub fn spaces_up_to(&self, max_points: usize) -> impl Iterator<Item = &CatalogEntry> {
        self.spaces
            .iter()
            .filter(move |e| e.space().unwrap().points() <= max_points)
    }

    /// Concatenation of every entry's file serialisation.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for e in &self.lattices {
            out.push_str(&format::write_lat(&e.name, e.frame().unwrap()));
        }
        for e in &self.spaces {
            out.push_str(&format::write_spc(&e.name, e.space().unwrap()));
        }
        for (e, &(i, j)) in self.homs.iter().zip(&self.hom_ends) {
            if let Payload::Hom(f) = &e.payload {
                out.push_str(&format::write_hom(&self.lattices[i].name, &self.lattices[j].name, f));
            }
        }
        out
    }

    /// SHA-256 of [`Corpus::serialize`], hex encoded.
    pub fn content_hash(&self) -> String {
        sha256_hex(self.serialize().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// The hash the corpus is pinned to.
pub const PINNED_CORPUS_HASH: &str = include_str!("../corpus.sha256");

pub fn pinned_hash() -> &'static str {
    PINNED_CORPUS_HASH.trim()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Partial orders on `n ≤ 3` points by scanning all relations.
    fn brute_force_posets(n: usize) -> Vec<Vec<bool>> {
        let cells = n * n;
        let mut forms = Vec::new();
        for mask in 0u32..(1 << cells) {
            let r = |a: usize, b: usize| mask >> (a * n + b) & 1 == 1;
            let reflexive = (0..n).all(|a| r(a, a));
            let antisym = (0..n).all(|a| (0..n).all(|b| a == b || !(r(a, b) && r(b, a))));
            let trans = (0..n)
                .all(|a| (0..n).all(|b| (0..n).all(|c| !(r(a, b) && r(b, c)) || r(a, c))));
            if reflexive && antisym && trans {
                forms.push(iso::canonical_relation(n, r));
            }
        }
        forms.sort();
        forms.dedup();
        forms
    }

    #[test]
    fn poset_counts_match_brute_force() {
        for n in 0..=3 {
            let got: Vec<Vec<bool>> =
                enumerate_posets(n).unwrap().iter().map(iso::poset_canonical_form).collect();
            assert_eq!(got, brute_force_posets(n), "n = {n}");
        }
        assert_eq!(enumerate_posets(3).unwrap().len(), 5);
    }

    #[test]
    fn poset_counts_up_to_five() {
        let counts: Vec<usize> = (0..=5).map(|n| enumerate_posets(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
        assert!(enumerate_posets(7).is_err());
    }

    #[test]
    fn small_lattices() {
        let sizes: Vec<usize> = enumerate_distributive_lattices(2, 64)
            .unwrap()
            .iter()
            .map(|(_, f)| f.size())
            .collect();
        assert_eq!(sizes, vec![1, 2, 3, 4]);
        let four = &enumerate_distributive_lattices(2, 64).unwrap()[3].1;
        assert!(four.is_boolean());
        assert_eq!(enumerate_distributive_lattices(4, 64).unwrap().len(), 25);
    }

    #[test]
    fn space_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_spaces(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 9, 33]);
    }

    #[test]
    fn corpus_is_pinned() {
        let c = corpus().unwrap();
        // 25 down-set lattices of posets with at most four points, plus the
        // chains with six to eight elements
        assert_eq!(c.lattices.len(), 28);
        assert_eq!(c.spaces.len(), 904);
        assert_eq!(c.content_hash(), pinned_hash());
    }

    #[test]
    fn named_entries() {
        let three = named("chain(3)").unwrap();
        assert!(iso::is_isomorphic(three.frame().unwrap(), &Frame::chain(3)));
        assert!(named("boolean(2)").unwrap().frame().unwrap().is_boolean());
        let ff1 = named("free_frame(1)").unwrap();
        assert!(iso::is_isomorphic(ff1.frame().unwrap(), &Frame::chain(3)));
        assert_eq!(named("grid(2,2)").unwrap().frame().unwrap().size(), 9);
        assert!(matches!(named("chain(9)"), Err(Error::UnknownName(_))));
        assert!(matches!(named("nope"), Err(Error::UnknownName(_))));
        for n in ["diamond_M3", "pentagon_N5"] {
            let Payload::ExpectReject(p) = named(n).unwrap().payload else {
                panic!("{n} should be a negative example")
            };
            assert!(Frame::from_poset(p).is_err());
        }
        for n in registry() {
            named(&n).unwrap();
        }
    }
}
