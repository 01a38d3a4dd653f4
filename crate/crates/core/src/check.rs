//! Property suites over the pinned corpus.
//!
//! Each property runs once per instance (a lattice, space, homomorphism or
//! pair of lattices). Instances are evaluated on a thread pool but results are
//! merged in corpus order, so the report does not depend on the worker count.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::assembly::{assemble, functor_on_hom, kernel_closure_check, quotient_iso, tower, Assembly};
use crate::biframe::{
    adjunction_check, closed_quotient, congruence_biframe, congruentiality, coreflection,
    induced_sub_biframe, is_biframe_isomorphic, quotient_biframe, str0d_biframes_over,
    validate_biframe, Biframe, BiframeHom,
};
use crate::catalog::{corpus, pinned_hash, Corpus, Payload};
use crate::congruence::{beazer_macnab_witness, check_nucleus, Congruence};
use crate::error::{Error, Result};
use crate::format;
use crate::oracle;
use crate::order::{enumerate_homs, iso, validate_hom, Frame, FrameHom};
use crate::spatial::{
    clear_prime_congruences, fmt_set, intersection_join_counterexample, is_sober,
    prime_congruences, sigma, skula_biframe, skula_iso_check, skula_naturality_check,
    sobrification, spatial_congruences, spatial_reflection_of_quotient, td_separation_check,
    FiniteSpace, OpenFrame,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Formulas,
    Nuclei,
    Assembly,
    ClearDense,
    Biframe,
    Spatial,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Formulas,
        Suite::Nuclei,
        Suite::Assembly,
        Suite::ClearDense,
        Suite::Biframe,
        Suite::Spatial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Formulas => "formulas",
            Suite::Nuclei => "nuclei",
            Suite::Assembly => "assembly",
            Suite::ClearDense => "clear-dense",
            Suite::Biframe => "biframe",
            Suite::Spatial => "spatial",
        }
    }

    /// A suite name, or `all`.
    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().copied().find(|s| s.name() == name).map(|s| vec![s])
    }
}

/// A congruence supplied from a file, checked by the nuclei suite.
#[derive(Clone, Debug)]
pub struct NucleusFixture {
    pub name: String,
    pub source: String,
    pub frame: Arc<Frame>,
    pub nu: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub suites: Vec<Suite>,
    /// Lattices with more elements, and spaces with more points, are skipped.
    pub max_size: usize,
    pub seed: u64,
    pub workers: usize,
    pub budget: u64,
    pub fixtures: Vec<NucleusFixture>,
    /// Property names to run; empty runs every property of the suites.
    pub only: Vec<String>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            suites: Suite::ALL.to_vec(),
            max_size: 6,
            seed: 0,
            workers: 1,
            budget: crate::DEFAULT_BUDGET,
            fixtures: Vec::new(),
            only: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub instance: String,
    pub inputs: String,
    pub detail: String,
    /// The instance in its file format(s).
    pub instance_file: String,
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub suite: Suite,
    pub name: &'static str,
    pub instances: usize,
    pub checks: u64,
    pub failed_instances: usize,
    pub first_failure: Option<Failure>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failed_instances == 0
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub corpus_hash: String,
    pub corpus_pinned: bool,
    pub lattices: usize,
    pub spaces: usize,
    pub homs: usize,
    pub properties: Vec<PropertyReport>,
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.corpus_pinned && self.properties.iter().all(PropertyReport::passed)
    }

    pub fn failures(&self) -> usize {
        self.properties.iter().filter(|p| !p.passed()).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(
            out,
            "corpus: sha256 {} ({}), {} lattices, {} spaces, {} homs in range",
            self.corpus_hash,
            if self.corpus_pinned { "pinned" } else { "MISMATCH" },
            self.lattices,
            self.spaces,
            self.homs
        );
        for p in &self.properties {
            let _ = writeln!(
                out,
                "{:<5} {:<12} {:<34} {:>5} instances {:>9} checks",
                if p.passed() { "PASS" } else { "FAIL" },
                p.suite.name(),
                p.name,
                p.instances,
                p.checks
            );
            if let Some(f) = &p.first_failure {
                let _ = writeln!(
                    out,
                    "      {} failing instance(s); first: {} with {}: {}",
                    p.failed_instances, f.instance, f.inputs, f.detail
                );
                for line in f.instance_file.lines() {
                    let _ = writeln!(out, "      | {line}");
                }
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(
            out,
            "summary: {} properties, {} passed, {} failed",
            self.properties.len(),
            self.properties.len() - self.failures(),
            self.failures()
        );
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "corpus": {
                "sha256": self.corpus_hash,
                "pinned": self.corpus_pinned,
                "lattices": self.lattices,
                "spaces": self.spaces,
                "homs": self.homs,
            },
            "properties": self.properties.iter().map(|p| json!({
                "suite": p.suite.name(),
                "name": p.name,
                "passed": p.passed(),
                "instances": p.instances,
                "checks": p.checks,
                "failed_instances": p.failed_instances,
                "witness": p.first_failure.as_ref().map(|f| json!({
                    "instance": f.instance,
                    "inputs": f.inputs,
                    "detail": f.detail,
                    "instance_file": f.instance_file,
                })),
            })).collect::<Vec<_>>(),
            "notes": self.notes,
            "passed": self.passed(),
        })
    }
}

#[derive(Clone, Copy, Debug)]
enum Inst {
    Lattice(usize),
    Space(usize),
    Hom(usize),
    Pair(usize, usize),
    Fixture(usize),
}

#[derive(Clone, Copy, Debug)]
enum Domain {
    Lattices,
    /// Lattices with at most this many elements.
    SmallLattices(usize),
    Spaces,
    Homs,
    /// Pairs of lattices with at most this many elements.
    Pairs(usize),
    /// A lattice with at most 4 elements and a congruence biframe with
    /// total of at most 16 elements.
    AdjunctionPairs,
    Fixtures,
}

/// Counts checks and keeps the first failure.
#[derive(Default)]
struct Tally {
    checks: u64,
    failure: Option<(String, String)>,
}

impl Tally {
    fn check(&mut self, ok: bool, inputs: impl FnOnce() -> String, detail: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some((inputs(), detail()));
        }
        ok
    }

    fn fail(&mut self, inputs: impl Into<String>, detail: impl Into<String>) {
        self.check(false, || inputs.into(), || detail.into());
    }
}

type CheckFn = fn(&Ctx, Inst, &mut Tally);

struct Property {
    suite: Suite,
    name: &'static str,
    domain: Domain,
    run: CheckFn,
}

struct Ctx<'a> {
    corpus: &'a Corpus,
    cfg: &'a CheckConfig,
    lattices: Vec<usize>,
    spaces: Vec<usize>,
    homs: Vec<usize>,
    assemblies: Vec<Option<std::result::Result<Assembly, Error>>>,
}

impl Ctx<'_> {
    fn frame(&self, i: usize) -> &Arc<Frame> {
        self.corpus.lattices[i].frame().expect("lattice entry")
    }

    fn name(&self, i: usize) -> &str {
        &self.corpus.lattices[i].name
    }

    fn assembly(&self, i: usize, t: &mut Tally) -> Option<&Assembly> {
        match self.assemblies[i].as_ref().expect("assembled in range") {
            Ok(a) => Some(a),
            Err(e) => {
                t.fail("assemble", e.to_string());
                None
            }
        }
    }

    fn space(&self, i: usize) -> &FiniteSpace {
        self.corpus.spaces[i].space().expect("space entry")
    }

    fn hom(&self, i: usize) -> &FrameHom {
        match &self.corpus.homs[i].payload {
            Payload::Hom(f) => f,
            _ => unreachable!("hom entries hold homomorphisms"),
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn describe(&self, inst: Inst) -> (String, String) {
        let lat = |i: usize| format::write_lat(self.name(i), self.frame(i));
        match inst {
            Inst::Lattice(i) => (self.name(i).to_string(), lat(i)),
            Inst::Space(i) => {
                let e = &self.corpus.spaces[i];
                (e.name.clone(), format::write_spc(&e.name, self.space(i)))
            }
            Inst::Hom(h) => {
                let (i, j) = self.corpus.hom_ends[h];
                let text = format!(
                    "{}{}{}",
                    lat(i),
                    lat(j),
                    format::write_hom(self.name(i), self.name(j), self.hom(h))
                );
                (self.corpus.homs[h].name.clone(), text)
            }
            Inst::Pair(i, j) => (
                format!("{} & {}", self.name(i), self.name(j)),
                format!("{}{}", lat(i), lat(j)),
            ),
            Inst::Fixture(k) => {
                let f = &self.cfg.fixtures[k];
                (f.name.clone(), f.source.clone())
            }
        }
    }

    fn instances(&self, domain: Domain) -> Vec<Inst> {
        let size = |i: &usize| self.frame(*i).size();
        match domain {
            Domain::Lattices => self.lattices.iter().map(|&i| Inst::Lattice(i)).collect(),
            Domain::SmallLattices(n) => self
                .lattices
                .iter()
                .filter(|i| size(i) <= n)
                .map(|&i| Inst::Lattice(i))
                .collect(),
            Domain::Spaces => self.spaces.iter().map(|&i| Inst::Space(i)).collect(),
            Domain::Homs => self.homs.iter().map(|&i| Inst::Hom(i)).collect(),
            Domain::Pairs(n) => {
                let small: Vec<usize> = self.lattices.iter().copied().filter(|i| size(i) <= n).collect();
                small
                    .iter()
                    .flat_map(|&i| small.iter().map(move |&j| Inst::Pair(i, j)))
                    .collect()
            }
            Domain::AdjunctionPairs => {
                let small: Vec<usize> = self.lattices.iter().copied().filter(|i| size(i) <= 4).collect();
                let targets: Vec<usize> = self
                    .lattices
                    .iter()
                    .copied()
                    .filter(|&j| self.frame(j).predicted_congruence_count() <= 16)
                    .collect();
                small
                    .iter()
                    .flat_map(|&i| targets.iter().map(move |&j| Inst::Pair(i, j)))
                    .collect()
            }
            Domain::Fixtures => (0..self.cfg.fixtures.len()).map(Inst::Fixture).collect(),
        }
    }
}

fn congruences(a: &Assembly) -> &[Congruence] {
    a.congruences()
}

fn pairs_of(c: &Congruence) -> Vec<(usize, usize)> {
    c.frame().elements().map(|x| (x, c.nucleus(x))).collect()
}

fn show(c: &Congruence) -> String {
    format!("{:?}", c.blocks())
}

// ---------------------------------------------------------------- formulas

fn nabla_formula(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    for a in f.elements() {
        let c = Congruence::nabla(f, a);
        let g = Congruence::generated(f, &[(f.bottom(), a)]).expect("indices in range");
        if !t.check(c == g, || format!("a = {a}"), || format!("formula {} vs closure {}", show(&c), show(&g))) {
            return;
        }
    }
}

fn delta_formula(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    for a in f.elements() {
        let c = Congruence::delta(f, a);
        let g = Congruence::generated(f, &[(a, f.top())]).expect("indices in range");
        if !t.check(c == g, || format!("a = {a}"), || format!("formula {} vs closure {}", show(&c), show(&g))) {
            return;
        }
    }
}

fn principal_formula(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    for a in f.elements() {
        for b in f.elements() {
            let c = Congruence::principal(f, a, b);
            let g = Congruence::generated(f, &[(a, b)]).expect("indices in range");
            if !t.check(c == g, || format!("(a, b) = ({a}, {b})"), || {
                format!("∇_b ∧ Δ_a {} vs closure {}", show(&c), show(&g))
            }) {
                return;
            }
        }
    }
}

fn join_with_nabla_formula(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let Some(asm) = ctx.assembly(i, t) else { return };
    for c in congruences(asm) {
        for a in f.elements() {
            let lhs = c.join_with_nabla(a);
            let mut pairs = pairs_of(c);
            pairs.push((f.bottom(), a));
            let rhs = Congruence::generated(f, &pairs).expect("indices in range");
            if !t.check(lhs == rhs, || format!("C = {}, a = {a}", show(c)), || {
                format!("formula {} vs closure {}", show(&lhs), show(&rhs))
            }) {
                return;
            }
        }
    }
}

fn join_with_delta_formula(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let Some(asm) = ctx.assembly(i, t) else { return };
    for c in congruences(asm) {
        for a in f.elements() {
            let lhs = c.join_with_delta(a);
            let mut pairs = pairs_of(c);
            pairs.push((a, f.top()));
            let rhs = Congruence::generated(f, &pairs).expect("indices in range");
            if !t.check(lhs == rhs, || format!("C = {}, a = {a}", show(c)), || {
                format!("formula {} vs closure {}", show(&lhs), show(&rhs))
            }) {
                return;
            }
        }
    }
}

fn join_routes(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    let cs = congruences(asm);
    for c in cs {
        for d in cs {
            let j = c.join(d).expect("same frame");
            let g = c.join_by_generation(d).expect("same frame");
            if !t.check(j == g, || format!("C = {}, D = {}", show(c), show(d)), || {
                format!("nucleus iteration {} vs closure {}", show(&j), show(&g))
            }) {
                return;
            }
        }
    }
}

fn closure_vs_oracle(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let parts = oracle::all_congruence_partitions(f);
    for a in f.elements() {
        for b in f.elements() {
            let g = Congruence::generated(f, &[(a, b)]).expect("indices in range");
            let got = oracle::labels_of(g.nu());
            let want = oracle::least_containing_in(&parts, &[(a, b)]);
            if !t.check(got == want, || format!("(a, b) = ({a}, {b})"), || {
                format!("closure {got:?} vs partition scan {want:?}")
            }) {
                return;
            }
        }
    }
}

/// `⟨S⟩ = ⋁_{p ∈ S} ⟨p⟩` on seeded random pair sets.
fn random_pair_sets(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let holds = |s: &[(usize, usize)]| {
        let g = Congruence::generated(f, s).expect("indices in range");
        let j = s.iter().fold(Congruence::diagonal(f), |acc, &(a, b)| {
            acc.join(&Congruence::principal(f, a, b)).expect("same frame")
        });
        g == j
    };
    let mut rng = ctx.rng(i as u64);
    for _ in 0..16 {
        let k = rng.gen_range(1..=4);
        let set: Vec<(usize, usize)> = (0..k)
            .map(|_| (rng.gen_range(0..f.size()), rng.gen_range(0..f.size())))
            .collect();
        if !holds(&set) {
            let w = minimize(set, |s| !holds(s));
            t.fail(format!("pairs {w:?}"), "generated congruence differs from the join of principal ones");
            return;
        }
        t.checks += 1;
    }
}

/// Greedily drops items while `fails` keeps holding.
fn minimize<T: Clone>(mut items: Vec<T>, fails: impl Fn(&[T]) -> bool) -> Vec<T> {
    let mut k = 0;
    while k < items.len() {
        let mut shorter = items.clone();
        shorter.remove(k);
        if fails(&shorter) {
            items = shorter;
        } else {
            k += 1;
        }
    }
    items
}

fn complements(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    for a in f.elements() {
        let (n, d) = (Congruence::nabla(f, a), Congruence::delta(f, a));
        let m = n.meet(&d).expect("same frame");
        let j = n.join(&d).expect("same frame");
        if !t.check(m.is_diagonal() && j.is_full(), || format!("a = {a}"), || {
            format!("∇_a ∧ Δ_a = {}, ∇_a ∨ Δ_a = {}", show(&m), show(&j))
        }) {
            return;
        }
    }
}

fn nabla_homomorphism(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let n: Vec<Congruence> = f.elements().map(|a| Congruence::nabla(f, a)).collect();
    let d: Vec<Congruence> = f.elements().map(|a| Congruence::delta(f, a)).collect();
    if !t.check(n[f.bottom()].is_diagonal() && n[f.top()].is_full(), || "0, 1".into(), || {
        "∇ does not preserve bounds".into()
    }) {
        return;
    }
    for a in f.elements() {
        for b in f.elements() {
            let (m, j) = (f.meet(a, b), f.join(a, b));
            let ok = n[m] == n[a].meet(&n[b]).unwrap()
                && n[j] == n[a].join(&n[b]).unwrap()
                && d[m] == d[a].join(&d[b]).unwrap()
                && d[j] == d[a].meet(&d[b]).unwrap()
                && (a == b || n[a] != n[b]);
            if !t.check(ok, || format!("(a, b) = ({a}, {b})"), || {
                "∇ is not an injective lattice map (or Δ not antitone-homomorphic)".into()
            }) {
                return;
            }
        }
    }
}

// ---------------------------------------------------------------- nuclei

fn nucleus_laws(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let Some(asm) = ctx.assembly(i, t) else { return };
    let mut check = |what: &dyn Fn() -> String, c: &Congruence| {
        let r = check_nucleus(f, c.nu());
        t.check(r.is_ok(), what, || r.unwrap_err().to_string())
    };
    check(&|| "largest dense".into(), &Congruence::largest_dense(f));
    for a in f.elements() {
        check(&|| format!("∇_{a}"), &Congruence::nabla(f, a));
        check(&|| format!("Δ_{a}"), &Congruence::delta(f, a));
        check(&|| format!("∂_{a}"), &Congruence::clear(f, a));
        for b in f.elements() {
            check(&|| format!("⟨({a}, {b})⟩"), &Congruence::principal(f, a, b));
        }
    }
    let cs = congruences(asm);
    for c in cs {
        check(&|| format!("closure of {}", show(c)), &c.closure());
        check(&|| format!("D ∨ {}", show(c)), &c.join_with_largest_dense());
        check(&|| format!("kernel of the quotient by {}", show(c)), &c.quotient().map.kernel());
        for a in f.elements() {
            check(&|| format!("{} ∨ ∇_{a}", show(c)), &c.join_with_nabla(a));
            check(&|| format!("{} ∨ Δ_{a}", show(c)), &c.join_with_delta(a));
        }
        for d in cs.iter().take(64) {
            check(&|| format!("{} ∧ {}", show(c), show(d)), &c.meet(d).unwrap());
            check(&|| format!("{} ∨ {}", show(c), show(d)), &c.join(d).unwrap());
        }
    }
    let mut rng = ctx.rng(i as u64 ^ 0x55);
    for _ in 0..8 {
        let pairs: Vec<(usize, usize)> = (0..rng.gen_range(1..=3))
            .map(|_| (rng.gen_range(0..f.size()), rng.gen_range(0..f.size())))
            .collect();
        check(&|| format!("⟨{pairs:?}⟩"), &Congruence::generated(f, &pairs).unwrap());
    }
}

fn hom_kernels(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Hom(h) = inst else { return };
    let f = ctx.hom(h);
    let k = f.kernel();
    let r = check_nucleus(f.source(), k.nu());
    t.check(r.is_ok(), || "kernel".into(), || r.unwrap_err().to_string());
}

fn fixtures(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Fixture(k) = inst else { return };
    let fx = &ctx.cfg.fixtures[k];
    let r = check_nucleus(&fx.frame, &fx.nu);
    t.check(r.is_ok(), || format!("nucleus {:?}", fx.nu), || r.unwrap_err().to_string());
}

// ---------------------------------------------------------------- assembly

fn assembly_count(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let Some(asm) = ctx.assembly(i, t) else { return };
    t.check(asm.size() as u64 == f.predicted_congruence_count(), || "-".into(), || {
        format!("|C L| = {} but 2^|J| = {}", asm.size(), f.predicted_congruence_count())
    });
}

fn assembly_vs_oracle(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let Some(asm) = ctx.assembly(i, t) else { return };
    let mut want = oracle::all_congruence_partitions(f);
    want.sort();
    let mut got: Vec<Vec<usize>> = congruences(asm).iter().map(|c| oracle::labels_of(c.nu())).collect();
    got.sort();
    t.check(got == want, || "-".into(), || {
        format!("{} assembled congruences, {} found by partition scan", got.len(), want.len())
    });
}

fn assembly_boolean(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let Some(asm) = ctx.assembly(i, t) else { return };
    let cf = asm.frame();
    t.check(cf.is_boolean() && cf.is_zero_dimensional(), || "-".into(), || "C L is not Boolean".into());
    let r = validate_hom(f, cf, asm.nabla_map());
    t.check(r.is_ok(), || "∇".into(), || r.unwrap_err().to_string());
    t.check(asm.nabla_hom().is_injective(), || "∇".into(), || "∇ is not injective".into());
    for a in f.elements() {
        let (n, d) = (asm.nabla(a), asm.delta(a));
        t.check(cf.meet(n, d) == cf.bottom() && cf.join(n, d) == cf.top(), || format!("a = {a}"), || {
            "∇_a and Δ_a are not complements in C L".into()
        });
    }
}

fn named_counts(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let e = &ctx.corpus.lattices[i];
    let Some(asm) = ctx.assembly(i, t) else { return };
    if let Some(n) = e.provenance.strip_prefix("chain(").and_then(|r| r.strip_suffix(')')) {
        let n: u32 = n.parse().expect("chain provenance");
        t.check(asm.size() == 1 << (n - 1), || e.provenance.clone(), || {
            format!("|C| = {}, expected 2^{}", asm.size(), n - 1)
        });
    }
    if let Some(k) = e.provenance.strip_prefix("boolean(").and_then(|r| r.strip_suffix(')')) {
        let k: u32 = k.parse().expect("boolean provenance");
        t.check(asm.size() == 1 << k && asm.nabla_is_isomorphism(), || e.provenance.clone(), || {
            format!("|C| = {}, expected 2^{k} with ∇ an isomorphism", asm.size())
        });
    }
    // ∇ is an isomorphism exactly for Boolean frames
    t.check(asm.nabla_is_isomorphism() == ctx.frame(i).is_boolean(), || "-".into(), || {
        "∇ is an isomorphism iff L is Boolean fails".into()
    });
}

fn universal_property(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Pair(i, j) = inst else { return };
    let (l, m) = (ctx.frame(i), ctx.frame(j));
    let Some(asm) = ctx.assembly(i, t) else { return };
    let outer = enumerate_homs(asm.frame(), m);
    for f in enumerate_homs(l, m) {
        let complemented = f.iter().all(|&y| m.complement(y).is_some());
        let extensions = outer
            .iter()
            .filter(|g| l.elements().all(|x| g[asm.nabla(x)] == f[x]))
            .count();
        if !t.check(extensions == usize::from(complemented), || format!("f = {f:?}"), || {
            format!("{extensions} extensions along ∇ (complemented image: {complemented})")
        }) {
            return;
        }
    }
    // ∇ is epic: homs out of C L are determined by their restriction
    let mut restrictions: Vec<Vec<usize>> = outer
        .iter()
        .map(|g| l.elements().map(|x| g[asm.nabla(x)]).collect())
        .collect();
    restrictions.sort();
    let before = restrictions.len();
    restrictions.dedup();
    t.check(before == restrictions.len(), || "-".into(), || "two homs agree after ∇".into());
}

fn functor_laws(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Hom(h) = inst else { return };
    let f = ctx.hom(h);
    let (i, j) = ctx.corpus.hom_ends[h];
    let (Some(a), Some(b)) = (ctx.assembly(i, t), ctx.assembly(j, t)) else { return };
    let cf = match functor_on_hom(f, a, b) {
        Ok(cf) => cf,
        Err(e) => return t.fail("C f", e.to_string()),
    };
    let base = f.source();
    t.check(base.elements().all(|x| cf.apply(a.nabla(x)) == b.nabla(f.apply(x))), || "-".into(), || {
        "C f ∘ ∇ ≠ ∇ ∘ f".into()
    });
    if f.map().iter().enumerate().all(|(x, &y)| x == y) && i == j {
        t.check(cf.map() == FrameHom::identity(a.frame().clone()).map(), || "-".into(), || {
            "C id ≠ id".into()
        });
    }
    for (h2, &(j2, k)) in ctx.corpus.hom_ends.iter().enumerate() {
        if j2 != j || !ctx.homs.contains(&h2) {
            continue;
        }
        let g = ctx.hom(h2);
        let Some(c) = ctx.assembly(k, t) else { return };
        let gf = f.then(g).expect("composable");
        let lhs = functor_on_hom(&gf, a, c).expect("assembled");
        let cg = functor_on_hom(g, b, c).expect("assembled");
        let rhs = cf.then(&cg).expect("composable");
        if !t.check(lhs == rhs, || format!("g = {}", ctx.corpus.homs[h2].name), || {
            "C(g ∘ f) ≠ C g ∘ C f".into()
        }) {
            return;
        }
    }
}

fn kernel_law(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Hom(h) = inst else { return };
    let f = ctx.hom(h);
    let (i, j) = ctx.corpus.hom_ends[h];
    let (Some(a), Some(b)) = (ctx.assembly(i, t), ctx.assembly(j, t)) else { return };
    let cf = functor_on_hom(f, a, b).expect("assembled");
    let kf = a.index_of(&f.kernel()).expect("kernel is assembled");
    let lifted = Congruence::nabla(a.frame(), kf);
    let kcf = cf.kernel();
    t.check(kcf.closure() == lifted, || "-".into(), || {
        format!("cl(ker C f) = {} but ∇_(ker f) = {}", show(&kcf.closure()), show(&lifted))
    });
    if f.is_surjective() {
        t.check(kcf == lifted, || "surjective".into(), || "ker C f ≠ ∇_(ker f)".into());
    }
}

fn kernel_of_quotients(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    let outer = match assemble(asm.frame(), ctx.cfg.budget) {
        Ok(o) => o,
        Err(e) => return t.fail("assemble C L", e.to_string()),
    };
    for d in congruences(&outer) {
        let q = d.quotient();
        let ok = kernel_closure_check(&q.map, asm).expect("source is the assembly");
        if !t.check(ok, || format!("quotient by {}", show(d)), || "cl(ker φ) ≠ ∇_(ker(φ∘∇))".into()) {
            return;
        }
    }
}

fn quotient_isomorphism(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    for c in congruences(asm) {
        match quotient_iso(asm, c, ctx.cfg.budget) {
            Ok(q) => {
                if !t.check(q.holds(), || format!("C = {}", show(c)), || {
                    format!(
                        "kernel closed: {}, isomorphism: {}, parts preserved: {}",
                        q.kernel_is_closed_congruence, q.is_isomorphism, q.preserves_parts
                    )
                }) {
                    return;
                }
            }
            Err(e) => return t.fail(format!("C = {}", show(c)), e.to_string()),
        }
    }
}

fn tower_stabilizes(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    match tower(f, 3, ctx.cfg.budget) {
        Ok(tw) => {
            let expected = if f.is_boolean() { 0 } else { 1 };
            t.check(tw.stable_at == Some(expected), || "3 steps".into(), || {
                format!("stable at {:?}, sizes {:?}", tw.stable_at, tw.sizes())
            });
        }
        Err(e) => t.fail("3 steps", e.to_string()),
    }
}

// ---------------------------------------------------------------- clear-dense

fn dense_formula(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let d = Congruence::largest_dense(f);
    let annihilates = |a: usize, x: usize| f.meet(a, x) == f.bottom();
    for a in f.elements() {
        for b in f.elements() {
            let quantified = f.elements().all(|x| annihilates(a, x) == annihilates(b, x));
            if !t.check(d.related(a, b) == quantified, || format!("(a, b) = ({a}, {b})"), || {
                "ker(x ↦ x**) disagrees with the quantified formula".into()
            }) {
                return;
            }
        }
    }
    let Some(asm) = ctx.assembly(i, t) else { return };
    for c in congruences(asm) {
        t.check(c.is_dense() == c.leq(&d), || format!("C = {}", show(c)), || {
            "D is not the largest dense congruence".into()
        });
    }
}

fn clear_formula(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let Some(asm) = ctx.assembly(i, t) else { return };
    for a in f.elements() {
        let c = Congruence::clear(f, a);
        for x in f.elements() {
            for y in f.elements() {
                let quantified = f
                    .elements()
                    .all(|z| f.leq(f.meet(x, z), a) == f.leq(f.meet(y, z), a));
                if !t.check(c.related(x, y) == quantified, || format!("a = {a}, (x, y) = ({x}, {y})"), || {
                    "ker(x ↦ x → a) disagrees with the quantified formula".into()
                }) {
                    return;
                }
            }
        }
        // ∂_a is the largest congruence dense in ∇_a
        let na = Congruence::nabla(f, a);
        let largest = congruences(asm)
            .iter()
            .filter(|e| na.leq(e) && e.closure() == na)
            .fold(na.clone(), |acc, e| acc.join(e).unwrap());
        t.check(largest == c, || format!("a = {a}"), || {
            format!("largest congruence dense in ∇_a is {}, ∂_a is {}", show(&largest), show(&c))
        });
    }
}

fn clear_decomposition(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let Some(asm) = ctx.assembly(i, t) else { return };
    for c in congruences(asm) {
        let m = c
            .clear_decomposition()
            .into_iter()
            .fold(Congruence::full(f), |acc, a| acc.meet(&Congruence::clear(f, a)).unwrap());
        if !t.check(&m == c, || format!("C = {}", show(c)), || {
            format!("meet of clear congruences above C is {}", show(&m))
        }) {
            return;
        }
    }
}

fn dense_join(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    let Some(asm) = ctx.assembly(i, t) else { return };
    let d = Congruence::largest_dense(f);
    for c in congruences(asm) {
        let lhs = d.join(c).unwrap();
        let rhs = c.join_with_largest_dense();
        if !t.check(lhs == rhs, || format!("C = {}", show(c)), || {
            format!("D ∨ C = {}, ∂_(a**) = {}", show(&lhs), show(&rhs))
        }) {
            return;
        }
    }
}

fn boolean_iff_clear(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    for c in congruences(asm) {
        let boolean = c.quotient().frame.is_boolean();
        if !t.check(boolean == c.is_clear(), || format!("C = {}", show(c)), || {
            format!("quotient Boolean: {boolean}, clear: {}", c.is_clear())
        }) {
            return;
        }
    }
}

fn beazer_macnab(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    for a in f.elements() {
        let clear = Congruence::clear(f, a);
        let b = match beazer_macnab_witness(f, a) {
            Ok(b) => b,
            Err(e) => return t.fail(format!("a = {a}"), e.to_string()),
        };
        // least among c ≥ a with (c, 1) ∈ ∂_a, read off the relation itself
        let least = f
            .elements()
            .filter(|&c| f.leq(a, c) && clear.related(c, f.top()))
            .all(|c| f.leq(b, c));
        let decomposed = Congruence::nabla(f, a).join(&Congruence::delta(f, b)).unwrap();
        t.check(least && clear.related(b, f.top()) && decomposed == clear, || format!("a = {a}"), || {
            format!("b = {b}: ∇_a ∨ Δ_b = {}, ∂_a = {}", show(&decomposed), show(&clear))
        });
    }
}

fn rarity(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    let cf = asm.frame();
    for (k, c) in congruences(asm).iter().enumerate() {
        let dense_element = cf.pseudocomplement(k) == cf.bottom();
        let rare = c.is_rare();
        if !t.check(rare == dense_element && rare == c.is_full(), || format!("C = {}", show(c)), || {
            format!("interval criterion: {rare}, dense in C L: {dense_element}")
        }) {
            return;
        }
    }
}

fn smoothness(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    t.check(asm.smooth_congruences().len() == asm.size(), || "-".into(), || {
        "some congruence is not smooth".into()
    });
}

// ---------------------------------------------------------------- biframe

fn congruence_biframe_str0d(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    let b = congruence_biframe(asm);
    let r = validate_biframe(&b);
    t.check(r.is_ok(), || "-".into(), || r.unwrap_err().to_string());
    t.check(b.is_strictly_zero_dimensional(), || "-".into(), || "not strictly zero-dimensional".into());
    // D of a Boolean frame is trivial
    t.check(Congruence::largest_dense(asm.frame()).is_diagonal(), || "D on C L".into(), || {
        "C L has a non-trivial dense congruence".into()
    });
}

fn str0d_unique(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    match str0d_biframes_over(ctx.frame(i), ctx.cfg.budget) {
        Ok(list) => {
            let cb = congruence_biframe(asm);
            t.check(list.len() == 1 && is_biframe_isomorphic(&list[0], &cb), || "-".into(), || {
                format!("{} strictly zero-dimensional biframes", list.len())
            });
        }
        Err(e) => t.fail("-", e.to_string()),
    }
}

fn adjunction(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Pair(i, j) = inst else { return };
    let Some(bj) = ctx.assembly(j, t) else { return };
    let b = congruence_biframe(bj);
    match adjunction_check(ctx.frame(i), &b, ctx.cfg.budget) {
        Ok(r) => {
            t.check(r.bijective, || format!("B = C({})", ctx.name(j)), || format!("{r:?}"));
        }
        Err(e) => t.fail("-", e.to_string()),
    }
}

fn check_congruentiality(b: &Biframe, budget: u64, t: &mut Tally) {
    match congruentiality(b, budget) {
        Ok(r) => {
            t.check(r.agree() && r.chi_injective, || "-".into(), || format!("{r:?}"));
        }
        Err(e) => t.fail("-", e.to_string()),
    }
}

fn congruentiality_lattices(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    check_congruentiality(&congruence_biframe(asm), ctx.cfg.budget, t);
}

fn congruentiality_skula(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Space(s) = inst else { return };
    let b = match skula_biframe(ctx.space(s), true) {
        Ok(b) => b,
        Err(e) => return t.fail("Skula biframe", e.to_string()),
    };
    t.check(b.is_strictly_zero_dimensional(), || "Skula biframe".into(), || "not strictly zero-dimensional".into());
    check_congruentiality(&b, ctx.cfg.budget, t);
    // every finite strictly zero-dimensional biframe is its own coreflection
    match coreflection(&b, ctx.cfg.budget) {
        Ok(c) => {
            t.check(is_biframe_isomorphic(&c.source, &b), || "χ".into(), || {
                "not isomorphic to the congruence biframe of its first part".into()
            });
        }
        Err(e) => t.fail("χ", e.to_string()),
    }
}

fn clear_elements_vs_congruences(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    let b = congruence_biframe(asm);
    let c = match coreflection(&b, ctx.cfg.budget) {
        Ok(c) => c,
        Err(e) => return t.fail("χ", e.to_string()),
    };
    let chi = c.chi.hom();
    t.check(chi.is_injective() && chi.is_surjective(), || "χ".into(), || "χ is not an isomorphism".into());
    let up = c.right_adjoint();
    let nu: Vec<usize> = chi.map().iter().map(|&y| up[y]).collect();
    let r = check_nucleus(c.assembly.frame(), &nu);
    t.check(r.is_ok(), || "χ_* ∘ χ".into(), || r.unwrap_err().to_string());
    for x in b.total().elements() {
        let lower = c.assembly.congruence(up[x]);
        let ok_clear = b.is_clear_element(x) == lower.is_clear();
        let cl_lower = c.assembly.index_of(&lower.closure()).expect("assembled");
        let ok_closure = up[b.closure(x)] == cl_lower;
        if !t.check(ok_clear && ok_closure, || format!("x = {x}"), || {
            format!("clear element: {ok_clear}, closure commutes with χ_*: {ok_closure}")
        }) {
            return;
        }
    }
}

fn mono_and_epi(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    let b = congruence_biframe(asm);
    let id = BiframeHom::identity(&b);
    t.check(id.is_mono() && id.is_extremal_epi(), || "identity".into(), || "identity is not mono and extremal epi".into());
    let outer = match assemble(asm.frame(), ctx.cfg.budget) {
        Ok(o) => o,
        Err(e) => return t.fail("assemble C L", e.to_string()),
    };
    for k in congruences(&outer) {
        let q = k.quotient();
        let target = quotient_biframe(&b, k);
        let target = Biframe::new(q.frame.clone(), target.part1().clone(), target.part2().clone())
            .expect("quotients of biframes are biframes");
        let h = BiframeHom::new(&b, &target, q.map.clone()).expect("parts map to parts");
        let mono = h.is_mono() == h.is_injective_on_part1() && h.is_mono() == k.is_diagonal();
        let epi = h.is_extremal_epi() == (*k == k.closure());
        if !t.check(mono && epi, || format!("quotient by {}", show(k)), || {
            format!("mono criteria agree: {mono}, extremal epi iff closed kernel: {epi}")
        }) {
            return;
        }
    }
}

fn closed_quotients(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    let b = congruence_biframe(asm);
    let c = match coreflection(&b, ctx.cfg.budget) {
        Ok(c) => c,
        Err(e) => return t.fail("χ", e.to_string()),
    };
    let up = c.right_adjoint();
    for a in b.total().elements() {
        let q = closed_quotient(&b, a).expect("in range");
        let lower = c.assembly.congruence(up[a]);
        let (p1, _) = q.part1_frame();
        let ok = validate_biframe(&q).is_ok()
            && q.is_strictly_zero_dimensional()
            && iso::is_isomorphic(&p1, &lower.quotient().frame);
        if !t.check(ok, || format!("a = {a}"), || "B/∇_a is not strictly zero-dimensional over L/χ_*(a)".into()) {
            return;
        }
    }
}

fn fixpoint_monotonicity(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    let cs = congruences(asm);
    for c in cs {
        for d in cs.iter().filter(|d| c.leq(d)) {
            let fc = c.fixed_points();
            let ok = d.fixed_points().iter().all(|x| fc.contains(x));
            if !t.check(ok, || format!("{} ≤ {}", show(c), show(d)), || "fix(D) ⊄ fix(C)".into()) {
                return;
            }
        }
    }
}

fn induced_sub_biframes(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Hom(h) = inst else { return };
    let f = ctx.hom(h);
    match induced_sub_biframe(f, ctx.cfg.budget) {
        Ok(b) => {
            t.check(f.is_injective() && b.is_strictly_zero_dimensional(), || "-".into(), || {
                "induced sub-biframe is not strictly zero-dimensional".into()
            });
            let (i, j) = ctx.corpus.hom_ends[h];
            if i == j && f.map().iter().enumerate().all(|(x, &y)| x == y) {
                let Some(a) = ctx.assembly(i, t) else { return };
                t.check(is_biframe_isomorphic(&b, &congruence_biframe(a)), || "identity".into(), || {
                    "induced by the identity is not the congruence biframe".into()
                });
            }
        }
        Err(Error::NotInjective(..)) => {
            t.check(!f.is_injective(), || "-".into(), || "injective hom refused".into());
        }
        Err(e) => t.fail("-", e.to_string()),
    }
}

// ---------------------------------------------------------------- spatial

fn spectrum_unit(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let f = ctx.frame(i);
    match sigma(f) {
        Ok(s) => {
            t.check(s.unit_is_isomorphism(f), || "-".into(), || "a ↦ U_a is not an isomorphism".into());
        }
        Err(e) => t.fail("-", e.to_string()),
    }
}

fn prime_congruence_check(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    let (p, q) = (prime_congruences(asm), clear_prime_congruences(asm));
    t.check(p == q, || "-".into(), || format!("primes of C L {p:?}, ∂_p {q:?}"));
}

fn spatial_reflection(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    for c in asm.frame().elements() {
        let s = spatial_reflection_of_quotient(asm, c);
        if !t.check(s == c, || format!("C = {}", show(asm.congruence(c))), || {
            format!("σ(C) = {}", show(asm.congruence(s)))
        }) {
            return;
        }
    }
    t.check(spatial_congruences(asm).len() == asm.size(), || "-".into(), || "not every congruence is spatial".into());
}

fn skula_iso(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Lattice(i) = inst else { return };
    let Some(asm) = ctx.assembly(i, t) else { return };
    match skula_iso_check(asm) {
        Ok(r) => {
            t.check(r.holds(), || "-".into(), || {
                format!("isomorphism: {}, parts preserved: {}", r.is_isomorphism, r.preserves_parts)
            });
        }
        Err(e) => t.fail("-", e.to_string()),
    }
}

fn skula_naturality(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Hom(h) = inst else { return };
    let (i, j) = ctx.corpus.hom_ends[h];
    let (Some(a), Some(b)) = (ctx.assembly(i, t), ctx.assembly(j, t)) else { return };
    match skula_naturality_check(ctx.hom(h), a, b) {
        Ok(ok) => {
            t.check(ok, || "-".into(), || "naturality square does not commute".into());
        }
        Err(e) => t.fail("-", e.to_string()),
    }
}

fn td_separation(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Space(s) = inst else { return };
    match td_separation_check(ctx.space(s)) {
        Ok(r) => {
            t.check(r.holds(), || "-".into(), || format!("{r:?}"));
        }
        Err(e) => t.fail("-", e.to_string()),
    }
}

fn sobriety(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Space(s) = inst else { return };
    let x = ctx.space(s);
    let sober = is_sober(x).expect("finite spaces have spectra");
    t.check(sober == x.is_t0(), || "-".into(), || format!("sober: {sober}, T0: {}", x.is_t0()));
    if !x.is_t0() {
        return;
    }
    let sob = sobrification(x).expect("finite spaces have spectra");
    // sob is a bijection; check it carries opens onto opens
    let image = |u: u64| {
        (0..x.points())
            .filter(|&p| u >> p & 1 == 1)
            .fold(0u64, |m, p| m | 1 << sob.point_map[p])
    };
    let forward = x.opens().iter().all(|&u| sob.space.is_open(image(u)));
    let same_count = x.opens().len() == sob.space.opens().len();
    t.check(forward && same_count, || "sob".into(), || "sob is not a homeomorphism".into());
}

fn subspace_union_meet(ctx: &Ctx, inst: Inst, t: &mut Tally) {
    let Inst::Space(s) = inst else { return };
    let x = ctx.space(s);
    let of = OpenFrame::new(x);
    let subsets = 1u64 << x.points();
    let e: Vec<Congruence> = (0..subsets).map(|a| of.subspace_congruence(a).unwrap()).collect();
    for a in 0..subsets {
        for b in a..subsets {
            let lhs = &e[(a | b) as usize];
            let rhs = e[a as usize].meet(&e[b as usize]).unwrap();
            if !t.check(*lhs == rhs, || format!("A = {}, B = {}", fmt_set(a), fmt_set(b)), || {
                "E_(A∪B) ≠ E_A ∧ E_B".into()
            }) {
                return;
            }
        }
    }
}

fn properties() -> Vec<Property> {
    use Domain::*;
    use Suite::*;
    let p = |suite, name, domain, run: CheckFn| Property { suite, name, domain, run };
    vec![
        p(Formulas, "nabla-closed-formula", Lattices, nabla_formula),
        p(Formulas, "delta-closed-formula", Lattices, delta_formula),
        p(Formulas, "principal-formula", Lattices, principal_formula),
        p(Formulas, "join-with-nabla-formula", Lattices, join_with_nabla_formula),
        p(Formulas, "join-with-delta-formula", Lattices, join_with_delta_formula),
        p(Formulas, "join-nucleus-vs-closure", Lattices, join_routes),
        p(Formulas, "closure-vs-partition-scan", SmallLattices(oracle::MAX_ORACLE_SIZE), closure_vs_oracle),
        p(Formulas, "random-pair-sets", Lattices, random_pair_sets),
        p(Formulas, "nabla-delta-complements", Lattices, complements),
        p(Formulas, "nabla-injective-homomorphism", Lattices, nabla_homomorphism),
        p(Nuclei, "nucleus-laws", Lattices, nucleus_laws),
        p(Nuclei, "hom-kernels", Homs, hom_kernels),
        p(Nuclei, "fixtures", Fixtures, fixtures),
        p(Assembly, "count-is-2^|J|", Lattices, assembly_count),
        p(Assembly, "count-vs-partition-scan", SmallLattices(oracle::MAX_ORACLE_SIZE), assembly_vs_oracle),
        p(Assembly, "boolean-and-complemented", Lattices, assembly_boolean),
        p(Assembly, "chain-and-boolean-counts", Lattices, named_counts),
        p(Assembly, "universal-property", Pairs(4), universal_property),
        p(Assembly, "functor-laws", Homs, functor_laws),
        p(Assembly, "kernel-of-C-f", Homs, kernel_law),
        p(Assembly, "kernel-of-quotients", Lattices, kernel_of_quotients),
        p(Assembly, "quotient-isomorphism", SmallLattices(6), quotient_isomorphism),
        p(Assembly, "tower-stabilizes", Lattices, tower_stabilizes),
        p(ClearDense, "dense-formula", Lattices, dense_formula),
        p(ClearDense, "clear-formula", Lattices, clear_formula),
        p(ClearDense, "clear-decomposition", Lattices, clear_decomposition),
        p(ClearDense, "dense-join", Lattices, dense_join),
        p(ClearDense, "boolean-quotient-iff-clear", Lattices, boolean_iff_clear),
        p(ClearDense, "beazer-macnab", Lattices, beazer_macnab),
        p(ClearDense, "rare-iff-dense-in-C-L", Lattices, rarity),
        p(ClearDense, "all-smooth", Lattices, smoothness),
        p(Biframe, "congruence-biframe-str0d", Lattices, congruence_biframe_str0d),
        p(Biframe, "unique-str0d-over-L", Lattices, str0d_unique),
        p(Biframe, "adjunction", AdjunctionPairs, adjunction),
        p(Biframe, "congruentiality-routes", Lattices, congruentiality_lattices),
        p(Biframe, "skula-congruential", Spaces, congruentiality_skula),
        p(Biframe, "clear-elements-via-chi", Lattices, clear_elements_vs_congruences),
        p(Biframe, "mono-and-extremal-epi", Lattices, mono_and_epi),
        p(Biframe, "closed-quotients", Lattices, closed_quotients),
        p(Biframe, "fixpoint-monotonicity", Lattices, fixpoint_monotonicity),
        p(Biframe, "induced-sub-biframes", Homs, induced_sub_biframes),
        p(Spatial, "spectrum-unit-iso", Lattices, spectrum_unit),
        p(Spatial, "prime-congruences", Lattices, prime_congruence_check),
        p(Spatial, "spatial-reflection-trivial", Lattices, spatial_reflection),
        p(Spatial, "skula-iso", Lattices, skula_iso),
        p(Spatial, "skula-naturality", Homs, skula_naturality),
        p(Spatial, "td-iff-separation", Spaces, td_separation),
        p(Spatial, "sober-iff-t0", Spaces, sobriety),
        p(Spatial, "subspace-union-meet", Spaces, subspace_union_meet),
    ]
}

/// Names of every property, in report order.
pub fn property_names() -> Vec<(Suite, &'static str)> {
    properties().iter().map(|p| (p.suite, p.name)).collect()
}

/// Runs the configured suites over the pinned corpus.
pub fn run(cfg: &CheckConfig, command: &str) -> Result<RunReport> {
    let corpus = corpus()?;
    run_on(&corpus, cfg, command)
}

pub fn run_on(corpus: &Corpus, cfg: &CheckConfig, command: &str) -> Result<RunReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    pool.install(|| run_in_pool(corpus, cfg, command))
}

fn run_in_pool(corpus: &Corpus, cfg: &CheckConfig, command: &str) -> Result<RunReport> {
    let lattices: Vec<usize> = corpus.lattices_up_to(cfg.max_size).map(|(i, _)| i).collect();
    let spaces: Vec<usize> = corpus
        .spaces
        .iter()
        .enumerate()
        .filter(|(_, e)| e.space().unwrap().points() <= cfg.max_size)
        .map(|(i, _)| i)
        .collect();
    let homs: Vec<usize> = corpus
        .hom_ends
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| lattices.contains(&i) && lattices.contains(&j))
        .map(|(h, _)| h)
        .collect();
    let assemblies: Vec<Option<std::result::Result<Assembly, Error>>> = corpus
        .lattices
        .par_iter()
        .enumerate()
        .map(|(i, e)| lattices.contains(&i).then(|| assemble(e.frame().unwrap(), cfg.budget)))
        .collect();
    let ctx = Ctx {
        corpus,
        cfg,
        lattices,
        spaces,
        homs,
        assemblies,
    };
    let props: Vec<Property> = properties()
        .into_iter()
        .filter(|p| cfg.suites.contains(&p.suite))
        .filter(|p| cfg.only.is_empty() || cfg.only.iter().any(|n| n == p.name))
        .collect();
    let tasks: Vec<(usize, Inst)> = props
        .iter()
        .enumerate()
        .flat_map(|(k, p)| ctx.instances(p.domain).into_iter().map(move |inst| (k, inst)))
        .collect();
    let outcomes: Vec<Tally> = tasks
        .par_iter()
        .map(|&(k, inst)| {
            let mut t = Tally::default();
            (props[k].run)(&ctx, inst, &mut t);
            t
        })
        .collect();
    let mut reports: Vec<PropertyReport> = props
        .iter()
        .map(|p| PropertyReport {
            suite: p.suite,
            name: p.name,
            instances: 0,
            checks: 0,
            failed_instances: 0,
            first_failure: None,
        })
        .collect();
    for (&(k, inst), t) in tasks.iter().zip(&outcomes) {
        let r = &mut reports[k];
        r.instances += 1;
        r.checks += t.checks;
        if let Some((inputs, detail)) = &t.failure {
            r.failed_instances += 1;
            if r.first_failure.is_none() {
                let (instance, instance_file) = ctx.describe(inst);
                r.first_failure = Some(Failure {
                    instance,
                    inputs: inputs.clone(),
                    detail: detail.clone(),
                    instance_file,
                });
            }
        }
    }
    let mut notes = Vec::new();
    if cfg.suites.contains(&Suite::Spatial) && cfg.only.is_empty() {
        notes.push(intersection_note(&ctx));
    }
    let hash = corpus.content_hash();
    Ok(RunReport {
        command: command.to_string(),
        corpus_pinned: hash == pinned_hash(),
        corpus_hash: hash,
        lattices: ctx.lattices.len(),
        spaces: ctx.spaces.len(),
        homs: ctx.homs.len(),
        properties: reports,
        notes,
    })
}

/// Searches the spaces in range for `E_{A∩B} ≠ E_A ∨ E_B`, separately among
/// `T0` and non-`T0` spaces.
fn intersection_note(ctx: &Ctx) -> String {
    let found: Vec<Option<(u64, u64)>> = ctx
        .spaces
        .par_iter()
        .map(|&s| intersection_join_counterexample(ctx.space(s)).expect("at most 8 points"))
        .collect();
    let first = |t0: bool| {
        ctx.spaces
            .iter()
            .zip(&found)
            .find(|(&s, w)| w.is_some() && ctx.space(s).is_t0() == t0)
            .map(|(&s, w)| {
                let (a, b) = w.unwrap();
                format!("{} with A = {}, B = {}", ctx.corpus.spaces[s].name, fmt_set(a), fmt_set(b))
            })
    };
    let t0_count = ctx.spaces.iter().filter(|&&s| ctx.space(s).is_t0()).count();
    format!(
        "E_(A∩B) = E_A ∨ E_B fails on {}; among the {} T0 spaces: {}",
        first(false).unwrap_or_else(|| "no non-T0 space".into()),
        t0_count,
        first(true).map_or_else(|| "never fails".to_string(), |w| format!("fails on {w}"))
    )
}
