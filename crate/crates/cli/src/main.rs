//! `framecalc`: command-line front end.
//!
//! Exit codes: 0 success, 2 parse error, 3 validation error, 4 size budget
//! exceeded, 5 property failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use framecalc::assembly::{assemble, tower};
use framecalc::biframe::{congruentiality, validate_biframe};
use framecalc::catalog::{self, named, CatalogEntry, Payload};
use framecalc::check::{self, CheckConfig, NucleusFixture, Suite};
use framecalc::format::{self, ParseError};
use framecalc::order::iso;
use framecalc::spatial::{is_sober, sigma, skula_biframe, sobrification};
use framecalc::{Biframe, Congruence, Error, FiniteSpace, Frame, FrameHom, DEFAULT_BUDGET};

#[derive(Parser, Debug)]
#[command(name = "framecalc", version, about = "Finite frames, congruences, biframes and spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Inputs are file paths; `@name` reads a catalog entry instead, e.g.
/// `@chain(3)` or `@sierpinski_space`.
#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a .lat, .hom, .spc, .bif or .cng file.
    Validate {
        input: String,
        /// Replace biframe parts by the sub-lattices they generate.
        #[arg(long)]
        close_parts: bool,
        #[arg(long)]
        json: bool,
    },
    /// Summary invariants of a lattice, space or biframe.
    Info {
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Assemble the congruence frame.
    Assembly {
        input: String,
        #[arg(long, env = "FRAMECALC_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Report the sizes of `L, C L, ..., C^(k-1) L`.
        #[arg(long, value_name = "K")]
        tower: Option<usize>,
        /// Write the Hasse diagram of C L in DOT.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
        /// Write JSON; `-` for standard output.
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Print a congruence as sorted blocks.
    Congruence {
        input: String,
        #[command(flatten)]
        which: Which,
        /// Write the congruence as a .cng file.
        #[arg(long, value_name = "OUT")]
        out: Option<PathBuf>,
    },
    /// Print the quotient lattice file.
    Quotient {
        input: String,
        #[command(flatten)]
        which: Which,
    },
    /// Print the spectrum of a lattice as a space file.
    Spectrum { input: String },
    /// Print the sobrification of a space.
    Sobrify { input: String },
    /// Print the Skula biframe of a space.
    Skula {
        input: String,
        /// Pass to the T0 reflection first.
        #[arg(long)]
        reflect: bool,
    },
    /// Run property suites over the pinned corpus.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, env = "FRAMECALC_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Extra .cng congruences for the nuclei suite.
        #[arg(long = "fixture", value_name = "CNG")]
        fixtures: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Corpus operations.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    /// Write every lattice, space and hom to a directory, with a manifest.
    Export { dir: PathBuf },
    /// Print the corpus content hash and whether it matches the pinned one.
    Hash,
}

/// Which congruence to compute; exactly one option.
#[derive(clap::Args, Debug)]
#[group(required = true, multiple = false)]
struct Which {
    /// Least congruence containing the pairs, `a,b;c,d`.
    #[arg(long)]
    pairs: Option<String>,
    /// `∇_a`, collapsing `[0, a]`.
    #[arg(long, value_name = "A")]
    nabla: Option<usize>,
    /// `Δ_a`, collapsing `[a, 1]`.
    #[arg(long, value_name = "A")]
    delta: Option<usize>,
    /// `∂_I` for the ideal generated by the listed elements, e.g. `"1 2"`.
    #[arg(long, value_name = "ELEMENTS")]
    clear: Option<String>,
    /// The largest dense congruence.
    #[arg(long)]
    dense: bool,
}

enum Failure {
    Parse(String),
    Validation(String),
    Budget(String),
    Property,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Budget(_) => 4,
            Failure::Property => 5,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeBudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn parse_failure(path: &str, e: ParseError) -> Failure {
    Failure::Parse(format!("{path}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli.command);
    eprintln!("time: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Parse(m) => eprintln!("parse error: {m}"),
                Failure::Validation(m) => eprintln!("validation error: {m}"),
                Failure::Budget(m) => eprintln!("budget error: {m}"),
                Failure::Property => {}
            }
            ExitCode::from(f.code())
        }
    }
}

/// A loaded input.
enum Input {
    Lattice(String, Arc<Frame>),
    Space(String, FiniteSpace),
    Hom(String, String, FrameHom),
    Biframe(String, Biframe),
    Congruence(String, Congruence),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FileKind {
    Lat,
    Hom,
    Spc,
    Bif,
    Cng,
}

fn file_kind(path: &str, text: &str) -> FileKind {
    match Path::new(path).extension().and_then(|e| e.to_str()) {
        Some("hom") => return FileKind::Hom,
        Some("spc") => return FileKind::Spc,
        Some("bif") => return FileKind::Bif,
        Some("cng") => return FileKind::Cng,
        Some("lat") => return FileKind::Lat,
        _ => {}
    }
    let has = |kind: &str| text.lines().any(|l| l.split_whitespace().next() == Some(kind));
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split_whitespace().next());
    match header {
        Some("hom") => FileKind::Hom,
        Some("spc") => FileKind::Spc,
        _ if has("nucleus") => FileKind::Cng,
        _ if has("part1") || has("part2") => FileKind::Bif,
        _ => FileKind::Lat,
    }
}

fn catalog_input(name: &str) -> Outcome<Input> {
    let e: CatalogEntry = named(name)?;
    match e.payload {
        Payload::Lattice(f) => Ok(Input::Lattice(e.name, f)),
        Payload::Space(s) => Ok(Input::Space(e.name, s)),
        Payload::Hom(f) => Ok(Input::Hom(e.name.clone(), e.name, f)),
        Payload::ExpectReject(p) => Ok(Input::Lattice(e.name, Arc::new(Frame::from_poset(p)?))),
    }
}

fn read(path: &str) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{path}: {e}")))
}

/// Resolves a lattice named in a hom header: a sibling `<name>.lat` file, or
/// a catalog entry.
fn resolve_lattice(dir: &Path, name: &str) -> Outcome<Arc<Frame>> {
    let sibling = dir.join(format!("{name}.lat"));
    if sibling.exists() {
        let p = sibling.to_string_lossy().into_owned();
        let doc = format::parse_lat(&read(&p)?).map_err(|e| parse_failure(&p, e))?;
        return Ok(Arc::new(doc.build()?));
    }
    match catalog_input(name)? {
        Input::Lattice(_, f) => Ok(f),
        _ => Err(Failure::Validation(format!("`{name}` is not a lattice"))),
    }
}

fn load(path: &str, close_parts: bool) -> Outcome<Input> {
    if let Some(name) = path.strip_prefix('@') {
        return catalog_input(name);
    }
    let text = read(path)?;
    let pe = |e| parse_failure(path, e);
    Ok(match file_kind(path, &text) {
        FileKind::Lat => {
            let doc = format::parse_lat(&text).map_err(pe)?;
            Input::Lattice(doc.name.clone(), Arc::new(doc.build()?))
        }
        FileKind::Spc => {
            let doc = format::parse_spc(&text).map_err(pe)?;
            Input::Space(doc.name.clone(), doc.build()?)
        }
        FileKind::Bif => {
            let doc = format::parse_bif(&text).map_err(pe)?;
            Input::Biframe(doc.lat.name.clone(), doc.build(close_parts)?)
        }
        FileKind::Cng => {
            let doc = format::parse_cng(&text).map_err(pe)?;
            let (_, c) = doc.build()?;
            Input::Congruence(doc.lat.name.clone(), c?)
        }
        FileKind::Hom => {
            let doc = format::parse_hom(&text).map_err(pe)?;
            let dir = Path::new(path).parent().unwrap_or(Path::new("."));
            let src = resolve_lattice(dir, &doc.source)?;
            let dst = resolve_lattice(dir, &doc.target)?;
            Input::Hom(doc.source.clone(), doc.target.clone(), doc.build(src, dst)?)
        }
    })
}

fn load_lattice(path: &str) -> Outcome<(String, Arc<Frame>)> {
    match load(path, false)? {
        Input::Lattice(n, f) => Ok((n, f)),
        _ => Err(Failure::Validation(format!("{path}: expected a lattice"))),
    }
}

fn load_space(path: &str) -> Outcome<(String, FiniteSpace)> {
    match load(path, false)? {
        Input::Space(n, s) => Ok((n, s)),
        _ => Err(Failure::Validation(format!("{path}: expected a space"))),
    }
}

fn emit(json_mode: bool, text: &str, value: Value) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).expect("json values serialise"));
    } else {
        print!("{text}");
    }
}

fn write_out(path: &Path, contents: &str) -> Outcome {
    if path == Path::new("-") {
        print!("{contents}");
        return Ok(());
    }
    std::fs::write(path, contents).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { input, close_parts, json } => cmd_validate(&input, close_parts, json),
        Command::Info { input, json } => cmd_info(&input, json),
        Command::Assembly { input, budget, tower, dot, json } => {
            cmd_assembly(&input, budget, tower, dot.as_deref(), json.as_deref())
        }
        Command::Congruence { input, which, out } => {
            let (name, f) = load_lattice(&input)?;
            let c = congruence_of(&f, &which)?;
            let blocks: Vec<String> = c
                .blocks()
                .iter()
                .map(|b| format!("{{{}}}", b.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            println!("blocks {}", blocks.join(","));
            if let Some(out) = out {
                write_out(&out, &format::write_cng(&name, &c))?;
            }
            Ok(())
        }
        Command::Quotient { input, which } => {
            let (name, f) = load_lattice(&input)?;
            let q = congruence_of(&f, &which)?.quotient();
            print!("{}", format::write_lat(&format!("{name}_quotient"), &q.frame));
            Ok(())
        }
        Command::Spectrum { input } => {
            let (name, f) = load_lattice(&input)?;
            let s = sigma(&f)?;
            print!("{}", format::write_spc(&format!("{name}_spectrum"), &s.space));
            Ok(())
        }
        Command::Sobrify { input } => {
            let (name, s) = load_space(&input)?;
            let sob = sobrification(&s)?;
            print!("{}", format::write_spc(&format!("{name}_sober"), &sob.space));
            Ok(())
        }
        Command::Skula { input, reflect } => {
            let (name, s) = load_space(&input)?;
            let b = skula_biframe(&s, reflect)?;
            print!("{}", format::write_bif(&format!("{name}_skula"), &b));
            Ok(())
        }
        Command::Check { suite, max_size, seed, workers, budget, fixtures, json } => {
            cmd_check(&suite, max_size, seed, workers, budget, &fixtures, json)
        }
        Command::Corpus { action } => cmd_corpus(action),
    }
}

fn congruence_of(f: &Arc<Frame>, which: &Which) -> Outcome<Congruence> {
    let check = |a: usize| {
        if a < f.size() {
            Ok(a)
        } else {
            Err(Failure::from(Error::IndexOutOfRange { index: a, size: f.size() }))
        }
    };
    if let Some(p) = &which.pairs {
        let pairs = format::parse_pairs(p).map_err(|e| parse_failure("--pairs", e))?;
        return Ok(Congruence::generated(f, &pairs)?);
    }
    if let Some(a) = which.nabla {
        return Ok(Congruence::nabla(f, check(a)?));
    }
    if let Some(a) = which.delta {
        return Ok(Congruence::delta(f, check(a)?));
    }
    if let Some(items) = &which.clear {
        let mut elements = Vec::new();
        for tok in items.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let a = tok
                .parse()
                .map_err(|_| Failure::Parse(format!("--clear: `{tok}` is not an element")))?;
            elements.push(check(a)?);
        }
        // a finite ideal is principal, generated by the join of its elements
        return Ok(Congruence::clear(f, f.join_all(elements)));
    }
    Ok(Congruence::largest_dense(f))
}

fn list(items: &[usize]) -> String {
    items.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_validate(path: &str, close_parts: bool, json_mode: bool) -> Outcome {
    let input = load(path, close_parts)?;
    let (kind, name) = match &input {
        Input::Lattice(n, f) => {
            // `from_poset` already rejects non-distributive orders; this
            // catches entries that bypassed it (none today)
            Frame::from_poset(f.poset().clone())?;
            ("lattice", n.clone())
        }
        Input::Space(n, _) => ("space", n.clone()),
        Input::Hom(s, t, _) => ("hom", format!("{s} -> {t}")),
        Input::Biframe(n, b) => {
            validate_biframe(b)?;
            ("biframe", n.clone())
        }
        Input::Congruence(n, _) => ("congruence", n.clone()),
    };
    emit(
        json_mode,
        &format!("command: validate {path}\nvalid {kind} {name}\n"),
        json!({ "command": format!("validate {path}"), "kind": kind, "name": name, "valid": true }),
    );
    Ok(())
}

fn cmd_info(path: &str, json_mode: bool) -> Outcome {
    let mut text = format!("command: info {path}\n");
    let value = match load(path, false)? {
        Input::Lattice(name, f) => {
            let j = f.join_irreducibles().to_vec();
            let primes = f.primes();
            let regular: Vec<usize> = f.elements().filter(|&x| f.pseudocomplement(f.pseudocomplement(x)) == x).collect();
            let dense = f.dense_elements();
            let predicted = f.predicted_congruence_count();
            let _ = writeln!(text, "lattice {name}");
            let _ = writeln!(text, "size {}", f.size());
            let _ = writeln!(text, "join-irreducibles {} : {}", j.len(), list(&j));
            let _ = writeln!(text, "primes {} : {}", primes.len(), list(&primes));
            let _ = writeln!(text, "booleanization {} : {}", regular.len(), list(&regular));
            let _ = writeln!(text, "dense {} : {}", dense.len(), list(&dense));
            let _ = writeln!(text, "boolean {}", f.is_boolean());
            let _ = writeln!(text, "predicted |C L| {predicted}");
            json!({
                "kind": "lattice", "name": name, "size": f.size(),
                "join_irreducibles": j, "primes": primes, "booleanization": regular,
                "dense": dense, "boolean": f.is_boolean(), "predicted_congruences": predicted,
            })
        }
        Input::Space(name, s) => {
            let sober = is_sober(&s)?;
            let _ = writeln!(text, "space {name}");
            let _ = writeln!(text, "points {}", s.points());
            let _ = writeln!(text, "opens {}", s.opens().len());
            let _ = writeln!(text, "t0 {}\ntd {}\nsober {sober}", s.is_t0(), s.is_td());
            json!({
                "kind": "space", "name": name, "points": s.points(), "opens": s.opens().len(),
                "t0": s.is_t0(), "td": s.is_td(), "sober": sober,
            })
        }
        Input::Biframe(name, b) => {
            let str0d = b.is_strictly_zero_dimensional();
            let cong = congruentiality(&b, DEFAULT_BUDGET)?;
            let _ = writeln!(text, "biframe {name}");
            let _ = writeln!(text, "size {}", b.total().size());
            let _ = writeln!(text, "part1 {} : {}", b.part1().count_ones(..), list(&b.part1_elements()));
            let _ = writeln!(text, "part2 {} : {}", b.part2().count_ones(..), list(&b.part2_elements()));
            let _ = writeln!(text, "strictly zero-dimensional {str0d}");
            let _ = writeln!(text, "congruential {}", cong.agree() && cong.chi_injective);
            json!({
                "kind": "biframe", "name": name, "size": b.total().size(),
                "part1": b.part1_elements(), "part2": b.part2_elements(),
                "strictly_zero_dimensional": str0d,
                "congruential": cong.agree() && cong.chi_injective,
            })
        }
        Input::Hom(s, t, f) => {
            let _ = writeln!(text, "hom {s} -> {t}");
            let _ = writeln!(text, "injective {}\nsurjective {}", f.is_injective(), f.is_surjective());
            let _ = writeln!(text, "dense {}\ncomplemented image {}", f.is_dense(), f.has_complemented_image());
            json!({
                "kind": "hom", "source": s, "target": t, "injective": f.is_injective(),
                "surjective": f.is_surjective(), "dense": f.is_dense(),
                "complemented_image": f.has_complemented_image(),
            })
        }
        Input::Congruence(name, c) => {
            let _ = writeln!(text, "congruence on {name}");
            let _ = writeln!(text, "blocks {:?}", c.blocks());
            let _ = writeln!(text, "dense {}\nclear {}", c.is_dense(), c.is_clear());
            json!({
                "kind": "congruence", "name": name, "blocks": c.blocks(),
                "dense": c.is_dense(), "clear": c.is_clear(),
            })
        }
    };
    let mut value = value;
    value["command"] = json!(format!("info {path}"));
    emit(json_mode, &text, value);
    Ok(())
}

fn cmd_assembly(path: &str, budget: u64, levels: Option<usize>, dot: Option<&Path>, json_out: Option<&Path>) -> Outcome {
    let (name, f) = load_lattice(path)?;
    let a = assemble(&f, budget)?;
    let mut text = format!("command: assembly {path} --budget {budget}\n");
    let _ = writeln!(text, "congruences {}", a.size());
    let _ = writeln!(text, "boolean {}", a.frame().is_boolean());
    let _ = writeln!(text, "nabla isomorphism {}", a.nabla_is_isomorphism());
    for c in a.congruences() {
        let _ = writeln!(text, "  {:?}", c.blocks());
    }
    let mut value = json!({
        "command": format!("assembly {path}"),
        "name": name,
        "base": format::frame_json(&name, &f),
        "frame": format::frame_json(&format!("C_{name}"), a.frame()),
        "congruences": a.congruences().iter().map(|c| c.blocks()).collect::<Vec<_>>(),
        "size": a.size(),
        "boolean": a.frame().is_boolean(),
        "nabla": a.nabla_map(),
        "delta": a.delta_map(),
    });
    if let Some(k) = levels {
        let t = tower(&f, k.saturating_sub(1), budget).map_err(|e| Failure::from(e.error))?;
        let mut sizes = t.sizes();
        // past the stable level every further level is isomorphic to it
        if t.stable_at.is_some() {
            let last = *sizes.last().expect("non-empty");
            sizes.resize(k.max(sizes.len()), last);
        }
        let stable = t.stable_at.map_or("none".to_string(), |s| s.to_string());
        let _ = writeln!(text, "tower {sizes:?} stable at {stable}");
        value["tower"] = json!({ "sizes": sizes, "stable_at": t.stable_at });
    }
    if let Some(out) = dot {
        let mut labels = vec![String::new(); a.size()];
        for x in f.elements() {
            let n = a.nabla(x);
            labels[n] = push_label(&labels[n], &format!("∇{x}"));
            let d = a.delta(x);
            labels[d] = push_label(&labels[d], &format!("Δ{x}"));
        }
        write_out(out, &format::hasse_dot(&format!("C_{name}"), a.frame(), &labels))?;
    }
    if let Some(out) = json_out {
        let body = serde_json::to_string_pretty(&value).expect("json values serialise") + "\n";
        write_out(out, &body)?;
    }
    let stdout = Path::new("-");
    if dot != Some(stdout) && json_out != Some(stdout) {
        print!("{text}");
    }
    Ok(())
}

fn push_label(old: &str, add: &str) -> String {
    if old.is_empty() {
        add.to_string()
    } else {
        format!("{old} {add}")
    }
}

fn cmd_check(
    suite: &str,
    max_size: usize,
    seed: u64,
    workers: usize,
    budget: u64,
    fixture_paths: &[PathBuf],
    json_mode: bool,
) -> Outcome {
    let suites = Suite::parse(suite).ok_or_else(|| {
        Failure::Parse(format!(
            "unknown suite `{suite}`; expected one of all, {}",
            Suite::ALL.map(Suite::name).join(", ")
        ))
    })?;
    let mut fixtures = Vec::new();
    for p in fixture_paths {
        let ps = p.to_string_lossy().into_owned();
        let source = read(&ps)?;
        let doc = format::parse_cng(&source).map_err(|e| parse_failure(&ps, e))?;
        fixtures.push(NucleusFixture {
            name: ps.clone(),
            frame: Arc::new(doc.lat.build()?),
            nu: doc.nucleus,
            source,
        });
    }
    // the echo leaves out --workers so reports compare equal across counts
    let mut command = format!("check --suite {suite} --max-size {max_size} --seed {seed}");
    for p in fixture_paths {
        let _ = write!(command, " --fixture {}", p.display());
    }
    let cfg = CheckConfig {
        suites,
        max_size,
        seed,
        workers,
        budget,
        fixtures,
        only: Vec::new(),
    };
    let report = check::run(&cfg, &command)?;
    emit(json_mode, &report.to_text(), report.to_json());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn cmd_corpus(action: CorpusAction) -> Outcome {
    let corpus = catalog::corpus()?;
    match action {
        CorpusAction::Hash => {
            let hash = corpus.content_hash();
            let pinned = hash == catalog::pinned_hash();
            println!("{hash} {}", if pinned { "pinned" } else { "MISMATCH" });
            if pinned {
                Ok(())
            } else {
                Err(Failure::Validation("corpus hash differs from the pinned hash".into()))
            }
        }
        CorpusAction::Export { dir } => {
            let io = |e: std::io::Error| Failure::Validation(format!("{}: {e}", dir.display()));
            std::fs::create_dir_all(&dir).map_err(io)?;
            let mut manifest = String::new();
            let _ = writeln!(manifest, "corpus {}", corpus.content_hash());
            for e in &corpus.lattices {
                let f = e.frame().expect("lattice");
                let file = format!("{}.lat", e.name);
                std::fs::write(dir.join(&file), format::write_lat(&e.name, f)).map_err(io)?;
                let form: String = iso::frame_canonical_form(f).iter().map(|&b| if b { '1' } else { '0' }).collect();
                let _ = writeln!(manifest, "{file} {} {}", catalog_hash(&form), e.provenance);
            }
            for e in &corpus.spaces {
                let s = e.space().expect("space");
                let file = format!("{}.spc", e.name);
                std::fs::write(dir.join(&file), format::write_spc(&e.name, s)).map_err(io)?;
                let form: String = iso::canonical_relation(s.points(), |x, y| s.specialization_leq(x, y))
                    .iter()
                    .map(|&b| if b { '1' } else { '0' })
                    .collect();
                let _ = writeln!(manifest, "{file} {} {}", catalog_hash(&form), e.provenance);
            }
            for (e, &(i, j)) in corpus.homs.iter().zip(&corpus.hom_ends) {
                if let Payload::Hom(f) = &e.payload {
                    let file = format!("{}.hom", e.name);
                    let body = format::write_hom(&corpus.lattices[i].name, &corpus.lattices[j].name, f);
                    std::fs::write(dir.join(&file), body).map_err(io)?;
                    let _ = writeln!(manifest, "{file} - {}", e.provenance);
                }
            }
            std::fs::write(dir.join("MANIFEST"), &manifest).map_err(io)?;
            println!(
                "exported {} lattices, {} spaces, {} homs to {}",
                corpus.lattices.len(),
                corpus.spaces.len(),
                corpus.homs.len(),
                dir.display()
            );
            Ok(())
        }
    }
}

fn catalog_hash(form: &str) -> String {
    framecalc::catalog::sha256_hex(form.as_bytes())
}
