//! Line-oriented text formats, plus JSON and DOT export.
//!
//! Every file starts with a header record and continues with one record per
//! line; `#` starts a comment. Parsing only checks syntax and index ranges;
//! the `build` methods run the semantic validation.
//!
//! ```text
//! lat <name> <n>          cover <a> <b>         (.lat)
//! hom <src> <dst>         map <i> <j>           (.hom)
//! spc <name> <points>     open <i> <i> ...      (.spc)
//! <.lat body>             part1 ... / part2 ... (.bif)
//! <.lat body>             nucleus <v0> <v1> ... (.cng)
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::biframe::Biframe;
use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::order::{Frame, FrameHom};
use crate::spatial::FiniteSpace;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

type ParseResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Token<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn number(&self) -> ParseResult<usize> {
        if self.text.is_empty() || !self.text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.error(format!("expected a number, found `{}`", self.text)));
        }
        self.text
            .parse()
            .map_err(|_| self.error(format!("number `{}` is too large", self.text)))
    }

    fn index(&self, size: usize) -> ParseResult<usize> {
        let i = self.number()?;
        if i >= size {
            return Err(self.error(format!("index {i} out of range for size {size}")));
        }
        Ok(i)
    }
}

/// One non-empty line, split into tokens with 1-based columns.
struct Record<'a> {
    tokens: Vec<Token<'a>>,
}

impl<'a> Record<'a> {
    fn kind(&self) -> &'a str {
        self.tokens[0].text
    }

    fn args(&self) -> &[Token<'a>] {
        &self.tokens[1..]
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.tokens[0].error(message)
    }

    fn expect_args(&self, n: usize) -> ParseResult<&[Token<'a>]> {
        let args = self.args();
        if args.len() != n {
            let at = args.get(n).copied().unwrap_or(*self.tokens.last().unwrap());
            return Err(at.error(format!(
                "`{}` takes {n} argument{}, found {}",
                self.kind(),
                if n == 1 { "" } else { "s" },
                args.len()
            )));
        }
        Ok(args)
    }
}

fn records(text: &str) -> Vec<Record<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (col, (pos, ch)) in content.char_indices().enumerate() {
            if ch.is_whitespace() {
                if let Some((s, c)) = start.take() {
                    tokens.push(Token {
                        text: &content[s..pos],
                        line: i + 1,
                        column: c,
                    });
                }
            } else if start.is_none() {
                start = Some((pos, col + 1));
            }
        }
        if let Some((s, c)) = start {
            tokens.push(Token {
                text: &content[s..],
                line: i + 1,
                column: c,
            });
        }
        if !tokens.is_empty() {
            out.push(Record { tokens });
        }
    }
    out
}

fn end_of_input(text: &str) -> ParseError {
    ParseError {
        line: text.lines().count().max(1),
        column: 1,
        message: "missing header record".into(),
    }
}

fn check_name(tok: &Token<'_>) -> ParseResult<String> {
    Ok(tok.text.to_string())
}

/// A parsed lattice file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatDoc {
    pub name: String,
    pub size: usize,
    pub covers: Vec<(usize, usize)>,
}

/// Upper bound on declared sizes, to keep hostile inputs from allocating.
pub const MAX_DECLARED_SIZE: usize = 1 << 16;

fn parse_lat_header(rec: &Record<'_>) -> ParseResult<(String, usize)> {
    if rec.kind() != "lat" {
        return Err(rec.error(format!("expected `lat` header, found `{}`", rec.kind())));
    }
    let args = rec.expect_args(2)?;
    let n = args[1].number()?;
    if n > MAX_DECLARED_SIZE {
        return Err(args[1].error(format!("size {n} exceeds {MAX_DECLARED_SIZE}")));
    }
    Ok((check_name(&args[0])?, n))
}

/// Parses a lattice body and hands unrecognised records to `extra`.
fn parse_lat_with<'a>(
    text: &'a str,
    mut extra: impl FnMut(&Record<'a>, usize) -> ParseResult<bool>,
) -> ParseResult<LatDoc> {
    let recs = records(text);
    let first = recs.first().ok_or_else(|| end_of_input(text))?;
    let (name, size) = parse_lat_header(first)?;
    let mut covers = Vec::new();
    for rec in &recs[1..] {
        match rec.kind() {
            "cover" => {
                let a = rec.expect_args(2)?;
                covers.push((a[0].index(size)?, a[1].index(size)?));
            }
            "lat" => return Err(rec.error("duplicate `lat` header")),
            _ => {
                if !extra(rec, size)? {
                    return Err(rec.error(format!("unknown record `{}`", rec.kind())));
                }
            }
        }
    }
    Ok(LatDoc { name, size, covers })
}

pub fn parse_lat(text: &str) -> ParseResult<LatDoc> {
    parse_lat_with(text, |_, _| Ok(false))
}

impl LatDoc {
    pub fn build(&self) -> Result<Frame> {
        Frame::from_covers(self.size, &self.covers)
    }
}

fn write_lat_body(out: &mut String, name: &str, frame: &Frame) {
    let _ = writeln!(out, "lat {name} {}", frame.size());
    let mut covers = frame.poset().covers().to_vec();
    covers.sort_unstable();
    for (a, b) in covers {
        let _ = writeln!(out, "cover {a} {b}");
    }
}

pub fn write_lat(name: &str, frame: &Frame) -> String {
    let mut out = String::new();
    write_lat_body(&mut out, name, frame);
    out
}

/// A parsed homomorphism file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomDoc {
    pub source: String,
    pub target: String,
    /// `(i, j)` records in file order.
    pub entries: Vec<(usize, usize)>,
}

pub fn parse_hom(text: &str) -> ParseResult<HomDoc> {
    let recs = records(text);
    let first = recs.first().ok_or_else(|| end_of_input(text))?;
    if first.kind() != "hom" {
        return Err(first.error(format!("expected `hom` header, found `{}`", first.kind())));
    }
    let args = first.expect_args(2)?;
    let (source, target) = (check_name(&args[0])?, check_name(&args[1])?);
    let mut entries = Vec::new();
    for rec in &recs[1..] {
        match rec.kind() {
            "map" => {
                let a = rec.expect_args(2)?;
                let i = a[0].index(MAX_DECLARED_SIZE)?;
                if entries.iter().any(|&(x, _)| x == i) {
                    return Err(a[0].error(format!("element {i} mapped twice")));
                }
                entries.push((i, a[1].index(MAX_DECLARED_SIZE)?));
            }
            "hom" => return Err(rec.error("duplicate `hom` header")),
            other => return Err(rec.error(format!("unknown record `{other}`"))),
        }
    }
    Ok(HomDoc {
        source,
        target,
        entries,
    })
}

impl HomDoc {
    pub fn build(&self, source: Arc<Frame>, target: Arc<Frame>) -> Result<FrameHom> {
        let mut map = vec![usize::MAX; source.size()];
        for &(i, j) in &self.entries {
            if i >= source.size() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    size: source.size(),
                });
            }
            if j >= target.size() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    size: target.size(),
                });
            }
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(Error::Precondition(format!("element {i} has no image")));
        }
        FrameHom::new(source, target, map)
    }
}

pub fn write_hom(source: &str, target: &str, f: &FrameHom) -> String {
    let mut out = format!("hom {source} {target}\n");
    for (i, j) in f.map().iter().enumerate() {
        let _ = writeln!(out, "map {i} {j}");
    }
    out
}

/// A parsed space file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpcDoc {
    pub name: String,
    pub points: usize,
    pub opens: Vec<u64>,
}

pub fn parse_spc(text: &str) -> ParseResult<SpcDoc> {
    let recs = records(text);
    let first = recs.first().ok_or_else(|| end_of_input(text))?;
    if first.kind() != "spc" {
        return Err(first.error(format!("expected `spc` header, found `{}`", first.kind())));
    }
    let args = first.expect_args(2)?;
    let name = check_name(&args[0])?;
    let points = args[1].number()?;
    if points > crate::spatial::MAX_POINTS {
        return Err(args[1].error(format!(
            "at most {} points are supported",
            crate::spatial::MAX_POINTS
        )));
    }
    let mut opens = Vec::new();
    for rec in &recs[1..] {
        match rec.kind() {
            "open" => {
                let mut mask = 0u64;
                for t in rec.args() {
                    mask |= 1 << t.index(points)?;
                }
                opens.push(mask);
            }
            "spc" => return Err(rec.error("duplicate `spc` header")),
            other => return Err(rec.error(format!("unknown record `{other}`"))),
        }
    }
    Ok(SpcDoc {
        name,
        points,
        opens,
    })
}

impl SpcDoc {
    pub fn build(&self) -> Result<FiniteSpace> {
        FiniteSpace::new(self.points, self.opens.clone())
    }
}

fn write_points(out: &mut String, kind: &str, items: impl IntoIterator<Item = usize>) {
    out.push_str(kind);
    for i in items {
        let _ = write!(out, " {i}");
    }
    out.push('\n');
}

pub fn write_spc(name: &str, space: &FiniteSpace) -> String {
    let mut out = format!("spc {name} {}\n", space.points());
    for &u in space.opens() {
        write_points(&mut out, "open", (0..space.points()).filter(|&i| u >> i & 1 == 1));
    }
    out
}

/// A parsed biframe file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BifDoc {
    pub lat: LatDoc,
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
}

pub fn parse_bif(text: &str) -> ParseResult<BifDoc> {
    let mut parts: [Option<Vec<usize>>; 2] = [None, None];
    let lat = parse_lat_with(text, |rec, size| {
        let slot = match rec.kind() {
            "part1" => 0,
            "part2" => 1,
            _ => return Ok(false),
        };
        if parts[slot].is_some() {
            return Err(rec.error(format!("duplicate `{}` record", rec.kind())));
        }
        parts[slot] = Some(
            rec.args()
                .iter()
                .map(|t| t.index(size))
                .collect::<ParseResult<_>>()?,
        );
        Ok(true)
    })?;
    let [p1, p2] = parts;
    let missing = |what: &str| ParseError {
        line: text.lines().count().max(1),
        column: 1,
        message: format!("missing `{what}` record"),
    };
    Ok(BifDoc {
        lat,
        part1: p1.ok_or_else(|| missing("part1"))?,
        part2: p2.ok_or_else(|| missing("part2"))?,
    })
}

impl BifDoc {
    /// Builds the biframe; with `close` the parts are first replaced by the
    /// sub-lattices they generate.
    pub fn build(&self, close: bool) -> Result<Biframe> {
        let total = Arc::new(self.lat.build()?);
        if close {
            return Biframe::with_closure(total, &self.part1, &self.part2);
        }
        let n = total.size();
        let bits = |items: &[usize]| {
            let mut out = fixedbitset::FixedBitSet::with_capacity(n);
            for &i in items {
                out.insert(i);
            }
            out
        };
        Biframe::new(total, bits(&self.part1), bits(&self.part2))
    }
}

pub fn write_bif(name: &str, b: &Biframe) -> String {
    let mut out = String::new();
    write_lat_body(&mut out, name, b.total());
    write_points(&mut out, "part1", b.part1().ones());
    write_points(&mut out, "part2", b.part2().ones());
    out
}

/// A parsed congruence file: a lattice and a nucleus array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CngDoc {
    pub lat: LatDoc,
    pub nucleus: Vec<usize>,
}

pub fn parse_cng(text: &str) -> ParseResult<CngDoc> {
    let mut nucleus = None;
    let lat = parse_lat_with(text, |rec, size| {
        if rec.kind() != "nucleus" {
            return Ok(false);
        }
        if nucleus.is_some() {
            return Err(rec.error("duplicate `nucleus` record"));
        }
        if rec.args().len() != size {
            return Err(rec.error(format!(
                "`nucleus` needs {size} values, found {}",
                rec.args().len()
            )));
        }
        nucleus = Some(
            rec.args()
                .iter()
                .map(|t| t.index(size))
                .collect::<ParseResult<_>>()?,
        );
        Ok(true)
    })?;
    let nucleus = nucleus.ok_or_else(|| ParseError {
        line: text.lines().count().max(1),
        column: 1,
        message: "missing `nucleus` record".into(),
    })?;
    Ok(CngDoc { lat, nucleus })
}

impl CngDoc {
    /// The frame, and the nucleus checked against the nucleus laws.
    pub fn build(&self) -> Result<(Arc<Frame>, Result<Congruence>)> {
        let frame = Arc::new(self.lat.build()?);
        let c = Congruence::from_nucleus(&frame, self.nucleus.clone());
        Ok((frame, c))
    }
}

pub fn write_cng(name: &str, c: &Congruence) -> String {
    let mut out = String::new();
    write_lat_body(&mut out, name, c.frame());
    write_points(&mut out, "nucleus", c.nu().iter().copied());
    out
}

/// Parses `"a,b;c,d"` into pairs. Whitespace around numbers is allowed.
pub fn parse_pairs(text: &str) -> ParseResult<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for chunk in text.split(';') {
        let here = offset;
        offset += chunk.chars().count() + 1;
        if chunk.trim().is_empty() {
            if text.trim().is_empty() {
                break;
            }
            return Err(ParseError {
                line: 1,
                column: here + 1,
                message: "empty pair".into(),
            });
        }
        let parts: Vec<&str> = chunk.split(',').collect();
        if parts.len() != 2 {
            return Err(ParseError {
                line: 1,
                column: here + 1,
                message: format!("expected `a,b`, found `{}`", chunk.trim()),
            });
        }
        let mut col = here;
        let mut nums = [0usize; 2];
        for (k, p) in parts.iter().enumerate() {
            let lead = p.chars().take_while(|c| c.is_whitespace()).count();
            let tok = Token {
                text: p.trim(),
                line: 1,
                column: col + lead + 1,
            };
            nums[k] = tok.number()?;
            col += p.chars().count() + 1;
        }
        out.push((nums[0], nums[1]));
    }
    Ok(out)
}

/// `{"covers": [[a, b], ...], "name": ..., "size": n}`.
pub fn frame_json(name: &str, frame: &Frame) -> Value {
    let mut covers = frame.poset().covers().to_vec();
    covers.sort_unstable();
    json!({
        "name": name,
        "size": frame.size(),
        "covers": covers.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
    })
}

pub fn space_json(name: &str, space: &FiniteSpace) -> Value {
    let opens: Vec<Vec<usize>> = space
        .opens()
        .iter()
        .map(|&u| (0..space.points()).filter(|&i| u >> i & 1 == 1).collect())
        .collect();
    json!({ "name": name, "points": space.points(), "opens": opens })
}

pub fn biframe_json(name: &str, b: &Biframe) -> Value {
    json!({
        "total": frame_json(name, b.total()),
        "part1": b.part1().ones().collect::<Vec<_>>(),
        "part2": b.part2().ones().collect::<Vec<_>>(),
    })
}

pub fn hom_json(source: &str, target: &str, f: &FrameHom) -> Value {
    json!({ "source": source, "target": target, "map": f.map() })
}

/// Hasse diagram; nodes of equal height share a rank.
pub fn hasse_dot(name: &str, frame: &Frame, labels: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "\\\""));
    out.push_str("  rankdir=BT;\n  node [shape=circle];\n");
    let heights = frame.poset().heights();
    let max_h = heights.iter().copied().max().unwrap_or(0);
    for h in 0..=max_h {
        let row: Vec<String> = frame
            .elements()
            .filter(|&x| heights[x] == h)
            .map(|x| x.to_string())
            .collect();
        let _ = writeln!(out, "  {{ rank=same; {} }}", row.join("; "));
    }
    for x in frame.elements() {
        match labels.get(x).filter(|l| !l.is_empty()) {
            Some(l) => {
                let _ = writeln!(out, "  {x} [label=\"{x}\\n{}\"];", l.replace('"', "\\\""));
            }
            None => {
                let _ = writeln!(out, "  {x};");
            }
        }
    }
    let mut covers = frame.poset().covers().to_vec();
    covers.sort_unstable();
    for (a, b) in covers {
        let _ = writeln!(out, "  {a} -> {b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lat_round_trip() {
        let text = "# the three-element chain\nlat three 3\ncover 0 1\ncover 1 2 # top\n";
        let doc = parse_lat(text).unwrap();
        assert_eq!(doc.covers, vec![(0, 1), (1, 2)]);
        let f = doc.build().unwrap();
        let out = write_lat("three", &f);
        assert_eq!(out, "lat three 3\ncover 0 1\ncover 1 2\n");
        assert_eq!(write_lat("three", &parse_lat(&out).unwrap().build().unwrap()), out);
    }

    #[test]
    fn lat_errors_have_locations() {
        let e = parse_lat("lat x 3\ncover 0 7\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));
        let e = parse_lat("lat x 3\n  edge 0 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_lat("lat x three\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        let e = parse_lat("# nothing\n").unwrap_err();
        assert_eq!(e.message, "missing header record");
        let e = parse_lat("lat x 2\ncover 0\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn hom_round_trip() {
        let doc = parse_hom("hom three two\nmap 0 0\nmap 2 1\nmap 1 1\n").unwrap();
        let (l, m) = (Arc::new(Frame::chain(3)), Arc::new(Frame::chain(2)));
        let f = doc.build(l.clone(), m.clone()).unwrap();
        assert_eq!(f.map(), &[0, 1, 1]);
        let out = write_hom("three", "two", &f);
        assert_eq!(write_hom("three", "two", &parse_hom(&out).unwrap().build(l, m).unwrap()), out);
        assert!(parse_hom("hom a b\nmap 0 0\nmap 0 1\n").is_err());
    }

    #[test]
    fn spc_round_trip() {
        let text = "spc sierpinski 2\nopen\nopen 0\nopen 0 1\n";
        let s = parse_spc(text).unwrap().build().unwrap();
        assert_eq!(s, FiniteSpace::sierpinski());
        assert_eq!(write_spc("sierpinski", &s), text);
        assert!(parse_spc("spc s 2\nopen 2\n").is_err());
    }

    #[test]
    fn bif_and_cng() {
        let text = "lat sq 4\ncover 0 1\ncover 0 2\ncover 1 3\ncover 2 3\npart1 0 1 3\npart2 0 2 3\n";
        let b = parse_bif(text).unwrap().build(false).unwrap();
        assert!(b.is_strictly_zero_dimensional());
        assert_eq!(write_bif("sq", &b), text);
        assert!(parse_bif("lat sq 1\npart1 0\n").is_err());

        let c = parse_cng("lat c 3\ncover 0 1\ncover 1 2\nnucleus 1 1 2\n").unwrap();
        let (f, nu) = c.build().unwrap();
        assert_eq!(write_cng("c", &nu.unwrap()), "lat c 3\ncover 0 1\ncover 1 2\nnucleus 1 1 2\n");
        assert_eq!(f.size(), 3);
        let bad = parse_cng("lat c 3\ncover 0 1\ncover 1 2\nnucleus 0 0 2\n").unwrap();
        assert!(matches!(bad.build().unwrap().1, Err(Error::NotANucleus { .. })));
    }

    #[test]
    fn pairs() {
        assert_eq!(parse_pairs("0,1").unwrap(), vec![(0, 1)]);
        assert_eq!(parse_pairs("0,1; 2 ,3").unwrap(), vec![(0, 1), (2, 3)]);
        assert_eq!(parse_pairs("").unwrap(), vec![]);
        let e = parse_pairs("0,1;2,x").unwrap_err();
        assert_eq!(e.column, 7);
        assert!(parse_pairs("0,1;;2,3").is_err());
        assert!(parse_pairs("0,1,2").is_err());
    }

    #[test]
    fn json_keys_are_sorted() {
        let v = frame_json("three", &Frame::chain(3));
        assert_eq!(
            v.to_string(),
            r#"{"covers":[[0,1],[1,2]],"name":"three","size":3}"#
        );
    }

    #[test]
    fn dot_ranks() {
        let dot = hasse_dot("three", &Frame::chain(3), &[]);
        assert!(dot.contains("{ rank=same; 1 }"));
        assert!(dot.contains("1 -> 2;"));
    }
}
