use std::path::Path;
use std::process::{Command, Output};

fn framecalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framecalc"))
        .args(args)
        .env_remove("FRAMECALC_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const CHAIN3: &str = "lat chain3 3\ncover 0 1\ncover 1 2\n";

#[test]
fn info_on_the_three_chain() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "c.lat", CHAIN3);
    let o = framecalc(&["info", &p, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 3);
    assert_eq!(v["join_irreducibles"].as_array().unwrap().len(), 2);
    assert_eq!(v["predicted_congruences"], 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let n5 = write(dir.path(), "n5.lat", "lat n5 5\ncover 0 1\ncover 1 2\ncover 2 4\ncover 0 3\ncover 3 4\n");
    let o = framecalc(&["validate", &n5]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not distributive"));

    let bad = write(dir.path(), "bad.lat", "lat x 3\ncover 0 1\ncover 1 two\n");
    let o = framecalc(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3, column 9"));

    let o = framecalc(&["assembly", "@chain(8)", "--budget", "64"]);
    assert_eq!(o.status.code(), Some(4));
    let o = Command::new(env!("CARGO_BIN_EXE_framecalc"))
        .args(["assembly", "@chain(8)"])
        .env("FRAMECALC_BUDGET", "64")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));

    assert_eq!(framecalc(&["validate", &write(dir.path(), "c.lat", CHAIN3)]).status.code(), Some(0));
}

#[test]
fn assembly_outputs() {
    let o = framecalc(&["assembly", "@chain(3)", "--json", "-"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(v["boolean"], true);

    let o = framecalc(&["assembly", "@boolean(2)", "--tower", "3"]);
    assert!(stdout(&o).contains("tower [4, 4, 4] stable at 0"), "{}", stdout(&o));

    let o = framecalc(&["assembly", "@chain(3)", "--dot", "-"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("∇1") && dot.contains("Δ1"));
}

#[test]
fn congruence_quotient_and_spaces() {
    let o = framecalc(&["congruence", "@chain(3)", "--pairs", "0,1"]);
    assert_eq!(stdout(&o), "blocks {0,1},{2}\n");
    let o = framecalc(&["congruence", "@chain(3)", "--nabla", "1"]);
    assert_eq!(stdout(&o), "blocks {0,1},{2}\n");

    let o = framecalc(&["quotient", "@chain(3)", "--nabla", "1"]);
    assert_eq!(stdout(&o), "lat chain3_quotient 2\ncover 0 1\n");

    let o = framecalc(&["skula", "@sierpinski_space"]);
    let text = stdout(&o);
    let b = framecalc::format::parse_bif(&text).unwrap().build(false).unwrap();
    assert_eq!(b.total().size(), 4);
    assert!(b.total().is_boolean());

    let o = framecalc(&["spectrum", "@chain(3)"]);
    assert_eq!(stdout(&o), "spc chain3_spectrum 2\nopen\nopen 0\nopen 0 1\n");
}

#[test]
fn hom_files_resolve_sibling_lattices() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "three.lat", CHAIN3);
    let h = write(dir.path(), "f.hom", "hom three boolean(1)\nmap 0 0\nmap 1 1\nmap 2 1\n");
    let o = framecalc(&["validate", &h]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let h = write(dir.path(), "g.hom", "hom three boolean(1)\nmap 0 1\nmap 1 1\nmap 2 1\n");
    assert_eq!(framecalc(&["validate", &h]).status.code(), Some(3));
}

#[test]
fn corrupted_fixture_fails_the_nuclei_suite() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/corrupted.cng");
    let o = framecalc(&["check", "--suite", "nuclei", "--max-size", "3", "--fixture", fixture]);
    assert_eq!(o.status.code(), Some(5));
    let text = stdout(&o);
    assert!(text.contains("FAIL  nuclei       fixtures"), "{text}");
    assert!(text.contains("inflationary fails at element 1"), "{text}");
    assert!(text.contains("| nucleus 0 0 2"), "{text}");
}

#[test]
fn check_reports_are_worker_independent() {
    let one = framecalc(&["check", "--suite", "formulas", "--max-size", "8", "--workers", "1"]);
    let three = framecalc(&["check", "--suite", "formulas", "--max-size", "8", "--workers", "3"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(framecalc(&["check", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn corpus_export_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("corpus");
    let o = framecalc(&["corpus", "export", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let manifest = std::fs::read_to_string(out.join("MANIFEST")).unwrap();
    assert!(manifest.starts_with(&format!("corpus {}", framecalc::catalog::pinned_hash())));
    let lat = std::fs::read_to_string(out.join("chain3.lat")).unwrap();
    assert_eq!(lat, CHAIN3);
    assert_eq!(framecalc(&["corpus", "hash"]).status.code(), Some(0));
}
