use std::path::PathBuf;
use std::process::Command;

use symdesign::io::parse_design;

fn run(args: &[&str]) -> (i32, String, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = symdesign_cli::run(&args, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symdesign-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn build_to(name: &str, args: &[&str]) -> String {
    let path = tmp(name).to_string_lossy().into_owned();
    let out = format!("out={path}");
    let mut full = args.to_vec();
    full.push(&out);
    let (code, _, err) = run(&full);
    assert_eq!(code, 0, "{err}");
    path
}

#[test]
fn build_then_verify() {
    let (code, design, ledger) = run(&["build", "sane", "q=2", "latin=xor:2"]);
    assert_eq!(code, 0);
    assert!(ledger.contains("16"));
    assert_eq!(parse_design(&design).unwrap().design.parameters().unwrap(), (16, 6, 2));

    let path = build_to("sane3.txt", &["build", "sane", "q=3", "latin=cyclic"]);
    let (code, out, _) = run(&["verify", &path, "expect=45,12,3", "symmetric=true"]);
    assert_eq!(code, 0);
    assert!(out.contains("2-(45,12,3) symmetric: PASS"));
    let (code, out, _) = run(&["verify", &path, "expect=45,12,4"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"));
}

#[test]
fn verify_reports_a_broken_pair() {
    let path = build_to("broken.txt", &["build", "sane", "q=2", "latin=cyclic"]);
    let text = std::fs::read_to_string(&path).unwrap();
    let f = parse_design(&text).unwrap();
    let mut blocks = f.design.blocks().to_vec();
    let x = blocks[0][0];
    let y = (0..16).find(|y| !blocks[0].contains(y)).unwrap();
    blocks[0].retain(|&z| z != x);
    blocks[0].push(y);
    blocks[0].sort_unstable();
    let broken = symdesign::incidence::IncidenceStructure::new(16, blocks).unwrap();
    std::fs::write(&path, symdesign::io::write_design(&symdesign::io::DesignFile::plain(broken))).unwrap();
    let (code, out, _) = run(&["verify", &path]);
    assert_eq!(code, 1);
    assert!(out.contains("block size 6: PASS"));
    assert!(out.contains("pair count: FAIL (points"));
}

#[test]
fn symplectic_constructions_agree() {
    let grid = build_to("grid.txt", &["build", "symplectic", "n=2", "sign=-"]);
    let forms = build_to("forms.txt", &["build", "symplectic", "n=2", "sign=-", "via=forms"]);
    let a = parse_design(&std::fs::read_to_string(grid).unwrap()).unwrap().design;
    let b = parse_design(&std::fs::read_to_string(forms).unwrap()).unwrap().design;
    assert_eq!(a.sorted_blocks(), b.sorted_blocks());
    let plus = build_to("plus.txt", &["build", "symplectic", "n=3", "sign=+"]);
    let (code, out, _) = run(&["verify", &plus]);
    assert_eq!(code, 0);
    assert!(out.contains("2-(64,36,20) symmetric: PASS"));
    assert_eq!(run(&["build", "symplectic", "n=2", "sign=+", "via=compose"]).0, 2);
}

#[test]
fn flagcheck_outcomes() {
    let (code, out, _) = run(&["flagcheck", "symplectic", "n=2"]);
    assert_eq!(code, 0);
    assert!(out.contains("all four conditions: true"));
    assert!(out.contains("agreement: PASS"));
    let (code, out, _) = run(&["flagcheck", "symplectic", "n=2", "gens=translations"]);
    assert_eq!(code, 0);
    assert!(out.contains("flag orbit covers all flags: false"));
    let (code, out, _) = run(&["flagcheck", "sane", "q=4", "gens=translations", "latin=jm:1"]);
    assert_eq!(code, 0);
    assert!(out.contains("all four conditions: false"));
}

#[test]
fn canon_dual_and_complement() {
    let s = build_to("s2.txt", &["build", "symplectic", "n=2"]);
    let (code, _, report) = run(&["canon", &s]);
    assert_eq!(code, 0);
    assert!(report.contains("aut order 11520"));
    let (code, _, report) = run(&["canon", &s, "parts=4"]);
    assert_eq!(code, 0);
    assert!(report.contains("aut order"));

    let dual = build_to("s2dual.txt", &["dual", &s]);
    let comp = build_to("s2comp.txt", &["complement", &s]);
    let (code, out, _) = run(&["verify", &comp]);
    assert_eq!(code, 0);
    assert!(out.contains("2-(16,10,6) symmetric: PASS"));
    let (_, _, a) = run(&["canon", &s]);
    let (_, _, b) = run(&["canon", &dual]);
    assert_eq!(a.lines().last(), b.lines().last());
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["build", "sane", "q=2", "colour=red"]).0, 2);
    assert_eq!(run(&["build", "sane"]).0, 2);
    assert_eq!(run(&["build", "torus", "q=2"]).0, 2);
    assert_eq!(run(&["verify", "/nonexistent/design.txt"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["search96", "samples=0"]).0, 2);
    let garbage = tmp("garbage.txt");
    std::fs::write(&garbage, "not a design\n").unwrap();
    let (code, _, err) = run(&["verify", garbage.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line"));
}

#[test]
fn search96_is_deterministic_across_jobs() {
    let (code, one, _) = run(&["search96", "samples=4", "seed=3", "--jobs", "1"]);
    assert_eq!(code, 0);
    let (code, four, _) = run(&["search96", "samples=4", "seed=3", "--jobs", "4"]);
    assert_eq!(code, 0);
    assert_eq!(one, four);
    assert!(one.contains("isomorphism classes"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_symdesign");
    let ok = Command::new(bin)
        .args(["build", "sane", "q=2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(!ok.stdout.is_empty());
    let bad = Command::new(bin).args(["build", "sane", "q=6"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let jobs = Command::new(bin)
        .args(["search96", "samples=2"])
        .env("SYMDESIGN_JOBS", "two")
        .output()
        .unwrap();
    assert_eq!(jobs.status.code(), Some(2));
}
