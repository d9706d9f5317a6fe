use std::process::{Command, Output};

use cwsusy::export::{parse_record_lines, Dump};
use cwsusy::moduli::Tag;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cwsusy")).args(args).output().expect("binary runs")
}

fn point(args: &[&str], am: &str, app: &str, ap: &str, amp: &str) -> Vec<String> {
    let mut v: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    for (flag, val) in [("--alpha-minus", am), ("--alpha-plus-prime", app), ("--alpha-plus", ap), ("--alpha-minus-prime", amp)] {
        v.push(flag.into());
        v.push(val.into());
    }
    v
}

fn run_owned(args: &[String]) -> Output {
    run(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn malformed_rational_is_a_usage_error() {
    let o = run_owned(&point(&["classify"], "1", "0", "1//2", "0"));
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["classify", "--alpha-minus", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn origin_is_a_usage_error() {
    let o = run_owned(&point(&["classify"], "0", "0", "0", "0"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_on_and_off_the_locus() {
    let o = run_owned(&point(&["classify"], "2", "1", "-3", "5"));
    assert_eq!(o.status.code(), Some(0));
    let recs = parse_record_lines(&stdout(&o)).unwrap();
    assert_eq!(recs.len(), 1);
    assert!(recs[0].susy);
    assert!(stdout(&o).contains("\"schema\":1"));
    let o = run_owned(&point(&["classify"], "2", "1", "5", "7"));
    let recs = parse_record_lines(&stdout(&o)).unwrap();
    assert!(!recs[0].susy);
    assert_eq!(recs[0].nu.to_string(), "3/4");
}

#[test]
fn verify_passes_off_the_locus() {
    let o = run_owned(&point(&["verify", "--format", "tsv"], "2", "1", "5", "7"));
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.starts_with("check\tpass\tprovenance\tdetail\n"));
    assert!(text.contains("expected-negative"));
    assert!(text.contains("float(1e-9)"));
    assert!(text.lines().skip(1).all(|l| l.split('\t').nth(1) == Some("true")));
}

#[test]
fn output_is_deterministic() {
    let args = point(&["verify", "--seed", "5"], "2", "1", "-3", "5");
    let a = run_owned(&args);
    let b = run_owned(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["sweep", "--alpha-minus", "7/10", "--grid=-1:1:2", "--grid=0:1:2", "--grid=-1:0:2", "--random", "4", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 5 * 3 * 3 + 4);
}

#[test]
fn empty_sweep_writes_an_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.json");
    let o = run(&["sweep", "--alpha-minus", "1", "--grid", "1:0:2", "--grid", "0:1:1", "--grid", "0:1:1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap().len(), 0);
}

#[test]
fn sweep_tags_the_p2_ray() {
    let o = run(&["sweep", "--grid", "2:2:1", "--alpha-plus-prime", "0", "--alpha-plus", "0", "--alpha-minus-prime", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = parse_record_lines(&stdout(&o)).unwrap();
    assert_eq!(recs.len(), 1);
    assert!(recs[0].tags.contains(&Tag::P2));
}

#[test]
fn sweep_needs_every_axis() {
    let o = run(&["sweep", "--alpha-minus", "1", "--grid", "0:1:1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["sweep", "--alpha-minus", "1", "--grid", "0:1", "--grid", "0:1:1", "--grid", "0:1:1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_a_usage_error() {
    let args = point(&["classify", "--out", "/nonexistent-dir/x.json"], "2", "1", "5", "7");
    assert_eq!(run_owned(&args).status.code(), Some(2));
}

#[test]
fn dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p0.json");
    let mut args = point(&["dump"], "3", "-1", "3", "-1");
    args.extend(["--out".to_string(), out.to_str().unwrap().to_string()]);
    assert_eq!(run_owned(&args).status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let d = Dump::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(d.epsilon, -1);
    assert_eq!(d.odd_dim(), 32);
    assert_eq!(cwsusy::export::to_json_string(&d.to_json()), text);
    let o = run_owned(&point(&["dump", "--format", "tsv"], "3", "-1", "3", "-1"));
    assert!(stdout(&o).starts_with("x\ty\tz\tre\tim\n"));
}
