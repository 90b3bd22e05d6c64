use std::io::Write;
use std::process::{Command, Output, Stdio};

fn ramify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramify"))
        .args(args)
        .output()
        .expect("run ramify")
}

fn ramify_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ramify"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("run ramify");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn line<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
}

#[test]
fn phi_at_cyclotomic_breakpoint() {
    let o = ramify(&["phi", "--preset", "cyclotomic:3,4", "--eval", "26/54"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn quaternion_jump_tables() {
    let o = ramify(&["jumps", "--preset", "quaternion:lmfdb-q2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(line(&out, "lower"), Some("1/8 3/8 7/8"));
    assert_eq!(line(&out, "upper"), Some("1 2 3"));
    assert_eq!(line(&out, "u"), Some("3"));
    assert_eq!(line(&out, "d"), Some("3"));
}

#[test]
fn newton_on_wild_quadratic() {
    let o = ramify(&["newton", "--p", "2", "--poly", "2 -2 1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(line(&out, "depths"), Some("1/2"));
    assert_eq!(line(&out, "disc-val"), Some("2"));

    let piped = ramify_stdin(&["newton", "--file", "-"], "2; 2 -2 1\n");
    assert_eq!(stdout(&piped), out);
}

#[test]
fn newton_degree_cap() {
    let o = ramify(&["newton", "--p", "2", "--poly", "2 0 0 1", "--degree-cap", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degree-cap"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["phi"],
        &["phi", "--preset", "cyclotomic:3"],
        &["phi", "--preset", "trivial", "--multiset", "x"],
        &["newton", "--p", "2", "--poly", "1 0 1"],
        &["tower", "--preset", "quaternion:serre", "--kernel", "0 1", "--format", "svg"],
    ] {
        let o = ramify(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn multiset_from_stdin() {
    let o = ramify_stdin(
        &["phi", "--multiset", "-", "--eval", "1/3", "--eval", "1"],
        "p 3\ne 6\n0 x 3\n1/3 x 2\ninf x 1\n",
    );
    assert_eq!(stdout(&o), "1\n5/3\n");
}

#[test]
fn tower_checks_pass_on_quaternion_center() {
    let o = ramify(&["tower", "--preset", "quaternion:lmfdb-q2", "--kernel", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("K/E  1/4 x 2, 3/4 x 1, inf x 1"));
    assert!(!out.contains("FAIL"));
    assert!(out.lines().filter(|l| l.starts_with("pass  TFAE")).count() > 3);
}

#[test]
fn convert_round_trip() {
    let phi = "[(0,0),(1/8,1),(3/8,3/2)] + slope 1";
    let to = ramify(&[
        "convert", "--e-ef", "1", "--e-lf", "8", "--direction", "to-classical", "--phi", phi,
    ]);
    let classical = stdout(&to);
    assert_eq!(classical, "phi [(0,0),(1,1),(3,3/2)] + slope 1/8\n");
    let back = ramify(&[
        "convert",
        "--e-ef",
        "1",
        "--e-lf",
        "8",
        "--direction",
        "to-normalized",
        "--phi",
        classical.trim().strip_prefix("phi ").unwrap(),
    ]);
    assert_eq!(stdout(&back).trim(), format!("phi {phi}"));
}

#[test]
fn profile_outputs() {
    let csv = ramify(&["depthmap", "--profile", "3/2", "--r-max", "3", "--format", "csv"]);
    assert!(stdout(&csv).ends_with("3,full,full,full,half,9/2\n"));
    let a = ramify(&["depthmap", "--profile", "3/2", "--format", "svg"]);
    let b = ramify(&["depthmap", "--profile", "3/2", "--format", "svg"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("<svg"));
}

#[test]
fn depth_maps_on_quadratic() {
    let o = ramify(&[
        "depthmap", "--preset", "quadratic:3/2", "--trace", "1", "--norm", "1", "--torus", "1,2",
    ]);
    let out = stdout(&o);
    assert_eq!(line(&out, "trace"), Some("1 -> 5/2"));
    assert_eq!(line(&out, "norm"), Some("1 -> 2 (not onto)"));
    assert_eq!(line(&out, "torus"), Some("(1, 2) -> (1, 7/2)"));
}

#[test]
fn svg_plot_to_file() {
    let dir = std::env::temp_dir().join(format!("ramify-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("phi.svg");
    let o = ramify(&[
        "phi",
        "--preset",
        "quaternion:serre",
        "--format",
        "svg",
        "--line-color",
        "teal",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.contains(r#"stroke="teal""#));
    assert_eq!(svg.matches("<circle").count(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ingest_flags_bad_records() {
    let good = ramify(&["ingest", "--offline", "q2-quaternion", "q2-root2"]);
    assert_eq!(good.status.code(), Some(0));
    let out = stdout(&good);
    assert!(out.contains("record q2-quaternion\n"));
    assert!(out.contains("  upper 1 2 3\n"));

    let bad = ramify(&["ingest", "--offline", "q2-root2-baddisc"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL  discriminant exponent"));

    let missing = ramify(&["ingest", "--offline", "2.2.3.missing"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn verify_exits_one_on_failure() {
    let o = ramify(&["verify", "--towers", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 14);
    assert!(out.contains("[FAIL]  6 "));
    assert!(out.contains("[PASS]  1 "));
}
