use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_distcert");

fn bundled() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/paper.inst")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn certify_is_valid_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let inst = bundled();
    let mut files = Vec::new();
    for workers in ["1", "3", "8"] {
        let out = dir.path().join(format!("cert-{workers}.json"));
        let res = run(&[
            "certify",
            inst.to_str().unwrap(),
            "--workers",
            workers,
            "--quiet",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(
            res.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&res.stderr)
        );
        assert!(stdout(&res).contains("overall: VALID"));
        files.push(fs::read(&out).unwrap());
    }
    assert!(
        files.windows(2).all(|w| w[0] == w[1]),
        "certificates differ across worker counts"
    );

    let json: serde_json::Value = serde_json::from_slice(&files[0]).unwrap();
    assert_eq!(json["farfield"]["alpha"], "200/121");
    assert_eq!(json["farfield"]["rho"], "462/79");
    assert_eq!(json["grid"]["half_width"], "585");
    assert_eq!(json["grid"]["min_value"], "12");
    assert_eq!(json["overall"], "VALID");
    assert_eq!(
        json["classification"]["protrusive_orderings"]
            .as_array()
            .unwrap()
            .len(),
        74
    );
}

#[test]
fn certify_with_explicit_grid() {
    let res = run(&[
        "certify",
        bundled().to_str().unwrap(),
        "--alpha",
        "200/121",
        "--scale",
        "100",
        "--half-width",
        "600",
        "--quiet",
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(stderr(&res).contains("min f~ = 12 at (-598, -576)"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(json["grid"]["argmin"][0], "-598");
    assert_eq!(json["grid"]["argmin"][1], "-576");
    assert_eq!(json["overall"], "VALID");
}

#[test]
fn stdout_certificate_matches_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let inst = bundled();
    let to_file = run(&[
        "certify",
        inst.to_str().unwrap(),
        "--quiet",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(stdout(&to_file).contains("overall: VALID"));
    let piped = run(&["certify", inst.to_str().unwrap(), "--quiet"]);
    assert_eq!(piped.stdout, fs::read(&out).unwrap());
    assert!(stderr(&piped).contains("overall: VALID"));
}

#[test]
fn too_small_grid_is_invalid() {
    // Coverage fails: the grid reaches radius 1 but rho is about 5.85.
    let res = run(&[
        "certify",
        bundled().to_str().unwrap(),
        "--half-width",
        "100",
        "--quiet",
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(stderr(&res).contains("overall: INVALID"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(json["grid"]["coverage_ok"], false);
    assert_eq!(json["overall"], "INVALID");
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["certify"]).status.code(), Some(2));
    assert_eq!(
        run(&["certify", "/nonexistent/instance.inst"])
            .status
            .code(),
        Some(3)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.inst");
    fs::write(&bad, "primary 0 0\nsecondary 1 one\n").unwrap();
    let res = run(&["certify", bad.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));

    let res = run(&["certify", bundled().to_str().unwrap(), "--scale", "3"]);
    assert_eq!(res.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&res.stderr).contains("c1'.y = 11/10"));

    let res = run(&["certify", bundled().to_str().unwrap(), "--alpha", "1"]);
    assert_eq!(res.status.code(), Some(5));
}

#[test]
fn size_guard_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.inst");
    let text: String = (0..11)
        .map(|i| format!("primary {i} {}\n", i * i))
        .collect();
    fs::write(&big, text).unwrap();
    let res = run(&["orderings", big.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(4));
}

#[test]
fn orderings_table() {
    let res = run(&[
        "orderings",
        bundled().to_str().unwrap(),
        "--witness-budget",
        "0",
    ]);
    assert_eq!(res.status.code(), Some(0));
    let text = stdout(&res);
    assert_eq!(text.lines().count(), 121);
    let row = |prefix: &str| {
        text.lines()
            .find(|l| l.starts_with(prefix))
            .unwrap()
            .to_string()
    };
    assert!(row("(c1,c2,c1',c3,c2')").contains("| EXCLUDED "));
    assert!(row("(c1,c2,c3,c1',c2')").contains("not protrusive"));

    let res = run(&[
        "orderings",
        bundled().to_str().unwrap(),
        "--protrusive-only",
        "--witness-budget",
        "0",
    ]);
    assert_eq!(stdout(&res).lines().count(), 75);
}

#[test]
fn triangle_has_empty_exclusion_column() {
    let dir = tempfile::tempdir().unwrap();
    let tri = dir.path().join("tri.inst");
    fs::write(&tri, "primary 0 0\nprimary 4 0\nprimary 0 3\n").unwrap();
    let res = run(&["orderings", tri.to_str().unwrap(), "--witness-budget", "0"]);
    assert_eq!(res.status.code(), Some(0));
    let text = stdout(&res);
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        assert_eq!(cols[1], "protrusive", "{line}");
        assert_eq!(cols[2], "", "{line}");
    }
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn witness_subcommand() {
    let res = run(&[
        "witness",
        bundled().to_str().unwrap(),
        "--ordering",
        "c3,c1',c2,c1,c2'",
        "--witness-budget",
        "50",
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(stdout(&res).contains("verdict: WITNESSED"));

    let res = run(&[
        "witness",
        bundled().to_str().unwrap(),
        "--ordering",
        "c1,c2,c1',c3,c2'",
        "--witness-budget",
        "50",
    ]);
    assert!(stdout(&res).contains("verdict: INCONCLUSIVE"));

    let res = run(&[
        "witness",
        bundled().to_str().unwrap(),
        "--ordering",
        "c1,c2,c9",
    ]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn farfield_and_grid_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ff.json");
    let res = run(&[
        "farfield",
        bundled().to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["rho"], "462/79");

    let res = run(&[
        "grid",
        bundled().to_str().unwrap(),
        "--half-width",
        "600",
        "--quiet",
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(stderr(&res).contains("min f~ = 12"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(json["coverage_ok"], true);
}
