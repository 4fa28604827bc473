use std::path::Path;
use std::process::Command;
use surface_census::cli::{parse_range, parse_sigma, write_outputs};
use surface_census::polyhedron::cube;

fn census(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_census")).args(args).output().unwrap()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    names
}

#[test]
fn census_output_is_byte_identical_across_runs_and_worker_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = |dir: &Path, workers: &'static str| {
        vec!["census".to_string(), "--n".into(), "1..5".into(), "--schema-version".into(), "--workers".into(), workers.into(), "--out".into(), dir.display().to_string()]
    };
    for (dir, w) in [(a.path(), "1"), (b.path(), "4")] {
        let out = Command::new(env!("CARGO_BIN_EXE_census")).args(args(dir, w)).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(listing(a.path()), vec!["census.csv", "census_detail.txt"]);
    for name in listing(a.path()) {
        assert_eq!(std::fs::read(a.path().join(&name)).unwrap(), std::fs::read(b.path().join(&name)).unwrap(), "{name}");
    }
    let csv = std::fs::read_to_string(a.path().join("census.csv")).unwrap();
    assert!(csv.starts_with("# schema-version 1\nn,cut_edges,involutions,classes,genus,factorial_bound,exp_bound\n"));
}

#[test]
fn stdout_runs_are_deterministic() {
    for args in [&["coxeter-ball", "--radius", "3", "--checks", "20"][..], &["covers", "--n", "1..3"], &["bounds"], &["qi-check", "--pairs", "2"]] {
        let x = census(args);
        let y = census(args);
        assert!(x.status.success(), "{args:?}: {}", String::from_utf8_lossy(&x.stderr));
        assert_eq!(x.stdout, y.stdout);
        assert!(!x.stdout.is_empty());
    }
}

#[test]
fn bounds_report_the_golden_constants() {
    let out = String::from_utf8(census(&["bounds"]).stdout).unwrap();
    assert!(out.contains("30"));
    assert!(out.contains("241"));
}

#[test]
fn errors_map_to_stable_exit_codes() {
    let cases: [(&[&str], i32, &str); 5] = [
        (&["census", "--n", "7"], 12, "E_RESOURCE"),
        (&["validate", "--polyhedron", "cube"], 20, "E_NOT_RIGHT_ANGLED"),
        (&["census", "--n", "3..2"], 10, "E_INVALID_INPUT"),
        (&["census", "--n", "5", "--sigma", "cycles:(1 9)"], 10, "E_INVALID_INPUT"),
        (&["validate", "--polyhedron", "/nonexistent/p.json"], 18, "E_IO"),
    ];
    for (args, code, tag) in cases {
        let out = census(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with(&format!("error {tag}:")), "{args:?}: {err}");
    }
    assert_eq!(census(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(census(&["validate"]).status.code(), Some(0));
}

#[test]
fn failed_runs_leave_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = census(&["census", "--n", "7", "--out", &dir.path().display().to_string()]);
    assert_eq!(out.status.code(), Some(12));
    assert!(listing(dir.path()).is_empty());

    let files = vec![("a.csv".to_string(), "x\n".to_string()), ("missing/b.csv".to_string(), "y\n".to_string())];
    assert!(write_outputs(dir.path(), &files).is_err());
    assert!(listing(dir.path()).is_empty(), "{:?}", listing(dir.path()));
}

#[test]
fn validate_reads_polyhedron_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube.json");
    std::fs::write(&path, cube().to_json()).unwrap();
    let out = census(&["validate", "--polyhedron", &path.display().to_string()]);
    assert_eq!(out.status.code(), Some(20));
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("4 edges"), "{text}");

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(census(&["validate", "--polyhedron", &path.display().to_string()]).status.code(), Some(19));
}

#[test]
fn argument_parsers() {
    assert_eq!(parse_range("7").unwrap(), vec![7]);
    assert_eq!(parse_range("2..5").unwrap(), vec![2, 3, 4, 5]);
    assert!(parse_range("5..2").is_err());
    assert!(parse_range("x").is_err());
    assert!(parse_sigma("all", 3).is_ok());
    assert!(parse_sigma("transpositions", 3).is_ok());
    assert!(parse_sigma("cycles:(1 2);(1 3)", 3).is_ok());
    assert!(parse_sigma("cycles:(1 4)", 3).is_err());
    assert!(parse_sigma("bogus", 3).is_err());
}
