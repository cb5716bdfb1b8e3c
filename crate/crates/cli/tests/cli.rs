use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn charwalk(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charwalk"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("CHARWALK_CACHE")
        .output()
        .expect("binary runs")
}

fn read(out: &Path, name: &str) -> Vec<Vec<String>> {
    fs::read_to_string(out.join(name))
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn col<'a>(rows: &'a [Vec<String>], row: usize, name: &str) -> &'a str {
    let i = rows[0].iter().position(|h| h == name).unwrap();
    &rows[row][i]
}

fn trailer(rows: &[Vec<String>], key: &str) -> String {
    let last = rows.last().unwrap();
    last.iter()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")).map(str::to_string))
        .unwrap_or_else(|| panic!("no trailer key {key} in {last:?}"))
}

#[test]
fn fpt_small_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = charwalk(
        dir.path(),
        &["fpt", "--x", "3", "--x", "10", "--eps", "1/2"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read(dir.path(), "fpt.csv");
    assert_eq!(
        rows[0],
        ["x", "eps", "sum_f", "pi_odd", "average", "normalized"]
    );
    assert_eq!(col(&rows, 1, "sum_f"), "2");
    assert_eq!(col(&rows, 2, "sum_f"), "7");
    assert_eq!(col(&rows, 2, "pi_odd"), "3");
    assert_eq!(col(&rows, 2, "average"), "7/3");

    let o = charwalk(dir.path(), &["fpt", "--x", "3", "--eps", "1"]);
    assert!(o.status.success());
    assert_eq!(col(&read(dir.path(), "fpt.csv"), 1, "sum_f"), "2");
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(charwalk(dir.path(), &["fpt"]).status.code(), Some(2));
    assert_eq!(
        charwalk(dir.path(), &["fpt", "--x", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        charwalk(dir.path(), &["fpt", "--x", "100", "--eps", "3/2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        charwalk(dir.path(), &["equi", "--x", "100"]).status.code(),
        Some(2)
    );
    assert_eq!(
        charwalk(dir.path(), &["equi", "--x", "100", "--constraint", "4:+1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn enum_partial_sums() {
    let dir = tempfile::tempdir().unwrap();
    let o = charwalk(dir.path(), &["enum", "--m-max", "3", "--eps", "1/2"]);
    assert!(o.status.success());
    let rows = read(dir.path(), "enum.csv");
    assert_eq!(col(&rows, 3, "a_hat"), "1/2");
    assert_eq!(col(&rows, 4, "a_hat"), "1/4");
    assert_eq!(trailer(&rows, "partial_sum"), "11/4");

    let o = charwalk(
        dir.path(),
        &["enum", "--m-max", "30", "--eps", "1", "--format", "json"],
    );
    assert!(o.status.success());
    let rows = read(dir.path(), "enum.csv");
    assert_eq!(trailer(&rows, "partial_sum_dec"), "3.669921875");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("enum.json")).unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 32);
}

#[test]
fn enum_budget_exhaustion_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = charwalk(
        dir.path(),
        &[
            "enum",
            "--m-max",
            "60",
            "--eps",
            "1/2",
            "--node-budget",
            "2000",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    let rows = read(dir.path(), "enum.csv");
    let done: u64 = trailer(&rows, "m_max").parse().unwrap();
    assert!((3..60).contains(&done));
    assert_eq!(rows.len(), done as usize + 3);
}

#[test]
fn moment_c3_equi_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = charwalk(dir.path(), &["moment", "--x", "10", "--ell", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read(dir.path(), "moment.csv");
    assert_eq!(col(&rows, 1, "route"), "direct");
    assert_eq!(col(&rows, 1, "sixth_moment"), "64");
    assert_eq!(col(&rows, 2, "route"), "cubes");
    assert_eq!(col(&rows, 2, "sixth_moment"), "64");

    assert!(charwalk(dir.path(), &["c3", "--ell", "2"]).status.success());
    assert_eq!(col(&read(dir.path(), "c3.csv"), 1, "c3"), "32");

    let o = charwalk(dir.path(), &["equi", "--x", "100", "--constraint", "2:+1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read(dir.path(), "equi.csv");
    assert_eq!(col(&rows, 1, "count"), "11");
    assert_eq!(col(&rows, 1, "expected"), "25/2");
}

#[test]
fn cached_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let args = [
        "tail", "--x", "1000", "--x", "5000", "--m-max", "8", "--cache", cache,
    ];
    assert!(charwalk(dir.path(), &args).status.success());
    let first = fs::read(dir.path().join("tail.csv")).unwrap();
    assert!(Path::new(cache).join("manifest.csv").exists());
    assert!(charwalk(dir.path(), &args).status.success());
    assert_eq!(first, fs::read(dir.path().join("tail.csv")).unwrap());
}

#[test]
fn converge_gap_is_small_for_eps_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = charwalk(
        dir.path(),
        &["converge", "--x", "1e6", "--eps", "1", "--m-max", "40"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read(dir.path(), "converge.csv");
    let gap: f64 = col(&rows, 1, "relative_gap_dec").parse().unwrap();
    assert!((0.0..0.05).contains(&gap), "gap {gap}");
}

#[test]
fn passage_lists_every_odd_prime() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        charwalk(dir.path(), &["passage", "--x", "7", "--eps", "1/2"])
            .status
            .success()
    );
    let rows = read(dir.path(), "passage.csv");
    let ps: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ps, ["3", "5", "7"]);
    assert_eq!(col(&rows, 3, "first_passage"), "3");
    assert_eq!(col(&rows, 3, "eventual_time"), "5");
}
