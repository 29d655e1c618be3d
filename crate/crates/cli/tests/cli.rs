use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadowlab")).args(args).env_remove("SHADOWLAB_BUDGET").output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

#[test]
fn cascade_against_a_star() {
    let o = run(&["cascade", "--m", "22", "--k", "3", "--s", "1", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "h=2 a=[2,8] value=22");
}

#[test]
fn cascade_json_fields() {
    let o = run(&["--format", "json", "cascade", "--m", "22", "--k", "3", "--s", "1", "--t", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["h"], 2);
    assert_eq!(v["a"], serde_json::json!([2, 8]));
    assert_eq!(v["value"], "22");
}

#[test]
fn near_miss_compare() {
    let o =
        run(&["compare", "--left", "em:n=10,k=3,s=3,t=2", "--right", "segment:em:n=10,k=3,s=1,t=1,m=22", "--ell", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "24 < 30");
}

#[test]
fn kruskal_katona_passes() {
    let o = run(&["verify", "--check", "kk", "--n", "6", "--k", "3", "--mode", "exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("kk PASS"), "{}", stdout(&o));
}

#[test]
fn verify_json_is_stable_across_jobs() {
    let args = |jobs: &'static str| {
        ["--format", "json", "verify", "--check", "t16", "--params", "n=10,k=4,t=2", "--mode", "randomized"]
            .into_iter()
            .chain(["--trials", "300", "--jobs", jobs])
            .collect::<Vec<_>>()
    };
    let a = run(&args("1"));
    let b = run(&args("3"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["mode"]["seed"], 0xC0FFEE_u64.to_string());
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_shadowlab"))
        .args(["verify", "--check", "t13", "--n", "8", "--k", "3"])
        .env("SHADOWLAB_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("REPORT-ONLY"));
}

#[test]
fn domain_errors_exit_2() {
    let o = run(&["cascade", "--m", "5", "--k", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(run(&["family", "--spec", "em:n=3,k=5,s=1,t=1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--check", "kk", "--n", "6"]).status.code(), Some(2));
}

#[test]
fn segment_file_round_trip_through_shadow() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seg.txt");
    let o = run(&["segment", "--spec", "full:n=6,k=3", "--m", "5"]);
    std::fs::write(&path, &o.stdout).unwrap();
    let o = run(&["shadow", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // 123 124 134 234 125 -> all pairs of [4] plus 15, 25
    assert_eq!(stdout(&o).trim(), "8");
    let o = run(&["compare", "--left", path.to_str().unwrap(), "--right", "segment:full:n=6,k=3,m=5"]);
    assert_eq!(stdout(&o).trim(), "8 = 8");
}

#[test]
fn segment_methods_agree() {
    let a = run(&["segment", "--spec", "hm:n=9,k=3,s=2,t=1", "--m", "30", "--method", "filter"]);
    let b = run(&["segment", "--spec", "hm:n=9,k=3,s=2,t=1", "--m", "30", "--method", "decompose"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 31);
}

#[test]
fn family_count_only() {
    let o = run(&["family", "--spec", "em:n=10,k=3,s=3,t=2", "--count-only"]);
    assert_eq!(stdout(&o).trim(), "22");
}

#[test]
fn csv_rows() {
    let o = run(&["--format", "csv", "verify", "--check", "kk", "--n", "5", "--k", "2"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,min_shadow,segment"));
    assert_eq!(lines.count(), 11);
}
