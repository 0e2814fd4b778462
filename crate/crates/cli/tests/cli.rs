use std::process::{Command, Output};

use cantorlab_cli::{ClassifyJson, CriticalRowJson, DimsJson, EnumerateJson, SelfSimilarJson, UniqueJson};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantorlab"))
        .args(args)
        .env_remove("CANTORLAB_DEPTH_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok_json<T: serde::de::DeserializeOwned + serde::Serialize>(args: &[&str]) -> T {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let parsed: T = serde_json::from_str(&text).unwrap();
    // round trip through the typed record
    let again = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(again.trim(), text.trim());
    parsed
}

#[test]
fn critical_points_json_brackets_reference_values() {
    let rows: Vec<CriticalRowJson> =
        ok_json(&["critical-points", "--n-from", "2", "--n-to", "3", "--tol", "1e-8", "--format", "json"]);
    assert_eq!(rows.len(), 2);
    let lo: f64 = rows[0].beta_c.lo.parse().unwrap();
    let hi: f64 = rows[0].beta_c.hi.parse().unwrap();
    assert!(lo <= 0.394330 && 0.394329 <= hi && hi - lo <= 1e-8);
    assert!(rows[1].alpha_c.lo.starts_with("0.26794"));
}

#[test]
fn critical_points_csv_has_header_and_rows() {
    let out = run(&["critical-points", "--n-from", "2", "--n-to", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "N,beta_c_lo,beta_c_hi,alpha_c_lo,alpha_c_hi");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("2,0.3943"));
}

#[test]
fn unique_reports_all_deciders() {
    let u: UniqueJson = ok_json(&["unique", "--N", "2", "--beta", "2/5", "--code", "0|1,-1"]);
    assert_eq!(u.t_exact, "6/35");
    assert!(u.exact);
    assert_eq!(u.lex, "yes");
    assert_eq!(u.enum_depth_consistent, 40);
}

#[test]
fn non_unique_code_is_reported_not_failed() {
    let u: UniqueJson = ok_json(&["unique", "--N", "2", "--beta", "2/5", "--code", "|1,0"]);
    assert!(!u.exact);
    assert_eq!(u.lex, "no");
    assert!(u.enum_depth_consistent < 40);
}

fn strict_unique(cap: &str) -> (Option<i32>, UniqueJson) {
    let out = Command::new(env!("CARGO_BIN_EXE_cantorlab"))
        .args(["--strict", "unique", "--N", "2", "--beta", "2/5", "--code", "|1,-1"])
        .env("CANTORLAB_DEPTH_CAP", cap)
        .output()
        .unwrap();
    (out.status.code(), serde_json::from_slice(&out.stdout).unwrap())
}

#[test]
fn strict_mode_exits_4_when_undetermined() {
    let (code, u) = strict_unique("1");
    assert_eq!(u.lex, "undetermined");
    assert_eq!(code, Some(4));
    let (code, u) = strict_unique("2");
    assert_eq!(u.lex, "yes");
    assert_eq!(code, Some(0));
}

#[test]
fn selfsimilar_member_with_verified_ifs() {
    let s: SelfSimilarJson = ok_json(&["selfsimilar", "--N", "2", "--beta", "7/20", "--code", "|0,1,0,-1"]);
    assert!(s.unique && s.member);
    assert_eq!(s.verification.as_deref(), Some("verified"));
    let w = s.witness.unwrap();
    assert_eq!(w.i.len(), w.q);
    assert_eq!(s.ifs.unwrap().offsets.len(), 2);
}

#[test]
fn dims_are_equal_for_periodic_codes() {
    let d: DimsJson = ok_json(&["dims", "--N", "2", "--beta", "7/20", "--code", "|0,1,0,-1"]);
    assert_eq!(d.dim_h, d.dim_p);
    // digit sets of sizes 2,1,2,1 per period: ln 4 / (4 ln(20/7))
    let expected = 4f64.ln() / (4.0 * (20f64 / 7.0).ln());
    assert!((d.dim_h.parse::<f64>().unwrap() - expected).abs() < 1e-11);
}

#[test]
fn classify_text_and_json_agree() {
    let c: ClassifyJson = ok_json(&["classify", "--N", "3", "--beta", "0.22", "--format", "json"]);
    let out = run(&["classify", "--N", "3", "--beta", "0.22"]);
    assert_eq!(stdout(&out), format!("U: {}\nS: {}\n", c.u, c.s));
}

#[test]
fn enumerate_counts_grow() {
    let e: EnumerateJson = ok_json(&["enumerate", "--N", "2", "--beta", "7/20", "--depth", "6"]);
    assert_eq!(e.counts.len(), 6);
    assert!(e.counts.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn lambda_and_expand_print_digits() {
    let out = run(&["lambda", "--m", "2", "--len", "8"]);
    assert_eq!(stdout(&out), "1,1,0,1,0,0,1,1\n");
    let out = run(&["expand", "--x", "1", "--beta", "3/5", "--m", "2", "--len", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim().split(',').count(), 4);
}

#[test]
fn codes_tree_lists_counts() {
    let out = run(&["codes", "--N", "3", "--beta", "0.28", "--t", "0.19", "--depth", "3"]);
    assert!(stdout(&out).contains("counts: 2 3 4"));
}

#[test]
fn figure_is_written_atomically() {
    let dir = std::env::temp_dir().join(format!("cantorlab-fig-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig.svg");
    let out = run(&["figure", "--N", "3", "--beta", "0.28", "--t", "0.19", "--levels", "2", "--out"]
        .iter()
        .copied()
        .chain([path.to_str().unwrap()])
        .collect::<Vec<_>>());
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let leftovers: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["unique", "--N", "2", "--beta", "3/5", "--code", "|0"]).status.code(), Some(2));
    assert_eq!(run(&["unique", "--N", "2", "--beta", "2/5", "--code", "|7"]).status.code(), Some(2));
    assert_eq!(run(&["unique", "--N", "2", "--beta", "x", "--code", "|0"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["critical-points", "--tol", "-1"]).status.code(), Some(2));
}
