use std::path::PathBuf;
use std::process::Command;

use charid::{CharIdealOutput, ErrorOutput, PseudoNullOutput, SelftestOutput};
use charid_core::arith::{parse_poly, RingDescriptor};
use charid_core::charideal::CharDivisor;
use charid_core::descent::DescentSummary;
use charid_core::oracle::GrowthFit;
use charid_core::tower::TowerSummary;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn charid(args: &[&str], file: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_charid"));
    cmd.args(args);
    if let Some(f) = file {
        cmd.arg(data(f));
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn render(p: u64, vars: &[&str], f: &str) -> String {
    let r = RingDescriptor::new(p, 6, vars.iter().map(|s| s.to_string()).collect(), 12).unwrap();
    CharDivisor::from_generator(&r, &parse_poly(&r, f).unwrap()).unwrap().render()
}

#[test]
fn charideal_with_torsion_part() {
    let (code, out, _) = charid(&["charideal"], Some("b_mod_s_pt.json"));
    assert_eq!(code, 0);
    assert_eq!(out, "ch: p^0 * (1)\nch_torsion(t): p^0 * (s)\nch_quotient(t): p^0 * (s)\n");
}

#[test]
fn charideal_expands_the_prime() {
    let (code, out, _) = charid(&["charideal"], Some("b_mod_p2_s_t.json"));
    assert_eq!(code, 0);
    let first = out.lines().next().unwrap();
    assert_eq!(first, format!("ch: {}", render(5, &["s", "t"], "25 + s + t")));
    assert!(!first.contains("p^2"));
}

#[test]
fn zero_and_free_modules() {
    assert_eq!(charid(&["charideal"], Some("zero_module.json")).1, "ch: p^0 * (1)\n");
    assert_eq!(charid(&["charideal"], Some("free_module.json")).1, "ch: 0\n");
}

#[test]
fn descent_check_exit_codes() {
    let (code, out, _) = charid(&["descent-check"], Some("b_mod_p2_s_t.json"));
    assert_eq!(code, 0);
    assert!(out.contains("identity_holds: true"));
    assert!(out.contains(&format!("ch_quotient: {}", render(5, &["s"], "25 + s"))));
}

#[test]
fn pseudonull_verdicts() {
    let (code, out, _) = charid(&["pseudonull"], Some("b_mod_p_s.json"));
    assert_eq!((code, out.as_str()), (0, "pseudo_null: true\nmethod: descent\n"));
    let (code, out, _) = charid(&["pseudonull"], Some("b_mod_p2_s_t.json"));
    assert_eq!((code, out.as_str()), (0, "pseudo_null: false\nmethod: descent\n"));
    let (code, out, _) = charid(&["pseudonull"], Some("zero_module.json"));
    assert_eq!((code, out.as_str()), (0, "pseudo_null: true\nmethod: direct\n"));
}

#[test]
fn tower_limit_verdicts() {
    let (code, out, _) = charid(&["tower-limit"], Some("constant_tower.json"));
    assert_eq!(code, 0);
    assert!(out.starts_with("verdict: defined\n"));
    assert!(out.contains(&format!("limit: {}", render(5, &["t1", "t2", "t3"], "5 + t1"))));
    let (code, out, _) = charid(&["tower-limit"], Some("hyp1_tower.json"));
    assert_eq!(code, 1);
    assert!(out.starts_with("verdict: hypothesis failed at d=2 (hyp1)\n"));
}

#[test]
fn oracle_growth_fit() {
    let (code, out, _) = charid(&["oracle-growth"], Some("lambda1_pt.json"));
    assert_eq!(code, 0);
    assert!(out.starts_with("mu: 1\nlambda: 1\n"));
}

#[test]
fn invalid_inputs_exit_2() {
    let (code, out, err) = charid(&["charideal"], Some("unknown_field.json"));
    assert_eq!((code, out.as_str()), (2, ""));
    assert!(err.contains("unknown field"));
    assert_eq!(charid(&["charideal"], Some("bad_poly.json")).0, 2);
    assert_eq!(charid(&["charideal"], Some("missing.json")).0, 2);
    assert_eq!(charid(&["tower-limit"], Some("b_mod_p_s.json")).0, 2);
    assert_eq!(charid(&["oracle-growth"], Some("b_mod_p2_s_t.json")).0, 2);
    assert_eq!(charid(&["frobnicate"], None).0, 2);
}

#[test]
fn precision_failures_exit_3() {
    let (code, out, _) = charid(&["--json", "--degree-cap", "1", "descent-check"], Some("b_mod_p2_s_t.json"));
    assert_eq!(code, 3);
    let e: ErrorOutput = serde_json::from_str(&out).unwrap();
    assert_eq!(e.error, "degree_cap_exceeded");
    assert_eq!(e.exit_code, 3);
}

#[test]
fn json_outputs_round_trip() {
    let (_, out, _) = charid(&["--json", "charideal"], Some("b_mod_s_pt.json"));
    let c: CharIdealOutput = serde_json::from_str(&out).unwrap();
    assert_eq!(c.ch_torsion.unwrap().rendered, "p^0 * (s)");
    let (_, out, _) = charid(&["--json", "pseudonull"], Some("b_mod_p_s.json"));
    let p: PseudoNullOutput = serde_json::from_str(&out).unwrap();
    assert!(p.pseudo_null);
    let (_, out, _) = charid(&["--json", "descent-check"], Some("b_mod_p2_s_t.json"));
    let d: DescentSummary = serde_json::from_str(&out).unwrap();
    assert!(d.identity_holds);
    assert_eq!(serde_json::to_value(&d).unwrap(), serde_json::from_str::<serde_json::Value>(&out).unwrap());
    let (_, out, _) = charid(&["--json", "tower-limit"], Some("hyp1_tower.json"));
    let t: TowerSummary = serde_json::from_str(&out).unwrap();
    assert_eq!(t.failed_level, Some(2));
    let (_, out, _) = charid(&["--json", "oracle-growth"], Some("lambda1_pt.json"));
    let g: GrowthFit = serde_json::from_str(&out).unwrap();
    assert_eq!((g.mu, g.lambda), (1, 1));
}

#[test]
fn precision_override_keeps_answers() {
    let (_, base, _) = charid(&["descent-check"], Some("b_mod_p2_s_t.json"));
    let (code, wide, _) = charid(&["--precision", "10", "--degree-cap", "20", "descent-check"], Some("b_mod_p2_s_t.json"));
    assert_eq!(code, 0);
    assert_eq!(base, wide);
}

#[test]
fn output_is_independent_of_thread_count() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_charid"))
            .env("RAYON_NUM_THREADS", threads)
            .args(["--json", "tower-limit"])
            .arg(data("constant_tower.json"))
            .output()
            .unwrap();
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn selftest_json_is_structured() {
    let cli = <charid::Cli as clap::Parser>::parse_from(["charid", "--json", "--seed", "7", "selftest"]);
    let out = charid::run(&cli);
    let s: SelftestOutput = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(s.seed, 7);
    assert_eq!(s.suites.len(), 5);
    assert!(s.accepted, "{:#?}", s.suites);
    assert_eq!(out.code, 0);
}
