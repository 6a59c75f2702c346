use std::process::{Command, Output};

fn ssb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssb")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn normalize_prints_form_and_steps() {
    let o = ssb(&["normalize", "[b1 c1 a1 C1 c1]_2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("[a1 b1 c1]_2\n"));
}

#[test]
fn normalize_json_has_certificate() {
    let o = ssb(&["--json", "normalize", "[C1 c1 a1 a1]_2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["normal_form"], "[a1]_2");
    assert!(v["certificate"]["steps"].is_array());
}

#[test]
fn equiv_output_replays() {
    let o = ssb(&["--json", "equiv", "[a2 C1 b2 c1]_3", "[]_1"]);
    assert_eq!(o.status.code(), Some(0));
    let path = std::env::temp_dir().join(format!("ssb-cert-{}.json", std::process::id()));
    std::fs::write(&path, &o.stdout).unwrap();
    let r = ssb(&["replay", path.to_str().unwrap()]);
    assert!(r.status.success(), "{}", stdout(&r));
    assert!(stdout(&r).starts_with("valid"));

    // Corrupt one step: replay reports it and fails.
    let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let steps = v["certificate"]["steps"].as_array_mut().unwrap();
    let last = steps.len() - 1;
    steps[last]["position"] = serde_json::json!(99);
    std::fs::write(&path, v.to_string()).unwrap();
    let r = ssb(&["replay", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(r.status.code(), Some(1));
    assert!(stdout(&r).contains(&format!("step {last}")));
}

#[test]
fn open_equiv_with_rule_filter() {
    let o = ssb(&[
        "equiv", "--open", "--strands", "3", "--rules", "A1-A13", "a2 C1 b2 c1 delta(3,1)^2", "a2 C1 b2 c1",
    ]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("A14"));
}

#[test]
fn unknown_has_its_own_exit_code() {
    let o = ssb(&["equiv", "--max-exp", "200", "[c1]_2", "[c1 c1 c1]_2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("Unknown"));
}

#[test]
fn errors_exit_one() {
    let o = ssb(&["euler", "[x1]_2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn euler_and_csb_check() {
    let o = ssb(&["euler", "[c1 a1]_2"]);
    assert!(stdout(&o).contains("chi = 1"));
    let o = ssb(&["--json", "csb-check", "[c1 c1 c1 a1]_2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["csb"], "not in CSB");
}

#[test]
fn resolve_exports_pd() {
    let o = ssb(&["--json", "resolve", "--sign", "minus", "--pd", "[a2 C1 b2 c1]_3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["components"], 2);
    let pd = v["pd"].as_str().unwrap().to_string();
    let s = ssb(&["simplify", "--pd", &pd]);
    assert!(stdout(&s).contains("2 components"), "{}", stdout(&s));
}

#[test]
fn dnk_and_twist_spin() {
    let o = ssb(&["--json", "dnk", "2", "3", "--emit-pd"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["crossings"], 18);
    assert_eq!(v["components"], 2);
    let o = ssb(&["twist-spin", "--strands", "3", "--twists", "-1", "c1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("[a2 c1 b2 C1"));
}

#[test]
fn simplify_respects_move_set() {
    let o = ssb(&["simplify", "--moves", "r1,r2", "s1 S1 s1"]);
    assert!(stdout(&o).contains("R3:0"));
    let o = ssb(&["simplify", "--max-exp", "500", "s1 s1 s1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_small() {
    let o = ssb(&["classify", "--max-len", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("[a1 b1 c1]_2"));
}
