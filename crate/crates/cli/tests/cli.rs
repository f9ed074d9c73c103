use std::process::{Command, Output};

fn schur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schur")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn weights_of_degree_two() {
    let o = schur(&["weights", "--n", "2", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[[2,0],[1,1],[0,2]]\n");
}

#[test]
fn dims_char0_mixed() {
    let o = schur(&["dims", "--n", "2", "--r", "1", "--s", "1", "--char", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimensions"]["lambda"], 3);
    assert_eq!(v["dimensions"]["weyl_square_sum"], "10");
    assert_eq!(v["dimensions"]["closure"], 10);
    assert_eq!(v["pass"], true);
}

#[test]
fn counterexample_report() {
    let o = schur(&["counterexample"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("λ = (2,2,0,0)"));
    assert!(out.contains("λ ∈ π′: yes"));
    assert!(out.contains("λ ∈ π″: no"));
    assert!(out.contains("4 > 3"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["present", "--n", "2", "--r", "1", "--s", "1", "--p", "2", "--m", "2", "--format", "text"][..],
        &["rewrite-demo", "--n", "3", "--p", "2", "--m", "2", "--random", "4", "--seed", "9", "--format", "json"][..],
        &["verify", "--n", "2", "--d", "2", "--p", "3", "--format", "json"][..],
    ] {
        let (a, b) = (schur(args), schur(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn present_json_matches_library_golden() {
    let o = schur(&["present", "--n", "2", "--r", "1", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("../../core/tests/golden/char0_rational_2_1_1.json"));
}

#[test]
fn verify_desk_preset_passes() {
    let o = schur(&["verify", "--preset", "desk"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().last().unwrap().ends_with("presentations pass"));
}

#[test]
fn failed_verification_exits_2() {
    let o = schur(&["verify", "--n", "2", "--r", "1", "--s", "1", "--p", "2", "--m", "2", "--literal-j-range"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn invalid_parameters_exit_3() {
    for args in [
        &["present", "--n", "2", "--d", "4", "--p", "2", "--m", "2"][..],
        &["present", "--n", "2", "--d", "1", "--p", "2", "--m", "2", "--format", "xml"][..],
        &["verify", "--n", "1", "--r", "1", "--s", "1", "--p", "2", "--m", "2"][..],
        &["dims", "--n", "2", "--d", "1", "--char", "4"][..],
        &["rewrite-demo", "--n", "2", "--p", "2", "--m", "1", "--word", "y(1,2)"][..],
        &["no-such-command"][..],
    ] {
        assert_eq!(schur(args).status.code(), Some(3), "{args:?}");
    }
}

#[test]
fn resource_cap_exits_4() {
    let o = schur(&["dims", "--n", "4", "--d", "1", "--char", "2", "--m", "7"]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn timing_only_on_stderr() {
    let o = schur(&["-v", "weights", "--n", "2", "--d", "1"]);
    assert_eq!(stdout(&o), "[[1,0],[0,1]]\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("elapsed"));
}
