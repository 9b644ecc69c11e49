use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_geovertex")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn apply_multiplication() {
    let (code, out, _) = run(&["apply", "--op", "M[(z-2)/(z-3)]", "--to", "E[1;0]"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1/2*E[1;0]");
}

#[test]
fn apply_outside_domain() {
    let (code, _, err) = run(&["apply", "--op", "M[(z-1)]", "--to", "E[1;0]"]);
    assert_eq!(code, 4);
    assert!(err.contains("point 1"), "{err}");
}

#[test]
fn first_fusion_is_identity() {
    let (code, out, _) = run(&["ope", "--left", "psi[r]", "--right", "psi+[s]", "--at", "s-r", "--order", "1", "--apply", "E[a;0]"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "E[a;0]");
}

#[test]
fn syntax_and_config_codes() {
    assert_eq!(run(&["apply", "--op", "M[(z-2)", "--to", "1"]).0, 3);
    assert_eq!(run(&["verify", "no-such-suite"]).0, 5);
    assert_eq!(run(&["verify", "leibniz", "--grades", "3..1"]).0, 5);
}

#[test]
fn printed_values_reparse() {
    let (_, out, _) = run(&["apply", "--op", "M[1/(z-s)]", "--to", "E[t;2]*E[u;0]"]);
    let (code, again, _) = run(&["apply", "--op", "M[1]", "--to", out.trim()]);
    assert_eq!(code, 0);
    assert_eq!(again, out);
}

#[test]
fn verify_json_is_deterministic() {
    let args = ["verify", "mxi-ez", "--format", "json", "--seed", "7"];
    let (code, a, _) = run(&args);
    assert_eq!(code, 0);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    let last = a.lines().last().unwrap();
    assert!(last.contains("\"passed\":true"), "{last}");
}

#[test]
fn compose_reports_locus() {
    let (code, out, _) = run(&["compose", "--left", "psi[r]", "--right", "psi+[s]"]);
    assert_eq!(code, 0);
    assert!(out.contains("singular locus: -r+s = 0"), "{out}");
}
