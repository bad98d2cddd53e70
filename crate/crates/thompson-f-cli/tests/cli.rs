use std::process::{Command, Output};

fn fgroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgroup"))
        .args(args)
        .output()
        .expect("spawn fgroup")
}

fn stdout(args: &[&str]) -> String {
    let out = fgroup(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn worked_examples() {
    assert_eq!(stdout(&["length", "x1 x3^3 x6 x7 x10"]).trim(), "17");
    assert_eq!(
        stdout(&["normalize", "x0 x3 x6 x3^-1 x1 x4^-1 x0 x3^-1 x0^-1"]).trim(),
        "x0 x1 x6 x4^-1 x2^-1"
    );
    assert_eq!(stdout(&["normalize", ""]).trim(), "1");
    assert_eq!(stdout(&["antinormal", "x1 x3^3 x6 x7 x10"]).trim(), "x4 x2 x3 x4 x2^2 x1");
}

#[test]
fn arithmetic_commands() {
    assert_eq!(stdout(&["multiply", "x1", "x1^-1"]).trim(), "1");
    assert_eq!(stdout(&["invert", "x0 x1"]).trim(), "x1^-1 x0^-1");
    assert_eq!(stdout(&["abelianize", "x0 x1^-1"]).trim(), "(1, 0)");
    assert_eq!(stdout(&["eval", "x1"]).trim(), "(.,((.,.),.)) | (.,(.,(.,.)))");
}

#[test]
fn geodesic_is_geodesic() {
    let g = stdout(&["geodesic", "x4 x5 x5 x4 x2 x3 x1 x1"]);
    assert_eq!(stdout(&["length", g.trim()]).trim(), "18");
    assert_eq!(
        stdout(&["normalize", g.trim()]).trim(),
        stdout(&["normalize", "x4 x5 x5 x4 x2 x3 x1 x1"]).trim()
    );
}

#[test]
fn ball_and_json() {
    let text = stdout(&["ball", "4"]);
    assert!(text.contains("size 161"));
    assert!(text.contains("[1, 4, 12, 36, 108]"));
    let json = stdout(&["ball", "2", "--json"]);
    let lines: Vec<&str> = json.lines().collect();
    assert_eq!(lines.len(), 17);
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["word"], "1");
    assert_eq!(first["length"], 0);
}

#[test]
fn word_graph_dot() {
    let dot = stdout(&["wordgraph", "x2 x0", "--dot"]);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("label=").count(), 2);
    assert!(dot.contains("x2 x0"));
    assert!(dot.contains("x0 x3"));
}

#[test]
fn strand_commands() {
    let canon = stdout(&["strand", "canon", "x0(1) x0(1)^-1"]);
    assert!(canon.contains("1 -> 1"));
    assert!(canon.contains("word   1@1"));
    let composed = stdout(&["strand", "compose", "x0(1)", "x1(2)"]);
    assert!(composed.contains("1 -> 3"));
    assert!(composed.contains("x0(1) x1(2)"));
    let dot = stdout(&["strand", "render", "x0(1) x1(2) x0(2)^-1", "--dot"]);
    assert!(dot.contains("triangle") && dot.contains("invtriangle"));
}

#[test]
fn verify_suites() {
    let out = stdout(&["verify", "--suite", "all", "--radius", "4", "--seed", "7"]);
    assert!(out.contains("oracle: 161 elements"));
    assert!(out.contains("axioms: 200 random triples"));
}

#[test]
fn exit_codes() {
    assert_eq!(fgroup(&["length", "nonsense"]).status.code(), Some(2));
    assert_eq!(fgroup(&["antinormal", "x0^-1"]).status.code(), Some(3));
    assert_eq!(fgroup(&["pockets", "x0", "--depth", "1"]).status.code(), Some(3));
    assert_eq!(fgroup(&["strand", "canon", "x0(1) x0(1)"]).status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_fgroup"))
        .args(["ball", "9"])
        .env("FGROUP_MAX_ELEMENTS", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn growth_and_iso() {
    let g = stdout(&["growth", "6", "--census"]);
    assert!(g.contains("series 1 2 4 9 20 45 101"));
    assert!(g.contains("census matches series"));
    let iso = stdout(&["iso", "1"]);
    assert!(iso.contains("p_1 = 0.618033988"));
    let sb = stdout(&["subtree-bound", ".", "(.,.)"]);
    assert!(sb.contains("2p = 1.236067977") || sb.contains("2p = 1.236067978"));
    let rand = stdout(&["subtree-bound", "--random", "--seed", "3"]);
    assert!(rand.contains("2p = "));
}
