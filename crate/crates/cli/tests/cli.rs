use std::io::Write;
use std::process::{Command, Output, Stdio};

const FIVE_PIECES: &str = "max(3*x1-4*x2+1, -3*x1-x2-2, 2*x1+x2-1, 3*x1+2*x2+2, -2*x1+4*x2+3)";
const EXAMPLE_G: &str = "max(x1, x1 + x2, x2 + max(x1 + x2 - 7, x1 + 6*x2 + 4) + 3*min(4*x2, x1 - 9, x1 - x2))";

fn pwlmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwlmax")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn eval_prints_exact_value() {
    let o = pwlmax(&["eval", "-n", "2", "max(x1,x1+x2)", "--at", "2,3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "5\n");
    let o = pwlmax(&["eval", "-n", "1", "min(x1, 1/3)", "--at", "-1/2"]);
    assert_eq!(stdout(&o), "-1/2\n");
    let o = pwlmax(&["eval", "-n", "1", "-max(x1, 0) + 1", "--at", "3"]);
    assert_eq!(stdout(&o), "-2\n");
}

#[test]
fn reduce_example_to_height_two() {
    let o = pwlmax(&["--output-format", "json", "reduce", "-n", "2", EXAMPLE_G]);
    assert!(o.status.success());
    let v = json(&o);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 7);
    assert!(terms.iter().all(|t| t["max"].as_array().unwrap().len() <= 3));
}

#[test]
fn reduce_writes_dot_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.dot");
    let o = pwlmax(&["reduce", "-n", "2", FIVE_PIECES, "--trace", path.to_str().unwrap()]);
    assert!(o.status.success());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("label=\"m_12345\\nα=("));
    assert!(dot.contains("// tree 0: g1 = 3*x1 - 4*x2 + 1"));
    assert!(dot.contains("-> "));
}

#[test]
fn reduce_writes_json_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let o = pwlmax(&["reduce", "-n", "2", FIVE_PIECES, "--trace", path.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v[0]["label"], "m_12345");
    assert!(!v[0]["children"].as_array().unwrap().is_empty());
}

#[test]
fn kernel_strategies_are_accepted() {
    for s in ["first", "last", "random", "random:7"] {
        let o = pwlmax(&["reduce", "-n", "2", FIVE_PIECES, "--kernel-strategy", s]);
        assert!(o.status.success(), "{s}");
    }
    let o = pwlmax(&["reduce", "-n", "2", FIVE_PIECES, "--kernel-strategy", "middle"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn expand_reports_statistics() {
    let o = pwlmax(&["--output-format", "json", "expand", "-n", "2", EXAMPLE_G]);
    let v = json(&o);
    assert_eq!(v["stats"]["summands"], 49);
    assert_eq!(v["lincomb"]["n"], 2);
}

#[test]
fn equiv_exit_codes() {
    let o = pwlmax(&["equiv", "-n", "1", "max(0,x1)", "max(0,2*x1)"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("not-equal"));
    let o = pwlmax(&["equiv", "-n", "2", "min(x1,x2)", "x1+x2-max(x1,x2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "equal\n");
}

#[test]
fn equiv_json_report_with_sampling() {
    let o = pwlmax(&[
        "--output-format",
        "json",
        "--samples",
        "200",
        "--seed",
        "9",
        "equiv",
        "-n",
        "3",
        "--method",
        "sample",
        "max(x1, x2, x3)",
        "max(x3, max(x2, x1))",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["verdict"], "probably-equal");
    assert_eq!(v["samples"], 200);
    assert_eq!(v["seed"], 9);
}

#[test]
fn outputs_are_deterministic() {
    let args = ["--output-format", "json", "probe", "-n", "2", FIVE_PIECES];
    assert_eq!(pwlmax(&args).stdout, pwlmax(&args).stdout);
    let args = [
        "--output-format",
        "json",
        "equiv",
        "-n",
        "2",
        "--method",
        "sample",
        "max(x1,1)",
        "max(x1,x2)",
    ];
    let (a, b) = (pwlmax(&args), pwlmax(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(3));
}

#[test]
fn relu_network_json() {
    let three = "4*max(-x1 + 3*x2 + 2, 0) - 5*max(2*x1 - 3, 0) + 6*max(5*x2 + 1, 0) + 8";
    let o = pwlmax(&["--output-format", "json", "relu", "-n", "2", three]);
    let v = json(&o);
    assert_eq!(v["stats"]["depth"], 2);
    assert_eq!(v["stats"]["max_width"], 3);
    assert_eq!(v["network"]["n_in"], 2);
    assert_eq!(v["network"]["layers"][1]["activation"], "linear");
    let o = pwlmax(&["--output-format", "json", "relu", "-n", "2", "max(0,x1,x2)", "--floats"]);
    let v = json(&o);
    assert_eq!(v["stats"]["depth"], 3);
    assert!(v["network"]["layers"][0]["bias"][0].is_f64());
}

#[test]
fn polytope_operations() {
    let o = pwlmax(&["polytope", "tau", "-n", "2", "max(x1, x2)"]);
    assert_eq!(stdout(&o), "(0, 1) -- (1, 0)\n");
    let o = pwlmax(&[
        "polytope",
        "minkowski",
        "-n",
        "2",
        "max(x1, 0)",
        "max(x2, 0)",
        "--output-format",
        "json",
    ]);
    assert_eq!(json(&o)["points"].as_array().unwrap().len(), 4);
    let o = pwlmax(&["polytope", "support", "-n", "2", "max(x1, x2)", "--dir", "-1,2"]);
    assert_eq!(stdout(&o), "2\n");
    let o = pwlmax(&["polytope", "face", "-n", "2", "max(x1, x2, -x1)", "--dir", "0,-1"]);
    assert!(o.status.success());
    let o = pwlmax(&["polytope", "tau", "-n", "2", "max(x1, 1)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reads_expressions_from_files_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.txt");
    std::fs::write(&path, "max(x1, 2*x1)\n").unwrap();
    let at = format!("@{}", path.display());
    let o = pwlmax(&["eval", "-n", "1", &at, "--at", "3"]);
    assert_eq!(stdout(&o), "6\n");

    let mut child = Command::new(env!("CARGO_BIN_EXE_pwlmax"))
        .args(["eval", "-n", "1", "-", "--at", "-2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"min(x1, 0)").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "-2\n");
}

#[test]
fn parse_errors_exit_with_two() {
    let o = pwlmax(&["eval", "-n", "2", "max(x1,", "--at", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: syntax error"));

    let o = pwlmax(&["--output-format", "json", "eval", "-n", "2", "x3", "--at", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "variable_out_of_range");
    assert_eq!(v["error"]["position"], 0);

    let o = pwlmax(&["eval", "-n", "0", "x1", "--at", "1"]);
    assert_eq!(o.status.code(), Some(2));
}
