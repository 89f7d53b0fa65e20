use hamel::cli::run;
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String) {
    let out = run(std::iter::once("hamel").chain(args.iter().copied()));
    (out.code, out.stdout)
}

fn json(args: &[&str]) -> Value {
    let (code, out) = invoke(args);
    assert_eq!(code, 0, "{args:?}: {out}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn golden_outputs() {
    assert_eq!(json(&["transpose", "x1*d2 - x2*d1", "--dims", "2"])["text"], "x2*d1 - x1*d2");
    let fundsol = json(&["fundsol", "d1 + 1", "--order", "8"]);
    let expected: Vec<&str> = vec!["1", "1", "2", "6", "24", "120", "720", "5040", "40320"];
    assert_eq!(fundsol["sequence"], serde_json::json!(expected));
    assert_eq!(json(&["card", "dim-dual", "--dim", "c", "--field-card", "c"]), "c+");
    let lewy = "d1 + i*d2 - 2*i*(x1+i*x2)*d3";
    let negated = hamel::diffops::DiffOp::parse(lewy).unwrap().neg().to_string();
    assert_eq!(json(&["transpose", lewy])["text"], negated.as_str());
    assert_eq!(negated, "-d1 - i*d2 + 2*i*x1*d3 - 2*x2*d3");
}

#[test]
fn outputs_are_deterministic() {
    let cases: &[&[&str]] = &[
        &["transpose", "x1*d2 - x2*d1"],
        &["regularity", "x1*d2 - x2*d1", "-N", "4"],
        &["fundsol", "d1 + 1", "-N", "10"],
        &["weak-limit", "--box", "-N", "6"],
        &["card", "table"],
        &["moments", "--piece", "0:1:x", "--piece", "1:2:2-x", "-N", "4"],
    ];
    for args in cases {
        let first = invoke(args);
        assert_eq!(first.0, 0, "{args:?}");
        assert_eq!(invoke(args), first);
    }
}

#[test]
fn json_outputs_round_trip() {
    let op = json(&["transpose", "x1^2*d1 + 3/2*d2"]);
    let back: hamel::diffops::DiffOp = serde_json::from_value(op.clone()).unwrap();
    assert_eq!(serde_json::to_value(&back).unwrap(), op);

    let f = json(&["fundsol", "d1 - 2", "-N", "5"]);
    let back: hamel::duals::Functional = serde_json::from_value(f.clone()).unwrap();
    assert_eq!(back.sequence().unwrap().len(), 6);
    let text = serde_json::to_string(&back).unwrap();
    let again: hamel::duals::Functional = serde_json::from_str(&text).unwrap();
    assert_eq!(again, back);
}

#[test]
fn solve_dual_reads_json_and_text() {
    let op = r#"{"dims":1,"shift":0,"columns":[[[0],{"entries":[[[0],"2"]]}]],"default":"identity"}"#;
    let t = json(&["solve-dual", op, "delta", "-N", "3"]);
    assert_eq!(t["sequence"], serde_json::json!(["1/2", "0", "0", "0"]));
    let t = json(&["solve-dual", "d1 + 1", "delta", "-N", "3"]);
    assert_eq!(t["sequence"], serde_json::json!(["1", "-1", "2", "-6"]));
}

#[test]
fn basis_and_convolution_commands() {
    let vs = r#"[{"entries":[[[1],"1"]]},{"entries":[[[1],"2"]]},{"entries":[["a","1"]]}]"#;
    assert_eq!(json(&["basis", "rank", vs]), 2);
    let free = json(&["basis", "is-free", vs]);
    assert_eq!(free["witness"], serde_json::json!(["-2", "1", "0"]));
    let s = r#"{"dims":1,"horizon":3,"moments":[[[0],"1"],[[1],"1"],[[2],"1"],[[3],"1"]]}"#;
    let p = r#"{"dims":1,"atoms":[{"at":["1"]}]}"#;
    let c = json(&["convolve", s, p]);
    assert_eq!(c["sequence"], serde_json::json!(["1", "2", "4", "8"]));
}

#[test]
fn files_and_output_flag() {
    let dir = std::env::temp_dir().join(format!("hamel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("op.txt");
    std::fs::write(&input, "d1 + 1").unwrap();
    let output = dir.join("out.json");
    let arg = format!("@{}", input.display());
    let (code, stdout) = invoke(&["fundsol", &arg, "-N", "3", "--output", output.to_str().unwrap()]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["sequence"], serde_json::json!(["1", "1", "2", "6"]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_and_usage() {
    let (code, out) = invoke(&["fundsol", "d1", "-N", "3"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"], "not_injective");
    assert!(v["obstruction"].is_object());
    let (code, out) = invoke(&["transpose", "x1 * * d1"]);
    assert_eq!(code, 1);
    assert!(out.contains("\"position\":5"), "{out}");
    assert_eq!(invoke(&["transpose"]).0, 2);
    assert_eq!(invoke(&["card", "pow", "2"]).0, 2);
    assert_eq!(invoke(&["--field", "GF:4", "transpose", "d1"]).0, 2);
    let (code, out) = invoke(&["weak-limit", r#"{"dims":1,"entries":[[[0],{"num":["0","1"],"den":["1"]}]]}"#, "-N", "2"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("divergent") || out.contains("diverg"), "{out}");
}

#[test]
fn text_mode() {
    let (code, out) = invoke(&["fundsol", "d1 + 1", "-N", "3", "--text"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(0)  1\n(1)  1\n(2)  2\n(3)  6\n");
    assert_eq!(invoke(&["card", "succ", "c", "--text"]).1, "c+\n");
}
