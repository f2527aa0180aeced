use serde_json::Value;
use ucca_demo::{check, compare, parse};

const APA: &str = "[H [A John] [P kicked] [A [F the] [C ball]]] .";

fn v(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn parse_gives_tree_and_renderings() {
    let out = v(parse(APA, false));
    assert_eq!(out["ok"], true);
    assert_eq!(
        out["right"],
        "[[John A] [kicked P] [[the F] [ball C] A] H] ."
    );
    let scene = &out["tree"]["children"][0];
    assert_eq!(scene["label"], "H");
    assert_eq!(scene["scene"], true);
    let labels: Vec<_> = scene["children"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["label"].clone())
        .collect();
    assert_eq!(labels, ["A", "P", "A"]);
    assert_eq!(scene["children"][2]["words"], "the ball");
}

#[test]
fn parse_reports_errors_and_remotes() {
    let out = v(parse("[H [A John] [P- took]]", false));
    assert_eq!(out["ok"], false);
    assert_eq!(out["kind"], "dangling continuation");
    assert_eq!(out["position"], 13);

    let src = "[H [A John] [P got] [A home]] [L and] [H [P ate] (John A)]";
    let out = v(parse(src, false));
    let remote = &out["tree"]["children"][2]["remotes"][0];
    assert_eq!(remote["label"], "A");
    assert_eq!(remote["words"], "John");

    let amb = "[H [A the dog] [P barked]] [H [A the dog] [P ran]] [H [P slept] (the dog A)]";
    assert_eq!(v(parse(amb, false))["ok"], false);
    let out = v(parse(amb, true));
    assert_eq!(out["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn check_lists_diagnostics() {
    assert_eq!(v(check(APA))["diagnostics"], serde_json::json!([]));
    let out = v(check("[A [A John] [P kicked] [A [F the] [C ball]]] ."));
    assert_eq!(out["diagnostics"][0]["rule"], "R1");
    assert_eq!(out["diagnostics"][0]["severity"], "error");
}

#[test]
fn compare_scores() {
    let out = v(compare(APA, APA, true));
    assert_eq!(out["report"]["labeled"]["primary"]["f1"], 1.0);
    let out = v(compare(
        APA,
        "[H [A John] [P kicked] [D [F the] [C ball]]] .",
        true,
    ));
    let f1 = out["report"]["labeled"]["primary"]["f1"].as_f64().unwrap();
    assert!(f1 > 0.0 && f1 < 1.0);
    let out = v(compare(APA, "[H [A Mary] [P left]]", true));
    assert_eq!(out["ok"], false);
    let out = v(compare("[H", APA, false));
    assert_eq!(out["side"], "gold");
}
