use std::process::{Command, Output};

use serde_json::Value;

fn superconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superconf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Vec<Value>, String, i32) {
    let mut full = args.to_vec();
    full.push("--json");
    let out = superconf(&full);
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    let parsed: Vec<Value> = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (parsed, text, out.status.code().expect("exit code"))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn lemma_suite_passes_with_zero_residuals() {
    let (reports, _, code) = json(&["verify", "lemmas"]);
    assert_eq!(code, 0);
    assert_eq!(reports.len(), 7);
    for r in &reports {
        assert_eq!(r["status"], "pass", "{r}");
    }
    assert_eq!(reports[0]["check"], "odd-quartic-reduction");
    assert_eq!(reports[0]["payload"]["residual"], "0");
    assert_eq!(reports[1]["payload"]["residual"], "0");
}

#[test]
fn jacobi_suite_on_ramond_sector() {
    let (reports, _, code) = json(&["verify", "algebra", "--sector", "n2-ramond", "--max-index", "6"]);
    assert_eq!(code, 0);
    assert_eq!(reports[0]["payload"]["triples"], "148877");
    assert_eq!(reports[0]["payload"]["failure_count"], "0");
}

#[test]
fn embedding_suite_passes() {
    let (reports, _, code) = json(&["verify", "embedding", "--max-index", "3"]);
    assert_eq!(code, 0);
    assert_eq!(reports.len(), 2);
}

#[test]
fn corrupted_table_fails_with_residual() {
    let (reports, _, code) = json(&["verify", "modules", "--family", "rabc", "--perturb", "rabc-raising-sign"]);
    assert_eq!(code, 1);
    assert_eq!(reports[0]["status"], "fail");
    let failures = reports[0]["payload"]["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(failures.iter().all(|f| f["residual"] != "0"));

    let (clean, _, code) = json(&["verify", "modules"]);
    assert_eq!(code, 0);
    assert_eq!(clean.len(), 4);
}

#[test]
fn classify_degenerate_rabc_reports_v_minus_witness() {
    let (reports, _, code) = json(&["classify", "--family", "rabc", "--a", "1/5", "--b", "1", "--c", "0"]);
    assert_eq!(code, 0);
    let r = &reports[0];
    assert_eq!(r["status"], "witness");
    assert_eq!(r["payload"]["verdict"], "not-simple");
    let witnesses = r["payload"]["maximal_witnesses"].as_array().unwrap();
    assert!(witnesses
        .iter()
        .any(|w| strings(&w["basis"]["0"]) == ["v-_0", "v+-_0"] && strings(&w["basis"]["3"]) == ["v-_3", "v+-_3"]));
}

#[test]
fn classify_published_examples() {
    let (r, _, _) = json(&["classify", "--family", "a", "--a", "0", "--b", "0"]);
    assert_eq!(r[0]["payload"]["verdict"], "not-simple");
    let w = &r[0]["payload"]["maximal_witnesses"][0];
    assert_eq!(strings(&w["basis"]["0"]), ["v_0"]);
    assert_eq!(strings(&w["basis"]["1"]), Vec::<String>::new());

    let (r, _, code) = json(&["classify", "--family", "rabc", "--a", "1/3", "--b", "0", "--c", "0"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["status"], "pass");
    assert_eq!(r[0]["payload"]["verdict"], "simple");
    assert_eq!(r[0]["payload"]["witness_count"], "0");

    let (r, _, _) = json(&["classify", "--family", "at", "--a", "0", "--b", "0", "--c", "3"]);
    assert_eq!(r[0]["payload"]["verdict"], "simple");
    let (r, _, _) = json(&["classify", "--family", "rab", "--a", "0", "--b", "1"]);
    assert_eq!(r[0]["payload"]["verdict"], "not-simple");
}

#[test]
fn character_examples() {
    let (r, _, code) = json(&["character", "--sector", "n2-ramond", "--depth", "1"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&r[0]["payload"]["dims"]), ["2", "8"]);
    assert_eq!(strings(&r[0]["payload"]["oracle"]), ["2", "8"]);
    assert_eq!(r[0]["payload"]["match"], true);
    let (r, _, _) = json(&["character", "--sector", "n1-ramond", "--depth", "0"]);
    assert_eq!(strings(&r[0]["payload"]["dims"]), ["2"]);
    let (r, _, _) = json(&["character", "--sector", "n2-ns", "--depth", "0"]);
    assert_eq!(strings(&r[0]["payload"]["dims"]), ["1"]);
}

#[test]
fn intertwine_examples() {
    let (r, _, code) = json(&["intertwine", "--family", "a", "--a", "1/3", "--b", "2", "--to-a", "4/3"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["payload"]["dimension"], "1");
    assert_eq!(strings(&r[0]["payload"]["basis_at_label_0"][0]), ["v_0 -> 1*v_-1"]);

    let (r, _, code) = json(&[
        "intertwine", "--family", "rabc", "--a", "1/5", "--b", "1", "--c", "0", "--sub", "v-,v+-",
        "--to-family", "rab", "--to-c", "0",
    ]);
    assert_eq!(code, 0, "{:?}", r);
    assert_eq!(r[0]["payload"]["bijective"], true);

    let (_, _, code) = json(&[
        "intertwine", "--family", "rabc", "--a", "1/5", "--b", "1", "--c", "0", "--sub", "v-,v+-",
        "--to-family", "rab", "--to-b", "2", "--to-c", "0",
    ]);
    assert_eq!(code, 1);

    let (r, _, code) = json(&["intertwine", "--family", "rab", "--a", "1/3", "--b", "2", "--to-flip", "--parity-reversing"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["payload"]["bijective"], true);
}

#[test]
fn submodules_of_a00() {
    let (r, _, code) = json(&["submodules", "--family", "a", "--window", "-6:6"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["status"], "witness");
    assert_eq!(r[0]["payload"]["invariant"], true);
    assert_eq!(r[0]["payload"]["maximal"].as_array().unwrap().len(), 1);
}

#[test]
fn json_round_trips_byte_identically() {
    let (parsed, text, _) = json(&["classify", "--family", "rabc", "--a", "0", "--b", "1", "--c", "0"]);
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", "--family", "rabc", "--a", "1/5", "--b", "1", "--c", "0", "--json"];
    let a = superconf(&args).stdout;
    let b = superconf(&args).stdout;
    assert_eq!(a, b);
    let text_args = ["verify", "lemmas"];
    assert_eq!(superconf(&text_args).stdout, superconf(&text_args).stdout);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["classify", "--family", "rabc", "--a", "0.2"],
        vec!["classify", "--family", "nope"],
        vec!["classify", "--family", "a", "--window", "5:-5"],
        vec!["character", "--depth", "13"],
        vec!["verify", "embedding", "--sector", "n1-ramond"],
        vec!["verify", "algebra", "--family", "a"],
        vec!["frobnicate"],
    ] {
        let out = superconf(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}
