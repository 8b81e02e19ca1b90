use std::collections::BTreeSet;
use std::process::{Command, Output};

fn dlcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .trim_end()
        .to_string()
}

fn terms(text: &str) -> BTreeSet<String> {
    text.split(" + ").map(str::to_string).collect()
}

#[test]
fn normalize_example() {
    let o = dlcalc(&["normalize", "Q^4 Q^1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Q^3 Q^2");
}

#[test]
fn act_example_as_term_set() {
    let o = dlcalc(&["act", "--model", "MU", "Q^6 b_2", "--cap", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        terms(&stdout(&o)),
        terms("b_5 + b_1 b_4 + b_2 b_3 + b_1 b_2^2")
    );
}

#[test]
fn act_compound_expression() {
    let o = dlcalc(&[
        "act",
        "--model",
        "MU",
        "--cap",
        "12",
        "Q^8 b_1 + b_1^2 * Q^4 b_1",
    ]);
    assert_eq!(
        terms(&stdout(&o)),
        terms("b_5 + b_1 b_4 + b_2 b_3 + b_1 b_2^2")
    );
}

#[test]
fn closure_reports_violation() {
    let o = dlcalc(&["closure", "--sub", "k(2)", "--ops", "Q_1", "--maxdeg", "31"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("xibar2 -> xibar3"), "{}", stdout(&o));
    let o = dlcalc(&["closure", "--sub", "kZ(1)", "--ops", "Q_1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(dlcalc(&["normalize"]).status.code(), Some(2));
    assert_eq!(dlcalc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dlcalc(&["act", "Q^1 nope"]).status.code(), Some(2));
    assert_eq!(dlcalc(&["verify", "nosuch"]).status.code(), Some(2));
}

#[test]
fn json_mirrors_text() {
    let text = stdout(&dlcalc(&["act", "--model", "MU", "Q^4 b_1"]));
    let o = dlcalc(&["act", "--model", "MU", "Q^4 b_1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result_text"], text.as_str());
    assert_eq!(v["command"], "act");
    assert_eq!(v["inputs"]["model"], "MU");
    let rebuilt: BTreeSet<String> = v["result_terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            t.as_array()
                .unwrap()
                .iter()
                .map(|f| {
                    let (g, e) = (f[0].as_str().unwrap(), f[1].as_u64().unwrap());
                    if e == 1 {
                        g.to_string()
                    } else {
                        format!("{g}^{e}")
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    assert_eq!(rebuilt, terms(&text));
}

#[test]
fn free_basis_and_poincare() {
    let o = dlcalc(&[
        "poincare", "--gens", "x:1", "--flavor", "En", "--n", "2", "--maxdeg", "7",
    ]);
    assert_eq!(stdout(&o), "1, 1, 1, 2, 2, 2, 3, 4");
    let o = dlcalc(&[
        "free-basis",
        "--gens",
        "x:1",
        "--flavor",
        "En",
        "--n",
        "2",
        "--maxdeg",
        "3",
    ]);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "3: x^3, Q_1 x"), "{out}");
}

#[test]
fn suspend_and_pow_table() {
    assert_eq!(
        stdout(&dlcalc(&["suspend", "Q_3 Q_1", "--times", "1"])),
        "Q_2 Q_0"
    );
    assert_eq!(stdout(&dlcalc(&["suspend", "Q_0"])), "0");
    let o = dlcalc(&["pow-table", "2", "--n", "3"]);
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = dlcalc(&["pow-table", "2"]);
    assert!(stdout(&o).contains("n = inf"));
}

#[test]
fn brackets_in_en() {
    let o = dlcalc(&[
        "act",
        "--gens",
        "x:1,y:2",
        "--flavor",
        "En",
        "--n",
        "3",
        "[x, y] * [x, y]",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[x,y]^2");
    let o = dlcalc(&["act", "--model", "A", "[xi1, xi2]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_suites() {
    for suite in ["adem", "cupone", "obstructions", "steinberger", "priddy"] {
        let o = dlcalc(&["verify", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("status: ok"));
    }
    let o = dlcalc(&["verify", "adem", "--maxidx", "12", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite_results"][0]["passed"], true);
}

#[test]
fn obstruction_report() {
    let o = dlcalc(&["obstruction"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("b_1 b_2^2 + b_1 b_4 + b_2 b_3 + b_5 (nonzero)"));
}
