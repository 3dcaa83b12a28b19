use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_arrovian"));
    c.env_remove("ARROVIAN_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, body: &str) -> PathBuf {
    let p = tmp(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn orders_counts_and_range() {
    let o = run(&["orders", "-m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("13 weak orders on 3 alternatives\n"));
    assert_eq!(stdout(&o).lines().count(), 14);
    let o = run(&["orders", "-m", "3", "--linear", "--json"]);
    let v = json(&o);
    assert_eq!(v["count"], 6);
    assert_eq!(v["orders"].as_array().unwrap().len(), 6);
    assert_eq!(v["orders"][0], "A>B>C");
    let o = run(&["orders", "-m", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("range"));
}

#[test]
fn condorcet_default_reports_the_cycle() {
    let o = run(&["condorcet-demo"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("voter 1: C>A>B"));
    assert!(text.contains("majority relation: A>B, B>C, C>A"));
    assert!(text.contains("cycle: A>B>C>A"));
    let v = json(&run(&["condorcet-demo", "--json"]));
    assert_eq!(v["weak_order"], false);
    assert_eq!(v["cycle"], "A>B>C>A");
    assert_eq!(v["violation"]["axiom"], "negative_transitivity");
}

#[test]
fn condorcet_profile_override() {
    let p = write("unanimous.json", r#"{"prefs": ["B>A>C", "B>A>C", "B>A>C"]}"#);
    let o = run(&["condorcet-demo", "--profile", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: PASS  majority order B>A>C"));

    let bad = write("malformed.json", "{\"prefs\": [\"A>B>C\",\n  \"A>Q>C\"]}");
    let o = run(&["condorcet-demo", "--profile", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("prefs[1]"), "{}", stderr(&o));

    let broken = write("broken.json", "{\"prefs\": [\n");
    let o = run(&["condorcet-demo", "--profile", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

fn builtin(kind: &str, voters: &str, extra: &[&str], name: &str) -> PathBuf {
    let p = tmp(name);
    let mut args = vec!["builtin", kind, "--voters", voters, "-o", p.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    p
}

#[test]
fn axioms_on_a_dictator() {
    let p = builtin("dictator", "2", &["--voter", "1"], "dictator1.json");
    let o = run(&["axioms", "--swf", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("a5 FAIL  no dictator: voter 1 is a dictator"));
    assert!(text.contains("a4 PASS"));
    let v = json(&run(&["axioms", "--swf", p.to_str().unwrap(), "--json"]));
    assert_eq!(v["passed"], false);
    assert_eq!(v["report"]["a5"]["witness"]["voter"], 1);
}

#[test]
fn axioms_on_majority_with_three_voters() {
    let p = builtin("majority", "3", &[], "majority3.json");
    let v = json(&run(&["axioms", "--swf", p.to_str().unwrap(), "--json"]));
    assert_eq!(v["report"]["a2"]["status"], "fail");
    assert_eq!(v["report"]["a2"]["witness"]["kind"], "composition");
    assert_eq!(v["report"]["a4"]["note"], "holds by construction of the pairwise representation");
}

#[test]
fn missing_input_is_a_usage_error() {
    let o = run(&["axioms", "--swf", "/nonexistent/swf.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["infinite-demo"]).status.code(), Some(2));
}

#[test]
fn arrow_search_base_case() {
    let cert = tmp("cert.json");
    let o = run(&["arrow-search", "--alternatives", "3", "--voters", "2", "--domain", "linear", "--certificate", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 survivors, all dictatorial"));
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["schema"], "arrovian.certificate/1");
    assert_eq!(c["survivors"].as_array().unwrap().len(), 2);

    let v = json(&run(&["arrow-search", "--voters", "2", "--json"]));
    assert_eq!(v["survivors"], 2);
    assert_eq!(v["certificate"], c);
}

#[test]
fn arrow_search_guards() {
    assert_eq!(run(&["arrow-search", "--voters", "3"]).status.code(), Some(2));
    assert_eq!(run(&["arrow-search", "--voters", "3", "--domain", "weak"]).status.code(), Some(2));
    let o = run(&["arrow-search", "--voters", "2", "--domain", "weak", "--node-budget", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("budget"));
    let o = run(&["arrow-search", "--voters", "3", "--long"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3 survivors, all dictatorial"));
}

#[test]
fn infinite_demo_witness() {
    let o = run(&["infinite-demo", "--frechet", "--witness", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("({7}, ℕ∖{7}, ∅)"));
    assert!(stdout(&o).contains("voter 7 is not a dictator"));
    let v = json(&run(&["infinite-demo", "--dictator", "4", "--json", "--samples", "200"]));
    assert_eq!(v["membership_agreement"], 200);
    let o = run(&["infinite-demo", "--frechet", "--split", r#"{"first":"fin{1}","second":"fin{1}","tie":"cof{}"}"#]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn filters_commands() {
    let o = run(&["filters", "--enumerate", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3 filters on 2 voters, 2 ultrafilters, 3 fixed"));
    assert_eq!(run(&["filters", "--enumerate", "5"]).status.code(), Some(2));
    let p = write("not_filter.json", r#"{"n": 3, "members": [[0, 1], [1, 2], [0, 1, 2]]}"#);
    let o = run(&["filters", "--family", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(F2)"));
    let p = write("principal.json", r#"{"n": 4, "members": [[2], [0,2], [1,2], [2,3], [0,1,2], [0,2,3], [1,2,3], [0,1,2,3]]}"#);
    let o = run(&["filters", "--family", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("fixed, intersection {2}"));
}

#[test]
fn bridge_extract() {
    let p = builtin("dictator", "2", &["--voter", "1", "--pairwise"], "dictator1_rules.json");
    let o = run(&["bridge", "extract", "--swf", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("decisive coalitions: {{1}, {0,1}}"));
    assert!(stdout(&o).contains("generated by voter 1"));
    let b = builtin("borda", "2", &[], "borda.json");
    let o = run(&["bridge", "extract", "--swf", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not Arrovian"));
}

#[test]
fn manifest_replay_round_trip() {
    let m = tmp("manifest.json");
    let o = run(&["filters", "--enumerate", "3", "--json", "--manifest", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(manifest["command"], "filters");
    assert!(manifest["args"].as_array().unwrap().iter().all(|a| a != "--manifest"));
    let o = run(&["replay", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("replay: reproduced"));

    let mut tampered = manifest.clone();
    tampered["outputs"][0]["sha256"] = Value::from("00");
    let t = write("tampered.json", &tampered.to_string());
    let o = run(&["replay", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("stdout: DIFFERS"));
}

#[test]
fn manifest_on_stderr_and_thread_env() {
    let o = bin().args(["orders", "-m", "2"]).env("ARROVIAN_THREADS", "2").output().unwrap();
    let line = stderr(&o).lines().find(|l| l.starts_with("manifest: ")).unwrap().to_string();
    let v: Value = serde_json::from_str(&line["manifest: ".len()..]).unwrap();
    assert_eq!(v["threads"], 2);
    assert_eq!(v["exit_code"], 0);
    assert_eq!(v["outputs"][0]["name"], "stdout");
}

#[test]
fn human_and_json_counts_agree() {
    let text = stdout(&run(&["filters", "--enumerate", "4"]));
    let v = json(&run(&["filters", "--enumerate", "4", "--json"]));
    let summary = format!(
        "{} filters on 4 voters, {} ultrafilters, {} fixed",
        v["count"], v["ultrafilters"], v["fixed"]
    );
    assert!(text.contains(&summary), "{summary}");
}
