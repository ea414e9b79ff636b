use std::fs;
use std::path::PathBuf;

use atspp_cli::run_command;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("atspp-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("atspp").chain(args.iter().copied());
    let code = run_command(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn fig1_ratio_line() {
    let f = scratch("fig1-k4.json");
    let f = f.to_str().unwrap();
    assert_eq!(run(&["gen", "fig1", "--k", "4", "-o", f]).0, 0);
    let (code, out, _) = run(&["ratio", f]);
    assert_eq!(code, 0);
    assert!(out.contains("LP=4 "), "{out}");
    assert!(out.contains("OPT=7 "), "{out}");
    assert!(out.contains("ratio=7/4 "), "{out}");
}

#[test]
fn fig4_min_gap() {
    let f = scratch("fig4.json");
    let f = f.to_str().unwrap();
    assert_eq!(run(&["gen", "fig4", "-o", f]).0, 0);
    let (code, out, _) = run(&["dual", f, "--min-gap"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("delta_star = 1 "), "{out}");
    let json: serde_json::Value = serde_json::from_str(out.split_once('\n').unwrap().1).unwrap();
    assert_eq!(json["delta_star"], "1");
    assert_eq!(json["objective"], "1");
}

#[test]
fn unreachable_target_is_rejected() {
    let f = scratch("cut.json");
    fs::write(
        &f,
        r#"{"name":"cut","mode":"atspp","vertices":["s","a","t"],
            "edges":[{"tail":"s","head":"a","cost":"1"},{"tail":"t","head":"s","cost":"1"}],
            "s":"s","t":"t"}"#,
    )
    .unwrap();
    let (code, _, err) = run(&["ratio", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("no finite tour exists"), "{err}");
}

#[test]
fn incomparable_components_are_rejected() {
    let f = scratch("fork.json");
    fs::write(
        &f,
        r#"{"name":"fork","mode":"atspp","vertices":["s","a","b","t"],
            "edges":[{"tail":"s","head":"a","cost":"1"},{"tail":"s","head":"b","cost":"1"},
                     {"tail":"a","head":"t","cost":"1"},{"tail":"b","head":"t","cost":"1"}],
            "s":"s","t":"t"}"#,
    )
    .unwrap();
    let (code, _, err) = run(&["lp", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("no finite tour exists"), "{err}");
}

#[test]
fn size_cap_exits_with_two() {
    let f = scratch("fig1-k10.json");
    let f = f.to_str().unwrap();
    assert_eq!(run(&["gen", "fig1", "--k", "10", "-o", f]).0, 0);
    let (code, _, err) = run(&["opt", f]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn bad_input_exits_with_one() {
    assert_eq!(run(&["gen", "fig1", "--k", "0", "-o", "/dev/null"]).0, 1);
    assert_eq!(run(&["lp", "/nonexistent/file.json"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
}

#[test]
fn report_csv_is_deterministic() {
    let a = scratch("a.csv");
    let b = scratch("b.csv");
    for path in [&a, &b] {
        let (code, _, err) = run(&["report", "--family", "fig1", "--k", "2..6", "--csv", path.to_str().unwrap(), "--no-timing"]);
        assert_eq!(code, 0, "{err}");
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,n,m,lp,opt,ratio,delta_star,merge_ok,ms");
    let ratios: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(5).unwrap()).collect();
    assert_eq!(ratios, ["3/2", "5/3", "7/4", "9/5", "11/6"]);
}

#[test]
fn generated_instances_round_trip() {
    let base = scratch("nw.json");
    let base = base.to_str().unwrap();
    let args = ["gen", "random", "--n", "4", "--seed", "7", "--node-weighted", "--atsp", "-o", base];
    assert_eq!(run(&args).0, 0);
    let red = scratch("nw-red.json");
    let (code, out, err) = run(&["gen", "nw2uw", base, "--eps", "1/2", "-o", red.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("scale M = "), "{out}");
    let split = scratch("split.json");
    let (code, _, err) = run(&["gen", "split", base, "--v", "v2", "--style", "out-in", "-o", split.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let bem = scratch("bem.json");
    assert_eq!(run(&["gen", "bem", "--l", "4", "--i", "0", "--raw", "-o", bem.to_str().unwrap()]).0, 0);
    let (code, out, _) = run(&["lp", bem.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("LP = "), "{out}");
}

#[test]
fn merge_reports_audits() {
    let f = scratch("fig1-k2.json");
    let f = f.to_str().unwrap();
    run(&["gen", "fig1", "--k", "2", "-o", f]);
    let (code, out, err) = run(&["merge", f, "--d", "3"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("audit: cost <= C_R - d*LP"), "{out}");
}
