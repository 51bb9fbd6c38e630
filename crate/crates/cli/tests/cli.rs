use std::collections::BTreeMap;
use std::io::Write;
use std::process::Command;

use rpq_core::fixtures::{diamond_chain, FAN_IN};
use tempfile::NamedTempFile;

fn graph_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["rpq"];
    argv.extend_from_slice(args);
    let code = rpq_cli::main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn count_on_fan_in() {
    let g = graph_file(FAN_IN);
    let path = g.path().to_str().unwrap();
    let (code, out, _) = run(&["--graph", path, "--source", "v", "--regex", "e* ", "--mode", "count"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "n4\t2\t3"));
    assert!(out.lines().any(|l| l == "n5\t3\t3"));
}

#[test]
fn all_mode_starts_with_empty_path() {
    let g = graph_file(FAN_IN);
    let path = g.path().to_str().unwrap();
    let (code, out, _) = run(&["--graph", path, "--source", "v", "--regex", "e*", "--mode", "all"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("v\t0\tv"));
}

#[test]
fn limit_truncates_and_flags_in_jsonl() {
    let g = graph_file(FAN_IN);
    let path = g.path().to_str().unwrap();
    let base = ["--graph", path, "--source", "v", "--regex", "e e e", "--mode", "all", "--limit", "2"];
    let (code, out, _) = run(&base);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "n5\t3\tv -e-> n1 -e-> n4 -e-> n5\nn5\t3\tv -e-> n2 -e-> n4 -e-> n5\n"
    );

    let mut args = base.to_vec();
    args.extend(["--format", "jsonl"]);
    let (_, out, _) = run(&args);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["node"], "n5");
    assert_eq!(v["depth"], 3);
    assert_eq!(v["paths"].as_array().unwrap().len(), 2);
    assert_eq!(v["truncated"], true);
    assert_eq!(v["paths"][0]["labels"], serde_json::json!(["e", "e", "e"]));

    // a limit that is not hit leaves no flag
    let mut args = base.to_vec();
    args[9] = "3";
    args.extend(["--format", "jsonl"]);
    let (_, out, _) = run(&args);
    assert!(!out.contains("truncated"));
}

#[test]
fn count_matches_number_of_path_lines() {
    let text = "a\tx\tb\na\ty\tb\nb\tx\tc\nb\ty\tc\nc\tx\ta\na\tx\tc\nc\ty\td\n";
    let g = graph_file(text);
    let path = g.path().to_str().unwrap();
    for regex in ["(x|y)*", "x (x|y)* y?", "(x y)+ | x"] {
        let (_, all, _) = run(&["--graph", path, "--source", "a", "--regex", regex, "--mode", "all"]);
        let (_, count, _) = run(&["--graph", path, "--source", "a", "--regex", regex, "--mode", "count"]);
        let mut lines: BTreeMap<String, u64> = BTreeMap::new();
        for l in all.lines() {
            *lines.entry(l.split('\t').next().unwrap().to_owned()).or_default() += 1;
        }
        let counts: BTreeMap<String, u64> = count
            .lines()
            .map(|l| {
                let f: Vec<&str> = l.split('\t').collect();
                (f[0].to_owned(), f[2].parse().unwrap())
            })
            .collect();
        assert_eq!(lines, counts, "{regex}");
    }
}

#[test]
fn modes_and_formats() {
    let g = graph_file("v\ta\tx\nv\tb\tx\nx\ta\ty\n");
    let path = g.path().to_str().unwrap();
    let q = ["--graph", path, "--source", "v", "--regex", "(a|b) a?"];
    let with = |extra: &[&str]| {
        let mut a = q.to_vec();
        a.extend_from_slice(extra);
        run(&a).1
    };
    assert_eq!(with(&["--mode", "reach"]), "x\ny\n");
    assert_eq!(with(&["--mode", "one"]), "x\t1\tv -a-> x\ny\t2\tv -a-> x -a-> y\n");
    assert_eq!(
        with(&["--mode", "reach", "--format", "jsonl"]),
        "{\"node\":\"x\",\"depth\":1}\n{\"node\":\"y\",\"depth\":2}\n"
    );
    assert_eq!(
        with(&["--mode", "count", "--format", "jsonl"]),
        "{\"node\":\"x\",\"depth\":1,\"count\":2}\n{\"node\":\"y\",\"depth\":2,\"count\":2}\n"
    );
}

#[test]
fn query_file_and_automaton_dump() {
    let g = graph_file(FAN_IN);
    let q = graph_file("e e\n");
    let (code, out, err) = run(&[
        "--graph",
        g.path().to_str().unwrap(),
        "--source",
        "v",
        "--query-file",
        q.path().to_str().unwrap(),
        "--mode",
        "reach",
        "--dump-automaton",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "n4\n");
    assert_eq!(err, "# dfa states=3 initial=0 finals=2\n0\te\t1\n1\te\t2\n");
}

#[test]
fn all_sources_prefixes_source() {
    let g = graph_file("a\te\tb\nb\te\tc\n");
    let (code, out, _) = run(&[
        "--graph",
        g.path().to_str().unwrap(),
        "--all-sources",
        "--regex",
        "e",
        "--mode",
        "one",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "a\tb\t1\ta -e-> b\nb\tc\t1\tb -e-> c\n");
}

#[test]
fn exit_codes() {
    let g = graph_file(FAN_IN);
    let path = g.path().to_str().unwrap();
    assert_eq!(run(&["--graph", path, "--source", "nope", "--regex", "e"]).0, 1);
    assert_eq!(run(&["--graph", "/definitely/not/here", "--source", "v", "--regex", "e"]).0, 1);
    assert_eq!(run(&["--graph", path, "--source", "v", "--regex", "(e"]).0, 2);
    assert_eq!(run(&["--graph", path, "--source", "v"]).0, 2);
    assert_eq!(run(&["--graph", path, "--source", "v", "--all-sources", "--regex", "e"]).0, 2);
    assert_eq!(run(&["--graph", path, "--source", "v", "--regex", "e", "--limit", "0"]).0, 2);
    assert_eq!(run(&["--graph", path, "--source", "v", "--regex", "e", "--mode", "paths"]).0, 2);
    let bad = graph_file("a\tb\n");
    let (code, _, err) = run(&["--graph", bad.path().to_str().unwrap(), "--source", "a", "--regex", "b"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn binary_output_is_deterministic_for_large_counts() {
    let mut tsv = Vec::new();
    diamond_chain(20).write_tsv(&mut tsv).unwrap();
    let g = graph_file(std::str::from_utf8(&tsv).unwrap());
    let exe = env!("CARGO_BIN_EXE_rpq");
    let go = || {
        Command::new(exe)
            .args(["--graph", g.path().to_str().unwrap(), "--source", "0", "--regex", "e*"])
            .args(["--mode", "count", "--format", "jsonl"])
            .output()
            .unwrap()
    };
    let a = go();
    assert!(a.status.success());
    assert_eq!(a.stdout, go().stdout);
    let last = String::from_utf8(a.stdout).unwrap().lines().last().unwrap().to_owned();
    assert_eq!(last, "{\"node\":\"60\",\"depth\":40,\"count\":1048576}");
}
