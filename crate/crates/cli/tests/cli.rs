use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ueds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ueds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const P4: &str = "p gr 4 3\n1 2\n2 3\n3 4\n";
const K3: &str = "p gr 3 3\n1 2\n2 3\n1 3\n";
const C4: &str = "p gr 4 4\n1 2\n2 3\n3 4\n1 4\n";
const C5: &str = "p gr 5 5\n1 2\n2 3\n3 4\n4 5\n1 5\n";
const K13: &str = "p gr 4 3\n1 2\n1 3\n1 4\n";
const K2: &str = "p gr 2 1\n1 2\n";

fn without_timings(mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timings_ms");
    }
    v
}

#[test]
fn solve_exit_codes_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p4 = write(dir.path(), "p4.gr", P4);
    let p4 = p4.to_str().unwrap();

    let yes = ueds(&["solve", p4, "-k", "2"]);
    assert_eq!(yes.status.code(), Some(0));
    let out = stdout(&yes);
    assert!(out.contains("stage: matching-early-yes"), "{out}");
    assert!(out.contains("witness: 1-2 3-4"));

    let no = ueds(&["solve", p4, "-k", "3"]);
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).contains("gamma_prime: 2"));

    let k3 = write(dir.path(), "k3.gr", K3);
    let r = ueds(&["--json", "solve", k3.to_str().unwrap(), "-k", "2", "--no-kernel", "--witness"]);
    assert_eq!(r.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["gamma_prime"], 1);
    assert_eq!(v["stage"], "dp");
    assert_eq!(v["witness"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ueds(&["solve"]).status.code(), Some(2));
    assert_eq!(ueds(&["frobnicate"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.gr", "p gr 3 2\n1 2\n2 9\n");
    let o = ueds(&["solve", bad.to_str().unwrap(), "-k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
    let p4 = write(dir.path(), "p4.gr", P4);
    assert_eq!(ueds(&["solve", p4.to_str().unwrap(), "-k", "-1"]).status.code(), Some(2));
    assert_eq!(ueds(&["gen", "--family", "cycle", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn resource_caps_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let g = ueds(&["gen", "--family", "gnp", "--n", "12", "--p", "0.9", "--seed", "1"]);
    let path = write(dir.path(), "dense.gr", &stdout(&g));
    let path = path.to_str().unwrap();
    let o = ueds(&["solve", path, "-k", "9", "--no-kernel", "--max-width", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(ueds(&["oracle", path]).status.code(), Some(3));
    assert_eq!(ueds(&["gamma", path, "--method", "oracle"]).status.code(), Some(3));
}

#[test]
fn gamma_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text, want) in [("c5", C5, 2), ("p4", P4, 2), ("k13", K13, 1), ("k2", K2, 1)] {
        let path = write(dir.path(), &format!("{name}.gr"), text);
        for method in ["dp", "oracle", "auto"] {
            let o = ueds(&["--json", "gamma", path.to_str().unwrap(), "--method", method]);
            assert_eq!(o.status.code(), Some(0));
            let v: Value = serde_json::from_slice(&o.stdout).unwrap();
            assert_eq!(v["gamma_prime"], want, "{name} {method}");
        }
    }
    let c4 = write(dir.path(), "c4.gr", C4);
    let o = ueds(&["gamma", c4.to_str().unwrap(), "--diagnostics"]);
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().starts_with("node=1 type=leaf tuples=1"));
    assert_eq!(text.lines().last().unwrap(), "gamma_prime=2");
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ["gen", "--family", "gnp", "--n", "9", "--p", "0.4", "--seed", "7"];
    let a = ueds(&spec);
    assert_eq!(a.stdout, ueds(&spec).stdout);
    let mut json_spec = vec!["--json"];
    json_spec.extend(spec);
    assert_eq!(ueds(&json_spec).stdout, ueds(&json_spec).stdout);

    let path = write(dir.path(), "g.gr", &stdout(&a));
    let path = path.to_str().unwrap();
    for args in [
        vec!["--json", "solve", path, "-k", "4", "--witness"],
        vec!["--json", "solve", path, "-k", "5"],
        vec!["--json", "gamma", path, "--method", "dp"],
        vec!["--json", "gamma", path, "--method", "oracle"],
    ] {
        let x: Value = serde_json::from_slice(&ueds(&args).stdout).unwrap();
        let y: Value = serde_json::from_slice(&ueds(&args).stdout).unwrap();
        assert_eq!(without_timings(x), without_timings(y), "{args:?}");
    }
}

#[test]
fn gen_families() {
    assert_eq!(stdout(&ueds(&["gen", "--family", "path", "--n", "4"])), P4);
    assert_eq!(
        stdout(&ueds(&["gen", "--family", "cycle", "--n", "4"])),
        "p gr 4 4\n1 2\n2 3\n3 4\n1 4\n"
    );
    let tree = stdout(&ueds(&["gen", "--family", "tree", "--n", "6", "--seed", "3"]));
    assert!(tree.starts_with("p gr 6 5\n"));
}

#[test]
fn kernelize_trace() {
    let dir = tempfile::tempdir().unwrap();
    // P4 plus an isolated vertex and a separate edge.
    let g = write(dir.path(), "g.gr", "p gr 7 4\n1 2\n2 3\n3 4\n6 7\n");
    let out_path = dir.path().join("reduced.gr");
    let o = ueds(&[
        "kernelize",
        g.to_str().unwrap(),
        "-k",
        "4",
        "--emit",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("rule=1 action=delete-vertex 5 n=6 k=4"), "{text}");
    assert!(text.contains("rule=2 action=delete-edge (6,7) n=4 k=3"), "{text}");
    assert!(text.contains("reduced: n=4 m=3 k=3"), "{text}");
    assert_eq!(fs::read_to_string(out_path).unwrap(), P4);
}

#[test]
fn decomp_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c5.gr", C5);
    let td = dir.path().join("c5.td");
    let nice = dir.path().join("c5.nice");
    let o = ueds(&[
        "decomp",
        g.to_str().unwrap(),
        "--emit-td",
        td.to_str().unwrap(),
        "--emit-nice",
        nice.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid: yes"));
    assert!(fs::read_to_string(&nice).unwrap().starts_with("s nice "));

    let o = ueds(&["decomp", g.to_str().unwrap(), "--td", td.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let broken = write(dir.path(), "broken.td", "s td 1 2 5\nb 1 1 2\n");
    let o = ueds(&["decomp", g.to_str().unwrap(), "--td", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("violation:"));
}

#[test]
fn selfcheck_passes_and_catches_fault() {
    let o = ueds(&["selfcheck", "--count", "200", "--nmax", "8", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: pass"));

    let o = ueds(&["selfcheck", "--count", "0"]);
    assert_eq!(o.status.code(), Some(0));

    let o = ueds(&["selfcheck", "--count", "100", "--nmax", "8", "--seed", "1", "--inject-fault", "no-red-upgrade"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL dp-equals-oracle"), "{text}");
    assert!(text.contains("reproduce: ueds gen --family gnp"), "{text}");
}

#[test]
fn bench_corpus() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("k2", K2), ("k3", K3), ("p4", P4), ("c4", C4), ("c5", C5)] {
        write(dir.path(), &format!("{name}.gr"), text);
    }
    let csv_path = dir.path().join("out.csv");
    let o = ueds(&["bench", dir.path().to_str().unwrap(), "--out", csv_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let got: Vec<(String, String)> = rows.iter().map(|r| (r[0].to_string(), r[5].to_string())).collect();
    let want = [("c4.gr", "2"), ("c5.gr", "2"), ("k2.gr", "1"), ("k3.gr", "1"), ("p4.gr", "2")];
    assert_eq!(got, want.map(|(a, b)| (a.to_string(), b.to_string())));

    write(dir.path(), "zz_bad.gr", "p gr 2 1\n1 1\n");
    let o = ueds(&["bench", dir.path().to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().last().unwrap().starts_with("zz_bad.gr,error"));

    let empty = tempfile::tempdir().unwrap();
    let o = ueds(&["bench", empty.path().to_str().unwrap()]);
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stdout(&o).starts_with("instance,status,n,m,width"));
}
