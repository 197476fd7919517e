use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use confstat_cli::app::{run, EXIT_FALSIFIED, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};
use serde_json::Value;

fn confstat(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_confstat"));
    cmd.args(args).env_remove("CONFSTAT_CACHE_DIR");
    match cache {
        Some(dir) => cmd.env("CONFSTAT_CACHE_DIR", dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn in_process(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["confstat", "--no-cache"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn glcheck_example() {
    let o = confstat(&["glcheck", "--space", "affine", "--r", "1", "--n", "2", "--q", "3", "--P", "X1"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({"lhs": "6", "rhs": "6", "equal": true}));
}

#[test]
fn count_and_betti_examples() {
    let o = confstat(&["count", "--space", "proj-line", "--kind", "uconf", "--n", "2", "--q", "2"], None);
    assert_eq!(stdout(&o).trim(), "4");
    let o = confstat(&["betti", "sym", "--betti", "1,0,1", "--n", "3", "--i", "4"], None);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn json_envelope() {
    let o = confstat(&["--json", "count", "--space", "affine", "--n", "3", "--q", "2"], None);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "count");
    assert_eq!(v["result"], "4");
    assert_eq!(v["exact"], true);
    assert_eq!(v["params"]["space"], "A^1");
    assert!(v["version"].is_string());
    let o = confstat(&["--json", "bounds", "growth", "--sequence", "partitions", "--i-max", "40"], None);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact"], false);
    assert_eq!(v["result"]["subexponential_consistent"], true);
}

#[test]
fn csv_always_has_a_header() {
    for args in [
        &["--csv", "count", "--space", "affine", "--n", "3", "--q", "2"][..],
        &["--csv", "partitions", "--n", "4", "--table"],
        &["--csv", "pconf", "char", "--n", "3"],
        &["--csv", "charpoly", "eval", "--P", "C(X1,2)", "--n", "3"],
        &["--csv", "bounds", "dominance", "--random", "3"],
    ] {
        let (code, out, _) = in_process(args);
        assert_eq!(code, EXIT_OK);
        let mut lines = out.lines();
        let header = lines.next().unwrap();
        assert!(!header.is_empty() && lines.count() > 0, "{args:?}: {out}");
    }
    let (_, out, _) = in_process(&["--csv", "charpoly", "eval", "--P", "1/2*X1", "--n", "2"]);
    assert_eq!(out, "class,value\n[2],0\n\"[1,1]\",1\n");
}

#[test]
fn exit_codes() {
    assert_eq!(in_process(&["charpoly", "eval", "--P", "X1 + (X2", "--n", "3"]).0, EXIT_USAGE);
    assert_eq!(in_process(&["count", "--space", "mars", "--n", "3", "--q", "2"]).0, EXIT_USAGE);
    assert_eq!(in_process(&["count", "--space", "affine", "--n", "3", "--q", "6"]).0, EXIT_USAGE);
    let (code, _, err) = in_process(&["--max-work", "10", "count", "--space", "affine", "--n", "4", "--q", "3"]);
    assert_eq!(code, EXIT_RESOURCE, "{err}");
    let (code, _, err) = in_process(&["limit", "--q", "2", "--i-max", "3"]);
    assert_eq!(code, EXIT_RESOURCE);
    assert!(err.contains("largest feasible i_max is 2"), "{err}");
    assert_eq!(in_process(&["--help"]).0, EXIT_OK);
    let o = confstat(&["pconf", "char", "--n", "9", "--p", "1"], None);
    assert_eq!(o.status.code(), Some(EXIT_RESOURCE));
}

#[test]
fn trace_formula_matrix_never_falsifies() {
    for q in ["2", "3", "5"] {
        for n in 1..=5 {
            for p in ["1", "X1", "X2", "C(X1,2)", "X1*X2"] {
                let n = n.to_string();
                for space in ["affine", "sym-affine"] {
                    let (code, out, err) = in_process(&["glcheck", "--space", space, "--n", &n, "--q", q, "--P", p]);
                    assert_eq!(code, EXIT_OK, "{space} n={n} q={q} P={p}: {out}{err}");
                }
            }
        }
    }
}

#[test]
fn cache_transparency() {
    let dir = tempfile::tempdir().unwrap();
    let commands: [&[&str]; 6] = [
        &["--json", "glcheck", "--space", "affine", "--n", "3", "--q", "3", "--P", "C(X1,2)"],
        &["pconf", "char", "--n", "5"],
        &["--csv", "converge", "--space", "affine", "--q", "5", "--P", "X1", "--n-min", "2", "--n-max", "5"],
        &["bounds", "growth", "--sequence", "partitions", "--i-max", "50"],
        &["charpoly", "fit", "--degree", "1"],
        &["bounds", "dominance", "--random", "4", "--seed", "9"],
    ];
    for args in commands {
        let uncached = confstat(args, None);
        let miss = confstat(args, Some(dir.path()));
        let hit = confstat(args, Some(dir.path()));
        assert_eq!(uncached.stdout, miss.stdout, "{args:?}");
        assert_eq!(uncached.stdout, hit.stdout, "{args:?}");
        assert_eq!(uncached.status.code(), hit.status.code());
        let verified = confstat(&[&["--verify-cache"], args].concat(), Some(dir.path()));
        assert_eq!(uncached.stdout, verified.stdout);
        assert!(verified.stderr.is_empty(), "{}", String::from_utf8_lossy(&verified.stderr));
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), commands.len());
}

#[test]
fn cache_entries_are_used_and_verified() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["glcheck", "--space", "affine", "--n", "2", "--q", "3", "--P", "X1"];
    assert_eq!(confstat(&args, Some(dir.path())).status.code(), Some(0));
    let entry = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&entry).unwrap()).unwrap();
    assert!(doc["created_at"].as_u64().unwrap() > 0);
    doc["value"]["equal"] = Value::Bool(false);
    fs::write(&entry, doc.to_string()).unwrap();

    // a hit is served as stored
    assert_eq!(confstat(&args, Some(dir.path())).status.code(), Some(EXIT_FALSIFIED));
    // self-test mode recomputes, reports the mismatch and repairs the entry
    let verified = confstat(&[&["--verify-cache"], &args[..]].concat(), Some(dir.path()));
    assert_eq!(verified.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&verified.stderr).contains("differs from recomputation"));
    assert_eq!(confstat(&args, Some(dir.path())).status.code(), Some(0));
}

#[test]
fn cache_directory_precedence() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let flag = flag_dir.path().to_str().unwrap();
    let args = ["count", "--space", "affine", "--n", "2", "--q", "2", "--cache-dir", flag];
    confstat(&args, Some(env_dir.path()));
    assert_eq!(fs::read_dir(env_dir.path()).unwrap().count(), 1);
    assert_eq!(fs::read_dir(flag_dir.path()).unwrap().count(), 0);

    let o = Command::new(env!("CARGO_BIN_EXE_confstat"))
        .args(args)
        .env_remove("CONFSTAT_CACHE_DIR")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "2");
    assert_eq!(fs::read_dir(flag_dir.path()).unwrap().count(), 1);

    let none = tempfile::tempdir().unwrap();
    confstat(&["--no-cache", "count", "--space", "affine", "--n", "2", "--q", "2"], Some(none.path()));
    assert_eq!(fs::read_dir(none.path()).unwrap().count(), 0);
}

#[test]
fn samples_file_fit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.json");
    let mut records = Vec::new();
    for (n, classes) in [(3u32, vec![vec![3], vec![2, 1], vec![1, 1, 1]]), (4, vec![vec![4], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1], vec![3, 1]])] {
        for class in classes {
            let x1 = class.iter().filter(|&&p| p == 1).count() as i64;
            let x2 = class.iter().filter(|&&p| p == 2).count() as i64;
            records.push(serde_json::json!({"n": n, "class": class, "value": (x1 * x2 - 1).to_string()}));
        }
    }
    fs::write(&path, Value::Array(records).to_string()).unwrap();
    let (code, out, err) =
        in_process(&["charpoly", "fit", "--samples", path.to_str().unwrap(), "--max-degree", "3"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["polynomial"], "X1*X2 - 1");
}

#[test]
fn subcommands_smoke() {
    for args in [
        &["partitions", "--n", "5"][..],
        &["charpoly", "inner", "--P", "X1", "--Q", "X1"],
        &["charpoly", "inner", "--P", "X1", "--Q", "X1", "--n", "1"],
        &["betti", "sym", "--betti", "1,2,1", "--n", "3"],
        &["betti", "diag", "--betti", "1,0,1", "--order", "8"],
        &["pconf", "betti", "--n", "6"],
        &["pconf", "invariants", "--n", "6", "--p", "2", "--a", "1"],
        &["pconf", "multiplicity", "--n", "6", "--p", "1", "--lambda", "1,1"],
        &["count", "--space", "affine", "--r", "2", "--n", "2", "--q", "2", "--points"],
        &["stats", "--space", "affine", "--kind", "sym", "--n", "2", "--q", "2", "--P", "X2"],
        &["glcheck", "--space", "affine", "--r", "2", "--n", "3", "--q", "2", "--P", "X1", "--terms"],
        &["limit", "--q", "3", "--P", "X1"],
        &["converge", "--space", "proj-line", "--q", "2", "--n-min", "3", "--n-max", "5"],
        &["bounds", "hr", "--i-max", "50"],
        &["bounds", "dominance", "--betti", "1,2,3"],
        &["bounds", "dcoset", "--n", "6", "--a", "0", "--i", "1"],
        &["bounds", "dcoset", "--n", "6", "--a", "0", "--i", "1", "--method", "burnside"],
        &["bounds", "growth", "--sequence", "invariants", "--n", "7", "--a", "1", "--window", "2"],
        &["bounds", "growth", "--sequence", "values", "--values", "1,2,4,8,16,32,64,128", "--window", "2"],
    ] {
        let (code, out, err) = in_process(args);
        assert_eq!(code, EXIT_OK, "{args:?}: {err}");
        assert!(!out.trim().is_empty());
    }
    let (_, out, _) = in_process(&["stats", "--space", "affine", "--kind", "sym", "--n", "2", "--q", "2", "--P", "X2"]);
    assert_eq!(out.trim(), "2");
    let (_, out, _) = in_process(&["bounds", "dcoset", "--n", "6", "--a", "0", "--i", "1"]);
    assert_eq!(out.trim(), "7");
    let (_, out, _) = in_process(&["limit", "--q", "2"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], "1/2");
}
