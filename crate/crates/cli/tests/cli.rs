use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const TIGHT_PATH: &str = "stackmst/1\nn 6\nred 0 1 1\nred 1 2 2\nred 2 3 0\nred 3 4 0\nred 4 5 0\nblue complete\n";

fn stackmst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stackmst"))
        .args(args)
        .env_remove("STACKMST_GUARD")
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn oracle_on_the_tight_path() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "p.inst", TIGHT_PATH);
    let out = stackmst(&["solve", "--algo", "oracle", "--format", "json-lines", &inst]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report = &json_lines(&out)[0];
    assert_eq!(report["revenue"], "2");
    assert_eq!(report["total_cost"], "3");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "p.inst", TIGHT_PATH);
    let bad = write(&dir, "bad.inst", "n 3\n");

    assert_eq!(stackmst(&["solve", &bad]).status.code(), Some(2));
    let two = stackmst(&["solve", "--algo", "two-cost", &inst]);
    assert_eq!(two.status.code(), Some(4));
    assert!(stderr(&two).contains("costs not in {a,b}"));
    assert_eq!(stackmst(&["solve", "--algo", "oracle", "--guard", "3", &inst]).status.code(), Some(3));

    let env = Command::new(env!("CARGO_BIN_EXE_stackmst"))
        .args(["solve", "--algo", "oracle", &inst])
        .env("STACKMST_GUARD", "3")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}

#[test]
fn auto_keeps_the_best_algorithm() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        &dir,
        "t.inst",
        "stackmst/1\nn 7\nred 0 1 3\nred 1 2 1\nred 2 3 3\nred 1 4 2\nred 4 5 2\nred 4 6 1\nblue complete\n",
    );
    let mut best = 0.0f64;
    for algo in ["oracle", "tree-approx", "single-price", "level-star"] {
        let out = stackmst(&["solve", "--algo", algo, "--format", "json-lines", &inst]);
        assert!(out.status.success(), "{algo}: {}", stderr(&out));
        let r: f64 = json_lines(&out)[0]["revenue"].as_str().unwrap().parse().unwrap();
        best = best.max(r);
    }
    let out = stackmst(&["solve", "--format", "json-lines", &inst]);
    let r: f64 = json_lines(&out)[0]["revenue"].as_str().unwrap().parse().unwrap();
    assert_eq!(r, best);
}

#[test]
fn verify_reports() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "p.inst", TIGHT_PATH);
    let sol = dir.path().join("s.sol");
    let solved = stackmst(&["solve", "--algo", "oracle", "--solution-out", sol.to_str().unwrap(), &inst]);
    assert!(solved.status.success());

    let ok = stackmst(&["verify", &inst, sol.to_str().unwrap()]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("feasible, revenue matches"));

    let cycle = write(&dir, "c.sol", "buy 0 2 1\nbuy 2 4 1\nbuy 0 4 1\n");
    let out = stackmst(&["verify", &inst, &cycle]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("infeasible: blue cycle"));

    // one optimal price pushed up by a positive amount
    let text = fs::read_to_string(&sol).unwrap();
    let raised: String = text
        .lines()
        .map(|l| {
            let mut f: Vec<String> = l.split_whitespace().map(String::from).collect();
            let p: f64 = f[3].parse().unwrap();
            f[3] = format!("{}", p + 0.5);
            f.join(" ") + "\n"
        })
        .collect();
    let over = write(&dir, "o.sol", &raised);
    let out = stackmst(&["verify", &inst, &over]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not purchased by follower"));
}

#[test]
fn price_reports_cycle_prices() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "p.inst", TIGHT_PATH);
    let out = stackmst(&["price", &inst, "--edges", "0-2,1-3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("buy 0 2 1"));
    assert!(text.contains("buy 1 3 1"));
    assert!(text.contains("# revenue 2"));
}

fn generated(dir: &Path, kind: &str, extra: &[&str]) {
    let mut args = vec!["generate", "--kind", kind, "--out-dir", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = stackmst(&args);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn compare_two_cost_corpus_is_exact() {
    let dir = TempDir::new().unwrap();
    generated(dir.path(), "two-cost-tree", &["--n", "8", "--a", "1", "--b", "3", "--count", "6"]);
    let out = stackmst(&["compare", dir.path().to_str().unwrap(), "--algos", "two-cost,tree-approx", "--format", "json-lines", "--guard", "40"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 7);
    let summary = lines.last().unwrap();
    assert_eq!(summary["worst_ratio"]["two-cost"], 1.0);
    assert!(summary["worst_ratio"]["tree-approx"].as_f64().unwrap() <= 1.75 + 7.0 / 12.0);
}

#[test]
fn compare_path_corpus_respects_the_path_bound() {
    let dir = TempDir::new().unwrap();
    generated(dir.path(), "path", &["--n", "9", "--count", "4"]);
    let out = stackmst(&["compare", dir.path().to_str().unwrap(), "--algos", "path-approx", "--format", "json-lines", "--guard", "40"]);
    let lines = json_lines(&out);
    let worst = lines.last().unwrap()["worst_ratio"]["path-approx"].as_f64().unwrap();
    assert!(worst <= 1.5 + 9.0 / 8.0);
}

#[test]
fn generate_is_deterministic() {
    let a = stackmst(&["generate", "--kind", "budgeted", "--n", "7", "--seed", "5"]);
    let b = stackmst(&["generate", "--kind", "budgeted", "--n", "7", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let star = stackmst(&["generate", "--kind", "setcover-star", "--universe", "2", "--sets", "0,1;1"]);
    let text = stdout(&star);
    assert_eq!(text.lines().filter(|l| l.starts_with("red")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.starts_with("blue")).count(), 3);
}
