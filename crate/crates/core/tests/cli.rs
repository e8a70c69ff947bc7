use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn texplore(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_texplore"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn gen(dir: &Path, out: &str, n: &str, lifetime: &str, seed: &str) {
    let o = texplore(
        dir,
        &[
            "gen",
            "--n",
            n,
            "-L",
            lifetime,
            "--k",
            "1",
            "--seed",
            seed,
            "--shape",
            "path",
            "--extra-rate",
            "0.1",
            "--out",
            out,
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn gen_explore_verify_pipeline() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // τ(6, 1, 5) = 33 · 11
    gen(d, "g.tg", "6", "363", "4");
    for f in ["g.tg", "g.tg.tree", "g.tg.manifest.json"] {
        assert!(d.join(f).exists(), "{f} missing");
    }

    let o = texplore(
        d,
        &[
            "explore",
            "--graph",
            "g.tg",
            "--k",
            "1",
            "--delta",
            "5",
            "--start",
            "0",
            "--tree",
            "g.tg.tree",
            "--seed",
            "1",
            "--out",
            "s.txt",
            "--trace",
            "trace.txt",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stats: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&str> = stats
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    assert_eq!(
        keys,
        [
            "activeCounts",
            "attempts",
            "epochs",
            "rho",
            "scheduleLength",
            "scheduleSpan",
            "t"
        ]
    );
    assert_eq!(stats["rho"], 33);
    assert!(fs::read_to_string(d.join("trace.txt"))
        .unwrap()
        .starts_with("# epoch 1\n1 "));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("s.txt.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "explore");
    assert_eq!(manifest["stats"], stats);

    let o = texplore(
        d,
        &[
            "verify",
            "--graph",
            "g.tg",
            "--schedule",
            "s.txt",
            "--start",
            "0",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    // wrong start vertex
    let o = texplore(
        d,
        &[
            "verify",
            "--graph",
            "g.tg",
            "--schedule",
            "s.txt",
            "--start",
            "3",
        ],
    );
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid"));
}

#[test]
fn explore_without_tree_and_delta_default() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // 2 τ(3, 2, 2) = 2 · 90 · 4
    gen(d, "g.tg", "3", "720", "9");
    let o = texplore(
        d,
        &[
            "explore",
            "--graph",
            "g.tg",
            "--k",
            "1",
            "--out",
            "s.txt",
            "--check-delta",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stats: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stats["rho"], 90);
    let o = texplore(d, &["verify", "--graph", "g.tg", "--schedule", "s.txt"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn oracle_prints_minimum_length() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(
        d.join("small.tg"),
        "3 4\n2\n0 1\n1 2\n2\n0 1\n1 2\n2\n0 1\n1 2\n2\n0 1\n1 2\n",
    )
    .unwrap();
    let o = texplore(d, &["oracle", "--graph", "small.tg", "--start", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "3\n");

    let o = texplore(d, &["oracle", "--graph", "small.tg", "--max-lifetime", "2"]);
    assert_eq!(code(&o), 2);

    fs::write(d.join("split.tg"), "3 2\n1\n0 1\n1\n0 1\n").unwrap();
    let o = texplore(d, &["oracle", "--graph", "split.tg"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn check_delta_reports_violation() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("g.tg"), "3 3\n1\n0 1\n1\n1 2\n0\n").unwrap();
    let o = texplore(d, &["check-delta", "--graph", "g.tg", "--delta", "3"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["connected"], false);
    let o = texplore(d, &["check-delta", "--graph", "g.tg", "--delta", "4"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_and_format_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&texplore(d, &["frobnicate"])), 2);
    assert_eq!(code(&texplore(d, &["explore", "--bogus"])), 2);
    assert_eq!(
        code(&texplore(
            d,
            &["verify", "--graph", "nope.tg", "--schedule", "s.txt"]
        )),
        2
    );
    fs::write(d.join("bad.tg"), "3 1\n1\n0 0\n").unwrap();
    let o = texplore(d, &["oracle", "--graph", "bad.tg"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(code(&texplore(d, &["--help"])), 0);
}

#[test]
fn too_short_lifetime_is_algorithmic_failure() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    gen(d, "g.tg", "6", "40", "1");
    let o = texplore(
        d,
        &[
            "explore",
            "--graph",
            "g.tg",
            "--k",
            "1",
            "--tree",
            "g.tg.tree",
            "--out",
            "s.txt",
        ],
    );
    assert_eq!(code(&o), 1);
    assert!(!d.join("s.txt").exists());
}

#[test]
fn tree_and_bench() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    gen(d, "g.tg", "5", "60", "2");
    let o = texplore(
        d,
        &["tree", "--graph", "g.tg", "--k", "1", "--out", "t.txt"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read_to_string(d.join("t.txt")).unwrap().lines().count(),
        4
    );
    let stats: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(stats["goodSnapshots"].as_u64().unwrap() >= stats["q"].as_u64().unwrap());

    fs::write(d.join("bench.txt"), "# n k delta seed\n5 1 4 0\n7 2 6 1\n").unwrap();
    let o = texplore(d, &["bench", "--manifest", "bench.txt", "--out", "b.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(d.join("b.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "instance,n,k,delta,rho,t,scheduleSpan,scheduleLength,bound,attempts,wallMillis"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,5,1,4,33,4,"));
}
