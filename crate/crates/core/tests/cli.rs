//! End-to-end CLI tests: every subcommand plus the exit-code contract
//! (0 success, 1 configuration error, 2 instance I/O error).

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qubo-suite"))
}

#[test]
fn generate_solve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("sk.json");
    let out = bin()
        .args(["generate", "--family", "sk", "--n", "24", "--seed", "2", "--out"])
        .arg(&inst)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(inst.exists());

    let out = bin()
        .args(["solve", "--solver", "qis", "--iters", "60", "--batch", "2", "--instance"])
        .arg(&inst)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("best objective:"));
    assert!(text.lines().filter(|l| l.starts_with("member")).count() == 2);

    // pure iteration caps are deterministic: identical stdout on re-run
    let again = bin()
        .args(["solve", "--solver", "qis", "--iters", "60", "--batch", "2", "--instance"])
        .arg(&inst)
        .output()
        .unwrap();
    assert_eq!(text, String::from_utf8(again.stdout).unwrap());
}

#[test]
fn solve_with_pinned_mode_and_legacy() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("nae.json");
    assert!(bin()
        .args(["generate", "--family", "nae3sat", "--n", "20", "--seed", "1", "--out"])
        .arg(&inst)
        .status()
        .unwrap()
        .success());
    for extra in [&["--mode", "G2-R3"][..], &["--legacy"][..]] {
        let out = bin()
            .args(["solve", "--solver", "qis", "--iters", "40", "--instance"])
            .arg(&inst)
            .args(extra)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).contains("unsat_clauses:"));
    }
}

#[test]
fn bench_rank_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.toml");
    std::fs::write(
        &suite,
        r#"
solvers = ["sa", "sb", "qis"]
iteration_cap = 40
batch = 2
seed_base = 0

[[instances]]
family = "sk"
n = 24
seed = 0

[[instances]]
family = "nae3sat"
n = 20
seed = 0
"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["bench", "--workers", "2", "--suite"])
        .arg(&suite)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let run_dir = std::fs::read_dir(&out_dir).unwrap().next().unwrap().unwrap().path();
    let report = run_dir.join("report.csv");
    assert!(report.exists());
    assert!(run_dir.join("report.md").exists());
    assert!(run_dir.join("runs.csv").exists());
    // 2 instances x 3 solvers x batch 2 = 12 per-run JSON records
    let json_count = std::fs::read_dir(&run_dir)
        .unwrap()
        .filter(|e| {
            e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json")
        })
        .count();
    assert_eq!(json_count, 12);

    let out = bin().args(["rank", "--report"]).arg(&report).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("average rank"));

    // verify the shipped published energies against the shipped reference
    let reference =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("data/reference/maxcut_published.csv");
    let energies_csv = dir.path().join("published.csv");
    let text = std::fs::read_to_string(&reference).unwrap();
    let mut csv = String::from("instance,solver,best_energy,time_to_best_s,rank,best\n");
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f[0] == "maxcut_energy" {
            csv.push_str(&format!("{},{},{},0,0,0\n", f[1], f[2], f[3]));
        }
    }
    std::fs::write(&energies_csv, csv).unwrap();
    let out = bin()
        .args(["verify", "--report"])
        .arg(&energies_csv)
        .arg("--reference")
        .arg(&reference)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("rank rows matched: 16/16"), "{text}");
    assert!(text.contains("average SA: MISMATCH"), "{text}");
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("sk.json");
    assert!(bin()
        .args(["generate", "--family", "sk", "--n", "8", "--seed", "0", "--out"])
        .arg(&inst)
        .status()
        .unwrap()
        .success());

    // configuration errors -> 1
    let bad_solver = bin()
        .args(["solve", "--solver", "nope", "--iters", "5", "--instance"])
        .arg(&inst)
        .status()
        .unwrap();
    assert_eq!(bad_solver.code(), Some(1));
    let no_budget =
        bin().args(["solve", "--solver", "sa", "--instance"]).arg(&inst).status().unwrap();
    assert_eq!(no_budget.code(), Some(1));
    let maxcut_generate = bin()
        .args(["generate", "--family", "maxcut", "--n", "8", "--out"])
        .arg(dir.path().join("x.json"))
        .status()
        .unwrap();
    assert_eq!(maxcut_generate.code(), Some(1));

    // instance I/O errors -> 2
    let missing = bin()
        .args(["solve", "--solver", "sa", "--iters", "5", "--instance", "/no/such/file.json"])
        .status()
        .unwrap();
    assert_eq!(missing.code(), Some(2));
    let malformed = dir.path().join("bad.txt");
    std::fs::write(&malformed, "3 1\n1 99 1\n").unwrap();
    let parse = bin()
        .args(["solve", "--solver", "sa", "--iters", "5", "--instance"])
        .arg(&malformed)
        .status()
        .unwrap();
    assert_eq!(parse.code(), Some(2));
}
