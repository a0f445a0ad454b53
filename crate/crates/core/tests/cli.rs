use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use deconwave::io;
use ndarray::Array2;

fn deconwave(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deconwave"))
        .args(args)
        .current_dir(dir)
        .env_remove("DECONWAVE_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Drops the wall-time column and the header comments.
fn without_timing(csv: &str) -> Vec<String> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect()
}

const SMALL: &[&str] = &["--rows", "16", "--cols", "64", "--reps", "3"];

#[test]
fn rates_prints_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let out = deconwave(
        &["rates", "--s1", "2", "--s2", "1", "--p", "2", "--nu", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("d = 0.5714285714285714"), "{text}");
    assert!(text.contains("regime = dense"));

    let out = deconwave(
        &["rates", "--s1", "2", "--s2", "1", "--p", "0.5", "--nu", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    for args in [
        vec!["benchmark", "--reps", "0"],
        vec!["benchmark", "--rows", "100"],
        vec!["benchmark", "--f-t", "sawtooth"],
        vec!["benchmark", "--rho", "0.7"],
        vec![
            "--jobs", "0", "rates", "--s1", "2", "--s2", "1", "--p", "2", "--nu", "1",
        ],
        vec!["search-j", "--snr1", "10,20"],
        vec![
            "estimate",
            "--y",
            "missing.csv",
            "--g",
            "missing.csv",
            "--output",
            "o.csv",
        ],
        vec!["frobnicate"],
    ] {
        let out = deconwave(&args, p);
        assert_eq!(
            code(&out),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }

    fs::write(p.join("bad.toml"), "rhoo = 0.3\n").unwrap();
    let out = deconwave(&["--config", "bad.toml", "benchmark"], p);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rhoo"));
}

#[test]
fn benchmark_is_reproducible_and_seed_sensitive() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let run = |extra: &[&str], env_seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_deconwave"));
        cmd.current_dir(p)
            .arg("benchmark")
            .args(SMALL)
            .args(extra)
            .env_remove("DECONWAVE_SEED");
        if let Some(s) = env_seed {
            cmd.env("DECONWAVE_SEED", s);
        }
        let out = cmd.output().unwrap();
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out)
    };
    let a = run(&["--seed", "5"], None);
    let b = run(&["--seed", "5", "--jobs", "1"], None);
    assert_eq!(without_timing(&a), without_timing(&b));
    assert_eq!(
        without_timing(&a)[0],
        "f_t,f_u,M,N,snr1_db,snr2_db,J,Jprime,mean_mise,sd_mise,n_rep,seed"
    );
    assert_eq!(without_timing(&a).len(), 4);

    let env = run(&[], Some("5"));
    assert_eq!(without_timing(&a), without_timing(&env));
    let flag_wins = run(&["--seed", "6"], Some("5"));
    assert_ne!(without_timing(&a), without_timing(&flag_wins));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(
        p.join("c.toml"),
        "rows = 16\ncols = 64\nn_rep = 2\nsnr1_db = [10.0, 30.0]\nseed = 9\n",
    )
    .unwrap();
    let out = deconwave(&["--config", "c.toml", "benchmark", "--snr1", "20"], p);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = without_timing(&stdout(&out));
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("heavisine,quadratic,16,64,20.0,30.0,"));
    assert!(rows[1].ends_with(",2,9"));
}

#[test]
fn benchmark_side_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let mut args = vec![
        "benchmark",
        "--snr1",
        "10,20",
        "--output",
        "s.csv",
        "--per-rep",
        "r.csv",
    ];
    args.extend_from_slice(SMALL);
    args.extend_from_slice(&["--emit-plot-data", "plot.csv"]);
    let out = deconwave(&args, p);
    assert_eq!(code(&out), 0);
    let per_rep = without_timing(&fs::read_to_string(p.join("r.csv")).unwrap());
    assert_eq!(per_rep.len(), 1 + 2 * 3);
    let plot = fs::read_to_string(p.join("plot.csv")).unwrap();
    let data: Vec<_> = plot.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "x,y,series");
    assert_eq!(data.len(), 3);
}

#[test]
fn simulate_then_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let out = deconwave(
        &[
            "simulate",
            "--rows",
            "32",
            "--cols",
            "128",
            "--snr1",
            "30",
            "--y-out",
            "y.csv",
            "--g-out",
            "g.bin",
            "--truth-out",
            "f.fdc",
        ],
        p,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let header = fs::read_to_string(p.join("y.csv")).unwrap();
    assert!(header.starts_with("# deconwave"));
    assert!(header.contains("sigma1"));
    assert!(p.join("g.bin.json").exists());
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let s1 = record["sigma1"].as_f64().unwrap().to_string();
    let s2 = record["sigma2"].as_f64().unwrap().to_string();

    let out = deconwave(
        &[
            "estimate",
            "--y",
            "y.csv",
            "--g",
            "g.bin",
            "--sigma1",
            &s1,
            "--sigma2",
            &s2,
            "--output",
            "est.bin",
            "--diagnostics",
            "d.json",
        ],
        p,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let est = io::read_matrix(&p.join("est.bin")).unwrap();
    let truth = io::read_matrix(&p.join("f.fdc")).unwrap();
    assert_eq!(est.dim(), (32, 128));
    let mise = (&est - &truth).mapv(|v| v * v).mean().unwrap();
    assert!(mise < 0.1, "mise {mise}");
    let diag: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p.join("d.json")).unwrap()).unwrap();
    assert!(diag["diagnostics"]["fine_t"].as_u64().unwrap() >= 3);
}

#[test]
fn degenerate_inputs_give_zero_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let ones = Array2::from_elem((16, 64), 1.0);
    let zeros = Array2::zeros((16, 64));
    let none = serde_json::Value::Null;
    io::write_matrix(&p.join("ones.csv"), &ones, "", &none).unwrap();
    io::write_matrix(&p.join("zeros.csv"), &zeros, "", &none).unwrap();

    for (y, g, warns) in [
        ("zeros.csv", "ones.csv", false),
        ("ones.csv", "zeros.csv", true),
    ] {
        let out = deconwave(
            &[
                "estimate", "--y", y, "--g", g, "--sigma1", "0.1", "--sigma2", "0.01", "--output",
                "e.csv",
            ],
            p,
        );
        assert_eq!(code(&out), 0);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(stderr.contains("fully truncated kernel"), warns, "{stderr}");
        let est = io::read_matrix(&p.join("e.csv")).unwrap();
        assert!(est.iter().all(|v| *v == 0.0));
    }
}

#[test]
fn search_j_marks_one_best_level() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["search-j"];
    args.extend_from_slice(SMALL);
    let out = deconwave(&args, dir.path());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "J,mean_mise,sd_mise,best");
    assert_eq!(rows.iter().filter(|r| r.ends_with(",true")).count(), 1);
}
