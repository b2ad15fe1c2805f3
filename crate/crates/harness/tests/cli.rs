use std::path::Path;
use std::process::{Command, Output};

fn strongfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strongfree")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn norm_oracle_prints_kind_and_value() {
    let o = strongfree(&["norm-oracle", "x1 + x2 + x3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut it = out.split_whitespace();
    assert_eq!(it.next(), Some("akemann_ostrand"));
    let v: f64 = it.next().unwrap().parse().unwrap();
    assert!((v - 8f64.sqrt()).abs() < 1e-9);

    let o = strongfree(&["norm-oracle", "x1 x2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no analytic oracle"));
}

#[test]
fn sample_then_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("g.csv");
    let m = m.to_str().unwrap();
    assert!(strongfree(&["sample", "--ensemble", "gue", "--n", "6", "--seed", "4:2", "--out", m]).status.success());
    let o = strongfree(&["spectrum", m]);
    assert!(o.status.success());
    let eigs: Vec<f64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(eigs.len(), 6);
    assert!(eigs.windows(2).all(|w| w[0] <= w[1]));

    let u = dir.path().join("u.bin");
    let u = u.to_str().unwrap();
    let args = ["sample", "--ensemble", "haar_unitary", "--n", "5", "--format", "binary", "--out", u];
    assert!(strongfree(&args).status.success());
    let o = strongfree(&["spectrum", u, "--format", "binary"]);
    let args: Vec<f64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    assert!(args.iter().all(|t| (0.0..std::f64::consts::TAU).contains(t)));
}

#[test]
fn convolve_writes_a_measure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.txt");
    let o = strongfree(&[
        "convolve",
        "--mu",
        "atoms(0:0.5,2:0.5)",
        "--nu",
        "atoms(1:1)",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mu = strongfree_core::CompactMeasure::read(text.as_bytes()).unwrap();
    assert_eq!(mu.mass_at(1.0), 0.5);
    assert_eq!(mu.mass_at(3.0), 0.5);
    assert!(!strongfree(&["convolve", "--mu", "arcsine", "--op", "compress"]).status.success());
}

fn write_config(dir: &Path, tolerance: f64) -> String {
    let path = dir.join("c.toml");
    let text = format!(
        "[experiment]\nkind = \"norm_convergence\"\ntolerance = {tolerance}\n\n[polynomial]\nexpr = \"x1 + x1' + x2 + x2'\"\n\n[grid]\nn = [20, 40]\n\n[seeds]\nmaster = 9\ncount = 3\n"
    );
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn experiment_exit_codes_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report");
    let out = out.to_str().unwrap();
    let cfg = write_config(dir.path(), 1.0);
    let o = strongfree(&["experiment", "run", &cfg, "--output", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("Pass"));
    let manifest = format!("{out}/manifest.json");
    let o = strongfree(&["verify", &manifest]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("rerun ok"));

    // A tolerance the N = 40 run cannot meet fails with exit code 1.
    let strict = write_config(dir.path(), 1e-9);
    let o = strongfree(&["experiment", "run", &strict, "--sequential"]);
    assert_eq!(o.status.code(), Some(1));

    let o = strongfree(&["experiment", "run", "/nonexistent.toml"]);
    assert_eq!(o.status.code(), Some(2));
}
