mod common;

use std::path::Path;

use common::{assert_valid, code, read_json, run, stderr};
use lp_core::samples::{single_mode, taylor_green};
use lp_core::{io, BesovSpec, Exponent, Field, Grid, LittlewoodPaley};
use tempfile::TempDir;

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_field(dir: &TempDir, name: &str, f: &Field) -> std::path::PathBuf {
    let path = dir.path().join(name);
    io::save(&path, f).unwrap();
    path
}

#[test]
fn verify_lp_passes_and_matches_schema() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("lp.json");
    let out = run(&["verify", "lp", "--n", "2", "--N", "32", "--seed", "7", "--trials", "5", "--report", s(&report)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let json = read_json(&report);
    assert_valid(&json, "verify-suite");
    assert_eq!(json["pass"], true);
    assert!(json["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let manifest = read_json(&dir.path().join("lp.manifest.json"));
    assert_valid(&manifest, "manifest");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["command"], "verify lp");
}

#[test]
fn norm_prints_one_number() {
    let dir = TempDir::new().unwrap();
    let g = Grid::periodic(2, 32).unwrap();
    let f = single_mode(g, &[3, -1], 0.7).unwrap();
    let path = write_field(&dir, "f.lpfld", &f);
    let out = run(&["norm", s(&path), "--s", "-1", "--p", "inf", "--r", "inf", "--alpha", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    let value: f64 = text.trim().parse().unwrap();
    let spec = BesovSpec::new(-1.0, Exponent::Infinity, Exponent::Infinity, 1.0).unwrap();
    let expected = LittlewoodPaley::default().besov_norm(&io::load(&path).unwrap(), &spec);
    assert_eq!(value, expected);
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["verify", "lp", "--bogus"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("Usage"));
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["solve", "--u0", "x"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn malformed_files_name_the_header_field() {
    let dir = TempDir::new().unwrap();
    let cases: [(&[u8], &str); 5] = [
        (b"LPFLD2 2 1 4 6.28\n", "magic"),
        (b"LPFLD1 x 1 4 6.28\n", "dim"),
        (b"LPFLD1 2 0 4 6.28\n", "components"),
        (b"LPFLD1 2 1 four 6.28\n", "points"),
        (b"LPFLD1 2 1 4 -1\n", "period"),
    ];
    for (i, (bytes, field)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad{i}.lpfld"));
        std::fs::write(&path, bytes).unwrap();
        let out = run(&["norm", s(&path)]);
        assert_eq!(code(&out), 2);
        let msg = stderr(&out);
        assert!(msg.contains(&format!("`{field}`")), "{field}: {msg}");
    }
    let path = dir.path().join("short.lpfld");
    std::fs::write(&path, b"LPFLD1 1 1 4 6.28\n\0\0\0\0").unwrap();
    let out = run(&["norm", s(&path)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("`payload`"));
}

#[test]
fn decompose_writes_blocks_that_sum_back() {
    let dir = TempDir::new().unwrap();
    let g = Grid::periodic(2, 32).unwrap();
    let f = taylor_green(g, 1.0)
        .unwrap()
        .component_field(0)
        .add(&single_mode(g, &[5, 2], 0.3).unwrap())
        .unwrap();
    let path = write_field(&dir, "f.lpfld", &f);
    let out_dir = dir.path().join("blocks");
    let out = run(&["decompose", s(&path), "--out-dir", s(&out_dir)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let listing = read_json(&out_dir.join("decomposition.json"));
    assert_valid(&listing, "decompose");
    assert_valid(&read_json(&out_dir.join("manifest.json")), "manifest");
    let mut sum = Field::zeros(g, 1);
    for b in listing["blocks"].as_array().unwrap() {
        let block = io::load(out_dir.join(b["file"].as_str().unwrap())).unwrap();
        sum = sum.add(&block).unwrap();
    }
    assert!(sum.max_abs_diff(&f).unwrap() < 1e-12);
}

#[test]
fn generate_mode_requires_k() {
    let dir = TempDir::new().unwrap();
    let out = run(&["generate", "mode", "--out", s(&dir.path().join("m.lpfld"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn zero_sweep_has_one_passing_row_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    for p in [&csv_a, &csv_b] {
        let out = run(&["sweep", "--N", "16", "--M", "8", "--amp-u", "0", "--amp-theta", "0", "--out", s(p)]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let a = std::fs::read_to_string(&csv_a).unwrap();
    assert_eq!(a, std::fs::read_to_string(&csv_b).unwrap());
    let mut rdr = csv::Reader::from_reader(a.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 1);
    let get = |name: &str| rows[0].get(headers.iter().position(|h| h == name).unwrap()).unwrap();
    assert_eq!(get("certificate_pass"), "true");
    assert_eq!(get("converged"), "true");
    assert_eq!(get("iterations"), "1");
    let manifest = read_json(&dir.path().join("a.manifest.json"));
    assert_valid(&manifest, "manifest");
    assert!(manifest["results"]["lambda"].as_f64().unwrap() > 0.0);
}

#[test]
fn failing_checks_exit_one_and_still_write_the_report() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("bil.json");
    let out = run(&[
        "verify", "bilinear", "--lemma", "2.5", "--N", "16,32", "--trials", "4", "--growth", "0.5", "--report",
        s(&report),
    ]);
    assert_eq!(code(&out), 1);
    let json = read_json(&report);
    assert_valid(&json, "verify-bilinear");
    assert_eq!(json["pass"], false);
}

#[test]
fn suite_reports_match_their_schemas() {
    let dir = TempDir::new().unwrap();
    let cases: [(&[&str], &str); 5] = [
        (&["verify", "besov", "--N", "16", "--trials", "2"], "verify-suite"),
        (&["verify", "bilinear", "--N", "16,32", "--trials", "3"], "verify-bilinear"),
        (&["verify", "heatchar", "--N", "16,32", "--per-decade", "4"], "verify-heatchar"),
        (&["verify", "comb"], "verify-comb"),
        (&["verify", "bernstein", "--N", "32", "--samples", "2"], "verify-bernstein"),
    ];
    for (i, (args, schema)) in cases.iter().enumerate() {
        let report = dir.path().join(format!("r{i}.json"));
        let mut full = args.to_vec();
        full.extend(["--report", s(&report)]);
        let out = run(&full);
        assert!(code(&out) <= 1, "{args:?}: {}", stderr(&out));
        assert_valid(&read_json(&report), schema);
        assert_valid(&read_json(&dir.path().join(format!("r{i}.manifest.json"))), "manifest");
    }
}

#[test]
fn solve_report_matches_schema_and_saves_fields() {
    let dir = TempDir::new().unwrap();
    let g = Grid::periodic(2, 16).unwrap();
    let u0 = write_field(&dir, "u0.lpfld", &taylor_green(g, 0.01).unwrap());
    let t0 = write_field(&dir, "t0.lpfld", &single_mode(g, &[1, 2], 0.0005).unwrap());
    let report = dir.path().join("solve.json");
    let fields = dir.path().join("final");
    let out = run(&[
        "solve", "--u0", s(&u0), "--theta0", s(&t0), "--T", "0.5", "--M", "8", "--regime", "thm1.2", "--tol",
        "1e-8", "--oracle", "--report", s(&report), "--out-dir", s(&fields),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let json = read_json(&report);
    assert_valid(&json, "solve");
    assert_eq!(json["status"], "converged");
    assert!(json["oracle_error"]["relative_error"].as_f64().unwrap() < 1e-4);
    let u = io::load(fields.join("u_T.lpfld")).unwrap();
    assert_eq!(u.components(), 2);
}

#[test]
fn solve_rejects_bad_regimes_and_compressible_data() {
    let dir = TempDir::new().unwrap();
    let g = Grid::periodic(2, 16).unwrap();
    let u0 = write_field(&dir, "u0.lpfld", &taylor_green(g, 0.01).unwrap());
    let t0 = write_field(&dir, "t0.lpfld", &single_mode(g, &[1, 2], 0.0005).unwrap());
    let base = ["solve", "--u0", s(&u0), "--theta0", s(&t0), "--M", "4"];
    for regime in ["thm1.5", "thm1.3:0.5,2", "thm1.4:2,0"] {
        let mut args = base.to_vec();
        args.extend(["--regime", regime]);
        assert_eq!(code(&run(&args)), 2, "{regime}");
    }
    let gradient = Field::stack(&[single_mode(g, &[1, 0], 1.0).unwrap(), Field::zeros(g, 1)]).unwrap();
    let bad = write_field(&dir, "grad.lpfld", &gradient);
    let out = run(&["solve", "--u0", s(&bad), "--theta0", s(&t0), "--M", "4"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("divergence"));
}

#[test]
fn thread_count_is_validated_and_does_not_change_reports() {
    let dir = TempDir::new().unwrap();
    let mut reports = Vec::new();
    for threads in ["1", "3"] {
        let report = dir.path().join(format!("besov{threads}.json"));
        let out = common::lp()
            .env("LP_THREADS", threads)
            .args(["verify", "besov", "--N", "16", "--trials", "3", "--report", s(&report)])
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let manifest = read_json(&dir.path().join(format!("besov{threads}.manifest.json")));
        assert_eq!(manifest["threads"].as_u64().unwrap().to_string(), threads);
        reports.push(std::fs::read(&report).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let out = common::lp().env("LP_THREADS", "zero").args(["verify", "comb"]).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("LP_THREADS"));
}
