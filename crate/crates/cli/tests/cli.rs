use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn afdm(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afdm"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("AFDM_OUT_DIR")
        .output()
        .expect("spawn afdm")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let mut rd = csv::Reader::from_path(path).unwrap();
    rd.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const FOUR_TARGETS: &str = r#"{"paths":[
  {"h_re":1,"h_im":0,"tau_over_dt":0,"nu_over_df":0},
  {"h_re":1,"h_im":0,"tau_over_dt":3.4,"nu_over_df":5.1},
  {"h_re":1,"h_im":0,"tau_over_dt":9.7,"nu_over_df":2.3},
  {"h_re":1,"h_im":0,"tau_over_dt":11.8,"nu_over_df":-3.5}],
  "snr_db":null,"mode":"monostatic"}"#;

#[test]
fn subcarrier_row_count_and_provenance() {
    let d = tempfile::tempdir().unwrap();
    let o = afdm(d.path(), &["subcarrier", "--n", "128", "--c", "3", "--c2", "1.41421356", "--m", "0", "--oversample", "16"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&d.path().join("subcarrier.csv")).len(), 16 * 128);
    assert_eq!(rows(&d.path().join("wrapping_points.csv")).len(), 3 + 2);
    let run = json(&d.path().join("run.json"));
    assert_eq!(run["command"], "subcarrier");
    assert_eq!(run["params"]["n"], 128);
    assert_eq!(run["config"]["command"]["m"], 0);
    assert!(run["argv"].as_array().unwrap().iter().any(|a| a == "--oversample"));
}

#[test]
fn flag_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&afdm(d.path(), &["subcarrier", "--n", "128", "--m", "128"])), 2);
    assert_eq!(code(&afdm(d.path(), &["subcarrier", "--n", "7", "--m", "0"])), 2);
    assert_eq!(code(&afdm(d.path(), &["af", "--bogus"])), 2);
    assert_eq!(code(&afdm(d.path(), &["af", "--mode", "caf", "--m", "3"])), 2);
}

#[test]
fn cross_ambiguity_peak_at_subcarrier_offset() {
    let d = tempfile::tempdir().unwrap();
    let o = afdm(
        d.path(),
        &["af", "--mode", "caf", "--n", "512", "--c", "13", "--c2", "1.41421356", "--m", "174", "--m1", "177", "--tau=0,0", "--nu=-6,6", "--density", "8"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let peaks = rows(&d.path().join("af_peaks.csv"));
    let nu: f64 = peaks[0][3].parse().unwrap();
    assert!((nu + 3.0).abs() <= 1.0 / 8.0, "{nu}");
    let side = json(&d.path().join("af.json"));
    assert_eq!(side["kind"], "caf_pair");
}

#[test]
fn oracle_and_exact_surfaces_agree() {
    let d = tempfile::tempdir().unwrap();
    let base = ["af", "--n", "16", "--c", "3", "--m", "5", "--tau=-1,1", "--nu=-1,1", "--density", "2"];
    let ex = d.path().join("exact");
    let or = d.path().join("oracle");
    assert_eq!(code(&afdm(&ex, &base)), 0);
    let mut a = base.to_vec();
    a.extend(["--evaluator", "oracle", "--oversample", "64"]);
    assert_eq!(code(&afdm(&or, &a)), 0);
    let (x, y) = (rows(&ex.join("af.csv")), rows(&or.join("af.csv")));
    let period = 1.0 / 15e3;
    for (r, s) in x.iter().zip(&y) {
        let dre: f64 = r[4].parse::<f64>().unwrap() - s[4].parse::<f64>().unwrap();
        let dim: f64 = r[5].parse::<f64>().unwrap() - s[5].parse::<f64>().unwrap();
        assert!(dre.hypot(dim) <= 1e-3 * period);
    }
}

#[test]
fn representative_window_mismatch_exits_three() {
    let d = tempfile::tempdir().unwrap();
    let o = afdm(d.path(), &["af", "--mode", "caf", "--n", "64", "--c", "7", "--m", "3", "--m1", "9", "--evaluator", "representative"]);
    assert_eq!(code(&o), 3);
    let o = afdm(d.path(), &["af", "--n", "64", "--c", "7", "--m", "3", "--evaluator", "representative", "--tau=-3,3"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn frame_af_components() {
    let d = tempfile::tempdir().unwrap();
    let o = afdm(d.path(), &["frame-af", "--layout", "ep", "--q", "4", "--n", "64", "--c", "7", "--tau=-1,1", "--nu=-4,4", "--density", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for stem in ["total", "pilot", "data"] {
        assert_eq!(rows(&d.path().join(format!("{stem}.csv"))).len(), 5 * 17);
    }
    let frame = json(&d.path().join("frame.json"));
    assert_eq!(frame["guard_indices"].as_array().unwrap().len(), 8);
    assert_eq!(code(&afdm(d.path(), &["frame-af", "--layout", "ep", "--q", "300", "--n", "512", "--c", "13"])), 3);
    let o = afdm(d.path(), &["frame-af", "--layout", "sp", "--n", "16", "--c", "3", "--tau=0,0", "--nu=0,0"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn expected_af_is_reproducible() {
    let d = tempfile::tempdir().unwrap();
    let args = ["expected-af", "--n", "16", "--c", "3", "--constellation", "qam16", "--range=-4,4", "--points", "9", "--trials", "300", "--seed", "7"];
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    assert_eq!(code(&afdm(&a, &args)), 0);
    let mut threaded = vec!["--threads", "1"];
    threaded.extend(args);
    assert_eq!(code(&afdm(&b, &threaded)), 0);
    let ca = fs::read(a.join("monte_carlo.csv")).unwrap();
    assert_eq!(ca, fs::read(b.join("monte_carlo.csv")).unwrap());
    let mc = rows(&a.join("monte_carlo.csv"));
    let cf = rows(&a.join("closed_form.csv"));
    assert_eq!(mc.len(), 9);
    for (m, c) in mc.iter().zip(&cf) {
        assert_eq!(m[0], c[0]);
        let (v, se, e): (f64, f64, f64) = (m[1].parse().unwrap(), m[2].parse().unwrap(), c[1].parse().unwrap());
        assert!((v - e).abs() <= 4.0 * se, "{v} {e} {se}");
    }
    let meta = json(&a.join("expected_af.json"));
    assert_eq!(meta["normalization"], "T^2");
}

#[test]
fn expected_af_without_trials_writes_closed_form_only() {
    let d = tempfile::tempdir().unwrap();
    let o = afdm(d.path(), &["expected-af", "--n", "16", "--c", "3", "--cut", "zero-delay", "--trials", "0", "--points", "5"]);
    assert_eq!(code(&o), 0);
    assert!(d.path().join("closed_form.csv").exists());
    assert!(!d.path().join("monte_carlo.csv").exists());
    let o = afdm(d.path(), &["expected-af", "--n", "16", "--c", "3", "--cut", "full", "--trials", "20", "--tau=-1,1", "--nu=-1,1", "--density", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&d.path().join("expected_grid.csv")).len(), 9);
}

#[test]
fn sense_four_targets() {
    let d = tempfile::tempdir().unwrap();
    let scen = d.path().join("scenario.json");
    fs::write(&scen, FOUR_TARGETS).unwrap();
    let s = scen.to_str().unwrap();

    let c13 = d.path().join("c13");
    let o = afdm(&c13, &["sense", "--n", "512", "--c", "13", "--c2", "1.41421356", "--scenario", s]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&c13.join("sense.json"));
    assert_eq!(r["unambiguous"], true);
    assert_eq!(r["all_within_half_cell"], true);
    assert_eq!(rows(&c13.join("targets.csv")).len(), 4);
    assert!(c13.join("mf.csv").exists());

    let c1 = d.path().join("c1");
    let o = afdm(&c1, &["sense", "--n", "512", "--c", "1", "--c2", "1.41421356", "--scenario", s]);
    assert_eq!(code(&o), 0);
    let r = json(&c1.join("sense.json"));
    assert_eq!(r["unambiguous"], false);
    assert!(!r["verdict"]["targets"].as_array().unwrap().iter().all(|t| t["inside"] == true));
}

#[test]
fn sense_scenario_errors_exit_four() {
    let d = tempfile::tempdir().unwrap();
    let empty = d.path().join("empty.json");
    fs::write(&empty, r#"{"paths":[]}"#).unwrap();
    assert_eq!(code(&afdm(d.path(), &["sense", "--scenario", empty.to_str().unwrap()])), 4);
    let missing = d.path().join("missing.json");
    assert_eq!(code(&afdm(d.path(), &["sense", "--scenario", missing.to_str().unwrap()])), 4);
    let bad = d.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&afdm(d.path(), &["sense", "--scenario", bad.to_str().unwrap()])), 4);
}

#[test]
fn parallelogram_areas() {
    let d = tempfile::tempdir().unwrap();
    let o = afdm(d.path(), &["parallelogram", "--n", "512", "--c", "13", "--q", "20"]);
    assert_eq!(code(&o), 0);
    let r = json(&d.path().join("parallelogram.json"));
    assert!((r["unambiguity"]["area"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(r["contained"], true);
    assert!(r["interference_free"]["area"].as_f64().unwrap() < 1.0);
    assert_eq!(rows(&d.path().join("parallelogram.csv")).len(), 8);

    let o = afdm(d.path(), &["parallelogram", "--n", "512", "--c", "1"]);
    assert_eq!(code(&o), 0);
    let r = json(&d.path().join("parallelogram.json"));
    let v1 = &r["unambiguity"]["v1_units"];
    assert_eq!((v1[0].as_f64().unwrap(), v1[1].as_f64().unwrap()), (1.0, 1.0));
}

#[test]
fn output_dir_from_environment() {
    let d = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_afdm"))
        .args(["parallelogram", "--n", "16", "--c", "3"])
        .env("AFDM_OUT_DIR", d.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(d.path().join("run.json").exists());
}

#[test]
fn si_units_select_the_same_grid() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    let dt = 1.0 / (16.0 * 15e3);
    let tau = format!("--tau={},{}", -dt, dt);
    let nu = "--nu=-15000,15000".to_string();
    assert_eq!(code(&afdm(&a, &["af", "--n", "16", "--c", "3", "--m", "2", "--tau=-1,1", "--nu=-1,1"])), 0);
    assert_eq!(code(&afdm(&b, &["--si", "af", "--n", "16", "--c", "3", "--m", "2", &tau, &nu])), 0);
    let (x, y) = (rows(&a.join("af.csv")), rows(&b.join("af.csv")));
    assert_eq!(x.len(), y.len());
    for (r, s) in x.iter().zip(&y) {
        let (a, b): (f64, f64) = (r[6].parse().unwrap(), s[6].parse().unwrap());
        assert!((a - b).abs() <= 1e-9 * a.max(1e-12));
    }
}
