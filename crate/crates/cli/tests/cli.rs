use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn chaoslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaoslab"))
        .args(args)
        .env_remove("CHAOSLAB_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    let start = text.find(key).unwrap_or_else(|| panic!("{key} missing")) + key.len();
    text[start..].split_whitespace().next().unwrap()
}

#[test]
fn classify_anchor_is_chaotic_by_both_methods() {
    let o = chaoslab(&[
        "classify", "--alpha", "0.75", "--beta", "0.5", "--lambda", "361/100",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let cf = text.lines().find(|l| l.starts_with("closed-form")).unwrap();
    let num = text.lines().find(|l| l.starts_with("numerical")).unwrap();
    assert_eq!(field(cf, "odd_cycle:"), "true");
    assert_eq!(field(num, "odd_cycle:"), "true");
    assert!(text.contains("in_class_g: true"));
    assert!(text.contains("agreement    true"));
}

#[test]
fn classify_json_mirrors_the_report() {
    let o = chaoslab(&[
        "classify", "--alpha", "0.75", "--beta", "0.5", "--lambda", "2.0", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["closed_form"]["odd_cycle"], false);
    assert_eq!(v["numerical"]["odd_cycle"], false);
    assert_eq!(v["gate"]["in_class_g"], true);
    assert_eq!(
        v["thresholds"]["lambda_chaos"].as_f64().unwrap(),
        25.0 / 9.0
    );
}

#[test]
fn classify_below_window_exits_2() {
    let o = chaoslab(&[
        "classify", "--alpha", "0.75", "--beta", "0.5", "--lambda", "0.5",
    ]);
    assert_eq!(code(&o), 2);
    let all = stdout(&o) + &String::from_utf8_lossy(&o.stderr);
    assert!(all.contains("λ ≤ λ_G_low = 1"), "{all}");
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        vec![
            "classify", "--alpha", "1.5", "--beta", "0.5", "--lambda", "3",
        ],
        vec!["classify", "--alpha", "x", "--beta", "0.5", "--lambda", "3"],
        vec![
            "classify", "--alpha", "1/0", "--beta", "0.5", "--lambda", "3",
        ],
        vec!["classify", "--beta", "0.5", "--lambda", "3"],
        vec!["frobnicate"],
        vec![
            "orbit", "--alpha", "0.75", "--beta", "0.5", "--lambda", "3", "--p0", "-1", "--steps",
            "3",
        ],
        vec![
            "sweep",
            "--alpha",
            "0.9:0.1:3",
            "--beta",
            "0.5",
            "--lambda",
            "3",
        ],
        vec![
            "classify",
            "--alpha",
            "0.75",
            "--beta",
            "0.5",
            "--lambda",
            "3",
            "--eps-root",
            "-1",
        ],
    ] {
        let o = chaoslab(&args);
        assert_eq!(code(&o), 64, "{args:?}");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&chaoslab(&["--help"])), 0);
    let o = chaoslab(&["--version"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn unwritable_output_exits_73() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let bad = bad.to_str().unwrap();
    let o = chaoslab(&[
        "sweep", "--alpha", "0.75", "--beta", "0.5", "--lambda", "3", "--out", bad,
    ]);
    assert_eq!(code(&o), 73);
    let o = chaoslab(&[
        "orbit", "--alpha", "0.75", "--beta", "0.5", "--lambda", "3", "--p0", "1", "--steps", "2",
        "--out", bad,
    ]);
    assert_eq!(code(&o), 73);
}

#[test]
fn sweep_rows_are_alpha_major() {
    let o = chaoslab(&[
        "sweep",
        "--alpha",
        "0.2:0.8:3",
        "--beta",
        "0.3:0.6:2",
        "--lambda-window",
        "4",
        "--jobs",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 3 * 2 * 4);
    let keys: Vec<(f64, f64, f64)> = rows
        .iter()
        .map(|r| {
            (
                r[0].parse().unwrap(),
                r[1].parse().unwrap(),
                r[2].parse().unwrap(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
    for r in &rows {
        assert_eq!(r.len(), 16);
        assert_eq!(r[7], "true");
        assert_eq!(r[15], "true");
    }
}

#[test]
fn sweep_output_has_header_and_metadata() {
    let o = chaoslab(&[
        "sweep", "--alpha", "0.75", "--beta", "0.5", "--lambda", "3.61",
    ]);
    let text = stdout(&o);
    let first_data = text.lines().position(|l| !l.starts_with('#')).unwrap();
    assert!(first_data > 0);
    assert!(text
        .lines()
        .next()
        .unwrap()
        .contains(env!("CARGO_PKG_VERSION")));
    assert_eq!(
        text.lines().nth(first_data).unwrap(),
        chaoslab_cli::sweep::CSV_HEADER
    );
}

#[test]
fn out_of_window_cells_have_blank_verdicts() {
    let o = chaoslab(&[
        "sweep", "--alpha", "0.75", "--beta", "0.5", "--lambda", "0.5:5:3",
    ]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 3);
    for r in [&rows[0], &rows[2]] {
        assert_eq!(r[7], "false");
        assert!(r[8..].iter().all(String::is_empty), "{r:?}");
    }
    assert_eq!(rows[1][7], "true");
}

#[test]
fn single_cell_sweep_matches_classify() {
    let sweep = chaoslab(&[
        "sweep", "--alpha", "0.75", "--beta", "0.5", "--lambda", "3.61", "--format", "json",
    ]);
    let rows: Value = serde_json::from_str(&stdout(&sweep)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 1);
    let row = &rows[0];
    let classify = chaoslab(&[
        "classify", "--alpha", "0.75", "--beta", "0.5", "--lambda", "3.61", "--format", "json",
    ]);
    let c: Value = serde_json::from_str(&stdout(&classify)).unwrap();
    assert_eq!(row["odd_cycle_cf"], c["closed_form"]["odd_cycle"]);
    assert_eq!(row["odd_cycle_num"], c["numerical"]["odd_cycle"]);
    assert_eq!(
        row["turbulent_cf"],
        c["closed_form"]["turbulent_second_iterate"]
    );
    assert_eq!(
        row["turbulent_num"],
        c["numerical"]["turbulent_second_iterate"]
    );
    assert_eq!(row["f2_of_m"], c["numerical"]["f2_of_m"]);
    assert_eq!(row["f3_of_m"], c["numerical"]["f3_of_m"]);
    assert_eq!(row["pi_max"], c["numerical"]["pi_max"]);
    assert_eq!(row["lambda_chaos"], c["thresholds"]["lambda_chaos"]);
    assert_eq!(row["agree"], true);
}

#[test]
fn onset_to_max_ratio_is_constant_along_alpha() {
    let o = chaoslab(&[
        "sweep",
        "--alpha",
        "0.05:0.95:10",
        "--beta",
        "0.5",
        "--lambda-window",
        "1",
    ]);
    for r in csv_rows(&stdout(&o)) {
        let chaos: f64 = r[5].parse().unwrap();
        let max: f64 = r[6].parse().unwrap();
        assert!((chaos / max - 25.0 / 36.0).abs() < 1e-14, "{r:?}");
    }
}

#[test]
fn csv_floats_round_trip() {
    let o = chaoslab(&[
        "sweep", "--alpha", "3/4", "--beta", "1/2", "--lambda", "361/100",
    ]);
    let r = &csv_rows(&stdout(&o))[0];
    assert_eq!(r[0].parse::<f64>().unwrap(), 0.75);
    assert_eq!(r[2].parse::<f64>().unwrap(), 3.61);
    assert_eq!(r[5].parse::<f64>().unwrap(), 25.0 / 9.0);
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    let out = dir.path().join("rows.csv");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"alpha": "0.2:0.4:2", "beta": 0.5, "lambda_window": 3, "method": "closed-form", "out": {:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = chaoslab(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 2 * 3);
    assert!(rows.iter().all(|r| r[13].is_empty() && r[15].is_empty()));

    let o = chaoslab(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--alpha",
        "0.3",
        "--method",
        "both",
        "--out",
        dir.path().join("flag.csv").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&std::fs::read_to_string(dir.path().join("flag.csv")).unwrap());
    assert_eq!(rows.len(), 3);
    assert!(rows
        .iter()
        .all(|r| r[0].parse::<f64>().unwrap() == 0.3 && r[15] == "true"));
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"alpha": 0.5, "beta": 0.5, "lambda": 3, "gamma": 1}"#,
    )
    .unwrap();
    assert_eq!(
        code(&chaoslab(&["sweep", "--config", cfg.to_str().unwrap()])),
        64
    );
}

fn certify(lambda: &str) -> Value {
    let o = chaoslab(&[
        "certify",
        "--alpha",
        "0.75",
        "--beta",
        "0.5",
        "--lambda",
        lambda,
        "--max-period",
        "15",
    ]);
    assert_eq!(code(&o), 0);
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn certify_anchor_has_certificates() {
    let v = certify("3.61");
    let orbit = &v["odd_cycle"]["found"];
    assert_eq!(orbit["period"].as_u64().unwrap() % 2, 1);
    assert!(orbit["residual"].as_f64().unwrap() <= 1e-10);
    let w = &v["turbulence_witness"]["found"];
    assert!(w.is_object());
    for r in w["residuals"].as_array().unwrap() {
        assert!(r.as_f64().unwrap() <= 1e-10);
    }
    assert_eq!(v["period3"]["exploratory"], true);
}

#[test]
fn certify_below_onset_is_empty_with_bounds() {
    let v = certify("2.0");
    for key in ["odd_cycle", "turbulence_witness"] {
        assert!(v[key]["found"].is_null(), "{key}");
        let b = &v[key]["bounds"];
        assert!(b["lo"].as_f64().unwrap() < b["hi"].as_f64().unwrap());
        assert!(b["grid_points"].as_u64().unwrap() > 0);
    }
    assert_eq!(v["odd_cycle"]["bounds"]["max_period"], 15);
}

#[test]
fn certify_outside_window_exits_2() {
    let o = chaoslab(&[
        "certify", "--alpha", "0.75", "--beta", "0.5", "--lambda", "4.5",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn orbit_csv_follows_the_map() {
    let o = chaoslab(&[
        "orbit", "--alpha", "0.75", "--beta", "0.5", "--lambda", "3.61", "--p0", "1.9", "--steps",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("# escaped = false"));
    let rows = csv_rows(&text);
    let p: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let want = [1.9, 0.19, 15.58, 12.201_707_317_073_17];
    assert_eq!(p.len(), 4);
    for (got, want) in p.iter().zip(want) {
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
    assert_eq!(rows[3][0], "3");
}

#[test]
fn orbit_at_fixed_point_is_constant() {
    let o = chaoslab(&[
        "orbit", "--alpha", "0.75", "--beta", "0.5", "--lambda", "3.61", "--p0", "1", "--steps",
        "5",
    ]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r[1].parse::<f64>().unwrap() == 1.0));
}

#[test]
fn orbit_escape_is_flagged() {
    let o = chaoslab(&[
        "orbit", "--alpha", "0.75", "--beta", "0.5", "--lambda", "5", "--p0", "1.9", "--steps",
        "10",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("# escaped = true"));
    assert!(csv_rows(&text).len() < 11);
}

#[test]
fn outputs_are_byte_stable() {
    let args = [
        "sweep",
        "--alpha",
        "0.1:0.9:4",
        "--beta",
        "0.2:0.8:3",
        "--lambda-window",
        "5",
    ];
    let a = chaoslab(&args);
    let b = chaoslab(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a.stdout, b.stdout);
    let c = certify("3.61");
    assert_eq!(c, certify("3.61"));
}

#[test]
fn verify_small_grid_passes_and_is_deterministic() {
    let args = [
        "verify",
        "--ab-count",
        "4",
        "--lambda-count",
        "6",
        "--oracle-count",
        "3",
    ];
    let a = chaoslab(&args);
    let b = chaoslab(&[&args[..], &["--jobs", "2"]].concat());
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text
        .lines()
        .any(|l| l.starts_with("[INFO]") && l.contains("(0.75, 0.5, 3.61)")));
    assert!(!text.contains("[FAIL]"));
    assert!(text.contains("summary: 6 asserted checks passed, 0 failed"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.csv");
    let base = [
        "orbit", "--alpha", "0.75", "--beta", "0.5", "--lambda", "3", "--p0", "1.5", "--steps",
        "20",
    ];
    let to_stdout = chaoslab(&base);
    let to_file = chaoslab(&[&base[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(code(&to_file), 0);
    assert!(Path::new(&path).exists());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}
