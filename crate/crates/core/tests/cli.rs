use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn raussim(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_raussim"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn noise_examples() {
    let v = json(&raussim(&["noise", "--alpha", "0.84", "--eta", "0.005", "--n", "2"], &[]));
    assert!((v["result"]["p_z"].as_f64().unwrap() - 0.0060).abs() < 1e-4);
    let v = json(&raussim(&["noise", "--alpha", "0.6", "--eta", "0", "--n", "3"], &[]));
    let p_f = v["result"]["p_f"].as_f64().unwrap();
    assert!((p_f - 0.2434).abs() < 1e-4);
    let expect = 1.0 - (1.0 - 0.5 * p_f.powi(3)).powi(4);
    assert!((v["result"]["p_loss"].as_f64().unwrap() - expect).abs() < 1e-15);
    let v = json(&raussim(&["noise", "--alpha", "1", "--eta", "0", "--n", "1"], &[]));
    assert_eq!(v["result"]["p_z"].as_f64().unwrap(), 0.0);
}

#[test]
fn channel_and_alpha_for_loss() {
    let v = json(&raussim(&["channel", "--alpha", "0.84", "--eta", "0.01"], &[]));
    let r = &v["result"];
    let total: f64 = ["w_psi_plus", "w_psi_minus", "w_phi_plus", "w_phi_minus"]
        .iter()
        .map(|k| r[k].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
    let v = json(&raussim(&["alpha-for-loss", "--ploss", "0.03", "--n", "3"], &[]));
    assert!((v["result"]["alpha"].as_f64().unwrap() - 0.60).abs() < 0.01);
}

#[test]
fn env_overrides_file_and_flags_override_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# shared settings\nalpha=0.5\neta=0.01\nn=3\ndistances=5,7\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let v = json(&raussim(&["noise", "--config", cfg], &[]));
    assert_eq!(v["config"]["alpha"], "0.5");
    assert_eq!(v["config"]["n"], "3");

    let v = json(&raussim(&["noise", "--config", cfg], &[("RAUSSIM_ALPHA", "0.7")]));
    assert_eq!(v["config"]["alpha"], "0.7");

    let v = json(&raussim(&["noise", "--config", cfg, "--alpha", "0.9"], &[("RAUSSIM_ALPHA", "0.7")]));
    assert_eq!(v["config"]["alpha"], "0.9");
    assert_eq!(v["config"]["eta"], "0.01");
}

#[test]
fn unknown_config_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "alpah=0.5\n").unwrap();
    let out = raussim(&["noise", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["noise"],
        vec!["resources", "--alpha", "0.84"],
        vec!["threshold", "--trials", "0"],
        vec!["run", "--pz", "0.001", "--d", "4"],
        vec!["threshold", "--pz-grid", "0.1:0.2"],
    ] {
        let out = raussim(&args, &[]);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn run_replays_and_orders() {
    let args = ["run", "--d", "5", "--pz", "0.003", "--trials", "2000", "--seed", "4", "--format", "csv"];
    let a = raussim(&args, &[]);
    let b = raussim(&args, &[]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let zero = json(&raussim(&["run", "--d", "5", "--pz", "0", "--ploss", "0", "--n-avg", "1", "--trials", "500"], &[]));
    assert_eq!(zero["result"]["failures"], 0);

    let lo = json(&raussim(&["run", "--d", "5", "--pz", "0.003", "--trials", "4000"], &[]));
    let hi = json(&raussim(&["run", "--d", "5", "--pz", "0.01", "--trials", "4000"], &[]));
    assert!(lo["result"]["p_l"].as_f64().unwrap() < hi["result"]["p_l"].as_f64().unwrap());
}

#[test]
fn csv_header_embeds_replayable_config() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("pts.csv");
    let args = [
        "threshold", "--distances", "3,5", "--pz-grid", "0.002:0.02:4", "--trials", "200",
        "--bootstrap", "20", "--format", "csv", "--seed", "9",
    ];
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["--out", out_path.to_str().unwrap()]);
    let status = raussim(&with_out, &[]).status.code();
    assert!(matches!(status, Some(0) | Some(3)));
    let text = fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("# raussim "));
    assert!(text.contains("\nd,p_z,trials,failures,p_L,stderr\n"));
    assert!(text.contains("\n# estimate "));
    assert!(!text.contains('\r'));

    // Stripping the comment markers gives a config file that reproduces the run.
    let cfg: String = text
        .lines()
        .skip(1)
        .take_while(|l| l.starts_with("# "))
        .map(|l| format!("{}\n", &l[2..]))
        .collect();
    let cfg_path = dir.path().join("replay.conf");
    fs::write(&cfg_path, cfg).unwrap();
    let replay = raussim(&["threshold", "--config", cfg_path.to_str().unwrap()], &[]);
    assert_eq!(String::from_utf8(replay.stdout).unwrap(), text);
}

#[test]
fn identical_curves_exit_no_crossing() {
    let out = raussim(
        &["threshold", "--distances", "3,5", "--trials", "50",
          "--ploss", "0.01", "--n-avg", "0", "--alpha", "0.9", "--pz-grid", "0.0000001:0.0000002:4"],
        &[],
    );
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn percolating_loss_exits_four() {
    let out = raussim(&["run", "--d", "5", "--pz", "0.001", "--ploss", "0.5", "--n-avg", "1", "--trials", "50"], &[]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out.stdout.is_empty());
}

#[test]
fn debug_dump_writes_one_line_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("trials.jsonl");
    let out = raussim(
        &["run", "--d", "3", "--pz", "0.01", "--trials", "25", "--debug-dump", dump.to_str().unwrap()],
        &[],
    );
    assert!(out.status.success());
    let text = fs::read_to_string(dump).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 25);
    assert!(lines.iter().all(|l| l.get("defects").is_some() && l.get("logical_failure").is_some()));
}

#[test]
fn resources_reports() {
    let v = json(&raussim(&["resources", "--alpha", "0.84", "--eta", "0.0024", "--n", "2", "--target-pl", "1e-15"], &[]));
    assert_eq!(v["result"]["d"], 39);
    assert_eq!(v["result"]["counting_mode"], "as_printed");

    let v = json(&raussim(
        &["resources", "--alpha", "0.6", "--n", "3", "--a", "8.5e-4", "--b", "1.7e-4",
          "--target-pl", "1e-15", "--parity", "any"],
        &[],
    ));
    assert_eq!(v["result"]["a"], 8.5e-4);
    let expect = raussim::threshold::extrapolate_distance_with(
        8.5e-4, 1.7e-4, 9, 1e-15, raussim::threshold::DistanceRule::AnyParity,
    )
    .unwrap();
    assert_eq!(v["result"]["d"], expect);

    let table = raussim(&["resources", "--table", "--format", "csv"], &[]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.contains("scheme,eta_th,eta,error_rate,N@1e-6,N@1e-15"));
    assert!(text.contains("PHTQC-2,") && text.contains("PHTQC-3,"));
}
