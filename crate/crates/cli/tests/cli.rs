use std::path::PathBuf;
use std::process::{Command, Output};

fn smc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &tempfile::TempDir, body: &str) -> PathBuf {
    let path = dir.path().join("sweep.conf");
    std::fs::write(&path, body).unwrap();
    path
}

const SMALL: &str = "scheme = smc\nm = 8\nn = 16\nk = 2\nsnr_db = 0, 10\ntrials = 200\nseed = 4\n";

#[test]
fn simulate_writes_csv_with_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, SMALL);
    let out = dir.path().join("out.csv");
    let o = smc(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scheme,m,n,K,channel,seed,snr_db,trials,frame_errors,bler,user1_errors,user2_errors,bound_bler,bound_variant,wall_time_seconds"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("smc,8,16,2,rayleigh,4,0,200,"));
    assert!(rows[0].contains(",exact-expectation,"));
}

#[test]
fn simulate_json_and_worker_override_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, SMALL);
    let cfg = cfg.to_str().unwrap();
    let a = smc(&[
        "simulate",
        "--config",
        cfg,
        "--format",
        "json",
        "--workers",
        "1",
    ]);
    let b = smc(&[
        "simulate",
        "--config",
        cfg,
        "--format",
        "json",
        "--workers",
        "4",
    ]);
    assert!(a.status.success() && b.status.success());
    let va: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let vb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    for (pa, pb) in va["points"]
        .as_array()
        .unwrap()
        .iter()
        .zip(vb["points"].as_array().unwrap())
    {
        assert_eq!(pa["frame_errors"], pb["frame_errors"]);
        assert_eq!(pa["user1_errors"], pb["user1_errors"]);
    }
}

#[test]
fn simulate_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "m = 0\ntrials = 0\nbogus = 1\n");
    let o = smc(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn bound_emits_one_row_per_snr() {
    let o = smc(&[
        "bound",
        "--m",
        "4",
        "--n",
        "8",
        "--k",
        "2",
        "--mu",
        "0.5",
        "--snr-db",
        "-30",
        "-20",
        "0",
        "--variant",
        "exact",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "snr_db,sigma2,variant,bler_bound");
    assert_eq!(lines.len(), 4);
    let bounds: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(bounds.iter().all(|b| (0.0..=1.0).contains(b)));
    assert!(bounds.windows(2).all(|w| w[1] <= w[0]));
    assert!(lines[1].contains(",exact-expectation,"));
}

#[test]
fn capacity_reports_efficiency() {
    let o = smc(&[
        "capacity", "--n", "32", "--k", "2", "--m", "16", "--scheme", "svc",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bits_per_user"], 8);
    assert_eq!(v["channel_uses"], 16);
    assert_eq!(v["bits_per_use"], 0.5);
}

#[test]
fn roundtrip_recovers_given_payloads() {
    let o = smc(&[
        "roundtrip",
        "--m",
        "16",
        "--n",
        "32",
        "--k",
        "2",
        "--seed",
        "9",
        "--payload1",
        "a5",
        "--payload2",
        "3c",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], true);
    for d in v["decoded"].as_array().unwrap() {
        assert_eq!(d["payload1"], "a5");
        assert_eq!(d["payload2"], "3c");
    }
}

#[test]
fn roundtrip_rejects_oversized_payload() {
    let o = smc(&[
        "roundtrip",
        "--m",
        "16",
        "--n",
        "32",
        "--k",
        "2",
        "--payload1",
        "1ff",
    ]);
    assert!(!o.status.success());
}

#[test]
fn validate_passes() {
    let o = smc(&["validate"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
}
