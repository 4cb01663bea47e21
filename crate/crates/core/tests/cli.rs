use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn oran(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oran-v2x"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn lines(p: &Path) -> Vec<String> {
    fs::read_to_string(p)
        .unwrap_or_else(|e| panic!("{}: {e}", p.display()))
        .lines()
        .map(str::to_string)
        .collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn negative_density_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = oran(&["run", "--density", "-3", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("density"), "{}", stderr(&o));
    assert!(!out.join("metrics.csv").exists());
}

#[test]
fn bad_config_files_exit_2_and_name_the_problem() {
    let tmp = tempfile::tempdir().unwrap();
    for (text, needle) in [
        ("speed = 10\nwarp = 9\n", "warp"),
        ("duration 30\n", "line 1"),
        ("p_b = 1.5\n", "p_b"),
        ("carrier_ghz = 0.1\n", "carrier_ghz"),
        ("eirp_dbm = 40\n", "eirp_dbm"),
        ("control_period = 0.15\n", "control_period"),
    ] {
        let cfg = tmp.path().join("bad.cfg");
        fs::write(&cfg, text).unwrap();
        let o = oran(&[
            "run",
            "--config",
            path(&cfg),
            "--out",
            path(&tmp.path().join("o")),
        ]);
        assert_eq!(o.status.code(), Some(2), "{text}: {}", stderr(&o));
        assert!(stderr(&o).contains(needle), "{text}: {}", stderr(&o));
    }
}

#[test]
fn blockage_sweep_needs_a_stochastic_mode() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("geo.cfg");
    fs::write(&cfg, "blockage_mode = geometric\nduration = 1\n").unwrap();
    let o = oran(&[
        "sweep-blockage",
        "--config",
        path(&cfg),
        "--out",
        path(&tmp.path().join("o")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("blockage_mode"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "not a directory").unwrap();
    let o = oran(&[
        "run",
        "--duration",
        "1",
        "--out",
        path(&blocker.join("sub")),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn flags_override_the_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("base.cfg");
    fs::write(&cfg, "# small run\nseed = 5\nduration = 4\ndensity = 30\n").unwrap();
    let out = tmp.path().join("o");
    let o = oran(&[
        "run",
        "--config",
        path(&cfg),
        "--seed",
        "9",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest = lines(&out.join("manifest.txt"));
    assert!(manifest.contains(&"seed = 9".to_string()));
    assert!(manifest.contains(&"duration = 4".to_string()));
    assert!(manifest.contains(&"density = 30".to_string()));
}

#[test]
fn run_writes_one_row_per_control_tick() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = oran(&["run", "--duration", "10", "--trace", "--out", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let metrics = lines(&out.join("metrics.csv"));
    assert_eq!(
        metrics[0],
        "t,gamma_min_db,p_b,connectivity,pairs_total,pairs_direct,pairs_relayed,mean_hops"
    );
    assert_eq!(metrics.len(), 1 + 100);
    assert!(metrics[1].starts_with("0.000000,10,0,"));
    let summary = lines(&out.join("summary.csv"));
    assert_eq!(
        summary[0],
        "gamma_min_db,p_b,mode,connectivity_mean,connectivity_std,replications"
    );
    assert!(summary[1].starts_with("10,0,relay,"));
    let trace = lines(&out.join("trace.csv"));
    assert_eq!(trace[0], "t,msg_type,source,target,payload_summary");
    assert!(trace.iter().any(|l| l.contains(",indication,")));
    assert!(trace.iter().any(|l| l.contains(",control,ric,")));
}

#[test]
fn manifest_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("a");
    let o = oran(&[
        "run",
        "--duration",
        "5",
        "--seed",
        "21",
        "--p-b",
        "0.3",
        "--out",
        path(&first),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let second = tmp.path().join("b");
    let manifest = first.join("manifest.txt");
    let o = oran(&["run", "--config", path(&manifest), "--out", path(&second)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read(first.join("metrics.csv")).unwrap(),
        fs::read(second.join("metrics.csv")).unwrap()
    );
}

#[test]
fn snr_sweep_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = oran(&[
        "sweep-snr",
        "--duration",
        "3",
        "--snr-min",
        "15,0,5",
        "--replications",
        "2",
        "--workers",
        "2",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary = lines(&out.join("summary.csv"));
    assert_eq!(summary.len(), 1 + 3);
    assert!(summary[1].starts_with("0,0,relay,") && summary[3].starts_with("15,0,relay,"));
    assert!(summary[1].ends_with(",2"));
    let baseline = lines(&out.join("baseline_summary.csv"));
    assert!(baseline[1..]
        .iter()
        .all(|l| l.split(',').nth(2) == Some("direct")));
    let runs: Vec<String> = fs::read_dir(out.join("runs"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(runs.len(), 6);
    assert!(out.join("runs/snr5_pb0_rep1/metrics.csv").exists());
    assert!(out.join("runs/snr5_pb0_rep1/manifest.txt").exists());
}

#[test]
fn no_relay_sweep_reports_direct_mode() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = oran(&[
        "sweep-snr",
        "--duration",
        "2",
        "--snr-min",
        "5",
        "--no-relay",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(lines(&out.join("summary.csv"))[1].starts_with("5,0,direct,"));
    assert!(!out.join("baseline_summary.csv").exists());
}

#[test]
fn blockage_sweep_is_independent_of_worker_count() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |workers: &str, dir: &str| {
        let out = tmp.path().join(dir);
        let o = oran(&[
            "sweep-blockage",
            "--duration",
            "3",
            "--snr-min",
            "5,10",
            "--p-b",
            "0,0.5,1",
            "--replications",
            "2",
            "--workers",
            workers,
            "--out",
            path(&out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        out
    };
    let one = run("1", "w1");
    let eight = run("8", "w8");
    let summary = fs::read(one.join("summary.csv")).unwrap();
    assert_eq!(summary, fs::read(eight.join("summary.csv")).unwrap());
    assert_eq!(lines(&one.join("summary.csv")).len(), 1 + 6);
    for entry in fs::read_dir(one.join("runs")).unwrap() {
        let name = entry.unwrap().file_name();
        assert_eq!(
            fs::read(one.join("runs").join(&name).join("metrics.csv")).unwrap(),
            fs::read(eight.join("runs").join(&name).join("metrics.csv")).unwrap()
        );
    }
}
