use std::path::Path;
use std::process::{Command, Output};

fn radgrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radgrp")).args(args).output().expect("binary runs")
}

fn run_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    radgrp(&args)
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn lists_every_registered_case() {
    let out = radgrp(&["list-cases"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["sine1d", "rp1", "rp2", "rp3", "rp4", "sine2d", "shock_cloud", "wind_cloud"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name}\t"))), "{name}");
    }
}

#[test]
fn riemann_prints_the_star_region() {
    let out = radgrp(&["riemann", "--left", "1,0,1", "--right", "0.125,0,0.1", "--gamma", "1.4", "--a-rad", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let p: f64 = text.lines().find_map(|l| l.strip_prefix("p_star=")).unwrap().parse().unwrap();
    assert!((p - 0.30313).abs() < 1e-5);
}

#[test]
fn failures_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(radgrp(&["run", "--case", "nowhere"]).status.code(), Some(3));
    assert_eq!(radgrp(&["run", "--frobnicate"]).status.code(), Some(2));
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "case = rp1\ncontrol.cfl = fast\n").unwrap();
    let out = radgrp(&["run", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("radgrp: error: parse:") && err.lines().count() == 1, "{err}");
    std::fs::write(&bad, "case = rp1\ncontrol.cfl = 3\n").unwrap();
    assert_eq!(radgrp(&["run", "--config", bad.to_str().unwrap()]).status.code(), Some(3));
    // Vacuum-generating initial data are a numerical failure.
    let out = radgrp(&["riemann", "--left", "1,-20,1", "--right", "1,20,1", "--gamma", "1.4", "--a-rad", "0"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn run_writes_profiles_and_a_conservation_log() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(dir.path(), &["--case", "rp4", "--cells", "50"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let profile = String::from_utf8(read(dir.path(), "rp4_grp.csv")).unwrap();
    assert_eq!(profile.lines().next(), Some("x,rho,u,p_tot,T,c,p_rad,e"));
    assert_eq!(profile.lines().count(), 51);
    assert!(dir.path().join("rp4_exact.csv").exists());
    assert!(String::from_utf8(read(dir.path(), "rp4_grp_conservation.csv")).unwrap().starts_with("step,t,mass,momentum,energy\n"));
}

#[test]
fn config_files_drive_runs_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out_dir = dir.path().join("out");
    std::fs::write(
        &cfg,
        format!(
            "# inline shock tube, states as density, velocity, temperature\nscheme = muscl\nmodel.gamma = 1.4\nmodel.a_rad = 0\ngrid.nx = 40\n\
             riemann.left = 1, 0, 2.5\nriemann.right = 0.125, 0, 2\nriemann.split = 0.5\ncontrol.t_end = 0.2\n\
             output.dir = {}\noutput.snapshots = 0.1\noutput.fields = rho, p_tot\n",
            out_dir.display()
        ),
    )
    .unwrap();
    let out = radgrp(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let snap = String::from_utf8(read(&out_dir, "riemann_muscl_snap0.csv")).unwrap();
    assert_eq!(snap.lines().next(), Some("x,rho,p_tot"));
    assert!(out_dir.join("riemann_muscl.csv").exists());
}

#[test]
fn repeated_and_threaded_runs_are_byte_identical() {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let args = ["--case", "sine2d", "--cells", "24", "--scheme", "grp"];
    for (k, d) in dirs.iter().enumerate() {
        let threads = if k == 2 { "4" } else { "1" };
        let mut all = vec!["--threads", threads];
        all.extend_from_slice(&args);
        let out = run_into(d.path(), &all);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["sine2d_grp.csv", "sine2d_grp_lineout.csv", "sine2d_grp_conservation.csv"] {
        let first = read(dirs[0].path(), name);
        assert_eq!(first, read(dirs[1].path(), name), "{name} repeat");
        assert_eq!(first, read(dirs[2].path(), name), "{name} threads");
    }
}

#[test]
fn sweep_reports_the_first_root() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = radgrp(&["sweep-f", "--from", "14.9", "--to", "15", "--step", "0.01", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("first_root_gamma1=14.96"));
    assert!(std::fs::read_to_string(path).unwrap().starts_with("gamma1,max_zero\n"));
}
