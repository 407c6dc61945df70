//! Subcommand pipelines.

use std::path::{Path, PathBuf};

use radgrp::cases::{self, CaseKind};
use radgrp::config::{parse_config, RunConfig};
use radgrp::diagnostics::{convergence_study, first_gamma1_with_root, max_zero_sweep, sweep_csv, uniform_grid};
use radgrp::grp::{solve_grp, SlopedState};
use radgrp::mesh1d::{self, StepControl};
use radgrp::output::{exact_csv_1d, grid_csv_2d, lineout_csv, profile_csv_1d, write_file, ConservationLog};
use radgrp::riemann::{solve_star, Wave};
use radgrp::solver2d;
use radgrp::sweep::Scheme;
use radgrp::{Error, GasModel, Result};

use crate::Common;

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::Validation { field: field.into(), message: message.into() }
}

fn read_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Configuration from `--config` and/or `--case`, with `--out` applied.
fn load(common: &Common, fallback_case: Option<&str>) -> Result<RunConfig> {
    let mut cfg = match (&common.config, common.case.as_deref().or(fallback_case)) {
        (Some(path), case) => {
            let cfg = read_config(path)?;
            if let Some(name) = case.filter(|_| common.case.is_some()) {
                if name != cfg.case.name {
                    return Err(invalid("case", format!("--case {name} contradicts the configuration's `{}`", cfg.case.name)));
                }
            }
            cfg
        }
        (None, Some(name)) => RunConfig::for_case(cases::find(name).map_err(|_| invalid("case", format!("unknown case `{name}`")))?)?,
        (None, None) => return Err(invalid("case", "give --case or --config")),
    };
    if let Some(out) = &common.out {
        cfg.output.dir = out.clone();
    }
    Ok(cfg)
}

fn parse_scheme(s: &str) -> Result<Scheme> {
    Scheme::parse(s).ok_or_else(|| invalid("scheme", format!("unknown scheme `{s}`")))
}

fn triple(what: &str, s: &str) -> Result<[f64; 3]> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| invalid(what, format!("`{s}` is not three numbers")))?;
    v.try_into().map_err(|_| invalid(what, format!("`{s}` is not three numbers")))
}

fn model_with(base: GasModel, (gamma, a_rad): (Option<f64>, Option<f64>)) -> Result<GasModel> {
    let gamma = gamma.unwrap_or(base.gamma());
    if !(gamma > 1.0) {
        return Err(invalid("gamma", format!("{gamma} must exceed 1")));
    }
    GasModel::new(gamma, a_rad.unwrap_or(base.a_rad())).map_err(|e| invalid("gamma", e.to_string()))
}

fn default_model() -> GasModel {
    GasModel::new(5.0 / 3.0, 1.0).expect("default model is valid")
}

fn save(path: PathBuf, contents: &str) -> Result<()> {
    write_file(&path, contents)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn run(common: &Common, scheme: Option<&str>, cells: Option<&str>, theta: Option<f64>) -> Result<()> {
    let mut cfg = load(common, None)?;
    if let Some(s) = scheme {
        cfg.scheme = parse_scheme(s)?;
    }
    if let Some(c) = cells {
        cfg.cells = parse_cells(c, &cfg)?;
    }
    if let Some(t) = theta {
        cfg.control.theta = t;
    }
    cfg.validate()?;
    if cfg.dimension() == 1 {
        run_1d(&cfg)
    } else {
        run_2d(&cfg)
    }
}

/// `N` or `NXxNY`. A single number in 2D keeps the case's aspect ratio.
fn parse_cells(s: &str, cfg: &RunConfig) -> Result<(usize, usize)> {
    let bad = || invalid("cells", format!("`{s}` is neither N nor NXxNY"));
    if let Some((a, b)) = s.split_once('x') {
        if cfg.dimension() == 1 {
            return Err(invalid("cells", "one-dimensional cases take a single count"));
        }
        return Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
    }
    let n: usize = s.parse().map_err(|_| bad())?;
    Ok(if cfg.dimension() == 1 { (n, 1) } else { (n, (n * cfg.case.cells.1 / cfg.case.cells.0).max(1)) })
}

fn stem(cfg: &RunConfig) -> String {
    format!("{}_{}", cfg.case.name, cfg.scheme.name())
}

fn run_1d(cfg: &RunConfig) -> Result<()> {
    let model = cfg.model;
    let mut grid = cfg.case.grid_1d(&model, cfg.cells.0)?;
    let dir = &cfg.output.dir;
    let fields = &cfg.output.fields;
    let every = cfg.output.every;
    let mut log = ConservationLog::new_1d();
    log.record(0, 0.0, &grid.totals());
    let mut steps = 0;
    let mut advance = |grid: &mut mesh1d::Grid1D, log: &mut ConservationLog, t_end: f64| -> Result<()> {
        let control = StepControl { t_end, ..cfg.control };
        mesh1d::run(grid, &model, cfg.scheme, &control, |g| {
            steps += 1;
            if every > 0 && (steps % every == 0 || g.time >= cfg.control.t_end) {
                log.record(steps, g.time, &g.totals());
            }
            Ok(())
        })?;
        Ok(())
    };
    for (k, &t) in cfg.output.snapshots.iter().enumerate() {
        advance(&mut grid, &mut log, t)?;
        save(dir.join(format!("{}_snap{k}.csv", stem(cfg))), &profile_csv_1d(&model, &grid, fields)?)?;
    }
    advance(&mut grid, &mut log, cfg.control.t_end)?;
    save(dir.join(format!("{}.csv", stem(cfg))), &profile_csv_1d(&model, &grid, fields)?)?;
    if let Some(exact) = cfg.case.exact(&model)? {
        // four samples per cell for a smooth overlay curve
        let (lo, hi) = cfg.case.x_range;
        let n = 4 * cfg.cells.0;
        let xs: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * (hi - lo) / n as f64).collect();
        save(dir.join(format!("{}_exact.csv", cfg.case.name)), &exact_csv_1d(&model, &exact, &xs, grid.time, fields)?)?;
    }
    if every > 0 {
        save(dir.join(format!("{}_conservation.csv", stem(cfg))), &log.to_csv())?;
    }
    println!("case={} scheme={} cells={} steps={} t={:.16e}", cfg.case.name, cfg.scheme.name(), cfg.cells.0, log_steps(&log, every), grid.time);
    Ok(())
}

fn log_steps(log: &ConservationLog, every: usize) -> String {
    if every > 0 {
        log.to_csv().lines().last().and_then(|l| l.split(',').next()).unwrap_or("0").to_string()
    } else {
        "-".into()
    }
}

fn run_2d(cfg: &RunConfig) -> Result<()> {
    let model = cfg.model;
    let mut grid = cfg.case.grid_2d(&model, cfg.cells)?;
    let dir = &cfg.output.dir;
    let every = cfg.output.every;
    let mut log = ConservationLog::new_2d();
    log.record(0, 0.0, &grid.totals());
    let mut steps = 0;
    let mut advance = |grid: &mut solver2d::Grid2D, log: &mut ConservationLog, t_end: f64| -> Result<()> {
        let control = StepControl { t_end, ..cfg.control };
        solver2d::run(grid, &model, cfg.scheme, &control, cfg.split, |g| {
            steps += 1;
            if every > 0 && (steps % every == 0 || g.time >= cfg.control.t_end) {
                log.record(steps, g.time, &g.totals());
            }
            Ok(())
        })?;
        Ok(())
    };
    let y_mid = 0.5 * (cfg.case.y_range.0 + cfg.case.y_range.1);
    for (k, &t) in cfg.output.snapshots.iter().enumerate() {
        advance(&mut grid, &mut log, t)?;
        save(dir.join(format!("{}_snap{k}.csv", stem(cfg))), &grid_csv_2d(&model, &grid)?)?;
    }
    advance(&mut grid, &mut log, cfg.control.t_end)?;
    save(dir.join(format!("{}.csv", stem(cfg))), &grid_csv_2d(&model, &grid)?)?;
    save(dir.join(format!("{}_lineout.csv", stem(cfg))), &lineout_csv(&model, &grid, y_mid)?)?;
    if every > 0 {
        save(dir.join(format!("{}_conservation.csv", stem(cfg))), &log.to_csv())?;
    }
    println!("case={} scheme={} cells={}x{} steps={} t={:.16e}", cfg.case.name, cfg.scheme.name(), cfg.cells.0, cfg.cells.1, log_steps(&log, every), grid.time);
    Ok(())
}

fn wave_text(w: Wave) -> String {
    match w {
        Wave::Shock { speed } => format!("shock speed={speed:.16e}"),
        Wave::Rarefaction { head, tail } => format!("rarefaction head={head:.16e} tail={tail:.16e}"),
        Wave::Degenerate { speed } => format!("none speed={speed:.16e}"),
    }
}

pub fn riemann(common: &Common, left: Option<&str>, right: Option<&str>, model_flags: (Option<f64>, Option<f64>), cells: Option<usize>) -> Result<()> {
    let (model, l, r, cfg) = match (left, right) {
        (Some(l), Some(r)) => {
            let base = match &common.config {
                Some(p) => read_config(p)?.model,
                None => default_model(),
            };
            let model = model_with(base, model_flags)?;
            let [rho, u, p] = triple("left", l)?;
            let wl = model.prim_from_rho_u_ptot(rho, u, p)?;
            let [rho, u, p] = triple("right", r)?;
            let wr = model.prim_from_rho_u_ptot(rho, u, p)?;
            (model, wl, wr, None)
        }
        (None, None) => {
            let mut cfg = load(common, None)?;
            cfg.model = model_with(cfg.model, model_flags)?;
            let CaseKind::Riemann { left, right, .. } = cfg.case.kind else {
                return Err(invalid("case", format!("`{}` is not a Riemann problem", cfg.case.name)));
            };
            let model = cfg.model;
            let wl = model.prim_from_rho_u_temp(left[0], left[1], left[2])?;
            let wr = model.prim_from_rho_u_temp(right[0], right[1], right[2])?;
            (model, wl, wr, Some(cfg))
        }
        _ => return Err(invalid("left", "--left and --right go together")),
    };
    let fan = solve_star(&model, &l, &r)?;
    println!("p_star={:.16e}", fan.p_star);
    println!("u_star={:.16e}", fan.u_star);
    println!("rho_star_left={:.16e}", fan.rho_1star);
    println!("rho_star_right={:.16e}", fan.rho_2star);
    println!("left_wave={}", wave_text(fan.left_wave));
    println!("right_wave={}", wave_text(fan.right_wave));
    if let (Some(mut cfg), Some(_)) = (cfg, &common.out) {
        if let Some(n) = cells {
            cfg.cells.0 = n;
        }
        let exact = cfg.case.exact(&model)?.expect("Riemann cases carry an exact solution");
        let (lo, hi) = cfg.case.x_range;
        let n = cfg.cells.0;
        let xs: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * (hi - lo) / n as f64).collect();
        save(cfg.output.dir.join(format!("{}_exact.csv", cfg.case.name)), &exact_csv_1d(&model, &exact, &xs, cfg.control.t_end, &cfg.output.fields)?)?;
    }
    Ok(())
}

pub fn grp_probe(common: &Common, [left, right, dl, dr]: [&str; 4], model_flags: (Option<f64>, Option<f64>)) -> Result<()> {
    let base = match &common.config {
        Some(p) => read_config(p)?.model,
        None => default_model(),
    };
    let model = model_with(base, model_flags)?;
    let side = |what: &str, w: &str, d: &str| -> Result<SlopedState> {
        let [rho, u, p] = triple(what, w)?;
        let [d_rho, d_u, d_p] = triple(what, d)?;
        Ok(SlopedState::new(model.prim_from_rho_u_ptot(rho, u, p)?, d_rho, d_u, d_p))
    };
    let res = solve_grp(&model, &side("left", left, dl)?, &side("right", right, dr)?)?;
    println!("case={:?}", res.case);
    println!("upwind={:?}", res.upwind);
    println!("rho_star={:.16e}", res.star.rho);
    println!("u_star={:.16e}", res.star.u);
    println!("p_star={:.16e}", res.star.p_tot);
    println!("dt_rho={:.16e}", res.dt_rho);
    println!("dt_u={:.16e}", res.dt_u);
    println!("dt_p_tot={:.16e}", res.dt_ptot);
    Ok(())
}

pub fn converge(common: &Common, scheme: Option<&str>, levels: &str) -> Result<()> {
    let cfg = load(common, Some("sine1d"))?;
    let scheme = match scheme {
        Some(s) => parse_scheme(s)?,
        None => cfg.scheme,
    };
    let levels: Vec<usize> = levels.split(',').map(|t| t.trim().parse::<usize>()).collect::<std::result::Result<_, _>>().map_err(|_| invalid("levels", format!("`{levels}` is not a list of cell counts")))?;
    if levels.iter().any(|&n| n < 4) {
        return Err(invalid("levels", "every level needs at least 4 cells"));
    }
    let mut case = cfg.case.clone();
    case.gamma = cfg.model.gamma();
    case.a_rad = cfg.model.a_rad();
    case.theta = cfg.control.theta;
    case.t_end = cfg.control.t_end;
    let csv = convergence_study(&case, scheme, &levels)?.to_csv();
    match &common.out {
        Some(path) => save(path.clone(), &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

pub fn sweep_f(common: &Common, from: f64, to: f64, step: f64) -> Result<()> {
    if let Some(p) = &common.config {
        read_config(p)?;
    }
    if !(from > 0.0 && to >= from && step > 0.0) {
        return Err(invalid("step", "need 0 < from <= to and step > 0"));
    }
    let sweep = max_zero_sweep(&uniform_grid(from, to, step));
    let first = first_gamma1_with_root(&sweep).map_or("none".to_string(), |g| format!("{g}"));
    match &common.out {
        Some(path) => {
            save(path.clone(), &sweep_csv(&sweep))?;
            println!("first_root_gamma1={first}");
        }
        None => {
            print!("{}", sweep_csv(&sweep));
            eprintln!("first_root_gamma1={first}");
        }
    }
    Ok(())
}

pub fn list_cases(common: &Common) -> Result<()> {
    if let Some(p) = &common.config {
        read_config(p)?;
    }
    for c in cases::registry() {
        println!("{}\t{}d\t{}", c.name, c.dimension(), c.summary);
    }
    Ok(())
}
