//! Uniform-grid finite-volume solver in one space dimension.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sweep::{self, Ghost, LineCell, LineEnds, LineStep, Scheme, GHOSTS};
use crate::thermo::{ConsState1D, GasModel};

/// Primitive `(ρ, u, v, p_tot)` imposed at an inflow boundary, as a function
/// of time and the coordinate along the boundary.
pub type InflowFn = Arc<dyn Fn(f64, f64) -> [f64; 4] + Send + Sync>;

#[derive(Clone)]
pub enum Boundary {
    Periodic,
    ZeroGradient,
    Inflow(InflowFn),
}

impl fmt::Debug for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Periodic => f.write_str("Periodic"),
            Boundary::ZeroGradient => f.write_str("ZeroGradient"),
            Boundary::Inflow(_) => f.write_str("Inflow(..)"),
        }
    }
}

impl Boundary {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Boundary::Periodic)
    }

    /// Ghost rule at time `t`, at position `s` along the boundary.
    pub(crate) fn ghost(&self, model: &GasModel, t: f64, s: f64) -> Result<Ghost> {
        Ok(match self {
            Boundary::Periodic => Ghost::Periodic,
            Boundary::ZeroGradient => Ghost::Copy,
            Boundary::Inflow(f) => {
                let [rho, u, v, p] = f(t, s);
                let w = model.prim_from_rho_u_ptot(rho, u, p)?;
                Ghost::State(sweep::line_cons(model, &w, v))
            }
        })
    }
}

/// Time stepping parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub cfl: f64,
    pub theta: f64,
    pub t_end: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { cfl: 0.45, theta: 1.5, t_end: 0.0, max_steps: 1_000_000 }
    }
}

impl StepControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Validation { field: "control.cfl".into(), message: format!("{} not in (0,1)", self.cfl) });
        }
        if !(self.theta >= 1.0 && self.theta < 2.0) {
            return Err(Error::Validation { field: "control.theta".into(), message: format!("{} not in [1,2)", self.theta) });
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::Validation { field: "control.t_end".into(), message: format!("{} must be >= 0", self.t_end) });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Grid1D {
    pub n_cells: usize,
    pub dx: f64,
    pub x_lo: f64,
    pub time: f64,
    pub cells: Vec<ConsState1D>,
    /// Conservative slope per cell.
    pub slopes: Vec<[f64; 3]>,
    pub bc_left: Boundary,
    pub bc_right: Boundary,
}

impl Grid1D {
    /// Grid on `[x_lo, x_hi]` filled from a primitive `(ρ, u, p_tot)`
    /// profile sampled at cell centres. Slopes start at zero.
    pub fn from_profile<F>(model: &GasModel, n_cells: usize, x_lo: f64, x_hi: f64, bc: (Boundary, Boundary), profile: F) -> Result<Self>
    where
        F: Fn(f64) -> [f64; 3],
    {
        if n_cells < 4 {
            return Err(Error::InvalidGrid(format!("{n_cells} cells; at least 4 required")));
        }
        if !(x_hi > x_lo) {
            return Err(Error::InvalidGrid(format!("empty interval [{x_lo}, {x_hi}]")));
        }
        if bc.0.is_periodic() != bc.1.is_periodic() {
            return Err(Error::InvalidGrid("periodic boundaries must be paired".into()));
        }
        let dx = (x_hi - x_lo) / n_cells as f64;
        let cells = (0..n_cells)
            .map(|i| {
                let [rho, u, p] = profile(x_lo + (i as f64 + 0.5) * dx);
                Ok(model.prim_to_cons(&model.prim_from_rho_u_ptot(rho, u, p)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_cells, dx, x_lo, time: 0.0, cells, slopes: vec![[0.0; 3]; n_cells], bc_left: bc.0, bc_right: bc.1 })
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_lo + (i as f64 + 0.5) * self.dx
    }

    pub fn x_hi(&self) -> f64 {
        self.x_lo + self.n_cells as f64 * self.dx
    }

    /// `Σ U_j Δx` per component.
    pub fn totals(&self) -> [f64; 3] {
        let mut t = [0.0; 3];
        for c in &self.cells {
            t[0] += c.rho * self.dx;
            t[1] += c.mom * self.dx;
            t[2] += c.ener * self.dx;
        }
        t
    }

    fn ends(&self, model: &GasModel, t: f64) -> Result<LineEnds> {
        Ok(LineEnds { left: self.bc_left.ghost(model, t, 0.0)?, right: self.bc_right.ghost(model, t, 0.0)? })
    }

    fn line(&self) -> (Vec<LineCell>, Vec<LineCell>) {
        let pad = || std::iter::repeat_n([0.0; 4], GHOSTS);
        let cells = pad().chain(self.cells.iter().map(|c| [c.rho, c.mom, 0.0, c.ener])).chain(pad()).collect();
        let slopes = pad().chain(self.slopes.iter().map(|s| [s[0], s[1], 0.0, s[2]])).chain(pad()).collect();
        (cells, slopes)
    }

    /// Limits slopes from the current averages (used before the first step).
    pub fn initialize_slopes(&mut self, model: &GasModel, theta: f64) -> Result<()> {
        let (mut cells, _) = self.line();
        sweep::fill_ghosts(&mut cells, self.ends(model, self.time)?);
        let s = sweep::initial_slopes(model, &cells, self.dx, theta)?;
        self.slopes = s.iter().map(|s| [s[0], s[1], s[3]]).collect();
        Ok(())
    }
}

/// `cfl·dx / max(|u| + c)`, clipped so the run lands on `t_end`.
pub fn compute_dt(grid: &Grid1D, model: &GasModel, control: &StepControl) -> Result<f64> {
    let mut s: f64 = 0.0;
    for c in &grid.cells {
        s = s.max(model.signal_speed(c)?);
    }
    let dt = control.cfl * grid.dx / s;
    let remaining = control.t_end - grid.time;
    Ok(if dt >= remaining { remaining } else { dt })
}

/// Advances the grid by `dt` with the given scheme.
pub fn step(grid: &mut Grid1D, model: &GasModel, scheme: Scheme, theta: f64, dt: f64) -> Result<()> {
    let (mut cells, mut slopes) = grid.line();
    let t = grid.time;
    sweep::fill_ghosts(&mut cells, grid.ends(model, t)?);
    sweep::fill_slope_ghosts(&mut slopes, grid.ends(model, t)?);
    let ends_new = grid.ends(model, t + dt)?;
    let up = sweep::advance_line(model, &LineStep { dt, dx: grid.dx, theta, scheme }, &cells, &slopes, ends_new, true)?;
    for (dst, c) in grid.cells.iter_mut().zip(&up.cells) {
        *dst = ConsState1D::new(c[0], c[1], c[3]);
    }
    for (dst, s) in grid.slopes.iter_mut().zip(&up.slopes) {
        *dst = [s[0], s[1], s[3]];
    }
    grid.time = t + dt;
    Ok(())
}

pub fn grp_step(grid: &mut Grid1D, model: &GasModel, control: &StepControl, dt: f64) -> Result<()> {
    step(grid, model, Scheme::Grp, control.theta, dt)
}

pub fn godunov_step(grid: &mut Grid1D, model: &GasModel, dt: f64) -> Result<()> {
    step(grid, model, Scheme::Godunov, 1.0, dt)
}

pub fn muscl_hancock_step(grid: &mut Grid1D, model: &GasModel, control: &StepControl, dt: f64) -> Result<()> {
    step(grid, model, Scheme::MusclHancock, control.theta, dt)
}

/// Summary of a completed run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    pub time: f64,
}

/// Steps to `control.t_end`, calling `observer` after every step.
///
/// GRP slopes are initialised from the averages when the run starts at
/// `t = 0`.
pub fn run<F>(grid: &mut Grid1D, model: &GasModel, scheme: Scheme, control: &StepControl, mut observer: F) -> Result<RunStats>
where
    F: FnMut(&Grid1D) -> Result<()>,
{
    control.validate()?;
    if scheme == Scheme::Grp && grid.time == 0.0 {
        grid.initialize_slopes(model, control.theta)?;
    }
    let mut steps = 0;
    while grid.time < control.t_end {
        if steps >= control.max_steps {
            return Err(Error::Validation { field: "control.max_steps".into(), message: format!("{steps} steps reached before t_end") });
        }
        let dt = compute_dt(grid, model, control)?;
        step(grid, model, scheme, control.theta, dt)?;
        if control.t_end - grid.time <= 1e-14 * control.t_end {
            grid.time = control.t_end;
        }
        steps += 1;
        observer(grid)?;
    }
    Ok(RunStats { steps, time: grid.time })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> GasModel {
        GasModel::new(5.0 / 3.0, 1.0).unwrap()
    }

    #[test]
    fn dt_from_fastest_signal() {
        let m = GasModel::new(1.4, 0.0).unwrap();
        // c = 1 for ρ = 1.4, p = 1
        let g = Grid1D::from_profile(&m, 100, 0.0, 1.0, (Boundary::ZeroGradient, Boundary::ZeroGradient), |_| [1.4, 0.0, 1.0]).unwrap();
        let c = StepControl { t_end: 1.0, ..Default::default() };
        assert!((compute_dt(&g, &m, &c).unwrap() - 0.0045).abs() < 1e-15);
        let g = Grid1D::from_profile(&m, 100, 0.0, 1.0, (Boundary::ZeroGradient, Boundary::ZeroGradient), |x| {
            [1.4, if x < 0.5 { 2.0 } else { -2.0 }, 1.0]
        })
        .unwrap();
        assert!((compute_dt(&g, &m, &c).unwrap() - 0.0045 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_state_is_preserved() {
        let m = model();
        for scheme in [Scheme::Grp, Scheme::MusclHancock, Scheme::Godunov] {
            let mut g = Grid1D::from_profile(&m, 16, 0.0, 1.0, (Boundary::Periodic, Boundary::Periodic), |_| [1.0, 0.3, 1.0]).unwrap();
            let before = g.cells.clone();
            let c = StepControl { t_end: 0.1, ..Default::default() };
            run(&mut g, &m, scheme, &c, |_| Ok(())).unwrap();
            for (a, b) in g.cells.iter().zip(&before) {
                assert!((a.rho - b.rho).abs() < 1e-14 && (a.ener - b.ener).abs() < 1e-13, "{scheme:?}");
            }
        }
    }

    #[test]
    fn zero_end_time_echoes_initial_data() {
        let m = model();
        let mut g = Grid1D::from_profile(&m, 8, 0.0, 1.0, (Boundary::ZeroGradient, Boundary::ZeroGradient), |x| [1.0 + x, 0.0, 1.0]).unwrap();
        let before = g.cells.clone();
        let stats = run(&mut g, &m, Scheme::Grp, &StepControl::default(), |_| Ok(())).unwrap();
        assert_eq!(stats.steps, 0);
        assert_eq!(g.cells, before);
    }
}
