//! Two-dimensional driver: Strang splitting of directional line sweeps.
//!
//! Every row (x sweep) or column (y sweep) is advanced by the shared line
//! kernel, with the transverse velocity carried as the shear component.
//! Each direction keeps its own slope field, evolved only by its own sweeps.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh1d::{Boundary, StepControl};
use crate::sweep::{self, Ghost, LineCell, LineEnds, LineStep, Scheme, GHOSTS};
use crate::thermo::GasModel;

/// Conserved variables `(ρ, ρu, ρv, E)` of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConsState2D {
    pub rho: f64,
    pub mom_x: f64,
    pub mom_y: f64,
    pub ener: f64,
}

impl ConsState2D {
    pub fn to_array(self) -> [f64; 4] {
        [self.rho, self.mom_x, self.mom_y, self.ener]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { rho: a[0], mom_x: a[1], mom_y: a[2], ener: a[3] }
    }

    /// `E - (m_x² + m_y²)/(2ρ)`: radiation plus gas internal energy per volume.
    pub fn volume_energy(&self) -> f64 {
        self.ener - 0.5 * (self.mom_x * self.mom_x + self.mom_y * self.mom_y) / self.rho
    }

    pub fn is_admissible(&self) -> bool {
        self.rho > 0.0 && self.volume_energy() > 0.0 && self.ener.is_finite()
    }
}

/// Boundary rule on each edge. Inflow functions receive the coordinate
/// along the edge (y on the left/right edges, x on the bottom/top edges)
/// and return `(ρ, u, v, p_tot)` in the fixed frame.
#[derive(Debug, Clone)]
pub struct Edges {
    pub left: Boundary,
    pub right: Boundary,
    pub bottom: Boundary,
    pub top: Boundary,
}

impl Edges {
    pub fn uniform(b: Boundary) -> Self {
        Self { left: b.clone(), right: b.clone(), bottom: b.clone(), top: b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    Y,
}

/// Which direction takes the two half steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitOrder {
    /// `L_x(Δt/2) L_y(Δt) L_x(Δt/2)`
    #[default]
    Xyx,
    /// `L_y(Δt/2) L_x(Δt) L_y(Δt/2)`
    Yxy,
}

#[derive(Debug, Clone)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub x_lo: f64,
    pub y_lo: f64,
    pub time: f64,
    /// Row-major: cell `(i, j)` is at `j * nx + i`.
    pub cells: Vec<ConsState2D>,
    /// Conservative x slopes `(ρ, ρu, ρv, E)`.
    pub slopes_x: Vec<[f64; 4]>,
    /// Conservative y slopes `(ρ, ρu, ρv, E)`.
    pub slopes_y: Vec<[f64; 4]>,
    pub edges: Edges,
}

impl Grid2D {
    /// Grid on `[x_lo, x_hi] × [y_lo, y_hi]` filled from a primitive
    /// `(ρ, u, v, p_tot)` profile sampled at cell centres.
    pub fn from_profile<F>(model: &GasModel, (nx, ny): (usize, usize), (x_lo, x_hi): (f64, f64), (y_lo, y_hi): (f64, f64), edges: Edges, profile: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> [f64; 4],
    {
        if nx < 4 || ny < 4 {
            return Err(Error::InvalidGrid(format!("{nx}x{ny} cells; at least 4 per direction required")));
        }
        if !(x_hi > x_lo) || !(y_hi > y_lo) {
            return Err(Error::InvalidGrid(format!("empty box [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]")));
        }
        if edges.left.is_periodic() != edges.right.is_periodic() || edges.bottom.is_periodic() != edges.top.is_periodic() {
            return Err(Error::InvalidGrid("periodic boundaries must be paired".into()));
        }
        let (dx, dy) = ((x_hi - x_lo) / nx as f64, (y_hi - y_lo) / ny as f64);
        let mut cells = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let [rho, u, v, p] = profile(x_lo + (i as f64 + 0.5) * dx, y_lo + (j as f64 + 0.5) * dy);
                let w = model.prim_from_rho_u_ptot(rho, u, p)?;
                let c = sweep::line_cons(model, &w, v);
                cells.push(ConsState2D::from_array(c));
            }
        }
        Ok(Self { nx, ny, dx, dy, x_lo, y_lo, time: 0.0, cells, slopes_x: vec![[0.0; 4]; nx * ny], slopes_y: vec![[0.0; 4]; nx * ny], edges })
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x_lo + (i as f64 + 0.5) * self.dx, self.y_lo + (j as f64 + 0.5) * self.dy)
    }

    /// `Σ U_ij Δx Δy` per component.
    pub fn totals(&self) -> [f64; 4] {
        let area = self.dx * self.dy;
        let mut t = [0.0; 4];
        for c in &self.cells {
            for (q, v) in c.to_array().iter().enumerate() {
                t[q] += v * area;
            }
        }
        t
    }

    /// Primitive `(ρ, u, v, p_tot, T)` of cell `(i, j)`.
    pub fn primitive(&self, model: &GasModel, i: usize, j: usize) -> Result<[f64; 5]> {
        let (w, v) = sweep::line_prim(model, &self.cells[self.index(i, j)].to_array())?;
        Ok([w.rho, w.u, v, w.p_tot, w.temp])
    }

    fn lines(&self, dir: Direction) -> (usize, usize, f64) {
        match dir {
            Direction::X => (self.ny, self.nx, self.dx),
            Direction::Y => (self.nx, self.ny, self.dy),
        }
    }

    /// Global index of entry `k` along line `l`.
    fn at(&self, dir: Direction, l: usize, k: usize) -> usize {
        match dir {
            Direction::X => l * self.nx + k,
            Direction::Y => k * self.nx + l,
        }
    }

    /// Coordinate of line `l` along the edges it ends on.
    fn line_coordinate(&self, dir: Direction, l: usize) -> f64 {
        match dir {
            Direction::X => self.y_lo + (l as f64 + 0.5) * self.dy,
            Direction::Y => self.x_lo + (l as f64 + 0.5) * self.dx,
        }
    }

    fn ends(&self, model: &GasModel, dir: Direction, l: usize, t: f64) -> Result<LineEnds> {
        let s = self.line_coordinate(dir, l);
        let (lo, hi) = match dir {
            Direction::X => (&self.edges.left, &self.edges.right),
            Direction::Y => (&self.edges.bottom, &self.edges.top),
        };
        Ok(LineEnds { left: ghost(lo, model, dir, t, s)?, right: ghost(hi, model, dir, t, s)? })
    }

    /// Line `l` of cells and slopes in line order `(ρ, m_n, m_t, E)`, with
    /// room for ghosts.
    fn gather(&self, dir: Direction, l: usize) -> (Vec<LineCell>, Vec<LineCell>) {
        let (_, len, _) = self.lines(dir);
        let mut cells = vec![[0.0; 4]; len + 2 * GHOSTS];
        let mut slopes = vec![[0.0; 4]; len + 2 * GHOSTS];
        let field = match dir {
            Direction::X => &self.slopes_x,
            Direction::Y => &self.slopes_y,
        };
        for k in 0..len {
            let g = self.at(dir, l, k);
            cells[k + GHOSTS] = orient(dir, self.cells[g].to_array());
            slopes[k + GHOSTS] = orient(dir, field[g]);
        }
        (cells, slopes)
    }

    /// Limits both slope fields from the current averages.
    pub fn initialize_slopes(&mut self, model: &GasModel, theta: f64) -> Result<()> {
        for dir in [Direction::X, Direction::Y] {
            let (n_lines, len, h) = self.lines(dir);
            let fresh = (0..n_lines)
                .into_par_iter()
                .map(|l| {
                    let (mut cells, _) = self.gather(dir, l);
                    sweep::fill_ghosts(&mut cells, self.ends(model, dir, l, self.time)?);
                    sweep::initial_slopes(model, &cells, h, theta)
                })
                .collect::<Result<Vec<_>>>()?;
            for (l, line) in fresh.iter().enumerate() {
                for k in 0..len {
                    let g = self.at(dir, l, k);
                    let s = orient(dir, line[k]);
                    match dir {
                        Direction::X => self.slopes_x[g] = s,
                        Direction::Y => self.slopes_y[g] = s,
                    }
                }
            }
        }
        Ok(())
    }
}

/// Swaps the momentum components for y lines; an involution.
fn orient(dir: Direction, a: [f64; 4]) -> [f64; 4] {
    match dir {
        Direction::X => a,
        Direction::Y => [a[0], a[2], a[1], a[3]],
    }
}

fn ghost(b: &Boundary, model: &GasModel, dir: Direction, t: f64, s: f64) -> Result<Ghost> {
    Ok(match b {
        Boundary::Periodic => Ghost::Periodic,
        Boundary::ZeroGradient => Ghost::Copy,
        Boundary::Inflow(f) => {
            let [rho, u, v, p] = f(t, s);
            let (normal, tangential) = match dir {
                Direction::X => (u, v),
                Direction::Y => (v, u),
            };
            let w = model.prim_from_rho_u_ptot(rho, normal, p)?;
            Ghost::State(sweep::line_cons(model, &w, tangential))
        }
    })
}

/// Sweep parameters: scheme, limiter and the time interval covered.
#[derive(Debug, Clone, Copy)]
pub struct SweepParams {
    pub scheme: Scheme,
    pub theta: f64,
    pub t_start: f64,
    pub dt: f64,
}

/// Advances every line in direction `dir` by `params.dt`. Lines run in
/// parallel; the result does not depend on their scheduling.
pub fn sweep(grid: &mut Grid2D, model: &GasModel, dir: Direction, params: &SweepParams) -> Result<()> {
    let (n_lines, len, h) = grid.lines(dir);
    let step = LineStep { dt: params.dt, dx: h, theta: params.theta, scheme: params.scheme };
    let g: &Grid2D = grid;
    let updates = (0..n_lines)
        .into_par_iter()
        .map(|l| {
            let (mut cells, mut slopes) = g.gather(dir, l);
            let ends = g.ends(model, dir, l, params.t_start)?;
            sweep::fill_ghosts(&mut cells, ends);
            sweep::fill_slope_ghosts(&mut slopes, ends);
            let ends_new = g.ends(model, dir, l, params.t_start + params.dt)?;
            sweep::advance_line(model, &step, &cells, &slopes, ends_new, false).map_err(|e| match e {
                Error::InadmissibleUpdate { cell, reason } => Error::InadmissibleUpdate { cell: g.at(dir, l, cell), reason },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for (l, up) in updates.into_iter().enumerate() {
        for k in 0..len {
            let idx = grid.at(dir, l, k);
            grid.cells[idx] = ConsState2D::from_array(orient(dir, up.cells[k]));
            let s = orient(dir, up.slopes[k]);
            match dir {
                Direction::X => grid.slopes_x[idx] = s,
                Direction::Y => grid.slopes_y[idx] = s,
            }
        }
    }
    Ok(())
}

pub fn x_sweep(grid: &mut Grid2D, model: &GasModel, params: &SweepParams) -> Result<()> {
    sweep(grid, model, Direction::X, params)
}

pub fn y_sweep(grid: &mut Grid2D, model: &GasModel, params: &SweepParams) -> Result<()> {
    sweep(grid, model, Direction::Y, params)
}

/// `cfl · min(Δx / max(|u| + c), Δy / max(|v| + c))`, clipped to `t_end`.
pub fn compute_dt(grid: &Grid2D, model: &GasModel, control: &StepControl) -> Result<f64> {
    let (mut sx, mut sy): (f64, f64) = (0.0, 0.0);
    for c in &grid.cells {
        if !c.is_admissible() {
            return Err(Error::NonPositiveInternalEnergy(c.volume_energy()));
        }
        let e = model.energy_from_volume_energy(c.rho, c.volume_energy())?;
        let sound = model.sound_speed(c.rho, e);
        sx = sx.max((c.mom_x / c.rho).abs() + sound);
        sy = sy.max((c.mom_y / c.rho).abs() + sound);
    }
    let dt = control.cfl * (grid.dx / sx).min(grid.dy / sy);
    let remaining = control.t_end - grid.time;
    Ok(if dt >= remaining { remaining } else { dt })
}

/// One split step of length `dt`.
pub fn strang_step(grid: &mut Grid2D, model: &GasModel, scheme: Scheme, theta: f64, dt: f64, order: SplitOrder) -> Result<()> {
    let (outer, inner) = match order {
        SplitOrder::Xyx => (Direction::X, Direction::Y),
        SplitOrder::Yxy => (Direction::Y, Direction::X),
    };
    let t = grid.time;
    let half = 0.5 * dt;
    sweep(grid, model, outer, &SweepParams { scheme, theta, t_start: t, dt: half })?;
    sweep(grid, model, inner, &SweepParams { scheme, theta, t_start: t, dt })?;
    sweep(grid, model, outer, &SweepParams { scheme, theta, t_start: t + half, dt: half })?;
    grid.time = t + dt;
    Ok(())
}

/// Steps to `control.t_end`, calling `observer` after every step. GRP
/// slopes are initialised from the averages when the run starts at `t = 0`.
pub fn run<F>(grid: &mut Grid2D, model: &GasModel, scheme: Scheme, control: &StepControl, order: SplitOrder, mut observer: F) -> Result<crate::mesh1d::RunStats>
where
    F: FnMut(&Grid2D) -> Result<()>,
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
        strang_step(grid, model, scheme, control.theta, dt, order)?;
        if control.t_end - grid.time <= 1e-14 * control.t_end {
            grid.time = control.t_end;
        }
        steps += 1;
        observer(grid)?;
    }
    Ok(crate::mesh1d::RunStats { steps, time: grid.time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh1d::{self, Grid1D};

    fn model() -> GasModel {
        GasModel::new(5.0 / 3.0, 1.0).unwrap()
    }

    #[test]
    fn constant_state_survives_both_sweeps() {
        let m = model();
        let mut g = Grid2D::from_profile(&m, (8, 6), (0.0, 1.0), (0.0, 1.0), Edges::uniform(Boundary::Periodic), |_, _| [1.0, 0.3, -0.2, 1.0]).unwrap();
        let before = g.cells.clone();
        let c = StepControl { t_end: 0.05, ..Default::default() };
        run(&mut g, &m, Scheme::Grp, &c, SplitOrder::Xyx, |_| Ok(())).unwrap();
        for (a, b) in g.cells.iter().zip(&before) {
            for q in 0..4 {
                assert!((a.to_array()[q] - b.to_array()[q]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn y_invariant_rows_match_the_line_solver() {
        let m = model();
        let profile = |x: f64| [1.0 + 0.5 * (x > 0.5) as i32 as f64, 0.1, 1.0 + (x > 0.5) as i32 as f64];
        let edges = Edges { left: Boundary::ZeroGradient, right: Boundary::ZeroGradient, bottom: Boundary::Periodic, top: Boundary::Periodic };
        let mut g2 = Grid2D::from_profile(&m, (20, 4), (0.0, 1.0), (0.0, 1.0), edges, |x, _| {
            let [r, u, p] = profile(x);
            [r, u, 0.0, p]
        })
        .unwrap();
        let mut g1 = Grid1D::from_profile(&m, 20, 0.0, 1.0, (Boundary::ZeroGradient, Boundary::ZeroGradient), profile).unwrap();
        g2.initialize_slopes(&m, 1.5).unwrap();
        g1.initialize_slopes(&m, 1.5).unwrap();
        let dt = 0.01;
        x_sweep(&mut g2, &m, &SweepParams { scheme: Scheme::Grp, theta: 1.5, t_start: 0.0, dt }).unwrap();
        mesh1d::step(&mut g1, &m, Scheme::Grp, 1.5, dt).unwrap();
        for j in 0..4 {
            for i in 0..20 {
                let a = g2.cells[g2.index(i, j)];
                let b = g1.cells[i];
                assert!((a.rho - b.rho).abs() <= 1e-14 * b.rho.abs().max(1.0));
                assert!((a.mom_x - b.mom).abs() <= 1e-14 * b.mom.abs().max(1.0));
                assert!((a.ener - b.ener).abs() <= 1e-14 * b.ener.abs().max(1.0));
                assert_eq!(a.mom_y, 0.0);
            }
        }
    }
}
