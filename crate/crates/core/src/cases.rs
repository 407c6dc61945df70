//! Named test problems: the smooth accuracy waves, four Riemann problems and
//! the two cloud interactions.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh1d::{Boundary, Grid1D};
use crate::quadrature::gauss3_average;
use crate::riemann::{solve_star, WaveFan};
use crate::solver2d::{Edges, Grid2D};
use crate::thermo::{GasModel, PrimState1D};

/// Amplitude, advection velocity and pressure of the sine accuracy waves.
const SINE_AMPLITUDE: f64 = 0.2;
const SINE_SPEED: f64 = 0.2;
const SINE_PRESSURE: f64 = 1.0;

/// Initial data of a shock or wind interacting with a dense disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloudSetup {
    /// `(ρ, T, u, v)` of the gas around the cloud.
    pub ambient: [f64; 4],
    /// Shock position and `(ρ, T, u, v)` behind it, if any.
    pub shocked: Option<(f64, [f64; 4])>,
    pub center: (f64, f64),
    pub radius: f64,
    pub cloud_density: f64,
    pub cloud_temperature: f64,
    /// Time-ramped wind `(ρ, T, u_max)` entering through the left edge.
    pub wind: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseKind {
    /// `(ρ, u, T)` on either side of `split`.
    Riemann { left: [f64; 3], right: [f64; 3], split: f64 },
    SineWave1D,
    SineWave2D,
    Cloud(CloudSetup),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub name: &'static str,
    pub summary: &'static str,
    pub gamma: f64,
    pub a_rad: f64,
    pub t_end: f64,
    /// Limiter parameter used by default for this case.
    pub theta: f64,
    /// Default resolution; `ny = 1` in one dimension.
    pub cells: (usize, usize),
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub kind: CaseKind,
}

/// All registered cases in a fixed order.
pub fn registry() -> Vec<Case> {
    let riemann = |name, summary, left, right, split, t_end, theta| Case {
        name,
        summary,
        gamma: 5.0 / 3.0,
        a_rad: 1.0,
        t_end,
        theta,
        cells: (200, 1),
        x_range: (0.0, 1.0),
        y_range: (0.0, 1.0),
        kind: CaseKind::Riemann { left, right, split },
    };
    let x0 = 1.64;
    vec![
        Case {
            name: "sine1d",
            summary: "smooth density wave advected through a periodic interval",
            gamma: 5.0 / 3.0,
            a_rad: 1.0,
            t_end: 0.5,
            theta: 1.5,
            cells: (320, 1),
            x_range: (0.0, 1.0),
            y_range: (0.0, 1.0),
            kind: CaseKind::SineWave1D,
        },
        riemann("rp1", "two strong shocks and a contact", [1.0, 50.0, 0.5], [2.0, -40.0, 1.0], 0.6, 0.04, 1.0),
        riemann("rp2", "very strong colliding shocks", [1.0, 150.0, 0.5], [2.0, -100.0, 1.0], 0.6, 0.018, 1.0),
        riemann("rp3", "receding rarefactions with wall heating", [1.0, -1.0, 1.0], [1.0, 1.0, 1.0], 0.5, 0.2, 1.5),
        riemann("rp4", "rarefaction, contact and shock", [1.0, 0.0, 6.0], [1.0, 0.0, 1.5], 0.5, 0.01, 1.5),
        Case {
            name: "sine2d",
            summary: "smooth density wave advected diagonally through a periodic square",
            gamma: 5.0 / 3.0,
            a_rad: 1.0,
            t_end: 0.5,
            theta: 1.5,
            cells: (80, 80),
            x_range: (0.0, 1.0),
            y_range: (0.0, 1.0),
            kind: CaseKind::SineWave2D,
        },
        Case {
            name: "shock_cloud",
            summary: "Mach 256.7 shock hitting a cloud 100 times denser",
            gamma: 5.0 / 3.0,
            a_rad: 0.01,
            t_end: 0.07,
            theta: 1.5,
            cells: (256, 128),
            x_range: (0.0, 2.0),
            y_range: (0.0, 1.0),
            kind: CaseKind::Cloud(CloudSetup {
                ambient: [1.0, 0.01, -22.9472, 0.0],
                shocked: Some((x0, [6.57615, 20.0, 0.0, 0.0])),
                center: (x0 + 0.18, 0.5),
                radius: 0.15,
                cloud_density: 100.0,
                cloud_temperature: 0.01,
                wind: None,
            }),
        },
        Case {
            name: "wind_cloud",
            summary: "ramped wind blowing over a cloud 25 times denser",
            gamma: 5.0 / 3.0,
            a_rad: 1.0,
            t_end: 0.6,
            theta: 1.5,
            cells: (256, 128),
            x_range: (0.0, 2.0),
            y_range: (0.0, 1.0),
            kind: CaseKind::Cloud(CloudSetup {
                ambient: [1.0, 0.09, 0.0, 0.0],
                shocked: None,
                center: (0.3, 0.5),
                radius: 0.15,
                cloud_density: 25.0,
                cloud_temperature: 0.09,
                wind: Some([1.0, 0.09, 6.0]),
            }),
        },
    ]
}

pub fn find(name: &str) -> Result<Case> {
    registry().into_iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCase(name.to_string()))
}

/// Reference solution of a case, where one is known in closed form.
#[derive(Debug, Clone)]
pub enum ExactSolution {
    Riemann { fan: WaveFan, split: f64 },
    SineWave1D,
    SineWave2D,
}

impl ExactSolution {
    /// Primitive state at `(x, t)` of a one-dimensional solution.
    pub fn prim_1d(&self, model: &GasModel, x: f64, t: f64) -> Result<PrimState1D> {
        match self {
            ExactSolution::Riemann { fan, split } => {
                if t <= 0.0 {
                    let side = if x < *split { &fan.left_state } else { &fan.right_state };
                    return Ok(*side);
                }
                fan.sample(model, (x - split) / t)
            }
            ExactSolution::SineWave1D => model.prim_from_rho_u_ptot(self.density(x, 0.0, t), SINE_SPEED, SINE_PRESSURE),
            ExactSolution::SineWave2D => Err(Error::DomainMismatch("two-dimensional solution sampled on a line".into())),
        }
    }

    /// Density at `(x, y, t)`; `y` is ignored in one dimension. Riemann
    /// fans return NaN, use [`ExactSolution::prim_1d`] there.
    pub fn density(&self, x: f64, y: f64, t: f64) -> f64 {
        match self {
            ExactSolution::SineWave1D => 1.0 + SINE_AMPLITUDE * (2.0 * PI * (x - SINE_SPEED * t)).sin(),
            ExactSolution::SineWave2D => 1.0 + SINE_AMPLITUDE * (2.0 * PI * (x + y - 2.0 * SINE_SPEED * t)).sin(),
            ExactSolution::Riemann { .. } => f64::NAN,
        }
    }
}

/// `(ρ, T, u, v)` to `(ρ, u, v, p_tot)`.
fn from_temperature(model: &GasModel, [rho, temp, u, v]: [f64; 4]) -> [f64; 4] {
    [rho, u, v, model.total_pressure(rho, model.c_v() * temp)]
}

impl Case {
    pub fn model(&self) -> Result<GasModel> {
        GasModel::new(self.gamma, self.a_rad)
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            CaseKind::Riemann { .. } | CaseKind::SineWave1D => 1,
            CaseKind::SineWave2D | CaseKind::Cloud(_) => 2,
        }
    }

    pub fn exact(&self, model: &GasModel) -> Result<Option<ExactSolution>> {
        Ok(match self.kind {
            CaseKind::Riemann { left, right, split } => {
                let l = model.prim_from_rho_u_temp(left[0], left[1], left[2])?;
                let r = model.prim_from_rho_u_temp(right[0], right[1], right[2])?;
                Some(ExactSolution::Riemann { fan: solve_star(model, &l, &r)?, split })
            }
            CaseKind::SineWave1D => Some(ExactSolution::SineWave1D),
            CaseKind::SineWave2D => Some(ExactSolution::SineWave2D),
            CaseKind::Cloud(_) => None,
        })
    }

    /// Initial one-dimensional grid with `n` cells. Smooth data are cell
    /// averaged, discontinuous data sampled at cell centres.
    pub fn grid_1d(&self, model: &GasModel, n: usize) -> Result<Grid1D> {
        let (lo, hi) = self.x_range;
        match self.kind {
            CaseKind::Riemann { left, right, split } => {
                let l = model.prim_from_rho_u_temp(left[0], left[1], left[2])?;
                let r = model.prim_from_rho_u_temp(right[0], right[1], right[2])?;
                let bc = (Boundary::ZeroGradient, Boundary::ZeroGradient);
                Grid1D::from_profile(model, n, lo, hi, bc, |x| {
                    let w = if x < split { &l } else { &r };
                    [w.rho, w.u, w.p_tot]
                })
            }
            CaseKind::SineWave1D => {
                let h = 0.5 * (hi - lo) / n as f64;
                let exact = ExactSolution::SineWave1D;
                Grid1D::from_profile(model, n, lo, hi, (Boundary::Periodic, Boundary::Periodic), |x| {
                    [gauss3_average(|s| exact.density(s, 0.0, 0.0), x - h, x + h), SINE_SPEED, SINE_PRESSURE]
                })
            }
            _ => Err(Error::DomainMismatch(format!("case `{}` is two-dimensional", self.name))),
        }
    }

    pub fn grid_2d(&self, model: &GasModel, (nx, ny): (usize, usize)) -> Result<Grid2D> {
        let (xr, yr) = (self.x_range, self.y_range);
        match self.kind {
            CaseKind::SineWave2D => {
                let hx = 0.5 * (xr.1 - xr.0) / nx as f64;
                let hy = 0.5 * (yr.1 - yr.0) / ny as f64;
                let exact = ExactSolution::SineWave2D;
                Grid2D::from_profile(model, (nx, ny), xr, yr, Edges::uniform(Boundary::Periodic), |x, y| {
                    let rho = gauss3_average(|s| gauss3_average(|r| exact.density(s, r, 0.0), y - hy, y + hy), x - hx, x + hx);
                    [rho, SINE_SPEED, SINE_SPEED, SINE_PRESSURE]
                })
            }
            CaseKind::Cloud(setup) => {
                let mut edges = Edges::uniform(Boundary::ZeroGradient);
                if let Some([rho, temp, u_max]) = setup.wind {
                    let m = *model;
                    edges.left = Boundary::Inflow(Arc::new(move |t, _| from_temperature(&m, [rho, temp, u_max * (1.0 - (-10.0 * t).exp()), 0.0])));
                }
                Grid2D::from_profile(model, (nx, ny), xr, yr, edges, |x, y| {
                    let (dx, dy) = (x - setup.center.0, y - setup.center.1);
                    if dx * dx + dy * dy < setup.radius * setup.radius {
                        let [_, _, u, v] = setup.ambient;
                        return from_temperature(model, [setup.cloud_density, setup.cloud_temperature, u, v]);
                    }
                    match setup.shocked {
                        Some((x0, post)) if x < x0 => from_temperature(model, post),
                        _ => from_temperature(model, setup.ambient),
                    }
                })
            }
            _ => Err(Error::DomainMismatch(format!("case `{}` is one-dimensional", self.name))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_distinct_cases() {
        let names: Vec<_> = registry().iter().map(|c| c.name).collect();
        assert_eq!(names.len(), 8);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
        assert!(matches!(find("nope"), Err(Error::UnknownCase(_))));
    }

    #[test]
    fn riemann_data_as_published() {
        let c = find("rp3").unwrap();
        assert_eq!(c.kind, CaseKind::Riemann { left: [1.0, -1.0, 1.0], right: [1.0, 1.0, 1.0], split: 0.5 });
        assert_eq!(c.t_end, 0.2);
        let c = find("rp4").unwrap();
        assert_eq!(c.kind, CaseKind::Riemann { left: [1.0, 0.0, 6.0], right: [1.0, 0.0, 1.5], split: 0.5 });
        assert_eq!(c.t_end, 0.01);
        let c = find("rp1").unwrap();
        assert_eq!((c.cells, c.theta, c.t_end), ((200, 1), 1.0, 0.04));
    }

    #[test]
    fn sine_cells_hold_exact_averages() {
        let c = find("sine1d").unwrap();
        let m = c.model().unwrap();
        let g = c.grid_1d(&m, 10).unwrap();
        for (i, cell) in g.cells.iter().enumerate() {
            let (a, b) = (i as f64 / 10.0, (i + 1) as f64 / 10.0);
            let avg = 1.0 + 0.2 * ((2.0 * PI * a).cos() - (2.0 * PI * b).cos()) / (2.0 * PI * (b - a));
            assert!((cell.rho - avg).abs() < 1e-7);
            let w = m.cons_to_prim(cell).unwrap();
            assert!((w.p_tot - 1.0).abs() < 1e-12 && (w.u - 0.2).abs() < 1e-14);
        }
    }

    #[test]
    fn cloud_is_denser_and_shock_sits_at_its_position() {
        let c = find("shock_cloud").unwrap();
        let m = c.model().unwrap();
        let g = c.grid_2d(&m, (64, 32)).unwrap();
        let at = |x: f64, y: f64| g.cells[g.index((x / g.dx) as usize, (y / g.dy) as usize)].rho;
        assert_eq!(at(1.82, 0.5), 100.0);
        assert_eq!(at(1.0, 0.5), 6.57615);
        assert_eq!(at(1.95, 0.9), 1.0);
    }

    #[test]
    fn wind_ramps_from_rest() {
        let c = find("wind_cloud").unwrap();
        let m = c.model().unwrap();
        let g = c.grid_2d(&m, (16, 8)).unwrap();
        let Boundary::Inflow(f) = &g.edges.left else { panic!("left edge is not an inflow") };
        assert_eq!(f(0.0, 0.5)[1], 0.0);
        assert!((f(1.0, 0.5)[1] - 6.0 * (1.0 - (-10.0f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn exact_riemann_solution_starts_from_the_data() {
        let c = find("rp1").unwrap();
        let m = c.model().unwrap();
        let ex = c.exact(&m).unwrap().unwrap();
        assert_eq!(ex.prim_1d(&m, 0.1, 0.0).unwrap().u, 50.0);
        assert_eq!(ex.prim_1d(&m, 0.99, 0.04).unwrap().u, -40.0);
    }
}
