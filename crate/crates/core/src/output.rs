//! CSV writers. Every number is printed with 17 significant digits so files
//! from identical runs compare byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use crate::cases::ExactSolution;
use crate::config::PROFILE_FIELDS;
use crate::error::{Error, Result};
use crate::mesh1d::Grid1D;
use crate::solver2d::Grid2D;
use crate::thermo::{GasModel, PrimState1D};

fn column(w: &PrimState1D, field: &str) -> f64 {
    match field {
        "rho" => w.rho,
        "u" => w.u,
        "p_tot" => w.p_tot,
        "T" => w.temp,
        "c" => w.sound,
        "p_rad" => w.p_rad(),
        "e" => w.e,
        _ => f64::NAN,
    }
}

fn header(fields: &[String]) -> String {
    let mut h = String::from("x");
    for f in fields {
        h.push(',');
        h.push_str(f);
    }
    h.push('\n');
    h
}

fn profile_row(s: &mut String, x: f64, w: &PrimState1D, fields: &[String]) {
    write!(s, "{x:.16e}").unwrap();
    for f in fields {
        write!(s, ",{:.16e}", column(w, f)).unwrap();
    }
    s.push('\n');
}

/// All profile columns, in file order.
pub fn all_fields() -> Vec<String> {
    PROFILE_FIELDS.iter().map(|s| s.to_string()).collect()
}

/// One row per cell: `x` and the requested columns of
/// `rho, u, p_tot, T, c, p_rad, e`.
pub fn profile_csv_1d(model: &GasModel, grid: &Grid1D, fields: &[String]) -> Result<String> {
    let mut s = header(fields);
    for (i, c) in grid.cells.iter().enumerate() {
        profile_row(&mut s, grid.cell_center(i), &model.cons_to_prim(c)?, fields);
    }
    Ok(s)
}

/// The exact solution at time `t`, sampled at the given points.
pub fn exact_csv_1d(model: &GasModel, exact: &ExactSolution, xs: &[f64], t: f64, fields: &[String]) -> Result<String> {
    let mut s = header(fields);
    for &x in xs {
        profile_row(&mut s, x, &exact.prim_1d(model, x, t)?, fields);
    }
    Ok(s)
}

/// Cell-centre table `x, y, rho, u, v, p_tot, T` after a comment line with
/// the grid geometry and time.
pub fn grid_csv_2d(model: &GasModel, grid: &Grid2D) -> Result<String> {
    let mut s = format!("# nx={} ny={} dx={:.16e} dy={:.16e} t={:.16e}\nx,y,rho,u,v,p_tot,T\n", grid.nx, grid.ny, grid.dx, grid.dy, grid.time);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let (x, y) = grid.cell_center(i, j);
            let [rho, u, v, p, t] = grid.primitive(model, i, j)?;
            writeln!(s, "{x:.16e},{y:.16e},{rho:.16e},{u:.16e},{v:.16e},{p:.16e},{t:.16e}").unwrap();
        }
    }
    Ok(s)
}

/// The row of cells whose centres lie nearest to `y`: `x, rho, u, v, p_tot, T`.
pub fn lineout_csv(model: &GasModel, grid: &Grid2D, y: f64) -> Result<String> {
    let j = ((y - grid.y_lo) / grid.dy - 0.5).round();
    if !(j >= 0.0 && (j as usize) < grid.ny) {
        return Err(Error::DomainMismatch(format!("lineout at y = {y} outside the grid")));
    }
    let j = j as usize;
    let mut s = String::from("x,rho,u,v,p_tot,T\n");
    for i in 0..grid.nx {
        let [rho, u, v, p, t] = grid.primitive(model, i, j)?;
        writeln!(s, "{:.16e},{rho:.16e},{u:.16e},{v:.16e},{p:.16e},{t:.16e}", grid.cell_center(i, j).0).unwrap();
    }
    Ok(s)
}

/// Domain totals of the conserved variables over a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationLog {
    columns: Vec<&'static str>,
    rows: Vec<(usize, f64, Vec<f64>)>,
}

impl ConservationLog {
    pub fn new_1d() -> Self {
        Self { columns: vec!["mass", "momentum", "energy"], rows: Vec::new() }
    }

    pub fn new_2d() -> Self {
        Self { columns: vec!["mass", "momentum_x", "momentum_y", "energy"], rows: Vec::new() }
    }

    pub fn record(&mut self, step: usize, t: f64, totals: &[f64]) {
        self.rows.push((step, t, totals.to_vec()));
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Largest `|total - initial| / max(|initial|, 1e-300)` per column.
    pub fn max_relative_drift(&self) -> Vec<f64> {
        let Some((_, _, first)) = self.rows.first() else { return Vec::new() };
        (0..first.len())
            .map(|q| self.rows.iter().map(|(_, _, r)| (r[q] - first[q]).abs() / first[q].abs().max(1e-300)).fold(0.0, f64::max))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("step,t,{}\n", self.columns.join(","));
        for (step, t, totals) in &self.rows {
            write!(s, "{step},{t:.16e}").unwrap();
            for v in totals {
                write!(s, ",{v:.16e}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
