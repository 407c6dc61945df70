//! One-dimensional update of a line of cells, shared by the 1D driver and
//! both directional sweeps in 2D.
//!
//! A line cell is `[ρ, m_n, m_t, E]`: density, momentum normal to the
//! faces, transverse momentum and total energy. In 1D the transverse
//! momentum is zero. Lines carry [`GHOSTS`] ghost cells on each side.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grp::{shear_derivative, solve_grp, SlopedState};
use crate::riemann::solve_star;
use crate::thermo::{ConsState1D, GasModel, PrimState1D};

pub const GHOSTS: usize = 2;

pub type LineCell = [f64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Grp,
    MusclHancock,
    /// First order: the GRP update with slopes held at zero.
    Godunov,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Grp => "grp",
            Scheme::MusclHancock => "muscl",
            Scheme::Godunov => "godunov",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grp" => Some(Scheme::Grp),
            "muscl" | "muscl-hancock" | "muscl_hancock" => Some(Scheme::MusclHancock),
            "godunov" | "godunov1" => Some(Scheme::Godunov),
            _ => None,
        }
    }
}

/// How the ghost cells at one end of a line are filled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ghost {
    Periodic,
    /// Constant extension of the boundary cell with zero slope.
    Copy,
    /// A prescribed conservative state with zero slope.
    State(LineCell),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineEnds {
    pub left: Ghost,
    pub right: Ghost,
}

/// Fills the ghost cells of `cells` (interior length `len - 2·GHOSTS`).
pub fn fill_ghosts(cells: &mut [LineCell], ends: LineEnds) {
    fill(cells, ends, false);
}

/// Fills the ghost slopes: periodic ends wrap, all others get zero slopes.
pub fn fill_slope_ghosts(slopes: &mut [LineCell], ends: LineEnds) {
    fill(slopes, ends, true);
}

fn fill(v: &mut [LineCell], ends: LineEnds, slopes: bool) {
    let len = v.len();
    let n = len - 2 * GHOSTS;
    for g in 0..GHOSTS {
        v[g] = match ends.left {
            Ghost::Periodic => v[n + g],
            Ghost::Copy if !slopes => v[GHOSTS],
            Ghost::State(s) if !slopes => s,
            _ => [0.0; 4],
        };
        v[GHOSTS + n + g] = match ends.right {
            Ghost::Periodic => v[GHOSTS + g],
            Ghost::Copy if !slopes => v[GHOSTS + n - 1],
            Ghost::State(s) if !slopes => s,
            _ => [0.0; 4],
        };
    }
}

/// [`line_prim`] without the entropy, for the characteristic limiter.
fn line_wave_state(model: &GasModel, c: &LineCell) -> Result<(PrimState1D, f64)> {
    let rho = c[0];
    if !(rho > 0.0) {
        return Err(Error::NonPositiveDensity(rho));
    }
    let v = c[2] / rho;
    let w = model.cons_to_prim_no_entropy(&ConsState1D::new(rho, c[1], c[3] - 0.5 * c[2] * v))?;
    Ok((w, v))
}

/// Thermodynamic state of a line cell and its transverse velocity.
pub fn line_prim(model: &GasModel, c: &LineCell) -> Result<(PrimState1D, f64)> {
    let rho = c[0];
    if !(rho > 0.0) {
        return Err(Error::NonPositiveDensity(rho));
    }
    let v = c[2] / rho;
    let w = model.cons_to_prim(&ConsState1D::new(rho, c[1], c[3] - 0.5 * c[2] * v))?;
    Ok((w, v))
}

pub fn line_cons(model: &GasModel, w: &PrimState1D, v: f64) -> LineCell {
    let c = model.prim_to_cons(w);
    [c.rho, c.mom, c.rho * v, c.ener + 0.5 * c.rho * v * v]
}

fn line_flux(model: &GasModel, w: &PrimState1D, v: f64) -> LineCell {
    let f = model.flux(w);
    [f.rho, f.mom, f.rho * v, f.ener + 0.5 * f.rho * v * v]
}

/// Characteristic amplitudes `(acoustic−, entropy, acoustic+, shear)` of a
/// conservative increment at state `(w, v)`.
pub fn to_characteristic(model: &GasModel, w: &PrimState1D, v: f64, d: &LineCell) -> LineCell {
    let [dr, du, dv, dp] = cons_to_prim_increment(model, w, v, d);
    let c2 = w.sound * w.sound;
    let z = w.impedance();
    [(dp - z * du) / (2.0 * c2), dr - dp / c2, (dp + z * du) / (2.0 * c2), dv]
}

/// Inverse of [`to_characteristic`].
pub fn from_characteristic(model: &GasModel, w: &PrimState1D, v: f64, a: &LineCell) -> LineCell {
    let c = w.sound;
    let dr = a[0] + a[1] + a[2];
    let du = c / w.rho * (a[2] - a[0]);
    let dp = c * c * (a[0] + a[2]);
    prim_to_cons_increment(model, w, v, &[dr, du, a[3], dp])
}

/// `(dρ, du, dv, dp)` from `(dρ, dm_n, dm_t, dE)`.
pub fn cons_to_prim_increment(model: &GasModel, w: &PrimState1D, v: f64, d: &LineCell) -> LineCell {
    let dv = (d[2] - v * d[0]) / w.rho;
    let de_normal = d[3] - v * d[2] + 0.5 * v * v * d[0];
    let [dr, du, dp] = model.cons_slope_to_prim(w, [d[0], d[1], de_normal]);
    [dr, du, dv, dp]
}

/// `(dρ, dm_n, dm_t, dE)` from `(dρ, du, dv, dp)`.
pub fn prim_to_cons_increment(model: &GasModel, w: &PrimState1D, v: f64, d: &LineCell) -> LineCell {
    let [dr, dm, de] = model.prim_slope_to_cons(w, [d[0], d[1], d[3]]);
    let dmt = v * dr + w.rho * d[2];
    [dr, dm, dmt, de + v * dmt - 0.5 * v * v * dr]
}

pub fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

/// Largest `|u| + c` over the interior of a line.
pub fn max_speed(model: &GasModel, interior: &[LineCell]) -> Result<f64> {
    let mut s: f64 = 0.0;
    for c in interior {
        let (w, _) = line_prim(model, c)?;
        s = s.max(w.u.abs() + w.sound);
    }
    Ok(s)
}

/// Limited slopes from cell averages alone: characteristic θ-minmod of the
/// one-sided and central differences. `cells` must have ghosts filled.
pub fn initial_slopes(model: &GasModel, cells: &[LineCell], dx: f64, theta: f64) -> Result<Vec<LineCell>> {
    let n = cells.len() - 2 * GHOSTS;
    (0..n)
        .map(|i| {
            let k = i + GHOSTS;
            let (w, v) = line_wave_state(model, &cells[k])?;
            let back = diff(&cells[k], &cells[k - 1]);
            let fwd = diff(&cells[k + 1], &cells[k]);
            let central = [0, 1, 2, 3].map(|q| 0.5 * (back[q] + fwd[q]));
            Ok(limit(model, &w, v, &back, &central, &fwd, dx, theta))
        })
        .collect()
}

fn diff(a: &LineCell, b: &LineCell) -> LineCell {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// `R minmod(θ/dx R⁻¹ back, R⁻¹ mid, θ/dx R⁻¹ fwd)`; `mid` is already a slope.
#[allow(clippy::too_many_arguments)]
fn limit(model: &GasModel, w: &PrimState1D, v: f64, back: &LineCell, mid: &LineCell, fwd: &LineCell, dx: f64, theta: f64) -> LineCell {
    let ab = to_characteristic(model, w, v, back);
    let am = to_characteristic(model, w, v, mid);
    let af = to_characteristic(model, w, v, fwd);
    let s = theta / dx;
    let lim = [0, 1, 2, 3].map(|q| minmod3(s * ab[q], am[q] / dx, s * af[q]));
    from_characteristic(model, w, v, &lim)
}

/// Time step inputs for one line update.
#[derive(Debug, Clone, Copy)]
pub struct LineStep {
    pub dt: f64,
    pub dx: f64,
    pub theta: f64,
    pub scheme: Scheme,
}

/// New interior averages and slopes of a line, plus the face fluxes.
#[derive(Debug, Clone)]
pub struct LineUpdate {
    pub cells: Vec<LineCell>,
    pub slopes: Vec<LineCell>,
}

struct Face {
    flux: LineCell,
    /// `2 U_mid - U_RP`, the face value extrapolated to the new time level.
    ahead: LineCell,
}

/// Advances one line by `step.dt`.
///
/// `cells` and `slopes` include ghosts filled for the old time level;
/// `ends_new` fills the ghosts of the new averages used by the slope
/// update. Faces are evaluated in parallel when `parallel` is set; the
/// result is identical either way.
pub fn advance_line(
    model: &GasModel,
    step: &LineStep,
    cells: &[LineCell],
    slopes: &[LineCell],
    ends_new: LineEnds,
    parallel: bool,
) -> Result<LineUpdate> {
    let n = cells.len() - 2 * GHOSTS;
    let mut faces: Vec<Face> = match step.scheme {
        Scheme::Grp => map_faces(n, parallel, |f| {
            let k = f + GHOSTS;
            grp_face(model, step, (&cells[k - 1], &slopes[k - 1]), (&cells[k], &slopes[k]))
        })?,
        Scheme::Godunov => map_faces(n, parallel, |f| {
            let k = f + GHOSTS;
            grp_face(model, step, (&cells[k - 1], &[0.0; 4]), (&cells[k], &[0.0; 4]))
        })?,
        Scheme::MusclHancock => {
            let predicted = muscl_predict(model, step, cells, parallel)?;
            map_faces(n, parallel, |f| muscl_face(model, &predicted[f], &predicted[f + 1]))?
        }
    };
    let r = step.dt / step.dx;
    let mut new_cells = vec![[0.0; 4]; n + 2 * GHOSTS];
    // Faces next to a cell whose update leaves the admissible set are
    // recomputed with the first-order flux and the update is repeated.
    let mut first_order = vec![step.scheme == Scheme::Godunov; n + 1];
    loop {
        let mut retry = false;
        let mut failure = None;
        for i in 0..n {
            let (fl, fr) = (&faces[i].flux, &faces[i + 1].flux);
            let u = &cells[i + GHOSTS];
            let next = [0, 1, 2, 3].map(|q| u[q] - r * (fr[q] - fl[q]));
            if let Err(e) = check_admissible(&next, i) {
                for f in [i, i + 1] {
                    if !first_order[f] {
                        first_order[f] = true;
                        let k = f + GHOSTS;
                        faces[f] = grp_face(model, step, (&cells[k - 1], &[0.0; 4]), (&cells[k], &[0.0; 4]))?;
                        retry = true;
                    }
                }
                failure.get_or_insert(e);
            }
            new_cells[i + GHOSTS] = next;
        }
        match failure {
            None => break,
            Some(_) if retry => continue,
            Some(e) => return Err(e),
        }
    }
    fill_ghosts(&mut new_cells, ends_new);
    let new_slopes = match step.scheme {
        Scheme::Grp => {
            let update = |i: usize| -> Result<LineCell> {
                let k = i + GHOSTS;
                let (w, v) = line_wave_state(model, &new_cells[k])?;
                let back = diff(&new_cells[k], &new_cells[k - 1]);
                let fwd = diff(&new_cells[k + 1], &new_cells[k]);
                let mid = diff(&faces[i + 1].ahead, &faces[i].ahead);
                Ok(limit(model, &w, v, &back, &mid, &fwd, step.dx, step.theta))
            };
            if parallel {
                (0..n).into_par_iter().map(update).collect::<Result<Vec<_>>>()?
            } else {
                (0..n).map(update).collect::<Result<Vec<_>>>()?
            }
        }
        _ => vec![[0.0; 4]; n],
    };
    new_cells.truncate(n + GHOSTS);
    new_cells.drain(..GHOSTS);
    Ok(LineUpdate { cells: new_cells, slopes: new_slopes })
}

fn map_faces<F: Fn(usize) -> Result<Face> + Sync + Send>(n: usize, parallel: bool, f: F) -> Result<Vec<Face>> {
    if parallel {
        (0..=n).into_par_iter().map(f).collect()
    } else {
        (0..=n).map(f).collect()
    }
}

fn check_admissible(c: &LineCell, cell: usize) -> Result<()> {
    let rho = c[0];
    let internal = c[3] - 0.5 * (c[1] * c[1] + c[2] * c[2]) / rho;
    if !(rho > 0.0) || !(internal > 0.0) || !internal.is_finite() {
        return Err(Error::InadmissibleUpdate {
            cell,
            reason: format!("rho = {rho:e}, internal energy = {internal:e}"),
        });
    }
    Ok(())
}

/// Interface value of a cell's linear profile with its primitive slope.
/// A profile that is inadmissible at the face is replaced by the flat
/// average there.
fn face_data(model: &GasModel, cell: &LineCell, slope: &LineCell, offset: f64) -> Result<(SlopedState, f64, f64)> {
    let c = [0, 1, 2, 3].map(|q| cell[q] + offset * slope[q]);
    let (w, v) = match line_prim(model, &c) {
        Ok(wv) if wv.0.p_tot > 0.0 => wv,
        _ => {
            let (w, v) = line_prim(model, cell)?;
            return Ok((SlopedState::flat(w), v, 0.0));
        }
    };
    let [dr, du, dv, dp] = cons_to_prim_increment(model, &w, v, slope);
    Ok((SlopedState::new(w, dr, du, dp), v, dv))
}

/// GRP flux through the face between two `(average, slope)` cells.
fn grp_face(model: &GasModel, step: &LineStep, l: (&LineCell, &LineCell), r: (&LineCell, &LineCell)) -> Result<Face> {
    let h = 0.5 * step.dx;
    let (left, vl, dvl) = face_data(model, l.0, l.1, h)?;
    let (right, vr, dvr) = face_data(model, r.0, r.1, -h)?;
    let res = match solve_grp(model, &left, &right) {
        Err(Error::VacuumGenerated) => return rusanov_face(model, l.0, r.0),
        other => other?,
    };
    let v_star = match res.upwind {
        crate::riemann::Side::Left => vl,
        crate::riemann::Side::Right => vr,
    };
    let dv_dt = shear_derivative(dvl, dvr, &res);
    let h = 0.5 * step.dt;
    let (mut rho, mut u, mut p) = (res.star.rho + h * res.dt_rho, res.star.u + h * res.dt_u, res.star.p_tot + h * res.dt_ptot);
    let mut v = v_star + h * dv_dt;
    let e = if res.dt_rho == 0.0 && res.dt_ptot == 0.0 {
        res.star.e
    } else {
        match model.energy_from_pressure_near(rho, p, res.star.e) {
            Ok(e) if rho > 0.0 && p > 0.0 => e,
            // a mid state outside the admissible set drops to first order
            _ => {
                (rho, u, p, v) = (res.star.rho, res.star.u, res.star.p_tot, v_star);
                res.star.e
            }
        }
    };
    // only conserved quantities and the flux are needed at the mid state
    let e2 = e * e;
    let ener = rho * (0.5 * (u * u + v * v) + e) + model.a_rad() * e2 * e2;
    let u_mid = [rho, rho * u, rho * v, ener];
    let flux = [rho * u, rho * u * u + p, rho * u * v, u * (ener + p)];
    let u_rp = line_cons(model, &res.star, v_star);
    Ok(Face { flux, ahead: [0, 1, 2, 3].map(|q| 2.0 * u_mid[q] - u_rp[q]) })
}

/// Local Lax-Friedrichs flux between two cell averages, used where the
/// Riemann problem opens a vacuum. Positive for CFL numbers up to ½.
fn rusanov_face(model: &GasModel, l: &LineCell, r: &LineCell) -> Result<Face> {
    let (wl, vl) = line_prim(model, l)?;
    let (wr, vr) = line_prim(model, r)?;
    let s = (wl.u.abs() + wl.sound).max(wr.u.abs() + wr.sound);
    let (fl, fr) = (line_flux(model, &wl, vl), line_flux(model, &wr, vr));
    Ok(Face { flux: [0, 1, 2, 3].map(|q| 0.5 * (fl[q] + fr[q]) - 0.5 * s * (r[q] - l[q])), ahead: [0, 1, 2, 3].map(|q| 0.5 * (l[q] + r[q])) })
}

/// Half-step evolved face values `(left face, right face)` of every cell
/// from interior index `-1` to `n`, in primitive form `(w, v)`.
type Predicted = ((PrimState1D, f64), (PrimState1D, f64));

fn muscl_predict(model: &GasModel, step: &LineStep, cells: &[LineCell], parallel: bool) -> Result<Vec<Predicted>> {
    let n = cells.len() - 2 * GHOSTS;
    let prims: Vec<(PrimState1D, f64)> = cells.iter().map(|c| line_prim(model, c)).collect::<Result<_>>()?;
    let vec4 = |p: &(PrimState1D, f64)| [p.0.rho, p.0.u, p.1, p.0.p_tot];
    let predict = |k: usize| -> Result<Predicted> {
        let (w, v) = prims[k];
        let (a, b, c) = (vec4(&prims[k - 1]), vec4(&prims[k]), vec4(&prims[k + 1]));
        let th = step.theta;
        let d = [0, 1, 2, 3].map(|q| {
            let (bk, fw) = (b[q] - a[q], c[q] - b[q]);
            minmod3(th * bk, 0.5 * (bk + fw), th * fw)
        });
        let [dr, du, dv, dp] = d;
        let half = 0.5 * step.dt / step.dx;
        // primitive quasi-linear form: W_t + A(W) W_x = 0
        let dt_term = [
            w.u * dr + w.rho * du,
            w.u * du + dp / w.rho,
            w.u * dv,
            w.rho * w.sound * w.sound * du + w.u * dp,
        ];
        let face = |sign: f64| -> Option<(PrimState1D, f64)> {
            let q = [0, 1, 2, 3].map(|i| b[i] + sign * 0.5 * d[i] - half * dt_term[i]);
            if !(q[0] > 0.0 && q[3] > 0.0) {
                return None;
            }
            model.prim_from_rho_u_ptot(q[0], q[1], q[3]).ok().map(|s| (s, q[2]))
        };
        match (face(-1.0), face(1.0)) {
            (Some(l), Some(r)) => Ok((l, r)),
            // an inadmissible extrapolation falls back to the cell average
            _ => Ok(((w, v), (w, v))),
        }
    };
    let range = GHOSTS - 1..GHOSTS + n + 1;
    if parallel {
        range.into_par_iter().map(predict).collect()
    } else {
        range.map(predict).collect()
    }
}

fn muscl_face(model: &GasModel, left: &Predicted, right: &Predicted) -> Result<Face> {
    let (wl, vl) = left.1;
    let (wr, vr) = right.0;
    let fan = match solve_star(model, &wl, &wr) {
        Err(Error::VacuumGenerated) => return rusanov_face(model, &line_cons(model, &wl, vl), &line_cons(model, &wr, vr)),
        other => other?,
    };
    let w = fan.sample(model, 0.0)?;
    let v = if fan.u_star >= 0.0 { vl } else { vr };
    Ok(Face { flux: line_flux(model, &w, v), ahead: [0.0; 4] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_round_trip() {
        let m = GasModel::new(5.0 / 3.0, 1.0).unwrap();
        let w = m.prim_from_rho_u_temp(1.3, -0.4, 0.9).unwrap();
        let d = [0.3, -0.2, 0.7, 1.1];
        let back = from_characteristic(&m, &w, 0.25, &to_characteristic(&m, &w, 0.25, &d));
        for q in 0..4 {
            assert!((back[q] - d[q]).abs() < 1e-13, "{back:?}");
        }
    }

    #[test]
    fn minmod_picks_smallest_agreeing() {
        assert_eq!(minmod3(1.0, 2.0, 0.5), 0.5);
        assert_eq!(minmod3(-1.0, -2.0, -0.5), -0.5);
        assert_eq!(minmod3(1.0, -2.0, 0.5), 0.0);
    }

    #[test]
    fn ghost_rules() {
        let mut v = vec![[0.0; 4]; 7];
        for (i, c) in v.iter_mut().enumerate().skip(GHOSTS).take(3) {
            *c = [i as f64; 4];
        }
        fill_ghosts(&mut v, LineEnds { left: Ghost::Periodic, right: Ghost::Copy });
        assert_eq!(v[0][0], 3.0);
        assert_eq!(v[1][0], 4.0);
        assert_eq!(v[5][0], 4.0);
        assert_eq!(v[6][0], 4.0);
        let mut s = v.clone();
        fill_slope_ghosts(&mut s, LineEnds { left: Ghost::Copy, right: Ghost::Periodic });
        assert_eq!(s[0], [0.0; 4]);
        assert_eq!(s[5][0], 2.0);
    }
}
