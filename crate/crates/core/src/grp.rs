//! Analytic resolution of the generalized Riemann problem with linear data.
//!
//! Left-side coefficients are computed by reflecting the left wave into a
//! right-facing frame (`x → -x`, `u → -u`) and mapping `(a, b, d)` back to
//! `(a, -b, -d)`, so both sides share one implementation.

use crate::error::{Error, Result};
use crate::quadrature::{gauss5, lobatto3};
use crate::riemann::{e_tot_partials, fan_state, solve_star, FanTarget, Region, Side, Wave, WaveFan};
use crate::thermo::{ConsState1D, EosDerivatives, GasModel, PrimState1D};

/// Relative sup-norm gap between the two states below which the problem is
/// treated as acoustic.
pub const ACOUSTIC_EPS: f64 = 1e-8;

/// Rarefactions spanning more than this in `ln ρ` integrate along the fan
/// with a composite rule; narrower ones use Simpson's rule in `c`.
const SIMPSON_SPAN: f64 = 0.02;
/// Panel width in `ln ρ` of the composite rule.
const FAN_PANEL: f64 = 0.15;

/// `K` without its entropy integral.
fn base_k(rho: f64, d: &EosDerivatives) -> f64 {
    -d.p_s() / (rho * d.c)
}

/// Integrand of the rarefaction row in `c`, with `amp = K c_s S'`.
fn fan_integrand(rho: f64, amp: f64, d: &EosDerivatives, z_s: f64) -> f64 {
    let r = rho * d.c / z_s;
    amp * r / (2.0 * d.c * r.sqrt()) * (1.0 + d.c / (rho * d.c_rho_isentropic()))
}

/// The row integral over the fan from `side` to the density `rho_e`, taken
/// in `ln ρ` on panels of five-point Gauss rules. `K` accumulates its
/// entropy integral on the same panels, which is returned alongside.
fn fan_integral(m: &GasModel, side: &PrimState1D, rho_e: f64, cd: f64) -> (f64, f64) {
    let (s, z_s) = (side.entropy, side.impedance());
    let eval = |rho: f64| m.derivatives(rho, m.e_of_rho_s(rho, s));
    let c_s_int = |a: f64, b: f64| gauss5(|t| eval(t.exp()).c_s(), a, b);
    let (t_s, t_e) = (side.rho.ln(), rho_e.ln());
    let panels = ((t_e - t_s).abs() / FAN_PANEL).ceil().max(1.0) as usize;
    let h = (t_e - t_s) / panels as f64;
    let (mut j, mut total) = (0.0, 0.0);
    for p in 0..panels {
        let t0 = t_s + p as f64 * h;
        let t1 = if p + 1 == panels { t_e } else { t0 + h };
        total += gauss5(
            |t| {
                let rho = t.exp();
                let d = eval(rho);
                let k = base_k(rho, &d) + j + c_s_int(t0, t);
                fan_integrand(rho, k * cd, &d, z_s) * d.c_rho_isentropic() * rho
            },
            t0,
            t1,
        );
        j += c_s_int(t0, t1);
    }
    (total, j)
}

/// Primitive state at an interface together with its spatial slopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopedState {
    pub state: PrimState1D,
    pub d_rho: f64,
    pub d_u: f64,
    pub d_ptot: f64,
}

impl SlopedState {
    pub fn new(state: PrimState1D, d_rho: f64, d_u: f64, d_ptot: f64) -> Self {
        Self { state, d_rho, d_u, d_ptot }
    }

    pub fn flat(state: PrimState1D) -> Self {
        Self::new(state, 0.0, 0.0, 0.0)
    }

    /// Entropy slope from the total differential of `S(ρ, p_tot)`.
    pub fn d_entropy(&self, model: &GasModel) -> f64 {
        let w = &self.state;
        let d = model.derivatives(w.rho, w.e);
        (d.s_rho - d.s_e * d.p_rho / d.p_e) * self.d_rho + d.s_e / d.p_e * self.d_ptot
    }

    /// Slope of the invariant carried across left-facing waves,
    /// `u' + p'/(ρc) + K S'`.
    pub fn d_psi1(&self, model: &GasModel) -> Result<f64> {
        let w = &self.state;
        let k = model.k_coefficient(w.rho, w.entropy)?;
        Ok(self.d_u + self.d_ptot / w.impedance() + k * self.d_entropy(model))
    }

    /// Slope of the invariant carried across right-facing waves,
    /// `u' - p'/(ρc) - K S'`.
    pub fn d_psi3(&self, model: &GasModel) -> Result<f64> {
        let w = &self.state;
        let k = model.k_coefficient(w.rho, w.entropy)?;
        Ok(self.d_u - self.d_ptot / w.impedance() - k * self.d_entropy(model))
    }

    /// Image under `x → -x`.
    pub fn mirrored(&self) -> Self {
        Self { state: self.state.with_velocity(-self.state.u), d_rho: -self.d_rho, d_u: self.d_u, d_ptot: -self.d_ptot }
    }

    /// `-A(W) W'`: the time derivative of smooth data.
    pub fn smooth_time_derivative(&self) -> [f64; 3] {
        let w = &self.state;
        [
            -(w.u * self.d_rho + w.rho * self.d_u),
            -(w.u * self.d_u + self.d_ptot / w.rho),
            -(w.rho * w.sound * w.sound * self.d_u + w.u * self.d_ptot),
        ]
    }
}

/// One row `a Du/Dt + b Dp/Dt = d` of the linear system at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSideCoefficients {
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl WaveSideCoefficients {
    fn reflected(self) -> Self {
        Self { a: self.a, b: -self.b, d: -self.d }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrpCase {
    /// The t-axis lies between two nonlinear waves.
    TwoNonlinearWaves,
    /// The t-axis lies strictly inside a rarefaction fan.
    SonicInRarefaction,
    /// Equal states with different slopes: only linear waves.
    Acoustic,
    /// Every wave moves to one side of the t-axis.
    OutsideFan,
}

/// Interface state and its limiting time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrpResult {
    /// Riemann solution on the t-axis.
    pub star: PrimState1D,
    pub dt_rho: f64,
    pub dt_u: f64,
    pub dt_ptot: f64,
    pub case: GrpCase,
    /// Side whose initial data are transported onto the t-axis.
    pub upwind: Side,
    /// `ρ_*/ρ_upwind`, the compression of material crossing the t-axis.
    pub density_ratio: f64,
    /// Coefficient rows, when the 2x2 system was assembled.
    pub rows: Option<[WaveSideCoefficients; 2]>,
}

impl GrpResult {
    /// Primitive interface state at `t + dt/2`.
    pub fn mid_prim(&self, model: &GasModel, dt: f64) -> Result<PrimState1D> {
        let h = 0.5 * dt;
        let rho = self.star.rho + h * self.dt_rho;
        let u = self.star.u + h * self.dt_u;
        let p = self.star.p_tot + h * self.dt_ptot;
        if self.dt_rho == 0.0 && self.dt_u == 0.0 && self.dt_ptot == 0.0 {
            return Ok(self.star);
        }
        model.prim_from_rho_u_ptot(rho, u, p)
    }

    pub fn mid_state(&self, model: &GasModel, dt: f64) -> Result<ConsState1D> {
        Ok(model.prim_to_cons(&self.mid_prim(model, dt)?))
    }
}

/// Time derivative of a passively transported transverse velocity on the
/// t-axis.
pub fn shear_derivative(d_v_left: f64, d_v_right: f64, result: &GrpResult) -> f64 {
    let slope = match result.upwind {
        Side::Left => d_v_left,
        Side::Right => d_v_right,
    };
    -result.star.u * result.density_ratio * slope
}

/// A wave and its data seen in a frame where it faces right.
struct Facing<'a> {
    model: &'a GasModel,
    /// Undisturbed state adjacent to the wave.
    side: SlopedState,
    /// Star state behind the wave.
    star: PrimState1D,
    wave: Wave,
}

impl<'a> Facing<'a> {
    fn new(model: &'a GasModel, fan: &WaveFan, data: &SlopedState, which: Side) -> Self {
        match which {
            Side::Right => Facing { model, side: *data, star: fan.right_star, wave: fan.right_wave },
            Side::Left => Facing {
                model,
                side: data.mirrored(),
                star: fan.left_star.with_velocity(-fan.left_star.u),
                wave: match fan.left_wave {
                    Wave::Shock { speed } => Wave::Shock { speed: -speed },
                    Wave::Degenerate { speed } => Wave::Degenerate { speed: -speed },
                    Wave::Rarefaction { head, tail } => Wave::Rarefaction { head: -head, tail: -tail },
                },
            },
        }
    }

    fn coefficients(&self) -> Result<WaveSideCoefficients> {
        match self.wave {
            Wave::Shock { speed } => Ok(self.shock(speed).coefficients),
            _ => {
                Ok(WaveSideCoefficients { a: 1.0, b: -1.0 / self.star.impedance(), d: self.rarefaction_d(&self.star)? })
            }
        }
    }

    /// `d` of a right-facing rarefaction evaluated at the fan state `end`.
    ///
    /// The entropy coefficient is measured from the undisturbed density;
    /// any entropy-only shift of it cancels exactly in `d`.
    fn rarefaction_d(&self, end: &PrimState1D) -> Result<f64> {
        let m = self.model;
        let w = &self.side.state;
        let (rho_s, c_s, s) = (w.rho, w.sound, w.entropy);
        let z_s = w.impedance();
        let d_s = self.side.d_entropy(m);
        let der_s = m.derivatives(rho_s, w.e);
        let k_s = -der_s.p_s() / z_s;
        let d_psi = self.side.d_u - self.side.d_ptot / z_s - k_s * d_s;
        let (rho_e, c_e) = (end.rho, end.sound);
        let r_e = rho_e * c_e / z_s;
        if d_s == 0.0 {
            return Ok(0.5 * r_e.sqrt() * 2.0 * c_s * d_psi);
        }
        let a_s = k_s * c_s * d_s;
        if c_e == c_s {
            return Ok(0.5 * a_s + 0.5 * (a_s + 2.0 * c_s * d_psi));
        }
        if (rho_e / rho_s).ln().abs() > SIMPSON_SPAN {
            let (integral, j_e) = fan_integral(m, w, rho_e, c_s * d_s);
            let k_e = base_k(rho_e, &m.derivatives(rho_e, end.e)) + j_e;
            let a_e = k_e * c_s * d_s * r_e;
            return Ok(0.5 * a_e + 0.5 * r_e.sqrt() * (a_s + 2.0 * c_s * d_psi - integral));
        }
        let der_e = m.derivatives(rho_e, end.e);
        // Simpson's rule in c with the interior fan state at the mid sound speed
        let c_m = 0.5 * (c_s + c_e);
        let weak = (rho_e / rho_s - 1.0).abs() < 1e-4;
        let (rho_m, e_m) = if weak {
            // c is linear in ρ to the accuracy Simpson's rule needs
            let rho = 0.5 * (rho_s + rho_e);
            (rho, m.e_of_rho_s(rho, s))
        } else {
            let f = fan_state(m, w, rho_e, FanTarget::SoundSpeed(c_m), Side::Right)?;
            (f.rho, f.e)
        };
        let der_m = m.derivatives(rho_m, e_m);
        let base = base_k;
        let (k_m, k_e) = if weak {
            // trapezoid rule in ln ρ over spans below 1e-4
            let dcs = |d: &EosDerivatives| d.c_s();
            let (h1, h2) = ((rho_m / rho_s).ln(), (rho_e / rho_m).ln());
            let k_m = base(rho_m, &der_m) + 0.5 * h1 * (dcs(&der_s) + dcs(&der_m));
            (k_m, k_m - base(rho_m, &der_m) + base(rho_e, &der_e) + 0.5 * h2 * (dcs(&der_m) + dcs(&der_e)))
        } else {
            let k_m = m.k_coefficient_from(rho_m, s, rho_s)?;
            let k_e = k_m + m.entropy_integral(rho_m, rho_e, s, crate::thermo::K_TOL)? - base(rho_m, &der_m) + base(rho_e, &der_e);
            (k_m, k_e)
        };
        let cd = c_s * d_s;
        let f_s = fan_integrand(rho_s, k_s * cd, &der_s, z_s);
        let f_m = fan_integrand(rho_m, k_m * cd, &der_m, z_s);
        let f_e = fan_integrand(rho_e, k_e * cd, &der_e, z_s);
        let integral = lobatto3(c_s, c_e, f_s, f_m, f_e);
        let a_e = k_e * c_s * d_s * r_e;
        Ok(0.5 * a_e + 0.5 * r_e.sqrt() * (a_s + 2.0 * c_s * d_psi - integral))
    }

    fn shock(&self, sigma: f64) -> ShockGeometry {
        let m = self.model;
        let ahead = &self.side.state;
        let star = &self.star;
        let (rho_a, p_a) = (ahead.rho, ahead.p_tot);
        let (rho_b, p_b) = (star.rho, star.p_tot);
        let jump_v = 1.0 / rho_a - 1.0 / rho_b;
        let phi = ((p_b - p_a) * jump_v).sqrt();
        let phi_p = jump_v / (2.0 * phi);
        let phi_pbar = -phi_p;
        let phi_rhobar = (p_a - p_b) / (2.0 * phi * rho_a * rho_a);
        let phi_rho = (p_b - p_a) / (2.0 * phi * rho_b * rho_b);
        let (etot_rho_b, etot_p_b) = e_tot_partials(m, rho_b, star.e);
        let (etot_rho_a, etot_p_a) = e_tot_partials(m, rho_a, ahead.e);
        let mean = 0.5 * (p_b + p_a);
        let g_rho = etot_rho_b - mean / (rho_b * rho_b);
        let dv = (rho_b - rho_a) / (2.0 * rho_b * rho_a);
        let h1 = -(etot_p_b - dv) / g_rho;
        let h2 = (etot_p_a + dv) / g_rho;
        let h3 = (etot_rho_a - mean / (rho_a * rho_a)) / g_rho;
        let phi1 = phi_p + phi_rho * h1;
        let phi2 = phi_pbar + phi_rho * h2;
        let phi3 = phi_rhobar + phi_rho * h3;
        let rel_star = sigma - star.u;
        let rel_ahead = sigma - ahead.u;
        let a = 1.0 + rho_b * rel_star * phi1;
        let b = -rel_star / (star.impedance() * star.sound) - phi1;
        let l_p = -1.0 / rho_a + rel_ahead * phi2;
        let l_u = rel_ahead - rho_a * ahead.sound * ahead.sound * phi2 - rho_a * phi3;
        let l_rho = rel_ahead * phi3;
        let sd = &self.side;
        let d = l_p * sd.d_ptot + l_u * sd.d_u + l_rho * sd.d_rho;
        ShockGeometry { coefficients: WaveSideCoefficients { a, b, d }, sigma, h1, h2, h3 }
    }

    /// `∂ρ/∂t` just behind this wave on the t-axis, given the material
    /// derivatives there (in this frame).
    fn density_rate(&self, du: f64, dp: f64, dt_p: f64, star: &PrimState1D) -> f64 {
        match self.wave {
            Wave::Shock { speed } => {
                let g = self.shock(speed);
                let a = &self.side.state;
                let sd = &self.side;
                let u = star.u;
                let c2 = star.sound * star.sound;
                let rel_a = g.sigma - a.u;
                let f = rel_a * g.h2 * sd.d_ptot + rel_a * g.h3 * sd.d_rho
                    - a.rho * (g.h2 * a.sound * a.sound + g.h3) * sd.d_u;
                let g_u = star.rho * u * (g.sigma - u) * g.h1;
                let g_p = g.sigma / c2 - u * g.h1;
                let g_rho = u - g.sigma;
                (f * u - g_u * du - g_p * dp) / g_rho
            }
            _ => self.isentropic_density_rate(dt_p, star),
        }
    }

    /// Entropy is transported unchanged through a rarefaction, compressed by
    /// `ρ_*/ρ_side`.
    fn isentropic_density_rate(&self, dt_p: f64, star: &PrimState1D) -> f64 {
        let m = self.model;
        let s_x = self.side.d_entropy(m) * star.rho / self.side.state.rho;
        let p_s = m.derivatives(star.rho, star.e).p_s();
        (dt_p + p_s * star.u * s_x) / (star.sound * star.sound)
    }
}

struct ShockGeometry {
    coefficients: WaveSideCoefficients,
    sigma: f64,
    h1: f64,
    h2: f64,
    h3: f64,
}

/// Coefficient row of the left wave of `fan`.
pub fn left_coefficients(model: &GasModel, left: &SlopedState, fan: &WaveFan) -> Result<WaveSideCoefficients> {
    Ok(Facing::new(model, fan, left, Side::Left).coefficients()?.reflected())
}

/// Coefficient row of the right wave of `fan`.
pub fn right_coefficients(model: &GasModel, right: &SlopedState, fan: &WaveFan) -> Result<WaveSideCoefficients> {
    Facing::new(model, fan, right, Side::Right).coefficients()
}

fn is_acoustic(l: &PrimState1D, r: &PrimState1D) -> bool {
    let gap = (l.rho - r.rho).abs().max((l.u - r.u).abs()).max((l.p_tot - r.p_tot).abs());
    let size = l.rho.abs().max(l.u.abs()).max(l.p_tot.abs());
    gap <= ACOUSTIC_EPS * (1.0 + size)
}

/// Resolves the GRP at an interface.
pub fn solve_grp(model: &GasModel, left: &SlopedState, right: &SlopedState) -> Result<GrpResult> {
    let fan = solve_star(model, &left.state, &right.state)?;
    solve_grp_with_fan(model, left, right, &fan)
}

/// [`solve_grp`] for a fan that is already known.
pub fn solve_grp_with_fan(model: &GasModel, left: &SlopedState, right: &SlopedState, fan: &WaveFan) -> Result<GrpResult> {
    let region = fan.locate(0.0);
    let upwind = if matches!(region, Region::LeftState | Region::LeftFan | Region::LeftStar) { Side::Left } else { Side::Right };
    let data = |s: Side| if s == Side::Left { left } else { right };

    let outside = |s: Side| -> GrpResult {
        let d = data(s);
        let [r, u, p] = d.smooth_time_derivative();
        GrpResult {
            star: d.state,
            dt_rho: r,
            dt_u: u,
            dt_ptot: p,
            case: GrpCase::OutsideFan,
            upwind: s,
            density_ratio: 1.0,
            rows: None,
        }
    };
    match region {
        Region::LeftState => return Ok(outside(Side::Left)),
        Region::RightState => return Ok(outside(Side::Right)),
        _ => {}
    }

    if is_acoustic(&left.state, &right.state) {
        return Ok(acoustic(model, left, right, fan, region, upwind));
    }

    if matches!(region, Region::LeftFan | Region::RightFan) {
        let sonic = fan_state(model, fan.initial(upwind), fan.star(upwind).rho, FanTarget::Ray(0.0), upwind)?;
        let facing = Facing::new(model, fan, data(upwind), upwind);
        let d_frame = facing.rarefaction_d(&sonic)?;
        let d0 = if upwind == Side::Left { -d_frame } else { d_frame };
        let dt_u = d0;
        let dt_p = sonic.rho * sonic.u * d0;
        // the density rate uses the lab-frame velocity; entropy transport is frame independent
        let s_x = data(upwind).d_entropy(model) * sonic.rho / fan.initial(upwind).rho;
        let p_s = model.derivatives(sonic.rho, sonic.e).p_s();
        let dt_rho = (dt_p + p_s * sonic.u * s_x) / (sonic.sound * sonic.sound);
        return Ok(GrpResult {
            star: sonic,
            dt_rho,
            dt_u,
            dt_ptot: dt_p,
            case: GrpCase::SonicInRarefaction,
            upwind,
            density_ratio: sonic.rho / fan.initial(upwind).rho,
            rows: None,
        });
    }

    let row_l = left_coefficients(model, left, fan)?;
    let row_r = right_coefficients(model, right, fan)?;
    let det = row_l.a * row_r.b - row_r.a * row_l.b;
    let scale = (row_l.a * row_r.b).abs().max((row_r.a * row_l.b).abs());
    if !(det.abs() > 1e-14 * scale) {
        return Err(Error::SingularSystem(det));
    }
    let du = (row_l.d * row_r.b - row_r.d * row_l.b) / det;
    let dp = (row_l.a * row_r.d - row_r.a * row_l.d) / det;
    let star = *fan.star(upwind);
    let dt_u = du + star.u / (star.rho * star.sound * star.sound) * dp;
    let dt_p = dp + star.rho * star.u * du;
    let facing = Facing::new(model, fan, data(upwind), upwind);
    let dt_rho = match upwind {
        Side::Right => facing.density_rate(du, dp, dt_p, &star),
        Side::Left => facing.density_rate(-du, dp, dt_p, &star.with_velocity(-star.u)),
    };
    Ok(GrpResult {
        star,
        dt_rho,
        dt_u,
        dt_ptot: dt_p,
        case: GrpCase::TwoNonlinearWaves,
        upwind,
        density_ratio: star.rho / fan.initial(upwind).rho,
        rows: Some([row_l, row_r]),
    })
}

fn acoustic(model: &GasModel, left: &SlopedState, right: &SlopedState, fan: &WaveFan, region: Region, upwind: Side) -> GrpResult {
    let star = match region {
        Region::LeftFan | Region::RightFan => *fan.initial(upwind),
        _ => *fan.star(upwind),
    };
    let (u, c, z) = (star.u, star.sound, star.impedance());
    let (dt_u, dt_p, case) = if u - c < 0.0 && u + c > 0.0 {
        let from_left = (u + c) * (left.d_u + left.d_ptot / z);
        let from_right = (u - c) * (right.d_u - right.d_ptot / z);
        (-0.5 * (from_left + from_right), -0.5 * z * (from_left - from_right), GrpCase::Acoustic)
    } else {
        let [_, du, dp] = if u - c >= 0.0 { left.smooth_time_derivative() } else { right.smooth_time_derivative() };
        (du, dp, GrpCase::OutsideFan)
    };
    let s_x = if upwind == Side::Left { left.d_entropy(model) } else { right.d_entropy(model) };
    let p_s = model.derivatives(star.rho, star.e).p_s();
    let dt_rho = (dt_p + u * p_s * s_x) / (c * c);
    GrpResult { star, dt_rho, dt_u, dt_ptot: dt_p, case, upwind, density_ratio: 1.0, rows: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> GasModel {
        GasModel::new(5.0 / 3.0, 1.0).unwrap()
    }

    #[test]
    fn uniform_flat_data_has_no_time_derivative() {
        let m = model();
        let w = m.prim_from_rho_u_temp(1.0, 0.3, 1.0).unwrap();
        let r = solve_grp(&m, &SlopedState::flat(w), &SlopedState::flat(w)).unwrap();
        assert_eq!((r.dt_rho, r.dt_u, r.dt_ptot), (0.0, 0.0, 0.0));
        assert_eq!(r.mid_state(&m, 0.1).unwrap(), m.prim_to_cons(&w));
    }

    #[test]
    fn zero_slopes_give_zero_rows() {
        let m = model();
        let l = m.prim_from_rho_u_temp(1.0, 50.0, 0.5).unwrap();
        let r = m.prim_from_rho_u_temp(2.0, -40.0, 1.0).unwrap();
        let res = solve_grp(&m, &SlopedState::flat(l), &SlopedState::flat(r)).unwrap();
        assert_eq!((res.dt_rho, res.dt_u, res.dt_ptot), (0.0, 0.0, 0.0));
        let [rl, rr] = res.rows.unwrap();
        assert_eq!((rl.d, rr.d), (0.0, 0.0));
        assert!(rr.a > 0.0 && rr.b < 0.0);
    }

    #[test]
    fn equal_slopes_reproduce_smooth_evolution() {
        let m = model();
        let w = m.prim_from_rho_u_temp(1.2, 0.4, 0.8).unwrap();
        let s = SlopedState::new(w, 0.3, -0.2, 0.5);
        let r = solve_grp(&m, &s, &s).unwrap();
        assert_eq!(r.case, GrpCase::Acoustic);
        let expect = s.smooth_time_derivative();
        for (got, want) in [r.dt_rho, r.dt_u, r.dt_ptot].iter().zip(expect) {
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn shear_transport() {
        let m = model();
        let w = m.prim_from_rho_u_temp(1.0, 0.5, 1.0).unwrap();
        let r = solve_grp(&m, &SlopedState::flat(w), &SlopedState::flat(w)).unwrap();
        assert_eq!(shear_derivative(0.0, 0.0, &r), 0.0);
        assert!((shear_derivative(2.0, 7.0, &r) + 0.5 * 2.0).abs() < 1e-15);
    }

    // Independent ideal-gas formulas for the coefficient rows.
    mod ideal {
        pub struct Gas {
            pub gamma: f64,
        }
        pub struct W {
            pub rho: f64,
            pub u: f64,
            pub p: f64,
            pub dr: f64,
            pub du: f64,
            pub dp: f64,
        }
        impl Gas {
            pub fn c(&self, rho: f64, p: f64) -> f64 {
                (self.gamma * p / rho).sqrt()
            }
            /// Right rarefaction row ending at `(rho_e, c_e)`.
            pub fn rarefaction_d(&self, w: &W, rho_e: f64, c_e: f64) -> f64 {
                let g = self.gamma;
                let c_s = self.c(w.rho, w.p);
                let ds = w.dp / w.p - g * w.dr / w.rho;
                let k = |c: f64| c / (g * (g - 1.0));
                let r_e = rho_e * c_e / (w.rho * c_s);
                let a_s = k(c_s) * c_s * ds;
                let a_e = k(c_e) * c_s * ds * r_e;
                let psi = w.du - w.dp / (w.rho * c_s) - k(c_s) * ds;
                let pw = (g + 1.0) / (2.0 * (g - 1.0));
                let coef = c_s * ds * (g + 1.0) / (2.0 * g * (g - 1.0) * (g - 1.0));
                let integral = coef * c_s / (pw + 1.0) * ((c_e / c_s).powf(pw + 1.0) - 1.0);
                0.5 * a_e + 0.5 * r_e.sqrt() * (a_s + 2.0 * c_s * psi - integral)
            }
            /// Right shock row for star pressure `p` and star velocity `u_star`.
            pub fn shock_row(&self, w: &W, p: f64, u_star: f64) -> (f64, f64, f64) {
                let g = self.gamma;
                let mu2 = (g - 1.0) / (g + 1.0);
                let q = 2.0 / ((g + 1.0) * w.rho * (p + mu2 * w.p));
                let phi = (p - w.p) * q.sqrt();
                let phi1 = q.sqrt() - (p - w.p) * q.sqrt() / (2.0 * (p + mu2 * w.p));
                let phi2 = -q.sqrt() - (p - w.p) * q.sqrt() * mu2 / (2.0 * (p + mu2 * w.p));
                let phi3 = -phi / (2.0 * w.rho);
                let ratio = (p / w.p + mu2) / (mu2 * p / w.p + 1.0);
                let rho_b = w.rho * ratio;
                let sigma = (rho_b * u_star - w.rho * w.u) / (rho_b - w.rho);
                let c_b = self.c(rho_b, p);
                let c_a = self.c(w.rho, w.p);
                let a = 1.0 + rho_b * (sigma - u_star) * phi1;
                let b = -(sigma - u_star) / (rho_b * c_b * c_b) - phi1;
                let l_p = -1.0 / w.rho + (sigma - w.u) * phi2;
                let l_u = sigma - w.u - w.rho * c_a * c_a * phi2 - w.rho * phi3;
                let l_rho = (sigma - w.u) * phi3;
                (a, b, l_p * w.dp + l_u * w.du + l_rho * w.dr)
            }
        }
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn pure_gas_rarefaction_row_matches_closed_form() {
        for gamma in [1.4, 5.0 / 3.0] {
            let m = GasModel::new(gamma, 0.0).unwrap();
            let gas = ideal::Gas { gamma };
            let l = m.prim_from_rho_u_ptot(1.0, 0.0, 1.0).unwrap();
            let r = m.prim_from_rho_u_ptot(0.6, 1.5, 0.4).unwrap();
            let left = SlopedState::new(l, 0.2, 0.1, -0.3);
            let right = SlopedState::new(r, -0.7, 0.4, 0.9);
            let fan = solve_star(&m, &l, &r).unwrap();
            assert!(fan.right_wave.is_rarefaction() && fan.left_wave.is_rarefaction());
            let row = right_coefficients(&m, &right, &fan).unwrap();
            let w = ideal::W { rho: r.rho, u: r.u, p: r.p_tot, dr: -0.7, du: 0.4, dp: 0.9 };
            let want = gas.rarefaction_d(&w, fan.right_star.rho, fan.right_star.sound);
            assert!(close(row.d, want, 1e-8), "gamma={gamma}: {} vs {want}", row.d);
            // the left row is the mirror image of a right row
            let row = left_coefficients(&m, &left, &fan).unwrap();
            let w = ideal::W { rho: l.rho, u: -l.u, p: l.p_tot, dr: -0.2, du: 0.1, dp: 0.3 };
            let want = -gas.rarefaction_d(&w, fan.left_star.rho, fan.left_star.sound);
            assert!(close(row.d, want, 1e-8), "gamma={gamma}: {} vs {want}", row.d);
            assert!(close(row.b, 1.0 / fan.left_star.impedance(), 1e-14));
        }
    }

    #[test]
    fn pure_gas_shock_row_matches_closed_form() {
        let gamma = 1.4;
        let m = GasModel::new(gamma, 0.0).unwrap();
        let gas = ideal::Gas { gamma };
        let l = m.prim_from_rho_u_ptot(1.0, 3.0, 1.0).unwrap();
        let r = m.prim_from_rho_u_ptot(2.0, -2.0, 1.5).unwrap();
        let fan = solve_star(&m, &l, &r).unwrap();
        assert!(fan.left_wave.is_shock() && fan.right_wave.is_shock());
        let right = SlopedState::new(r, 0.3, -0.8, 1.1);
        let left = SlopedState::new(l, -0.5, 0.6, 0.2);
        let got = right_coefficients(&m, &right, &fan).unwrap();
        let w = ideal::W { rho: r.rho, u: r.u, p: r.p_tot, dr: 0.3, du: -0.8, dp: 1.1 };
        let (a, b, d) = gas.shock_row(&w, fan.p_star, fan.u_star);
        assert!(close(got.a, a, 1e-8) && close(got.b, b, 1e-8) && close(got.d, d, 1e-8), "{got:?} vs {a} {b} {d}");
        let got = left_coefficients(&m, &left, &fan).unwrap();
        let w = ideal::W { rho: l.rho, u: -l.u, p: l.p_tot, dr: 0.5, du: 0.6, dp: -0.2 };
        let (a, b, d) = gas.shock_row(&w, fan.p_star, -fan.u_star);
        assert!(close(got.a, a, 1e-8) && close(got.b, -b, 1e-8) && close(got.d, -d, 1e-8), "{got:?} vs {a} {b} {d}");
    }

    #[test]
    fn reflection_flips_velocity_derivative() {
        let m = model();
        let l = m.prim_from_rho_u_temp(1.0, 0.8, 1.2).unwrap();
        let r = m.prim_from_rho_u_temp(0.5, -0.3, 0.7).unwrap();
        let left = SlopedState::new(l, 0.3, -0.4, 0.2);
        let right = SlopedState::new(r, -0.1, 0.5, 0.6);
        let a = solve_grp(&m, &left, &right).unwrap();
        let b = solve_grp(&m, &right.mirrored(), &left.mirrored()).unwrap();
        assert!(close(a.dt_rho, b.dt_rho, 1e-9));
        assert!(close(a.dt_u, -b.dt_u, 1e-9));
        assert!(close(a.dt_ptot, b.dt_ptot, 1e-9));
        assert!(close(a.star.u, -b.star.u, 1e-12));
    }

    #[test]
    fn sonic_point_lies_on_the_axis() {
        let m = model();
        let l = m.prim_from_rho_u_temp(1.0, 0.0, 1.0).unwrap();
        let r = m.prim_from_rho_u_temp(0.05, 0.0, 0.05).unwrap();
        let res = solve_grp(&m, &SlopedState::new(l, 0.1, 0.0, 0.1), &SlopedState::flat(r)).unwrap();
        assert_eq!(res.case, GrpCase::SonicInRarefaction);
        assert!((res.star.u - res.star.sound).abs() < 1e-10 * res.star.sound);
    }
}

