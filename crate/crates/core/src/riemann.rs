//! Exact solution of the Riemann problem for the radiative Euler system.

use crate::error::{Error, Result};
use crate::quadrature;
use crate::roots::safeguarded_newton;
use crate::thermo::{GasModel, PrimState1D, ISENTROPE_TOL};

/// Relative pressure band inside which a wave is treated as absent.
pub const DEGENERATE_BAND: f64 = 1e-12;

/// Relative Newton step after which the iterate is final: the remaining
/// error is of the order of its square.
const NEWTON_FINAL_STEP: f64 = 1e-9;

/// Relative pressure jump below which a shock is resolved by its acoustic
/// limit, whose error is then below rounding.
const ACOUSTIC_JUMP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// `-1` for the left (u - c) family, `+1` for the right (u + c) family.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// One nonlinear wave of the fan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    /// Centred rarefaction. `head` borders the undisturbed state, `tail` the
    /// star region.
    Rarefaction { head: f64, tail: f64 },
    Shock { speed: f64 },
    /// Zero-strength wave travelling on the undisturbed characteristic.
    Degenerate { speed: f64 },
}

impl Wave {
    pub fn is_shock(&self) -> bool {
        matches!(self, Wave::Shock { .. })
    }

    pub fn is_rarefaction(&self) -> bool {
        matches!(self, Wave::Rarefaction { .. })
    }
}

/// A point on a wave curve through one of the initial states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    /// Velocity reachable behind the wave at the requested pressure.
    pub u: f64,
    /// Density behind the wave.
    pub rho: f64,
    /// Derivative of `u` with respect to the star pressure.
    pub du_dp: f64,
    /// Derivative of `rho` with respect to the star pressure.
    pub drho_dp: f64,
    /// Internal energy behind the wave.
    pub e: f64,
}

/// Where a similarity coordinate falls inside a fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    LeftState,
    LeftFan,
    LeftStar,
    RightStar,
    RightFan,
    RightState,
}

/// Complete self-similar solution of a Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveFan {
    pub left_state: PrimState1D,
    pub right_state: PrimState1D,
    pub left_wave: Wave,
    pub right_wave: Wave,
    pub p_star: f64,
    pub u_star: f64,
    pub rho_1star: f64,
    pub rho_2star: f64,
    /// Full star state left of the contact.
    pub left_star: PrimState1D,
    /// Full star state right of the contact.
    pub right_star: PrimState1D,
}

/// Density behind a shock of pressure `p` running into `ahead`, from the
/// energy jump `e_tot(ρ,p) - ē = ½(p + p̄)(1/ρ̄ - 1/ρ)`.
pub fn hugoniot_density(model: &GasModel, ahead: &PrimState1D, p: f64) -> Result<f64> {
    Ok(hugoniot_state(model, ahead, p)?.0)
}

/// `(ρ, e)` behind a shock of pressure `p` running into `ahead`.
pub fn hugoniot_state(model: &GasModel, ahead: &PrimState1D, p: f64) -> Result<(f64, f64)> {
    let last_e = std::cell::Cell::new(ahead.e);
    let rho = hugoniot_root(model, ahead, p, &last_e)?;
    Ok((rho, model.energy_from_pressure_near(rho, p, last_e.get())?))
}

fn hugoniot_root(model: &GasModel, ahead: &PrimState1D, p: f64, last_e: &std::cell::Cell<f64>) -> Result<f64> {
    let rho_a = ahead.rho;
    let p_a = ahead.p_tot;
    let e_tot_a = ahead.e_tot();
    let mean = 0.5 * (p + p_a);
    let residual = |rho: f64| -> Result<(f64, f64)> {
        let e = model.energy_from_pressure_near(rho, p, last_e.get())?;
        last_e.set(e);
        let (e_tot, e_tot_rho) = e_tot_and_rho_derivative(model, rho, e);
        let g = e_tot - e_tot_a - mean * (1.0 / rho_a - 1.0 / rho);
        Ok((g, e_tot_rho - mean / (rho * rho)))
    };
    if p - p_a <= ACOUSTIC_JUMP * p_a {
        // the acoustic limit dρ = dp/c² is exact to second order in the jump
        return Ok(rho_a + (p - p_a) / (ahead.sound * ahead.sound));
    }
    // strong-shock guess from a local polytropic fit, second-order exact for
    // weak shocks
    let big_gamma = ahead.rho * ahead.sound * ahead.sound / p_a;
    let mu = (big_gamma - 1.0) / (big_gamma + 1.0);
    let ratio = p / p_a;
    let guess = rho_a * (ratio + mu) / (mu * ratio + 1.0);
    let ftol = 1e-15 * (e_tot_a + mean / rho_a);
    let mut rho = guess;
    for _ in 0..20 {
        let Ok((r, dr)) = residual(rho) else { break };
        if r.abs() <= ftol {
            return Ok(rho);
        }
        let next = rho - r / dr;
        if !(next > rho_a && next.is_finite()) {
            break;
        }
        if (next - rho).abs() <= NEWTON_FINAL_STEP * next {
            return Ok(next);
        }
        rho = next;
    }
    let g = model.gamma();
    let cap = (1024.0f64).max(4.0 * (g + 1.0) / (g - 1.0));
    let mut hi = 2.0 * rho_a;
    while residual(hi)?.0 > 0.0 {
        hi *= 2.0;
        if hi > cap * rho_a {
            return Err(Error::BracketingFailure("Hugoniot density"));
        }
    }
    safeguarded_newton(residual, rho_a, hi, guess, ftol, 1e-15, 200, "Hugoniot density")
}

/// `e_tot(ρ, p)` and its density derivative at fixed pressure.
fn e_tot_and_rho_derivative(model: &GasModel, rho: f64, e: f64) -> (f64, f64) {
    let a = model.a_rad();
    let g1 = model.gamma() - 1.0;
    let e3 = e * e * e;
    let e4 = e3 * e;
    let p_e = g1 * rho + 4.0 * a * e3 / 3.0;
    let de_drho = -g1 * e / p_e;
    let e_tot = e + a * e4 / rho;
    (e_tot, de_drho * (1.0 + 4.0 * a * e3 / rho) - a * e4 / (rho * rho))
}

/// Partial derivatives of `e_tot(ρ, p)`: `(∂/∂ρ at fixed p, ∂/∂p at fixed ρ)`.
pub fn e_tot_partials(model: &GasModel, rho: f64, e: f64) -> (f64, f64) {
    let a = model.a_rad();
    let g1 = model.gamma() - 1.0;
    let e3 = e * e * e;
    let p_e = g1 * rho + 4.0 * a * e3 / 3.0;
    let dp = (1.0 + 4.0 * a * e3 / rho) / p_e;
    (e_tot_and_rho_derivative(model, rho, e).1, dp)
}

fn shock_branch(model: &GasModel, side: &PrimState1D, p: f64, sign: f64) -> Result<CurvePoint> {
    let (rho, e) = hugoniot_state(model, side, p)?;
    let jump_v = 1.0 / side.rho - 1.0 / rho;
    let phi = ((p - side.p_tot) * jump_v).sqrt();
    let (etot_rho, etot_p) = e_tot_partials(model, rho, e);
    // along the Hugoniot: dρ/dp = -G_p / G_ρ
    let g_p = etot_p - 0.5 * jump_v;
    let g_rho = etot_rho - 0.5 * (p + side.p_tot) / (rho * rho);
    let h1 = -g_p / g_rho;
    let phi_p = jump_v / (2.0 * phi);
    let phi_rho = (p - side.p_tot) / (2.0 * phi * rho * rho);
    let phi1 = phi_p + phi_rho * h1;
    Ok(CurvePoint { u: side.u + sign * phi, rho, du_dp: sign * phi1, drho_dp: h1, e })
}

fn rarefaction_branch(model: &GasModel, side: &PrimState1D, p: f64, sign: f64) -> Result<CurvePoint> {
    let big_gamma = side.rho * side.sound * side.sound / side.p_tot;
    let hint = side.rho * (p / side.p_tot).powf(1.0 / big_gamma);
    let (rho, e) = model.isentrope_state_from(side, p, hint)?;
    let c = model.sound_speed(rho, e);
    let integral = model.isentrope_integral_between((rho, e), (side.rho, side.e), side.entropy)?;
    Ok(CurvePoint { u: side.u - sign * integral, rho, du_dp: sign / (rho * c), drho_dp: 1.0 / (c * c), e })
}

/// Velocity behind a left-facing wave reaching pressure `p`.
pub fn left_wave_curve(model: &GasModel, left: &PrimState1D, p: f64) -> Result<CurvePoint> {
    wave_curve(model, left, p, Side::Left)
}

/// Velocity behind a right-facing wave reaching pressure `p`.
pub fn right_wave_curve(model: &GasModel, right: &PrimState1D, p: f64) -> Result<CurvePoint> {
    wave_curve(model, right, p, Side::Right)
}

pub fn wave_curve(model: &GasModel, side: &PrimState1D, p: f64, which: Side) -> Result<CurvePoint> {
    if !(p > 0.0) {
        return Err(Error::NonPositiveInternalEnergy(p));
    }
    let sign = which.sign();
    if p == side.p_tot {
        return Ok(CurvePoint { u: side.u, rho: side.rho, du_dp: sign / side.impedance(), drho_dp: 1.0 / (side.sound * side.sound), e: side.e });
    }
    if p > side.p_tot {
        shock_branch(model, side, p, sign)
    } else {
        rarefaction_branch(model, side, p, sign)
    }
}

/// `∫_0^ρ c/ω dω` along the state's isentrope: the largest velocity gain a
/// rarefaction can produce.
fn escape_integral(model: &GasModel, side: &PrimState1D) -> Result<f64> {
    let s = side.entropy;
    quadrature::integrate_exponential_tail(
        |t| {
            let rho = t.exp();
            model.sound_speed(rho, model.e_of_rho_s(rho, s))
        },
        side.rho.ln(),
        ISENTROPE_TOL,
    )
}

/// Solves for the star pressure and assembles the wave fan.
pub fn solve_star(model: &GasModel, left: &PrimState1D, right: &PrimState1D) -> Result<WaveFan> {
    if left == right {
        return assemble(model, left, right, left.p_tot, left.u, (left.rho, left.e), (right.rho, right.e));
    }
    let eval = |p: f64| -> Result<(f64, CurvePoint, CurvePoint)> {
        let l = left_wave_curve(model, left, p)?;
        let r = right_wave_curve(model, right, p)?;
        Ok((l.u - r.u, l, r))
    };
    let (p_min, p_max) = if left.p_tot <= right.p_tot { (left.p_tot, right.p_tot) } else { (right.p_tot, left.p_tot) };
    let z_bar = 0.25 * (left.rho + right.rho) * (left.sound + right.sound);
    let pv = 0.5 * (left.p_tot + right.p_tot) - 0.5 * (right.u - left.u) * z_bar;
    let scale = 1.0f64.max(left.u.abs()).max(right.u.abs());

    // Unbracketed Newton from the linearised estimate settles typical
    // interfaces in one to three curve evaluations; anything unusual falls
    // through to the bracketed iteration below.
    let mut p = if pv > 0.1 * p_min { pv } else { 0.1 * p_min };
    for _ in 0..12 {
        let Ok((f, l, r)) = eval(p) else { break };
        let u_mid = 0.5 * (l.u + r.u);
        if f.abs() <= 1e-12 * scale.max(u_mid.abs()) {
            return assemble(model, left, right, p, u_mid, (l.rho, l.e), (r.rho, r.e));
        }
        let dp = -f / (l.du_dp - r.du_dp);
        let next = p + dp;
        if !next.is_finite() {
            break;
        }
        if dp.abs() <= NEWTON_FINAL_STEP * p {
            // quadratic convergence: the remaining error is O(dp²), far
            // below rounding, so the last step is applied to the curves
            // linearly instead of evaluating them again
            let u = 0.5 * (l.u + l.du_dp * dp + r.u + r.du_dp * dp);
            return assemble(model, left, right, next, u, (l.rho + l.drho_dp * dp, l.e), (r.rho + r.drho_dp * dp, r.e));
        }
        p = if next > 0.1 * p { next } else { 0.1 * p };
        if p < 1e-8 * p_min {
            break;
        }
    }

    let (f_min, l_min, r_min) = eval(p_min)?;
    if f_min == 0.0 {
        return assemble(model, left, right, p_min, 0.5 * (l_min.u + r_min.u), (l_min.rho, l_min.e), (r_min.rho, r_min.e));
    }
    let (mut lo, mut hi);
    if f_min < 0.0 {
        // both waves are rarefactions; the root lies below p_min unless vacuum forms
        if left.u + escape_integral(model, left)? - (right.u - escape_integral(model, right)?) <= 0.0 {
            return Err(Error::VacuumGenerated);
        }
        lo = 0.0;
        hi = p_min;
    } else {
        let (f_max, l_max, r_max) = eval(p_max)?;
        if f_max == 0.0 {
            return assemble(model, left, right, p_max, 0.5 * (l_max.u + r_max.u), (l_max.rho, l_max.e), (r_max.rho, r_max.e));
        }
        if f_max > 0.0 {
            lo = p_max;
            hi = 2.0 * p_max;
            let mut n = 0;
            while eval(hi)?.0 > 0.0 {
                lo = hi;
                hi *= 2.0;
                n += 1;
                if n > 200 {
                    return Err(Error::BracketingFailure("star pressure"));
                }
            }
        } else {
            lo = p_min;
            hi = p_max;
        }
    }

    let mut p = if pv > lo && pv < hi { pv } else if lo > 0.0 { 0.5 * (lo + hi) } else { 0.5 * hi };
    for _ in 0..200 {
        let (f, l, r) = eval(p)?;
        let u_mid = 0.5 * (l.u + r.u);
        if f.abs() <= 1e-12 * scale.max(u_mid.abs()) {
            return assemble(model, left, right, p, u_mid, (l.rho, l.e), (r.rho, r.e));
        }
        if f > 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let width_done = hi - lo <= 4.0 * f64::EPSILON * hi;
        let df = l.du_dp - r.du_dp;
        let newton = p - f / df;
        let next = if newton.is_finite() && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if width_done || next == p {
            // bracket exhausted in floating point: accept if the residual is at rounding level
            if f.abs() <= 1e-10 * scale.max(u_mid.abs()) {
                return assemble(model, left, right, p, u_mid, (l.rho, l.e), (r.rho, r.e));
            }
            return Err(Error::RootNotConverged("star pressure"));
        }
        p = next;
    }
    Err(Error::RootNotConverged("star pressure"))
}

fn classify(side: &PrimState1D, p_star: f64, rho_star: f64, u_star: f64, star: &PrimState1D, which: Side) -> Wave {
    let sign = which.sign();
    if p_star > side.p_tot * (1.0 + DEGENERATE_BAND) {
        Wave::Shock { speed: (rho_star * u_star - side.rho * side.u) / (rho_star - side.rho) }
    } else if p_star < side.p_tot * (1.0 - DEGENERATE_BAND) {
        Wave::Rarefaction { head: side.u + sign * side.sound, tail: u_star + sign * star.sound }
    } else {
        Wave::Degenerate { speed: side.u + sign * side.sound }
    }
}

/// Builds the fan from the star pressure, velocity and the two star
/// densities, each paired with an energy estimate seeding the inversion.
fn assemble(
    model: &GasModel,
    left: &PrimState1D,
    right: &PrimState1D,
    p_star: f64,
    u_star: f64,
    (rho_1star, e_1): (f64, f64),
    (rho_2star, e_2): (f64, f64),
) -> Result<WaveFan> {
    let left_star = model.prim_from_rho_u_e(rho_1star, u_star, model.energy_from_pressure_near(rho_1star, p_star, e_1)?);
    let right_star = model.prim_from_rho_u_e(rho_2star, u_star, model.energy_from_pressure_near(rho_2star, p_star, e_2)?);
    Ok(WaveFan {
        left_state: *left,
        right_state: *right,
        left_wave: classify(left, p_star, rho_1star, u_star, &left_star, Side::Left),
        right_wave: classify(right, p_star, rho_2star, u_star, &right_star, Side::Right),
        p_star,
        u_star,
        rho_1star,
        rho_2star,
        left_star,
        right_star,
    })
}

impl WaveFan {
    pub fn wave(&self, side: Side) -> Wave {
        match side {
            Side::Left => self.left_wave,
            Side::Right => self.right_wave,
        }
    }

    pub fn initial(&self, side: Side) -> &PrimState1D {
        match side {
            Side::Left => &self.left_state,
            Side::Right => &self.right_state,
        }
    }

    pub fn star(&self, side: Side) -> &PrimState1D {
        match side {
            Side::Left => &self.left_star,
            Side::Right => &self.right_star,
        }
    }

    /// Region containing the ray `x/t = xi`. A ray on the contact belongs
    /// to the left star state.
    pub fn locate(&self, xi: f64) -> Region {
        if xi <= self.u_star {
            match self.left_wave {
                Wave::Shock { speed } => {
                    if xi < speed {
                        Region::LeftState
                    } else {
                        Region::LeftStar
                    }
                }
                Wave::Degenerate { speed } => {
                    if xi < speed {
                        Region::LeftState
                    } else {
                        Region::LeftStar
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi <= head {
                        Region::LeftState
                    } else if xi >= tail {
                        Region::LeftStar
                    } else {
                        Region::LeftFan
                    }
                }
            }
        } else {
            match self.right_wave {
                Wave::Shock { speed } | Wave::Degenerate { speed } => {
                    if xi > speed {
                        Region::RightState
                    } else {
                        Region::RightStar
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi >= head {
                        Region::RightState
                    } else if xi <= tail {
                        Region::RightStar
                    } else {
                        Region::RightFan
                    }
                }
            }
        }
    }

    /// Solution on the ray `x/t = xi`.
    pub fn sample(&self, model: &GasModel, xi: f64) -> Result<PrimState1D> {
        Ok(match self.locate(xi) {
            Region::LeftState => self.left_state,
            Region::LeftStar => self.left_star,
            Region::RightStar => self.right_star,
            Region::RightState => self.right_state,
            Region::LeftFan => fan_state(model, &self.left_state, self.rho_1star, FanTarget::Ray(xi), Side::Left)?,
            Region::RightFan => {
                fan_state(model, &self.right_state, self.rho_2star, FanTarget::Ray(xi), Side::Right)?
            }
        })
    }
}

/// What selects a state inside a rarefaction fan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FanTarget {
    /// The characteristic `u ∓ c = xi`.
    Ray(f64),
    /// The state whose sound speed equals the given value.
    SoundSpeed(f64),
}

/// State inside the rarefaction through `side` whose star density is
/// `rho_star`, selected by `target`.
pub fn fan_state(model: &GasModel, side: &PrimState1D, rho_star: f64, target: FanTarget, which: Side) -> Result<PrimState1D> {
    let s = side.entropy;
    let sign = which.sign();
    let (lo, hi) = if rho_star < side.rho { (rho_star, side.rho) } else { (side.rho, rho_star) };
    match target {
        FanTarget::SoundSpeed(c_target) => {
            let rho = safeguarded_newton(
                |rho| {
                    let e = model.e_of_rho_s(rho, s);
                    let d = model.derivatives(rho, e);
                    Ok((d.c - c_target, d.c_rho_isentropic()))
                },
                lo,
                hi,
                geometric_guess(side, rho_star, 0.5),
                1e-15 * c_target,
                1e-15,
                200,
                "fan state by sound speed",
            )?;
            let e = model.e_of_rho_s(rho, s);
            let u = side.u - sign * model.isentrope_integral(rho, side.rho, s)?;
            Ok(model.prim_from_rho_u_e(rho, u, e))
        }
        FanTarget::Ray(xi) => {
            // u(ρ) is tracked incrementally so every step integrates only
            // between consecutive iterates
            let mut anchor_rho = side.rho;
            let mut anchor_u = side.u;
            let mut velocity = |rho: f64| -> Result<f64> {
                let u = anchor_u - sign * model.isentrope_integral(rho, anchor_rho, s)?;
                anchor_rho = rho;
                anchor_u = u;
                Ok(u)
            };
            let rho = safeguarded_newton(
                |rho| {
                    let e = model.e_of_rho_s(rho, s);
                    let d = model.derivatives(rho, e);
                    let u = velocity(rho)?;
                    // d(u + sign·c)/dρ = -sign·c/ρ + sign·c_ρ
                    Ok((u + sign * d.c - xi, sign * (d.c_rho_isentropic() - d.c / rho)))
                },
                lo,
                hi,
                geometric_guess(side, rho_star, 0.5),
                1e-14 * (side.sound + side.u.abs()),
                1e-15,
                200,
                "fan state by ray",
            )?;
            let e = model.e_of_rho_s(rho, s);
            let u = side.u - sign * model.isentrope_integral(rho, side.rho, s)?;
            Ok(model.prim_from_rho_u_e(rho, u, e))
        }
    }
}

fn geometric_guess(side: &PrimState1D, rho_star: f64, w: f64) -> f64 {
    (side.rho.ln() * (1.0 - w) + rho_star.ln() * w).exp()
}
