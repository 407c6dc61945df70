//! Safeguarded scalar root finding.

use crate::error::{Error, Result};

/// Newton iteration confined to a sign-changing bracket.
///
/// `f` returns the value and derivative. Any Newton step that leaves the
/// current bracket is replaced by a bisection step. Stops when the residual
/// falls under `ftol` or the bracket shrinks below `xtol` relative width.
pub fn safeguarded_newton<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    x0: f64,
    ftol: f64,
    xtol: f64,
    max_iter: usize,
    what: &'static str,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let (flo, _) = f(lo)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    let (fhi, _) = f(hi)?;
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::BracketingFailure(what));
    }
    let lo_negative = flo < 0.0;
    let mut x = if x0 > lo && x0 < hi { x0 } else { 0.5 * (lo + hi) };
    // Newton steps that fail to halve the step before last give way to
    // bisection, so a noisy residual cannot stall the bracket.
    let (mut step, mut step_before) = (hi - lo, hi - lo);
    for _ in 0..max_iter {
        let (fx, dfx) = f(x)?;
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if (fx < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= xtol * hi.abs().max(lo.abs()) {
            return Ok(0.5 * (lo + hi));
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton.is_finite() && newton > lo && newton < hi && 2.0 * (newton - x).abs() <= step_before {
            newton
        } else {
            0.5 * (lo + hi)
        };
        step_before = step;
        step = (next - x).abs();
        x = next;
    }
    Err(Error::RootNotConverged(what))
}

/// Plain bisection on a sign-changing bracket down to relative width `xtol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64, what: &'static str) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::BracketingFailure(what));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= xtol * hi.abs().max(lo.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_finds_cube_root() {
        let r = safeguarded_newton(
            |x| Ok((x * x * x - 2.0, 3.0 * x * x)),
            0.0,
            4.0,
            3.9,
            1e-15,
            1e-16,
            100,
            "cube",
        )
        .unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn newton_survives_flat_derivative() {
        // atan has a vanishing derivative far away; plain Newton overshoots from x0 = 10
        let r = safeguarded_newton(
            |x| Ok((x.atan(), 1.0 / (1.0 + x * x))),
            -20.0,
            30.0,
            10.0,
            1e-15,
            1e-16,
            200,
            "atan",
        )
        .unwrap();
        assert!(r.abs() < 1e-14);
    }

    #[test]
    fn bisection_and_bad_bracket() {
        let r = bisect(|x| x * x - 3.0, 0.0, 3.0, 1e-15, "sqrt").unwrap();
        assert!((r - 3f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, "none").is_err());
    }
}
