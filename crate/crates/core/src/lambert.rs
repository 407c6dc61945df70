//! Principal branch of the Lambert W function for non-negative arguments.

/// Solves `w * exp(w) = x` for `x >= 0` by Halley iteration.
///
/// Returns NaN for negative or NaN input.
pub fn lambert_w0(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    if x > 1e300 {
        // exp(w) overflows long before Halley gets a chance; the log form is exact enough.
        return lambert_w0_from_ln(x.ln());
    }
    let mut w = if x < 3.0 {
        x.ln_1p()
    } else {
        let l = x.ln();
        l - l.ln()
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    w
}

/// `W(exp(l))`, usable when the argument itself would overflow.
///
/// Halley iteration on `w + ln w = l` from Winitzki's uniform
/// approximation; valid for any real `l`.
pub fn lambert_w0_from_ln(l: f64) -> f64 {
    if l.is_nan() {
        return f64::NAN;
    }
    if l == f64::NEG_INFINITY {
        return 0.0;
    }
    if l < -700.0 {
        // W(x) = x - x² + ... with x below 1e-304
        return l.exp();
    }
    // y = ln(1 + e^l) without overflow
    let y = if l < 1.0 { l.exp().ln_1p() } else { l + (-l).exp().ln_1p() };
    let mut w = y * (1.0 - y.ln_1p() / (2.0 + y));
    for _ in 0..8 {
        let g = w + w.ln() - l;
        let g1 = 1.0 + 1.0 / w;
        let g2 = -1.0 / (w * w);
        let step = g / (g1 - 0.5 * g * g2 / g1);
        w -= step;
        // cubic convergence: the next error is far below rounding
        if step.abs() <= 1e-6 * w {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(lambert_w0(0.0), 0.0);
        assert!((lambert_w0(std::f64::consts::E) - 1.0).abs() < 1e-15);
        // omega constant by fixed-point iteration w = exp(-w)
        let mut omega = 0.5_f64;
        for _ in 0..200 {
            omega = (-omega).exp();
        }
        assert!((lambert_w0(1.0) - omega).abs() < 1e-15);
    }

    #[test]
    fn defining_identity_over_many_decades() {
        let mut x = 1e-300;
        while x < 1e300 {
            let w = lambert_w0(x);
            let rel = (w * w.exp() - x).abs() / x;
            // evaluating w·exp(w) itself carries a relative error of about w·ε
            assert!(rel < 1e-14 * w.max(1.0), "x={x} w={w} rel={rel}");
            x *= 7.3;
        }
    }

    #[test]
    fn log_form_agrees_with_direct_form() {
        for &l in &[1.5, 10.0, 100.0, 600.0] {
            let a = lambert_w0_from_ln(l);
            let b = lambert_w0(f64::exp(l));
            assert!((a - b).abs() <= 1e-14 * b, "l={l}");
        }
        let w = lambert_w0_from_ln(5000.0);
        assert!((w + w.ln() - 5000.0).abs() < 1e-11);
    }
}
