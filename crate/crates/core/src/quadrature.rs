//! Adaptive Gauss-Kronrod quadrature and a few fixed rules.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * value.abs();
    Panel { a, b, value, error: error.max(floor) }
}

/// Integral of `f` over `[a, b]` to `max(abs_tol, rel_tol * |I|)`.
///
/// Bisects the panel with the largest error estimate until the summed
/// estimate meets the tolerance or `max_panels` is exhausted.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let first = kronrod15(&mut f, a, b);
    if !first.value.is_finite() {
        return Err(Error::QuadratureNonConvergence { estimate: first.value, error: f64::INFINITY });
    }
    let mut panels = vec![first];
    let mut total = first.value;
    let mut err = first.error;
    while err > abs_tol.max(rel_tol * total.abs()) {
        if panels.len() >= max_panels {
            return Err(Error::QuadratureNonConvergence { estimate: total, error: err });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            // cannot split further in floating point
            return Err(Error::QuadratureNonConvergence { estimate: total, error: err });
        }
        let left = kronrod15(&mut f, p.a, mid);
        let right = kronrod15(&mut f, mid, p.b);
        panels.push(left);
        panels.push(right);
        total = panels.iter().map(|q| q.value).sum();
        err = panels.iter().map(|q| q.error).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureNonConvergence { estimate: total, error: err });
        }
    }
    Ok(total)
}

/// `∫_{-∞}^{t_hi} g(t) dt` for a positive integrand that decays
/// exponentially as `t → -∞`.
///
/// Panels of doubling width march away from `t_hi`; once the local decay
/// rate predicts a tail below the tolerance the remainder is added in
/// closed form as an exponential tail.
pub fn integrate_exponential_tail<F: FnMut(f64) -> f64>(mut g: F, t_hi: f64, rel_tol: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut upper = t_hi;
    let mut width = 1.0;
    let mut g_upper = g(upper);
    for _ in 0..64 {
        let lower = upper - width;
        let piece = integrate(&mut g, lower, upper, 0.25 * rel_tol, 0.0, 400)?;
        total += piece;
        let g_lower = g(lower);
        if g_lower == 0.0 {
            return Ok(total);
        }
        if g_lower > 0.0 && g_upper > 0.0 {
            let rate = (g_upper / g_lower).ln() / width;
            if rate > 0.0 {
                let tail = g_lower / rate;
                if tail <= 0.25 * rel_tol * total.abs() {
                    return Ok(total + tail);
                }
            }
        }
        if piece.abs() <= 1e-3 * rel_tol * total.abs() && g_lower.abs() * width <= rel_tol * total.abs() {
            return Ok(total);
        }
        upper = lower;
        g_upper = g_lower;
        width *= 2.0;
    }
    Err(Error::QuadratureNonConvergence { estimate: total, error: f64::NAN })
}

/// Three-point Gauss-Legendre average of `f` over `[a, b]`.
pub fn gauss3_average<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let r = (0.6f64).sqrt();
    (5.0 * f(c - r * h) + 8.0 * f(c) + 5.0 * f(c + r * h)) / 18.0
}

/// Five-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss5<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    const X: [f64; 3] = [0.0, 0.538469310105683091036314420700208805, 0.906179845938663992797626878299392965];
    const W: [f64; 3] = [0.568888888888888888888888888888888889, 0.478628670499366468041291514835638192, 0.236926885056189087514264040719917363];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = W[0] * f(c);
    for i in 1..3 {
        sum += W[i] * (f(c - h * X[i]) + f(c + h * X[i]));
    }
    sum * h
}

/// Three-point Gauss-Lobatto (Simpson) rule from precomputed samples.
pub fn lobatto3(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) * (fa + 4.0 * fm + fb) / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0, 1e-13, 0.0, 10).unwrap();
        assert!((v - (9.0 - 1.5 + 6.0)).abs() < 1e-13);
    }

    #[test]
    fn sqrt_singularity_converges() {
        let v = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-10, 0.0, 500).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_limits_negate() {
        let a = integrate(f64::sin, 0.0, 2.0, 1e-12, 0.0, 50).unwrap();
        let b = integrate(f64::sin, 2.0, 0.0, 1e-12, 0.0, 50).unwrap();
        assert!((a + b).abs() < 1e-14);
    }

    #[test]
    fn exponential_tail() {
        // ∫_{-∞}^{1} e^{0.7 t} dt = e^{0.7}/0.7
        let v = integrate_exponential_tail(|t| (0.7 * t).exp(), 1.0, 1e-11).unwrap();
        let exact = 0.7f64.exp() / 0.7;
        assert!(((v - exact) / exact).abs() < 1e-10);
        // mixed rates: e^{t/3} + e^{2t}
        let v = integrate_exponential_tail(|t| (t / 3.0).exp() + (2.0 * t).exp(), 0.0, 1e-10).unwrap();
        assert!(((v - 3.5) / 3.5).abs() < 1e-9);
    }

    #[test]
    fn fixed_rules() {
        let avg = gauss3_average(|x| x.powi(5), 0.0, 1.0);
        assert!((avg - 1.0 / 6.0).abs() < 1e-15);
        assert!((lobatto3(0.0, 2.0, 0.0, 1.0, 8.0) - 4.0).abs() < 1e-15);
    }
}
