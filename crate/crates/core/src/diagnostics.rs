//! Analysis utilities: the genuine-nonlinearity polynomial of the first
//! characteristic field, discrete error norms and convergence studies.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::cases::{Case, ExactSolution};
use crate::error::{Error, Result};
use crate::mesh1d::{self, Grid1D, StepControl};
use crate::quadrature::gauss3_average;
use crate::solver2d::{self, Grid2D, SplitOrder};
use crate::sweep::Scheme;
use crate::thermo::GasModel;

/// Coefficients of `f(r_e, γ₁)` as a quartic in `r_e`, lowest degree first.
pub fn nonlinearity_coefficients(gamma1: f64) -> [f64; 5] {
    let g = gamma1;
    [
        ((27.0 * g + 81.0) * g + 54.0) * g,
        ((-216.0 * g + 1080.0) * g + 756.0) * g,
        (1728.0 * g + 4464.0) * g,
        7488.0 * g + 640.0,
        1792.0,
    ]
}

/// `f(r_e, γ₁)`, whose sign decides whether the first characteristic
/// field is genuinely nonlinear at radiation-to-gas energy ratio `r_e`.
pub fn genuine_nonlinearity_f(r_e: f64, gamma1: f64) -> f64 {
    horner(&nonlinearity_coefficients(gamma1), r_e)
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// Real roots of the polynomial `c` (lowest degree first) in `[lo, hi]`,
/// ascending. The critical points from the derivative split the interval
/// into monotone pieces, so touching roots are found as well as crossings.
pub fn polynomial_roots(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut c = c.to_vec();
    while c.len() > 1 && c[c.len() - 1] == 0.0 {
        c.pop();
    }
    match c.len() {
        0 | 1 => return Vec::new(),
        2 => {
            let r = -c[0] / c[1];
            return if (lo..=hi).contains(&r) { vec![r] } else { Vec::new() };
        }
        _ => {}
    }
    let deriv: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, a)| k as f64 * a).collect();
    let mut knots = vec![lo];
    knots.extend(polynomial_roots(&deriv, lo, hi));
    knots.push(hi);
    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.last() != Some(&r) {
            roots.push(r);
        }
    };
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (horner(&c, a), horner(&c, b));
        if fa == 0.0 {
            push(a, &mut roots);
        } else if fb != 0.0 && fa.signum() != fb.signum() {
            push(bisect_monotone(&c, a, b, fa), &mut roots);
        }
    }
    if horner(&c, hi) == 0.0 {
        push(hi, &mut roots);
    }
    roots
}

/// Bisection to adjacent floats on a bracket with a single sign change.
fn bisect_monotone(c: &[f64], mut a: f64, mut b: f64, fa: f64) -> f64 {
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return m;
        }
        let fm = horner(c, m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
}

/// Largest nonnegative root of `f(·, γ₁)`, or `None` when `f > 0` on
/// `[0, ∞)`. Besides crossings, a local minimum that is exactly zero or a
/// negative dip between two close roots are both caught, because the
/// search is over the monotone pieces of the polynomial.
pub fn max_nonnegative_root(gamma1: f64) -> Option<f64> {
    let c = nonlinearity_coefficients(gamma1);
    // Cauchy bound on the magnitude of every root
    let bound = 1.0 + c[..4].iter().map(|a| (a / c[4]).abs()).fold(0.0, f64::max);
    polynomial_roots(&c, 0.0, bound).last().copied()
}

/// Largest nonnegative root for every `γ₁` of the grid.
pub fn max_zero_sweep(gamma1_grid: &[f64]) -> Vec<(f64, Option<f64>)> {
    gamma1_grid.iter().map(|&g| (g, max_nonnegative_root(g))).collect()
}

/// First grid value whose polynomial has a nonnegative root.
pub fn first_gamma1_with_root(sweep: &[(f64, Option<f64>)]) -> Option<f64> {
    sweep.iter().find(|(_, r)| r.is_some()).map(|(g, _)| *g)
}

/// `lo, lo + step, ...` up to `hi`, computed by index to avoid drift.
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

/// `gamma1,max_zero` rows; the root column is blank when there is none.
pub fn sweep_csv(sweep: &[(f64, Option<f64>)]) -> String {
    let mut s = String::from("gamma1,max_zero\n");
    for (g, r) in sweep {
        match r {
            Some(r) => writeln!(s, "{g:.16e},{r:.16e}").unwrap(),
            None => writeln!(s, "{g:.16e},").unwrap(),
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl ErrorNorms {
    pub fn get(&self, p: Norm) -> f64 {
        match p {
            Norm::L1 => self.l1,
            Norm::L2 => self.l2,
            Norm::Linf => self.linf,
        }
    }
}

/// Discrete norms of `numeric - exact` over cells of equal volume:
/// `Σ|e|V`, `(Σ e²V)^½` and `max|e|`.
pub fn error_norms(numeric: &[f64], exact: &[f64], cell_volume: f64) -> Result<ErrorNorms> {
    if numeric.len() != exact.len() {
        return Err(Error::DomainMismatch(format!("{} numeric cells against {} exact values", numeric.len(), exact.len())));
    }
    let mut n = ErrorNorms::default();
    for (a, b) in numeric.iter().zip(exact) {
        let e = (a - b).abs();
        n.l1 += e * cell_volume;
        n.l2 += e * e * cell_volume;
        n.linf = n.linf.max(e);
    }
    n.l2 = n.l2.sqrt();
    Ok(n)
}

/// Density errors of a 1D grid against a field averaged over each cell by
/// three-point Gauss quadrature.
pub fn density_errors_1d<F: Fn(f64) -> f64>(grid: &Grid1D, exact: F) -> Result<ErrorNorms> {
    let h = 0.5 * grid.dx;
    let reference: Vec<f64> = (0..grid.n_cells)
        .map(|i| {
            let x = grid.cell_center(i);
            gauss3_average(&exact, x - h, x + h)
        })
        .collect();
    let numeric: Vec<f64> = grid.cells.iter().map(|c| c.rho).collect();
    error_norms(&numeric, &reference, grid.dx)
}

/// Density errors of a 2D grid against a field averaged over each cell by
/// the 3×3 tensor Gauss rule.
pub fn density_errors_2d<F: Fn(f64, f64) -> f64>(grid: &Grid2D, exact: F) -> Result<ErrorNorms> {
    let (hx, hy) = (0.5 * grid.dx, 0.5 * grid.dy);
    let mut reference = Vec::with_capacity(grid.cells.len());
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let (x, y) = grid.cell_center(i, j);
            reference.push(gauss3_average(|s| gauss3_average(|r| exact(s, r), y - hy, y + hy), x - hx, x + hx));
        }
    }
    let numeric: Vec<f64> = grid.cells.iter().map(|c| c.rho).collect();
    error_norms(&numeric, &reference, grid.dx * grid.dy)
}

/// Errors per resolution of a refinement study.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport {
    pub resolutions: Vec<usize>,
    pub errors_l1: Vec<f64>,
    pub errors_l2: Vec<f64>,
    pub errors_linf: Vec<f64>,
}

impl ConvergenceReport {
    pub fn push(&mut self, n: usize, e: ErrorNorms) {
        self.resolutions.push(n);
        self.errors_l1.push(e.l1);
        self.errors_l2.push(e.l2);
        self.errors_linf.push(e.linf);
    }

    pub fn errors(&self, p: Norm) -> &[f64] {
        match p {
            Norm::L1 => &self.errors_l1,
            Norm::L2 => &self.errors_l2,
            Norm::Linf => &self.errors_linf,
        }
    }

    /// `log(e_k / e_{k+1}) / log(N_{k+1} / N_k)` for consecutive levels,
    /// which is `log₂(e_N / e_2N)` under doubling.
    pub fn orders(&self, p: Norm) -> Vec<f64> {
        let e = self.errors(p);
        (1..e.len())
            .map(|k| (e[k - 1] / e[k]).ln() / (self.resolutions[k] as f64 / self.resolutions[k - 1] as f64).ln())
            .collect()
    }

    /// `N,l1,l1_order,l2,l2_order,linf,linf_order`; the first row has
    /// blank orders.
    pub fn to_csv(&self) -> String {
        let orders = [self.orders(Norm::L1), self.orders(Norm::L2), self.orders(Norm::Linf)];
        let mut s = String::from("N,l1,l1_order,l2,l2_order,linf,linf_order\n");
        for (k, n) in self.resolutions.iter().enumerate() {
            write!(s, "{n}").unwrap();
            for (p, ord) in [Norm::L1, Norm::L2, Norm::Linf].into_iter().zip(&orders) {
                write!(s, ",{:.16e},", self.errors(p)[k]).unwrap();
                if k > 0 {
                    write!(s, "{:.16e}", ord[k - 1]).unwrap();
                }
            }
            s.push('\n');
        }
        s
    }
}

/// Runs a 1D case to its end time and returns the final grid.
pub fn run_case_1d(case: &Case, model: &GasModel, scheme: Scheme, n: usize, theta: f64) -> Result<Grid1D> {
    let mut g = case.grid_1d(model, n)?;
    let control = StepControl { t_end: case.t_end, theta, ..Default::default() };
    mesh1d::run(&mut g, model, scheme, &control, |_| Ok(()))?;
    Ok(g)
}

pub fn run_case_2d(case: &Case, model: &GasModel, scheme: Scheme, cells: (usize, usize), theta: f64, order: SplitOrder) -> Result<Grid2D> {
    let mut g = case.grid_2d(model, cells)?;
    let control = StepControl { t_end: case.t_end, theta, ..Default::default() };
    solver2d::run(&mut g, model, scheme, &control, order, |_| Ok(()))?;
    Ok(g)
}

/// Density errors at the final time of `case` for each resolution `N`
/// (`N` cells in 1D, `N × N` in 2D), with the case's limiter parameter.
pub fn convergence_study(case: &Case, scheme: Scheme, resolutions: &[usize]) -> Result<ConvergenceReport> {
    let model = case.model()?;
    let exact = case.exact(&model)?.ok_or_else(|| Error::Validation { field: "case".into(), message: format!("`{}` has no exact solution", case.name) })?;
    let t = case.t_end;
    let errors = resolutions
        .par_iter()
        .map(|&n| match case.dimension() {
            1 => {
                let g = run_case_1d(case, &model, scheme, n, case.theta)?;
                match &exact {
                    ExactSolution::Riemann { .. } => density_errors_1d(&g, |x| exact.prim_1d(&model, x, t).map_or(f64::NAN, |w| w.rho)),
                    _ => density_errors_1d(&g, |x| exact.density(x, 0.0, t)),
                }
            }
            _ => {
                let g = run_case_2d(case, &model, scheme, (n, n), case.theta, SplitOrder::Xyx)?;
                density_errors_2d(&g, |x, y| exact.density(x, y, t))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = ConvergenceReport::default();
    for (&n, e) in resolutions.iter().zip(errors) {
        report.push(n, e);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases;

    /// Expanded monomial form, written out independently of the Horner form.
    fn f_monomial(r: f64, g: f64) -> f64 {
        -216.0 * r * g.powi(3) + 27.0 * g.powi(3) + 1728.0 * r * r * g * g + 1080.0 * r * g * g + 81.0 * g * g
            + 7488.0 * r.powi(3) * g
            + 4464.0 * r * r * g
            + 756.0 * r * g
            + 54.0 * g
            + 1792.0 * r.powi(4)
            + 640.0 * r.powi(3)
    }

    #[test]
    fn polynomial_edges() {
        for r in [0.0, 0.3, 2.0, 17.0] {
            assert_eq!(genuine_nonlinearity_f(r, 0.0), 1792.0 * r.powi(4) + 640.0 * r.powi(3));
        }
        for g in [0.1, 0.5, 14.0, 20.0] {
            assert!((genuine_nonlinearity_f(0.0, g) - (27.0 * g.powi(3) + 81.0 * g * g + 54.0 * g)).abs() <= 1e-12 * g.powi(3) * 27.0);
        }
        let (a, b) = (genuine_nonlinearity_f(1.0, 14.0), f_monomial(1.0, 14.0));
        assert!((a - b).abs() <= 4.0 * f64::EPSILON * a.abs());
    }

    #[test]
    fn horner_matches_monomials_on_a_grid() {
        let mut worst: f64 = 0.0;
        for i in 0..100 {
            for j in 0..100 {
                let r = i as f64 * 0.05;
                let g = 0.01 + j as f64 * 0.2;
                let (a, b) = (genuine_nonlinearity_f(r, g), f_monomial(r, g));
                // magnitude of the largest term, since f can cancel to zero
                let scale = 7488.0 * r.powi(3) * g + 216.0 * r * g.powi(3) + 1792.0 * r.powi(4) + 27.0 * g.powi(3) + 1.0;
                worst = worst.max((a - b).abs() / scale);
            }
        }
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn roots_of_known_polynomials() {
        // (x-1)(x-2)(x-3) = -6 + 11x - 6x² + x³
        let r = polynomial_roots(&[-6.0, 11.0, -6.0, 1.0], -10.0, 10.0);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        // double root at 1 is only a touch: (x-1)²(x+2)
        let r = polynomial_roots(&[2.0, -3.0, 0.0, 1.0], 0.0, 5.0);
        assert_eq!(r, vec![1.0]);
    }

    /// Sign scan over a fine uniform grid followed by bisection.
    fn scanned_max_root(g: f64, r_max: f64, panels: usize) -> Option<f64> {
        let f = |r: f64| genuine_nonlinearity_f(r, g);
        let h = r_max / panels as f64;
        (0..panels).rev().find_map(|k| {
            let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
            (f(a).signum() != f(b).signum()).then(|| crate::roots::bisect(f, a, b, 1e-14, "scan").unwrap())
        })
    }

    #[test]
    fn small_gamma_has_no_root() {
        assert_eq!(max_nonnegative_root(0.5), None);
        assert_eq!(scanned_max_root(0.5, 1e3, 1_000_000), None);
    }

    #[test]
    fn large_gamma_root_matches_a_dense_scan() {
        let r = max_nonnegative_root(20.0).unwrap();
        let s = scanned_max_root(20.0, 1e3, 1_000_000).unwrap();
        assert!((r - s).abs() < 1e-10 * s, "{r} {s}");
        assert!(genuine_nonlinearity_f(r, 20.0).abs() < 1e-9 * 1792.0 * r.powi(4));
    }

    #[test]
    fn threshold_lies_between_14_95_and_14_96() {
        let sweep = max_zero_sweep(&uniform_grid(14.0, 20.0, 0.01));
        let first = first_gamma1_with_root(&sweep).unwrap();
        assert!(first > 14.95 && first < 14.96 + 1e-9, "{first}");
        // once present the root persists
        let k = sweep.iter().position(|(g, _)| *g == first).unwrap();
        assert!(sweep[k..].iter().all(|(_, r)| r.is_some()));
        assert!(sweep[..k].iter().all(|(_, r)| r.is_none()));
    }

    #[test]
    fn norms_of_simple_differences() {
        let a = vec![1.0; 8];
        assert_eq!(error_norms(&a, &a, 0.125).unwrap(), ErrorNorms::default());
        let b: Vec<f64> = a.iter().map(|x| x + 1e-3).collect();
        let n = error_norms(&b, &a, 0.125).unwrap();
        for p in [Norm::L1, Norm::L2, Norm::Linf] {
            assert!((n.get(p) - 1e-3).abs() < 1e-15);
        }
        assert!(matches!(error_norms(&a, &a[1..], 0.1), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn shifted_sine_l1_matches_dense_quadrature() {
        let case = cases::find("sine1d").unwrap();
        let m = case.model().unwrap();
        let g = case.grid_1d(&m, 200).unwrap();
        let delta = 0.01;
        let n = density_errors_1d(&g, |x| 1.0 + 0.2 * (2.0 * std::f64::consts::PI * (x - delta)).sin()).unwrap();
        // ∫|0.2 (sin 2πx - sin 2π(x-δ))| dx = 0.2 · (4/π) sin(πδ)
        let oracle = 0.2 * 4.0 / std::f64::consts::PI * (std::f64::consts::PI * delta).sin();
        assert!((n.l1 - oracle).abs() < 2e-3 * oracle, "{} {oracle}", n.l1);
    }

    #[test]
    fn report_orders_and_csv() {
        let mut r = ConvergenceReport::default();
        r.push(10, ErrorNorms { l1: 4e-2, l2: 4e-2, linf: 8e-2 });
        r.push(20, ErrorNorms { l1: 1e-2, l2: 2e-2, linf: 4e-2 });
        assert_eq!(r.orders(Norm::L1), vec![2.0]);
        assert_eq!(r.orders(Norm::L2), vec![1.0]);
        let csv = r.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "N,l1,l1_order,l2,l2_order,linf,linf_order");
        assert!(lines[1].starts_with("10,4.0000000000000001e-2,,"));
        assert_eq!(lines[2].split(',').count(), 7);
    }

    #[test]
    fn first_order_scheme_converges_at_first_order() {
        let case = cases::find("sine1d").unwrap();
        let r = convergence_study(&case, Scheme::Godunov, &[40, 80, 160, 320]).unwrap();
        for o in r.orders(Norm::L1) {
            assert!((0.7..=1.3).contains(&o), "{o}");
        }
    }
}
