//! Shared numerical machinery: Gauss–Legendre rules, panel integration,
//! incomplete-gamma tail integrals, least-squares fits, and derivative helpers.

use crate::error::{Error, Result};
use num_complex::Complex64;
use once_cell::sync::Lazy;

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
///
/// Computed by Newton iteration on the Legendre recurrence; deterministic and
/// accurate to machine precision for the small n used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P_n'(x) via the three-term recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

pub static GL8: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_legendre(8));
pub static GL16: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_legendre(16));
pub static GL32: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_legendre(32));

/// ∫_a^b f(x) dx with a single Gauss–Legendre rule.
pub fn gl_integrate<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    rule: &(Vec<f64>, Vec<f64>),
) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.0.iter().zip(rule.1.iter()) {
        acc += *w * f(mid + half * x);
    }
    acc * half
}

/// Composite integration over explicit panel boundaries.
pub fn panels_integrate<F: Fn(f64) -> Complex64>(
    f: &F,
    boundaries: &[f64],
    rule: &(Vec<f64>, Vec<f64>),
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for w in boundaries.windows(2) {
        acc += gl_integrate(f, w[0], w[1], rule);
    }
    acc
}

/// Geometrically graded panel boundaries from `a` to `b` (grading toward `a`),
/// `n` panels.  Used where the integrand has large derivatives near `a`.
pub fn geometric_panels(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && n >= 1);
    let r = (b / a).powf(1.0 / n as f64);
    let mut v = Vec::with_capacity(n + 1);
    let mut x = a;
    v.push(a);
    for _ in 0..n {
        x *= r;
        v.push(x);
    }
    *v.last_mut().unwrap() = b;
    v
}

/// ∫_0^T f with panels graded toward 0 (handles x^{p} endpoints with
/// fractional p), then uniform panels out to T.
pub fn integrate_zero_to<F: Fn(f64) -> Complex64>(f: &F, t_end: f64, n_geo: usize) -> Complex64 {
    let a0 = t_end * 1e-14;
    // The first sliver [0, a0] is integrated by a single rule; its
    // contribution is negligible for integrands bounded near 0.
    let mut acc = gl_integrate(f, 0.0, a0, &GL32);
    let bounds = geometric_panels(a0, t_end, n_geo);
    acc += panels_integrate(f, &bounds, &GL32);
    acc
}

/// Upper incomplete gamma Γ(a, x) = ∫_x^∞ t^{a−1} e^{−t} dt for a > 0, x ≥ 0.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    statrs::function::gamma::gamma_ur(a, x) * statrs::function::gamma::gamma(a)
}

/// Bound on Σ over pairs (orbit, iterate) with total length y > x of
/// y^p e^{−σy}, given the counting bound N(y) ≤ y e^{a y}/m + 1.
///
/// Integration by parts against the counting bound gives, for x past the mode
/// of y^p e^{−σy},
///
/// ```text
/// tail ≤ (σ/m)·Γ(p+2, (σ−a)x)/(σ−a)^{p+2} + σ·Γ(p+1, σx)/σ^{p+1}.
/// ```
pub fn pair_tail_bound(p: f64, sigma: f64, a: f64, m: f64, x: f64) -> Result<f64> {
    if sigma <= a {
        return Err(Error::Domain(format!(
            "tail bound requires Re(s) = {sigma} > growth abscissa {a}"
        )));
    }
    let integral_from = |x0: f64| -> f64 {
        let d = sigma - a;
        (sigma / m) * upper_incomplete_gamma(p + 2.0, d * x0) / d.powf(p + 2.0)
            + upper_incomplete_gamma(p + 1.0, sigma * x0) / sigma.powf(p)
    };
    let y_star = if p > 0.0 { p / sigma } else { 0.0 };
    if x >= y_star {
        Ok(integral_from(x))
    } else {
        // y^p e^{−σy} still increasing at x: cover [x, y*] by the counting
        // bound at y* times the peak value, then integrate from y*.
        let peak = y_star.powf(p) * (-sigma * y_star).exp();
        let count = y_star * (a * y_star).exp() / m + 1.0;
        Ok(count * peak + integral_from(y_star))
    }
}

/// Ordinary least squares of y on x: returns (slope, intercept).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InsufficientData(
            "linear fit needs at least two points".into(),
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData("degenerate abscissas".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Least squares of y on the regressors [x, ln x, 1]; returns the coefficient
/// of x.  This is the growth-rate estimator for counting functions of the
/// shape ν(x) ≍ C e^{a x}/x.
pub fn exp_growth_fit(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::InsufficientData(
            "growth fit needs at least three points".into(),
        ));
    }
    // Normal equations for the 3-parameter model, solved by Gaussian
    // elimination with partial pivoting.
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let row = [x, x.ln(), 1.0];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * y;
        }
    }
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&ata[i]);
        m[i][3] = atb[i];
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        if m[col][col].abs() < 1e-300 {
            return Err(Error::InsufficientData("singular growth fit".into()));
        }
        for i in (col + 1)..3 {
            let f = m[i][col] / m[col][col];
            for j in col..4 {
                m[i][j] -= f * m[col][j];
            }
        }
    }
    let mut sol = [0.0f64; 3];
    for i in (0..3).rev() {
        let mut s = m[i][3];
        for j in (i + 1)..3 {
            s -= m[i][j] * sol[j];
        }
        sol[i] = s / m[i][i];
    }
    Ok(sol[0])
}

/// d/dz f at z0 by the complex-step method.  Valid only when f restricted to
/// the real axis (through z0 real) is real: the imaginary part of f(z0 + ih)
/// then isolates h·f′(z0) with no subtractive cancellation.
pub fn complex_step_dz<F: Fn(Complex64) -> Result<Complex64>>(
    f: F,
    z0: f64,
    h: f64,
) -> Result<f64> {
    let v = f(Complex64::new(z0, h))?;
    Ok(v.im / h)
}

/// d/dz f at z0 by a central difference with real step h.  The fallback for
/// complex-valued f where the complex-step trick does not apply.
pub fn central_diff_dz<F: Fn(Complex64) -> Result<Complex64>>(
    f: F,
    z0: Complex64,
    h: f64,
) -> Result<Complex64> {
    let hi = Complex64::new(h, 0.0);
    let fp = f(z0 + hi)?;
    let fm = f(z0 - hi)?;
    Ok((fp - fm) / (2.0 * h))
}

/// log(1 − w) without the quantization loss of forming 1 − w when |w| is
/// tiny.  Orbit-count weights reach 1e9, which would amplify the rounding of
/// 1 − e^{−σℓ} at machine epsilon into visible product errors.
pub fn ln_one_minus(w: Complex64) -> Complex64 {
    if w.norm() < 1e-3 {
        // −Σ_{k≥1} w^k/k, truncated where the term drops below 1e−21 relative.
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = w;
        for k in 1..=7 {
            acc -= pow / k as f64;
            pow *= w;
        }
        acc
    } else {
        (Complex64::new(1.0, 0.0) - w).ln()
    }
}

/// Deterministic pairwise summation (order independent of thread count when
/// the slice itself is built in index order).
pub fn pairwise_sum(items: &[Complex64]) -> Complex64 {
    match items.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => items[0],
        2 => items[0] + items[1],
        n => pairwise_sum(&items[..n / 2]) + pairwise_sum(&items[n / 2..]),
    }
}
