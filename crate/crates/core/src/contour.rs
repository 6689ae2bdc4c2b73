//! Hankel-contour quadrature and the contour form of the alternating
//! ξ-sum.
//!
//! The contour C runs along the lower edge of the cut from −∞ to −δ, around
//! the circle |t| = δ, and back along the upper edge, with t^{−z} taking the
//! branch log|t| ∓ iπ on the lower/upper edges.  Two identities are realized
//! numerically:
//!
//! ```text
//! c^{z−1}/Γ(z)      = (1/2πi) ∫_C t^{−z} e^{ct} dt            (c > 0)
//! Σ (−1)^n ξ_n(z,s) = −(1/2πi) ∫_C t^{−z} (ζ′/ζ)(s−t) dt      (Re s > b, Re z > 5)
//! ```
//!
//! and the z-derivative of the second at z = 0 collapses, through the ±iπ
//! edge terms, to the real integral −∫₀^∞ (ζ′/ζ)(s+t) dt = log ζ(s).
//!
//! Since the same analytic g(t) appears on both edges, their combined
//! contribution is (sin πz/π) ∫_δ^{t_max} x^{−z} g(−x) dx, which vanishes
//! identically at integer z; the circle is parametrized by φ ∈ [−π, π] with
//! Arg t = φ.  Both pieces use composite Gauss–Legendre panels (the circle
//! integrand is not 2π-periodic for non-integer z, so the trapezoidal rule
//! would stall at O(h²); GL panels converge spectrally on the analytic
//! integrand).  Edge panels are geometrically graded toward −δ where t^{−z}
//! varies fastest.

use crate::error::{Error, Result};
use crate::eval::EvalResult;
use crate::numerics::{gl_integrate, upper_incomplete_gamma, GL16};
use crate::orbit_models::OrbitEnsemble;
use crate::regdet::{assemble_determinant_formula, alternating_xi, GradedSpectrum};
use crate::special::gamma;
use crate::trace::IdentityReport;
use crate::zeta::{euler_product, log_derivative, ConvergenceRegion, Variant};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Hankel contour parameters: circle radius δ, edge truncation length, and
/// node counts (circle total, per-edge total).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HankelContour {
    pub delta: f64,
    pub t_max: f64,
    pub n_circle: usize,
    pub n_edge: usize,
}

impl HankelContour {
    pub fn new(delta: f64, t_max: f64, n_circle: usize, n_edge: usize) -> Result<Self> {
        if !(delta > 0.0) || t_max <= delta {
            return Err(Error::Domain(format!(
                "need 0 < delta < t_max, got delta = {delta}, t_max = {t_max}"
            )));
        }
        if n_circle < 64 || n_edge < 200 {
            return Err(Error::Domain(
                "contour needs n_circle ≥ 64 and n_edge ≥ 200".into(),
            ));
        }
        Ok(HankelContour {
            delta,
            t_max,
            n_circle,
            n_edge,
        })
    }

    /// Defaults tuned so the Γ-reciprocal identity reproduces to 1e−6 well
    /// within a second: δ = min(0.5, (Re s − 1)/2), t_max = 40.
    pub fn default_for(s: Complex64) -> Result<Self> {
        Self::new(0.5f64.min((s.re - 1.0) / 2.0), 40.0, 256, 400)
    }
}

/// Decay profile of the integrand on the edges: |g(t)| ≤ amplitude·e^{rate·Re t}
/// for Re t ≤ −δ (rate > 0).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EdgeDecay {
    pub amplitude: f64,
    pub rate: f64,
}

fn quadrature_pass<F: Fn(Complex64) -> Complex64>(
    g: &F,
    z: Complex64,
    contour: &HankelContour,
    halve: bool,
) -> (Complex64, f64) {
    let scale = if halve { 2 } else { 1 };
    // Circle: t = δ e^{iφ}, dt = iδe^{iφ}dφ; t^{−z} with Arg t = φ.
    let n_circle_panels = (contour.n_circle / 16 / scale).max(2);
    let delta = contour.delta;
    let circle_f = |phi: f64| {
        let t = delta * c(phi.cos(), phi.sin());
        let t_pow = (-z * c(delta.ln(), phi)).exp();
        let dt = c(0.0, delta) * c(phi.cos(), phi.sin());
        t_pow * g(t) * dt
    };
    let mut acc = c(0.0, 0.0);
    let mut abs_weight = 0.0;
    for i in 0..n_circle_panels {
        let a = -PI + 2.0 * PI * i as f64 / n_circle_panels as f64;
        let b = -PI + 2.0 * PI * (i + 1) as f64 / n_circle_panels as f64;
        acc += gl_integrate(&circle_f, a, b, &GL16);
        abs_weight += gl_integrate(
            &|phi: f64| c((-z.re * delta.ln() + z.im * phi).exp() * delta, 0.0),
            a,
            b,
            &GL16,
        )
        .re;
    }
    // Edges combined: (2i sin πz) ∫_δ^{t_max} x^{−z} g(−x) dx, graded toward δ.
    let edge_factor = 2.0 * c(0.0, 1.0) * (PI * z).sin();
    let n_edge_panels = (contour.n_edge / 16 / scale).max(4);
    let bounds = crate::numerics::geometric_panels(delta, contour.t_max, n_edge_panels);
    let edge_f = |x: f64| (-z * x.ln()).exp() * g(c(-x, 0.0));
    let mut edge = c(0.0, 0.0);
    let mut edge_abs = 0.0;
    for w in bounds.windows(2) {
        edge += gl_integrate(&edge_f, w[0], w[1], &GL16);
        edge_abs += gl_integrate(&|x: f64| c((-z.re * x.ln()).exp(), 0.0), w[0], w[1], &GL16).re;
    }
    acc += edge_factor * edge;
    abs_weight += edge_factor.norm() * edge_abs;
    let two_pi_i = c(0.0, 2.0 * PI);
    ((acc / two_pi_i), abs_weight / (2.0 * PI))
}

/// (1/2πi) ∫_C t^{−z} g(t) dt over the Hankel contour.
///
/// `decay`, when supplied, bounds the neglected edge tails past t_max; without
/// it the error bound is flagged infinite.  The quadrature-refinement part of
/// the bound is a Richardson estimate against a half-resolution pass.  The
/// result also records Σ |weights·t^{−z}|/2π, which callers use to propagate
/// uncertainty in g.
pub fn hankel_integral<F: Fn(Complex64) -> Complex64>(
    g: &F,
    z: Complex64,
    contour: &HankelContour,
    decay: Option<EdgeDecay>,
) -> Result<EvalResult> {
    if let Some(d) = decay {
        if d.rate <= 0.0 {
            return Err(Error::Domain(
                "edge decay rate must be positive for a truncation bound".into(),
            ));
        }
    }
    let (value, abs_weight) = quadrature_pass(g, z, contour, false);
    let (coarse, _) = quadrature_pass(g, z, contour, true);
    let refine = (value - coarse).norm();
    let tail = match decay {
        None => f64::INFINITY,
        Some(d) => {
            // Two edges: |t^{−z}| ≤ x^{−Re z} e^{π|Im z|}; ∫_{t_max}^∞ x^{−p} A e^{−rx} dx.
            let p = z.re;
            let amp = d.amplitude * (PI * z.im.abs()).exp() / PI;
            if p >= 0.0 {
                amp * contour.t_max.powf(-p) * (-d.rate * contour.t_max).exp() / d.rate
            } else {
                amp * upper_incomplete_gamma(1.0 - p, d.rate * contour.t_max)
                    / d.rate.powf(1.0 - p)
            }
        }
    };
    Ok(EvalResult::new(value, tail + refine)
        .with_param("delta", contour.delta)
        .with_param("t_max", contour.t_max)
        .with_param("n_circle", contour.n_circle as f64)
        .with_param("n_edge", contour.n_edge as f64)
        .with_param("abs_weight", abs_weight)
        .with_param("edge_tail", if tail.is_finite() { tail } else { -1.0 })
        .with_param("richardson", refine))
}

/// Integrand samples t^{−z} g(t) along the contour (circle arc followed by
/// the combined-edge abscissas), for plotting: rows (t_re, t_im, f_re, f_im).
pub fn contour_samples<F: Fn(Complex64) -> Complex64>(
    g: &F,
    z: Complex64,
    contour: &HankelContour,
) -> Vec<(f64, f64, f64, f64)> {
    let mut rows = Vec::new();
    let delta = contour.delta;
    for i in 0..contour.n_circle {
        let phi = -PI + 2.0 * PI * (i as f64 + 0.5) / contour.n_circle as f64;
        let t = delta * c(phi.cos(), phi.sin());
        let f = (-z * c(delta.ln(), phi)).exp() * g(t);
        rows.push((t.re, t.im, f.re, f.im));
    }
    let bounds = crate::numerics::geometric_panels(delta, contour.t_max, contour.n_edge);
    for x in bounds {
        let t = c(-x, 0.0);
        let f = (-z * x.ln()).exp() * g(t);
        rows.push((t.re, t.im, f.re, f.im));
    }
    rows
}

/// Γ-reciprocal identity: c^{z−1}/Γ(z) against the contour quadrature of e^{ct}.
pub fn gamma_reciprocal_check(
    c_pos: f64,
    z: Complex64,
    contour: &HankelContour,
) -> Result<IdentityReport> {
    if c_pos <= 0.0 {
        return Err(Error::Domain("the identity needs c > 0".into()));
    }
    let g = |t: Complex64| (c_pos * t).exp();
    let quad = hankel_integral(
        &g,
        z,
        contour,
        Some(EdgeDecay {
            amplitude: 1.0,
            rate: c_pos,
        }),
    )?;
    let closed = ((z - 1.0) * c_pos.ln()).exp() / gamma(z)?;
    let discrepancy = (quad.value - closed).norm();
    let bound = quad.error_bound + 1e-9 * closed.norm().max(1.0);
    Ok(IdentityReport {
        lhs: closed,
        rhs: quad.value,
        discrepancy,
        bound,
        pass: discrepancy <= bound.max(1e-6),
        params: quad.params,
    })
}

fn logderiv_decay(ens: &OrbitEnsemble, sigma_min: f64) -> EdgeDecay {
    // |ζ′/ζ(σ + x)| ≤ e^{−x m} Σ ℓ count e^{−σℓ} / (1 − e^{−σ m}) for x ≥ 0.
    let m = ens.min_length;
    let denom = 1.0 - (-sigma_min * m).exp();
    let amp: f64 = ens
        .records
        .iter()
        .map(|r| r.length * r.count as f64 * (-sigma_min * r.length).exp())
        .sum::<f64>()
        / denom;
    EdgeDecay {
        amplitude: amp,
        rate: m,
    }
}

fn contour_gate(
    ens: &OrbitEnsemble,
    s: Complex64,
    contour: &HankelContour,
) -> Result<ConvergenceRegion> {
    let region = ConvergenceRegion::from_ensemble(ens);
    if s.re <= region.b {
        return Err(Error::OutsideConvergenceRegion {
            re_s: s.re,
            required: region.b,
        });
    }
    if contour.delta >= s.re - 1.0 {
        return Err(Error::Domain(format!(
            "contour radius delta = {} must stay below Re(s) − 1 = {}",
            contour.delta,
            s.re - 1.0
        )));
    }
    if s.re - contour.delta <= region.zeta_abscissa {
        return Err(Error::Domain(format!(
            "circle reaches Re(s−t) = {} inside the zeta divergence region (abscissa {})",
            s.re - contour.delta,
            region.zeta_abscissa
        )));
    }
    Ok(region)
}

/// Contour form of the alternating ξ-sum:
/// Σ (−1)^n ξ_n(z, s) = −(1/2πi) ∫_C t^{−z} (ζ′/ζ)(s−t) dt.
pub fn verify_contour_xi(
    graded: &GradedSpectrum,
    ens: &OrbitEnsemble,
    z: Complex64,
    s: Complex64,
    contour: &HankelContour,
) -> Result<IdentityReport> {
    if z.re <= 5.0 {
        return Err(Error::Domain(format!(
            "contour identity requires Re(z) > 5, got {}",
            z.re
        )));
    }
    contour_gate(ens, s, contour)?;
    let lhs = alternating_xi(graded, z, s)?;
    let sigma_min = s.re - contour.delta;
    let g = |t: Complex64| {
        log_derivative(ens, s - t)
            .map(|r| r.value)
            .unwrap_or(c(f64::NAN, f64::NAN))
    };
    let quad = hankel_integral(&g, z, contour, Some(logderiv_decay(ens, sigma_min)))?;
    let rhs = -quad.value;
    // Propagate the ensemble truncation of ζ′/ζ through the quadrature weights.
    let ld_bound = log_derivative(ens, c(sigma_min, 0.0))?.error_bound;
    let abs_weight = quad.params.get("abs_weight").copied().unwrap_or(0.0);
    let bound = quad.error_bound + ld_bound * abs_weight + 1e-9 * lhs.norm().max(1.0);
    let discrepancy = (lhs - rhs).norm();
    Ok(IdentityReport {
        lhs,
        rhs,
        discrepancy,
        bound,
        pass: discrepancy <= bound.max(1e-4),
        params: quad.params,
    })
}

/// The three routes of the derivative-at-zero computation, all equal to
/// log ζ(s).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogZetaRoutes {
    /// −∂_z at 0 of (1/2πi)∫ t^{−z}(ζ′/ζ)(s−t) dt, frozen quadrature nodes.
    pub contour_derivative: Complex64,
    /// −∫₀^∞ (ζ′/ζ)(s+t) dt, collapsed real integral.
    pub real_integral: Complex64,
    /// Σ_γ Σ_k ε_γ e^{−skℓ(γ)}/k, the orbit double series.
    pub orbit_series: Complex64,
    pub max_pairwise_discrepancy: f64,
    /// |orbit_series − log(euler product)|: a pure rearrangement check.
    pub series_vs_product: f64,
}

/// Evaluate log ζ(s) three independent ways (Re(s) > b).
pub fn derivative_at_zero_logzeta(
    ens: &OrbitEnsemble,
    s: Complex64,
    contour: &HankelContour,
) -> Result<LogZetaRoutes> {
    contour_gate(ens, s, contour)?;
    let sigma_min = s.re - contour.delta;
    let decay = logderiv_decay(ens, sigma_min);
    let g = |t: Complex64| {
        log_derivative(ens, s - t)
            .map(|r| r.value)
            .unwrap_or(c(f64::NAN, f64::NAN))
    };
    // (a) z-derivative of the contour quadrature at 0.  The nodes are frozen
    // (they depend only on the contour parameters, not on z), so this
    // differentiates the fixed quadrature sum.  The edge and circle pieces
    // carry O(1) imaginary parts that cancel only in the assembled sum, so
    // the 1e−20 complex step loses its signal there; central difference in z.
    let i_of_z = |z: Complex64| hankel_integral(&g, z, contour, Some(decay)).map(|r| r.value);
    let contour_derivative = -crate::numerics::central_diff_dz(i_of_z, c(0.0, 0.0), 1e-6)?;
    // (b) −∫₀^∞ (ζ′/ζ)(s+t) dt: the integrand decays like e^{−(Re s + t) m},
    // truncated where the decay bound drops below 1e−16.
    let t_end = (16.0 * std::f64::consts::LN_10 / ens.min_length + 5.0).min(400.0);
    let fb = |t: f64| g(c(-t, 0.0));
    let real_integral = -crate::numerics::integrate_zero_to(&fb, t_end, 40);
    // (c) the orbit double series, summed term by term.
    let mut orbit_series = c(0.0, 0.0);
    for r in &ens.records {
        let scale = r.index as f64 * r.count as f64;
        let mut k = 1u64;
        loop {
            let term = scale * (-s * (k as f64) * r.length).exp() / k as f64;
            orbit_series += term;
            if term.norm() < 1e-18 || k > 10_000 {
                break;
            }
            k += 1;
        }
    }
    let euler = euler_product(ens, s, Variant::Signed)?;
    let series_vs_product = (orbit_series - euler.value.ln()).norm();
    let d_ab = (contour_derivative - real_integral).norm();
    let d_ac = (contour_derivative - orbit_series).norm();
    let d_bc = (real_integral - orbit_series).norm();
    Ok(LogZetaRoutes {
        contour_derivative,
        real_integral,
        orbit_series,
        max_pairwise_discrepancy: d_ab.max(d_ac).max(d_bc),
        series_vs_product,
    })
}

/// Full determinant-formula chain: exp(contour derivative route) against the
/// assembled graded determinant.
pub fn determinant_chain_check(
    graded: &GradedSpectrum,
    ens: &OrbitEnsemble,
    s: Complex64,
    contour: &HankelContour,
) -> Result<IdentityReport> {
    let routes = derivative_at_zero_logzeta(ens, s, contour)?;
    let lhs = routes.contour_derivative.exp();
    let rhs = assemble_determinant_formula(graded, s)?;
    let discrepancy = (lhs - rhs).norm();
    let bound = (routes.max_pairwise_discrepancy + 1e-8) * lhs.norm().max(1.0) * 2.0;
    Ok(IdentityReport {
        lhs,
        rhs,
        discrepancy,
        bound,
        pass: discrepancy <= bound.max(1e-4),
        params: Default::default(),
    }
    .with_param("re_s", s.re)
    .with_param("cutoff", ens.cutoff))
}
