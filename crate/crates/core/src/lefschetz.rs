//! Induced maps on torus cohomology, Lefschetz numbers, and the exponential
//! identity linking signed fixed-point counts to the orbit Euler product.
//!
//! For the suspension of f = A on the 2-torus, H⁰(f) = (1), H¹(f) = A and
//! H²(f) = (det A), so the Lefschetz number of f^k is the exact integer
//! 1 − tr(A^k) + (det A)^k.  Under the standing restrictions (det 1, tr > 2)
//! every fixed point has index −1 and the trace identity reads
//! −N_k = 1 − tr(A^k) + 1.

use crate::error::{Error, Result};
use crate::orbit_models::{toral_fixed_points, toral_orbit_counts, IMat2, ToralModel};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Per-degree integer matrices of H^n(f) on H^n(S, ℂ) for n = 0, 1, 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyAction {
    /// Always 1: f is a diffeomorphism of a connected surface.
    pub h0: i64,
    pub h1: [[i64; 2]; 2],
    /// det h1: the action on top cohomology is by the degree.
    pub h2: i64,
}

impl CohomologyAction {
    pub fn new(h1: [[i64; 2]; 2]) -> Self {
        let det = h1[0][0] * h1[1][1] - h1[0][1] * h1[1][0];
        CohomologyAction { h0: 1, h1, h2: det }
    }

    pub fn h1_trace(&self) -> i64 {
        self.h1[0][0] + self.h1[1][1]
    }

    pub fn h1_det(&self) -> i64 {
        self.h2
    }

    pub(crate) fn h1_big(&self) -> IMat2 {
        IMat2([
            self.h1[0][0].into(),
            self.h1[0][1].into(),
            self.h1[1][0].into(),
            self.h1[1][1].into(),
        ])
    }
}

/// The induced cohomology action of a toral model: h1 is the matrix itself.
/// (Whether H¹(f) is A or its transpose is irrelevant to every quantity used
/// here: traces, determinants and eigenvalues agree.)
pub fn induced_action(model: &ToralModel) -> CohomologyAction {
    CohomologyAction::new([[model.a, model.b], [model.c, model.d]])
}

/// Lefschetz number Σ_n (−1)^n tr H^n(f^k) = 1 − tr(h1^k) + (det h1)^k, exact.
pub fn lefschetz_number(action: &CohomologyAction, k: u32) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::Domain("iterate k must be ≥ 1".into()));
    }
    let tr = action.h1_big().pow(k).trace();
    let det_pow = BigInt::from(action.h1_det()).pow(k);
    Ok(BigInt::from(1) - tr + det_pow)
}

/// One row of the trace-identity report: the signed fixed-point sum (all
/// indices −1 under the model restrictions) against the alternating trace.
/// Exact integers are serialized as decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LefschetzEntry {
    pub k: u32,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LefschetzReport {
    pub entries: Vec<LefschetzEntry>,
    pub pass: bool,
}

/// Check Σ_{p ∈ Fix(f^k)} ε_p = Σ_n (−1)^n tr H^n(f^k) for k = 1..k_max as an
/// exact integer identity (left side −N_k).
pub fn verify_lefschetz(model: &ToralModel, k_max: u32) -> Result<LefschetzReport> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be ≥ 1".into()));
    }
    let action = induced_action(model);
    let mut entries = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let lhs = -toral_fixed_points(model, k)?;
        let rhs = lefschetz_number(&action, k)?;
        entries.push(LefschetzEntry {
            k,
            pass: lhs == rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(LefschetzReport { entries, pass })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpIdentityReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub discrepancy: f64,
    /// Bound on the finite-K mismatch between the two truncations.
    pub bound: f64,
    pub pass: bool,
}

/// Exponential identity between the signed fixed-point generating function
/// and the orbit Euler product, both truncated at K:
///
/// ```text
/// exp( Σ_{k≤K} (1/k)(−N_k) e^{−ks} )  ≈  ∏_{m≤K} (1 − e^{−sm})^{P_m}.
/// ```
///
/// The two sides share all pair contributions k·m ≤ K; the product side
/// additionally carries pairs m ≤ K < km, which the reported bound covers.
/// At K = 1 the bound records the finite-K discrepancy; equality is only
/// asymptotic.
pub fn orbit_exp_identity_check(model: &ToralModel, s: Complex64, k_cap: u32) -> Result<ExpIdentityReport> {
    if k_cap == 0 {
        return Err(Error::Domain("K must be ≥ 1".into()));
    }
    let sigma = s.re;
    if sigma <= model.entropy() {
        return Err(Error::OutsideConvergenceRegion {
            re_s: sigma,
            required: model.entropy(),
        });
    }
    let mut exp_sum = Complex64::new(0.0, 0.0);
    for k in 1..=k_cap {
        let nk = toral_fixed_points(model, k)?
            .to_f64()
            .ok_or_else(|| Error::Overflow(format!("N_{k} exceeds f64")))?;
        exp_sum += -nk / k as f64 * (-s * k as f64).exp();
    }
    let lhs = exp_sum.exp();

    let counts = toral_orbit_counts(model, k_cap)?;
    let mut log_prod = Complex64::new(0.0, 0.0);
    let mut log_mismatch = 0.0;
    for (m, pm) in &counts {
        let pm = pm
            .to_f64()
            .ok_or_else(|| Error::Overflow(format!("P_{m} exceeds f64")))?;
        let w = (-s * *m as f64).exp();
        log_prod += pm * crate::numerics::ln_one_minus(w);
        // Pairs (m, j) with mj > K present in the product but not the sum:
        // Σ_{j > K/m} e^{−σ m j}/j ≤ e^{−σ m (⌊K/m⌋+1)} / ((⌊K/m⌋+1)(1−e^{−σm})).
        let j0 = (k_cap / m + 1) as f64;
        let em = (-sigma * *m as f64).exp();
        log_mismatch += pm * em.powf(j0) / (j0 * (1.0 - em));
    }
    let rhs = log_prod.exp();

    let discrepancy = (lhs - rhs).norm();
    let bound = rhs.norm() * log_mismatch.exp_m1() + 1e-13 * rhs.norm().max(1.0);
    Ok(ExpIdentityReport {
        lhs,
        rhs,
        discrepancy,
        bound,
        pass: discrepancy <= bound,
    })
}
