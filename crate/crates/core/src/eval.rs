use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A numerical value together with a bound on the truncation / quadrature
/// error and the parameters that produced it.
///
/// `error_bound` is a bound on the *absolute* error |computed − exact| coming
/// from truncating infinite sums or from quadrature, `f64::INFINITY` when no
/// bound is available.  Floating-point rounding is not included.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub error_bound: f64,
    /// Cutoffs and tolerances used, keyed by name.  BTreeMap keeps the
    /// serialized order deterministic.
    pub params: BTreeMap<String, f64>,
}

impl EvalResult {
    pub fn new(value: Complex64, error_bound: f64) -> Self {
        EvalResult {
            value,
            error_bound,
            params: BTreeMap::new(),
        }
    }

    pub fn exact(value: Complex64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn with_param(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }
}
