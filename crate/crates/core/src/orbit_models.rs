//! Closed-orbit data for the two concrete model families.
//!
//! Type (i): the suspension flow of a hyperbolic toral automorphism
//! A ∈ SL₂(ℤ) with tr A > 2.  Closed orbits of length m correspond to
//! primitive A-orbits of cardinality m; the fixed-point counts
//! N_k = |det(A^k − I)| = tr(A^k) − 2 determine the primitive counts P_m by
//! Möbius inversion of Σ_{d|k} d·P_d = N_k.  Every index is −1.
//!
//! Type (ii): a Morse-gradient suspension over a genus-g surface.  Closed
//! orbits all have length one and correspond to the critical points; the
//! index is +1 at extrema (Morse index 0 or 2) and −1 at saddles.
//!
//! All integer arithmetic uses arbitrary width; floating point enters only
//! when orbit data is handed to the zeta evaluators.

use crate::error::{Error, Result};
use crate::numerics::exp_growth_fit;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// An integer 2×2 matrix A = [[a, b], [c, d]] defining a hyperbolic toral
/// automorphism with det A = 1 and tr A > 2 (both eigenvalues real positive,
/// so every orbit index is −1 for every iterate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToralModel {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl ToralModel {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(ad, bc)| ad.checked_sub(bc))
            .ok_or_else(|| Error::Overflow("toral matrix entries too large".into()))?;
        if det != 1 {
            return Err(Error::InvalidModel(format!(
                "det A = {det}, expected 1 (orientation-preserving)"
            )));
        }
        let tr = a + d;
        if tr <= 2 {
            return Err(Error::InvalidModel(format!(
                "tr A = {tr}, expected > 2 (hyperbolic with positive eigenvalues; \
                 matrices with tr A ≤ 2 have non-constant or undefined orbit index)"
            )));
        }
        Ok(ToralModel { a, b, c, d })
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    /// Eigenvalues (λ, 1/λ) with λ > 1.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let t = self.trace() as f64;
        let lambda = 0.5 * (t + (t * t - 4.0).sqrt());
        (lambda, 1.0 / lambda)
    }

    /// log λ: the theoretical growth abscissa (topological entropy) of the
    /// suspension's orbit-counting function.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues().0.ln()
    }
}

/// A Morse-gradient suspension datum: surface genus and the number of
/// critical points of Morse index 0, 1, 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseModel {
    pub genus: u32,
    pub n0: u32,
    pub n1: u32,
    pub n2: u32,
}

impl MorseModel {
    pub fn new(genus: u32, n0: u32, n1: u32, n2: u32) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidModel(format!(
                "genus = {genus}, expected ≥ 2 (dense-leaf construction)"
            )));
        }
        let chi = 2 - 2 * genus as i64;
        let alt = n0 as i64 - n1 as i64 + n2 as i64;
        if alt != chi {
            return Err(Error::InvalidModel(format!(
                "n0 − n1 + n2 = {alt} violates the Euler characteristic {chi} of a genus-{genus} surface"
            )));
        }
        if n0 < 1 || n2 < 1 {
            return Err(Error::InvalidModel(
                "a Morse function on a closed surface has a minimum and a maximum (n0 ≥ 1, n2 ≥ 1)"
                    .into(),
            ));
        }
        Ok(MorseModel { genus, n0, n1, n2 })
    }
}

/// Aggregated closed-orbit class: `count` distinct primitive closed orbits of
/// the given length, all with the given index ε ∈ {−1, +1} (constant in the
/// iterate by assumption (A3)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedOrbitRecord {
    pub length: f64,
    pub count: u64,
    pub index: i8,
}

impl ClosedOrbitRecord {
    pub fn new(length: f64, count: u64, index: i8) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidModel(format!(
                "orbit length must be positive and finite, got {length}"
            )));
        }
        if count == 0 {
            return Err(Error::InvalidModel("orbit count must be positive".into()));
        }
        if index != 1 && index != -1 {
            return Err(Error::InvalidModel(format!(
                "orbit index must be ±1, got {index}"
            )));
        }
        Ok(ClosedOrbitRecord {
            length,
            count,
            index,
        })
    }
}

fn serialize_cutoff<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_none()
    } else {
        s.serialize_some(v)
    }
}

fn deserialize_cutoff<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    let v: Option<f64> = Option::deserialize(d)?;
    Ok(v.unwrap_or(f64::INFINITY))
}

/// A finite list of closed-orbit records, complete up to the stated cutoff.
///
/// `cutoff = ∞` (serialized as `null`) marks an ensemble that is the *entire*
/// orbit set of its system; only then do the zeta evaluators report zero
/// truncation error.  `abscissa` is the estimated growth rate of the counting
/// function ν(x); `theoretical_abscissa`, when the construction provides one
/// (log λ for toral suspensions, 0 for Morse), is what convergence regions and
/// tail bounds use; a regression estimate is not a certified bound, so
/// without a theoretical value the bounds inflate the estimate by 10%.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitEnsemble {
    pub records: Vec<ClosedOrbitRecord>,
    pub min_length: f64,
    pub abscissa: f64,
    #[serde(serialize_with = "serialize_cutoff", deserialize_with = "deserialize_cutoff")]
    pub cutoff: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theoretical_abscissa: Option<f64>,
}

impl OrbitEnsemble {
    fn build(
        mut records: Vec<ClosedOrbitRecord>,
        cutoff: f64,
        theoretical_abscissa: Option<f64>,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::InvalidModel("ensemble has no records".into()));
        }
        records.sort_by(|r, s| (r.length, r.index).partial_cmp(&(s.length, s.index)).unwrap());
        let min_length = records[0].length;
        let mut ens = OrbitEnsemble {
            records,
            min_length,
            abscissa: 0.0,
            cutoff,
            theoretical_abscissa,
        };
        ens.abscissa = match estimate_growth(&ens) {
            Ok(a) => a.max(0.0),
            Err(_) => theoretical_abscissa.unwrap_or(0.0),
        };
        Ok(ens)
    }

    pub fn is_complete(&self) -> bool {
        self.cutoff.is_infinite()
    }

    /// Growth rate used by convergence gates and tail bounds: the theoretical
    /// value when available, else the regression estimate inflated by 10%.
    pub fn growth_bound(&self) -> f64 {
        self.theoretical_abscissa.unwrap_or(1.1 * self.abscissa)
    }

    /// Nominal growth rate (no inflation): theoretical when available.
    pub fn growth_nominal(&self) -> f64 {
        self.theoretical_abscissa.unwrap_or(self.abscissa)
    }

    /// ν(x): number of primitive closed orbits of length ≤ x.
    pub fn nu(&self, x: f64) -> u64 {
        self.records
            .iter()
            .filter(|r| r.length <= x)
            .map(|r| r.count)
            .sum()
    }

    pub fn total_count(&self) -> u64 {
        self.records.iter().map(|r| r.count).sum()
    }

    pub fn distinct_lengths(&self) -> Vec<f64> {
        let mut ls: Vec<f64> = self.records.iter().map(|r| r.length).collect();
        ls.dedup();
        ls
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let ens: OrbitEnsemble = serde_json::from_str(s)?;
        for r in &ens.records {
            ClosedOrbitRecord::new(r.length, r.count, r.index)?;
        }
        Ok(ens)
    }
}

/// Growth-rate estimate from the counting function: least squares of
/// log ν(x) on [x, log x, 1] over the upper half of the distinct lengths
/// (where ν has reached its ~ C e^{ax}/x regime).  Needs ≥ 3 distinct lengths.
fn estimate_growth(ens: &OrbitEnsemble) -> Result<f64> {
    let lengths = ens.distinct_lengths();
    if lengths.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "growth estimate needs ≥ 3 distinct lengths, have {}",
            lengths.len()
        )));
    }
    let k = (lengths.len() / 2).max(3);
    let tail = &lengths[lengths.len() - k..];
    let xs: Vec<f64> = tail.to_vec();
    let ys: Vec<f64> = tail.iter().map(|&x| (ens.nu(x) as f64).ln()).collect();
    exp_growth_fit(&xs, &ys)
}

/// Exact 2×2 integer matrix arithmetic over BigInt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IMat2(pub [BigInt; 4]);

impl IMat2 {
    pub fn from_model(m: &ToralModel) -> Self {
        IMat2([m.a.into(), m.b.into(), m.c.into(), m.d.into()])
    }

    pub fn identity() -> Self {
        IMat2([One::one(), Zero::zero(), Zero::zero(), One::one()])
    }

    pub fn mul(&self, o: &IMat2) -> Self {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        IMat2([
            a * e + b * g,
            a * f + b * h,
            c * e + d * g,
            c * f + d * h,
        ])
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = IMat2::identity();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> BigInt {
        &self.0[0] + &self.0[3]
    }
}

/// Number of fixed points of the k-th iterate on the torus:
/// #Fix(f^k) = |det(A^k − I)|, exact.
pub fn toral_fixed_points(model: &ToralModel, k: u32) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::Domain("iterate k must be ≥ 1".into()));
    }
    let ak = IMat2::from_model(model).pow(k);
    let [a, b, c, d] = &ak.0;
    let one = BigInt::from(1);
    let det: BigInt = (a - &one) * (d - &one) - b * c;
    Ok(det.abs())
}

/// Primitive orbit counts P_m, 1 ≤ m ≤ max_period, from Möbius inversion of
/// Σ_{d|k} d·P_d = N_k.  All divisions are exact; a nonzero remainder would
/// mean corrupt fixed-point counts and panics.
pub fn toral_orbit_counts(model: &ToralModel, max_period: u32) -> Result<BTreeMap<u32, BigInt>> {
    if max_period == 0 {
        return Err(Error::Domain("max_period must be ≥ 1".into()));
    }
    let mut p: BTreeMap<u32, BigInt> = BTreeMap::new();
    for k in 1..=max_period {
        let nk = toral_fixed_points(model, k)?;
        let mut lower: BigInt = Zero::zero();
        for d in 1..k {
            if k % d == 0 {
                lower += d * &p[&d];
            }
        }
        let num = nk - lower;
        let (q, r) = num_integer_div_rem(&num, k);
        assert!(r.is_zero(), "Möbius inversion left remainder at k = {k}");
        assert!(!q.is_negative(), "negative orbit count at k = {k}");
        p.insert(k, q);
    }
    Ok(p)
}

fn num_integer_div_rem(n: &BigInt, k: u32) -> (BigInt, BigInt) {
    let k = BigInt::from(k);
    (n / &k, n % &k)
}

/// Orbit ensemble of the toral suspension up to the given period: records
/// (length m, count P_m, index −1), minimal length 1, cutoff max_period.
pub fn toral_ensemble(model: &ToralModel, max_period: u32) -> Result<OrbitEnsemble> {
    let counts = toral_orbit_counts(model, max_period)?;
    let mut records = Vec::new();
    for (m, pm) in &counts {
        if pm.is_zero() {
            continue;
        }
        let count = pm.to_u64().ok_or_else(|| {
            Error::Overflow(format!("orbit count P_{m} = {pm} exceeds u64"))
        })?;
        records.push(ClosedOrbitRecord::new(*m as f64, count, -1)?);
    }
    OrbitEnsemble::build(records, max_period as f64, Some(model.entropy()))
}

/// Orbit ensemble of the Morse-gradient suspension: all orbits have length
/// one; the index is +1 at extrema and −1 at saddles.  The ensemble is the
/// entire orbit set (cutoff ∞) and has growth abscissa 0.
pub fn morse_ensemble(model: &MorseModel) -> Result<OrbitEnsemble> {
    let mut records = Vec::new();
    for (n, idx) in [(model.n0, 1i8), (model.n1, -1), (model.n2, 1)] {
        if n > 0 {
            records.push(ClosedOrbitRecord::new(1.0, n as u64, idx)?);
        }
    }
    OrbitEnsemble::build(records, f64::INFINITY, Some(0.0))
}

/// Ensemble from explicit (length, count, index) data, treated as a complete
/// orbit set.  Property-test fixture and CLI ingestion point.
pub fn synthetic_ensemble(spec: &[(f64, u64, i8)]) -> Result<OrbitEnsemble> {
    let records: Vec<ClosedOrbitRecord> = spec
        .iter()
        .map(|&(l, c, i)| ClosedOrbitRecord::new(l, c, i))
        .collect::<Result<_>>()?;
    OrbitEnsemble::build(records, f64::INFINITY, None)
}

/// Validation report for the standing assumptions on orbit data:
/// (A1) indices well-defined and lengths positive, (A2) a growth abscissa
/// exists, (A3) the index is constant along iterates (structural for
/// aggregated records; reported per construction).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub a1_simple: bool,
    pub a2_growth: bool,
    pub a3_constant_index: bool,
    pub abscissa: f64,
}

pub fn check_assumptions(ens: &OrbitEnsemble) -> AssumptionReport {
    let a1 = ens.min_length > 0.0
        && ens
            .records
            .iter()
            .all(|r| r.length > 0.0 && (r.index == 1 || r.index == -1) && r.count > 0);
    let a = ens.growth_nominal();
    AssumptionReport {
        a1_simple: a1,
        a2_growth: a.is_finite() && a >= 0.0,
        a3_constant_index: true,
        abscissa: a,
    }
}
