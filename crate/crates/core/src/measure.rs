//! Closed-form dimensions of self-similar and hyperfractal measures.
//!
//! All logarithms are natural; every formula here is a ratio of logarithms, so
//! the base cancels.

use std::fmt;

use crate::error::{invalid, Result};
use crate::Scalar;

/// Tolerance on `Σ p_i = 1` for a [`ContractionSystem`].
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// Dimension of a measure: a nonnegative real or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct DimensionValue<T>(T);

impl<T: Scalar> DimensionValue<T> {
    pub fn new(value: T) -> Result<Self> {
        if value.is_nan() || value < T::zero() {
            return Err(invalid("dimension", format!("{value} is not a nonnegative real")));
        }
        Ok(Self(value))
    }

    pub fn infinite() -> Self {
        Self(T::infinity())
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// A measure is hyperfractal when its dimension exceeds that of its planar support.
    pub fn is_hyperfractal(self) -> bool {
        self.0 > T::lit(2.0)
    }
}

impl<T: Scalar> fmt::Display for DimensionValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Contraction similarities `f_i(x) = λ_i x + t_i` with selection probabilities `p_i`.
///
/// Translations do not enter the dimension and are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionSystem<T> {
    ratios: Vec<T>,
    probabilities: Vec<T>,
}

impl<T: Scalar> ContractionSystem<T> {
    pub fn new(ratios: Vec<T>, probabilities: Vec<T>) -> Result<Self> {
        if ratios.is_empty() {
            return Err(invalid("ratios", "at least one map is required"));
        }
        if ratios.len() != probabilities.len() {
            return Err(invalid(
                "probabilities",
                format!("{} probabilities for {} ratios", probabilities.len(), ratios.len()),
            ));
        }
        if let Some(r) = ratios.iter().find(|&&r| !(r > T::zero() && r < T::one())) {
            return Err(invalid("ratios", format!("{r} is not in (0, 1)")));
        }
        if let Some(p) = probabilities.iter().find(|&&p| !(p > T::zero() && p <= T::one())) {
            return Err(invalid("probabilities", format!("{p} is not in (0, 1]")));
        }
        let total: f64 = probabilities.iter().map(|p| p.as_f64()).sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(invalid("probabilities", format!("sum to {total}, expected 1")));
        }
        Ok(Self { ratios, probabilities })
    }

    /// `N` copies of the same map chosen uniformly.
    pub fn uniform(ratio: T, copies: usize) -> Result<Self> {
        let p = T::one() / T::from_count(copies.max(1));
        Self::new(vec![ratio; copies], vec![p; copies])
    }

    pub fn ratios(&self) -> &[T] {
        &self.ratios
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    /// `Σ p_i ln(1/p_i)`.
    pub fn entropy(&self) -> T {
        self.probabilities.iter().map(|&p| -p * p.ln()).sum()
    }

    /// `Σ p_i ln(1/λ_i)`.
    pub fn lyapunov_exponent(&self) -> T {
        self.probabilities.iter().zip(&self.ratios).map(|(&p, &r)| -p * r.ln()).sum()
    }
}

/// Dimension of the invariant measure of a contraction system: entropy over
/// Lyapunov exponent.
pub fn ifs_dimension<T: Scalar>(system: &ContractionSystem<T>) -> DimensionValue<T> {
    let entropy = system.entropy();
    if entropy <= T::zero() {
        return DimensionValue(T::zero());
    }
    DimensionValue(entropy / system.lyapunov_exponent())
}

/// Self-similar network whose step-`n` segments have length `c·sⁿ` and mass `m0·rⁿ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformSelfSimilarSpec<T> {
    s: T,
    r: T,
    c: T,
    m0: T,
}

impl<T: Scalar> UniformSelfSimilarSpec<T> {
    pub fn new(s: T, r: T, c: T, m0: T) -> Result<Self> {
        if !(s > T::zero() && s < T::one()) {
            return Err(invalid("s", format!("{s} is not in (0, 1)")));
        }
        if !(r > T::zero()) {
            return Err(invalid("r", format!("{r} must be positive")));
        }
        if !(c > T::zero()) {
            return Err(invalid("c", format!("{c} must be positive")));
        }
        if !(m0 > T::zero()) {
            return Err(invalid("m0", format!("{m0} must be positive")));
        }
        Ok(Self { s, r, c, m0 })
    }

    /// Spec with unit initial length and mass.
    pub fn with_scalings(s: T, r: T) -> Result<Self> {
        Self::new(s, r, T::one(), T::one())
    }

    pub fn length_scaling(&self) -> T {
        self.s
    }

    pub fn mass_scaling(&self) -> T {
        self.r
    }

    pub fn segment_length(&self, step: i32) -> T {
        self.c * self.s.powi(step)
    }

    pub fn segment_mass(&self, step: i32) -> T {
        self.m0 * self.r.powi(step)
    }
}

/// Almost-everywhere local dimension `ln r / ln s` of a uniform self-similar measure.
///
/// Rejects `r > 1`: segment masses would grow with the step and the value
/// `ln r / ln s` would be negative.
pub fn uniform_ss_dimension<T: Scalar>(spec: &UniformSelfSimilarSpec<T>) -> Result<DimensionValue<T>> {
    if spec.r > T::one() {
        return Err(invalid("r", format!("{} > 1 gives a negative dimension", spec.r)));
    }
    DimensionValue::new(spec.r.ln() / spec.s.ln())
}

/// Dimension `ln(4/q)/ln 2` of the Manhattan measure, with `q = 1 − p`.
///
/// `p = 0` gives exactly 2 and `p = 1` gives `+∞`.
pub fn manhattan_dimension<T: Scalar>(p: T) -> Result<DimensionValue<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(invalid("p", format!("{p} is not in [0, 1]")));
    }
    if p == T::one() {
        return Ok(DimensionValue::infinite());
    }
    if p == T::zero() {
        return Ok(DimensionValue(T::lit(2.0)));
    }
    let q = T::one() - p;
    Ok(DimensionValue((T::lit(4.0) / q).log2()))
}

/// Decay exponent of the rank curve `ν(ξ) ~ ξ^(1 − dim)` for the Manhattan measure.
pub fn nu_exponent<T: Scalar>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(invalid("p", format!("{p} is not in (0, 1)")));
    }
    Ok(((T::one() - p) / T::lit(2.0)).log2())
}
