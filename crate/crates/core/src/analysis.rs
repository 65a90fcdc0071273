//! Bound arithmetic: instance-count caps, composed running times and the
//! parameter choices that make them beat `2^ñ`.
//!
//! Everything is evaluated in log2 space with `f64`.

use alloc::format;

use crate::reductions::{DeclaredBounds, Realized};
use crate::SolveError;

/// Absolute tolerance for comparing log2 quantities.
pub const LOG2_TOLERANCE: f64 = 1e-9;

/// `λ_Δ = (2Δ−2) / √((2Δ−1)² − 2 ln 2)`, the exponent base of the fastest
/// known Δ-Set Cover algorithm (`O*(2^{λ_Δ n})`).
pub fn cover_lambda(delta: usize) -> Result<f64, SolveError> {
    if delta < 2 {
        return Err(SolveError::Precondition(format!("Δ = {delta} below 2")));
    }
    let d = delta as f64;
    let lambda = (2.0 * d - 2.0) / libm::sqrt((2.0 * d - 1.0) * (2.0 * d - 1.0) - 2.0 * core::f64::consts::LN_2);
    debug_assert!(lambda <= 1.0 - 1.0 / (2.0 * d) + LOG2_TOLERANCE);
    Ok(lambda)
}

/// `log2(2^a + 2^b)` without overflow.
pub fn log2_sum(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log2(1.0 + libm::exp2(lo - hi))
}

/// Element count after the nTree reduction: `ñ + 9ñ/Δ`.
pub fn inflated_elements(ntilde: f64, delta: f64) -> f64 {
    ntilde + 9.0 * ntilde / delta
}

/// `log2(ñ^Δ + ñ^{ñ/Δ} · 2^{f(n, Δ)})` with `n = ñ + 9ñ/Δ`: the nTree
/// algorithm obtained from a Δ-Set Cover algorithm of running time `2^f`.
pub fn compose_runtime(ntilde: f64, delta: f64, f_exponent: &dyn Fn(f64, f64) -> f64) -> f64 {
    let lg = libm::log2(ntilde);
    let n = inflated_elements(ntilde, delta);
    log2_sum(delta * lg, ntilde / delta * lg + f_exponent(n, delta))
}

/// `Δ = 81/ε · log2 ñ`.
pub fn speedup_delta(ntilde: f64, epsilon: f64) -> f64 {
    81.0 / epsilon * libm::log2(ntilde)
}

/// Composed exponent when Δ-Set Cover takes `2^{(1−ε)n}` and Δ is chosen
/// as in [`speedup_delta`].
pub fn speedup_exponent(ntilde: f64, epsilon: f64) -> f64 {
    let delta = speedup_delta(ntilde, epsilon);
    compose_runtime(ntilde, delta, &|n, _| (1.0 - epsilon) * n)
}

/// `ñ − εñ/2 − exponent`; non-negative where the speed-up is realised.
pub fn speedup_slack(ntilde: f64, epsilon: f64) -> f64 {
    ntilde - epsilon * ntilde / 2.0 - speedup_exponent(ntilde, epsilon)
}

/// Smallest integer `ñ ≥ 2` from which the slack stays non-negative, found
/// by doubling until it turns and holds over further doublings, then
/// bisecting. `None` if no crossing below `2^60`.
pub fn speedup_threshold(epsilon: f64) -> Option<u64> {
    let ok = |x: u64| speedup_slack(x as f64, epsilon) >= 0.0;
    let mut hi = 2u64;
    while !(ok(hi) && (1..=8).all(|s| ok(hi << s))) {
        hi = hi.checked_mul(2)?;
        if hi > 1 << 60 {
            return None;
        }
    }
    let mut lo = hi / 2;
    if ok(lo) {
        // slack was already non-negative at the start of the scan
        lo = 1;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Exponent of the nTree algorithm in the regime `Δ = ñ^{1/2−δ'}` with a
/// Δ-Set Cover algorithm of exponent `(1 − (2+ε)·log2 Δ / Δ)·n`.
pub fn sqrt_regime_exponent(ntilde: f64, delta_prime: f64, epsilon: f64) -> f64 {
    let delta = libm::pow(ntilde, 0.5 - delta_prime);
    compose_runtime(ntilde, delta, &|n, d| (1.0 - (2.0 + epsilon) * libm::log2(d) / d) * n)
}

/// Whether [`sqrt_regime_exponent`] is below `ñ − c·√(ñ / log2 ñ)`.
pub fn sqrt_regime_beats(ntilde: f64, delta_prime: f64, epsilon: f64, c: f64) -> bool {
    sqrt_regime_exponent(ntilde, delta_prime, epsilon) < ntilde - c * libm::sqrt(ntilde / libm::log2(ntilde))
}

/// Declared versus realised size of one reduction batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub ntilde: usize,
    pub delta: usize,
    pub declared_count_log2: f64,
    pub realized_count: u64,
    pub declared_elements: f64,
    pub realized_max_elements: usize,
    /// `log2` of the composed running time with a `2^n` Set Cover solver.
    pub composed_runtime_log2: f64,
    pub count_within: bool,
    pub elements_within: bool,
}

impl BoundReport {
    pub fn new(ntilde: usize, delta: usize, declared: DeclaredBounds, realized: Realized) -> Self {
        let count_within =
            realized.produced == 0 || libm::log2(realized.produced as f64) <= declared.count_log2 + LOG2_TOLERANCE;
        BoundReport {
            ntilde,
            delta,
            declared_count_log2: declared.count_log2,
            realized_count: realized.produced,
            declared_elements: declared.elements,
            realized_max_elements: realized.max_elements,
            composed_runtime_log2: compose_runtime(ntilde as f64, delta as f64, &|n, _| n),
            count_within,
            elements_within: realized.max_elements as f64 <= declared.elements + LOG2_TOLERANCE,
        }
    }

    pub fn within(&self) -> bool {
        self.count_within && self.elements_within
    }
}
