//! Error metrics and closed-form bounds for randomized product formulas.
//!
//! The worst-case metric is the operator norm `||U - V||`; the fixed-input
//! metrics are `||(U - V) psi||_l2` and the pure-state trace distance. The
//! analytic side collects the qDRIFT bias bound `t^2 lambda^2 / N`, the
//! per-step bounds, matrix-Freedman tails (with the dimensional factor
//! `2d`), dimension-free vector tails for fixed inputs, sufficient gate
//! counts, and the four regime bounds for general products of random
//! unitaries.

use crate::error::{Error, Result};
use crate::formulas::{expected_step, realize_unitary, ProductFormulaPlan};
use crate::hamiltonian::Hamiltonian;
use crate::linalg::{
    expm_hermitian, operator_norm, pure_trace_distance, ComplexMatrix, StateVector,
};

/// Which distance a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum MetricKind {
    #[serde(rename = "operator-norm")]
    OperatorNorm,
    #[serde(rename = "fixed-input-l2")]
    FixedInputL2,
    #[serde(rename = "trace-distance")]
    TraceDistance,
    #[serde(rename = "diamond")]
    Diamond,
}

/// Split of a realized error into deterministic bias and random
/// fluctuation; `total <= bias + fluctuation` by the triangle inequality.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ErrorReport {
    pub bias: f64,
    pub fluctuation: f64,
    pub total: f64,
    pub metric: MetricKind,
}

/// Worst-case error `||U - V||`.
pub fn worst_case_error(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
            context: "worst_case_error",
        });
    }
    operator_norm(&u.sub(v))
}

/// Fixed-input deviation `||(U - V) psi||_l2`.
pub fn fixed_input_error(u: &ComplexMatrix, v: &ComplexMatrix, psi: &StateVector) -> Result<f64> {
    let norm_dev = (psi.norm() - 1.0).abs();
    if norm_dev > 1e-8 {
        return Err(Error::NotNormalized {
            deviation: norm_dev,
        });
    }
    Ok(u.apply(psi).sub(&v.apply(psi)).norm())
}

/// Fixed-input trace distance between the two output states; bounded above
/// by [`fixed_input_error`].
pub fn fixed_input_trace_distance(
    u: &ComplexMatrix,
    v: &ComplexMatrix,
    psi: &StateVector,
) -> Result<f64> {
    pure_trace_distance(&u.apply(psi), &v.apply(psi))
}

/// `(E V)^N`: the mean single step compounded over the whole schedule.
pub fn mean_product(hamiltonian: &Hamiltonian, t: f64, gate_count: u64) -> Result<ComplexMatrix> {
    Ok(expected_step(hamiltonian, t, gate_count)?.power(gate_count))
}

/// Decompose the realized error of a plan against `U = exp(-i t H)` into
/// `bias = ||(E V)^N - U||` and `fluctuation = ||V_plan - (E V)^N||`, where
/// `E V` is the expected qDRIFT step for the same (t, N).
pub fn error_decomposition(
    hamiltonian: &Hamiltonian,
    t: f64,
    gate_count: u64,
    plan: &ProductFormulaPlan,
) -> Result<ErrorReport> {
    let target = expm_hermitian(&hamiltonian.dense()?, t)?;
    let mean = mean_product(hamiltonian, t, gate_count)?;
    let realized = realize_unitary(plan, hamiltonian)?;
    let bias = operator_norm(&mean.sub(&target))?;
    let fluctuation = operator_norm(&realized.sub(&mean))?;
    let total = operator_norm(&realized.sub(&target))?;
    assert!(
        total <= bias + fluctuation + 1e-12,
        "triangle inequality violated: {total} > {bias} + {fluctuation}"
    );
    Ok(ErrorReport {
        bias,
        fluctuation,
        total,
        metric: MetricKind::OperatorNorm,
    })
}

/// Compounded bias bound `t^2 lambda^2 / N`.
pub fn bias_bound(t: f64, lambda: f64, gate_count: u64) -> f64 {
    (t * lambda).powi(2) / gate_count as f64
}

/// Per-step bias bound `||E V - U^{1/N}|| <= t^2 lambda^2 / N^2`.
pub fn step_bias_bound(t: f64, lambda: f64, gate_count: u64) -> f64 {
    (t * lambda / gate_count as f64).powi(2)
}

/// Almost-sure step radius `||V - E V|| <= 2 t lambda / N`.
pub fn step_radius_bound(t: f64, lambda: f64, gate_count: u64) -> f64 {
    2.0 * t * lambda / gate_count as f64
}

/// Matrix-Freedman tail for a product of N qDRIFT steps on n qubits:
/// bound on `Pr[||V_N ... V_1 - (E V)^N|| >= epsilon]`, the two-regime form
/// `2d exp(-N eps^2 / (8 (t lambda)^2 + 4 (t lambda) eps / 3))`.
pub fn freedman_tail(epsilon: f64, t: f64, lambda: f64, gate_count: u64, qubits: u32) -> f64 {
    let variance = 4.0 * (t * lambda).powi(2) / gate_count as f64;
    let radius = step_radius_bound(t, lambda, gate_count);
    general_freedman_tail(epsilon, variance, radius, 2f64.powi(qubits as i32))
}

/// Simplified single-regime tail with the 44 constant: bound on
/// `Pr[||V_N ... V_1 - (E V)^N|| >= epsilon / 2]`, stated for
/// `epsilon in [0, 4 t lambda]`. Note the epsilon/2 convention.
pub fn freedman_tail_simplified(
    epsilon: f64,
    t: f64,
    lambda: f64,
    gate_count: u64,
    qubits: u32,
) -> f64 {
    if epsilon <= 0.0 {
        return 1.0;
    }
    let d = 2f64.powi(qubits as i32);
    let exponent = gate_count as f64 * epsilon * epsilon / (44.0 * (t * lambda).powi(2));
    (2.0 * d * (-exponent).exp()).min(1.0)
}

/// Matrix-Freedman tail `min(1, 2d exp(-(tau^2/2)/(v + R tau / 3)))` for a
/// martingale with increment radius R and conditional variance v.
pub fn general_freedman_tail(tau: f64, variance: f64, radius: f64, dimension: f64) -> f64 {
    if tau <= 0.0 {
        return 1.0;
    }
    let denominator = variance + radius * tau / 3.0;
    if denominator <= 0.0 {
        // Zero variance and radius: the martingale cannot move.
        return 0.0;
    }
    let exponent = 0.5 * tau * tau / denominator;
    (2.0 * dimension * (-exponent).exp()).min(1.0)
}

/// Dimension-free tail on the fixed-input l2 fluctuation
/// `||(V_N ... V_1 - (E V)^N) psi||`: `exp(-eps^2 N / (8 e t^2 lambda^2))`.
/// The moment derivation behind it is valid for
/// `epsilon >= vector_tail_l2_valid_from(..)`; below that the curve is
/// vacuous, not a theorem.
pub fn vector_tail_l2(epsilon: f64, t: f64, lambda: f64, gate_count: u64) -> f64 {
    vector_tail(epsilon, t, lambda, gate_count, 8.0)
}

/// Dimension-free tail on the fixed-input half-trace-distance deviation:
/// `exp(-eps^2 N / (32 e t^2 lambda^2))`. Same epsilon -> epsilon/2
/// relation to [`vector_tail_l2`] (a factor 4 in the exponent), same
/// validity caveat.
pub fn vector_tail_trace(epsilon: f64, t: f64, lambda: f64, gate_count: u64) -> f64 {
    vector_tail(epsilon, t, lambda, gate_count, 32.0)
}

fn vector_tail(epsilon: f64, t: f64, lambda: f64, gate_count: u64, constant: f64) -> f64 {
    if epsilon <= 0.0 {
        return 1.0;
    }
    let scale = constant * std::f64::consts::E * (t * lambda).powi(2);
    if scale <= 0.0 {
        return 0.0;
    }
    (-(epsilon * epsilon * gate_count as f64) / scale)
        .exp()
        .min(1.0)
}

/// Smallest epsilon for which the l2 tail's moment argument applies
/// (the optimized moment order reaches q = 2).
pub fn vector_tail_l2_valid_from(t: f64, lambda: f64, gate_count: u64) -> f64 {
    t * lambda * (8.0 * std::f64::consts::E / gate_count as f64).sqrt()
}

/// Smallest epsilon for which the half-trace tail's moment argument applies.
pub fn vector_tail_trace_valid_from(t: f64, lambda: f64, gate_count: u64) -> f64 {
    t * lambda * (32.0 * std::f64::consts::E / gate_count as f64).sqrt()
}

/// Certified bound on the average-channel diamond error via the sharpened
/// mixing lemma: `1/2 ||U - E V||_diamond <= ||U - (E V)^N||`, computed
/// exactly at dense scale.
pub fn mixing_diamond_bound(hamiltonian: &Hamiltonian, t: f64, gate_count: u64) -> Result<f64> {
    let target = expm_hermitian(&hamiltonian.dense()?, t)?;
    let mean = mean_product(hamiltonian, t, gate_count)?;
    operator_norm(&target.sub(&mean))
}

/// Sufficient gate counts for accuracy epsilon at confidence 1 - delta.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct GateCounts {
    /// Worst case over all inputs: Freedman budget plus the bias budget.
    pub worst_case: u64,
    /// Fixed input state: from the dimension-free half-trace tail.
    pub fixed_input: u64,
    /// Average channel: bias alone.
    pub average: u64,
}

/// Concrete sufficient N for the three regimes, using the explicit
/// constants: worst case `ceil(44 t^2 l^2/eps^2 ln(2d/delta) + 2 t^2 l^2/eps)`,
/// fixed input `ceil(32 e t^2 l^2 ln(1/delta) / eps^2)` (at least `(t l)^2`),
/// average `ceil(2 t^2 l^2 / eps)`.
pub fn gate_counts(
    epsilon: f64,
    delta: f64,
    t: f64,
    lambda: f64,
    qubits: u32,
) -> Result<GateCounts> {
    for (name, value) in [("epsilon", epsilon), ("delta", delta)] {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::InvalidParameter {
                name: if name == "epsilon" {
                    "epsilon"
                } else {
                    "delta"
                },
                reason: format!("must lie in (0, 1), got {value}"),
            });
        }
    }
    let tl2 = (t * lambda).powi(2);
    let d = 2f64.powi(qubits as i32);
    let worst = 44.0 * tl2 / (epsilon * epsilon) * (2.0 * d / delta).ln() + 2.0 * tl2 / epsilon;
    let fixed =
        (32.0 * std::f64::consts::E * tl2 * (1.0 / delta).ln() / (epsilon * epsilon)).max(tl2);
    let average = 2.0 * tl2 / epsilon;
    Ok(GateCounts {
        worst_case: worst.ceil() as u64,
        fixed_input: fixed.ceil() as u64,
        average: average.ceil() as u64,
    })
}

/// Step-size parameters for a general causal product of random unitaries:
/// per-step deviation `||V_k - U_k|| <= a`, conditional bias
/// `||E_{k-1} V_k - U_k|| <= b`, almost-sure increment radius `R`, and
/// conditional variance `v`, over `steps` factors on `qubits` qubits.
#[derive(Debug, Clone, Copy)]
pub struct BoundParams {
    pub a: f64,
    pub b: f64,
    pub radius: f64,
    pub variance: f64,
    pub steps: u64,
    pub qubits: u32,
}

impl BoundParams {
    /// Uniform parameters with the generic derivations `R = 2a`, `v = N R^2`.
    pub fn uniform(a: f64, b: f64, steps: u64, qubits: u32) -> Self {
        let radius = 2.0 * a;
        Self {
            a,
            b,
            radius,
            variance: steps as f64 * radius * radius,
            steps,
            qubits,
        }
    }

    /// qDRIFT instantiation: `a = 2 t lambda / N`, `b = t^2 lambda^2 / N^2`.
    pub fn qdrift(t: f64, lambda: f64, steps: u64, qubits: u32) -> Self {
        let a = 2.0 * t * lambda / steps as f64;
        let b = (t * lambda / steps as f64).powi(2);
        Self {
            a,
            b,
            radius: a,
            variance: steps as f64 * a * a,
            steps,
            qubits,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("a", self.a),
            ("b", self.b),
            ("radius", self.radius),
            ("variance", self.variance),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "bound-params",
                    reason: format!("{name} must be finite and >= 0, got {value}"),
                });
            }
        }
        if self.radius > 2.0 * self.a + 1e-12 {
            return Err(Error::InvalidParameter {
                name: "bound-params",
                reason: format!(
                    "increment radius {} exceeds 2a = {}",
                    self.radius,
                    2.0 * self.a
                ),
            });
        }
        Ok(())
    }
}

/// The four error regimes for a causal small-step product of N random
/// unitaries against a target product.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct RegimeBounds {
    /// Deterministic worst case `2 sum a_k`.
    pub worst: f64,
    /// Expected diamond error `prefactor * sqrt(n sum a_k^2) + 2 sum b_k`.
    pub typical: f64,
    /// Expected fixed-input error `prefactor * sqrt(sum a_k^2) + 2 sum b_k`.
    pub fixed: f64,
    /// Average channel `2 sum b_k`.
    pub average: f64,
}

/// Regime bounds with uniform per-step parameters. The typical and fixed
/// bounds carry a suppressed absolute constant; `prefactor` makes it
/// explicit (default choice 1).
pub fn random_product_error_bounds(params: &BoundParams, prefactor: f64) -> Result<RegimeBounds> {
    params.validate()?;
    let n_steps = params.steps as f64;
    let sum_a = n_steps * params.a;
    let sum_a_sq = n_steps * params.a * params.a;
    let sum_b = n_steps * params.b;
    Ok(RegimeBounds {
        worst: 2.0 * sum_a,
        typical: prefactor * (f64::from(params.qubits) * sum_a_sq).sqrt() + 2.0 * sum_b,
        fixed: prefactor * sum_a_sq.sqrt() + 2.0 * sum_b,
        average: 2.0 * sum_b,
    })
}

/// Explicit decomposition of the expected qDRIFT diamond error:
/// `t^2 l^2/N + C n t l / N + C sqrt(n t^2 l^2 / N)`. The constant C is
/// not pinned by theory; callers choose it.
pub fn expected_diamond_error_bound(
    t: f64,
    lambda: f64,
    qubits: u32,
    gate_count: u64,
    c: f64,
) -> f64 {
    let n = gate_count as f64;
    let tl = t * lambda;
    tl * tl / n + c * f64::from(qubits) * tl / n + c * (f64::from(qubits) * tl * tl / n).sqrt()
}
