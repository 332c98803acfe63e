//! Product-formula plan construction and realization.
//!
//! A plan is an ordered list of `(term index, duration)` steps applied
//! left-to-right: `steps[0]` acts on the state first, so realizing a plan
//! computes `V_N ... V_1` with `V_1 = steps[0]`. Each step carries a flag
//! selecting its generator:
//!
//! * `rescaled` — the importance-sampled generator `X_j = (lambda/||h_j||) h_j`
//!   used by qDRIFT (Campbell, PRL 123, 070503): the step is
//!   `exp(-i s X_j)`, which for a Pauli term `c P` is
//!   `exp(-i s lambda sign(c) P)`.
//! * `raw` — the bare term: `exp(-i s h_j)`, used by the deterministic
//!   Trotter and Suzuki splittings.
//!
//! Realization is available as a dense matrix product (n <= 12) or as a
//! term-by-term statevector sweep in O(N d) that never forms a matrix.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{
    Hamiltonian, PauliString, TermOperator, DENSE_QUBIT_CAP, STATE_QUBIT_CAP,
};
use crate::linalg::{expm_hermitian, ComplexMatrix, StateVector};

/// Deterministic, platform-independent generator (ChaCha8), addressed by
/// a 64-bit seed and a 64-bit stream counter. Identical (seed, stream)
/// pairs reproduce identical draws everywhere.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    /// Derive an independent stream from the master seed and a list of
    /// context parts (experiment salt, grid position, repetition index).
    pub fn derive(seed: u64, parts: &[u64]) -> Self {
        let mut stream = 0x243f6a8885a308d3u64; // pi digits, arbitrary nonzero
        for part in parts {
            stream = splitmix64(stream ^ part.wrapping_mul(0x9e3779b97f4a7c15));
        }
        Self::with_stream(seed, stream)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Inverse-CDF categorical draw over a probability vector; boundary
    /// ties resolve toward the lower index.
    pub fn categorical(&mut self, probabilities: &[f64]) -> usize {
        let u = self.uniform();
        let mut cumulative = 0.0;
        for (j, p) in probabilities.iter().enumerate() {
            cumulative += p;
            if u <= cumulative {
                return j;
            }
        }
        probabilities.len() - 1
    }

    /// Same draw against a precomputed cumulative distribution (binary
    /// search); picks the first index whose cumulative weight reaches u.
    pub fn categorical_cdf(&mut self, cdf: &[f64]) -> usize {
        let u = self.uniform();
        cdf.partition_point(|c| *c < u).min(cdf.len() - 1)
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = (self.inner.gen::<u64>() % (i as u64 + 1)) as usize;
            items.swap(i, j);
        }
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// One product-formula step: evolve term `term` for `duration`, using the
/// rescaled generator when `rescaled` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanStep {
    pub term: usize,
    pub duration: f64,
    pub rescaled: bool,
}

/// Provenance carried by a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanMeta {
    pub method: String,
    pub t: f64,
    pub seed: u64,
    pub hamiltonian_fingerprint: u64,
}

/// Ordered product formula; `steps[0]` is applied first.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductFormulaPlan {
    pub steps: Vec<PlanStep>,
    pub meta: PlanMeta,
}

impl ProductFormulaPlan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Distinct term indices referenced by the plan.
    pub fn touched_terms(&self) -> Vec<usize> {
        let mut seen: Vec<usize> = self.steps.iter().map(|s| s.term).collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    }

    /// Wire format: `{"method", "t", "seed", "steps"}`.
    pub fn to_json(&self) -> Result<String> {
        let wire = WirePlan {
            method: self.meta.method.clone(),
            t: self.meta.t,
            seed: self.meta.seed,
            steps: self.steps.clone(),
        };
        Ok(serde_json::to_string_pretty(&wire)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: WirePlan = serde_json::from_str(text)?;
        Ok(Self {
            steps: wire.steps,
            meta: PlanMeta {
                method: wire.method,
                t: wire.t,
                seed: wire.seed,
                hamiltonian_fingerprint: 0,
            },
        })
    }
}

#[derive(Serialize, Deserialize)]
struct WirePlan {
    method: String,
    t: f64,
    seed: u64,
    steps: Vec<PlanStep>,
}

/// qDRIFT sampling: N i.i.d. draws from `p_j = ||h_j||/lambda`, each a
/// rescaled step of duration t/N.
pub fn qdrift_sample(
    hamiltonian: &Hamiltonian,
    t: f64,
    gate_count: u64,
    rng: &mut SeededRng,
) -> Result<ProductFormulaPlan> {
    validate_time(t)?;
    if gate_count == 0 {
        return Err(Error::InvalidParameter {
            name: "gates",
            reason: "qDRIFT needs at least one step".into(),
        });
    }
    let duration = t / gate_count as f64;
    let mut cumulative = 0.0;
    let cdf: Vec<f64> = hamiltonian
        .probabilities()
        .iter()
        .map(|p| {
            cumulative += p;
            cumulative
        })
        .collect();
    let steps = (0..gate_count)
        .map(|_| PlanStep {
            term: rng.categorical_cdf(&cdf),
            duration,
            rescaled: true,
        })
        .collect();
    Ok(ProductFormulaPlan {
        steps,
        meta: PlanMeta {
            method: "qdrift".into(),
            t,
            seed: rng.seed(),
            hamiltonian_fingerprint: hamiltonian.fingerprint(),
        },
    })
}

/// First-order Lie-Trotter plan: N/L cycles, each applying every term in
/// index order as a raw step of duration tL/N.
pub fn first_order_plan(
    hamiltonian: &Hamiltonian,
    t: f64,
    gate_count: u64,
) -> Result<ProductFormulaPlan> {
    validate_time(t)?;
    let l = hamiltonian.len();
    if gate_count == 0 || !gate_count.is_multiple_of(l as u64) {
        return Err(Error::NotMultipleOfTerms { n: gate_count, l });
    }
    let cycles = gate_count / l as u64;
    let duration = t * l as f64 / gate_count as f64;
    let mut steps = Vec::with_capacity(gate_count as usize);
    for _ in 0..cycles {
        for term in 0..l {
            steps.push(PlanStep {
                term,
                duration,
                rescaled: false,
            });
        }
    }
    Ok(ProductFormulaPlan {
        steps,
        meta: PlanMeta {
            method: "first-order".into(),
            t,
            seed: 0,
            hamiltonian_fingerprint: hamiltonian.fingerprint(),
        },
    })
}

/// Second-order symmetric splitting S_2(tau): forward half-steps then the
/// same half-steps reversed (2L raw steps, a palindrome).
pub fn suzuki2_plan(hamiltonian: &Hamiltonian, tau: f64) -> ProductFormulaPlan {
    let mut steps = Vec::with_capacity(2 * hamiltonian.len());
    push_suzuki(&mut steps, hamiltonian.len(), tau, 1);
    ProductFormulaPlan {
        steps,
        meta: PlanMeta {
            method: "suzuki2".into(),
            t: tau,
            seed: 0,
            hamiltonian_fingerprint: hamiltonian.fingerprint(),
        },
    }
}

/// Suzuki splitting coefficient `q_p = 1/(4 - 4^{1/(2p-1)})`.
pub fn suzuki_q(p: u32) -> f64 {
    1.0 / (4.0 - 4f64.powf(1.0 / (2.0 * f64::from(p) - 1.0)))
}

/// Order-2p Suzuki plan via the recursion
/// `S_2p(tau) = S_{2p-2}(q_p tau)^2 S_{2p-2}((1-4 q_p) tau) S_{2p-2}(q_p tau)^2`;
/// 2 L 5^{p-1} raw steps, signed durations summing to tau per term.
pub fn suzuki2p_plan(hamiltonian: &Hamiltonian, tau: f64, p: u32) -> Result<ProductFormulaPlan> {
    if p == 0 {
        return Err(Error::InvalidParameter {
            name: "order",
            reason: "Suzuki order parameter p must be >= 1".into(),
        });
    }
    let mut steps = Vec::with_capacity(2 * hamiltonian.len() * 5usize.pow(p - 1));
    push_suzuki(&mut steps, hamiltonian.len(), tau, p);
    Ok(ProductFormulaPlan {
        steps,
        meta: PlanMeta {
            method: format!("suzuki2p(p={p})"),
            t: tau,
            seed: 0,
            hamiltonian_fingerprint: hamiltonian.fingerprint(),
        },
    })
}

fn push_suzuki(steps: &mut Vec<PlanStep>, l: usize, tau: f64, p: u32) {
    if p == 1 {
        let half = tau / 2.0;
        for term in 0..l {
            steps.push(PlanStep {
                term,
                duration: half,
                rescaled: false,
            });
        }
        for term in (0..l).rev() {
            steps.push(PlanStep {
                term,
                duration: half,
                rescaled: false,
            });
        }
        return;
    }
    let q = suzuki_q(p);
    // The middle segment duration (1 - 4 q_p) tau is negative for p >= 2;
    // kept signed, never merged.
    for _ in 0..2 {
        push_suzuki(steps, l, q * tau, p - 1);
    }
    push_suzuki(steps, l, (1.0 - 4.0 * q) * tau, p - 1);
    for _ in 0..2 {
        push_suzuki(steps, l, q * tau, p - 1);
    }
}

/// Deterministic full evolution by r repeated Suzuki blocks:
/// `S_2p(t/r)^r`.
pub fn suzuki_product_plan(
    hamiltonian: &Hamiltonian,
    t: f64,
    blocks: u64,
    p: u32,
) -> Result<ProductFormulaPlan> {
    validate_time(t)?;
    if blocks == 0 {
        return Err(Error::InvalidParameter {
            name: "blocks",
            reason: "need at least one Suzuki block".into(),
        });
    }
    let base = suzuki2p_plan(hamiltonian, t / blocks as f64, p)?;
    let mut steps = Vec::with_capacity(base.len() * blocks as usize);
    for _ in 0..blocks {
        steps.extend_from_slice(&base.steps);
    }
    Ok(ProductFormulaPlan {
        steps,
        meta: PlanMeta {
            method: format!("suzuki2p(p={p},r={blocks})"),
            t,
            seed: 0,
            hamiltonian_fingerprint: hamiltonian.fingerprint(),
        },
    })
}

/// Randomly permuted Suzuki: r blocks of S_2p(t/r), each with an
/// independent uniform permutation applied to the term indices.
pub fn permuted_suzuki_plan(
    hamiltonian: &Hamiltonian,
    t: f64,
    blocks: u64,
    p: u32,
    rng: &mut SeededRng,
) -> Result<ProductFormulaPlan> {
    validate_time(t)?;
    if blocks == 0 {
        return Err(Error::InvalidParameter {
            name: "blocks",
            reason: "need at least one Suzuki block".into(),
        });
    }
    let l = hamiltonian.len();
    let base = suzuki2p_plan(hamiltonian, t / blocks as f64, p)?;
    let mut steps = Vec::with_capacity(base.len() * blocks as usize);
    let mut permutation: Vec<usize> = (0..l).collect();
    for _ in 0..blocks {
        for (i, slot) in permutation.iter_mut().enumerate() {
            *slot = i;
        }
        rng.shuffle(&mut permutation);
        for step in &base.steps {
            steps.push(PlanStep {
                term: permutation[step.term],
                ..*step
            });
        }
    }
    Ok(ProductFormulaPlan {
        steps,
        meta: PlanMeta {
            method: format!("permuted-suzuki(p={p},r={blocks})"),
            t,
            seed: rng.seed(),
            hamiltonian_fingerprint: hamiltonian.fingerprint(),
        },
    })
}

fn validate_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("evolution time must be finite and >= 0, got {t}"),
        });
    }
    Ok(())
}

/// Rotation angle realized by a step on a Pauli term: the step unitary is
/// `exp(-i angle P)`.
fn pauli_step_angle(step: &PlanStep, hamiltonian: &Hamiltonian) -> f64 {
    let coefficient = hamiltonian.term(step.term).coefficient;
    if step.rescaled {
        step.duration * hamiltonian.lambda() * coefficient.signum()
    } else {
        step.duration * coefficient
    }
}

/// `exp(-i theta M)` rotation parameters for a dense term.
fn dense_step_theta(step: &PlanStep, hamiltonian: &Hamiltonian) -> f64 {
    let coefficient = hamiltonian.term(step.term).coefficient;
    if step.rescaled {
        step.duration * hamiltonian.lambda() * coefficient.signum()
            / hamiltonian.bare_operator_norm(step.term)
    } else {
        step.duration * coefficient
    }
}

/// Pauli action on a basis index: `P|b> = phase(b) |b XOR flip>` with
/// `phase(b) = i^{#Y} (-1)^{popcount(b & sign_mask)}`.
#[derive(Debug, Clone, Copy)]
struct PauliAction {
    flip: usize,
    sign_mask: usize,
    y_phase: Complex64,
}

impl PauliAction {
    fn of(string: &PauliString) -> Self {
        let quarter_turns = string.count_y() % 4;
        let y_phase = match quarter_turns {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        Self {
            flip: string.flip_mask(),
            sign_mask: string.sign_mask(),
            y_phase,
        }
    }

    #[inline]
    fn phase(&self, index: usize) -> Complex64 {
        if (index & self.sign_mask).count_ones().is_multiple_of(2) {
            self.y_phase
        } else {
            -self.y_phase
        }
    }
}

/// In-place `psi <- exp(-i angle P) psi = cos(angle) psi - i sin(angle) P psi`.
fn rotate_state(amplitudes: &mut [Complex64], action: &PauliAction, angle: f64) {
    let (sin, cos) = angle.sin_cos();
    let factor = Complex64::new(0.0, -sin);
    if action.flip == 0 {
        for (index, amp) in amplitudes.iter_mut().enumerate() {
            *amp *= cos + factor * action.phase(index);
        }
        return;
    }
    for index in 0..amplitudes.len() {
        let partner = index ^ action.flip;
        if partner < index {
            continue;
        }
        let a = amplitudes[index];
        let b = amplitudes[partner];
        amplitudes[index] = a * cos + factor * action.phase(partner) * b;
        amplitudes[partner] = b * cos + factor * action.phase(index) * a;
    }
}

/// In-place `M <- exp(-i angle P) M`, one row-pair rotation per column block.
fn rotate_matrix(matrix: &mut ComplexMatrix, action: &PauliAction, angle: f64) {
    let d = matrix.dim();
    let (sin, cos) = angle.sin_cos();
    let factor = Complex64::new(0.0, -sin);
    if action.flip == 0 {
        for row in 0..d {
            let scale = cos + factor * action.phase(row);
            for value in &mut matrix.entries_mut()[row * d..(row + 1) * d] {
                *value *= scale;
            }
        }
        return;
    }
    for row in 0..d {
        let partner = row ^ action.flip;
        if partner < row {
            continue;
        }
        let phase_partner = factor * action.phase(partner);
        let phase_row = factor * action.phase(row);
        let (head, tail) = matrix.entries_mut().split_at_mut(partner * d);
        let row_slice = &mut head[row * d..(row + 1) * d];
        let partner_slice = &mut tail[..d];
        for (a, b) in row_slice.iter_mut().zip(partner_slice.iter_mut()) {
            let (va, vb) = (*a, *b);
            *a = va * cos + phase_partner * vb;
            *b = vb * cos + phase_row * va;
        }
    }
}

/// Dense realization `V_N ... V_1` of a plan (n <= 12). Pauli steps use the
/// closed form `exp(-i theta P) = cos(theta) I - i sin(theta) P` applied in
/// O(d^2); dense terms go through the eigendecomposition.
pub fn realize_unitary(
    plan: &ProductFormulaPlan,
    hamiltonian: &Hamiltonian,
) -> Result<ComplexMatrix> {
    if hamiltonian.n() > DENSE_QUBIT_CAP {
        return Err(Error::DenseCap {
            n: hamiltonian.n(),
            cap: DENSE_QUBIT_CAP,
        });
    }
    let d = 1usize << hamiltonian.n();
    let mut matrix = ComplexMatrix::identity(d);
    for step in &plan.steps {
        match &hamiltonian.term(step.term).operator {
            TermOperator::Pauli(string) => {
                let action = PauliAction::of(string);
                rotate_matrix(&mut matrix, &action, pauli_step_angle(step, hamiltonian));
            }
            TermOperator::Dense(block) => {
                let unitary = expm_hermitian(block, dense_step_theta(step, hamiltonian))?;
                matrix = unitary.matmul(&matrix);
            }
        }
    }
    Ok(matrix)
}

/// Apply a plan to a state in O(N d) per Pauli step without forming any
/// matrix; dense-term steps fall back to a matrix-vector product.
pub fn apply_plan(
    plan: &ProductFormulaPlan,
    hamiltonian: &Hamiltonian,
    state: &StateVector,
) -> Result<StateVector> {
    if hamiltonian.n() > STATE_QUBIT_CAP {
        return Err(Error::StateCap {
            n: hamiltonian.n(),
            cap: STATE_QUBIT_CAP,
        });
    }
    let d = 1usize << hamiltonian.n();
    if state.dim() != d {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: d,
            context: "apply_plan",
        });
    }
    let mut out = state.clone();
    for step in &plan.steps {
        match &hamiltonian.term(step.term).operator {
            TermOperator::Pauli(string) => {
                let action = PauliAction::of(string);
                rotate_state(
                    out.amplitudes_mut(),
                    &action,
                    pauli_step_angle(step, hamiltonian),
                );
            }
            TermOperator::Dense(block) => {
                let unitary = expm_hermitian(block, dense_step_theta(step, hamiltonian))?;
                out = unitary.apply(&out);
            }
        }
    }
    Ok(out)
}

/// Expected qDRIFT step `E V = sum_j p_j exp(-i (t/N) X_j)`; a convex
/// combination of unitaries, not itself unitary.
pub fn expected_step(hamiltonian: &Hamiltonian, t: f64, gate_count: u64) -> Result<ComplexMatrix> {
    if hamiltonian.n() > DENSE_QUBIT_CAP {
        return Err(Error::DenseCap {
            n: hamiltonian.n(),
            cap: DENSE_QUBIT_CAP,
        });
    }
    if gate_count == 0 {
        return Err(Error::InvalidParameter {
            name: "gates",
            reason: "expected step needs N >= 1".into(),
        });
    }
    let d = 1usize << hamiltonian.n();
    let duration = t / gate_count as f64;
    let mut out = ComplexMatrix::zeros(d);
    for (j, probability) in hamiltonian.probabilities().iter().enumerate() {
        let step = PlanStep {
            term: j,
            duration,
            rescaled: true,
        };
        let unitary = match &hamiltonian.term(j).operator {
            TermOperator::Pauli(string) => {
                let mut m = ComplexMatrix::identity(d);
                rotate_matrix(
                    &mut m,
                    &PauliAction::of(string),
                    pauli_step_angle(&step, hamiltonian),
                );
                m
            }
            TermOperator::Dense(block) => {
                expm_hermitian(block, dense_step_theta(&step, hamiltonian))?
            }
        };
        out = out.add(&unitary.scale(Complex64::new(*probability, 0.0)));
    }
    Ok(out)
}

/// One realizable qDRIFT step unitary `V_j = exp(-i (t/N) X_j)`.
pub fn step_unitary(
    hamiltonian: &Hamiltonian,
    t: f64,
    gate_count: u64,
    term: usize,
) -> Result<ComplexMatrix> {
    let d = 1usize << hamiltonian.n();
    let step = PlanStep {
        term,
        duration: t / gate_count as f64,
        rescaled: true,
    };
    match &hamiltonian.term(term).operator {
        TermOperator::Pauli(string) => {
            let mut m = ComplexMatrix::identity(d);
            rotate_matrix(
                &mut m,
                &PauliAction::of(string),
                pauli_step_angle(&step, hamiltonian),
            );
            Ok(m)
        }
        TermOperator::Dense(block) => expm_hermitian(block, dense_step_theta(&step, hamiltonian)),
    }
}

/// Unnormalized fast Walsh-Hadamard transform:
/// `out[y] = sum_x (-1)^{<x,y>} data[x]`. Length must be a power of two.
pub fn fwht(data: &mut [f64]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "FWHT length must be a power of two");
    let mut width = 1;
    while width < n {
        for block in (0..n).step_by(width * 2) {
            for i in block..block + width {
                let (a, b) = (data[i], data[i + width]);
                data[i] = a + b;
                data[i + width] = a - b;
            }
        }
        width *= 2;
    }
}

/// Exact phase profile of the target evolution of a diagonal Hamiltonian:
/// `exp(-i t H)|b> = exp(-i phases[b]) |b>`.
pub fn target_diagonal_phases(hamiltonian: &Hamiltonian, t: f64) -> Result<Vec<f64>> {
    diagonal_phase_profile(hamiltonian, |term, coefficients| {
        coefficients[term.0] += t * term.1;
    })
}

/// Accumulated phase profile of a plan over a diagonal Hamiltonian:
/// `V_N ... V_1 |b> = exp(-i phases[b]) |b>`.
pub fn plan_diagonal_phases(
    plan: &ProductFormulaPlan,
    hamiltonian: &Hamiltonian,
) -> Result<Vec<f64>> {
    ensure_diagonal(hamiltonian)?;
    let d = 1usize << hamiltonian.n();
    let mut weights = vec![0.0f64; d];
    for step in &plan.steps {
        let TermOperator::Pauli(string) = &hamiltonian.term(step.term).operator else {
            return Err(Error::NotDiagonal);
        };
        let angle = pauli_step_angle(step, hamiltonian);
        weights[string.sign_mask()] += angle;
    }
    fwht(&mut weights);
    Ok(weights)
}

/// Operator-norm distance between two diagonal unitaries given their phase
/// profiles: `max_b |e^{-i a_b} - e^{-i b_b}|`.
pub fn phase_operator_distance(lhs: &[f64], rhs: &[f64]) -> f64 {
    assert_eq!(lhs.len(), rhs.len(), "phase profiles must match");
    lhs.iter()
        .zip(rhs.iter())
        .map(|(a, b)| 2.0 * (0.5 * (a - b)).sin().abs())
        .fold(0.0, f64::max)
}

fn ensure_diagonal(hamiltonian: &Hamiltonian) -> Result<()> {
    if !hamiltonian.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    if hamiltonian.n() > STATE_QUBIT_CAP {
        return Err(Error::StateCap {
            n: hamiltonian.n(),
            cap: STATE_QUBIT_CAP,
        });
    }
    Ok(())
}

fn diagonal_phase_profile(
    hamiltonian: &Hamiltonian,
    accumulate: impl Fn((usize, f64), &mut [f64]),
) -> Result<Vec<f64>> {
    ensure_diagonal(hamiltonian)?;
    let d = 1usize << hamiltonian.n();
    let mut weights = vec![0.0f64; d];
    for term in hamiltonian.terms() {
        let TermOperator::Pauli(string) = &term.operator else {
            return Err(Error::NotDiagonal);
        };
        accumulate((string.sign_mask(), term.coefficient), &mut weights);
    }
    fwht(&mut weights);
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::HamiltonianTerm;
    use crate::linalg::operator_norm;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual}"
        );
    }

    fn single_term() -> Hamiltonian {
        Hamiltonian::new(
            1,
            vec![HamiltonianTerm::pauli(
                0.8,
                PauliString::parse("X").unwrap(),
            )],
        )
        .unwrap()
    }

    #[test]
    fn seeded_rng_reproduces() {
        let mut a = SeededRng::with_stream(42, 7);
        let mut b = SeededRng::with_stream(42, 7);
        for _ in 0..32 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = SeededRng::with_stream(42, 8);
        assert_ne!(a.next_u64(), c.next_u64());
    }

    #[test]
    fn qdrift_single_term_is_exact() {
        let h = single_term();
        let mut rng = SeededRng::new(1);
        let plan = qdrift_sample(&h, 1.7, 23, &mut rng).unwrap();
        assert!(plan.steps.iter().all(|s| s.term == 0));
        let realized = realize_unitary(&plan, &h).unwrap();
        let target = expm_hermitian(&h.dense().unwrap(), 1.7).unwrap();
        assert!(realized.sub(&target).max_abs_entry() < 1e-10);
    }

    #[test]
    fn qdrift_zero_time_realizes_identity() {
        let h = Hamiltonian::heisenberg_1d(3).unwrap();
        let mut rng = SeededRng::new(5);
        let plan = qdrift_sample(&h, 0.0, 40, &mut rng).unwrap();
        let realized = realize_unitary(&plan, &h).unwrap();
        assert!(realized.sub(&ComplexMatrix::identity(8)).max_abs_entry() < 1e-12);
    }

    #[test]
    fn qdrift_step_durations_and_count() {
        let h = Hamiltonian::heisenberg_1d(4).unwrap();
        let mut rng = SeededRng::new(3);
        let plan = qdrift_sample(&h, 2.0, 160, &mut rng).unwrap();
        assert_eq!(plan.len(), 160);
        for step in &plan.steps {
            assert_close(step.duration, 2.0 / 160.0, 0.0);
            assert!(step.rescaled);
        }
    }

    #[test]
    fn qdrift_frequencies_within_multinomial_bands() {
        // Heisenberg n=4 has 9 equal-weight terms: expect N/9 selections
        // each, within 3 sigma of the multinomial marginal.
        let h = Hamiltonian::heisenberg_1d(4).unwrap();
        let mut rng = SeededRng::new(0);
        let n_draws = 10_000u64;
        let plan = qdrift_sample(&h, 1.0, n_draws, &mut rng).unwrap();
        let mut counts = vec![0usize; h.len()];
        for step in &plan.steps {
            counts[step.term] += 1;
        }
        let p = 1.0 / 9.0;
        let mean = n_draws as f64 * p;
        let sigma = (n_draws as f64 * p * (1.0 - p)).sqrt();
        for count in counts {
            assert!(
                (count as f64 - mean).abs() <= 3.0 * sigma,
                "count {count} outside 3-sigma band around {mean}"
            );
        }
    }

    #[test]
    fn first_order_requires_multiple_of_terms() {
        let h = Hamiltonian::heisenberg_1d(2).unwrap();
        assert!(matches!(
            first_order_plan(&h, 1.0, 4),
            Err(Error::NotMultipleOfTerms { .. })
        ));
    }

    #[test]
    fn first_order_single_term_exact() {
        let h = single_term();
        let plan = first_order_plan(&h, 0.9, 5).unwrap();
        let realized = realize_unitary(&plan, &h).unwrap();
        let target = expm_hermitian(&h.dense().unwrap(), 0.9).unwrap();
        assert!(realized.sub(&target).max_abs_entry() < 1e-10);
    }

    #[test]
    fn first_order_exact_on_commuting_terms() {
        let signs = vec![1i8, -1, 1, -1, -1, 1, 1, -1];
        let h = Hamiltonian::all_z_strings(3, &signs, 1.0).unwrap();
        let target = expm_hermitian(&h.dense().unwrap(), 0.7).unwrap();
        for cycles in [1u64, 2, 5] {
            let plan = first_order_plan(&h, 0.7, cycles * h.len() as u64).unwrap();
            let realized = realize_unitary(&plan, &h).unwrap();
            assert!(operator_norm(&realized.sub(&target)).unwrap() < 1e-9);
        }
    }

    #[test]
    fn first_order_error_scales_inversely_with_gates() {
        // Needs a chain with noncommuting terms, so n = 3 (at n = 2 the
        // three Heisenberg terms commute and every splitting is exact).
        let h = Hamiltonian::heisenberg_1d(3).unwrap();
        let target = expm_hermitian(&h.dense().unwrap(), 1.0).unwrap();
        let error_at = |gates: u64| {
            let plan = first_order_plan(&h, 1.0, gates).unwrap();
            let realized = realize_unitary(&plan, &h).unwrap();
            operator_norm(&realized.sub(&target)).unwrap()
        };
        let ratio = error_at(6) / error_at(60);
        assert!(
            (8.0..=12.0).contains(&ratio),
            "first-order error ratio {ratio} outside [8, 12]"
        );
    }

    #[test]
    fn two_site_heisenberg_terms_commute_so_splitting_is_exact() {
        let h = Hamiltonian::heisenberg_1d(2).unwrap();
        let target = expm_hermitian(&h.dense().unwrap(), 0.7).unwrap();
        let plan = first_order_plan(&h, 0.7, 3).unwrap();
        let realized = realize_unitary(&plan, &h).unwrap();
        assert!(operator_norm(&realized.sub(&target)).unwrap() < 1e-12);
    }

    #[test]
    fn suzuki2_palindrome_and_durations() {
        let h = Hamiltonian::heisenberg_1d(3).unwrap();
        let plan = suzuki2_plan(&h, 0.3);
        assert_eq!(plan.len(), 2 * h.len());
        let forward: Vec<usize> = plan.steps.iter().map(|s| s.term).collect();
        let mut reversed = forward.clone();
        reversed.reverse();
        assert_eq!(forward, reversed);
        let mut per_term = vec![0.0f64; h.len()];
        for step in &plan.steps {
            per_term[step.term] += step.duration;
        }
        for total in per_term {
            assert_close(total, 0.3, 1e-12);
        }
    }

    #[test]
    fn suzuki2_single_term_exact() {
        let h = single_term();
        let plan = suzuki2_plan(&h, 0.45);
        let realized = realize_unitary(&plan, &h).unwrap();
        let target = expm_hermitian(&h.dense().unwrap(), 0.45).unwrap();
        assert!(realized.sub(&target).max_abs_entry() < 1e-10);
    }

    #[test]
    fn suzuki2_is_third_order_locally() {
        let h = Hamiltonian::heisenberg_1d(3).unwrap();
        let dense = h.dense().unwrap();
        let error_at = |tau: f64| {
            let plan = suzuki2_plan(&h, tau);
            let realized = realize_unitary(&plan, &h).unwrap();
            let target = expm_hermitian(&dense, tau).unwrap();
            operator_norm(&realized.sub(&target)).unwrap()
        };
        // Halving tau should shrink a third-order local error by ~8.
        let ratio = error_at(0.1) / error_at(0.05);
        assert!(ratio > 6.0, "local error ratio {ratio} too small for S2");
    }

    #[test]
    fn suzuki_q2_value() {
        assert_close(suzuki_q(2), 0.4144907717943757, 1e-12);
    }

    #[test]
    fn suzuki2p_reduces_to_suzuki2_at_p1() {
        let h = Hamiltonian::heisenberg_1d(3).unwrap();
        let base = suzuki2_plan(&h, 0.2);
        let general = suzuki2p_plan(&h, 0.2, 1).unwrap();
        assert_eq!(base.steps, general.steps);
    }

    #[test]
    fn suzuki2p_step_count_and_duration_sums() {
        let h = Hamiltonian::heisenberg_1d(2).unwrap();
        let plan = suzuki2p_plan(&h, 0.8, 2).unwrap();
        assert_eq!(plan.len(), 2 * h.len() * 5);
        let mut per_term = vec![0.0f64; h.len()];
        let mut saw_negative = false;
        for step in &plan.steps {
            per_term[step.term] += step.duration;
            saw_negative |= step.duration < 0.0;
        }
        assert!(
            saw_negative,
            "p = 2 recursion must contain negative segments"
        );
        for total in per_term {
            assert_close(total, 0.8, 1e-12);
        }
    }

    #[test]
    fn permuted_suzuki_single_term_matches_deterministic() {
        let h = single_term();
        let mut rng = SeededRng::new(11);
        let permuted = permuted_suzuki_plan(&h, 0.6, 3, 1, &mut rng).unwrap();
        let realized = realize_unitary(&permuted, &h).unwrap();
        let target = expm_hermitian(&h.dense().unwrap(), 0.6).unwrap();
        assert!(realized.sub(&target).max_abs_entry() < 1e-10);
    }

    #[test]
    fn permuted_suzuki_preserves_multiset_and_varies_order() {
        let h = Hamiltonian::heisenberg_1d(4).unwrap(); // L = 9
        let block_len = 2 * h.len();
        let sorted_pairs = |steps: &[PlanStep]| {
            let mut pairs: Vec<(usize, u64)> = steps
                .iter()
                .map(|s| (s.term, s.duration.to_bits()))
                .collect();
            pairs.sort_unstable();
            pairs
        };
        let mut rng_a = SeededRng::new(1);
        let mut rng_b = SeededRng::new(2);
        let a = permuted_suzuki_plan(&h, 1.0, 2, 1, &mut rng_a).unwrap();
        let b = permuted_suzuki_plan(&h, 1.0, 2, 1, &mut rng_b).unwrap();
        let deterministic = suzuki2p_plan(&h, 0.5, 1).unwrap();
        assert_ne!(
            a.steps.iter().map(|s| s.term).collect::<Vec<_>>(),
            b.steps.iter().map(|s| s.term).collect::<Vec<_>>(),
            "different seeds should permute differently"
        );
        for plan in [&a, &b] {
            for block in 0..2usize {
                let slice = &plan.steps[block * block_len..(block + 1) * block_len];
                assert_eq!(sorted_pairs(slice), sorted_pairs(&deterministic.steps));
            }
        }
    }

    #[test]
    fn realize_empty_plan_is_identity() {
        let h = Hamiltonian::heisenberg_1d(2).unwrap();
        let plan = ProductFormulaPlan {
            steps: vec![],
            meta: PlanMeta {
                method: "empty".into(),
                t: 0.0,
                seed: 0,
                hamiltonian_fingerprint: h.fingerprint(),
            },
        };
        let realized = realize_unitary(&plan, &h).unwrap();
        assert!(realized.sub(&ComplexMatrix::identity(4)).max_abs_entry() == 0.0);
    }

    #[test]
    fn realize_single_z_rotation() {
        let h = Hamiltonian::new(
            1,
            vec![HamiltonianTerm::pauli(
                1.0,
                PauliString::parse("Z").unwrap(),
            )],
        )
        .unwrap();
        let plan = ProductFormulaPlan {
            steps: vec![PlanStep {
                term: 0,
                duration: std::f64::consts::FRAC_PI_2,
                rescaled: false,
            }],
            meta: PlanMeta {
                method: "manual".into(),
                t: std::f64::consts::FRAC_PI_2,
                seed: 0,
                hamiltonian_fingerprint: h.fingerprint(),
            },
        };
        let realized = realize_unitary(&plan, &h).unwrap();
        let expected_00 = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_2);
        let expected_11 = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2);
        assert!((realized.get(0, 0) - expected_00).norm() < 1e-12);
        assert!((realized.get(1, 1) - expected_11).norm() < 1e-12);
    }

    #[test]
    fn pauli_rotation_matches_dense_exponential() {
        // Statevector sweep vs dense kron exponential for a mixed string.
        let string = PauliString::parse("XYZ").unwrap();
        let h = Hamiltonian::new(3, vec![HamiltonianTerm::pauli(1.0, string.clone())]).unwrap();
        let angle = 0.37;
        let plan = ProductFormulaPlan {
            steps: vec![PlanStep {
                term: 0,
                duration: angle,
                rescaled: false,
            }],
            meta: PlanMeta {
                method: "manual".into(),
                t: angle,
                seed: 0,
                hamiltonian_fingerprint: h.fingerprint(),
            },
        };
        let realized = realize_unitary(&plan, &h).unwrap();
        let target = expm_hermitian(&string.dense(), angle).unwrap();
        assert!(realized.sub(&target).max_abs_entry() < 1e-12);
    }

    #[test]
    fn apply_plan_agrees_with_dense_realization() {
        let h = Hamiltonian::heisenberg_1d(4).unwrap();
        for seed in 0..10u64 {
            let mut rng = SeededRng::new(seed);
            let plan = qdrift_sample(&h, 2.0, 160, &mut rng).unwrap();
            let mut amplitudes = vec![Complex64::new(0.0, 0.0); 16];
            // A fixed, unnormalized-then-normalized deterministic state.
            for (i, amp) in amplitudes.iter_mut().enumerate() {
                *amp = Complex64::new(1.0 + (i as f64 * 0.3).sin(), (i as f64 * 0.7).cos());
            }
            let psi = StateVector::new(amplitudes).normalized();
            let swept = apply_plan(&plan, &h, &psi).unwrap();
            let dense = realize_unitary(&plan, &h).unwrap().apply(&psi);
            assert!(swept.sub(&dense).norm() < 1e-9);
            assert_close(swept.norm(), 1.0, 1e-10);
        }
    }

    #[test]
    fn expected_step_single_term_is_unitary_step() {
        let h = single_term();
        let ev = expected_step(&h, 1.2, 10).unwrap();
        let target = expm_hermitian(&h.dense().unwrap(), 0.12).unwrap();
        assert!(ev.sub(&target).max_abs_entry() < 1e-12);
    }

    #[test]
    fn step_deviation_bounded_by_radius() {
        let h = Hamiltonian::heisenberg_1d(3).unwrap();
        let (t, gates) = (2.0, 40u64);
        let ev = expected_step(&h, t, gates).unwrap();
        let radius = 2.0 * t * h.lambda() / gates as f64;
        for j in 0..h.len() {
            let vj = step_unitary(&h, t, gates, j).unwrap();
            let deviation = operator_norm(&vj.sub(&ev)).unwrap();
            assert!(
                deviation <= radius + 1e-12,
                "step {j} deviation {deviation} exceeds {radius}"
            );
        }
    }

    #[test]
    fn fwht_delta_and_involution() {
        let mut delta = vec![0.0; 8];
        delta[0] = 1.0;
        fwht(&mut delta);
        assert_eq!(delta, vec![1.0; 8]);

        let mut data = vec![0.5, -1.0, 2.0, 0.25, 0.0, 1.5, -0.75, 3.0];
        let original = data.clone();
        fwht(&mut data);
        fwht(&mut data);
        for (a, b) in data.iter().zip(original.iter()) {
            assert_close(*a, 8.0 * b, 1e-12);
        }
    }

    #[test]
    fn diagonal_phases_single_z() {
        let h = Hamiltonian::new(
            1,
            vec![HamiltonianTerm::pauli(
                1.0,
                PauliString::parse("Z").unwrap(),
            )],
        )
        .unwrap();
        let phases = target_diagonal_phases(&h, 0.6).unwrap();
        assert_close(phases[0], 0.6, 1e-15);
        assert_close(phases[1], -0.6, 1e-15);
    }

    #[test]
    fn diagonal_phases_all_z_walsh_row_sums() {
        // Unsigned weight-1 strings: S(b) = sum_p (-1)^{<b,p>} = 2^n [b = 0].
        let n = 3;
        let signs = vec![1i8; 8];
        let h = Hamiltonian::all_z_strings(n, &signs, 1.0).unwrap();
        let phases = target_diagonal_phases(&h, 1.0).unwrap();
        assert_close(phases[0], 8.0, 1e-12);
        for b in 1..8 {
            assert_close(phases[b], 0.0, 1e-12);
        }
    }

    #[test]
    fn diagonal_phase_error_matches_dense() {
        let n = 3;
        let signs = vec![1i8, -1, -1, 1, 1, 1, -1, 1];
        let h = Hamiltonian::all_z_strings(n, &signs, 1.0 / 8.0).unwrap();
        let mut rng = SeededRng::new(9);
        let plan = qdrift_sample(&h, 1.0, 25, &mut rng).unwrap();

        let target = target_diagonal_phases(&h, 1.0).unwrap();
        let accumulated = plan_diagonal_phases(&plan, &h).unwrap();
        let phase_error = phase_operator_distance(&accumulated, &target);

        let dense_u = expm_hermitian(&h.dense().unwrap(), 1.0).unwrap();
        let dense_v = realize_unitary(&plan, &h).unwrap();
        let dense_error = operator_norm(&dense_v.sub(&dense_u)).unwrap();
        assert_close(phase_error, dense_error, 1e-10);
    }

    #[test]
    fn diagonal_phases_reject_non_diagonal() {
        let h = Hamiltonian::heisenberg_1d(2).unwrap();
        assert!(matches!(
            target_diagonal_phases(&h, 1.0),
            Err(Error::NotDiagonal)
        ));
    }

    #[test]
    fn plan_json_round_trip() {
        let h = Hamiltonian::heisenberg_1d(2).unwrap();
        let mut rng = SeededRng::new(21);
        let plan = qdrift_sample(&h, 1.5, 12, &mut rng).unwrap();
        let json = plan.to_json().unwrap();
        for key in [
            "\"method\"",
            "\"t\"",
            "\"seed\"",
            "\"steps\"",
            "\"term\"",
            "\"duration\"",
            "\"rescaled\"",
        ] {
            assert!(json.contains(key), "missing {key} in {json}");
        }
        let back = ProductFormulaPlan::from_json(&json).unwrap();
        assert_eq!(back.steps, plan.steps);
        assert_eq!(back.meta.method, "qdrift");
        assert_close(back.meta.t, 1.5, 0.0);
        assert_eq!(back.meta.seed, 21);
    }

    #[test]
    fn realized_plans_are_unitary() {
        let h = Hamiltonian::heisenberg_1d(3).unwrap();
        let mut rng = SeededRng::new(4);
        let plans = vec![
            qdrift_sample(&h, 2.0, 100, &mut rng).unwrap(),
            first_order_plan(&h, 2.0, 30).unwrap(),
            suzuki2p_plan(&h, 0.5, 2).unwrap(),
            permuted_suzuki_plan(&h, 2.0, 4, 1, &mut rng).unwrap(),
        ];
        for plan in plans {
            let realized = realize_unitary(&plan, &h).unwrap();
            assert!(
                realized.unitarity_deviation() < 1e-9,
                "plan {} not unitary",
                plan.meta.method
            );
        }
    }
}
