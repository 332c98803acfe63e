//! Dense complex linear algebra for unitary-channel error metrics.
//!
//! Self-contained kernel: products, adjoints, Hermitian eigendecomposition
//! (cyclic Jacobi), matrix exponentials `exp(-i theta H)`, operator norm,
//! pure-state overlaps, and the exact diamond distance between unitary
//! channels via the eigenvalue convex hull of `U^dag V`.
//!
//! Everything is immutable after construction and safe to share across
//! threads. Sized for desk scale (d <= 4096); no sparsity, no GPU.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Off-diagonal Frobenius mass threshold for Jacobi convergence,
/// relative to the Frobenius norm of the input.
const JACOBI_REL_TOL: f64 = 1e-13;
/// Hard sweep cap for the Jacobi eigensolver.
const JACOBI_MAX_SWEEPS: usize = 100;
/// Hermiticity guard on eigensolver inputs (max entry of H - H^dag).
const HERMITIAN_TOL: f64 = 1e-10;
/// Unitarity guard on diamond-distance inputs. Looser than the 1e-10
/// construction invariant so realized product formulas (unitary within
/// 1e-9) are accepted.
const UNITARY_TOL: f64 = 1e-6;
/// Normalization guard for pure-state metrics.
const STATE_NORM_TOL: f64 = 1e-8;

/// Dense d x d complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from row-major entries; length must be a perfect square.
    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim, "entry count must equal dim^2");
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.dim, other.dim,
            "dimension mismatch in matmul: {} vs {}",
            self.dim, other.dim
        );
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        // ikj loop order keeps the inner accesses contiguous.
        for i in 0..d {
            for k in 0..d {
                let aik = self.data[i * d + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let brow = &other.data[k * d..(k + 1) * d];
                let orow = &mut out.data[i * d..(i + 1) * d];
                for (o, b) in orow.iter_mut().zip(brow.iter()) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + b)
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sub");
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a - b)
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let mut out = ComplexMatrix::zeros(d);
        for ia in 0..da {
            for ja in 0..da {
                let a = self.data[ia * da + ja];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for ib in 0..db {
                    for jb in 0..db {
                        out.data[(ia * db + ib) * d + (ja * db + jb)] =
                            a * other.data[ib * db + jb];
                    }
                }
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max entry of `H - H^dag`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                dev = dev.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        dev
    }

    /// Max entry of `U^dag U - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        let mut dev: f64 = 0.0;
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((gram.data[i * d + j] - Complex64::new(target, 0.0)).norm());
            }
        }
        dev
    }

    /// Matrix-vector product.
    pub fn apply(&self, state: &StateVector) -> StateVector {
        assert_eq!(
            self.dim,
            state.dim(),
            "dimension mismatch in apply: {} vs {}",
            self.dim,
            state.dim()
        );
        let d = self.dim;
        let out = (0..d)
            .map(|i| {
                self.data[i * d..(i + 1) * d]
                    .iter()
                    .zip(state.amplitudes())
                    .map(|(m, a)| m * a)
                    .sum()
            })
            .collect();
        StateVector::new(out)
    }

    /// `self^exponent` by binary powering.
    pub fn power(&self, mut exponent: u64) -> ComplexMatrix {
        let mut base = self.clone();
        let mut acc = ComplexMatrix::identity(self.dim);
        while exponent > 0 {
            if exponent & 1 == 1 {
                acc = acc.matmul(&base);
            }
            exponent >>= 1;
            if exponent > 0 {
                base = base.matmul(&base);
            }
        }
        acc
    }
}

/// Length-d complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: Vec<Complex64>,
}

impl StateVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        assert!(!data.is_empty(), "state dimension must be >= 1");
        Self { data }
    }

    /// Computational basis state |index>.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut data = vec![Complex64::new(0.0, 0.0); dim];
        data[index] = Complex64::new(1.0, 0.0);
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.data
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        Self {
            data: self.data.iter().map(|z| z / n).collect(),
        }
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in inner");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in sub");
        Self {
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Tensor product `self (x) other`.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Self { data }
    }
}

/// Eigendecomposition H = Q diag(values) Q^dag of a Hermitian matrix.
/// Eigenvalues ascending, eigenvector columns orthonormal.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// Cyclic Jacobi on the (p, q) plane: one complex rotation zeroing A[p][q].
///
/// The pivot block [[a, rho e^{i alpha}], [rho e^{-i alpha}, b]] factors as
/// D A_r D^dag with D = diag(e^{i alpha/2}, e^{-i alpha/2}) and A_r real
/// symmetric, so a real Jacobi rotation composed with D diagonalizes it.
fn jacobi_rotate(a: &mut ComplexMatrix, q_acc: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let d = a.dim;
    let w = a.data[p * d + q];
    let rho = w.norm();
    if rho == 0.0 {
        return;
    }
    let app = a.data[p * d + p].re;
    let aqq = a.data[q * d + q].re;
    let tau = (aqq - app) / (2.0 * rho);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let half_phase = (w / rho).sqrt(); // e^{i alpha / 2}
    let upp = half_phase * c;
    let upq = half_phase * s;
    let uqp = -half_phase.conj() * s;
    let uqq = half_phase.conj() * c;

    // A <- A U (columns p, q).
    for k in 0..d {
        let akp = a.data[k * d + p];
        let akq = a.data[k * d + q];
        a.data[k * d + p] = akp * upp + akq * uqp;
        a.data[k * d + q] = akp * upq + akq * uqq;
    }
    // A <- U^dag A (rows p, q).
    for k in 0..d {
        let apk = a.data[p * d + k];
        let aqk = a.data[q * d + k];
        a.data[p * d + k] = upp.conj() * apk + uqp.conj() * aqk;
        a.data[q * d + k] = upq.conj() * apk + uqq.conj() * aqk;
    }
    // Clean up roundoff: the pivot is now diagonal by construction.
    a.data[p * d + q] = Complex64::new(0.0, 0.0);
    a.data[q * d + p] = Complex64::new(0.0, 0.0);
    a.data[p * d + p] = Complex64::new(a.data[p * d + p].re, 0.0);
    a.data[q * d + q] = Complex64::new(a.data[q * d + q].re, 0.0);

    if let Some(qm) = q_acc {
        for k in 0..d {
            let qkp = qm.data[k * d + p];
            let qkq = qm.data[k * d + q];
            qm.data[k * d + p] = qkp * upp + qkq * uqp;
            qm.data[k * d + q] = qkp * upq + qkq * uqq;
        }
    }
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let d = a.dim;
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += a.data[i * d + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn jacobi_eig(h: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let dev = h.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let d = h.dim;
    let mut a = h.clone();
    // Symmetrize exactly so roundoff in the input cannot bias the sweep.
    for i in 0..d {
        for j in (i + 1)..d {
            let avg = (a.data[i * d + j] + a.data[j * d + i].conj()) * 0.5;
            a.data[i * d + j] = avg;
            a.data[j * d + i] = avg.conj();
        }
        a.data[i * d + i] = Complex64::new(a.data[i * d + i].re, 0.0);
    }
    let mut q = want_vectors.then(|| ComplexMatrix::identity(d));
    let target = JACOBI_REL_TOL * h.frobenius_norm();
    let skip = if d > 0 { target / d as f64 } else { 0.0 };

    let mut off = off_diagonal_mass(&a);
    let mut sweeps = 0;
    while off > target {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::NonConvergence { sweeps, off });
        }
        for p in 0..d {
            for qi in (p + 1)..d {
                if a.data[p * d + qi].norm() > skip {
                    jacobi_rotate(&mut a, q.as_mut(), p, qi);
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_mass(&a);
    }

    let mut order: Vec<usize> = (0..d).collect();
    let values: Vec<f64> = (0..d).map(|i| a.data[i * d + i].re).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let sorted_q = q.map(|qm| {
        let mut out = ComplexMatrix::zeros(d);
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..d {
                out.data[r * d + new_col] = qm.data[r * d + old_col];
            }
        }
        out
    });
    Ok((sorted_values, sorted_q))
}

/// Full Hermitian eigendecomposition (cyclic Jacobi, 100-sweep cap).
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let (eigenvalues, q) = jacobi_eig(h, true)?;
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: q.expect("vectors requested"),
    })
}

/// Eigenvalues only; cheaper when eigenvectors are not needed.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(jacobi_eig(h, false)?.0)
}

/// `exp(-i theta H)` for Hermitian H, via the eigendecomposition.
pub fn expm_hermitian(h: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let d = h.dim();
    let q = &eig.eigenvectors;
    // Q diag(e^{-i theta v}) Q^dag
    let mut scaled = ComplexMatrix::zeros(d);
    for col in 0..d {
        let phase = Complex64::from_polar(1.0, -theta * eig.eigenvalues[col]);
        for row in 0..d {
            scaled.data[row * d + col] = q.data[row * d + col] * phase;
        }
    }
    Ok(scaled.matmul(&q.adjoint()))
}

/// Spectral norm: largest singular value, via eigenvalues of `A^dag A`.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    if a.dim() == 1 {
        return Ok(a.data[0].norm());
    }
    let gram = a.adjoint().matmul(a);
    let values = hermitian_eigenvalues(&gram)?;
    let top = values.last().copied().unwrap_or(0.0).max(0.0);
    Ok(top.sqrt())
}

/// Trace distance between pure states: `sqrt(1 - |<u|v>|^2)`
/// (Fuchs--van de Graaf for pure states).
pub fn pure_trace_distance(u: &StateVector, v: &StateVector) -> Result<f64> {
    for s in [u, v] {
        let dev = (s.norm() - 1.0).abs();
        if dev > STATE_NORM_TOL {
            return Err(Error::NotNormalized { deviation: dev });
        }
    }
    let overlap = u.inner(v).norm_sqr().min(1.0);
    Ok((1.0 - overlap).sqrt())
}

/// Euclidean distance `||(U - V) psi||_l2`.
pub fn state_l2_distance(u_psi: &StateVector, v_psi: &StateVector) -> f64 {
    u_psi.sub(v_psi).norm()
}

/// Half the diamond distance between the unitary channels of U and V.
///
/// Equals `sqrt(1 - delta^2)` where `delta` is the distance from the origin
/// to the convex hull of the eigenvalues of `U^dag V`; no ancilla
/// stabilization is needed for unitary channels.
pub fn unitary_diamond_distance(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
            context: "unitary_diamond_distance",
        });
    }
    for m in [u, v] {
        let dev = m.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
    }
    let w = u.adjoint().matmul(v);
    let eigenvalues = unitary_eigenvalues(&w)?;
    let delta = hull_distance_to_origin(&eigenvalues);
    Ok((1.0 - (delta * delta).min(1.0)).max(0.0).sqrt())
}

/// Eigenvalues of a unitary (hence normal) matrix W.
///
/// Diagonalizes the Hermitian part (W + W^dag)/2, then resolves each
/// degenerate cluster with the skew part -i (W - W^dag)/2 restricted to the
/// cluster. The parts commute for normal W, so this recovers e^{i theta}
/// eigenvalues without a nonsymmetric QR iteration.
fn unitary_eigenvalues(w: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let d = w.dim();
    let wdag = w.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let cos_part = w.add(&wdag).scale(half);
    let sin_part = w.sub(&wdag).scale(Complex64::new(0.0, -0.5));

    let eig = hermitian_eig(&cos_part)?;
    let q = eig.eigenvectors;
    let s_in_basis = q.adjoint().matmul(&sin_part).matmul(&q);

    // Degenerate cos clusters get refined with the sin part.
    const CLUSTER_TOL: f64 = 1e-6;
    let mut values = vec![Complex64::new(0.0, 0.0); d];
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (eig.eigenvalues[end] - eig.eigenvalues[end - 1]).abs() <= CLUSTER_TOL {
            end += 1;
        }
        if end - start == 1 {
            let s = s_in_basis.get(start, start).re;
            values[start] = Complex64::new(eig.eigenvalues[start], s);
        } else {
            let m = end - start;
            let mut block = ComplexMatrix::zeros(m);
            for i in 0..m {
                for j in 0..m {
                    block.set(i, j, s_in_basis.get(start + i, start + j));
                }
            }
            let sub = hermitian_eig(&block)?;
            for (i, s) in sub.eigenvalues.iter().enumerate() {
                // Rayleigh quotient of the cos part within the cluster.
                let mut c = 0.0;
                for r in 0..m {
                    c += sub.eigenvectors.get(r, i).norm_sqr() * eig.eigenvalues[start + r];
                }
                values[start + i] = Complex64::new(c, *s);
            }
        }
        start = end;
    }
    // Unit-circle snap; inputs are unitary to within UNITARY_TOL.
    for v in &mut values {
        let r = v.norm();
        if r > 0.0 {
            *v /= r;
        }
    }
    Ok(values)
}

/// Distance from the origin to the convex hull of a 2D point set
/// (0 when the hull contains the origin).
fn hull_distance_to_origin(points: &[Complex64]) -> f64 {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|z| (z.re, z.im)).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);

    if pts.len() == 1 {
        return (pts[0].0 * pts[0].0 + pts[0].1 * pts[0].1).sqrt();
    }
    let hull = convex_hull(&pts);
    if hull.len() >= 3 && polygon_contains_origin(&hull) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        best = best.min(segment_distance_to_origin(a, b));
    }
    best
}

/// Monotone chain; returns the hull in counter-clockwise order.
/// Degenerate (collinear) inputs yield a 2-point "hull", handled as a segment.
fn convex_hull(sorted: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in sorted {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in sorted.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn polygon_contains_origin(hull: &[(f64, f64)]) -> bool {
    // CCW polygon: inside iff the origin is left of (or on) every edge.
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        let cross = (b.0 - a.0) * (-a.1) - (b.1 - a.1) * (-a.0);
        if cross < -1e-14 {
            return false;
        }
    }
    true
}

fn segment_distance_to_origin(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (-(a.0 * dx + a.1 * dy) / len_sq).clamp(0.0, 1.0)
    };
    let (px, py) = (a.0 + t * dx, a.1 + t * dy);
    (px * px + py * py).sqrt()
}
