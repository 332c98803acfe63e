//! Hamiltonian data model: weighted Pauli strings or dense Hermitian terms,
//! cached strength statistics, and the named model builders used by the
//! experiment harness.
//!
//! A Hamiltonian `H = sum_j h_j` carries its interaction strength
//! `lambda = sum_j ||h_j||`, the max term norm `Lambda`, and the importance
//! sampling distribution `p_j = ||h_j|| / lambda`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, ComplexMatrix};

/// Dense realization cap (d = 2^12 = 4096).
pub const DENSE_QUBIT_CAP: usize = 12;
/// Statevector fast-path cap.
pub const STATE_QUBIT_CAP: usize = 24;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn from_char(ch: char) -> Result<Self> {
        match ch {
            'I' => Ok(Self::I),
            'X' => Ok(Self::X),
            'Y' => Ok(Self::Y),
            'Z' => Ok(Self::Z),
            other => Err(Error::InvalidTerm(format!(
                "unknown Pauli letter '{other}'"
            ))),
        }
    }

    fn as_char(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }

    fn dense(self) -> ComplexMatrix {
        let c = Complex64::new;
        let entries = match self {
            Self::I => vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            Self::X => vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            Self::Y => vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
            Self::Z => vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        };
        ComplexMatrix::from_rows(2, entries)
    }
}

/// An n-qubit Pauli string. Qubit 0 is the leftmost tensor factor, i.e. the
/// most significant bit of a computational basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidTerm("empty Pauli string".into()));
        }
        Ok(Self { letters })
    }

    /// Parse from a letter string like "XZIY".
    pub fn parse(text: &str) -> Result<Self> {
        let letters = text
            .chars()
            .map(PauliLetter::from_char)
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }

    /// All-identity string on n qubits.
    pub fn identity(n: usize) -> Self {
        Self {
            letters: vec![PauliLetter::I; n],
        }
    }

    /// Single non-identity letter at `site`, identities elsewhere.
    pub fn single_site(n: usize, site: usize, letter: PauliLetter) -> Self {
        assert!(site < n, "site out of range");
        let mut letters = vec![PauliLetter::I; n];
        letters[site] = letter;
        Self { letters }
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn to_letter_string(&self) -> String {
        self.letters.iter().map(|l| l.as_char()).collect()
    }

    /// True when the string contains only I and Z.
    pub fn is_diagonal(&self) -> bool {
        self.letters
            .iter()
            .all(|l| matches!(l, PauliLetter::I | PauliLetter::Z))
    }

    /// Bit mask of qubits flipped by the string (X or Y letters), with
    /// qubit k at bit position n-1-k.
    pub fn flip_mask(&self) -> usize {
        let n = self.n();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, PauliLetter::X | PauliLetter::Y))
            .fold(0usize, |m, (k, _)| m | (1 << (n - 1 - k)))
    }

    /// Bit mask of qubits contributing a (-1)^{b_k} sign (Y or Z letters).
    pub fn sign_mask(&self) -> usize {
        let n = self.n();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, PauliLetter::Y | PauliLetter::Z))
            .fold(0usize, |m, (k, _)| m | (1 << (n - 1 - k)))
    }

    pub fn count_y(&self) -> u32 {
        self.letters
            .iter()
            .filter(|l| matches!(l, PauliLetter::Y))
            .count() as u32
    }

    pub fn dense(&self) -> ComplexMatrix {
        let mut out = self.letters[0].dense();
        for letter in &self.letters[1..] {
            out = out.kron(&letter.dense());
        }
        out
    }
}

/// Either a Pauli string (unit operator norm) or an explicit dense
/// Hermitian block.
#[derive(Debug, Clone)]
pub enum TermOperator {
    Pauli(PauliString),
    Dense(ComplexMatrix),
}

/// One weighted term `h_j = coefficient * operator`.
#[derive(Debug, Clone)]
pub struct HamiltonianTerm {
    pub coefficient: f64,
    pub operator: TermOperator,
}

impl HamiltonianTerm {
    pub fn pauli(coefficient: f64, string: PauliString) -> Self {
        Self {
            coefficient,
            operator: TermOperator::Pauli(string),
        }
    }

    pub fn dense(coefficient: f64, matrix: ComplexMatrix) -> Self {
        Self {
            coefficient,
            operator: TermOperator::Dense(matrix),
        }
    }
}

/// Norm of a term: `|coefficient|` for Pauli strings (which have unit
/// operator norm), `|coefficient| * ||M||` for dense blocks.
pub fn term_norm(term: &HamiltonianTerm) -> Result<f64> {
    match &term.operator {
        TermOperator::Pauli(_) => Ok(term.coefficient.abs()),
        TermOperator::Dense(m) => Ok(term.coefficient.abs() * operator_norm(m)?),
    }
}

/// Weighted-term Hamiltonian on n qubits with cached strength statistics.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    n: usize,
    terms: Vec<HamiltonianTerm>,
    term_norms: Vec<f64>,
    /// Operator norm of the bare (coefficient-stripped) operator per term;
    /// 1 for Pauli strings.
    operator_norms: Vec<f64>,
    lambda: f64,
    max_term_norm: f64,
    probabilities: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(n: usize, terms: Vec<HamiltonianTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyHamiltonian);
        }
        if n == 0 {
            return Err(Error::InvalidTerm("qubit count must be >= 1".into()));
        }
        let dim = 1usize << n.min(STATE_QUBIT_CAP);
        let mut term_norms = Vec::with_capacity(terms.len());
        let mut operator_norms = Vec::with_capacity(terms.len());
        for (j, term) in terms.iter().enumerate() {
            if !term.coefficient.is_finite() || term.coefficient == 0.0 {
                return Err(Error::InvalidTerm(format!(
                    "term {j} has coefficient {}",
                    term.coefficient
                )));
            }
            let op_norm = match &term.operator {
                TermOperator::Pauli(p) => {
                    if p.n() != n {
                        return Err(Error::InvalidTerm(format!(
                            "term {j} acts on {} qubits, Hamiltonian has {n}",
                            p.n()
                        )));
                    }
                    1.0
                }
                TermOperator::Dense(m) => {
                    if m.dim() != dim {
                        return Err(Error::InvalidTerm(format!(
                            "term {j} has dimension {}, expected {dim}",
                            m.dim()
                        )));
                    }
                    if m.hermiticity_deviation() > 1e-10 {
                        return Err(Error::InvalidTerm(format!("term {j} is not Hermitian")));
                    }
                    operator_norm(m)?
                }
            };
            let norm = term.coefficient.abs() * op_norm;
            if norm <= 0.0 {
                return Err(Error::InvalidTerm(format!("term {j} has zero norm")));
            }
            operator_norms.push(op_norm);
            term_norms.push(norm);
        }
        let lambda: f64 = term_norms.iter().sum();
        let max_term_norm = term_norms.iter().copied().fold(0.0, f64::max);
        let probabilities = term_norms.iter().map(|t| t / lambda).collect();
        Ok(Self {
            n,
            terms,
            term_norms,
            operator_norms,
            lambda,
            max_term_norm,
            probabilities,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    pub fn term(&self, index: usize) -> &HamiltonianTerm {
        &self.terms[index]
    }

    pub fn term_norm(&self, index: usize) -> f64 {
        self.term_norms[index]
    }

    /// Operator norm of the coefficient-stripped operator of term `index`.
    pub fn bare_operator_norm(&self, index: usize) -> f64 {
        self.operator_norms[index]
    }

    /// Interaction strength `lambda = sum_j ||h_j||`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Max term norm `Lambda = max_j ||h_j||`.
    pub fn max_term_norm(&self) -> f64 {
        self.max_term_norm
    }

    /// Importance sampling distribution `p_j = ||h_j|| / lambda`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `(lambda, Lambda, p)` in one call.
    pub fn strength_stats(&self) -> (f64, f64, &[f64]) {
        (self.lambda, self.max_term_norm, &self.probabilities)
    }

    /// True iff every term is a Pauli string over {I, Z} only.
    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|t| match &t.operator {
            TermOperator::Pauli(p) => p.is_diagonal(),
            TermOperator::Dense(_) => false,
        })
    }

    /// Dense d x d Hermitian realization `sum_j c_j P_j`; n <= 12.
    pub fn dense(&self) -> Result<ComplexMatrix> {
        if self.n > DENSE_QUBIT_CAP {
            return Err(Error::DenseCap {
                n: self.n,
                cap: DENSE_QUBIT_CAP,
            });
        }
        let d = 1usize << self.n;
        let mut out = ComplexMatrix::zeros(d);
        for term in &self.terms {
            let dense = match &term.operator {
                TermOperator::Pauli(p) => p.dense(),
                TermOperator::Dense(m) => m.clone(),
            };
            out = out.add(&dense.scale(Complex64::new(term.coefficient, 0.0)));
        }
        Ok(out)
    }

    /// 1D Heisenberg chain `H = 1/(n-1) sum_i X_i X_{i+1} + Y_i Y_{i+1}
    /// + Z_i Z_{i+1}`: 3(n-1) Pauli terms, lambda = 3 for every n.
    pub fn heisenberg_1d(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidTerm(
                "Heisenberg chain needs at least 2 qubits".into(),
            ));
        }
        let coeff = 1.0 / (n - 1) as f64;
        let mut terms = Vec::with_capacity(3 * (n - 1));
        for i in 0..n - 1 {
            for letter in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
                let mut letters = vec![PauliLetter::I; n];
                letters[i] = letter;
                letters[i + 1] = letter;
                terms.push(HamiltonianTerm::pauli(coeff, PauliString::new(letters)?));
            }
        }
        Self::new(n, terms)
    }

    /// `H = scale * sum_k Z_k`: n single-site terms, lambda = n * |scale|.
    pub fn single_site_z(n: usize, scale: f64) -> Result<Self> {
        let terms = (0..n)
            .map(|k| HamiltonianTerm::pauli(scale, PauliString::single_site(n, k, PauliLetter::Z)))
            .collect();
        Self::new(n, terms)
    }

    /// All 2^n signed Z-strings: term p has coefficient `signs[p] * weight`
    /// on `Z^{p_1} (x) ... (x) Z^{p_n}`. The multi-index bit p_k of the
    /// integer index follows the qubit convention (qubit 0 = MSB).
    pub fn all_z_strings(n: usize, signs: &[i8], weight: f64) -> Result<Self> {
        if n > DENSE_QUBIT_CAP {
            return Err(Error::DenseCap {
                n,
                cap: DENSE_QUBIT_CAP,
            });
        }
        let count = 1usize << n;
        if signs.len() != count {
            return Err(Error::InvalidTerm(format!(
                "need 2^n = {count} signs, got {}",
                signs.len()
            )));
        }
        let mut terms = Vec::with_capacity(count);
        for (p, sign) in signs.iter().enumerate() {
            if *sign != 1 && *sign != -1 {
                return Err(Error::InvalidTerm("signs must be +-1".into()));
            }
            let letters = (0..n)
                .map(|k| {
                    if p & (1 << (n - 1 - k)) != 0 {
                        PauliLetter::Z
                    } else {
                        PauliLetter::I
                    }
                })
                .collect();
            terms.push(HamiltonianTerm::pauli(
                f64::from(*sign) * weight,
                PauliString::new(letters)?,
            ));
        }
        Self::new(n, terms)
    }

    /// Stable fingerprint of (n, terms) for plan provenance.
    pub fn fingerprint(&self) -> u64 {
        // FNV-1a over the structural content.
        let mut hash: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for b in bytes {
                hash ^= u64::from(*b);
                hash = hash.wrapping_mul(0x100000001b3);
            }
        };
        eat(&(self.n as u64).to_le_bytes());
        for term in &self.terms {
            eat(&term.coefficient.to_le_bytes());
            match &term.operator {
                TermOperator::Pauli(p) => eat(p.to_letter_string().as_bytes()),
                TermOperator::Dense(m) => {
                    for z in m.entries() {
                        eat(&z.re.to_le_bytes());
                        eat(&z.im.to_le_bytes());
                    }
                }
            }
        }
        hash
    }

    /// Serialize to the wire schema
    /// `{"n": int, "terms": [{"coeff": float, "pauli": "XZIY..."}]}`.
    /// Dense terms have no wire form and are rejected.
    pub fn to_json(&self) -> Result<String> {
        let terms = self
            .terms
            .iter()
            .map(|t| match &t.operator {
                TermOperator::Pauli(p) => Ok(WireTerm {
                    coeff: t.coefficient,
                    pauli: p.to_letter_string(),
                }),
                TermOperator::Dense(_) => Err(Error::InvalidTerm(
                    "dense terms are not serializable".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(serde_json::to_string_pretty(&WireHamiltonian {
            n: self.n,
            terms,
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: WireHamiltonian = serde_json::from_str(text)?;
        let terms = wire
            .terms
            .into_iter()
            .map(|t| {
                let string = PauliString::parse(&t.pauli)?;
                Ok(HamiltonianTerm::pauli(t.coeff, string))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(wire.n, terms)
    }
}

#[derive(Serialize, Deserialize)]
struct WireHamiltonian {
    n: usize,
    terms: Vec<WireTerm>,
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    coeff: f64,
    pauli: String,
}
