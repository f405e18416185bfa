//! Amplitude amplification over an arbitrary prepared state.
//!
//! A [`Preparation`] holds the target state `psi` and a unitary `A` with
//! `A|0...0> = psi`. The reflection `D = 2|psi><psi| - I` is applied as
//! `A (2|0><0| - I) A^dagger`, so amplification works for entangled pair
//! databases as well as for the uniform superposition.

use num_complex::Complex64;
use thiserror::Error;

use crate::qsim::{Circuit, Gate, SimError, StateVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroverError {
    #[error("marked count {marked} outside 1..={space}")]
    MarkedCount { space: u64, marked: u64 },
    #[error("basis set is empty")]
    EmptyBasisSet,
    #[error("basis index {index} does not fit in {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("pattern has {pattern} bits for a {reg}-qubit register")]
    PatternLength { reg: usize, pattern: usize },
    #[error("oracle acts on {oracle} qubits, state has {state}")]
    Width { oracle: usize, state: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// `floor(pi/4 * sqrt(space / marked))`.
pub fn grover_iterations(space: u64, marked: u64) -> Result<u64, GroverError> {
    if marked == 0 || marked > space {
        return Err(GroverError::MarkedCount { space, marked });
    }
    Ok((std::f64::consts::FRAC_PI_4 * (space as f64 / marked as f64).sqrt()).floor() as u64)
}

/// Success probability after `iters` rounds when `marked` of `support`
/// equally weighted states are marked: `sin^2((2m+1) asin(sqrt(M/N)))`.
pub fn success_probability(support: u64, marked: u64, iters: u64) -> f64 {
    let theta = (marked as f64 / support as f64).sqrt().asin();
    ((2 * iters + 1) as f64 * theta).sin().powi(2)
}

/// Equal-weight superposition over a set of basis states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSet {
    n: usize,
    states: Vec<usize>,
}

impl BasisSet {
    pub fn new(n: usize, states: impl IntoIterator<Item = usize>) -> Result<Self, GroverError> {
        let mut states: Vec<usize> = states.into_iter().collect();
        states.sort_unstable();
        states.dedup();
        if states.is_empty() {
            return Err(GroverError::EmptyBasisSet);
        }
        if n == 0 || n > crate::qsim::MAX_QUBITS {
            return Err(SimError::QubitCount(n).into());
        }
        if let Some(&bad) = states.iter().find(|&&s| s >> n != 0) {
            return Err(GroverError::IndexOutOfRange { index: bad, n });
        }
        Ok(BasisSet { n, states })
    }

    /// All `2^n` basis states.
    pub fn uniform(n: usize) -> Result<Self, GroverError> {
        if n == 0 || n > crate::qsim::MAX_QUBITS {
            return Err(SimError::QubitCount(n).into());
        }
        BasisSet::new(n, 0..1usize << n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.states.binary_search(&index).is_ok()
    }

    pub fn state(&self) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        let a = 1.0 / (self.states.len() as f64).sqrt();
        for &s in &self.states {
            amps[s] = Complex64::new(a, 0.0);
        }
        StateVector::from_amplitudes(self.n, amps).expect("equal weights are normalized")
    }
}

/// A prepared state together with the operator that prepares it.
///
/// `A` is the Householder reflection exchanging `|0...0>` with `psi` (up to
/// the global phase of `psi[0]`): a unitary whose first column is `psi`, so
/// it completes `psi` to an orthonormal basis. It is Hermitian up to that
/// phase, so the same stored vector gives both `A` and `A^dagger`, each in
/// `O(2^n)`.
#[derive(Debug, Clone)]
pub struct Preparation {
    psi: StateVector,
    phase: Complex64,
    // None when psi is |0...0> up to phase
    reflector: Option<(Vec<Complex64>, f64)>,
}

impl Preparation {
    pub fn from_state(psi: StateVector) -> Self {
        let r = psi.amplitude(0);
        let phase = if r.norm() > 0.0 {
            r / r.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut v: Vec<Complex64> = psi.amplitudes().iter().map(|a| -a * phase.conj()).collect();
        v[0] += 1.0;
        let norm_sqr: f64 = v.iter().map(Complex64::norm_sqr).sum();
        let reflector = (norm_sqr > 1e-24).then_some((v, norm_sqr));
        Preparation {
            psi,
            phase,
            reflector,
        }
    }

    pub fn from_basis_set(b: &BasisSet) -> Self {
        Preparation::from_state(b.state())
    }

    pub fn n(&self) -> usize {
        self.psi.n()
    }

    /// The prepared state `A|0...0>`.
    pub fn state(&self) -> &StateVector {
        &self.psi
    }

    fn householder(&self, x: &mut [Complex64]) {
        if let Some((v, norm_sqr)) = &self.reflector {
            let dot: Complex64 = v.iter().zip(x.iter()).map(|(vi, xi)| vi.conj() * xi).sum();
            let scale = dot * (2.0 / norm_sqr);
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi -= vi * scale;
            }
        }
    }

    pub fn apply_a(&self, s: &mut StateVector) {
        let amps = s.amplitudes_mut();
        self.householder(amps);
        for a in amps.iter_mut() {
            *a *= self.phase;
        }
    }

    pub fn apply_a_dagger(&self, s: &mut StateVector) {
        let amps = s.amplitudes_mut();
        for a in amps.iter_mut() {
            *a *= self.phase.conj();
        }
        self.householder(amps);
    }

    /// `D = A (2|0><0| - I) A^dagger = 2|psi><psi| - I`.
    pub fn reflect(&self, s: &mut StateVector) {
        // the global phase of A cancels between A and A^dagger
        let amps = s.amplitudes_mut();
        self.householder(amps);
        for a in amps.iter_mut().skip(1) {
            *a = -*a;
        }
        self.householder(amps);
    }
}

pub fn prepare_basis_set(b: &BasisSet) -> Preparation {
    Preparation::from_basis_set(b)
}

/// Applies the inversion about the prepared state in place.
pub fn reflect_about_prepared(p: &Preparation, s: &mut StateVector) {
    p.reflect(s);
}

/// A diagonal oracle that negates the amplitude of every marked basis state.
pub trait PhaseOracle {
    fn n(&self) -> usize;

    fn is_marked(&self, index: usize) -> bool;

    fn apply(&self, s: &mut StateVector) -> Result<(), GroverError> {
        if s.n() != self.n() {
            return Err(GroverError::Width {
                oracle: self.n(),
                state: s.n(),
            });
        }
        for (i, a) in s.amplitudes_mut().iter_mut().enumerate() {
            if self.is_marked(i) {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// The ±1 diagonal.
    fn diagonal(&self) -> Vec<f64> {
        (0..1usize << self.n())
            .map(|i| if self.is_marked(i) { -1.0 } else { 1.0 })
            .collect()
    }
}

/// Marks the basis states whose register `reg` holds `pattern`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternOracle {
    n: usize,
    reg: Vec<usize>,
    pattern: Vec<bool>,
}

impl PatternOracle {
    pub fn new(n: usize, reg: Vec<usize>, pattern: Vec<bool>) -> Result<Self, GroverError> {
        if reg.len() != pattern.len() {
            return Err(GroverError::PatternLength {
                reg: reg.len(),
                pattern: pattern.len(),
            });
        }
        for (i, &q) in reg.iter().enumerate() {
            if q >= n {
                return Err(SimError::QubitIndex { qubit: q, n }.into());
            }
            if reg[..i].contains(&q) {
                return Err(SimError::RepeatedQubit(q).into());
            }
        }
        Ok(PatternOracle { n, reg, pattern })
    }

    /// Oracle searching register `reg` for the binary form of `value`.
    pub fn for_value(n: usize, reg: Vec<usize>, value: usize) -> Result<Self, GroverError> {
        let w = reg.len();
        let pattern = (0..w).map(|i| value >> (w - 1 - i) & 1 == 1).collect();
        PatternOracle::new(n, reg, pattern)
    }

    pub fn reg(&self) -> &[usize] {
        &self.reg
    }

    pub fn pattern(&self) -> &[bool] {
        &self.pattern
    }

    fn pattern_value(&self) -> usize {
        self.pattern
            .iter()
            .fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    /// Phase-kickback circuit on `n + 1` qubits, the ancilla being qubit
    /// `n` and expected in |->: X on every register qubit whose pattern bit
    /// is 0, an MCX from the register onto the ancilla, then the X gates
    /// again.
    pub fn circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.n + 1);
        let flips: Vec<Gate> = self
            .reg
            .iter()
            .zip(&self.pattern)
            .filter(|(_, &bit)| !bit)
            .map(|(&q, _)| Gate::X(q))
            .collect();
        for g in &flips {
            c.push(g.clone());
        }
        c.push(Gate::Mcx {
            controls: self.reg.clone(),
            target: self.n,
        });
        for g in flips {
            c.push(g);
        }
        c
    }

    /// [`circuit`](Self::circuit) wrapped in the ancilla preparation (X then
    /// H) and its undo, for an ancilla starting in |0>.
    pub fn kickback_circuit(&self) -> Circuit {
        let anc = self.n;
        let mut c = Circuit::new(self.n + 1);
        c.push(Gate::X(anc)).push(Gate::H(anc));
        c.extend(&self.circuit());
        c.push(Gate::H(anc)).push(Gate::X(anc));
        c
    }
}

impl PhaseOracle for PatternOracle {
    fn n(&self) -> usize {
        self.n
    }

    fn is_marked(&self, index: usize) -> bool {
        let v = self.reg.iter().fold(0usize, |acc, &q| {
            (acc << 1) | (index >> (self.n - 1 - q) & 1)
        });
        v == self.pattern_value()
    }
}

pub fn build_pattern_oracle(o: &PatternOracle) -> Circuit {
    o.circuit()
}

/// Marks an explicit set of basis states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSetOracle {
    n: usize,
    marked: Vec<usize>,
}

impl MarkedSetOracle {
    pub fn new(n: usize, marked: impl IntoIterator<Item = usize>) -> Result<Self, GroverError> {
        let mut marked: Vec<usize> = marked.into_iter().collect();
        marked.sort_unstable();
        marked.dedup();
        if let Some(&bad) = marked.iter().find(|&&s| s >> n != 0) {
            return Err(GroverError::IndexOutOfRange { index: bad, n });
        }
        Ok(MarkedSetOracle { n, marked })
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }
}

impl PhaseOracle for MarkedSetOracle {
    fn n(&self) -> usize {
        self.n
    }

    fn is_marked(&self, index: usize) -> bool {
        self.marked.binary_search(&index).is_ok()
    }
}

/// The ±1 diagonal of the marked-set oracle.
pub fn build_marked_set_oracle(o: &MarkedSetOracle) -> Vec<f64> {
    o.diagonal()
}

/// `iters` rounds of (oracle, then reflection about the prepared state),
/// starting from the prepared state.
pub fn run_grover(
    p: &Preparation,
    oracle: &impl PhaseOracle,
    iters: u64,
) -> Result<StateVector, GroverError> {
    let mut s = p.state().clone();
    for _ in 0..iters {
        oracle.apply(&mut s)?;
        p.reflect(&mut s);
    }
    Ok(s)
}

/// Total probability of the marked states.
pub fn marked_probability(s: &StateVector, oracle: &impl PhaseOracle) -> f64 {
    (0..s.dim())
        .filter(|&i| oracle.is_marked(i))
        .map(|i| s.probability(i))
        .sum()
}
