//! Dense statevector simulator.
//!
//! Qubit 0 is the most significant bit of a basis index and the first
//! character of a printed bitstring, so the concatenation `|a>|b>` of an
//! `n_a`-qubit and an `n_b`-qubit register is basis index `a * 2^n_b + b`.

mod rng;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

pub use rng::SeededRng;

pub const MAX_QUBITS: usize = 24;
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Outcome bitstring (first measured qubit first) to shot count.
pub type Histogram = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("qubit count {0} outside 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitIndex { qubit: usize, n: usize },
    #[error("qubit {0} used twice in one gate or register")]
    RepeatedQubit(usize),
    #[error("amplitude vector has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("multi-controlled X decomposition needs at least 3 controls, got {0}")]
    TooFewControls(usize),
    #[error("{controls} controls need {needed} clean ancillas, got {got}")]
    InsufficientAncillas {
        controls: usize,
        needed: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    X(usize),
    H(usize),
    Z(usize),
    /// X on `target` when every control is |1>. No controls is a plain X,
    /// two controls a Toffoli.
    Mcx {
        controls: Vec<usize>,
        target: usize,
    },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Mcx {
            controls: vec![control],
            target,
        }
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        Gate::Mcx {
            controls: vec![c0, c1],
            target,
        }
    }

    fn validate(&self, n: usize) -> Result<(), SimError> {
        let check = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(SimError::QubitIndex { qubit: q, n })
            }
        };
        match self {
            Gate::X(q) | Gate::H(q) | Gate::Z(q) => check(*q),
            Gate::Mcx { controls, target } => {
                check(*target)?;
                for (i, c) in controls.iter().enumerate() {
                    check(*c)?;
                    if c == target || controls[..i].contains(c) {
                        return Err(SimError::RepeatedQubit(*c));
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, g: Gate) -> &mut Self {
        self.gates.push(g);
        self
    }

    pub fn extend(&mut self, other: &Circuit) -> &mut Self {
        self.gates.extend(other.gates.iter().cloned());
        self
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Gates in reverse order. Every gate here is self-inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }

    pub fn count(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `n` qubits.
    pub fn new(n: usize) -> Result<Self, SimError> {
        StateVector::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self, SimError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(SimError::QubitCount(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(SimError::QubitCount(n));
        }
        if amps.len() != 1 << n {
            return Err(SimError::Length {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        let s = StateVector { n, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest amplitude-wise difference to `other`.
    pub fn max_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    fn check_register(&self, qubits: &[usize]) -> Result<(), SimError> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n {
                return Err(SimError::QubitIndex {
                    qubit: q,
                    n: self.n,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(SimError::RepeatedQubit(q));
            }
        }
        Ok(())
    }

    pub fn apply(&mut self, g: &Gate) -> Result<(), SimError> {
        g.validate(self.n)?;
        match g {
            Gate::X(q) => {
                let m = self.mask(*q);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Gate::H(q) => {
                let m = self.mask(*q);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (a, b) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                        self.amps[i | m] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::Z(q) => {
                let m = self.mask(*q);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a = -*a;
                    }
                }
            }
            Gate::Mcx { controls, target } => {
                let cm = controls.iter().fold(0, |acc, &c| acc | self.mask(c));
                let tm = self.mask(*target);
                for i in 0..self.amps.len() {
                    if i & cm == cm && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<(), SimError> {
        if c.n > self.n {
            return Err(SimError::QubitIndex {
                qubit: c.n - 1,
                n: self.n,
            });
        }
        for g in &c.gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// `self` on the high qubits, `other` on the low ones.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, SimError> {
        let n = self.n + other.n;
        if n > MAX_QUBITS {
            return Err(SimError::QubitCount(n));
        }
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { n, amps })
    }

    /// Value of the register `qubits` (first listed qubit most significant)
    /// in basis state `index`.
    pub fn register_value(&self, index: usize, qubits: &[usize]) -> usize {
        qubits.iter().fold(0, |acc, &q| {
            (acc << 1) | usize::from(index & self.mask(q) != 0)
        })
    }

    /// Marginal distribution over the `2^|qubits|` register values.
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>, SimError> {
        self.check_register(qubits)?;
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[self.register_value(i, qubits)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Born-rule probabilities of each observed bitstring on `qubits`.
    /// Outcomes below `1e-14` are dropped.
    pub fn probabilities(&self, qubits: &[usize]) -> Result<BTreeMap<String, f64>, SimError> {
        let w = qubits.len();
        Ok(self
            .marginal(qubits)?
            .into_iter()
            .enumerate()
            .filter(|(_, p)| *p > 1e-14)
            .map(|(v, p)| (bitstring(v, w), p))
            .collect())
    }

    /// `shots` independent measurements of `qubits` by inverse-CDF sampling.
    /// The state is left untouched.
    pub fn sample(
        &self,
        qubits: &[usize],
        shots: u64,
        rng: &mut SeededRng,
    ) -> Result<Histogram, SimError> {
        let w = qubits.len();
        let cdf = cumulative(&self.marginal(qubits)?);
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(draw(&cdf, rng.next_f64())).or_insert(0) += 1;
        }
        Ok(counts
            .into_iter()
            .map(|(v, c)| (bitstring(v, w), c))
            .collect())
    }

    /// Measures `qubits`, collapsing the state onto the outcome. Returns the
    /// outcome as a register value.
    pub fn measure(&mut self, qubits: &[usize], rng: &mut SeededRng) -> Result<usize, SimError> {
        let cdf = cumulative(&self.marginal(qubits)?);
        let outcome = draw(&cdf, rng.next_f64());
        let mut kept = 0.0;
        for i in 0..self.amps.len() {
            if self.register_value(i, qubits) == outcome {
                kept += self.amps[i].norm_sqr();
            } else {
                self.amps[i] = Complex64::new(0.0, 0.0);
            }
        }
        let scale = 1.0 / kept.sqrt();
        for a in &mut self.amps {
            *a *= scale;
        }
        Ok(outcome)
    }

    /// Functional form of [`measure`](Self::measure): outcome bitstring and
    /// the collapsed state.
    pub fn measure_collapse(
        &self,
        qubits: &[usize],
        rng: &mut SeededRng,
    ) -> Result<(String, StateVector), SimError> {
        let mut s = self.clone();
        let v = s.measure(qubits, rng)?;
        Ok((bitstring(v, qubits.len()), s))
    }
}

/// Functional gate application.
pub fn apply_gate(s: &StateVector, g: &Gate) -> Result<StateVector, SimError> {
    let mut out = s.clone();
    out.apply(g)?;
    Ok(out)
}

pub fn bitstring(value: usize, width: usize) -> String {
    (0..width)
        .map(|i| {
            if value >> (width - 1 - i) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

// First outcome whose cumulative weight exceeds u * total. Falls back to the
// last outcome with nonzero weight.
pub(crate) fn draw(cdf: &[f64], u: f64) -> usize {
    let total = *cdf.last().unwrap_or(&0.0);
    let target = u * total;
    let i = cdf.partition_point(|&c| c <= target);
    if i < cdf.len() {
        i
    } else {
        let mut j = cdf.len() - 1;
        while j > 0 && cdf[j] == cdf[j - 1] {
            j -= 1;
        }
        j
    }
}

/// Qubit roles for an ancilla-based multi-controlled X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McxLayout {
    pub controls: Vec<usize>,
    pub target: usize,
    /// Clean (|0>) work qubits; at least `controls.len() - 2` are used.
    pub ancillas: Vec<usize>,
}

/// Toffoli-ladder form of an `m`-controlled X (`m >= 3`) using `m - 2`
/// clean ancillas: the AND of the controls is accumulated along the
/// ancillas, one Toffoli hits the target, and the ladder is undone so the
/// ancillas return to |0>. `2(m - 2) + 1` Toffolis in total.
pub fn decompose_mcx(n: usize, layout: &McxLayout) -> Result<Circuit, SimError> {
    let m = layout.controls.len();
    if m < 3 {
        return Err(SimError::TooFewControls(m));
    }
    if layout.ancillas.len() < m - 2 {
        return Err(SimError::InsufficientAncillas {
            controls: m,
            needed: m - 2,
            got: layout.ancillas.len(),
        });
    }
    let c = &layout.controls;
    let anc = &layout.ancillas[..m - 2];
    let mut ladder = Circuit::new(n);
    ladder.push(Gate::toffoli(c[0], c[1], anc[0]));
    for i in 1..m - 2 {
        ladder.push(Gate::toffoli(c[i + 1], anc[i - 1], anc[i]));
    }
    let mut all: Vec<usize> = c.clone();
    all.push(layout.target);
    all.extend_from_slice(anc);
    let probe = Gate::Mcx {
        controls: all[..all.len() - 1].to_vec(),
        target: *all.last().unwrap(),
    };
    probe.validate(n)?;

    let mut out = Circuit::new(n);
    out.extend(&ladder);
    out.push(Gate::toffoli(c[m - 1], anc[m - 3], layout.target));
    out.extend(&ladder.inverse());
    Ok(out)
}
