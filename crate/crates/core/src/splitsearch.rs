//! Full-quantum split search.
//!
//! Every atomic clause gets a code: one bit per ⊗-Right split (tensor-only
//! sequents) or one bit pair per splitting step (sequents with `-o`),
//! followed by the clause index. A Grover oracle marks the set of correct
//! codes inside the uniform superposition over all codes of that width;
//! measured codes are collected until every clause index has been seen,
//! then decoded back into a proof and checked.
//!
//! The oracle is built from a known derivation, so the search recovers
//! rather than discovers the splits. For `-o` sequents the derivation
//! skeleton comes from the classical prover.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::classical::{match_atom_pairs, prove_bruteforce, PairError};
use crate::grover::{
    grover_iterations, marked_probability, run_grover, success_probability, BasisSet, GroverError,
    MarkedSetOracle, Preparation,
};
use crate::qsim::{bitstring, cumulative, draw, Histogram, SeededRng, SimError, MAX_QUBITS};
use crate::seqcalc::{
    apply_rule, check_proof, saturate_tensor_left, Atom, Formula, Fragment, Premise, ProofTree,
    RuleApp, Sequent, Split,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SplitSearchError {
    #[error("not provable: {0}")]
    NotProvable(String),
    #[error("code width {width} exceeds {max} qubits")]
    TooWide { width: usize, max: usize },
    #[error("no codes to search for")]
    NoCodes,
    #[error("codes must share one width and have distinct indices")]
    MalformedCodes,
    #[error("malformed code string {0:?}")]
    CodeSyntax(String),
    #[error("schedule does not derive the sequent: {0}")]
    InvalidSchedule(String),
    #[error("inconsistent assignment: {0}")]
    InconsistentAssignment(String),
    #[error("assignment has {collected} of {total} clauses")]
    Incomplete { collected: usize, total: usize },
    #[error("search budget of {budget} runs exhausted with {collected} of {total} clauses")]
    BudgetExhausted {
        budget: u64,
        collected: usize,
        total: usize,
    },
    #[error(transparent)]
    Grover(#[from] GroverError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

fn inconsistent(msg: impl Into<String>) -> SplitSearchError {
    SplitSearchError::InconsistentAssignment(msg.into())
}

/// `ceil(log2 n)`, at least 1.
pub fn index_width(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1) as usize
}

/// A per-clause code: step bits followed by index bits, most significant
/// bit first.
pub trait SplitCode {
    fn step_bits(&self) -> Vec<bool>;
    fn index(&self) -> usize;
    fn index_width(&self) -> usize;

    fn width(&self) -> usize {
        self.step_bits().len() + self.index_width()
    }

    /// Basis-state index of the code.
    fn value(&self) -> usize {
        let steps = self
            .step_bits()
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        (steps << self.index_width()) | self.index()
    }

    /// `steps|index`, e.g. `110|00`.
    fn bitstring(&self) -> String {
        format_code(&self.step_bits(), self.index(), self.index_width())
    }
}

fn format_code(steps: &[bool], index: usize, iw: usize) -> String {
    let mut s: String = steps.iter().map(|&b| if b { '1' } else { '0' }).collect();
    s.push('|');
    s.push_str(&bitstring(index, iw));
    s
}

/// Code of one clause of a tensor-only sequent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitCodeTensor {
    pub k: usize,
    /// Premise taken at each ⊗-Right split in pre-order, `false` for the
    /// first (left) premise. Zero after the clause reaches its axiom.
    pub split_bits: Vec<bool>,
    /// Position of the clause on the left side.
    pub index: usize,
}

impl SplitCode for SplitCodeTensor {
    fn step_bits(&self) -> Vec<bool> {
        self.split_bits.clone()
    }

    fn index(&self) -> usize {
        self.index
    }

    fn index_width(&self) -> usize {
        index_width(self.k)
    }
}

impl fmt::Display for SplitCodeTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bitstring())
    }
}

/// Code of one clause of a sequent with linear implications.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitCodeLolli {
    pub n_atoms: usize,
    /// `(sequent, side)` per splitting step: which premise the clause goes
    /// to and on which side of it it lands. `(false, false)` once the
    /// clause has left the branch being split.
    pub steps: Vec<(bool, bool)>,
    /// Rank of the clause in (name, occurrence, side) order.
    pub index: usize,
}

impl SplitCode for SplitCodeLolli {
    fn step_bits(&self) -> Vec<bool> {
        self.steps.iter().flat_map(|&(q, s)| [q, s]).collect()
    }

    fn index(&self) -> usize {
        self.index
    }

    fn index_width(&self) -> usize {
        index_width(self.n_atoms)
    }
}

impl fmt::Display for SplitCodeLolli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bitstring())
    }
}

/// Measured codes, keyed by clause index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitAssignment {
    pub width: usize,
    pub index_width: usize,
    pub total: usize,
    pub codes: BTreeMap<usize, usize>,
}

impl SplitAssignment {
    pub fn new(width: usize, index_width: usize, total: usize) -> Self {
        SplitAssignment {
            width,
            index_width,
            total,
            codes: BTreeMap::new(),
        }
    }

    /// The assignment a noiseless search would collect.
    pub fn from_codes<C: SplitCode>(codes: &[C]) -> Result<Self, SplitSearchError> {
        let (width, iw) = code_shape(codes)?;
        let mut a = SplitAssignment::new(width, iw, codes.len());
        for c in codes {
            a.codes.insert(c.index(), c.value());
        }
        Ok(a)
    }

    /// Parses codes written as `steps|index`.
    pub fn from_bitstrings<S: AsRef<str>>(codes: &[S]) -> Result<Self, SplitSearchError> {
        let mut parsed = Vec::with_capacity(codes.len());
        for c in codes {
            let c = c.as_ref();
            let (steps, index) = c.split_once('|').unwrap_or(("", c));
            let bin = |s: &str| {
                s.chars().all(|ch| ch == '0' || ch == '1')
                    && (s.is_empty() || usize::from_str_radix(s, 2).is_ok())
            };
            if index.is_empty() || !bin(steps) || !bin(index) {
                return Err(SplitSearchError::CodeSyntax(c.to_owned()));
            }
            let steps: Vec<bool> = steps.chars().map(|ch| ch == '1').collect();
            let value = usize::from_str_radix(&format!("{}{index}", bits_str(&steps)), 2)
                .map_err(|_| SplitSearchError::CodeSyntax(c.to_owned()))?;
            parsed.push((steps.len() + index.len(), index.len(), value));
        }
        let Some(&(width, iw, _)) = parsed.first() else {
            return Err(SplitSearchError::NoCodes);
        };
        let mut a = SplitAssignment::new(width, iw, parsed.len());
        for (w, i, v) in parsed {
            if w != width || i != iw || a.codes.insert(v & ((1 << iw) - 1), v).is_some() {
                return Err(SplitSearchError::MalformedCodes);
            }
        }
        Ok(a)
    }

    pub fn is_complete(&self) -> bool {
        self.codes.len() == self.total && (0..self.total).all(|i| self.codes.contains_key(&i))
    }

    pub fn step_count(&self) -> usize {
        self.width - self.index_width
    }

    /// Step bits of clause `index`, most significant first.
    pub fn step_bits(&self, index: usize) -> Option<Vec<bool>> {
        let v = self.codes.get(&index)?;
        let steps = self.step_count();
        Some(
            (0..steps)
                .map(|i| v >> (self.width - 1 - i) & 1 == 1)
                .collect(),
        )
    }

    pub fn bitstrings(&self) -> Vec<String> {
        self.codes
            .iter()
            .map(|(&i, _)| format_code(&self.step_bits(i).unwrap(), i, self.index_width))
            .collect()
    }

    fn require_complete(&self, total: usize, width: usize) -> Result<(), SplitSearchError> {
        if self.total != total || !self.is_complete() {
            return Err(SplitSearchError::Incomplete {
                collected: self.codes.len(),
                total,
            });
        }
        if self.width != width || self.index_width != index_width(total) {
            return Err(inconsistent(format!(
                "codes are {} bits wide, expected {width}",
                self.width
            )));
        }
        Ok(())
    }
}

fn bits_str(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn code_shape<C: SplitCode>(codes: &[C]) -> Result<(usize, usize), SplitSearchError> {
    let first = codes.first().ok_or(SplitSearchError::NoCodes)?;
    let (width, iw) = (first.width(), first.index_width());
    let mut seen = std::collections::BTreeSet::new();
    for c in codes {
        if c.width() != width || c.index_width() != iw || !seen.insert(c.index()) {
            return Err(SplitSearchError::MalformedCodes);
        }
    }
    Ok((width, iw))
}

// ---------------------------------------------------------------------------
// tensor-only sequents

fn saturate_balanced(s: &Sequent) -> Result<(Sequent, Vec<RuleApp>), SplitSearchError> {
    if !s.is_tensor_only() {
        return Err(SplitSearchError::NotProvable(
            "tensor codes need a tensor-only sequent".into(),
        ));
    }
    let (sat, steps) =
        saturate_tensor_left(s).map_err(|e| SplitSearchError::NotProvable(e.to_string()))?;
    Ok((sat, steps))
}

/// Codes for a tensor-only sequent, one per left clause after ⊗-Left
/// saturation. Each clause is paired with a same-name clause on the right;
/// at every ⊗ of the right formula (pre-order) a live clause gets 0 if its
/// partner sits in the left operand and 1 otherwise. Clauses already
/// separated into another branch get 0.
pub fn derive_split_codes_tensor(s: &Sequent) -> Result<Vec<SplitCodeTensor>, SplitSearchError> {
    let (sat, _) = saturate_balanced(s)?;
    let table = match_atom_pairs(&sat).map_err(|e| match e {
        PairError::AtomMismatch => SplitSearchError::NotProvable("atom mismatch".into()),
        other => SplitSearchError::NotProvable(other.to_string()),
    })?;
    let partner = table.right_to_left();
    let k = table.k;
    let mut bits = vec![Vec::with_capacity(k.saturating_sub(1)); k];
    tensor_walk(&sat.right[0], 0, &mut |lo, mid, hi| {
        for (b, &a) in partner.iter().enumerate() {
            bits[a].push((lo..hi).contains(&b) && b >= mid);
        }
    });
    Ok(bits
        .into_iter()
        .enumerate()
        .map(|(index, split_bits)| SplitCodeTensor {
            k,
            split_bits,
            index,
        })
        .collect())
}

// Calls `visit(lo, mid, hi)` for each ⊗ node in pre-order, where `lo..mid`
// and `mid..hi` are the right positions under its two operands.
fn tensor_walk(f: &Formula, lo: usize, visit: &mut impl FnMut(usize, usize, usize)) {
    if let Formula::Tensor(x, y) = f {
        let mid = lo + x.atom_count();
        visit(lo, mid, mid + y.atom_count());
        tensor_walk(x, lo, visit);
        tensor_walk(y, mid, visit);
    }
}

/// Rebuilds the ⊗-Right tree of a tensor-only sequent from a complete
/// assignment. Each split must route every live clause by its bit and
/// every closed clause must carry a 0; anything else, or a tree that does
/// not check, is an inconsistent assignment.
pub fn decode_assignment_tensor(
    a: &SplitAssignment,
    s: &Sequent,
) -> Result<ProofTree, SplitSearchError> {
    let (sat, steps) = saturate_balanced(s)?;
    let k = sat.left.len();
    if !sat.left.iter().all(Formula::is_atom) || k == 0 {
        return Err(SplitSearchError::NotProvable(
            "left side is not atomic".into(),
        ));
    }
    let right = sat.right[0].clone();
    a.require_complete(k, right.tensor_count() + index_width(k))?;
    let bits: Vec<Vec<bool>> = (0..k).map(|i| a.step_bits(i).unwrap()).collect();
    let mut step = 0;
    let top = decode_tensor_node(sat, (0..k).collect(), &right, &bits, &mut step)?;
    if !check_proof(&top) {
        return Err(inconsistent("decoded tree does not check"));
    }
    Ok(ProofTree::with_tensor_left(s, &steps, top))
}

fn decode_tensor_node(
    s: Sequent,
    live: Vec<usize>,
    right: &Formula,
    bits: &[Vec<bool>],
    step: &mut usize,
) -> Result<ProofTree, SplitSearchError> {
    match right {
        Formula::Atom(_) => {
            if apply_rule(&s, &RuleApp::Axiom).is_err() {
                return Err(inconsistent(format!("leaf {s} is not an axiom")));
            }
            Ok(ProofTree::axiom(s))
        }
        Formula::Tensor(x, y) => {
            let j = *step;
            *step += 1;
            for (c, b) in bits.iter().enumerate() {
                if b[j] && !live.contains(&c) {
                    return Err(inconsistent(format!(
                        "clause {c} is closed but has bit 1 at split {j}"
                    )));
                }
            }
            let routes: Vec<Premise> = live
                .iter()
                .map(|&c| Premise::from_bit(bits[c][j]))
                .collect();
            let rule = RuleApp::TensorRight {
                pos: 0,
                split: Split::new(routes.clone(), vec![]),
            };
            let premises =
                apply_rule(&s, &rule).map_err(|e| inconsistent(format!("split {j}: {e}")))?;
            let mut live1 = Vec::new();
            let mut live2 = Vec::new();
            for (&c, r) in live.iter().zip(&routes) {
                match r {
                    Premise::First => live1.push(c),
                    Premise::Second => live2.push(c),
                }
            }
            let mut premises = premises.into_iter();
            let t1 = decode_tensor_node(premises.next().unwrap(), live1, x, bits, step)?;
            let t2 = decode_tensor_node(premises.next().unwrap(), live2, y, bits, step)?;
            Ok(ProofTree::new(s, rule, vec![t1, t2]))
        }
        Formula::Lolli(..) => Err(SplitSearchError::NotProvable(
            "tensor codes need a tensor-only sequent".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// sequents with linear implication

/// Relabels every atom with its clause index so that clauses can be traced
/// through rule applications. Indices follow (name, occurrence, side).
/// Returns the tagged sequent and the original atom of each index.
fn tag(s: &Sequent) -> (Sequent, Vec<Atom>) {
    let mut all: Vec<(Atom, bool)> = s.left_atoms().into_iter().map(|a| (a, false)).collect();
    all.extend(s.right_atoms().into_iter().map(|a| (a, true)));
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, sa) = &all[i];
        let (b, sb) = &all[j];
        (&a.name, a.occ, sa).cmp(&(&b.name, b.occ, sb))
    });
    let mut id_of = vec![0u32; all.len()];
    for (rank, &i) in order.iter().enumerate() {
        id_of[i] = rank as u32;
    }
    let mut next = 0;
    let mut relabel = |a: &Atom| {
        let id = id_of[next];
        next += 1;
        Atom::new(a.name.clone(), id)
    };
    let left: Vec<Formula> = s.left.iter().map(|f| f.map_atoms(&mut relabel)).collect();
    let right: Vec<Formula> = s.right.iter().map(|f| f.map_atoms(&mut relabel)).collect();
    let originals = order.iter().map(|&i| all[i].0.clone()).collect();
    (Sequent::new(left, right), originals)
}

fn untag(t: &ProofTree, originals: &[Atom]) -> ProofTree {
    let back = |side: &[Formula]| -> Vec<Formula> {
        side.iter()
            .map(|f| f.map_atoms(&mut |a: &Atom| originals[a.occ as usize].clone()))
            .collect()
    };
    ProofTree::new(
        Sequent::new(back(&t.conclusion.left), back(&t.conclusion.right)),
        t.rule.clone(),
        t.premises.iter().map(|p| untag(p, originals)).collect(),
    )
}

fn ids(fs: &[Formula]) -> Vec<usize> {
    let mut atoms = Vec::new();
    for f in fs {
        f.atoms_into(&mut atoms);
    }
    atoms.into_iter().map(|a| a.occ as usize).collect()
}

// Which side of `s` holds clause `id`: Some(false) left, Some(true) right.
fn side_of(s: &Sequent, id: usize) -> Option<bool> {
    if ids(&s.left).contains(&id) {
        Some(false)
    } else if ids(&s.right).contains(&id) {
        Some(true)
    } else {
        None
    }
}

/// Rule applications of a proof in pre-order; the skeleton handed to
/// [`derive_split_codes_lolli`] and [`decode_assignment_lolli`].
pub fn schedule_of(t: &ProofTree) -> Vec<RuleApp> {
    t.preorder().into_iter().map(|n| n.rule.clone()).collect()
}

/// Number of splitting steps (⊗-Right, ⊸-Left, ⊸-Right) in a schedule.
pub fn split_step_count(schedule: &[RuleApp]) -> usize {
    schedule.iter().filter(|r| r.is_split_step()).count()
}

fn replay(
    s: Sequent,
    rules: &mut std::slice::Iter<'_, RuleApp>,
) -> Result<ProofTree, SplitSearchError> {
    let rule = rules
        .next()
        .ok_or_else(|| SplitSearchError::InvalidSchedule("schedule ends early".into()))?
        .clone();
    let premises =
        apply_rule(&s, &rule).map_err(|e| SplitSearchError::InvalidSchedule(e.to_string()))?;
    let premises = premises
        .into_iter()
        .map(|p| replay(p, rules))
        .collect::<Result<_, _>>()?;
    Ok(ProofTree::new(s, rule, premises))
}

fn codes_from_tree(t: &ProofTree, n_atoms: usize) -> Vec<SplitCodeLolli> {
    let steps: Vec<&ProofTree> = t
        .preorder()
        .into_iter()
        .filter(|n| n.rule.is_split_step())
        .collect();
    (0..n_atoms)
        .map(|c| SplitCodeLolli {
            n_atoms,
            steps: steps
                .iter()
                .map(|node| {
                    if side_of(&node.conclusion, c).is_none() {
                        return (false, false);
                    }
                    node.premises
                        .iter()
                        .enumerate()
                        .find_map(|(i, p)| side_of(&p.conclusion, c).map(|side| (i == 1, side)))
                        .unwrap_or((false, false))
                })
                .collect(),
            index: c,
        })
        .collect()
}

/// Codes for a sequent with linear implications along the derivation
/// given by `schedule` (rule applications in pre-order, e.g. from
/// [`schedule_of`] on a classical proof).
///
/// ⊸-Right counts as every clause going to the first premise, with the
/// side it ends up on. ⊸-Left and ⊗-Right give each live clause its premise
/// and side. Clauses outside the branch being split get `(0, 0)`. Mix,
/// Axiom and ⊗-Left are not encoded.
pub fn derive_split_codes_lolli(
    s: &Sequent,
    schedule: &[RuleApp],
) -> Result<Vec<SplitCodeLolli>, SplitSearchError> {
    let (tagged, _) = tag(s);
    let mut rules = schedule.iter();
    let tree = replay(tagged, &mut rules)?;
    if rules.next().is_some() {
        return Err(SplitSearchError::InvalidSchedule(
            "schedule has trailing steps".into(),
        ));
    }
    if !check_proof(&tree) {
        return Err(SplitSearchError::InvalidSchedule(
            "schedule does not close every branch".into(),
        ));
    }
    Ok(codes_from_tree(&tree, s.atom_count()))
}

fn skip_subtree(rules: &mut std::slice::Iter<'_, RuleApp>) -> Result<(), SplitSearchError> {
    let r = rules
        .next()
        .ok_or_else(|| SplitSearchError::InvalidSchedule("schedule ends early".into()))?;
    for _ in 0..r.arity() {
        skip_subtree(rules)?;
    }
    Ok(())
}

struct LolliDecoder<'a> {
    bits: &'a [Vec<bool>],
    step: usize,
}

impl LolliDecoder<'_> {
    fn node(
        &mut self,
        s: Sequent,
        rules: &mut std::slice::Iter<'_, RuleApp>,
    ) -> Result<ProofTree, SplitSearchError> {
        let skeleton = rules
            .next()
            .ok_or_else(|| SplitSearchError::InvalidSchedule("schedule ends early".into()))?
            .clone();
        let rule = match skeleton {
            RuleApp::Mix { .. } => {
                // atomic leaves are closed classically, they carry no code bits
                for _ in 0..2 {
                    skip_subtree(rules)?;
                }
                return prove_bruteforce(&s, Fragment::TensorLolli)
                    .ok_or_else(|| inconsistent(format!("leaf {s} has no derivation")));
            }
            RuleApp::TensorRight { pos, .. } => {
                let split = self.route(&s.left, None, &s.right, Some(pos))?;
                RuleApp::TensorRight { pos, split }
            }
            RuleApp::LolliLeft { pos, .. } => {
                let split = self.route(&s.left, Some(pos), &s.right, None)?;
                RuleApp::LolliLeft { pos, split }
            }
            other => other,
        };
        if rule.is_split_step() {
            self.step += 1;
        }
        let premises = apply_rule(&s, &rule).map_err(|e| inconsistent(e.to_string()))?;
        let premises = premises
            .into_iter()
            .map(|p| self.node(p, rules))
            .collect::<Result<_, _>>()?;
        Ok(ProofTree::new(s, rule, premises))
    }

    // Every clause of a context formula must name the same premise.
    fn route(
        &self,
        left: &[Formula],
        skip_left: Option<usize>,
        right: &[Formula],
        skip_right: Option<usize>,
    ) -> Result<Split, SplitSearchError> {
        let j = self.step;
        let side =
            |fs: &[Formula], skip: Option<usize>| -> Result<Vec<Premise>, SplitSearchError> {
                fs.iter()
                    .enumerate()
                    .filter(|(i, _)| Some(*i) != skip)
                    .map(|(_, f)| {
                        let bits: Vec<bool> = ids(std::slice::from_ref(f))
                            .into_iter()
                            .map(|c| self.bits[c][2 * j])
                            .collect();
                        if bits.iter().all(|&b| b == bits[0]) {
                            Ok(Premise::from_bit(bits[0]))
                        } else {
                            Err(inconsistent(format!("{f} is torn apart at step {j}")))
                        }
                    })
                    .collect()
            };
        Ok(Split::new(side(left, skip_left)?, side(right, skip_right)?))
    }
}

/// Rebuilds a derivation from a complete assignment and the rule skeleton
/// of `schedule` (its split choices are ignored and re-read from the
/// codes). The decoded tree must check and must reproduce every code
/// exactly, so stray bits on closed clauses are rejected.
pub fn decode_assignment_lolli(
    a: &SplitAssignment,
    s: &Sequent,
    schedule: &[RuleApp],
) -> Result<ProofTree, SplitSearchError> {
    let n = s.atom_count();
    a.require_complete(n, 2 * split_step_count(schedule) + index_width(n))?;
    let (tagged, originals) = tag(s);
    let bits: Vec<Vec<bool>> = (0..n).map(|i| a.step_bits(i).unwrap()).collect();
    let mut dec = LolliDecoder {
        bits: &bits,
        step: 0,
    };
    let tree = dec.node(tagged, &mut schedule.iter())?;
    if !check_proof(&tree) {
        return Err(inconsistent("decoded tree does not check"));
    }
    for code in codes_from_tree(&tree, n) {
        if Some(code.value()) != a.codes.get(&code.index).copied() {
            return Err(inconsistent(format!(
                "clause {} decodes to {code}",
                originals[code.index]
            )));
        }
    }
    Ok(untag(&tree, &originals))
}

// ---------------------------------------------------------------------------
// search

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitSearchStats {
    pub width: usize,
    pub marked: usize,
    pub iterations_per_run: u64,
    pub runs: u64,
    pub oracle_calls: u64,
    /// Marked probability of the amplified state, from the simulation.
    pub p_marked: f64,
    /// `sin^2((2m+1) asin(sqrt(M/2^w)))`.
    pub p_theory: f64,
    pub accepted: usize,
    pub rejected_unmarked: u64,
    pub duplicates: u64,
    pub complete: bool,
    /// Every measured outcome.
    pub histogram: Histogram,
}

/// Runs amplitude amplification over all `width`-bit codes with `codes`
/// marked, measuring once per run. An outcome is kept when it is a marked
/// code whose index has not been collected yet. Stops when every index is
/// collected or after `budget` runs; `stats.complete` tells which.
///
/// Run `r` draws from stream `r` of `seed`.
pub fn run_split_search<C: SplitCode>(
    codes: &[C],
    budget: u64,
    seed: u64,
) -> Result<(SplitAssignment, SplitSearchStats), SplitSearchError> {
    let (width, iw) = code_shape(codes)?;
    if width > MAX_QUBITS {
        return Err(SplitSearchError::TooWide {
            width,
            max: MAX_QUBITS,
        });
    }
    let marked: Vec<usize> = codes.iter().map(SplitCode::value).collect();
    let oracle = MarkedSetOracle::new(width, marked.iter().copied())?;
    let space = 1u64 << width;
    let iters = grover_iterations(space, marked.len() as u64)?;
    let prep = Preparation::from_basis_set(&BasisSet::uniform(width)?);
    let state = run_grover(&prep, &oracle, iters)?;
    let probs: Vec<f64> = state.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let cdf = cumulative(&probs);

    let mut assignment = SplitAssignment::new(width, iw, codes.len());
    let mut stats = SplitSearchStats {
        width,
        marked: marked.len(),
        iterations_per_run: iters,
        runs: 0,
        oracle_calls: 0,
        p_marked: marked_probability(&state, &oracle),
        p_theory: success_probability(space, marked.len() as u64, iters),
        accepted: 0,
        rejected_unmarked: 0,
        duplicates: 0,
        complete: false,
        histogram: Histogram::new(),
    };
    let index_mask = (1usize << iw) - 1;
    for run in 0..budget {
        if assignment.is_complete() {
            break;
        }
        let mut rng = SeededRng::stream(seed, run);
        let outcome = draw(&cdf, rng.next_f64());
        stats.runs += 1;
        stats.oracle_calls += iters;
        *stats
            .histogram
            .entry(bitstring(outcome, width))
            .or_insert(0) += 1;
        if !oracle.marked().contains(&outcome) {
            stats.rejected_unmarked += 1;
            continue;
        }
        match assignment.codes.entry(outcome & index_mask) {
            Entry::Occupied(_) => stats.duplicates += 1,
            Entry::Vacant(slot) => {
                slot.insert(outcome);
                stats.accepted += 1;
            }
        }
    }
    stats.complete = assignment.is_complete();
    Ok((assignment, stats))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitSearchConfig {
    /// Maximum number of measured runs.
    pub budget: u64,
}

impl Default for SplitSearchConfig {
    fn default() -> Self {
        SplitSearchConfig { budget: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeKind {
    Tensor,
    Lolli,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitSearchProof {
    #[serde(skip)]
    pub proof: ProofTree,
    pub kind: CodeKind,
    /// The marked codes, by clause index.
    pub codes: Vec<String>,
    /// Where the rule skeleton came from, for `-o` sequents.
    pub schedule_source: Option<&'static str>,
    pub stats: SplitSearchStats,
}

/// Derives the codes, searches for them and decodes the result.
///
/// Tensor-only sequents are saturated with ⊗-Left and use one bit per
/// split; an atom mismatch is reported before any simulation. Other
/// sequents take their rule skeleton from the classical prover.
pub fn prove_splitsearch(
    s: &Sequent,
    cfg: &SplitSearchConfig,
    seed: u64,
) -> Result<SplitSearchProof, SplitSearchError> {
    let budget_error = |stats: &SplitSearchStats, total: usize| SplitSearchError::BudgetExhausted {
        budget: cfg.budget,
        collected: stats.accepted,
        total,
    };
    if s.is_tensor_only() {
        let codes = derive_split_codes_tensor(s)?;
        let (assignment, stats) = run_split_search(&codes, cfg.budget, seed)?;
        if !stats.complete {
            return Err(budget_error(&stats, codes.len()));
        }
        let proof = decode_assignment_tensor(&assignment, s)?;
        return Ok(SplitSearchProof {
            proof,
            kind: CodeKind::Tensor,
            codes: codes.iter().map(SplitCode::bitstring).collect(),
            schedule_source: None,
            stats,
        });
    }
    let classical = prove_bruteforce(s, Fragment::TensorLolli)
        .ok_or_else(|| SplitSearchError::NotProvable("no derivation exists".into()))?;
    let schedule = schedule_of(&classical);
    let codes = derive_split_codes_lolli(s, &schedule)?;
    let (assignment, stats) = run_split_search(&codes, cfg.budget, seed)?;
    if !stats.complete {
        return Err(budget_error(&stats, codes.len()));
    }
    let proof = decode_assignment_lolli(&assignment, s, &schedule)?;
    Ok(SplitSearchProof {
        proof,
        kind: CodeKind::Lolli,
        codes: codes.iter().map(SplitCode::bitstring).collect(),
        schedule_source: Some("classical"),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::prove_bruteforce;
    use crate::seqcalc::parse_sequent;

    const K4: &str = "A, B, C, D |- D*(B*(A*C))";
    const LOLLI: &str = "A1, A2 -o B1 |- C1 -o B2, C2";

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn strings<C: SplitCode>(codes: &[C]) -> Vec<String> {
        codes.iter().map(SplitCode::bitstring).collect()
    }

    #[test]
    fn tensor_codes_k4() {
        let codes = derive_split_codes_tensor(&seq(K4)).unwrap();
        assert_eq!(strings(&codes), ["110|00", "100|01", "111|10", "000|11"]);
        assert!(codes.iter().all(|c| c.width() == 5));
    }

    #[test]
    fn tensor_codes_k2_and_k1() {
        let codes = derive_split_codes_tensor(&seq("A, B |- A*B")).unwrap();
        assert_eq!(strings(&codes), ["0|0", "1|1"]);
        let values: Vec<usize> = codes.iter().map(SplitCode::value).collect();
        assert_eq!(values, [0b00, 0b11]);
        let one = derive_split_codes_tensor(&seq("A |- A")).unwrap();
        assert_eq!(strings(&one), ["|0"]);
    }

    #[test]
    fn tensor_codes_reject_mismatch() {
        assert_eq!(
            derive_split_codes_tensor(&seq("A |- B"))
                .unwrap_err()
                .to_string(),
            "not provable: atom mismatch"
        );
    }

    #[test]
    fn tensor_decode_matches_bruteforce() {
        let s = seq(K4);
        let a = SplitAssignment::from_codes(&derive_split_codes_tensor(&s).unwrap()).unwrap();
        let t = decode_assignment_tensor(&a, &s).unwrap();
        assert!(check_proof(&t));
        assert_eq!(Some(t), prove_bruteforce(&s, Fragment::TensorOnly));
    }

    #[test]
    fn printed_d_code_is_rejected() {
        let s = seq(K4);
        let a =
            SplitAssignment::from_bitstrings(&["110|00", "100|01", "111|10", "010|11"]).unwrap();
        let e = decode_assignment_tensor(&a, &s).unwrap_err();
        assert!(e.to_string().starts_with("inconsistent assignment"), "{e}");
    }

    #[test]
    fn tensor_decode_rejects_wrong_routes() {
        let s = seq(K4);
        // A and D swap their first bit
        let a =
            SplitAssignment::from_bitstrings(&["010|00", "100|01", "111|10", "100|11"]).unwrap();
        assert!(matches!(
            decode_assignment_tensor(&a, &s),
            Err(SplitSearchError::InconsistentAssignment(_))
        ));
        let partial = SplitAssignment::from_bitstrings(&["110|00", "100|01"]).unwrap();
        assert!(matches!(
            decode_assignment_tensor(&partial, &s),
            Err(SplitSearchError::Incomplete { .. })
        ));
    }

    #[test]
    fn lolli_codes_worked_example() {
        let s = seq(LOLLI);
        let proof = prove_bruteforce(&s, Fragment::TensorLolli).unwrap();
        let codes = derive_split_codes_lolli(&s, &schedule_of(&proof)).unwrap();
        assert_eq!(
            strings(&codes),
            ["0000|000", "0001|001", "0010|010", "0111|011", "0010|100", "0111|101"]
        );
    }

    #[test]
    fn lolli_trivial_schedule() {
        let s = seq("A |- A");
        let codes = derive_split_codes_lolli(&s, &[RuleApp::Axiom]).unwrap();
        assert_eq!(strings(&codes), ["|0", "|1"]);
        assert!(derive_split_codes_lolli(&s, &[]).is_err());
        assert!(derive_split_codes_lolli(&s, &[RuleApp::Axiom, RuleApp::Axiom]).is_err());
    }

    #[test]
    fn lolli_decode_round_trip() {
        let s = seq(LOLLI);
        let proof = prove_bruteforce(&s, Fragment::TensorLolli).unwrap();
        let schedule = schedule_of(&proof);
        let a =
            SplitAssignment::from_codes(&derive_split_codes_lolli(&s, &schedule).unwrap()).unwrap();
        let t = decode_assignment_lolli(&a, &s, &schedule).unwrap();
        assert_eq!(t, proof);
        let leaves: Vec<String> = t.premises[0]
            .premises
            .iter()
            .map(|p| p.conclusion.to_string())
            .collect();
        assert_eq!(leaves, ["A1 |- A2", "B1, C1 |- B2, C2"]);
    }

    #[test]
    fn lolli_decode_rejects_stray_bits() {
        let s = seq(LOLLI);
        let schedule = schedule_of(&prove_bruteforce(&s, Fragment::TensorLolli).unwrap());
        let bad = SplitAssignment::from_bitstrings(&[
            "0000|000", "0001|001", "0010|010", "0111|011", "0010|100", "1111|101",
        ])
        .unwrap();
        assert!(matches!(
            decode_assignment_lolli(&bad, &s, &schedule),
            Err(SplitSearchError::InconsistentAssignment(_))
        ));
        // B1 sent to the first premise alongside A1
        let torn = SplitAssignment::from_bitstrings(&[
            "0000|000", "0001|001", "0000|010", "0111|011", "0010|100", "0111|101",
        ])
        .unwrap();
        assert!(decode_assignment_lolli(&torn, &s, &schedule).is_err());
    }

    #[test]
    fn search_k4() {
        let codes = derive_split_codes_tensor(&seq(K4)).unwrap();
        let (a, stats) = run_split_search(&codes, 200, 5).unwrap();
        assert!(stats.complete);
        assert_eq!(stats.iterations_per_run, 2);
        assert!((stats.p_marked - 0.9453125).abs() < 1e-9);
        assert!((stats.p_theory - stats.p_marked).abs() < 1e-9);
        assert_eq!(stats.oracle_calls, 2 * stats.runs);
        assert_eq!(
            stats.accepted as u64 + stats.rejected_unmarked + stats.duplicates,
            stats.runs
        );
        assert_eq!(a, SplitAssignment::from_codes(&codes).unwrap());
    }

    #[test]
    fn search_budget_zero() {
        let codes = derive_split_codes_tensor(&seq(K4)).unwrap();
        let (a, stats) = run_split_search(&codes, 0, 5).unwrap();
        assert!(!stats.complete);
        assert!(a.codes.is_empty());
        assert_eq!(stats.runs, 0);
    }

    #[test]
    fn search_k2_half_probability() {
        let codes = derive_split_codes_tensor(&seq("A, B |- A*B")).unwrap();
        let (_, stats) = run_split_search(&codes, 50, 1).unwrap();
        assert!((stats.p_marked - 0.5).abs() < 1e-12);
    }

    #[test]
    fn prove_paths() {
        let cfg = SplitSearchConfig::default();
        let p = prove_splitsearch(&seq("A*(B*(C*D)) |- D*(B*(A*C))"), &cfg, 3).unwrap();
        assert!(check_proof(&p.proof));
        assert_eq!(p.kind, CodeKind::Tensor);
        let p = prove_splitsearch(&seq(LOLLI), &cfg, 3).unwrap();
        assert!(check_proof(&p.proof));
        assert_eq!(p.schedule_source, Some("classical"));
        assert_eq!(p.stats.width, 7);
        assert_eq!(
            prove_splitsearch(&seq("A |- B"), &cfg, 3)
                .unwrap_err()
                .to_string(),
            "not provable: atom mismatch"
        );
    }

    #[test]
    fn code_string_parsing() {
        assert!(SplitAssignment::from_bitstrings(&["01|2"]).is_err());
        assert!(SplitAssignment::from_bitstrings(&["01|1", "1|0"]).is_err());
        assert!(SplitAssignment::from_bitstrings(&["01|1", "11|1"]).is_err());
        let a = SplitAssignment::from_bitstrings(&["110|00", "000|11"]).unwrap();
        assert_eq!(a.bitstrings(), ["110|00", "000|11"]);
        assert_eq!(a.step_bits(3), Some(vec![false, false, false]));
    }
}
