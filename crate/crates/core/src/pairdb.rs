//! Proof search through an entangled pair database.
//!
//! Each atom contributes a pair `(a, b)` of its left and right positions,
//! stored as the basis state `|a>|b>` of two `n`-qubit registers. For every
//! right position `b` a fresh copy of the database is amplified with an
//! oracle on the right register and the left register is measured, giving
//! the partner `a`. The recovered permutation fixes every ⊗-Right split.

use serde::Serialize;
use thiserror::Error;

use crate::classical::{match_atom_pairs, PairError, PairTable};
use crate::grover::{
    grover_iterations, marked_probability, run_grover, BasisSet, GroverError, PatternOracle,
    Preparation,
};
use crate::qsim::{Histogram, SeededRng, SimError, StateVector};
use crate::seqcalc::{
    apply_rule, check_proof, saturate_tensor_left, Formula, Premise, ProofTree, RuleApp, Sequent,
    Split,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PairDbError {
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error("not provable: {0}")]
    NotProvable(String),
    #[error("database copy {0} was already measured")]
    CopyConsumed(usize),
    #[error("no database copy {0}")]
    NoSuchCopy(usize),
    #[error("right position {b} outside 0..{k}")]
    Position { b: usize, k: usize },
    #[error("quantum recovery failed after {attempts} fresh databases")]
    RecoveryFailed { attempts: u32 },
    #[error(transparent)]
    Grover(#[from] GroverError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Register sizes for `k` atomic clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DbParams {
    pub k: usize,
    /// Qubits per register, `ceil(log2 k)` but at least 1.
    pub n: usize,
}

impl DbParams {
    pub fn for_k(k: usize) -> Self {
        let n = (usize::BITS - k.saturating_sub(1).leading_zeros()).max(1) as usize;
        DbParams { k, n }
    }

    pub fn qubits_per_copy(&self) -> usize {
        2 * self.n
    }

    /// Qubits holding the left position `a`.
    pub fn left_register(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    /// Qubits holding the right position `b`.
    pub fn right_register(&self) -> Vec<usize> {
        (self.n..2 * self.n).collect()
    }

    /// Grover rounds per query: `floor(pi/4 * sqrt(k))`.
    pub fn iterations(&self) -> u64 {
        grover_iterations(self.k as u64, 1).expect("k >= 1")
    }
}

/// Basis indices `a * 2^n + b`, one per pair.
pub fn encode_pairs(t: &PairTable) -> Result<(DbParams, BasisSet), PairDbError> {
    if !t.is_bijection() || t.k == 0 {
        return Err(PairError::NotBijective.into());
    }
    let params = DbParams::for_k(t.k);
    let basis = BasisSet::new(
        params.qubits_per_copy(),
        t.entries.iter().map(|e| (e.a << params.n) | e.b),
    )?;
    Ok((params, basis))
}

#[derive(Debug, Clone)]
pub struct EntangledDb {
    params: DbParams,
    basis: BasisSet,
    prep: Preparation,
    copies: Vec<Option<StateVector>>,
}

/// `k` independent copies of the database state, each usable once.
pub fn make_database(t: &PairTable) -> Result<EntangledDb, PairDbError> {
    let (params, basis) = encode_pairs(t)?;
    let prep = Preparation::from_basis_set(&basis);
    let copies = (0..params.k).map(|_| Some(prep.state().clone())).collect();
    Ok(EntangledDb {
        params,
        basis,
        prep,
        copies,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryOutcome {
    pub b: usize,
    pub a: usize,
    pub iterations: u64,
    /// Probability of the marked database entry just before measurement.
    pub p_marked: f64,
    /// Left-register outcomes over all shots.
    pub histogram: Histogram,
    /// Whether `(a, b)` is an entry of the database.
    pub in_support: bool,
}

impl EntangledDb {
    pub fn params(&self) -> DbParams {
        self.params
    }

    pub fn basis(&self) -> &BasisSet {
        &self.basis
    }

    pub fn preparation(&self) -> &Preparation {
        &self.prep
    }

    pub fn copy(&self, i: usize) -> Option<&StateVector> {
        self.copies.get(i).and_then(Option::as_ref)
    }

    pub fn copies_left(&self) -> usize {
        self.copies.iter().filter(|c| c.is_some()).count()
    }

    /// Amplified copy state for a query on `b`, without consuming anything.
    pub fn amplified(&self, b: usize) -> Result<(StateVector, PatternOracle), PairDbError> {
        let p = self.params;
        if b >= 1 << p.n {
            return Err(PairDbError::Position { b, k: p.k });
        }
        let oracle = PatternOracle::for_value(p.qubits_per_copy(), p.right_register(), b)?;
        let state = run_grover(&self.prep, &oracle, p.iterations())?;
        Ok((state, oracle))
    }

    /// Looks up the left partner of right position `b` on copy `copy`.
    ///
    /// With `shots == 1` the left register is measured once and the copy
    /// collapses. With more shots the query circuit is sampled `shots`
    /// times and the most frequent outcome wins (lowest value on ties).
    /// Either way the copy is consumed.
    pub fn query_partner(
        &mut self,
        copy: usize,
        b: usize,
        shots: u64,
        rng: &mut SeededRng,
    ) -> Result<QueryOutcome, PairDbError> {
        let p = self.params;
        match self.copies.get(copy) {
            None => return Err(PairDbError::NoSuchCopy(copy)),
            Some(None) => return Err(PairDbError::CopyConsumed(copy)),
            Some(Some(_)) => {}
        }
        if b >= p.k {
            return Err(PairDbError::Position { b, k: p.k });
        }
        self.copies[copy] = None;
        let (state, oracle) = self.amplified(b)?;
        let p_marked = marked_probability(&state, &oracle);
        let left = p.left_register();
        let histogram = if shots <= 1 {
            let (outcome, _collapsed) = state.measure_collapse(&left, rng)?;
            Histogram::from([(outcome, 1)])
        } else {
            state.sample(&left, shots, rng)?
        };
        let (best, _) =
            histogram.iter().fold(
                (None, 0),
                |(best, top), (k, &c)| {
                    if c > top {
                        (Some(k), c)
                    } else {
                        (best, top)
                    }
                },
            );
        let a = usize::from_str_radix(best.expect("at least one shot"), 2)
            .expect("outcome is a bitstring");
        Ok(QueryOutcome {
            b,
            a,
            iterations: p.iterations(),
            p_marked,
            histogram,
            in_support: self.basis.contains((a << p.n) | b),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairDbConfig {
    pub shots: u64,
    /// Fresh databases tried before giving up.
    pub max_attempts: u32,
}

impl Default for PairDbConfig {
    fn default() -> Self {
        PairDbConfig {
            shots: 1000,
            max_attempts: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryStats {
    /// Oracle applications in the successful (or last) attempt.
    pub oracle_calls: u64,
    pub iterations_per_query: u64,
    pub success: Vec<bool>,
    pub p_marked: Vec<f64>,
    pub attempts: u32,
    pub total_oracle_calls: u64,
    /// Database copies prepared, counted apart from the search itself.
    pub copies_prepared: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Recovery {
    /// `permutation[b] = a`.
    pub permutation: Vec<usize>,
    pub queries: Vec<QueryOutcome>,
    pub stats: QueryStats,
}

fn stream_id(attempt: u32, copy: usize) -> u64 {
    (u64::from(attempt) << 32) | copy as u64
}

fn is_permutation(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    v.iter()
        .all(|&x| x < v.len() && !std::mem::replace(&mut seen[x], true))
}

/// One pass over a fresh database: query right positions `0..k` on copies
/// `0..k`. Each copy uses its own stream of `seed`.
pub fn query_all(
    t: &PairTable,
    cfg: &PairDbConfig,
    seed: u64,
    attempt: u32,
) -> Result<(Vec<usize>, Vec<QueryOutcome>), PairDbError> {
    let mut db = make_database(t)?;
    let mut queries = Vec::with_capacity(t.k);
    for b in 0..t.k {
        let mut rng = SeededRng::stream(seed, stream_id(attempt, b));
        queries.push(db.query_partner(b, b, cfg.shots, &mut rng)?);
    }
    Ok((queries.iter().map(|q| q.a).collect(), queries))
}

/// Recovers the right-to-left position map of a pair table, retrying with
/// fresh databases when the outcome is not a permutation.
pub fn recover_from_table(
    t: &PairTable,
    cfg: &PairDbConfig,
    seed: u64,
) -> Result<Recovery, PairDbError> {
    recover_checked(t, cfg, seed, |_| true)
}

fn recover_checked(
    t: &PairTable,
    cfg: &PairDbConfig,
    seed: u64,
    accept: impl Fn(&[usize]) -> bool,
) -> Result<Recovery, PairDbError> {
    let params = DbParams::for_k(t.k);
    let per_attempt = t.k as u64 * params.iterations();
    let attempts = cfg.max_attempts.max(1);
    for attempt in 0..attempts {
        let (perm, queries) = query_all(t, cfg, seed, attempt)?;
        if is_permutation(&perm) && accept(&perm) {
            let stats = QueryStats {
                oracle_calls: per_attempt,
                iterations_per_query: params.iterations(),
                success: queries.iter().map(|q| q.in_support).collect(),
                p_marked: queries.iter().map(|q| q.p_marked).collect(),
                attempts: attempt + 1,
                total_oracle_calls: per_attempt * u64::from(attempt + 1),
                copies_prepared: t.k as u64 * u64::from(attempt + 1),
            };
            return Ok(Recovery {
                permutation: perm,
                queries,
                stats,
            });
        }
    }
    Err(PairDbError::RecoveryFailed { attempts })
}

/// Pair table of a balanced tensor-only sequent, then its recovery.
pub fn recover_permutation(
    s: &Sequent,
    cfg: &PairDbConfig,
    seed: u64,
) -> Result<Recovery, PairDbError> {
    let (sat, _) = saturated(s)?;
    recover_from_table(&match_atom_pairs(&sat)?, cfg, seed)
}

fn saturated(s: &Sequent) -> Result<(Sequent, Vec<RuleApp>), PairDbError> {
    if !s.is_tensor_only() {
        return Err(PairError::NotTensorOnly.into());
    }
    saturate_tensor_left(s).map_err(|e| PairDbError::NotProvable(e.to_string()))
}

/// ⊗-Right tree for a sequent with an atomic left side: at each ⊗ the atoms
/// whose left positions are the partners of the left operand's right
/// positions go to the first premise. The tree is not checked; a wrong
/// permutation shows up as a failing axiom.
pub fn proof_from_permutation(
    sat: &Sequent,
    permutation: &[usize],
) -> Result<ProofTree, PairDbError> {
    let [right] = sat.right.as_slice() else {
        return Err(PairError::NotTensorOnly.into());
    };
    let positions: Vec<usize> = (0..sat.left.len()).collect();
    build(sat.clone(), positions, right, 0, permutation)
}

fn build(
    s: Sequent,
    positions: Vec<usize>,
    right: &Formula,
    lo: usize,
    perm: &[usize],
) -> Result<ProofTree, PairDbError> {
    match right {
        Formula::Atom(_) => Ok(ProofTree::axiom(s)),
        Formula::Tensor(x, y) => {
            let mid = lo + x.atom_count();
            let wanted: Vec<usize> = perm
                .get(lo..mid)
                .ok_or_else(|| PairDbError::NotProvable("permutation too short".into()))?
                .to_vec();
            let routes: Vec<Premise> = positions
                .iter()
                .map(|p| {
                    if wanted.contains(p) {
                        Premise::First
                    } else {
                        Premise::Second
                    }
                })
                .collect();
            let rule = RuleApp::TensorRight {
                pos: 0,
                split: Split::new(routes.clone(), vec![]),
            };
            let mut premises = apply_rule(&s, &rule)
                .map_err(|e| PairDbError::NotProvable(e.to_string()))?
                .into_iter();
            let (p1, p2) = (premises.next().unwrap(), premises.next().unwrap());
            let (pos1, pos2): (Vec<_>, Vec<_>) = positions
                .iter()
                .zip(&routes)
                .partition(|(_, r)| **r == Premise::First);
            let pos1 = pos1.into_iter().map(|(p, _)| *p).collect();
            let pos2 = pos2.into_iter().map(|(p, _)| *p).collect();
            let t1 = build(p1, pos1, x, lo, perm)?;
            let t2 = build(p2, pos2, y, mid, perm)?;
            Ok(ProofTree::new(s, rule, vec![t1, t2]))
        }
        Formula::Lolli(..) => Err(PairError::NotTensorOnly.into()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDbProof {
    #[serde(skip)]
    pub proof: ProofTree,
    pub table: PairTable,
    pub params: DbParams,
    #[serde(flatten)]
    pub recovery: Recovery,
}

/// Saturate ⊗-Left, recover the position permutation, apply the splits it
/// dictates. Fails early on an atom mismatch.
pub fn prove_pairdb(
    s: &Sequent,
    cfg: &PairDbConfig,
    seed: u64,
) -> Result<PairDbProof, PairDbError> {
    let (sat, steps) = saturated(s)?;
    let table = match_atom_pairs(&sat).map_err(|e| match e {
        PairError::AtomMismatch => PairDbError::NotProvable("atom mismatch".into()),
        other => other.into(),
    })?;
    // a balanced sequent always has a proof, so an axiom failure means the
    // recovered permutation was wrong; it counts as a failed attempt
    let recovery = recover_checked(&table, cfg, seed, |perm| {
        proof_from_permutation(&sat, perm).is_ok_and(|t| check_proof(&t))
    })?;
    let top = proof_from_permutation(&sat, &recovery.permutation)?;
    let proof = ProofTree::with_tensor_left(s, &steps, top);
    if !check_proof(&proof) {
        return Err(PairDbError::NotProvable("axiom check failed".into()));
    }
    Ok(PairDbProof {
        proof,
        params: DbParams::for_k(table.k),
        table,
        recovery,
    })
}
