#![allow(dead_code)]

use std::collections::BTreeMap;

use qproof::classical::prove_bruteforce;
use qproof::pairdb::{prove_pairdb, PairDbConfig, PairDbError};
use qproof::seqcalc::{check_proof, Formula, Fragment, Sequent};
use qproof::splitsearch::{prove_splitsearch, SplitSearchConfig, SplitSearchError};

/// Fresh seeds tried when a quantum run ends without a verdict (recovery
/// or budget exhausted) before the disagreement is reported.
pub const RESEEDS: u64 = 10;

fn names(side: &[Formula], out: &mut BTreeMap<String, i64>, sign: i64) {
    fn walk(f: &Formula, out: &mut BTreeMap<String, i64>, sign: i64) {
        match f {
            Formula::Atom(a) => *out.entry(a.name.clone()).or_insert(0) += sign,
            Formula::Tensor(l, r) | Formula::Lolli(l, r) => {
                walk(l, out, sign);
                walk(r, out, sign);
            }
        }
    }
    for f in side {
        walk(f, out, sign);
    }
}

/// A ⊗-only sequent is derivable exactly when both sides hold the same
/// multiset of atom names.
pub fn balanced(s: &Sequent) -> bool {
    let mut count = BTreeMap::new();
    names(&s.left, &mut count, 1);
    names(&s.right, &mut count, -1);
    count.values().all(|&c| c == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    NotProvable,
    Inconclusive,
}

pub fn bruteforce_verdict(s: &Sequent) -> Verdict {
    match prove_bruteforce(s, Fragment::TensorOnly) {
        Some(t) if check_proof(&t) => Verdict::Proved,
        Some(_) => Verdict::Inconclusive,
        None => Verdict::NotProvable,
    }
}

pub fn pairdb_verdict(s: &Sequent, seed: u64) -> Verdict {
    for i in 0..RESEEDS {
        match prove_pairdb(s, &PairDbConfig::default(), seed.wrapping_add(i)) {
            Ok(p) if check_proof(&p.proof) => return Verdict::Proved,
            Ok(_) => return Verdict::Inconclusive,
            Err(PairDbError::NotProvable(_)) => return Verdict::NotProvable,
            Err(PairDbError::RecoveryFailed { .. }) => continue,
            Err(_) => return Verdict::Inconclusive,
        }
    }
    Verdict::Inconclusive
}

pub fn splitsearch_verdict(s: &Sequent, seed: u64) -> Verdict {
    for i in 0..RESEEDS {
        match prove_splitsearch(s, &SplitSearchConfig::default(), seed.wrapping_add(i)) {
            Ok(p) if check_proof(&p.proof) => return Verdict::Proved,
            Ok(_) => return Verdict::Inconclusive,
            Err(SplitSearchError::NotProvable(_)) => return Verdict::NotProvable,
            Err(SplitSearchError::BudgetExhausted { .. }) => continue,
            Err(_) => return Verdict::Inconclusive,
        }
    }
    Verdict::Inconclusive
}
