//! Classical baseline: exhaustive proof search and the atom-position pair
//! table that seeds the entangled database.

use serde::Serialize;
use thiserror::Error;

use crate::seqcalc::{
    apply_rule, is_axiom, Atom, Formula, Fragment, ProofTree, RuleApp, Sequent, Split,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("not provable: atom mismatch")]
    AtomMismatch,
    #[error("pair table needs a tensor-only sequent")]
    NotTensorOnly,
    #[error("pair table is not a bijection")]
    NotBijective,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairEntry {
    pub atom: Atom,
    /// Position among the left-side atoms.
    pub a: usize,
    /// Position among the right-side atoms.
    pub b: usize,
}

/// Matching between the atoms of the two sides, ordered by left position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairTable {
    pub k: usize,
    pub entries: Vec<PairEntry>,
}

impl PairTable {
    /// Builds a table from raw `(a, b)` pairs, checking that both columns
    /// are permutations of `0..k`.
    pub fn from_pairs(pairs: &[(Atom, usize, usize)]) -> Result<Self, PairError> {
        let k = pairs.len();
        let mut seen_a = vec![false; k];
        let mut seen_b = vec![false; k];
        for (_, a, b) in pairs {
            if *a >= k || *b >= k || seen_a[*a] || seen_b[*b] {
                return Err(PairError::NotBijective);
            }
            seen_a[*a] = true;
            seen_b[*b] = true;
        }
        let mut entries: Vec<PairEntry> = pairs
            .iter()
            .map(|(atom, a, b)| PairEntry {
                atom: atom.clone(),
                a: *a,
                b: *b,
            })
            .collect();
        entries.sort_by_key(|e| e.a);
        Ok(PairTable { k, entries })
    }

    pub fn is_bijection(&self) -> bool {
        let k = self.k;
        let mut seen_a = vec![false; k];
        let mut seen_b = vec![false; k];
        self.entries.len() == k
            && self.entries.iter().all(|e| {
                let fresh = e.a < k && e.b < k && !seen_a[e.a] && !seen_b[e.b];
                if fresh {
                    seen_a[e.a] = true;
                    seen_b[e.b] = true;
                }
                fresh
            })
    }

    /// `perm[b] = a`: the left position of the atom at right position `b`.
    pub fn right_to_left(&self) -> Vec<usize> {
        let mut perm = vec![0; self.k];
        for e in &self.entries {
            perm[e.b] = e.a;
        }
        perm
    }
}

/// Pairs each left atom with a right atom of the same name, the i-th
/// occurrence of a name on the left going to its i-th occurrence on the right.
pub fn match_atom_pairs(s: &Sequent) -> Result<PairTable, PairError> {
    if !s.is_tensor_only() {
        return Err(PairError::NotTensorOnly);
    }
    if !s.is_balanced() {
        return Err(PairError::AtomMismatch);
    }
    let left = s.left_atoms();
    let right = s.right_atoms();
    let mut used = vec![false; right.len()];
    let mut pairs = Vec::with_capacity(left.len());
    for (a, atom) in left.iter().enumerate() {
        let b = right
            .iter()
            .enumerate()
            .position(|(j, r)| !used[j] && r.name == atom.name)
            .ok_or(PairError::AtomMismatch)?;
        used[b] = true;
        pairs.push((atom.clone(), a, b));
    }
    PairTable::from_pairs(&pairs)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Splits handed to `apply_rule` over the whole search.
    pub partitions_tried: u64,
    /// Largest number of splits tried at a single ⊗-Right node.
    pub max_tensor_right_partitions: u64,
    pub nodes_visited: u64,
}

struct Search {
    fragment: Fragment,
    stats: SearchStats,
}

impl Search {
    fn prove(&mut self, s: &Sequent) -> Option<ProofTree> {
        self.stats.nodes_visited += 1;
        if is_axiom(s) {
            return Some(ProofTree::axiom(s.clone()));
        }
        // ⊗-Left and ⊸-Right are invertible: when they apply, their premise
        // is provable iff the conclusion is, so later alternatives can only
        // fail and are skipped.
        if let Some(pos) = s.left.iter().position(|f| matches!(f, Formula::Tensor(..))) {
            return self.unary(s, RuleApp::TensorLeft { pos });
        }
        if self.fragment == Fragment::TensorLolli {
            if let Some(pos) = s.right.iter().position(|f| matches!(f, Formula::Lolli(..))) {
                return self.unary(s, RuleApp::LolliRight { pos });
            }
        }
        for pos in 0..s.right.len() {
            if matches!(s.right[pos], Formula::Tensor(..)) {
                let (nl, nr) = (s.left.len(), s.right.len() - 1);
                let mut tried = 0;
                let found = self.binary(s, nl, nr, &mut tried, |split| RuleApp::TensorRight {
                    pos,
                    split,
                });
                self.stats.max_tensor_right_partitions =
                    self.stats.max_tensor_right_partitions.max(tried);
                if found.is_some() {
                    return found;
                }
            }
        }
        if self.fragment == Fragment::TensorLolli {
            for pos in 0..s.left.len() {
                if matches!(s.left[pos], Formula::Lolli(..)) {
                    let (nl, nr) = (s.left.len() - 1, s.right.len());
                    let found =
                        self.binary(s, nl, nr, &mut 0, |split| RuleApp::LolliLeft { pos, split });
                    if found.is_some() {
                        return found;
                    }
                }
            }
            if s.is_atomic() {
                let (nl, nr) = (s.left.len(), s.right.len());
                return self.binary(s, nl, nr, &mut 0, |split| RuleApp::Mix { split });
            }
        }
        None
    }

    fn unary(&mut self, s: &Sequent, rule: RuleApp) -> Option<ProofTree> {
        let premise = apply_rule(s, &rule).ok()?.remove(0);
        let sub = self.prove(&premise)?;
        Some(ProofTree::new(s.clone(), rule, vec![sub]))
    }

    fn binary(
        &mut self,
        s: &Sequent,
        n_left: usize,
        n_right: usize,
        tried: &mut u64,
        make: impl Fn(Split) -> RuleApp,
    ) -> Option<ProofTree> {
        let n = n_left + n_right;
        assert!(
            n < 64,
            "context of {n} formulas is beyond exhaustive search"
        );
        for counter in 0..(1u64 << n) {
            let rule = make(Split::from_counter(counter, n_left, n_right));
            *tried += 1;
            self.stats.partitions_tried += 1;
            let Ok(premises) = apply_rule(s, &rule) else {
                continue;
            };
            let Some(first) = self.prove(&premises[0]) else {
                continue;
            };
            let Some(second) = self.prove(&premises[1]) else {
                continue;
            };
            return Some(ProofTree::new(s.clone(), rule, vec![first, second]));
        }
        None
    }
}

/// Naive exhaustive search; `None` when no cut-free proof exists (or when
/// `s` lies outside `fragment`).
///
/// Rules are tried in the order Axiom, ⊗-Left (lowest position), ⊸-Right,
/// ⊗-Right, ⊸-Left, Mix. Splits are enumerated as binary counters over the
/// context, left formulas first, bit `i` set meaning "goes to the first
/// premise". The first proof found in that order is returned.
pub fn prove_bruteforce(s: &Sequent, fragment: Fragment) -> Option<ProofTree> {
    prove_bruteforce_with_stats(s, fragment).0
}

pub fn prove_bruteforce_with_stats(
    s: &Sequent,
    fragment: Fragment,
) -> (Option<ProofTree>, SearchStats) {
    if !s.in_fragment(fragment) {
        return (None, SearchStats::default());
    }
    let mut search = Search {
        fragment,
        stats: SearchStats::default(),
    };
    let proof = search.prove(s);
    (proof, search.stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcalc::{check_proof, parse_sequent, Premise};

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn table(s: &str) -> Vec<(String, usize, usize)> {
        match_atom_pairs(&seq(s))
            .unwrap()
            .entries
            .into_iter()
            .map(|e| (e.atom.name, e.a, e.b))
            .collect()
    }

    #[test]
    fn pair_table_examples() {
        assert_eq!(
            table("A*(B*(C*D)) |- D*(B*(A*C))"),
            vec![
                ("A".into(), 0, 2),
                ("B".into(), 1, 1),
                ("C".into(), 2, 3),
                ("D".into(), 3, 0)
            ]
        );
        assert_eq!(table("A |- A"), vec![("A".into(), 0, 0)]);
        assert_eq!(
            table("A*B |- B*A"),
            vec![("A".into(), 0, 1), ("B".into(), 1, 0)]
        );
    }

    #[test]
    fn pair_table_repeated_names_first_fit() {
        assert_eq!(
            table("A, B, A |- A*(A*B)"),
            vec![("A".into(), 0, 0), ("B".into(), 1, 2), ("A".into(), 2, 1)]
        );
    }

    #[test]
    fn pair_table_errors() {
        assert_eq!(
            match_atom_pairs(&seq("A |- B")),
            Err(PairError::AtomMismatch)
        );
        assert_eq!(
            match_atom_pairs(&seq("A, A -o B |- B")),
            Err(PairError::NotTensorOnly)
        );
        let x = Atom::new("X", 0);
        assert_eq!(
            PairTable::from_pairs(&[(x.clone(), 0, 0), (x, 1, 0)]),
            Err(PairError::NotBijective)
        );
    }

    #[test]
    fn simplest_tensor_proof() {
        let p = prove_bruteforce(&seq("A, B |- A*B"), Fragment::TensorOnly).unwrap();
        assert!(check_proof(&p));
        assert!(matches!(p.rule, RuleApp::TensorRight { .. }));
        assert_eq!(p.count_rule(&|r| *r == RuleApp::Axiom), 2);
    }

    #[test]
    fn unprovable() {
        assert!(prove_bruteforce(&seq("A |- B"), Fragment::TensorOnly).is_none());
        assert!(prove_bruteforce(&seq("A, B |- A"), Fragment::TensorOnly).is_none());
        // outside the fragment
        assert!(prove_bruteforce(&seq("A1, A2 -o B1 |- B2"), Fragment::TensorOnly).is_none());
    }

    #[test]
    fn worked_example_splits() {
        use Premise::*;
        let p = prove_bruteforce(&seq("A*(B*(C*D)) |- D*(B*(A*C))"), Fragment::TensorOnly).unwrap();
        assert!(check_proof(&p));
        let splits: Vec<Vec<Premise>> = p
            .preorder()
            .into_iter()
            .filter_map(|t| match &t.rule {
                RuleApp::TensorRight { split, .. } => Some(split.left.clone()),
                _ => None,
            })
            .collect();
        // D (left position 3) alone, then B (1), then A (0) against C (2)
        assert_eq!(
            splits,
            vec![
                vec![Second, Second, Second, First],
                vec![Second, First, Second],
                vec![First, Second]
            ]
        );
    }

    #[test]
    fn lolli_example_schedule() {
        let p =
            prove_bruteforce(&seq("A1, A2 -o B1 |- C1 -o B2, C2"), Fragment::TensorLolli).unwrap();
        assert!(check_proof(&p));
        assert_eq!(p.rule, RuleApp::LolliRight { pos: 0 });
        let second = &p.premises[0];
        assert!(matches!(second.rule, RuleApp::LolliLeft { pos: 1, .. }));
        assert_eq!(second.premises[0].conclusion, seq("A1 |- A2"));
        assert_eq!(second.premises[1].conclusion, seq("B1, C1 |- B2, C2"));
    }

    #[test]
    fn partition_bound_per_node() {
        let s = seq("A, B, C, D, E |- E*(D*(C*(B*A)))");
        let (p, stats) = prove_bruteforce_with_stats(&s, Fragment::TensorOnly);
        assert!(p.is_some());
        assert!(stats.max_tensor_right_partitions <= 1 << 5);
        let (p, stats) =
            prove_bruteforce_with_stats(&seq("A, B, C |- C*(B*D)"), Fragment::TensorOnly);
        assert!(p.is_none());
        assert!(stats.max_tensor_right_partitions <= 1 << 3);
    }
}
