//! Random tensor-only sequents for benchmarks and equivalence checks.

use crate::qsim::SeededRng;
use crate::seqcalc::{Atom, Formula, Sequent};

/// `A`, `B`, ..., `Z`, `AA`, `AB`, ... Letters only, so names never carry
/// an occurrence label.
pub fn atom_name(mut i: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// `x0, ..., x(k-1) |- x(p0) * (x(p1) * ...)` for a uniformly random
/// permutation `p`. Returns the sequent and `p`, which is also the
/// right-to-left position map a correct recovery must produce.
pub fn permutation_sequent(k: usize, rng: &mut SeededRng) -> (Sequent, Vec<usize>) {
    assert!(k > 0, "at least one atom");
    let mut perm: Vec<usize> = (0..k).collect();
    rng.shuffle(&mut perm);
    let left = (0..k).map(|i| Formula::atom(atom_name(i), 0)).collect();
    let right = Formula::tensor_chain(
        perm.iter()
            .map(|&i| Formula::atom(atom_name(i), 0))
            .collect(),
    );
    (Sequent::new(left, vec![right]), perm)
}

/// A random tensor-only sequent with `k` atoms on each side drawn from a
/// small alphabet (so names repeat), a random tensor shape on both sides,
/// and the right side either a permutation of the left (`provable`) or
/// with one atom renamed to a name absent from the left.
pub fn random_tensor_sequent(k: usize, provable: bool, rng: &mut SeededRng) -> Sequent {
    assert!(k > 0, "at least one atom");
    let alphabet = (k as u64).div_ceil(2).max(1);
    let names: Vec<String> = (0..k)
        .map(|_| atom_name(rng.below(alphabet) as usize))
        .collect();
    let mut right_names = names.clone();
    rng.shuffle(&mut right_names);
    if !provable {
        let j = rng.below(k as u64) as usize;
        right_names[j] = atom_name(alphabet as usize);
    }
    let n_left = 1 + rng.below(k as u64) as usize;
    let left = random_groups(&names, n_left, rng);
    let right = vec![random_tree(&right_names, rng)];
    Sequent::new(number_occurrences(&left), number_occurrences(&right))
}

// Occurrence labels 0, 1, 2, ... per name, in reading order, as the parser
// would assign them.
fn number_occurrences(side: &[Formula]) -> Vec<Formula> {
    let mut seen = std::collections::BTreeMap::new();
    let mut next = |a: &Atom| {
        let n = seen.entry(a.name.clone()).or_insert(0);
        *n += 1;
        Atom::new(a.name.clone(), *n - 1)
    };
    side.iter().map(|f| f.map_atoms(&mut next)).collect()
}

// Splits `names` into `groups` consecutive runs, each a random tensor tree.
fn random_groups(names: &[String], groups: usize, rng: &mut SeededRng) -> Vec<Formula> {
    let mut cuts: Vec<usize> = (1..names.len()).collect();
    rng.shuffle(&mut cuts);
    let mut cuts: Vec<usize> = cuts.into_iter().take(groups - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(groups);
    let mut start = 0;
    for end in cuts.into_iter().chain([names.len()]) {
        out.push(random_tree(&names[start..end], rng));
        start = end;
    }
    out
}

fn random_tree(names: &[String], rng: &mut SeededRng) -> Formula {
    if names.len() == 1 {
        return Formula::atom(names[0].clone(), 0);
    }
    let mid = 1 + rng.below(names.len() as u64 - 1) as usize;
    Formula::tensor(
        random_tree(&names[..mid], rng),
        random_tree(&names[mid..], rng),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcalc::{parse_sequent, render_sequent};

    #[test]
    fn names() {
        assert_eq!(atom_name(0), "A");
        assert_eq!(atom_name(25), "Z");
        assert_eq!(atom_name(26), "AA");
        assert_eq!(atom_name(27), "AB");
        assert_eq!(atom_name(26 + 26 * 26), "AAA");
    }

    #[test]
    fn permutation_sequent_shape() {
        let mut rng = SeededRng::new(4);
        let (s, perm) = permutation_sequent(64, &mut rng);
        assert_eq!(s.left.len(), 64);
        assert!(s.is_tensor_only() && s.is_balanced());
        assert_eq!(parse_sequent(&render_sequent(&s)).unwrap(), s);
        let right: Vec<String> = s.right_atoms().into_iter().map(|a| a.name).collect();
        let expect: Vec<String> = perm.iter().map(|&i| atom_name(i)).collect();
        assert_eq!(right, expect);
    }

    #[test]
    fn random_sequents_round_trip() {
        let mut rng = SeededRng::new(10);
        for k in 1..=8 {
            for provable in [true, false] {
                let s = random_tensor_sequent(k, provable, &mut rng);
                assert_eq!(s.atom_count(), 2 * k);
                assert_eq!(s.is_balanced(), provable);
                assert_eq!(parse_sequent(&render_sequent(&s)).unwrap(), s);
            }
        }
    }
}
