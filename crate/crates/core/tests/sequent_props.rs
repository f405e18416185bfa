use std::collections::BTreeMap;

use proptest::prelude::*;
use qproof::classical::prove_bruteforce;
use qproof::qsim::SeededRng;
use qproof::seqcalc::{
    apply_rule, check_proof, parse_sequent, render_sequent, Atom, Formula, Fragment, Premise,
    ProofTree, RuleApp, Sequent, Split,
};

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf =
        prop::sample::select(vec!["A", "B", "C", "Xy", "Q"]).prop_map(|n| Formula::atom(n, 0));
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::tensor(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::lolli(a, b)),
        ]
    })
}

fn atoms_of(f: &Formula, out: &mut Vec<String>) {
    match f {
        Formula::Atom(a) => out.push(a.name.clone()),
        Formula::Tensor(l, r) | Formula::Lolli(l, r) => {
            atoms_of(l, out);
            atoms_of(r, out);
        }
    }
}

fn relabel(f: &Formula, next: &mut impl FnMut(&str) -> u32) -> Formula {
    match f {
        Formula::Atom(a) => Formula::atom(a.name.clone(), next(&a.name)),
        Formula::Tensor(l, r) => Formula::tensor(relabel(l, next), relabel(r, next)),
        Formula::Lolli(l, r) => Formula::lolli(relabel(l, next), relabel(r, next)),
    }
}

// Distinct labels per name on one side: either 0, 1, 2, ... (printed bare)
// or a seeded shuffle of them (printed with labels).
fn label_side(side: Vec<Formula>, shuffle_seed: Option<u64>) -> Vec<Formula> {
    let mut names = Vec::new();
    for f in &side {
        atoms_of(f, &mut names);
    }
    let mut pools: BTreeMap<String, Vec<u32>> = BTreeMap::new();
    for n in &names {
        let pool = pools.entry(n.clone()).or_default();
        pool.push(pool.len() as u32);
    }
    if let Some(seed) = shuffle_seed {
        let mut rng = SeededRng::new(seed);
        for pool in pools.values_mut() {
            rng.shuffle(pool);
        }
    }
    let mut used: BTreeMap<String, usize> = BTreeMap::new();
    let mut next = |name: &str| {
        let i = used.entry(name.to_string()).or_insert(0);
        *i += 1;
        pools[name][*i - 1]
    };
    side.iter().map(|f| relabel(f, &mut next)).collect()
}

fn multiset(fs: &[&[Formula]]) -> BTreeMap<Atom, usize> {
    let mut m = BTreeMap::new();
    for side in fs {
        let s = Sequent::new(side.to_vec(), vec![]);
        for a in s.left_atoms() {
            *m.entry(a).or_insert(0) += 1;
        }
    }
    m
}

proptest! {
    #[test]
    fn render_parse_round_trip(
        left in prop::collection::vec(formula(6), 1..4),
        right in prop::collection::vec(formula(6), 1..4),
        shuffle in prop::option::of(any::<u64>()),
    ) {
        let s = Sequent::new(label_side(left, shuffle), label_side(right, None));
        let text = render_sequent(&s);
        let back = parse_sequent(&text);
        prop_assert_eq!(back.as_ref().ok(), Some(&s), "{}", text);
    }

    #[test]
    fn tensor_right_conserves_atoms(
        n in 1usize..7,
        counter in any::<u64>(),
    ) {
        // n left atoms, right side X * Y with the atoms split between them
        let left: Vec<Formula> = (0..n).map(|i| Formula::atom("P", i as u32)).collect();
        let right = vec![Formula::tensor(Formula::atom("P", 0), Formula::atom("P", 1))];
        let s = Sequent::new(left.clone(), right);
        let split = Split::from_counter(counter, n, 0);
        match apply_rule(&s, &RuleApp::TensorRight { pos: 0, split: split.clone() }) {
            Ok(premises) => {
                prop_assert_eq!(premises.len(), 2);
                let got = multiset(&[&premises[0].left, &premises[1].left]);
                prop_assert_eq!(got, multiset(&[&left]));
                let first: Vec<Formula> = left
                    .iter()
                    .zip(&split.left)
                    .filter(|(_, p)| **p == Premise::First)
                    .map(|(f, _)| f.clone())
                    .collect();
                prop_assert_eq!(&premises[0].left, &first);
            }
            Err(_) => {
                // only rejected when a premise would get an empty left side
                let firsts = split.left.iter().filter(|p| **p == Premise::First).count();
                prop_assert!(firsts == 0 || firsts == n);
            }
        }
    }

    #[test]
    fn mutated_split_breaks_proof(k in 2usize..7, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let (s, _) = qproof::workload::permutation_sequent(k, &mut rng);
        let proof = prove_bruteforce(&s, Fragment::TensorOnly).unwrap();
        prop_assert!(check_proof(&proof));
        // flip one routing decision of one ⊗-Right node
        let mut nodes = Vec::new();
        collect_paths(&proof, &mut vec![], &mut nodes);
        let path = &nodes[rng.below(nodes.len() as u64) as usize];
        let mut broken = proof.clone();
        let node = node_at(&mut broken, path);
        let split = node.rule.split_mut().unwrap();
        let i = rng.below(split.left.len() as u64) as usize;
        split.left[i] = Premise::from_bit(!split.left[i].bit());
        prop_assert!(!check_proof(&broken));
    }
}

fn collect_paths(t: &ProofTree, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if matches!(t.rule, RuleApp::TensorRight { .. }) {
        out.push(path.clone());
    }
    for (i, p) in t.premises.iter().enumerate() {
        path.push(i);
        collect_paths(p, path, out);
        path.pop();
    }
}

fn node_at<'a>(t: &'a mut ProofTree, path: &[usize]) -> &'a mut ProofTree {
    match path.split_first() {
        None => t,
        Some((&i, rest)) => node_at(&mut t.premises[i], rest),
    }
}

#[test]
fn parse_examples() {
    let s = parse_sequent("A1, A2 -o B1 |- C1 -o B2, C2").unwrap();
    assert_eq!(s.left.len(), 2);
    assert_eq!(s.right.len(), 2);
    assert_eq!(
        s.left[1],
        Formula::lolli(Formula::atom("A", 2), Formula::atom("B", 1))
    );
    // -o is right associative and looser than *
    let f = parse_sequent("A * B -o C -o D |- E")
        .unwrap()
        .left
        .remove(0);
    assert_eq!(
        f,
        Formula::lolli(
            Formula::tensor(Formula::atom("A", 0), Formula::atom("B", 0)),
            Formula::lolli(Formula::atom("C", 0), Formula::atom("D", 0))
        )
    );
}
