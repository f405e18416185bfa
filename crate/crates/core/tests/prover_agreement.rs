mod common;

use common::{balanced, bruteforce_verdict, pairdb_verdict, splitsearch_verdict, Verdict};
use proptest::prelude::*;
use qproof::qsim::SeededRng;
use qproof::workload::random_tensor_sequent;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn three_provers_agree(k in 1usize..=8, provable in any::<bool>(), seed in any::<u64>()) {
        let s = random_tensor_sequent(k, provable, &mut SeededRng::new(seed));
        let expected = if balanced(&s) { Verdict::Proved } else { Verdict::NotProvable };
        prop_assert_eq!(balanced(&s), provable, "{}", s);
        prop_assert_eq!(bruteforce_verdict(&s), expected, "bruteforce on {}", s);
        prop_assert_eq!(pairdb_verdict(&s, seed), expected, "pairdb on {}", s);
        prop_assert_eq!(splitsearch_verdict(&s, seed), expected, "splitsearch on {}", s);
    }
}

#[test]
fn larger_k_succeeds_on_the_first_seed() {
    let mut rng = SeededRng::new(11);
    for k in 4..=8 {
        for _ in 0..4 {
            let s = random_tensor_sequent(k, true, &mut rng);
            let p = qproof::pairdb::prove_pairdb(&s, &Default::default(), 0);
            assert!(p.is_ok(), "{s}: {p:?}");
        }
    }
}
