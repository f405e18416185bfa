//! Recover random 64-atom permutations with 12-qubit database copies and
//! 1000-shot majority voting.
//!
//!     cargo run --release --example scale_k64 -- 20

use std::time::Instant;

use qproof::pairdb::{prove_pairdb, DbParams, PairDbConfig};
use qproof::qsim::SeededRng;
use qproof::workload::permutation_sequent;

fn main() {
    let trials: u64 = std::env::args()
        .nth(1)
        .and_then(|t| t.parse().ok())
        .unwrap_or(5);
    let params = DbParams::for_k(64);
    println!(
        "k=64: {} qubits per copy, {} iterations per query",
        params.qubits_per_copy(),
        params.iterations()
    );
    let start = Instant::now();
    let mut recovered = 0;
    for trial in 0..trials {
        let mut rng = SeededRng::stream(64, trial);
        let (s, perm) = permutation_sequent(64, &mut rng);
        match prove_pairdb(&s, &PairDbConfig::default(), trial) {
            Ok(p) if p.recovery.permutation == perm => {
                recovered += 1;
                let worst = p
                    .recovery
                    .stats
                    .p_marked
                    .iter()
                    .copied()
                    .fold(1.0, f64::min);
                println!(
                    "trial {trial}: ok, {} oracle calls, min p {worst:.6}",
                    p.recovery.stats.oracle_calls
                );
            }
            Ok(_) => println!("trial {trial}: wrong permutation"),
            Err(e) => println!("trial {trial}: {e}"),
        }
    }
    println!("{recovered}/{trials} recovered in {:.2?}", start.elapsed());
}
