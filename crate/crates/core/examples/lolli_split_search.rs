//! Two-bit-per-step codes for a sequent with linear implication. The rule
//! skeleton comes from the classical prover; the search recovers the
//! routing of every clause.

use qproof::classical::prove_bruteforce;
use qproof::seqcalc::{parse_sequent, render_proof, Fragment, ProofFormat};
use qproof::splitsearch::{
    decode_assignment_lolli, derive_split_codes_lolli, run_split_search, schedule_of,
};

fn main() {
    let s = parse_sequent("A1, A2 -o B1 |- C1 -o B2, C2").unwrap();
    let skeleton = prove_bruteforce(&s, Fragment::TensorLolli).expect("provable");
    let schedule = schedule_of(&skeleton);
    let labels: Vec<&str> = schedule.iter().map(|r| r.label()).collect();
    println!("schedule: {}", labels.join(", "));

    let codes = derive_split_codes_lolli(&s, &schedule).unwrap();
    for c in &codes {
        println!("clause {}: {c}", c.index);
    }

    let mut complete = 0;
    let seeds = 100;
    for seed in 0..seeds {
        let (_, stats) = run_split_search(&codes, 200, seed).unwrap();
        complete += usize::from(stats.complete);
    }
    println!("complete within 200 runs: {complete}/{seeds} seeds");

    let (assignment, stats) = run_split_search(&codes, 200, 0).unwrap();
    println!(
        "seed 0: {} runs, p_marked {:.6}, {} oracle calls",
        stats.runs, stats.p_marked, stats.oracle_calls
    );
    let proof = decode_assignment_lolli(&assignment, &s, &schedule).unwrap();
    println!("\n{}", render_proof(&proof, ProofFormat::Text).unwrap());
}
