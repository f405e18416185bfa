//! Split codes for a tensor-only sequent: derive, amplify, measure until
//! every clause is seen, decode. Also shows that a code violating the
//! zero-fill rule is rejected.

use qproof::seqcalc::{parse_sequent, render_proof, ProofFormat};
use qproof::splitsearch::{
    decode_assignment_tensor, derive_split_codes_tensor, run_split_search, SplitAssignment,
    SplitCode,
};

fn main() {
    let s = parse_sequent("A, B, C, D |- D*(B*(A*C))").unwrap();
    let codes = derive_split_codes_tensor(&s).unwrap();
    for (c, atom) in codes.iter().zip(s.left_atoms()) {
        println!("{}: {c}", atom.name);
    }

    let (assignment, stats) = run_split_search(&codes, 200, 11).unwrap();
    println!(
        "width {}  iterations/run {}  p_marked {:.6}  runs {}  rejected {}  duplicates {}",
        stats.width,
        stats.iterations_per_run,
        stats.p_marked,
        stats.runs,
        stats.rejected_unmarked,
        stats.duplicates
    );
    let proof = decode_assignment_tensor(&assignment, &s).unwrap();
    println!("\n{}", render_proof(&proof, ProofFormat::Text).unwrap());

    let printed = ["110|00", "100|01", "111|10", "010|11"];
    let bad = SplitAssignment::from_bitstrings(&printed).unwrap();
    match decode_assignment_tensor(&bad, &s) {
        Ok(_) => println!("{printed:?} decoded"),
        Err(e) => println!("{printed:?}: {e}"),
    }
    let total: usize = codes.iter().map(SplitCode::width).max().unwrap();
    println!("search space 2^{total}, {} marked", codes.len());
}
