//! Amplitude amplification on a uniform superposition and on a sparse
//! prepared state, compared with the closed-form success law.

use qproof::grover::{
    grover_iterations, marked_probability, prepare_basis_set, run_grover, success_probability,
    BasisSet, MarkedSetOracle,
};

fn main() {
    for (n, marked) in [
        (2usize, vec![3usize]),
        (6, vec![42]),
        (5, vec![24, 17, 30, 3]),
    ] {
        let space = 1u64 << n;
        let m = marked.len() as u64;
        let iters = grover_iterations(space, m).unwrap();
        let prep = prepare_basis_set(&BasisSet::uniform(n).unwrap());
        let oracle = MarkedSetOracle::new(n, marked).unwrap();
        let state = run_grover(&prep, &oracle, iters).unwrap();
        println!(
            "N={space:<3} M={m}  iterations={iters}  simulated={:.10}  closed form={:.10}",
            marked_probability(&state, &oracle),
            success_probability(space, m, iters)
        );
    }

    // three of eight states carry amplitude, one of them is marked
    let support = BasisSet::new(3, [1, 4, 6]).unwrap();
    let prep = prepare_basis_set(&support);
    let oracle = MarkedSetOracle::new(3, [4]).unwrap();
    let state = run_grover(&prep, &oracle, 1).unwrap();
    println!(
        "sparse support of 3, one round: {:.10} (closed form {:.10})",
        marked_probability(&state, &oracle),
        success_probability(3, 1, 1)
    );
}
