//! Gates, measurement and seeded sampling on the dense simulator.

use qproof::qsim::{Gate, SeededRng, StateVector};

fn main() {
    // Bell pair
    let mut bell = StateVector::new(2).unwrap();
    bell.apply(&Gate::H(0)).unwrap();
    bell.apply(&Gate::cnot(0, 1)).unwrap();
    println!("amplitudes: {:?}", bell.amplitudes());
    println!("P(q0):      {:?}", bell.probabilities(&[0]).unwrap());

    let mut rng = SeededRng::new(2024);
    println!(
        "1000 shots: {:?}",
        bell.sample(&[0, 1], 1000, &mut rng).unwrap()
    );

    // measuring one half fixes the other
    let (outcome, collapsed) = bell.measure_collapse(&[0], &mut rng).unwrap();
    println!(
        "q0 = {outcome}, state after: {:?}",
        collapsed.probabilities(&[0, 1]).unwrap()
    );

    // three-qubit GHZ by tensoring and a CNOT chain
    let plus = {
        let mut s = StateVector::new(1).unwrap();
        s.apply(&Gate::H(0)).unwrap();
        s
    };
    let mut ghz = plus.tensor(&StateVector::new(2).unwrap()).unwrap();
    ghz.apply(&Gate::cnot(0, 1)).unwrap();
    ghz.apply(&Gate::cnot(1, 2)).unwrap();
    println!("GHZ:        {:?}", ghz.probabilities(&[0, 1, 2]).unwrap());
}
