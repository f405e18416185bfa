//! Decompose a multi-controlled X into a Toffoli ladder and check it
//! against the native gate on every basis state.

use qproof::qsim::{decompose_mcx, Gate, McxLayout, StateVector};

fn main() {
    for m in 3..=6 {
        let n = 2 * m - 1;
        let layout = McxLayout {
            controls: (0..m).collect(),
            target: m,
            ancillas: (m + 1..n).collect(),
        };
        let circuit = decompose_mcx(n, &layout).unwrap();
        let toffolis =
            circuit.count(|g| matches!(g, Gate::Mcx { controls, .. } if controls.len() == 2));
        let native = Gate::Mcx {
            controls: layout.controls.clone(),
            target: m,
        };
        let mut worst: f64 = 0.0;
        for x in 0..1usize << (m + 1) {
            let input = StateVector::basis(n, x << (m - 2)).unwrap();
            let mut a = input.clone();
            let mut b = input;
            a.apply_circuit(&circuit).unwrap();
            b.apply(&native).unwrap();
            worst = worst.max(a.max_diff(&b));
        }
        println!("{m} controls: {n} qubits, {toffolis} Toffolis, max deviation {worst:e}");
    }
}
