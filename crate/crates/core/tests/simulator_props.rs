use num_complex::Complex64;
use proptest::prelude::*;
use qproof::grover::{prepare_basis_set, BasisSet, PatternOracle, PhaseOracle, Preparation};
use qproof::qsim::{decompose_mcx, Gate, McxLayout, SeededRng, StateVector};

fn bit(index: usize, q: usize, n: usize) -> bool {
    index >> (n - 1 - q) & 1 == 1
}

// Reference action of a classical reversible gate on one basis index.
fn permute(index: usize, controls: &[usize], target: usize, n: usize) -> usize {
    if controls.iter().all(|&c| bit(index, c, n)) {
        index ^ (1 << (n - 1 - target))
    } else {
        index
    }
}

fn random_state(n: usize, rng: &mut SeededRng) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn random_gate(n: usize, rng: &mut SeededRng) -> Gate {
    let q = rng.below(n as u64) as usize;
    match rng.below(4) {
        0 => Gate::X(q),
        1 => Gate::H(q),
        2 => Gate::Z(q),
        _ => {
            let mut others: Vec<usize> = (0..n).filter(|&i| i != q).collect();
            rng.shuffle(&mut others);
            let c = rng.below(others.len() as u64 + 1) as usize;
            Gate::Mcx {
                controls: others[..c].to_vec(),
                target: q,
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norm_survives_a_thousand_gates(n in 1usize..=12, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let mut s = random_state(n, &mut rng);
        for _ in 0..1000 {
            s.apply(&random_gate(n, &mut rng)).unwrap();
        }
        prop_assert!((s.norm() - 1.0).abs() <= 1e-10, "norm {}", s.norm());
    }

    #[test]
    fn mcx_ladder_matches_bit_math(m in 3usize..=6, extra in 0usize..2, seed in any::<u64>()) {
        let n = 2 * m - 1 + extra;
        let mut rng = SeededRng::new(seed);
        let mut qubits: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut qubits);
        let layout = McxLayout {
            controls: qubits[..m].to_vec(),
            target: qubits[m],
            ancillas: qubits[m + 1..2 * m - 1].to_vec(),
        };
        let circuit = decompose_mcx(n, &layout).unwrap();
        prop_assert_eq!(circuit.len(), 2 * (m - 2) + 1);
        for index in 0..1usize << n {
            if layout.ancillas.iter().any(|&a| bit(index, a, n)) {
                continue;
            }
            let mut s = StateVector::basis(n, index).unwrap();
            s.apply_circuit(&circuit).unwrap();
            let want = permute(index, &layout.controls, layout.target, n);
            prop_assert!((s.probability(want) - 1.0).abs() < 1e-12, "input {index:b}");
        }
    }

    #[test]
    fn native_mcx_matches_bit_math(n in 2usize..=7, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let mut qubits: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut qubits);
        let c = 1 + rng.below(n as u64 - 1) as usize;
        let g = Gate::Mcx { controls: qubits[1..=c].to_vec(), target: qubits[0] };
        let s = random_state(n, &mut rng);
        let mut out = s.clone();
        out.apply(&g).unwrap();
        for i in 0..1usize << n {
            let j = permute(i, &qubits[1..=c], qubits[0], n);
            prop_assert!((out.amplitude(j) - s.amplitude(i)).norm() < 1e-12);
        }
    }

    #[test]
    fn pattern_circuit_is_its_diagonal(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let w = 1 + rng.below(n as u64) as usize;
        let mut reg: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut reg);
        reg.truncate(w);
        let value = rng.below(1 << w) as usize;
        let oracle = PatternOracle::for_value(n, reg.clone(), value).unwrap();
        let circuit = oracle.kickback_circuit();
        let input = random_state(n, &mut rng);
        // append a clean ancilla as the least significant qubit
        let wide = input.tensor(&StateVector::new(1).unwrap()).unwrap();
        let mut out = wide.clone();
        out.apply_circuit(&circuit).unwrap();
        for x in 0..1usize << n {
            let held = reg.iter().fold(0, |acc, &q| (acc << 1) | usize::from(bit(x, q, n)));
            let sign = if held == value { -1.0 } else { 1.0 };
            let want = input.amplitude(x) * sign;
            prop_assert!((out.amplitude(x << 1) - want).norm() <= 1e-12);
            prop_assert!(out.amplitude((x << 1) | 1).norm() <= 1e-12);
        }
        // applied twice, the oracle is the identity
        out.apply_circuit(&circuit).unwrap();
        prop_assert!(out.max_diff(&wide) <= 1e-12);
    }

    #[test]
    fn phase_oracle_squares_to_identity(n in 1usize..=8, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let reg: Vec<usize> = (0..n).collect();
        let value = rng.below(1 << n) as usize;
        let oracle = PatternOracle::for_value(n, reg, value).unwrap();
        let s = random_state(n, &mut rng);
        let mut t = s.clone();
        oracle.apply(&mut t).unwrap();
        prop_assert!((t.amplitude(value) + s.amplitude(value)).norm() < 1e-12);
        oracle.apply(&mut t).unwrap();
        prop_assert!(t.max_diff(&s) < 1e-12);
    }

    #[test]
    fn reflection_is_an_involution(
        n in 1usize..=8,
        seed in any::<u64>(),
    ) {
        let mut rng = SeededRng::new(seed);
        let size = 1 + rng.below(1 << n) as usize;
        let mut states: Vec<usize> = (0..1usize << n).collect();
        rng.shuffle(&mut states);
        states.truncate(size);
        let prep = prepare_basis_set(&BasisSet::new(n, states.clone()).unwrap());
        let s = random_state(n, &mut rng);
        let mut t = s.clone();
        prep.reflect(&mut t);
        // reference: 2|psi><psi| - I with psi uniform over the set
        let psi = {
            let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
            for &i in &states {
                v[i] = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
            }
            v
        };
        let overlap: Complex64 = psi.iter().zip(s.amplitudes()).map(|(p, a)| p.conj() * a).sum();
        for (i, p) in psi.iter().enumerate() {
            let want = p * overlap * 2.0 - s.amplitude(i);
            prop_assert!((t.amplitude(i) - want).norm() < 1e-10);
        }
        prep.reflect(&mut t);
        prop_assert!(t.max_diff(&s) < 1e-10);
    }

    #[test]
    fn arbitrary_state_preparation_round_trips(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let psi = random_state(n, &mut rng);
        let prep = Preparation::from_state(psi.clone());
        let mut zero = StateVector::new(n).unwrap();
        prep.apply_a(&mut zero);
        prop_assert!(zero.max_diff(&psi) < 1e-10);
        prep.apply_a_dagger(&mut zero);
        prop_assert!(zero.max_diff(&StateVector::new(n).unwrap()) < 1e-10);
    }
}

#[test]
fn sampling_is_seeded() {
    let mut s = StateVector::new(3).unwrap();
    for q in 0..3 {
        s.apply(&Gate::H(q)).unwrap();
    }
    let a = s.sample(&[0, 1, 2], 500, &mut SeededRng::new(9)).unwrap();
    let b = s.sample(&[0, 1, 2], 500, &mut SeededRng::new(9)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.values().sum::<u64>(), 500);
}
