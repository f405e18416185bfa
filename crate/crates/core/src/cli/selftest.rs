//! Invariant checks bundled into the binary, for a quick sanity pass on a
//! fresh build.

use super::report::{prove_report, Method, ProveOptions};
use crate::classical::prove_bruteforce;
use crate::grover::{
    grover_iterations, prepare_basis_set, run_grover, success_probability, BasisSet,
    MarkedSetOracle, PatternOracle, PhaseOracle,
};
use crate::pairdb::{prove_pairdb, PairDbConfig};
use crate::qsim::{decompose_mcx, Gate, McxLayout, SeededRng, StateVector};
use crate::seqcalc::{check_proof, parse_sequent, render_sequent, Fragment};
use crate::splitsearch::{
    decode_assignment_tensor, derive_split_codes_lolli, derive_split_codes_tensor, schedule_of,
    SplitAssignment, SplitCode,
};
use crate::workload::random_tensor_sequent;

type Check = Result<(), String>;
type Suite = (&'static str, fn(u64) -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const WORKED: &str = "A*(B*(C*D)) |- D*(B*(A*C))";

fn parse_round_trip(_: u64) -> Check {
    for text in [
        WORKED,
        "A, B |- A*B",
        "A1, A2 -o B1 |- C1 -o B2, C2",
        "(A -o B) -o C |- D * (E -o F)",
    ] {
        let s = parse_sequent(text).map_err(|e| e.to_string())?;
        let again = parse_sequent(&render_sequent(&s)).map_err(|e| e.to_string())?;
        ensure(again == s, || format!("{text} does not round-trip"))?;
    }
    ensure(parse_sequent("A * |- B").is_err(), || {
        "accepted a dangling *".into()
    })
}

fn grover_closed_form(_: u64) -> Check {
    for (n, m) in [(2usize, 1usize), (3, 1), (6, 1), (5, 4), (7, 6)] {
        let space = 1u64 << n;
        let iters = grover_iterations(space, m as u64).map_err(|e| e.to_string())?;
        let oracle = MarkedSetOracle::new(n, 0..m).map_err(|e| e.to_string())?;
        let prep = prepare_basis_set(&BasisSet::uniform(n).map_err(|e| e.to_string())?);
        let s = run_grover(&prep, &oracle, iters).map_err(|e| e.to_string())?;
        let p: f64 = (0..m).map(|i| s.probability(i)).sum();
        let want = success_probability(space, m as u64, iters);
        ensure((p - want).abs() < 1e-9, || {
            format!("N={space} M={m}: simulated {p}, closed form {want}")
        })?;
    }
    Ok(())
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
            let c = rng.below(others.len().min(3) as u64 + 1) as usize;
            Gate::Mcx {
                controls: others[..c].to_vec(),
                target: q,
            }
        }
    }
}

fn norm_preservation(seed: u64) -> Check {
    let mut rng = SeededRng::stream(seed, 1);
    let n = 8;
    let mut s = StateVector::new(n).map_err(|e| e.to_string())?;
    for _ in 0..1000 {
        s.apply(&random_gate(n, &mut rng))
            .map_err(|e| e.to_string())?;
    }
    ensure((s.norm() - 1.0).abs() <= 1e-10, || {
        format!("norm {}", s.norm())
    })
}

fn mcx_decomposition(_: u64) -> Check {
    for m in 3..=6 {
        let n = 2 * m - 1;
        let layout = McxLayout {
            controls: (0..m).collect(),
            target: m,
            ancillas: (m + 1..n).collect(),
        };
        let circuit = decompose_mcx(n, &layout).map_err(|e| e.to_string())?;
        let native = Gate::Mcx {
            controls: layout.controls.clone(),
            target: m,
        };
        for x in 0..1usize << (m + 1) {
            // ancillas are the low bits and start clean
            let index = x << (m - 2);
            let mut a = StateVector::basis(n, index).map_err(|e| e.to_string())?;
            let mut b = a.clone();
            a.apply_circuit(&circuit).map_err(|e| e.to_string())?;
            b.apply(&native).map_err(|e| e.to_string())?;
            ensure(a.max_diff(&b) < 1e-12, || {
                format!("{m} controls, input {x:b}")
            })?;
        }
    }
    Ok(())
}

fn pattern_oracle_circuit(_: u64) -> Check {
    for n in 1..=5 {
        for value in [0, (1 << n) - 1, (1 << n) / 3] {
            let o =
                PatternOracle::for_value(n, (0..n).collect(), value).map_err(|e| e.to_string())?;
            let circuit = o.kickback_circuit();
            let diag = o.diagonal();
            for (x, &d) in diag.iter().enumerate() {
                let mut s = StateVector::basis(n + 1, x << 1).map_err(|e| e.to_string())?;
                s.apply_circuit(&circuit).map_err(|e| e.to_string())?;
                let amp = s.amplitude(x << 1);
                ensure((amp.re - d).abs() < 1e-12 && amp.im.abs() < 1e-12, || {
                    format!("n={n} value={value} x={x}: amplitude {amp}")
                })?;
            }
        }
    }
    Ok(())
}

fn reflection_involution(seed: u64) -> Check {
    let mut rng = SeededRng::stream(seed, 2);
    let prep = prepare_basis_set(&BasisSet::new(4, [2, 5, 11, 12]).map_err(|e| e.to_string())?);
    let mut s = StateVector::new(4).map_err(|e| e.to_string())?;
    for _ in 0..30 {
        s.apply(&random_gate(4, &mut rng))
            .map_err(|e| e.to_string())?;
    }
    let mut twice = s.clone();
    prep.reflect(&mut twice);
    prep.reflect(&mut twice);
    ensure(twice.max_diff(&s) < 1e-10, || "D^2 != I".into())
}

fn worked_pair_database(seed: u64) -> Check {
    let s = parse_sequent(WORKED).map_err(|e| e.to_string())?;
    let p = prove_pairdb(&s, &PairDbConfig::default(), seed).map_err(|e| e.to_string())?;
    ensure(p.recovery.permutation == [3, 1, 0, 2], || {
        format!("permutation {:?}", p.recovery.permutation)
    })?;
    ensure(check_proof(&p.proof), || "proof does not check".into())?;
    ensure(
        p.recovery
            .stats
            .p_marked
            .iter()
            .all(|&x| (x - 1.0).abs() < 1e-9),
        || "per-query probability below 1".into(),
    )
}

fn split_codes(_: u64) -> Check {
    let s = parse_sequent("A, B, C, D |- D*(B*(A*C))").map_err(|e| e.to_string())?;
    let codes: Vec<String> = derive_split_codes_tensor(&s)
        .map_err(|e| e.to_string())?
        .iter()
        .map(SplitCode::bitstring)
        .collect();
    ensure(codes == ["110|00", "100|01", "111|10", "000|11"], || {
        format!("tensor codes {codes:?}")
    })?;
    let good = SplitAssignment::from_bitstrings(&codes).map_err(|e| e.to_string())?;
    ensure(decode_assignment_tensor(&good, &s).is_ok(), || {
        "derived codes do not decode".into()
    })?;
    let printed = SplitAssignment::from_bitstrings(&["110|00", "100|01", "111|10", "010|11"])
        .map_err(|e| e.to_string())?;
    ensure(decode_assignment_tensor(&printed, &s).is_err(), || {
        "D = 010|11 was accepted".into()
    })?;

    let s = parse_sequent("A1, A2 -o B1 |- C1 -o B2, C2").map_err(|e| e.to_string())?;
    let proof = prove_bruteforce(&s, Fragment::TensorLolli).ok_or("no classical proof")?;
    let codes: Vec<String> = derive_split_codes_lolli(&s, &schedule_of(&proof))
        .map_err(|e| e.to_string())?
        .iter()
        .map(SplitCode::bitstring)
        .collect();
    ensure(
        codes
            == [
                "0000|000", "0001|001", "0010|010", "0111|011", "0010|100", "0111|101",
            ],
        || format!("lolli codes {codes:?}"),
    )
}

fn prover_agreement(seed: u64) -> Check {
    let mut rng = SeededRng::stream(seed, 3);
    for i in 0..20 {
        let k = 1 + (i % 6);
        let s = random_tensor_sequent(k, i % 3 != 0, &mut rng);
        let classical = prove_bruteforce(&s, Fragment::TensorOnly).is_some();
        let quantum = prove_pairdb(&s, &PairDbConfig::default(), seed).is_ok();
        ensure(classical == quantum, || {
            format!("{s}: classical {classical}, pair database {quantum}")
        })?;
    }
    Ok(())
}

fn deterministic_reports(seed: u64) -> Check {
    let opts = ProveOptions {
        method: Method::Pairdb,
        seed,
        ..ProveOptions::default()
    };
    let a = prove_report(WORKED, &opts)
        .map_err(|e| e.to_string())?
        .to_json();
    let b = prove_report(WORKED, &opts)
        .map_err(|e| e.to_string())?
        .to_json();
    ensure(a == b, || "reports differ between identical runs".into())
}

pub const SUITES: &[Suite] = &[
    ("parse-round-trip", parse_round_trip),
    ("grover-closed-form", grover_closed_form),
    ("norm-preservation", norm_preservation),
    ("mcx-decomposition", mcx_decomposition),
    ("pattern-oracle-circuit", pattern_oracle_circuit),
    ("reflection-involution", reflection_involution),
    ("worked-pair-database", worked_pair_database),
    ("split-codes", split_codes),
    ("prover-agreement", prover_agreement),
    ("deterministic-reports", deterministic_reports),
];

/// Runs every suite, returning `(name, result)` in order.
pub fn run_selftest(seed: u64) -> Vec<(&'static str, Check)> {
    SUITES.iter().map(|(name, f)| (*name, f(seed))).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_suites_pass() {
        for (name, r) in super::run_selftest(0) {
            assert!(r.is_ok(), "{name}: {r:?}");
        }
    }
}
