//! The four-atom worked example through the entangled pair database:
//! saturate ⊗-Left, encode the atom pairs, query each right position on a
//! fresh copy and apply the recovered splits.

use qproof::classical::match_atom_pairs;
use qproof::pairdb::{encode_pairs, prove_pairdb, PairDbConfig};
use qproof::seqcalc::{parse_sequent, render_proof, saturate_tensor_left, ProofFormat};

fn main() {
    let s = parse_sequent("A*(B*(C*D)) |- D*(B*(A*C))").unwrap();
    let (sat, _) = saturate_tensor_left(&s).unwrap();
    let table = match_atom_pairs(&sat).unwrap();
    for e in &table.entries {
        println!("{}: left {} right {}", e.atom.name, e.a, e.b);
    }
    let (params, basis) = encode_pairs(&table).unwrap();
    println!(
        "database: {} qubits per copy, support {:?}",
        params.qubits_per_copy(),
        basis.states()
    );

    let p = prove_pairdb(&s, &PairDbConfig::default(), 7).unwrap();
    for q in &p.recovery.queries {
        println!(
            "query b={} -> a={}  p={:.6}  {:?}",
            q.b, q.a, q.p_marked, q.histogram
        );
    }
    println!("permutation {:?}", p.recovery.permutation);
    println!("oracle calls {}", p.recovery.stats.oracle_calls);
    println!("\n{}", render_proof(&p.proof, ProofFormat::Text).unwrap());
}
