//! Parse a sequent, prove it by exhaustive search and print the proof in
//! both output formats.
//!
//!     cargo run --example parse_and_prove -- "A*(B*C) |- C*(A*B)"

use qproof::classical::prove_bruteforce_with_stats;
use qproof::seqcalc::{parse_sequent, render_proof, ProofFormat};

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "A*(B*(C*D)) |- D*(B*(A*C))".to_string());
    let s = match parse_sequent(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{text}\n{e}");
            std::process::exit(1);
        }
    };
    println!("parsed:   {s}");
    println!("fragment: {:?}, {} atoms", s.fragment(), s.atom_count());

    let (proof, stats) = prove_bruteforce_with_stats(&s, s.fragment());
    println!(
        "search:   {} nodes, {} splits tried",
        stats.nodes_visited, stats.partitions_tried
    );
    match proof {
        Some(p) => {
            println!("\n{}", render_proof(&p, ProofFormat::Text).unwrap());
            println!("{}", render_proof(&p, ProofFormat::Latex).unwrap());
        }
        None => println!("not provable"),
    }
}
