//! Formulas and sequents of the tensor/implication fragment, the ASCII
//! parser, the sequent-calculus rules, proof trees and their rendering.

mod formula;
mod parse;
mod render;
mod rules;

pub use formula::{flatten_atoms, is_axiom, render_sequent, Atom, Formula, Fragment, Sequent};
pub use parse::{parse_formula, parse_sequent, ParseError};
pub use render::{render_proof, InvalidProof, ProofFormat};
pub use rules::{
    apply_rule, check_proof, saturate_tensor_left, Premise, ProofTree, RuleApp, RuleError, Split,
};
