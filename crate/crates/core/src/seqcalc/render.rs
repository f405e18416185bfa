use thiserror::Error;

use super::formula::{write_sequent, ASCII, LATEX};
use super::rules::{check_proof, ProofTree, RuleApp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofFormat {
    /// Indented tree, conclusion first, two spaces per level.
    Text,
    /// A `bussproofs` `prooftree` environment.
    Latex,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("refusing to render a tree that does not check")]
pub struct InvalidProof;

pub fn render_proof(t: &ProofTree, format: ProofFormat) -> Result<String, InvalidProof> {
    if !check_proof(t) {
        return Err(InvalidProof);
    }
    let mut out = String::new();
    match format {
        ProofFormat::Text => text(t, 0, &mut out),
        ProofFormat::Latex => {
            out.push_str("\\begin{prooftree}\n");
            latex(t, &mut out);
            out.push_str("\\end{prooftree}\n");
        }
    }
    Ok(out)
}

fn text(t: &ProofTree, depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push_str(&write_sequent(&t.conclusion, &ASCII));
    out.push_str("   [");
    out.push_str(t.rule.label());
    out.push_str("]\n");
    for p in &t.premises {
        text(p, depth + 1, out);
    }
}

fn latex(t: &ProofTree, out: &mut String) {
    let concl = write_sequent(&t.conclusion, &LATEX);
    if t.rule == RuleApp::Axiom {
        out.push_str(&format!("\\AxiomC{{${concl}$}}\n"));
        return;
    }
    for p in &t.premises {
        latex(p, out);
    }
    let inf = match t.premises.len() {
        1 => "UnaryInfC",
        _ => "BinaryInfC",
    };
    out.push_str(&format!("\\RightLabel{{{}}}\n", t.rule.latex_label()));
    out.push_str(&format!("\\{inf}{{${concl}$}}\n"));
}
