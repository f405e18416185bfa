use std::collections::BTreeMap;
use std::fmt;

/// An atomic clause. `occ` separates repeated names on one side of a
/// sequent (`A1`, `A2`), and is ignored when closing an axiom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Atom {
    pub name: String,
    pub occ: u32,
}

impl Atom {
    pub fn new(name: impl Into<String>, occ: u32) -> Self {
        Atom {
            name: name.into(),
            occ,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Tensor(Box<Formula>, Box<Formula>),
    Lolli(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>, occ: u32) -> Self {
        Formula::Atom(Atom::new(name, occ))
    }

    pub fn tensor(left: Formula, right: Formula) -> Self {
        Formula::Tensor(Box::new(left), Box::new(right))
    }

    pub fn lolli(antecedent: Formula, consequent: Formula) -> Self {
        Formula::Lolli(Box::new(antecedent), Box::new(consequent))
    }

    /// Right-nested tensor `f0 * (f1 * (... * fn))`. Panics on an empty list.
    pub fn tensor_chain(mut parts: Vec<Formula>) -> Self {
        let mut acc = parts.pop().expect("tensor_chain of an empty list");
        while let Some(f) = parts.pop() {
            acc = Formula::tensor(f, acc);
        }
        acc
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn has_lolli(&self) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Tensor(l, r) => l.has_lolli() || r.has_lolli(),
            Formula::Lolli(_, _) => true,
        }
    }

    pub fn tensor_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Tensor(l, r) => 1 + l.tensor_count() + r.tensor_count(),
            Formula::Lolli(l, r) => l.tensor_count() + r.tensor_count(),
        }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Tensor(l, r) | Formula::Lolli(l, r) => l.atom_count() + r.atom_count(),
        }
    }

    pub(crate) fn atoms_into<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::Tensor(l, r) | Formula::Lolli(l, r) => {
                l.atoms_into(out);
                r.atoms_into(out);
            }
        }
    }

    pub(crate) fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Tensor(l, r) => Formula::tensor(l.map_atoms(f), r.map_atoms(f)),
            Formula::Lolli(l, r) => Formula::lolli(l.map_atoms(f), r.map_atoms(f)),
        }
    }
}

/// In-order atom sequence of a formula. Positions used by the pair table are
/// 0-based indices into this list.
pub fn flatten_atoms(f: &Formula) -> Vec<Atom> {
    let mut out = Vec::new();
    f.atoms_into(&mut out);
    out.into_iter().cloned().collect()
}

/// A two-sided sequent with ordered formula lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub left: Vec<Formula>,
    pub right: Vec<Formula>,
}

/// Which fragment a sequent (or a search) is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fragment {
    /// Only `*`, exactly one formula on the right.
    TensorOnly,
    /// `*` and `-o`, any number of formulas on either side.
    TensorLolli,
}

impl Sequent {
    pub fn new(left: Vec<Formula>, right: Vec<Formula>) -> Self {
        Sequent { left, right }
    }

    pub fn left_atoms(&self) -> Vec<Atom> {
        side_atoms(&self.left)
    }

    pub fn right_atoms(&self) -> Vec<Atom> {
        side_atoms(&self.right)
    }

    pub fn atom_count(&self) -> usize {
        self.left
            .iter()
            .chain(&self.right)
            .map(Formula::atom_count)
            .sum()
    }

    pub fn is_tensor_only(&self) -> bool {
        self.right.len() == 1 && !self.left.iter().chain(&self.right).any(Formula::has_lolli)
    }

    pub fn in_fragment(&self, fragment: Fragment) -> bool {
        match fragment {
            Fragment::TensorOnly => self.is_tensor_only(),
            Fragment::TensorLolli => true,
        }
    }

    /// Smallest fragment containing this sequent.
    pub fn fragment(&self) -> Fragment {
        if self.is_tensor_only() {
            Fragment::TensorOnly
        } else {
            Fragment::TensorLolli
        }
    }

    pub fn is_atomic(&self) -> bool {
        self.left.iter().chain(&self.right).all(Formula::is_atom)
    }

    /// Atom names with multiplicity, per side.
    pub fn name_multisets(&self) -> (BTreeMap<String, usize>, BTreeMap<String, usize>) {
        let count = |atoms: Vec<Atom>| {
            let mut m = BTreeMap::new();
            for a in atoms {
                *m.entry(a.name).or_insert(0) += 1;
            }
            m
        };
        (count(self.left_atoms()), count(self.right_atoms()))
    }

    /// True when both sides carry the same atom names with the same
    /// multiplicities. Necessary for provability in this calculus.
    pub fn is_balanced(&self) -> bool {
        let (l, r) = self.name_multisets();
        l == r
    }
}

fn side_atoms(side: &[Formula]) -> Vec<Atom> {
    let mut out = Vec::new();
    for f in side {
        f.atoms_into(&mut out);
    }
    out.into_iter().cloned().collect()
}

/// True iff the sequent is `B |- B` for a single atom, comparing names only.
pub fn is_axiom(s: &Sequent) -> bool {
    match (s.left.as_slice(), s.right.as_slice()) {
        ([Formula::Atom(l)], [Formula::Atom(r)]) => l.name == r.name,
        _ => false,
    }
}

// Atoms are printed bare when their occurrence labels on a side are exactly
// the ones the parser would assign (0, 1, 2, ... in order); otherwise every
// occurrence of that name on the side is printed with its label.
pub(crate) fn labelled_names(side: &[Formula]) -> std::collections::BTreeSet<String> {
    let mut seen: BTreeMap<&str, u32> = BTreeMap::new();
    let mut labelled = std::collections::BTreeSet::new();
    let mut atoms = Vec::new();
    for f in side {
        f.atoms_into(&mut atoms);
    }
    for a in atoms {
        let next = seen.entry(a.name.as_str()).or_insert(0);
        if a.occ != *next {
            labelled.insert(a.name.clone());
        }
        *next += 1;
    }
    labelled
}

pub(crate) struct Notation {
    pub tensor: &'static str,
    pub lolli: &'static str,
    pub turnstile: &'static str,
    pub latex: bool,
}

pub(crate) const ASCII: Notation = Notation {
    tensor: "*",
    lolli: " -o ",
    turnstile: " |- ",
    latex: false,
};

pub(crate) const LATEX: Notation = Notation {
    tensor: " \\otimes ",
    lolli: " \\multimap ",
    turnstile: " \\vdash ",
    latex: true,
};

fn write_formula(
    out: &mut String,
    f: &Formula,
    labelled: &std::collections::BTreeSet<String>,
    nt: &Notation,
) {
    match f {
        Formula::Atom(a) => {
            out.push_str(&a.name);
            if labelled.contains(&a.name) {
                if nt.latex {
                    out.push_str(&format!("^{{{}}}", a.occ));
                } else {
                    out.push_str(&a.occ.to_string());
                }
            }
        }
        Formula::Tensor(l, r) => {
            write_operand(out, l, labelled, nt);
            out.push_str(nt.tensor);
            write_operand(out, r, labelled, nt);
        }
        Formula::Lolli(l, r) => {
            write_operand(out, l, labelled, nt);
            out.push_str(nt.lolli);
            // `-o` is right-associative and binds looser than `*`
            write_formula(out, r, labelled, nt);
        }
    }
}

fn write_operand(
    out: &mut String,
    f: &Formula,
    labelled: &std::collections::BTreeSet<String>,
    nt: &Notation,
) {
    if f.is_atom() {
        write_formula(out, f, labelled, nt);
    } else {
        out.push('(');
        write_formula(out, f, labelled, nt);
        out.push(')');
    }
}

fn write_side(out: &mut String, side: &[Formula], nt: &Notation) {
    let labelled = labelled_names(side);
    for (i, f) in side.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_formula(out, f, &labelled, nt);
    }
}

pub(crate) fn write_sequent(s: &Sequent, nt: &Notation) -> String {
    let mut out = String::new();
    write_side(&mut out, &s.left, nt);
    out.push_str(nt.turnstile);
    write_side(&mut out, &s.right, nt);
    out
}

/// ASCII rendering that [`parse_sequent`](super::parse_sequent) reads back
/// to the same structure.
pub fn render_sequent(s: &Sequent) -> String {
    write_sequent(s, &ASCII)
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_sequent(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_side(&mut out, std::slice::from_ref(self), &ASCII);
        f.write_str(&out)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name, self.occ)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_in_order() {
        let f = Formula::tensor(
            Formula::atom("D", 0),
            Formula::tensor(
                Formula::atom("B", 0),
                Formula::tensor(Formula::atom("A", 0), Formula::atom("C", 0)),
            ),
        );
        let names: Vec<_> = flatten_atoms(&f).into_iter().map(|a| a.name).collect();
        assert_eq!(names, ["D", "B", "A", "C"]);
        assert_eq!(
            flatten_atoms(&Formula::atom("A", 0)),
            vec![Atom::new("A", 0)]
        );
    }

    #[test]
    fn axiom_compares_names_only() {
        let ax = |l: &str, lo, r: &str, ro| {
            is_axiom(&Sequent::new(
                vec![Formula::atom(l, lo)],
                vec![Formula::atom(r, ro)],
            ))
        };
        assert!(ax("B", 0, "B", 0));
        assert!(ax("A", 1, "A", 2));
        assert!(!ax("A", 0, "B", 0));
        let weak = Sequent::new(
            vec![Formula::atom("A", 0), Formula::atom("B", 0)],
            vec![Formula::atom("A", 0)],
        );
        assert!(!is_axiom(&weak));
    }

    #[test]
    fn render_uses_labels_only_when_needed() {
        let s = Sequent::new(
            vec![Formula::tensor(
                Formula::atom("A", 0),
                Formula::atom("A", 1),
            )],
            vec![Formula::atom("A", 1)],
        );
        assert_eq!(render_sequent(&s), "A*A |- A1");
    }

    #[test]
    fn tensor_chain_nests_right() {
        let f = Formula::tensor_chain(vec![
            Formula::atom("A", 0),
            Formula::atom("B", 0),
            Formula::atom("C", 0),
        ]);
        assert_eq!(f.to_string(), "A*(B*C)");
        assert_eq!(f.tensor_count(), 2);
    }
}
