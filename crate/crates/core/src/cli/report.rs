use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;

use crate::classical::{prove_bruteforce_with_stats, PairError, SearchStats};
use crate::pairdb::{prove_pairdb, DbParams, PairDbConfig, PairDbError};
use crate::qsim::Histogram;
use crate::seqcalc::{
    check_proof, parse_sequent, render_proof, render_sequent, saturate_tensor_left, ParseError,
    ProofFormat, ProofTree, Sequent,
};
use crate::splitsearch::{prove_splitsearch, SplitSearchConfig, SplitSearchError};

pub const SCHEMA: u32 = 1;

/// Largest clause count the pair database is simulated for.
pub const MAX_PAIRDB_K: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Classical,
    Pairdb,
    Splitsearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Proved,
    NotProvable,
    RecoveryFailed,
    Unsupported,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Classical => "classical",
            Method::Pairdb => "pairdb",
            Method::Splitsearch => "splitsearch",
        }
    }
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::NotProvable => "not-provable",
            Status::RecoveryFailed => "recovery-failed",
            Status::Unsupported => "unsupported",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Proved => 0,
            Status::Unsupported => 1,
            Status::NotProvable => 2,
            Status::RecoveryFailed => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProveOptions {
    pub method: Method,
    pub seed: u64,
    pub shots: u64,
    pub budget: u64,
    pub timing: bool,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions {
            method: Method::Pairdb,
            seed: 0,
            shots: 1000,
            budget: SplitSearchConfig::default().budget,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofText {
    pub text: String,
    pub latex: String,
}

/// Per-query histograms for the pair database, one histogram over all
/// runs for the split search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ReportHistogram {
    PerQuery(Vec<Histogram>),
    Runs(Histogram),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub sequent: String,
    pub method: Method,
    pub seed: u64,
    pub shots: u64,
    pub status: Status,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Atomic clauses: left atoms for tensor-only sequents, all atoms
    /// otherwise.
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubits_per_copy: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code_width: Option<usize>,
    /// Grover rounds per query (pair database) or per run (split search).
    pub iterations: u64,
    pub oracle_calls: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attempts: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<u64>,
    /// Pre-measurement probability of the wanted outcome, per query or
    /// per run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_success: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<ReportHistogram>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split_codes: Option<Vec<String>>,
    /// The split codes as plain basis-state bitstrings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marked_states: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule_source: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof: Option<ProofText>,
    pub wall_ms: u64,
}

impl RunReport {
    fn new(s: &Sequent, opts: &ProveOptions) -> Self {
        RunReport {
            schema: SCHEMA,
            sequent: render_sequent(s),
            method: opts.method,
            seed: opts.seed,
            shots: opts.shots,
            status: Status::Unsupported,
            valid: false,
            error: None,
            k: clause_count(s),
            qubits_per_copy: None,
            code_width: None,
            iterations: 0,
            oracle_calls: 0,
            attempts: None,
            runs: None,
            p_success: None,
            histogram: None,
            permutation: None,
            split_codes: None,
            marked_states: None,
            schedule_source: None,
            search: None,
            proof: None,
            wall_ms: 0,
        }
    }

    fn fail(&mut self, status: Status, error: impl ToString) {
        self.status = status;
        self.error = Some(error.to_string());
    }

    fn attach(&mut self, proof: &ProofTree) {
        self.valid = check_proof(proof);
        if self.valid {
            self.status = Status::Proved;
            self.proof = Some(ProofText {
                text: render_proof(proof, ProofFormat::Text).expect("checked"),
                latex: render_proof(proof, ProofFormat::Latex).expect("checked"),
            });
        } else {
            self.fail(Status::RecoveryFailed, "produced tree does not check");
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "sequent: {}\nmethod: {}  seed: {}  shots: {}\nstatus: {}\n",
            self.sequent,
            self.method.name(),
            self.seed,
            self.shots,
            self.status.name()
        );
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        out.push_str(&format!("k: {}\n", self.k));
        if let Some(q) = self.qubits_per_copy {
            out.push_str(&format!("qubits per copy: {q}\n"));
        }
        if let Some(w) = self.code_width {
            out.push_str(&format!("code width: {w}\n"));
        }
        out.push_str(&format!(
            "iterations: {}\noracle calls: {}\n",
            self.iterations, self.oracle_calls
        ));
        if let Some(p) = &self.permutation {
            out.push_str(&format!("permutation: {p:?}\n"));
        }
        if let Some(codes) = &self.split_codes {
            out.push_str(&format!("split codes: {}\n", codes.join(" ")));
        }
        if let Some(ps) = &self.p_success {
            let min = ps.iter().copied().fold(f64::INFINITY, f64::min);
            out.push_str(&format!("min success probability: {min:.6}\n"));
        }
        if let Some(proof) = &self.proof {
            out.push_str("proof:\n");
            out.push_str(&proof.text);
        }
        out
    }

    pub fn to_latex(&self) -> String {
        match &self.proof {
            Some(p) => p.latex.clone(),
            None => format!(
                "% no proof: {}\n",
                self.error.as_deref().unwrap_or("not attempted")
            ),
        }
    }
}

fn clause_count(s: &Sequent) -> usize {
    if s.is_tensor_only() {
        s.left_atoms().len()
    } else {
        s.atom_count()
    }
}

/// Parses `text` and runs the selected prover. Only a parse error is
/// returned as `Err`; every other outcome is described by the report.
pub fn prove_report(text: &str, opts: &ProveOptions) -> Result<RunReport, ParseError> {
    let s = parse_sequent(text)?;
    let start = Instant::now();
    let mut r = RunReport::new(&s, opts);
    match opts.method {
        Method::Classical => run_classical(&s, &mut r),
        Method::Pairdb => run_pairdb(&s, opts, &mut r),
        Method::Splitsearch => run_splitsearch(&s, opts, &mut r),
    }
    if opts.timing {
        r.wall_ms = start.elapsed().as_millis() as u64;
    }
    Ok(r)
}

fn run_classical(s: &Sequent, r: &mut RunReport) {
    let (proof, stats) = prove_bruteforce_with_stats(s, s.fragment());
    r.search = Some(stats);
    match proof {
        Some(p) => r.attach(&p),
        None => r.fail(Status::NotProvable, "not provable: no derivation exists"),
    }
}

fn run_pairdb(s: &Sequent, opts: &ProveOptions, r: &mut RunReport) {
    if !s.is_tensor_only() {
        return r.fail(Status::Unsupported, PairError::NotTensorOnly);
    }
    if r.k > MAX_PAIRDB_K {
        return r.fail(
            Status::Unsupported,
            format!("pair database is simulated for k <= {MAX_PAIRDB_K}"),
        );
    }
    let params = DbParams::for_k(r.k);
    r.qubits_per_copy = Some(params.qubits_per_copy());
    r.iterations = params.iterations();
    let cfg = PairDbConfig {
        shots: opts.shots,
        ..PairDbConfig::default()
    };
    match prove_pairdb(s, &cfg, opts.seed) {
        Ok(p) => {
            let stats = &p.recovery.stats;
            r.oracle_calls = stats.oracle_calls;
            r.attempts = Some(stats.attempts);
            r.p_success = Some(stats.p_marked.clone());
            r.histogram = Some(ReportHistogram::PerQuery(
                p.recovery
                    .queries
                    .iter()
                    .map(|q| q.histogram.clone())
                    .collect(),
            ));
            r.permutation = Some(p.recovery.permutation.clone());
            r.attach(&p.proof);
        }
        Err(e @ PairDbError::RecoveryFailed { attempts }) => {
            r.attempts = Some(attempts);
            r.oracle_calls = r.k as u64 * params.iterations();
            r.fail(Status::RecoveryFailed, e);
        }
        Err(e @ (PairDbError::NotProvable(_) | PairDbError::Pair(PairError::AtomMismatch))) => {
            r.fail(Status::NotProvable, e)
        }
        Err(e) => r.fail(Status::Unsupported, e),
    }
}

fn run_splitsearch(s: &Sequent, opts: &ProveOptions, r: &mut RunReport) {
    if s.is_tensor_only() {
        if let Ok((sat, _)) = saturate_tensor_left(s) {
            r.k = sat.left.len();
        }
    }
    let cfg = SplitSearchConfig {
        budget: opts.budget,
    };
    match prove_splitsearch(s, &cfg, opts.seed) {
        Ok(p) => {
            r.code_width = Some(p.stats.width);
            r.iterations = p.stats.iterations_per_run;
            r.oracle_calls = p.stats.oracle_calls;
            r.runs = Some(p.stats.runs);
            r.p_success = Some(vec![p.stats.p_marked]);
            r.histogram = Some(ReportHistogram::Runs(p.stats.histogram.clone()));
            r.marked_states = Some(p.codes.iter().map(|c| c.replace('|', "")).collect());
            r.split_codes = Some(p.codes.clone());
            r.schedule_source = p.schedule_source;
            r.attach(&p.proof);
        }
        Err(e @ SplitSearchError::NotProvable(_)) => r.fail(Status::NotProvable, e),
        Err(
            e @ (SplitSearchError::BudgetExhausted { .. }
            | SplitSearchError::InconsistentAssignment(_)
            | SplitSearchError::Incomplete { .. }),
        ) => {
            r.runs = Some(opts.budget);
            r.fail(Status::RecoveryFailed, e)
        }
        Err(e) => r.fail(Status::Unsupported, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str, method: Method, seed: u64) -> RunReport {
        let opts = ProveOptions {
            method,
            seed,
            ..ProveOptions::default()
        };
        prove_report(text, &opts).unwrap()
    }

    #[test]
    fn worked_pairdb_report() {
        let r = run("A*(B*(C*D)) |- D*(B*(A*C))", Method::Pairdb, 7);
        assert!(r.valid);
        assert_eq!(r.permutation, Some(vec![3, 1, 0, 2]));
        assert_eq!(r.oracle_calls, 4);
        assert_eq!(r.qubits_per_copy, Some(4));
        assert_eq!(r.exit_code(), 0);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["histogram"][0]["11"], 1000);
    }

    #[test]
    fn classical_mismatch_exit() {
        let r = run("A |- B", Method::Classical, 0);
        assert!(!r.valid);
        assert_eq!(r.exit_code(), 2);
        assert!(r.proof.is_none());
        assert_eq!(run("A |- B", Method::Pairdb, 0).exit_code(), 2);
        assert_eq!(run("A |- B", Method::Splitsearch, 0).exit_code(), 2);
    }

    #[test]
    fn splitsearch_report() {
        let r = run("A, B |- A*B", Method::Splitsearch, 1);
        assert!(r.valid);
        assert_eq!(r.marked_states, Some(vec!["00".into(), "11".into()]));
        assert_eq!(r.code_width, Some(2));
    }

    #[test]
    fn pairdb_rejects_lolli() {
        let r = run("A, A -o B |- B", Method::Pairdb, 0);
        assert_eq!(r.exit_code(), 1);
        let r = run("A, A -o B |- B", Method::Classical, 0);
        assert!(r.valid);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run("A*(B*(C*D)) |- D*(B*(A*C))", Method::Pairdb, 9).to_json();
        let b = run("A*(B*(C*D)) |- D*(B*(A*C))", Method::Pairdb, 9).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_errors_surface() {
        assert!(prove_report("A * |- B", &ProveOptions::default()).is_err());
    }
}
