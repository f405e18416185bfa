use std::time::Instant;

use serde::Serialize;

use super::report::{Method, MAX_PAIRDB_K};
use crate::classical::prove_bruteforce;
use crate::grover::success_probability;
use crate::pairdb::{prove_pairdb, DbParams, PairDbConfig};
use crate::qsim::SeededRng;
use crate::seqcalc::{check_proof, Fragment};
use crate::splitsearch::{prove_splitsearch, SplitSearchConfig};
use crate::workload::permutation_sequent;

/// Largest k per method: the pair database is capped by the statevector
/// budget, split codes by `(k-1) + log2 k <= 24` qubits and the classical
/// search by its exponential split enumeration.
pub fn max_k(method: Method) -> usize {
    match method {
        Method::Pairdb => MAX_PAIRDB_K,
        Method::Splitsearch => 16,
        Method::Classical => 10,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub ks: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub shots: u64,
    pub method: Method,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub k: usize,
    pub trial: u64,
    pub method: Method,
    pub success: bool,
    pub iterations: u64,
    pub oracle_calls: u64,
    pub p_theory: f64,
    pub p_empirical: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub k: usize,
    pub method: Method,
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Qubits per database copy, or the split-code width.
    pub qubits: usize,
    pub iterations: u64,
    pub oracle_calls: u64,
    pub p_theory: f64,
    pub mean_p_empirical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub schema: u32,
    pub seed: u64,
    pub shots: u64,
    pub rows: Vec<BenchRow>,
    pub summary: Vec<BenchSummary>,
}

pub fn validate(opts: &BenchOptions) -> Result<(), String> {
    let limit = max_k(opts.method);
    if let Some(&k) = opts.ks.iter().find(|&&k| k == 0 || k > limit) {
        return Err(format!(
            "k = {k} is outside 1..={limit} for method {:?}",
            opts.method
        ));
    }
    if opts.ks.is_empty() {
        return Err("empty k list".into());
    }
    Ok(())
}

fn ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn one_trial(k: usize, trial: u64, opts: &BenchOptions) -> (BenchRow, usize) {
    let mut rng = SeededRng::stream(opts.seed, ((k as u64) << 32) | trial);
    let (s, perm) = permutation_sequent(k, &mut rng);
    let run_seed = rng.next_u64();
    let start = Instant::now();
    let mut row = BenchRow {
        k,
        trial,
        method: opts.method,
        success: false,
        iterations: 0,
        oracle_calls: 0,
        p_theory: 1.0,
        p_empirical: 0.0,
        wall_ms: 0.0,
    };
    let mut qubits = 0;
    match opts.method {
        Method::Pairdb => {
            let params = DbParams::for_k(k);
            qubits = params.qubits_per_copy();
            row.iterations = params.iterations();
            row.oracle_calls = k as u64 * params.iterations();
            row.p_theory = success_probability(k as u64, 1, params.iterations());
            let cfg = PairDbConfig {
                shots: opts.shots,
                ..PairDbConfig::default()
            };
            if let Ok(p) = prove_pairdb(&s, &cfg, run_seed) {
                row.success = p.recovery.permutation == perm && check_proof(&p.proof);
                row.oracle_calls = p.recovery.stats.oracle_calls;
                let hits: f64 = p
                    .recovery
                    .queries
                    .iter()
                    .map(|q| {
                        let want = crate::qsim::bitstring(perm[q.b], params.n);
                        let shots: u64 = q.histogram.values().sum();
                        q.histogram.get(&want).copied().unwrap_or(0) as f64 / shots as f64
                    })
                    .sum();
                row.p_empirical = hits / k as f64;
            }
        }
        Method::Splitsearch => {
            let cfg = SplitSearchConfig {
                budget: opts.budget,
            };
            if let Ok(p) = prove_splitsearch(&s, &cfg, run_seed) {
                qubits = p.stats.width;
                row.success = check_proof(&p.proof);
                row.iterations = p.stats.iterations_per_run;
                row.oracle_calls = p.stats.oracle_calls;
                row.p_theory = p.stats.p_theory;
                row.p_empirical =
                    (p.stats.runs - p.stats.rejected_unmarked) as f64 / p.stats.runs.max(1) as f64;
            }
        }
        Method::Classical => {
            let proof = prove_bruteforce(&s, Fragment::TensorOnly);
            row.success = proof.as_ref().is_some_and(check_proof);
            row.p_empirical = f64::from(u8::from(row.success));
        }
    }
    row.wall_ms = ms(start);
    (row, qubits)
}

pub fn run_bench(opts: &BenchOptions) -> Result<BenchReport, String> {
    validate(opts)?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &k in &opts.ks {
        let mut qubits = 0;
        let first = rows.len();
        for trial in 0..opts.trials {
            let (row, q) = one_trial(k, trial, opts);
            qubits = qubits.max(q);
            rows.push(row);
        }
        let these: &[BenchRow] = &rows[first..];
        let successes = these.iter().filter(|r| r.success).count() as u64;
        let n = these.len().max(1) as f64;
        summary.push(BenchSummary {
            k,
            method: opts.method,
            trials: opts.trials,
            successes,
            success_rate: successes as f64 / n,
            qubits,
            iterations: these.first().map_or(0, |r| r.iterations),
            oracle_calls: these.first().map_or(0, |r| r.oracle_calls),
            p_theory: these.first().map_or(0.0, |r| r.p_theory),
            mean_p_empirical: these.iter().map(|r| r.p_empirical).sum::<f64>() / n,
        });
    }
    Ok(BenchReport {
        schema: super::report::SCHEMA,
        seed: opts.seed,
        shots: opts.shots,
        rows,
        summary,
    })
}

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("row serializes");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(ks: Vec<usize>, method: Method) -> BenchOptions {
        BenchOptions {
            ks,
            trials: 3,
            seed: 2,
            shots: 200,
            method,
            budget: 200,
        }
    }

    #[test]
    fn pairdb_rows() {
        let r = run_bench(&opts(vec![4, 16], Method::Pairdb)).unwrap();
        assert_eq!(r.rows.len(), 6);
        for row in &r.rows {
            assert!(row.success);
            let per = (std::f64::consts::PI * (row.k as f64).sqrt() / 4.0).floor() as u64;
            assert_eq!(row.oracle_calls, row.k as u64 * per);
        }
        assert_eq!(r.summary[0].qubits, 4);
        assert!((r.summary[0].p_theory - 1.0).abs() < 1e-9);
        assert_eq!(r.summary[0].mean_p_empirical, 1.0);
    }

    #[test]
    fn csv_header() {
        let r = run_bench(&opts(vec![2], Method::Classical)).unwrap();
        let csv = rows_to_csv(&r.rows);
        assert!(csv.starts_with(
            "k,trial,method,success,iterations,oracle_calls,p_theory,p_empirical,wall_ms\n"
        ));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn limits() {
        assert!(validate(&opts(vec![128], Method::Pairdb)).is_err());
        assert!(validate(&opts(vec![32], Method::Splitsearch)).is_err());
        assert!(validate(&opts(vec![64], Method::Pairdb)).is_ok());
        assert!(validate(&opts(vec![], Method::Pairdb)).is_err());
    }

    #[test]
    fn splitsearch_rows() {
        let r = run_bench(&opts(vec![4], Method::Splitsearch)).unwrap();
        assert!(r.rows.iter().all(|row| row.success && row.iterations == 2));
        assert_eq!(r.summary[0].qubits, 5);
    }
}
