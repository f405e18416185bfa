//! Grover-based proof search for the tensor fragment of intuitionistic
//! multiplicative linear logic, on a dense statevector simulator.

pub mod classical;
pub mod cli;
pub mod grover;
pub mod pairdb;
pub mod qsim;
pub mod seqcalc;
pub mod splitsearch;
pub mod workload;
