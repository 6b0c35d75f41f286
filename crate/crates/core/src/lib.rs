//! Incremental parity encoding for linear-optics quantum computing.
//!
//! * [`walk`]: absorbing random walks behind encoder success and cost.
//! * [`gate`]: encoded-gate probabilities, gate budgets and resource counts.
//! * [`mc`]: seeded Monte Carlo of the encoded-gate algorithms.
//! * [`fock`]: sparse Fock-state engine for elimination and teleporter resources.
//! * [`parity`]: qubit-level model of the parity code and its gate procedures.
//! * [`cli`]: the `parity-loqc` command-line front end.

pub mod walk;
pub mod gate;
pub mod fock;
pub mod parity;
pub mod mc;
pub mod cli;
