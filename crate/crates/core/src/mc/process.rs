use serde::Serialize;

use super::sim::{Algorithm, GateProcess, McError, StageCosts};
use crate::walk::{markov_exact, WalkProblem};

/// One walk pass: probability of reaching the far boundary and the
/// unconditional mean number of steps.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Pass {
    success: f64,
    mean_steps: f64,
}

fn pass(p: f64, left: i64, right: i64, start: i64) -> Result<Pass, McError> {
    let prob = WalkProblem::new(p, left, right, start).map_err(crate::gate::GateError::from)?;
    let sol = markov_exact(&prob).map_err(crate::gate::GateError::from)?;
    Ok(Pass { success: sol.absorb_prob_right, mean_steps: sol.mean_steps })
}

/// Exact expectations of the simulated algorithm, per successful gate and
/// with lost trials' uses included, as tallied by [`simulate`](super::simulate).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProcessExpectation {
    pub success: f64,
    pub e_add: f64,
    pub e_re: f64,
    pub t_g: f64,
}

impl ProcessExpectation {
    pub fn cost(&self, per_use: &[f64; 3]) -> f64 {
        StageCosts::apply(per_use, [self.e_add, self.e_re, self.t_g])
    }
}

pub fn process_expectation(proc_: &GateProcess, algorithm: Algorithm) -> Result<ProcessExpectation, McError> {
    proc_.validate()?;
    let w = i64::from(proc_.w.get());
    let add = pass(proc_.p_add_step, 0, w + 1, w)?;
    let re = pass(proc_.p_re_step, 0, w, 1)?;
    let (a, r) = (add.success, re.success);
    if a == 0.0 {
        return Err(McError::NonTerminating("adding a component never succeeds"));
    }
    Ok(match algorithm {
        Algorithm::Z90 => {
            // add passes are geometric in the add-then-re-encode loop
            let success = a * r / (1.0 - a * (1.0 - r));
            ProcessExpectation {
                success,
                e_add: add.mean_steps / (a * r),
                e_re: re.mean_steps / r,
                t_g: 0.0,
            }
        }
        Algorithm::Cnot => {
            let q = proc_.p_t * proc_.p_t * r;
            let d = 1.0 - (1.0 - q) * a;
            let success = a * a * q / d;
            let add_passes = 1.0 + a + (1.0 - q) * a * a / d;
            ProcessExpectation {
                success,
                e_add: add_passes * add.mean_steps / success,
                e_re: re.mean_steps / r,
                t_g: 1.0 / q,
            }
        }
    })
}
