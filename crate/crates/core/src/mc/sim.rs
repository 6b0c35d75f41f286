use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::stats::{Estimate, Moments};
use crate::gate::{tn_cost, FactoryCostModel, GateConfig, GateError, TeleporterSpec};
use crate::walk::{EncodingWidth, WalkProblem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McError {
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("trial count must be at least {min}, got {got}")]
    TooFewTrials { min: u64, got: u64 },
    #[error("step probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("this process never terminates: {0}")]
    NonTerminating(&'static str),
}

/// Seed plus sub-stream. Trial `i` of a run always uses stream `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Step probabilities driving a simulated encoded gate. Built from a
/// [`GateConfig`], or directly to probe limits such as a perfect encoder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateProcess {
    pub p_add_step: f64,
    pub p_re_step: f64,
    pub p_t: f64,
    pub w: EncodingWidth,
    pub order: TeleportOrder,
}

/// Which encoded qubit is teleported first in a gate round. The round stops
/// at the first failure, so only one qubit loses a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TeleportOrder {
    #[default]
    ControlFirst,
    TargetFirst,
}

impl GateProcess {
    pub fn from_config(cfg: &GateConfig) -> Self {
        Self {
            p_add_step: cfg.n_a.prob(),
            p_re_step: cfg.n_r.prob(),
            p_t: cfg.n_t.prob(),
            w: cfg.w,
            order: TeleportOrder::default(),
        }
    }

    pub fn validate(&self) -> Result<(), McError> {
        for p in [self.p_add_step, self.p_re_step, self.p_t] {
            if !(0.0..=1.0).contains(&p) {
                return Err(McError::InvalidProbability(p));
            }
        }
        if self.w.is_lost() {
            return Err(McError::Gate(GateError::ZeroWidth));
        }
        if self.p_t == 0.0 {
            return Err(McError::NonTerminating("gate teleporters never succeed"));
        }
        if self.p_re_step == 0.0 && self.w.get() > 1 {
            return Err(McError::NonTerminating("re-encoding never succeeds"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Z90,
    Cnot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Control,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Add,
    Reencode,
    Teleport,
}

/// Width change of one encoded qubit (or of the subset being re-encoded).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEvent {
    pub role: Role,
    pub stage: Stage,
    pub before: u32,
    pub after: u32,
}

/// Per-trial tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TrialOutcome {
    pub success: bool,
    pub add_steps: u64,
    pub re_steps: u64,
    pub gate_rounds: u64,
}

impl TrialOutcome {
    fn vector(&self) -> [u64; 4] {
        [u64::from(self.success), self.add_steps, self.re_steps, self.gate_rounds]
    }
}

/// Steps until the walk on `0..=right` from `start` is absorbed; returns
/// whether it reached `right`.
fn walk_to<R: Rng, O: FnMut(&TraceEvent)>(
    rng: &mut R,
    p: f64,
    start: u32,
    right: u32,
    role: Role,
    stage: Stage,
    steps: &mut u64,
    observe: &mut O,
) -> bool {
    let mut x = start;
    while x > 0 && x < right {
        let up = rng.gen_bool(p);
        let next = if up { x + 1 } else { x - 1 };
        observe(&TraceEvent { role, stage, before: x, after: next });
        x = next;
        *steps += 1;
    }
    x == right
}

/// Adds one component to a width-`w` qubit.
fn add_pass<R: Rng, O: FnMut(&TraceEvent)>(
    rng: &mut R,
    proc_: &GateProcess,
    role: Role,
    tally: &mut TrialOutcome,
    observe: &mut O,
) -> bool {
    let w = proc_.w.get();
    walk_to(rng, proc_.p_add_step, w, w + 1, role, Stage::Add, &mut tally.add_steps, observe)
}

/// Rebuilds a width-`w` block from one component.
fn reencode_pass<R: Rng, O: FnMut(&TraceEvent)>(
    rng: &mut R,
    proc_: &GateProcess,
    role: Role,
    tally: &mut TrialOutcome,
    observe: &mut O,
) -> bool {
    walk_to(rng, proc_.p_re_step, 1, proc_.w.get(), role, Stage::Reencode, &mut tally.re_steps, observe)
}

/// One run of the single-qubit gate algorithm: add a component, apply the
/// gate to it, re-encode from it, and go back to adding on re-encode failure.
pub fn z90_trial<R: Rng, O: FnMut(&TraceEvent)>(rng: &mut R, proc_: &GateProcess, mut observe: O) -> TrialOutcome {
    let mut t = TrialOutcome::default();
    loop {
        if !add_pass(rng, proc_, Role::Control, &mut t, &mut observe) {
            return t;
        }
        if reencode_pass(rng, proc_, Role::Control, &mut t, &mut observe) {
            t.success = true;
            return t;
        }
    }
}

/// One run of the encoded CNOT: add a component to both qubits, then repeat
/// gate rounds. A round teleports both qubits in `proc_.order` (a failure
/// Z-measures the new component, which is re-added), then re-encodes the
/// target; a failed re-encoding loses the new subset and the target is
/// re-added.
pub fn cnot_trial<R: Rng, O: FnMut(&TraceEvent)>(rng: &mut R, proc_: &GateProcess, mut observe: O) -> TrialOutcome {
    let mut t = TrialOutcome::default();
    let w = proc_.w.get();
    for role in [Role::Control, Role::Target] {
        if !add_pass(rng, proc_, role, &mut t, &mut observe) {
            return t;
        }
    }
    loop {
        t.gate_rounds += 1;
        let (first, second) = match proc_.order {
            TeleportOrder::ControlFirst => (Role::Control, Role::Target),
            TeleportOrder::TargetFirst => (Role::Target, Role::Control),
        };
        let failed = if !rng.gen_bool(proc_.p_t) {
            Some(first)
        } else if !rng.gen_bool(proc_.p_t) {
            Some(second)
        } else if !reencode_pass(rng, proc_, Role::Target, &mut t, &mut observe) {
            Some(Role::Target)
        } else {
            None
        };
        let Some(role) = failed else {
            t.success = true;
            return t;
        };
        observe(&TraceEvent { role, stage: Stage::Teleport, before: w + 1, after: w });
        if !add_pass(rng, proc_, role, &mut t, &mut observe) {
            return t;
        }
    }
}

/// Aggregated Monte Carlo tallies. Means of uses are per successful gate:
/// totals over all trials, lost ones included, divided by the number of
/// successes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub trials: u64,
    pub successes: u64,
    pub logical_losses: u64,
    pub success_fraction: Estimate,
    pub encoder_uses_add: Option<Estimate>,
    pub encoder_uses_re: Option<Estimate>,
    pub teleporter_uses_gate: Option<Estimate>,
    pub cs_gates: Option<Estimate>,
    pub elim_circuits: Option<Estimate>,
    pub bell_states: Option<Estimate>,
    pub elim_states: Option<Estimate>,
}

/// Per-use cost of each stage, ordered `[add, re-encode, gate round]`.
/// A gate round teleports both encoded qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageCosts {
    pub cs_gates: [f64; 3],
    pub elim_circuits: [f64; 3],
    pub bell_states: [f64; 3],
    pub elim_states: [f64; 3],
}

impl StageCosts {
    pub fn for_config(cfg: &GateConfig, model: &FactoryCostModel) -> Result<Self, GateError> {
        let (a, r, t) = (tn_cost(cfg.n_a, model)?, tn_cost(cfg.n_r, model)?, tn_cost(cfg.n_t, model)?);
        let order = |s: TeleporterSpec| f64::from(s.order());
        let (na, nr, nt) = (order(cfg.n_a), order(cfg.n_r), order(cfg.n_t));
        Ok(Self {
            cs_gates: [2.0 * na, 2.0 * nr, nt * nt + nt],
            elim_circuits: [na - 1.0, nr - 1.0, 2.0 * (nt - 1.0)],
            bell_states: [a.bell_states, r.bell_states, 2.0 * t.bell_states],
            elim_states: [a.elim_states, r.elim_states, 2.0 * t.elim_states],
        })
    }

    /// Total cost of the given numbers of stage uses.
    pub fn apply(c: &[f64; 3], uses: [f64; 3]) -> f64 {
        c[0] * uses[0] + c[1] * uses[1] + c[2] * uses[2]
    }
}

fn run_trials(proc_: &GateProcess, algorithm: Algorithm, trials: u64, seed: u64) -> Moments<4> {
    (0..trials)
        .into_par_iter()
        .fold(Moments::<4>::default, |mut m, i| {
            let mut rng = RngStream::new(seed, i).rng();
            let t = match algorithm {
                Algorithm::Z90 => z90_trial(&mut rng, proc_, |_| {}),
                Algorithm::Cnot => cnot_trial(&mut rng, proc_, |_| {}),
            };
            m.push(t.vector());
            m
        })
        .reduce(Moments::<4>::default, Moments::merge)
}

/// Runs `trials` independent trials (trial `i` on stream `i` of `seed`).
pub fn simulate(
    proc_: &GateProcess,
    algorithm: Algorithm,
    trials: u64,
    seed: u64,
    costs: Option<&StageCosts>,
) -> Result<RunReport, McError> {
    proc_.validate()?;
    if trials == 0 {
        return Err(McError::TooFewTrials { min: 1, got: 0 });
    }
    let m = run_trials(proc_, algorithm, trials, seed);
    let succ = [1.0, 0.0, 0.0, 0.0];
    let per_success = |c: [f64; 4]| m.ratio(&c, &succ);
    let successes = m.sum[0] as u64;
    let cost = |pick: fn(&StageCosts) -> &[f64; 3]| {
        costs.and_then(|c| {
            let v = pick(c);
            per_success([0.0, v[0], v[1], v[2]])
        })
    };
    Ok(RunReport {
        algorithm,
        trials,
        successes,
        logical_losses: trials - successes,
        success_fraction: m.fraction(0),
        encoder_uses_add: per_success([0.0, 1.0, 0.0, 0.0]),
        encoder_uses_re: per_success([0.0, 0.0, 1.0, 0.0]),
        teleporter_uses_gate: per_success([0.0, 0.0, 0.0, 1.0]),
        cs_gates: cost(|c| &c.cs_gates),
        elim_circuits: cost(|c| &c.elim_circuits),
        bell_states: cost(|c| &c.bell_states),
        elim_states: cost(|c| &c.elim_states),
    })
}

pub fn sim_z90(cfg: &GateConfig, trials: u64, seed: u64, model: &FactoryCostModel) -> Result<RunReport, McError> {
    let costs = StageCosts::for_config(cfg, model)?;
    simulate(&GateProcess::from_config(cfg), Algorithm::Z90, trials, seed, Some(&costs))
}

pub fn sim_cnot(cfg: &GateConfig, trials: u64, seed: u64, model: &FactoryCostModel) -> Result<RunReport, McError> {
    let costs = StageCosts::for_config(cfg, model)?;
    simulate(&GateProcess::from_config(cfg), Algorithm::Cnot, trials, seed, Some(&costs))
}

/// Empirical absorption statistics of a bare walk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkReport {
    pub trials: u64,
    pub absorbed_right: u64,
    pub absorbed_left: u64,
    pub absorb_prob_right: Estimate,
    /// Conditional on absorbing at the right boundary.
    pub mean_steps_to_right: Option<Estimate>,
    /// Conditional on absorbing at the left boundary.
    pub mean_steps_to_left: Option<Estimate>,
}

pub fn sim_walk(prob: &WalkProblem, trials: u64, seed: u64) -> Result<WalkReport, McError> {
    if trials == 0 {
        return Err(McError::TooFewTrials { min: 1, got: 0 });
    }
    let span = (prob.right - prob.left) as u32;
    let start = (prob.start - prob.left) as u32;
    let m = (0..trials)
        .into_par_iter()
        .fold(Moments::<4>::default, |mut m, i| {
            let mut rng = RngStream::new(seed, i).rng();
            let mut steps = 0;
            let right = walk_to(&mut rng, prob.p, start, span, Role::Control, Stage::Add, &mut steps, &mut |_| {});
            let r = u64::from(right);
            m.push([r, 1 - r, steps * r, steps * (1 - r)]);
            m
        })
        .reduce(Moments::<4>::default, Moments::merge);
    Ok(WalkReport {
        trials,
        absorbed_right: m.sum[0] as u64,
        absorbed_left: m.sum[1] as u64,
        absorb_prob_right: m.fraction(0),
        mean_steps_to_right: m.ratio(&[0.0, 0.0, 1.0, 0.0], &[1.0, 0.0, 0.0, 0.0]),
        mean_steps_to_left: m.ratio(&[0.0, 0.0, 0.0, 1.0], &[0.0, 1.0, 0.0, 0.0]),
    })
}
