//! Encoded-gate success probabilities, gate budgets and expected resource use.

mod factory;
mod klm;
pub mod reference;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::walk::{
    self, mean_encoder_uses, p_add_complement_exact, p_re_exact, EncoderStage, EncodingWidth,
    WalkError,
};

pub use factory::{
    factory_cost, factory_grid, factory_minimum, tn_cost, FactoryCost, FactoryCostModel,
    FactoryRow, RailEncoding,
};
pub use klm::{
    f_z_klm, f_z_klm_exact, klm_concat, klm_resource_bound, KlmBound, KlmLevel,
    KLM_CS_PER_TELEPORTED_CS, KLM_ELIM_PER_TELEPORTED_CS, KLM_TELEPORTED_CS_BOUND,
};

/// Widths scanned by [`solve_min_w`].
pub const W_MAX: u32 = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("teleporter order must be at least 1")]
    ZeroOrder,
    #[error("encoding width must be at least 1")]
    ZeroWidth,
    #[error("target probability must lie in (0, 1], got {0}")]
    InvalidTarget(f64),
    #[error("invalid factory model: {0}")]
    InvalidModel(String),
}

/// Teleporter `T_{n/(n+1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct TeleporterSpec(u32);

impl TeleporterSpec {
    pub fn new(n: u32) -> Result<Self, GateError> {
        if n == 0 {
            return Err(GateError::ZeroOrder);
        }
        Ok(Self(n))
    }

    pub const fn order(self) -> u32 {
        self.0
    }

    pub fn prob(self) -> f64 {
        f64::from(self.0) / f64::from(self.0 + 1)
    }

    pub fn prob_exact(self) -> BigRational {
        BigRational::new(BigInt::from(self.0), BigInt::from(self.0 + 1))
    }
}

impl TryFrom<u32> for TeleporterSpec {
    type Error = GateError;
    fn try_from(n: u32) -> Result<Self, GateError> {
        Self::new(n)
    }
}

impl From<TeleporterSpec> for u32 {
    fn from(t: TeleporterSpec) -> u32 {
        t.0
    }
}

pub fn teleporter_prob(t: TeleporterSpec) -> f64 {
    t.prob()
}

/// Teleporter choice for each stage plus encoding width and target success.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateConfig {
    pub n_a: TeleporterSpec,
    pub n_r: TeleporterSpec,
    pub n_t: TeleporterSpec,
    pub w: EncodingWidth,
    pub p_tot: f64,
}

impl GateConfig {
    pub fn new(n_a: u32, n_r: u32, n_t: u32, w: u32, p_tot: f64) -> Result<Self, GateError> {
        if !(p_tot > 0.0 && p_tot <= 1.0) {
            return Err(GateError::InvalidTarget(p_tot));
        }
        if w == 0 {
            return Err(GateError::ZeroWidth);
        }
        Ok(Self {
            n_a: TeleporterSpec::new(n_a)?,
            n_r: TeleporterSpec::new(n_r)?,
            n_t: TeleporterSpec::new(n_t)?,
            w: EncodingWidth::new(w),
            p_tot,
        })
    }

    /// Same teleporters at another width.
    pub fn with_width(self, w: u32) -> Self {
        Self { w: EncodingWidth::new(w), ..self }
    }

    /// Stage probabilities, with `ln P_add` kept accurate when `P_add` is
    /// within rounding of 1.
    pub fn stages(&self) -> Result<StageProbs, GateError> {
        let pa = self.n_a.prob_exact();
        let complement = walk::to_f64(&p_add_complement_exact(&pa, self.w)?);
        let p_re = walk::to_f64(&p_re_exact(&self.n_r.prob_exact(), self.w)?);
        Ok(StageProbs {
            p_add: 1.0 - complement,
            ln_p_add: (-complement).ln_1p(),
            p_re,
            p_t: self.n_t.prob(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageProbs {
    pub p_add: f64,
    pub ln_p_add: f64,
    pub p_re: f64,
    pub p_t: f64,
}

impl StageProbs {
    /// Success probability of one gate round: both teleports and re-encoding.
    pub fn round_success(&self) -> f64 {
        self.p_t * self.p_t * self.p_re
    }
}

/// `P_add^(1/P_re)`.
pub fn p_gate_single(cfg: &GateConfig) -> Result<f64, GateError> {
    let s = cfg.stages()?;
    Ok((s.ln_p_add / s.p_re).exp())
}

/// `P_add^(1 + 1/(P_t^2 P_re))`.
pub fn p_gate_cnot(cfg: &GateConfig) -> Result<f64, GateError> {
    let s = cfg.stages()?;
    Ok((s.ln_p_add * (1.0 + 1.0 / s.round_success())).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum GateBudget {
    Finite(f64),
    /// The encoder never loses the qubit, so any number of gates fits.
    Unbounded,
}

impl GateBudget {
    pub fn finite(self) -> Option<f64> {
        match self {
            GateBudget::Finite(n) => Some(n),
            GateBudget::Unbounded => None,
        }
    }
}

/// Number of encoded gates that can run while keeping total success at `P_tot`.
pub fn gate_budget(cfg: &GateConfig) -> Result<GateBudget, GateError> {
    let s = cfg.stages()?;
    if cfg.p_tot == 1.0 {
        return Ok(GateBudget::Finite(0.0));
    }
    if s.ln_p_add == 0.0 {
        return Ok(GateBudget::Unbounded);
    }
    let n = cfg.p_tot.ln() / ((1.0 + 1.0 / s.round_success()) * s.ln_p_add);
    Ok(GateBudget::Finite(n))
}

/// Gate budget when both encoder stages use `T_{1/2}`, where `P_add = w/(w+1)`
/// and `P_re = 1/w`.
pub fn gate_budget_half_encoder(p_t: f64, p_tot: f64, w: EncodingWidth) -> Result<f64, GateError> {
    if w.is_lost() {
        return Err(GateError::ZeroWidth);
    }
    if !(p_tot > 0.0 && p_tot <= 1.0) {
        return Err(GateError::InvalidTarget(p_tot));
    }
    let wf = f64::from(w.get());
    Ok(p_tot.ln() / ((wf / (p_t * p_t) + 1.0) * (wf.ln() - (wf + 1.0).ln())))
}

/// Smallest width in `1..=W_MAX` whose encoded CNOT reaches `target`, or
/// `None` if no width in range does.
pub fn solve_min_w(
    target: f64,
    n_a: TeleporterSpec,
    n_r: TeleporterSpec,
    n_t: TeleporterSpec,
) -> Result<Option<EncodingWidth>, GateError> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(GateError::InvalidTarget(target));
    }
    for w in 1..=W_MAX {
        let cfg = GateConfig { n_a, n_r, n_t, w: EncodingWidth::new(w), p_tot: target };
        if p_gate_cnot(&cfg)? >= target {
            return Ok(Some(cfg.w));
        }
    }
    Ok(None)
}

/// Mean stage uses per successful encoded CNOT.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectedUses {
    pub e_add: f64,
    pub e_re: f64,
    pub t_g: f64,
}

pub fn expected_uses(cfg: &GateConfig) -> Result<ExpectedUses, GateError> {
    let s = cfg.stages()?;
    let rounds = 1.0 / s.round_success();
    let pa = cfg.n_a.prob();
    let pr = cfg.n_r.prob();
    let n_add = mean_encoder_uses(EncoderStage::Add, pa, cfg.w)?.unwrap_or(0.0);
    let n_re = mean_encoder_uses(EncoderStage::ReSuccess, pr, cfg.w)?.unwrap_or(0.0);
    let n_fre = mean_encoder_uses(EncoderStage::ReFail, pr, cfg.w)?.unwrap_or(0.0);
    Ok(ExpectedUses {
        e_add: (rounds + 1.0) * n_add,
        e_re: (1.0 / s.p_re - 1.0) * n_fre + n_re,
        t_g: rounds,
    })
}

/// Physical CS gates and elimination circuits consumed per encoded CNOT.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrimitiveCounts {
    pub n_cs: f64,
    pub n_elim: f64,
}

impl PrimitiveCounts {
    pub fn from_uses(uses: &ExpectedUses, n_a: TeleporterSpec, n_r: TeleporterSpec, n_t: TeleporterSpec) -> Self {
        let (a, r, t) = (f64::from(n_a.order()), f64::from(n_r.order()), f64::from(n_t.order()));
        Self {
            n_cs: 2.0 * a * uses.e_add + 2.0 * r * uses.e_re + (t * t + t) * uses.t_g,
            n_elim: (a - 1.0) * uses.e_add + (r - 1.0) * uses.e_re + 2.0 * (t - 1.0) * uses.t_g,
        }
    }
}

pub fn primitive_counts(cfg: &GateConfig) -> Result<PrimitiveCounts, GateError> {
    let uses = expected_uses(cfg)?;
    Ok(PrimitiveCounts::from_uses(&uses, cfg.n_a, cfg.n_r, cfg.n_t))
}

/// Everything the resource report prints for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResourceCount {
    pub e_add: f64,
    pub e_re: f64,
    pub t_g: f64,
    pub n_cs: f64,
    pub n_elim: f64,
    pub bell_states: f64,
    pub elim_states: f64,
}

pub fn resource_count(cfg: &GateConfig, model: &FactoryCostModel) -> Result<ResourceCount, GateError> {
    let uses = expected_uses(cfg)?;
    let prim = PrimitiveCounts::from_uses(&uses, cfg.n_a, cfg.n_r, cfg.n_t);
    let states = factory::cost_from_uses(&uses, cfg, model)?;
    Ok(ResourceCount {
        e_add: uses.e_add,
        e_re: uses.e_re,
        t_g: uses.t_g,
        n_cs: prim.n_cs,
        n_elim: prim.n_elim,
        bell_states: states.bell_states,
        elim_states: states.elim_states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn t(n: u32) -> TeleporterSpec {
        TeleporterSpec::new(n).unwrap()
    }

    fn headline() -> GateConfig {
        GateConfig::new(3, 2, 1, 4, 0.95).unwrap()
    }

    #[test]
    fn teleporter_family() {
        assert_eq!(teleporter_prob(t(1)), 0.5);
        assert_abs_diff_eq!(teleporter_prob(t(2)), 2.0 / 3.0);
        assert_eq!(teleporter_prob(t(3)), 0.75);
        assert!(TeleporterSpec::new(0).is_err());
    }

    #[test]
    fn gate_probabilities_at_headline_config() {
        let cfg = headline();
        let pa: f64 = 120.0 / 121.0;
        assert_abs_diff_eq!(p_gate_single(&cfg).unwrap(), pa.powf(15.0 / 8.0), epsilon = 1e-14);
        assert_abs_diff_eq!(p_gate_single(&cfg).unwrap(), 0.98456, epsilon = 5e-6);
        assert_abs_diff_eq!(p_gate_cnot(&cfg).unwrap(), pa.powf(8.5), epsilon = 1e-14);
        assert_abs_diff_eq!(p_gate_cnot(&cfg.with_width(5)).unwrap(), 0.97622, epsilon = 5e-6);
    }

    #[test]
    fn single_width_single_qubit_gate() {
        // one step decides the add pass, and re-encoding to width 1 is free
        let cfg = GateConfig::new(2, 2, 1, 1, 0.9).unwrap();
        assert_abs_diff_eq!(p_gate_single(&cfg).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn budget_edge_cases() {
        let cfg = GateConfig::new(3, 2, 1, 4, 1.0).unwrap();
        assert_eq!(gate_budget(&cfg).unwrap(), GateBudget::Finite(0.0));
        let cfg = GateConfig::new(1, 1, 1, 2, 0.99).unwrap();
        let n = gate_budget(&cfg).unwrap().finite().unwrap();
        assert_abs_diff_eq!(n, 0.002754, epsilon = 5e-7);
        let special = gate_budget_half_encoder(0.5, 0.99, EncodingWidth::new(2)).unwrap();
        assert_abs_diff_eq!(n, special, epsilon = 1e-12);
    }

    #[test]
    fn min_width_search() {
        assert_eq!(solve_min_w(0.95, t(3), t(2), t(1)).unwrap(), Some(EncodingWidth::new(5)));
        assert_eq!(solve_min_w(0.95, t(1), t(1), t(1)).unwrap(), None);
        let w1 = p_gate_cnot(&headline().with_width(1)).unwrap();
        assert_eq!(solve_min_w(w1, t(3), t(2), t(1)).unwrap(), Some(EncodingWidth::new(1)));
    }

    #[test]
    fn expected_uses_at_headline_config() {
        let uses = expected_uses(&headline()).unwrap();
        assert_abs_diff_eq!(uses.t_g, 7.5, epsilon = 1e-12);
        assert_abs_diff_eq!(uses.e_add, 16.0025, epsilon = 1e-4);
        assert_abs_diff_eq!(uses.e_re, 6.375, epsilon = 1e-9);
        let prim = primitive_counts(&headline()).unwrap();
        assert_abs_diff_eq!(prim.n_cs, 136.5, epsilon = 0.05);
        assert_abs_diff_eq!(prim.n_elim, 38.38, epsilon = 0.01);
    }

    #[test]
    fn half_encoders_need_no_elimination() {
        for w in 1..6 {
            let cfg = GateConfig::new(1, 1, 1, w, 0.9).unwrap();
            assert_eq!(primitive_counts(&cfg).unwrap().n_elim, 0.0);
        }
    }

    #[test]
    fn invalid_configs() {
        assert!(matches!(GateConfig::new(3, 2, 1, 0, 0.9), Err(GateError::ZeroWidth)));
        assert!(matches!(GateConfig::new(3, 2, 1, 4, 0.0), Err(GateError::InvalidTarget(_))));
        assert!(matches!(GateConfig::new(0, 2, 1, 4, 0.9), Err(GateError::ZeroOrder)));
    }
}
