//! Conversion of teleporter uses into factory-produced Bell and elimination states.
//!
//! `|t_1>` is a Bell pair. `|t_{k+1}>` is grown from `|t_k>` by adjoining one
//! more pair and removing `|11>` on the joining rails with one elimination
//! state. The joining step is carried out with `rail_links_per_elimination`
//! basic teleports of success `rail_link_success`; if any of them fails the
//! whole partial resource is thrown away and rebuilt.

use serde::{Deserialize, Serialize};

use super::{
    expected_uses, solve_min_w, ExpectedUses, GateConfig, GateError, TeleporterSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RailEncoding {
    Single,
    /// Each resource pair is built in dual rail: twice the Bell pairs plus one
    /// CS gate per pair.
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FactoryCostModel {
    pub rail: RailEncoding,
    /// Bell states consumed by one CS gate (dual rail only).
    pub cs_bell: f64,
    pub rail_link_success: f64,
    pub rail_links_per_elimination: u32,
}

impl Default for FactoryCostModel {
    fn default() -> Self {
        Self {
            rail: RailEncoding::Single,
            cs_bell: 2.0,
            rail_link_success: 0.5,
            rail_links_per_elimination: 4,
        }
    }
}

impl FactoryCostModel {
    pub fn validate(&self) -> Result<(), GateError> {
        if !(self.cs_bell >= 0.0 && self.cs_bell.is_finite()) {
            return Err(GateError::InvalidModel(format!("cs_bell must be finite and >= 0, got {}", self.cs_bell)));
        }
        if !(self.rail_link_success > 0.0 && self.rail_link_success <= 1.0) {
            return Err(GateError::InvalidModel(format!(
                "rail_link_success must lie in (0, 1], got {}",
                self.rail_link_success
            )));
        }
        Ok(())
    }

    fn pair_bell(&self) -> f64 {
        match self.rail {
            RailEncoding::Single => 1.0,
            RailEncoding::Dual => 2.0 + self.cs_bell,
        }
    }

    fn link_success(&self) -> f64 {
        self.rail_link_success.powi(self.rail_links_per_elimination as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct FactoryCost {
    pub bell_states: f64,
    pub elim_states: f64,
}

impl std::ops::Add for FactoryCost {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            bell_states: self.bell_states + o.bell_states,
            elim_states: self.elim_states + o.elim_states,
        }
    }
}

impl std::ops::Mul<f64> for FactoryCost {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self { bell_states: self.bell_states * k, elim_states: self.elim_states * k }
    }
}

/// Expected factory states consumed to produce one `|t_n>`.
pub fn tn_cost(t: TeleporterSpec, model: &FactoryCostModel) -> Result<FactoryCost, GateError> {
    model.validate()?;
    let pair = model.pair_bell();
    let s = model.link_success();
    let mut cost = FactoryCost { bell_states: pair, elim_states: 0.0 };
    for _ in 1..t.order() {
        cost = FactoryCost {
            bell_states: (cost.bell_states + pair) / s,
            elim_states: (cost.elim_states + 1.0) / s,
        };
    }
    Ok(cost)
}

pub(super) fn cost_from_uses(
    uses: &ExpectedUses,
    cfg: &GateConfig,
    model: &FactoryCostModel,
) -> Result<FactoryCost, GateError> {
    // a gate round teleports both encoded qubits
    Ok(tn_cost(cfg.n_a, model)? * uses.e_add
        + tn_cost(cfg.n_r, model)? * uses.e_re
        + tn_cost(cfg.n_t, model)? * (2.0 * uses.t_g))
}

/// Factory states consumed per successful encoded CNOT.
pub fn factory_cost(cfg: &GateConfig, model: &FactoryCostModel) -> Result<FactoryCost, GateError> {
    cost_from_uses(&expected_uses(cfg)?, cfg, model)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactoryRow {
    pub n_a: u32,
    pub n_r: u32,
    pub n_t: u32,
    pub w: u32,
    pub e_add: f64,
    pub e_re: f64,
    pub t_g: f64,
    pub bell_states: f64,
    pub elim_states: f64,
}

impl FactoryRow {
    pub fn total_states(&self) -> f64 {
        self.bell_states + self.elim_states
    }
}

/// Factory cost at the smallest width reaching `target`, for every
/// `(n_a, n_r)` in `orders x orders`. Pairs with no solution are skipped.
pub fn factory_grid(
    target: f64,
    orders: std::ops::RangeInclusive<u32>,
    n_t: u32,
    model: &FactoryCostModel,
) -> Result<Vec<FactoryRow>, GateError> {
    model.validate()?;
    let nt = TeleporterSpec::new(n_t)?;
    let mut rows = Vec::new();
    for n_a in orders.clone() {
        for n_r in orders.clone() {
            let (na, nr) = (TeleporterSpec::new(n_a)?, TeleporterSpec::new(n_r)?);
            let Some(w) = solve_min_w(target, na, nr, nt)? else {
                continue;
            };
            let cfg = GateConfig::new(n_a, n_r, n_t, w.get(), target)?;
            let uses = expected_uses(&cfg)?;
            let cost = cost_from_uses(&uses, &cfg, model)?;
            rows.push(FactoryRow {
                n_a,
                n_r,
                n_t,
                w: w.get(),
                e_add: uses.e_add,
                e_re: uses.e_re,
                t_g: uses.t_g,
                bell_states: cost.bell_states,
                elim_states: cost.elim_states,
            });
        }
    }
    Ok(rows)
}

/// Row with the fewest factory states in total; the first such row wins ties.
pub fn factory_minimum(rows: &[FactoryRow]) -> Option<&FactoryRow> {
    rows.iter().fold(None, |best: Option<&FactoryRow>, r| match best {
        Some(b) if b.total_states() <= r.total_states() => Some(b),
        _ => Some(r),
    })
}
