//! Literature values quoted for comparison. They are reported next to the
//! computed values and never replace them.

/// Re-encoder uses at `n_a=3, n_r=2, n_t=1, w=4`.
pub const E_RE: f64 = 5.7;
/// Adding-encoder uses at the same configuration.
pub const E_ADD: f64 = 16.0;
/// Gate-stage teleporter uses at the same configuration.
pub const T_G: f64 = 7.5;
/// Physical CS gates for a 95% encoded CNOT.
pub const N_CS: f64 = 90.0;
/// Elimination circuits for a 95% encoded CNOT.
pub const N_ELIM: f64 = 32.0;
/// Factory Bell states at the cheapest teleporter choice.
pub const FACTORY_BELL: f64 = 1300.0;
/// Factory elimination states at the cheapest teleporter choice.
pub const FACTORY_ELIM: f64 = 620.0;
/// Encoding width said to give a 95% CS gate in the concatenated scheme with `T_{3/4}`.
pub const KLM_WIDTH_FOR_95: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ReferenceValue {
    pub name: &'static str,
    pub value: f64,
}

pub const ALL: [ReferenceValue; 7] = [
    ReferenceValue { name: "e_add", value: E_ADD },
    ReferenceValue { name: "e_re", value: E_RE },
    ReferenceValue { name: "t_g", value: T_G },
    ReferenceValue { name: "n_cs", value: N_CS },
    ReferenceValue { name: "n_elim", value: N_ELIM },
    ReferenceValue { name: "factory_bell", value: FACTORY_BELL },
    ReferenceValue { name: "factory_elim", value: FACTORY_ELIM },
];

pub fn lookup(name: &str) -> Option<f64> {
    ALL.iter().find(|r| r.name == name).map(|r| r.value)
}
