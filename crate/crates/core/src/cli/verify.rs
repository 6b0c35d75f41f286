use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fock::{build_tn, elim_resource, fidelity, tn_reference, FockError, FockState, Rail, Surd};
use crate::parity::{encode_logical, logical_fidelity, CodeRegister, ParityError};

/// Fidelity threshold used by the state checks.
pub const FIDELITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    fn from_result(name: &str, r: Result<(bool, String), String>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn equal_superposition(kets: &[&str], cutoff: u32) -> Result<FockState, FockError> {
    let amp = Complex64::new(1.0 / (kets.len() as f64).sqrt(), 0.0);
    FockState::from_terms(cutoff, kets.iter().map(|k| (occupation(k), amp)))
}

fn occupation(ket: &str) -> Vec<u32> {
    ket.chars().map(|c| c.to_digit(10).expect("digit")).collect()
}

/// Expected seven-term single-rail state after the mixing splitter, as
/// `(ket, coefficient * 7)`.
pub fn seven_term_reference() -> Vec<(&'static str, f64)> {
    let (r2, r3) = (2f64.sqrt(), 3f64.sqrt());
    vec![
        ("010111", r3),
        ("010210", -3.0 * r2),
        ("011011", r3),
        ("012010", 3.0 * r2),
        ("110011", 1.0),
        ("110110", -r3),
        ("111010", r3),
    ]
}

fn elimination(rail: Rail, kets: &[&str]) -> Result<(bool, String), String> {
    let float = elim_resource::<Complex64>(rail).map_err(|e| e.to_string())?;
    let exact = elim_resource::<Surd>(rail).map_err(|e| e.to_string())?;
    let target = equal_superposition(kets, 1).map_err(|e| e.to_string())?;
    let f = fidelity(&float.state, &target).map_err(|e| e.to_string())?;
    let p = exact.probability.as_rational();
    let p_ok = p == Some(ratio(12, 441));
    let shown = match &p {
        Some(q) if p_ok => format!("{q} (= 12/441)"),
        Some(q) => q.to_string(),
        None => exact.probability.to_string(),
    };
    Ok((f >= 1.0 - FIDELITY_TOL && p_ok, format!("fidelity {f:.15}, probability {shown}")))
}

fn seven_term() -> Result<(bool, String), String> {
    let run = elim_resource::<Complex64>(Rail::Single).map_err(|e| e.to_string())?;
    let reference = seven_term_reference();
    let mut worst = 0f64;
    for (ket, c) in &reference {
        let got = run.mixed.amplitude(&occupation(ket)).copied().unwrap_or_default();
        worst = worst.max((got - Complex64::new(c / 7.0, 0.0)).norm());
    }
    let extra = run.mixed.len() != reference.len();
    Ok((worst <= 1e-12 && !extra, format!("{} terms, max deviation {worst:.3e}", run.mixed.len())))
}

fn tn_growth(max: u32) -> Result<(bool, String), String> {
    let mut worst = 1f64;
    let mut exact = true;
    for n in 1..=max {
        let built = build_tn::<Complex64>(n).map_err(|e| e.to_string())?;
        let reference = tn_reference::<Complex64>(n).map_err(|e| e.to_string())?;
        worst = worst.min(fidelity(&built.state, &reference).map_err(|e| e.to_string())?);
        let surd = build_tn::<Surd>(n).map_err(|e| e.to_string())?;
        exact &= surd.state == tn_reference::<Surd>(n).map_err(|e| e.to_string())?;
    }
    Ok((worst >= 1.0 - FIDELITY_TOL && exact, format!("n = 1..{max}, min fidelity {worst:.15}, exact match {exact}")))
}

/// Normalized inputs used by the logical-gate checks.
pub fn logical_inputs() -> Vec<(Complex64, Complex64)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = Complex64::new;
    vec![
        (c(1.0, 0.0), c(0.0, 0.0)),
        (c(0.0, 0.0), c(1.0, 0.0)),
        (c(h, 0.0), c(h, 0.0)),
        (c(h, 0.0), c(-h, 0.0)),
        (c(h, 0.0), c(0.0, h)),
        (c(0.6, 0.0), c(0.0, -0.8)),
    ]
}

fn ideal_cnot(control: (Complex64, Complex64), target: (Complex64, Complex64)) -> Vec<Complex64> {
    let (a, b) = control;
    let (x, y) = target;
    vec![a * x, a * y, b * y, b * x]
}

fn parity_suite(max_w: u32) -> Result<(bool, String), ParityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst = 1f64;
    let inputs = logical_inputs();
    for w in 1..=max_w {
        for &(a, b) in &inputs {
            let grown = encode_logical(a, b, w)?.encoder_step(0, 0)?;
            let direct = encode_logical(a, b, w + 1)?;
            let l = grown.logical_amplitudes()?;
            worst = worst.min(logical_fidelity(&l, &direct.logical_amplitudes()?));
            let z = encode_logical(a, b, w)?.logical_z90(0, &mut rng)?;
            let (za, zb) = z.readout_logical()?;
            worst = worst.min(logical_fidelity(&[za, zb], &[a, b * Complex64::new(0.0, 1.0)]));
        }
    }
    for wc in 1..=max_w {
        for wt in 1..=max_w {
            for (i, &ctl) in inputs.iter().enumerate() {
                let tgt = inputs[(i + 2) % inputs.len()];
                let reg = CodeRegister::from_logical(&ideal_product(ctl, tgt), &[wc, wt])?;
                let out = reg.logical_cnot(0, 1, &mut rng)?;
                worst = worst.min(logical_fidelity(&out.logical_amplitudes()?, &ideal_cnot(ctl, tgt)));
            }
        }
    }
    Ok((worst >= 1.0 - FIDELITY_TOL, format!("widths 1..{max_w}, min logical fidelity {worst:.15}")))
}

fn ideal_product(c: (Complex64, Complex64), t: (Complex64, Complex64)) -> Vec<Complex64> {
    vec![c.0 * t.0, c.0 * t.1, c.1 * t.0, c.1 * t.1]
}

/// Fock-level and parity-code golden checks.
pub fn run_checks() -> Vec<Check> {
    vec![
        Check::from_result("single_rail_elimination", elimination(Rail::Single, &["0011", "1001", "1100"])),
        Check::from_result("single_rail_seven_term_state", seven_term()),
        Check::from_result("dual_rail_elimination", elimination(Rail::Dual, &["10001011", "01101001", "01110100"])),
        Check::from_result("tn_growth", tn_growth(5)),
        Check::from_result("parity_code_gates", parity_suite(3).map_err(|e| e.to_string())),
    ]
}
