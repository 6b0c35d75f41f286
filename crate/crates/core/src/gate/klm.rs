use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

/// Teleported CS gates needed by the concatenated scheme at the comparison point.
pub const KLM_TELEPORTED_CS_BOUND: u32 = 250;
pub const KLM_ELIM_PER_TELEPORTED_CS: u32 = 4;
pub const KLM_CS_PER_TELEPORTED_CS: u32 = 9;

/// Failure probability for teleporting a logical qubit of the two-qubit
/// concatenated code whose physical teleports fail with probability `f`.
pub fn f_z_klm(f: f64) -> f64 {
    f * f * (2.0 - f) / (1.0 - f * (1.0 - f))
}

pub fn f_z_klm_exact(f: &BigRational) -> BigRational {
    let one = BigRational::one();
    let two = &one + &one;
    f * f * (&two - f) / (&one - f * (&one - f))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KlmLevel {
    pub level: u32,
    pub f: f64,
    /// A CS gate teleports two encoded qubits.
    pub cs_success: f64,
}

/// `f_0, F_Z(f_0), F_Z(F_Z(f_0)), ...` up to `levels` applications.
pub fn klm_concat(f0: f64, levels: u32) -> Vec<KlmLevel> {
    let mut out = Vec::with_capacity(levels as usize + 1);
    let mut f = f0;
    for level in 0..=levels {
        out.push(KlmLevel { level, f, cs_success: (1.0 - f) * (1.0 - f) });
        f = f_z_klm(f);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KlmBound {
    pub elim: u32,
    pub cs: u32,
}

pub fn klm_resource_bound() -> KlmBound {
    KlmBound {
        elim: KLM_TELEPORTED_CS_BOUND * KLM_ELIM_PER_TELEPORTED_CS,
        cs: KLM_TELEPORTED_CS_BOUND * KLM_CS_PER_TELEPORTED_CS,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn quarter_failure() {
        let f = BigRational::new(BigInt::from(1), BigInt::from(4));
        assert_eq!(f_z_klm_exact(&f), BigRational::new(BigInt::from(7), BigInt::from(52)));
        assert!((f_z_klm(0.25) - 7.0 / 52.0).abs() < 1e-16);
    }

    #[test]
    fn endpoints() {
        assert_eq!(f_z_klm(0.0), 0.0);
        assert_eq!(f_z_klm(1.0), 1.0);
    }

    #[test]
    fn concatenation_levels() {
        let lv = klm_concat(0.25, 2);
        assert_eq!(lv[0].cs_success, 9.0 / 16.0);
        assert!((lv[1].cs_success - 0.749).abs() < 5e-4);
        assert!((lv[2].cs_success - 0.925).abs() < 5e-4);
    }

    #[test]
    fn bound() {
        assert_eq!(klm_resource_bound(), KlmBound { elim: 1000, cs: 2250 });
    }
}
