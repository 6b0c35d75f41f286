use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::amplitude::Amplitude;
use super::state::{BeamSplitterSpec, FockError, FockState, Occupation};

/// Largest `|t_n>` order built by [`build_tn`] and [`tn_reference`].
pub const TN_MAX_ORDER: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rail {
    Single,
    Dual,
}

/// Intermediate and final states of the elimination circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationRun<A: Amplitude> {
    pub rail: Rail,
    /// State right after the balanced splitter that mixes the two photons.
    pub mixed: FockState<A>,
    /// Unnormalized state once both ancilla detectors have seen one photon.
    pub heralded: FockState<A>,
    /// Normalized output state.
    pub state: FockState<A>,
    pub probability: A,
    /// Names of the modes of `state`.
    pub mode_labels: Vec<&'static str>,
}

fn bs<A: Amplitude>(s: FockState<A>, i: usize, j: usize, num: i64, den: i64) -> Result<FockState<A>, FockError> {
    s.apply_bs(&BeamSplitterSpec::exact(i, j, num, den))
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Two-photon circuit whose output is `|t_2>` up to relabelling.
///
/// Mode names follow the circuit figure: signal modes 1, 3 (first photon),
/// 4, 6 (second photon), ancilla modes 2 and 5, and in dual rail the extra
/// rails a, b and c, d carrying the qubits.
pub fn elim_resource<A: Amplitude>(rail: Rail) -> Result<EliminationRun<A>, FockError> {
    match rail {
        Rail::Single => single_rail(),
        Rail::Dual => dual_rail(),
    }
}

fn single_rail<A: Amplitude>() -> Result<EliminationRun<A>, FockError> {
    // modes 1..6 -> 0..5, photons in 2, 3, 4, 5
    let s = FockState::<A>::basis(vec![0, 1, 1, 1, 1, 0], 4)?;
    let s = bs(s, 2, 0, 1, 7)?;
    let s = bs(s, 3, 5, 1, 7)?;
    let mixed = bs(s, 2, 3, 1, 2)?;
    let s = bs(mixed.clone(), 2, 1, 1, 3)?;
    let s = bs(s, 3, 4, 1, 3)?;
    let s = s.project_count(4, 1)?;
    let heralded = s.project_count(1, 1)?;
    // remaining modes 1, 3, 4, 6
    let s = bs(heralded.clone(), 2, 1, 1, 2)?;
    let raw = s.sign_flip(1)?;
    let probability = raw.norm_sqr();
    Ok(EliminationRun {
        rail: Rail::Single,
        mixed,
        heralded,
        state: raw.normalized()?.with_cutoff(1)?,
        probability,
        mode_labels: vec!["1", "3", "4", "6"],
    })
}

fn dual_rail<A: Amplitude>() -> Result<EliminationRun<A>, FockError> {
    // modes a b 1 2 3 | c d 4 5 6
    let weak = A::scaled_sqrt(1, &rational(1, 7));
    let strong = A::scaled_sqrt(1, &rational(6, 7));
    let photon1 = FockState::from_terms(
        6,
        [(vec![0, 1, 1, 1, 0], weak.clone()), (vec![1, 0, 0, 1, 1], strong.clone())],
    )?;
    let photon2 = FockState::from_terms(6, [(vec![0, 1, 1, 1, 0], strong), (vec![1, 0, 0, 1, 1], weak)])?;
    let s = photon1.tensor(&photon2);
    let mixed = bs(s, 4, 7, 1, 2)?;
    let s = bs(mixed.clone(), 4, 3, 1, 3)?;
    let s = bs(s, 7, 8, 1, 3)?;
    let s = s.project_count(8, 1)?;
    let heralded = s.project_count(3, 1)?;
    // remaining modes a b 1 3 c d 4 6
    let s = bs(heralded.clone(), 6, 3, 1, 2)?;
    let raw = s.sign_flip(3)?;
    let probability = raw.norm_sqr();
    Ok(EliminationRun {
        rail: Rail::Dual,
        mixed,
        heralded,
        state: raw.normalized()?.with_cutoff(1)?,
        probability,
        mode_labels: vec!["a", "b", "1", "3", "c", "d", "4", "6"],
    })
}

fn check_order(n: u32) -> Result<(), FockError> {
    if n == 0 || n > TN_MAX_ORDER {
        return Err(FockError::OrderOutOfRange { n, max: TN_MAX_ORDER });
    }
    Ok(())
}

/// `(n+1)^{-1/2} sum_j |1>^j |0>^{n-j} |0>^j |1>^{n-j}` over `2n` modes.
pub fn tn_reference<A: Amplitude>(n: u32) -> Result<FockState<A>, FockError> {
    check_order(n)?;
    let amp = A::scaled_sqrt(1, &rational(1, i64::from(n) + 1));
    let terms = (0..=n).map(|j| {
        let mut occ: Occupation = Vec::with_capacity(2 * n as usize);
        occ.extend((0..n).map(|k| u32::from(k < j)));
        occ.extend((0..n).map(|k| u32::from(k >= j)));
        (occ, amp.clone())
    });
    FockState::from_terms(1, terms)
}

/// One growth step `|t_n> -> |t_{n+1}>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TnStep<A: Amplitude> {
    pub from_order: u32,
    /// Probability that the elimination keeps the state.
    pub survival: A,
    /// New mode `k` is mode `permutation[k]` of `|t_n> (x) Bell`, where the
    /// Bell pair occupies modes `2n` (A) and `2n+1` (B).
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TnBuild<A: Amplitude> {
    pub state: FockState<A>,
    pub steps: Vec<TnStep<A>>,
}

/// Grows `|t_n>` from a Bell pair: adjoin a Bell pair on modes A, B, remove
/// `|11>` on B and the first mode C of the ones-first block, then move A and C
/// to the front of that block and B to the front of the other.
pub fn build_tn<A: Amplitude>(n: u32) -> Result<TnBuild<A>, FockError> {
    check_order(n)?;
    let half = A::scaled_sqrt(1, &rational(1, 2));
    let bell = FockState::from_terms(1, [(vec![0, 1], half.clone()), (vec![1, 0], half)])?;
    let mut state = bell.clone();
    let mut steps = Vec::new();
    for k in 1..n {
        let k = k as usize;
        let (a, b) = (2 * k, 2 * k + 1);
        let joined = state.tensor(&bell);
        let kept = joined.eliminate_11(b, 0)?;
        let mut permutation = vec![a, 0];
        permutation.extend(1..k);
        permutation.push(b);
        permutation.extend(k..2 * k);
        state = kept.state.permute(&permutation)?;
        steps.push(TnStep { from_order: k as u32, survival: kept.probability, permutation });
    }
    Ok(TnBuild { state, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{states_equal, Surd};
    use num_complex::Complex64;

    #[test]
    fn reference_orders() {
        let t1 = tn_reference::<Complex64>(1).unwrap();
        assert_eq!(t1.len(), 2);
        assert!(t1.amplitude(&[0, 1]).is_some() && t1.amplitude(&[1, 0]).is_some());
        let t2 = tn_reference::<Surd>(2).unwrap();
        for occ in [[0, 0, 1, 1], [1, 0, 0, 1], [1, 1, 0, 0]] {
            assert_eq!(t2.amplitude(&occ), Some(&Surd::sqrt_of(&rational(1, 3))));
        }
        assert!(tn_reference::<Complex64>(0).is_err());
        assert!(tn_reference::<Complex64>(9).is_err());
    }

    #[test]
    fn growth_matches_reference_exactly() {
        for n in 1..=5 {
            let built = build_tn::<Surd>(n).unwrap();
            assert_eq!(built.state, tn_reference::<Surd>(n).unwrap());
            for step in &built.steps {
                let k = i64::from(step.from_order);
                assert_eq!(step.survival.as_rational(), Some(rational(k + 2, 2 * (k + 1))));
            }
        }
    }

    #[test]
    fn float_growth() {
        let built = build_tn::<Complex64>(4).unwrap();
        assert!(states_equal(&built.state, &tn_reference::<Complex64>(4).unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn single_rail_probability_is_exact() {
        let run = elim_resource::<Surd>(Rail::Single).unwrap();
        assert_eq!(run.probability.as_rational(), Some(rational(12, 441)));
        assert_eq!(run.state, tn_reference::<Surd>(2).unwrap());
    }
}
