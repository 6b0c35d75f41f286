//! Absorbing random walks modelling incremental encoding.
//!
//! Every encoder attempt adds a component qubit with probability `p` and
//! removes one otherwise, so the width of an encoded qubit performs a walk on
//! the integers with two absorbing boundaries: the right boundary is the goal
//! (one more component, or full width after re-encoding) and the left boundary
//! is the loss of every component.
//!
//! The closed forms here are checked against [`markov_exact`], a dense solve of
//! the absorbing chain that shares no code with them.

mod exact;
mod markov;

use thiserror::Error;

pub use exact::{
    absorb_prob_exact, p_add_complement_exact, p_add_exact, p_re_exact, RationalProbability,
};
pub use markov::{markov_exact, MarkovSolution};
pub(crate) use exact::to_f64;

/// Below this distance from 1/2 the unbiased closed form is used.
pub const UNBIASED_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("step probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("closed form needs 0 < p < 1, got {0}")]
    DegenerateProbability(f64),
    #[error("closed form is stated for p > 1/2 only, got {0}; use markov_exact")]
    UnsupportedDomain(f64),
    #[error("invalid boundaries: need left <= start <= right, got left={left}, start={start}, right={right}")]
    InvalidBoundaries { left: i64, right: i64, start: i64 },
    #[error("degenerate lattice: right - left must be at least 1 (left={left}, right={right})")]
    DegenerateLattice { left: i64, right: i64 },
    #[error("the walk starts on the left boundary, so it never reaches the right one")]
    UnreachableBoundary,
}

/// Absorbing walk on `left..=right` started at `start`, stepping right with
/// probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkProblem {
    pub p: f64,
    pub left: i64,
    pub right: i64,
    pub start: i64,
}

impl WalkProblem {
    /// Validates the lattice. `p` may be 0 or 1 here (Monte Carlo and the
    /// oracle accept them); the closed forms reject them separately.
    pub fn new(p: f64, left: i64, right: i64, start: i64) -> Result<Self, WalkError> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(WalkError::InvalidProbability(p));
        }
        if right <= left {
            return Err(WalkError::DegenerateLattice { left, right });
        }
        if start < left || start > right {
            return Err(WalkError::InvalidBoundaries { left, right, start });
        }
        Ok(Self { p, left, right, start })
    }

    /// Adding one component to a width-`w` encoding: `L = -w`, `R = 1`, `m = 0`.
    pub fn adding(p: f64, w: EncodingWidth) -> Result<Self, WalkError> {
        Self::new(p, -i64::from(w.get()), 1, 0)
    }

    /// Re-encoding from one component back to width `w`: `L = 0`, `R = w`, `m = 1`.
    pub fn reencoding(p: f64, w: EncodingWidth) -> Result<Self, WalkError> {
        Self::new(p, 0, i64::from(w.get()), 1)
    }

    fn beta(&self) -> f64 {
        (1.0 - self.p) / self.p
    }

    fn check_open(&self) -> Result<(), WalkError> {
        if self.p <= 0.0 || self.p >= 1.0 {
            return Err(WalkError::DegenerateProbability(self.p));
        }
        Ok(())
    }
}

/// Number of component qubits in an encoded qubit. Zero means the logical
/// qubit has been lost.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
#[serde(transparent)]
pub struct EncodingWidth(u32);

impl EncodingWidth {
    pub const fn new(w: u32) -> Self {
        Self(w)
    }

    pub const fn get(self) -> u32 {
        self.0
    }

    pub const fn is_lost(self) -> bool {
        self.0 == 0
    }
}

impl From<u32> for EncodingWidth {
    fn from(w: u32) -> Self {
        Self(w)
    }
}

impl std::fmt::Display for EncodingWidth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Probability of reaching `right` before `left`.
pub fn absorb_prob(prob: &WalkProblem) -> Result<f64, WalkError> {
    prob.check_open()?;
    let span = (prob.right - prob.left) as f64;
    let offset = prob.start - prob.left;
    if (prob.p - 0.5).abs() < UNBIASED_TOLERANCE {
        return Ok(offset as f64 / span);
    }
    let beta = prob.beta();
    let num = 1.0 - beta.powi(offset as i32);
    let den = 1.0 - beta.powi((prob.right - prob.left) as i32);
    Ok(num / den)
}

/// Probability of adding one component to a width-`w` encoding without
/// losing every component first. Zero for a lost qubit.
pub fn p_add(p: f64, w: EncodingWidth) -> Result<f64, WalkError> {
    if w.is_lost() {
        return Ok(0.0);
    }
    absorb_prob(&WalkProblem::adding(p, w)?)
}

/// Probability of rebuilding a width-`w` encoding from one component.
pub fn p_re(p: f64, w: EncodingWidth) -> Result<f64, WalkError> {
    if w.is_lost() {
        return Ok(0.0);
    }
    absorb_prob(&WalkProblem::reencoding(p, w)?)
}

/// Mean number of steps to the right boundary, conditional on absorbing there.
/// Only defined for `p > 1/2`.
pub fn mean_passage_closed(prob: &WalkProblem) -> Result<f64, WalkError> {
    prob.check_open()?;
    if prob.p <= 0.5 {
        return Err(WalkError::UnsupportedDomain(prob.p));
    }
    if prob.start == prob.left {
        return Err(WalkError::UnreachableBoundary);
    }
    let b = prob.beta();
    let pow = |k: i64| b.powi(k as i32);
    let (l, r, m) = (prob.left, prob.right, prob.start);
    let (lf, rf, mf) = (l as f64, r as f64, m as f64);
    let num = rf * (pow(l) - pow(m)) * (pow(l) + pow(r)) - mf * (pow(l) + pow(m)) * (pow(l) - pow(r))
        + 2.0 * lf * (pow(l + m) - pow(l + r));
    let den = (2.0 * prob.p - 1.0) * (pow(l) - pow(m)) * (pow(l) - pow(r));
    Ok(num / den)
}

/// Which encoder pass a mean-use count refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncoderStage {
    /// Adding one component (successful passes).
    Add,
    /// Re-encoding to full width (successful passes).
    ReSuccess,
    /// Re-encoding attempts that lose the rebuilt subset.
    ReFail,
}

/// Mean encoder uses per pass of the given stage.
///
/// Returns `Ok(None)` when the stage outcome is impossible, which only happens
/// for [`EncoderStage::ReFail`] at width 1 (the walk starts on its goal).
/// For `p <= 1/2` the closed forms do not apply and the value comes from
/// [`markov_exact`].
pub fn mean_encoder_uses(
    stage: EncoderStage,
    p: f64,
    w: EncodingWidth,
) -> Result<Option<f64>, WalkError> {
    if w.is_lost() {
        return Err(WalkError::DegenerateLattice { left: 0, right: 0 });
    }
    if stage == EncoderStage::ReFail && w.get() == 1 {
        return Ok(None);
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(WalkError::InvalidProbability(p));
    }
    if p <= 0.5 || p >= 1.0 {
        let walk = match stage {
            EncoderStage::Add => WalkProblem::adding(p, w)?,
            _ => WalkProblem::reencoding(p, w)?,
        };
        let sol = markov_exact(&walk)?;
        return Ok(match stage {
            EncoderStage::Add | EncoderStage::ReSuccess => sol.mean_steps_to_right,
            EncoderStage::ReFail => sol.mean_steps_to_left,
        });
    }
    let b = (1.0 - p) / p;
    let wi = w.get() as i32;
    let wf = f64::from(w.get());
    let gain = 2.0 * p - 1.0;
    let value = match stage {
        EncoderStage::Add => {
            let bw = b.powi(wi);
            let bw1 = b.powi(wi + 1);
            ((1.0 - bw) * (1.0 + bw1) - 2.0 * wf * bw * (1.0 - b)) / (gain * (1.0 - bw) * (1.0 - bw1))
        }
        EncoderStage::ReSuccess => {
            if w.get() == 1 {
                return Ok(Some(0.0));
            }
            let bw = b.powi(wi);
            (wf * (1.0 - b) * (1.0 + bw) - (1.0 + b) * (1.0 - bw)) / (gain * (1.0 - b) * (1.0 - bw))
        }
        EncoderStage::ReFail => {
            let bw = b.powi(wi);
            let bw1 = b.powi(wi + 1);
            ((bw + b) * (bw - 1.0) - 2.0 * wf * (bw1 - bw)) / (gain * (bw - b) * (1.0 - bw))
        }
    };
    Ok(Some(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn w(n: u32) -> EncodingWidth {
        EncodingWidth::new(n)
    }

    #[test]
    fn unbiased_add_probability() {
        let prob = WalkProblem::new(0.5, -4, 1, 0).unwrap();
        assert_abs_diff_eq!(absorb_prob(&prob).unwrap(), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(p_add(0.5, w(4)).unwrap(), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(p_re(0.5, w(4)).unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn start_on_goal_is_certain() {
        for p in [0.2, 0.5, 0.7] {
            let prob = WalkProblem::new(p, -3, 2, 2).unwrap();
            assert_eq!(absorb_prob(&prob).unwrap(), 1.0);
            assert_eq!(p_re(p, w(1)).unwrap(), 1.0);
        }
    }

    #[test]
    fn biased_values_match_rationals() {
        assert_abs_diff_eq!(
            absorb_prob(&WalkProblem::new(2.0 / 3.0, 0, 4, 1).unwrap()).unwrap(),
            8.0 / 15.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(p_add(0.75, w(4)).unwrap(), 120.0 / 121.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p_add(2.0 / 3.0, w(4)).unwrap(), 30.0 / 31.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p_re(2.0 / 3.0, w(4)).unwrap(), 8.0 / 15.0, epsilon = 1e-14);
    }

    #[test]
    fn lost_qubit_cannot_gamble() {
        assert_eq!(p_add(0.75, w(0)).unwrap(), 0.0);
    }

    #[test]
    fn bad_lattices_are_rejected() {
        assert!(matches!(
            WalkProblem::new(0.5, 2, 2, 2),
            Err(WalkError::DegenerateLattice { .. })
        ));
        assert!(matches!(
            WalkProblem::new(0.5, 0, 3, 5),
            Err(WalkError::InvalidBoundaries { .. })
        ));
        assert!(matches!(
            WalkProblem::new(1.5, 0, 3, 1),
            Err(WalkError::InvalidProbability(_))
        ));
        let certain = WalkProblem::new(1.0, 0, 3, 1).unwrap();
        assert!(matches!(
            absorb_prob(&certain),
            Err(WalkError::DegenerateProbability(_))
        ));
    }

    #[test]
    fn closed_passage_rejects_unfavourable_walks() {
        let prob = WalkProblem::new(0.5, -3, 1, 0).unwrap();
        assert!(matches!(
            mean_passage_closed(&prob),
            Err(WalkError::UnsupportedDomain(_))
        ));
    }

    #[test]
    fn closed_passage_limits() {
        // boundary effects vanish for wide encodings: 1/(2p - 1)
        let far = WalkProblem::new(2.0 / 3.0, -60, 1, 0).unwrap();
        assert_abs_diff_eq!(mean_passage_closed(&far).unwrap(), 3.0, epsilon = 1e-9);
        let far = WalkProblem::new(0.75, -60, 1, 0).unwrap();
        assert_abs_diff_eq!(mean_passage_closed(&far).unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn reencode_failure_impossible_at_width_one() {
        assert_eq!(mean_encoder_uses(EncoderStage::ReFail, 0.75, w(1)).unwrap(), None);
        assert_eq!(
            mean_encoder_uses(EncoderStage::ReSuccess, 0.75, w(1)).unwrap(),
            Some(0.0)
        );
    }

    #[test]
    fn reencode_mean_grows_linearly() {
        let p = 2.0 / 3.0;
        let at = |n| mean_encoder_uses(EncoderStage::ReSuccess, p, w(n)).unwrap().unwrap();
        assert_abs_diff_eq!((at(400) - at(200)) / 200.0, 1.0 / (2.0 * p - 1.0), epsilon = 1e-9);
    }

    #[test]
    fn unfavourable_walks_delegate_to_oracle() {
        let n = mean_encoder_uses(EncoderStage::Add, 0.5, w(3)).unwrap().unwrap();
        let sol = markov_exact(&WalkProblem::adding(0.5, w(3)).unwrap()).unwrap();
        assert_eq!(Some(n), sol.mean_steps_to_right);
    }
}
