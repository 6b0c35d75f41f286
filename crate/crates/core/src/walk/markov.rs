use nalgebra::{DMatrix, DVector};

use super::{WalkError, WalkProblem};

/// Exact solution of the absorbing chain on `left..=right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovSolution {
    pub absorb_prob_right: f64,
    /// Mean steps conditional on absorbing at `right`; `None` if that event
    /// has probability zero.
    pub mean_steps_to_right: Option<f64>,
    /// Mean steps conditional on absorbing at `left`; `None` if that event
    /// has probability zero.
    pub mean_steps_to_left: Option<f64>,
    /// Unconditional mean absorption time.
    pub mean_steps: f64,
}

/// Solves the absorbing-chain equations on the interior states directly.
///
/// With `Q` the interior transition matrix and `A = I - Q`:
/// `A h = b_R` gives the absorption probabilities, and `A g = h` gives
/// `g = E[T; absorbed at R]` because each step from an interior state costs one
/// and the remaining time is accumulated only on paths that end at `R`.
pub fn markov_exact(prob: &WalkProblem) -> Result<MarkovSolution, WalkError> {
    let WalkProblem { p, left, right, start } = *prob;
    if right <= left {
        return Err(WalkError::DegenerateLattice { left, right });
    }
    if start == right {
        return Ok(MarkovSolution {
            absorb_prob_right: 1.0,
            mean_steps_to_right: Some(0.0),
            mean_steps_to_left: None,
            mean_steps: 0.0,
        });
    }
    if start == left {
        return Ok(MarkovSolution {
            absorb_prob_right: 0.0,
            mean_steps_to_right: None,
            mean_steps_to_left: Some(0.0),
            mean_steps: 0.0,
        });
    }

    let q = 1.0 - p;
    let n = (right - left - 1) as usize;
    let mut a = DMatrix::<f64>::identity(n, n);
    let mut to_right = DVector::<f64>::zeros(n);
    let mut to_left = DVector::<f64>::zeros(n);
    for i in 0..n {
        if i + 1 < n {
            a[(i, i + 1)] -= p;
        } else {
            to_right[i] = p;
        }
        if i > 0 {
            a[(i, i - 1)] -= q;
        } else {
            to_left[i] = q;
        }
    }

    let lu = a.lu();
    let solve = |b: &DVector<f64>| lu.solve(b).ok_or(WalkError::DegenerateLattice { left, right });
    let h_right = solve(&to_right)?;
    let h_left = solve(&to_left)?;
    let g_right = solve(&h_right)?;
    let g_left = solve(&h_left)?;
    let t = solve(&DVector::from_element(n, 1.0))?;

    let idx = (start - left - 1) as usize;
    let conditional = |g: f64, h: f64| if h > 0.0 { Some(g / h) } else { None };
    Ok(MarkovSolution {
        absorb_prob_right: h_right[idx],
        mean_steps_to_right: conditional(g_right[idx], h_right[idx]),
        mean_steps_to_left: conditional(g_left[idx], h_left[idx]),
        mean_steps: t[idx],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::absorb_prob;
    use approx::assert_abs_diff_eq;

    #[test]
    fn agrees_with_closed_absorption() {
        let prob = WalkProblem::new(0.6, -3, 1, 0).unwrap();
        let sol = markov_exact(&prob).unwrap();
        assert_abs_diff_eq!(sol.absorb_prob_right, absorb_prob(&prob).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn frozen_conditional_means() {
        let sol = markov_exact(&WalkProblem::new(0.75, -4, 1, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(sol.mean_steps_to_right.unwrap(), 1.882_644_628_099_173_5, epsilon = 1e-12);
        let sol = markov_exact(&WalkProblem::new(2.0 / 3.0, 0, 4, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(sol.mean_steps_to_right.unwrap(), 4.6, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.mean_steps_to_left.unwrap(), 2.028_571_428_571_428_6, epsilon = 1e-12);
    }

    #[test]
    fn unconditional_mean_splits_over_boundaries() {
        let sol = markov_exact(&WalkProblem::new(0.6, -5, 3, 0).unwrap()).unwrap();
        let h = sol.absorb_prob_right;
        let split = h * sol.mean_steps_to_right.unwrap() + (1.0 - h) * sol.mean_steps_to_left.unwrap();
        assert_abs_diff_eq!(sol.mean_steps, split, epsilon = 1e-10);
    }

    #[test]
    fn symmetric_walk_duration() {
        // gambler's ruin: E[T] = (m - L)(R - m) for p = 1/2
        let sol = markov_exact(&WalkProblem::new(0.5, -4, 3, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(sol.mean_steps, 12.0, epsilon = 1e-10);
    }

    #[test]
    fn deterministic_ascent() {
        let sol = markov_exact(&WalkProblem::new(1.0, -4, 1, 0).unwrap()).unwrap();
        assert_eq!(sol.absorb_prob_right, 1.0);
        assert_eq!(sol.mean_steps_to_left, None);
        assert_abs_diff_eq!(sol.mean_steps_to_right.unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn boundary_starts() {
        let sol = markov_exact(&WalkProblem::new(0.3, 0, 1, 1).unwrap()).unwrap();
        assert_eq!(sol.absorb_prob_right, 1.0);
        let sol = markov_exact(&WalkProblem::new(0.3, 0, 1, 0).unwrap()).unwrap();
        assert_eq!(sol.absorb_prob_right, 0.0);
        assert_eq!(sol.mean_steps_to_right, None);
    }
}
