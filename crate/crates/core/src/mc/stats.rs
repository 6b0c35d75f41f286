use serde::Serialize;

/// Integer moment sums of a per-trial tally vector. Merging is exact, so the
/// result does not depend on how trials are split across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Moments<const K: usize> {
    pub n: u64,
    pub sum: [u128; K],
    pub cross: [[u128; K]; K],
}

impl<const K: usize> Default for Moments<K> {
    fn default() -> Self {
        Self { n: 0, sum: [0; K], cross: [[0; K]; K] }
    }
}

impl<const K: usize> Moments<K> {
    pub fn push(&mut self, v: [u64; K]) {
        self.n += 1;
        for i in 0..K {
            let vi = u128::from(v[i]);
            self.sum[i] += vi;
            for j in 0..K {
                self.cross[i][j] += vi * u128::from(v[j]);
            }
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.n += other.n;
        for i in 0..K {
            self.sum[i] += other.sum[i];
            for j in 0..K {
                self.cross[i][j] += other.cross[i][j];
            }
        }
        self
    }

    fn dot_sum(&self, c: &[f64; K]) -> f64 {
        (0..K).map(|i| c[i] * self.sum[i] as f64).sum()
    }

    fn quad(&self, a: &[f64; K], b: &[f64; K]) -> f64 {
        let mut acc = 0.0;
        for i in 0..K {
            for j in 0..K {
                acc += a[i] * b[j] * self.cross[i][j] as f64;
            }
        }
        acc
    }

    /// Ratio `sum(a.v) / sum(b.v)` with a delta-method standard error.
    /// `None` when the denominator total is zero.
    pub fn ratio(&self, a: &[f64; K], b: &[f64; K]) -> Option<Estimate> {
        let num = self.dot_sum(a);
        let den = self.dot_sum(b);
        if den == 0.0 {
            return None;
        }
        let r = num / den;
        let n = self.n as f64;
        if self.n < 2 {
            return Some(Estimate { mean: r, stderr: 0.0 });
        }
        // sample variance of (a.v - r b.v); its mean is zero by construction
        let ss = self.quad(a, a) - 2.0 * r * self.quad(a, b) + r * r * self.quad(b, b);
        let var = (ss / (n - 1.0)).max(0.0);
        let mean_den = den / n;
        Some(Estimate { mean: r, stderr: (var / n).sqrt() / mean_den })
    }

    /// Fraction of trials with component `k` set (a 0/1 tally).
    pub fn fraction(&self, k: usize) -> Estimate {
        let n = self.n as f64;
        let p = self.sum[k] as f64 / n;
        Estimate { mean: p, stderr: (p * (1.0 - p) / n).sqrt() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    /// `(mean - reference) / stderr`; zero-width estimates give 0 on an exact
    /// match and an infinite score otherwise.
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = self.mean - reference;
        if self.stderr > 0.0 {
            d / self.stderr
        } else if d.abs() <= 1e-12 * reference.abs().max(1.0) {
            0.0
        } else {
            d.signum() * f64::INFINITY
        }
    }
}
