use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::fock::{FockError, FockState, PRUNE};

/// Sparse statevector over qubits. Qubit 0 is the most significant bit of
/// the basis index, so numeric order equals bitstring order.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitRegister {
    n: usize,
    amps: BTreeMap<u64, Complex64>,
}

pub const MAX_QUBITS: usize = 63;

impl QubitRegister {
    /// `|0...0>` on `n` qubits.
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let mut amps = BTreeMap::new();
        amps.insert(0, Complex64::new(1.0, 0.0));
        Self { n, amps }
    }

    pub fn from_amplitudes(n: usize, terms: impl IntoIterator<Item = (u64, Complex64)>) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let mut amps: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (k, a) in terms {
            assert!(k >> n == 0, "basis index {k} out of range");
            *amps.entry(k).or_default() += a;
        }
        amps.retain(|_, a| a.norm() >= PRUNE);
        Self { n, amps }
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amps.iter().map(|(k, a)| (*k, *a))
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps.get(&index).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    fn mask(&self, q: usize) -> u64 {
        assert!(q < self.n, "qubit {q} out of range");
        1 << (self.n - 1 - q)
    }

    fn remap(&mut self, f: impl Fn(u64) -> u64) {
        let old = std::mem::take(&mut self.amps);
        for (k, a) in old {
            *self.amps.entry(f(k)).or_default() += a;
        }
        self.amps.retain(|_, a| a.norm() >= PRUNE);
    }

    pub fn apply_x(&mut self, q: usize) {
        let m = self.mask(q);
        self.remap(|k| k ^ m);
    }

    /// `diag(d0, d1)` on qubit `q`.
    pub fn apply_diag(&mut self, q: usize, d0: Complex64, d1: Complex64) {
        let m = self.mask(q);
        for (k, a) in self.amps.iter_mut() {
            *a *= if k & m == 0 { d0 } else { d1 };
        }
    }

    pub fn apply_z(&mut self, q: usize) {
        self.apply_diag(q, Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0));
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        assert_ne!(control, target);
        let (c, t) = (self.mask(control), self.mask(target));
        self.remap(|k| if k & c != 0 { k ^ t } else { k });
    }

    /// Appends a qubit in `(|0> + |1>)/sqrt(2)` and returns its index.
    pub fn append_plus(&mut self) -> usize {
        assert!(self.n < MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let old = std::mem::take(&mut self.amps);
        for (k, a) in old {
            self.amps.insert(k << 1, a * h);
            self.amps.insert((k << 1) | 1, a * h);
        }
        self.n += 1;
        self.n - 1
    }

    pub fn prob_one(&self, q: usize) -> f64 {
        let m = self.mask(q);
        self.amps.iter().filter(|(k, _)| *k & m != 0).map(|(_, a)| a.norm_sqr()).sum::<f64>()
            / self.norm_sqr()
    }

    /// Projects qubit `q` onto `outcome`, removes it and renormalizes.
    /// Returns `None` when the outcome has zero probability.
    pub fn measure_remove(&self, q: usize, outcome: bool) -> Option<(Self, f64)> {
        let m = self.mask(q);
        let pos = self.n - 1 - q;
        let total = self.norm_sqr();
        let mut amps = BTreeMap::new();
        for (k, a) in &self.amps {
            if (k & m != 0) == outcome {
                let high = k >> (pos + 1);
                let low = k & ((1u64 << pos) - 1);
                amps.insert((high << pos) | low, *a);
            }
        }
        let kept: f64 = amps.values().map(|a: &Complex64| a.norm_sqr()).sum();
        if kept < PRUNE * PRUNE {
            return None;
        }
        let scale = 1.0 / kept.sqrt();
        for a in amps.values_mut() {
            *a *= scale;
        }
        Some((Self { n: self.n - 1, amps }, kept / total))
    }

    pub fn to_fock(&self) -> Result<FockState<Complex64>, FockError> {
        let n = self.n;
        FockState::from_terms(
            1,
            self.amps
                .iter()
                .map(|(k, a)| ((0..n).map(|q| ((k >> (n - 1 - q)) & 1) as u32).collect(), *a)),
        )
    }
}
