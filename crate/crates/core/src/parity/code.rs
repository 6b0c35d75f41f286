use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use super::register::{QubitRegister, MAX_QUBITS};

/// Residual outside the code space tolerated by readout.
pub const CODE_SPACE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParityError {
    #[error("logical amplitudes are not normalized (|alpha|^2 + |beta|^2 = {0})")]
    Unnormalized(f64),
    #[error("encoding width must be at least 1")]
    ZeroWidth,
    #[error("too many qubits: {0} (limit {MAX_QUBITS})")]
    TooManyQubits(usize),
    #[error("measuring the only component would destroy the logical qubit")]
    LastComponent,
    #[error("forced outcome {outcome} has zero probability")]
    ImpossibleOutcome { outcome: bool },
    #[error("block {block} has no component {component}")]
    ComponentOutOfRange { block: usize, component: usize },
    #[error("no block {0}")]
    BlockOutOfRange(usize),
    #[error("control and target must be different blocks")]
    SameBlock,
    #[error("state leaves the code space (residual {0:.3e})")]
    CodeSpaceViolation(f64),
    #[error("expected a single encoded qubit, found {0} blocks")]
    NotSingleBlock(usize),
    #[error("{expected} logical amplitudes needed, got {found}")]
    LogicalLength { expected: usize, found: usize },
    #[error("ran out of forced measurement outcomes")]
    OutcomesExhausted,
}

/// Parity-encoded logical qubits sharing one statevector. Block `b` lists
/// the register qubits that are its components; every qubit belongs to
/// exactly one block.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeRegister {
    reg: QubitRegister,
    blocks: Vec<Vec<usize>>,
}

/// Encoded qubit with a single block.
pub type EncodedQubit = CodeRegister;

fn parity(x: u64) -> bool {
    x.count_ones() % 2 == 1
}

/// `alpha |even> + beta |odd>` on `w` components, each parity block an equal
/// superposition of its `2^(w-1)` bitstrings.
pub fn encode_logical(alpha: Complex64, beta: Complex64, w: u32) -> Result<EncodedQubit, ParityError> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(ParityError::Unnormalized(norm));
    }
    CodeRegister::from_logical(&[alpha, beta], &[w])
}

impl CodeRegister {
    /// Joint logical state `sum_L a_L |L>` encoded block by block. `logical`
    /// is indexed with block 0 as the most significant bit.
    pub fn from_logical(logical: &[Complex64], widths: &[u32]) -> Result<Self, ParityError> {
        if widths.iter().any(|&w| w == 0) {
            return Err(ParityError::ZeroWidth);
        }
        let expected = 1usize << widths.len();
        if logical.len() != expected {
            return Err(ParityError::LogicalLength { expected, found: logical.len() });
        }
        let n: usize = widths.iter().map(|&w| w as usize).sum();
        if n > MAX_QUBITS {
            return Err(ParityError::TooManyQubits(n));
        }
        let mut blocks = Vec::new();
        let mut next = 0;
        for &w in widths {
            blocks.push((next..next + w as usize).collect::<Vec<_>>());
            next += w as usize;
        }
        let scale = (0.5f64).powf(widths.iter().map(|&w| f64::from(w - 1)).sum::<f64>() / 2.0);
        let masks = Self::masks(n, &blocks);
        let terms = (0..1u64 << n).filter_map(|k| {
            let l = Self::logical_index(k, &masks);
            let a = logical[l];
            (a.norm() > 0.0).then_some((k, a * scale))
        });
        let reg = QubitRegister::from_amplitudes(n, terms);
        Ok(Self { reg, blocks })
    }

    fn masks(n: usize, blocks: &[Vec<usize>]) -> Vec<u64> {
        blocks.iter().map(|b| b.iter().fold(0u64, |m, &q| m | (1 << (n - 1 - q)))).collect()
    }

    fn logical_index(k: u64, masks: &[u64]) -> usize {
        masks.iter().fold(0usize, |acc, &m| (acc << 1) | usize::from(parity(k & m)))
    }

    pub fn register(&self) -> &QubitRegister {
        &self.reg
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn width(&self, block: usize) -> Result<usize, ParityError> {
        Ok(self.block(block)?.len())
    }

    fn block(&self, block: usize) -> Result<&Vec<usize>, ParityError> {
        self.blocks.get(block).ok_or(ParityError::BlockOutOfRange(block))
    }

    fn component(&self, block: usize, component: usize) -> Result<usize, ParityError> {
        self.block(block)?
            .get(component)
            .copied()
            .ok_or(ParityError::ComponentOutOfRange { block, component })
    }

    /// Places `other`'s blocks after this register's blocks.
    pub fn tensor(&self, other: &Self) -> Result<Self, ParityError> {
        let (n1, n2) = (self.reg.qubit_count(), other.reg.qubit_count());
        if n1 + n2 > MAX_QUBITS {
            return Err(ParityError::TooManyQubits(n1 + n2));
        }
        let terms = self.reg.amplitudes().flat_map(|(ka, a)| {
            other.reg.amplitudes().map(move |(kb, b)| ((ka << n2) | kb, a * b))
        });
        let reg = QubitRegister::from_amplitudes(n1 + n2, terms.collect::<Vec<_>>());
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().map(|b| b.iter().map(|q| q + n1).collect()));
        Ok(Self { reg, blocks })
    }

    /// Grows a block by one: a `|+>` ancilla controls a CNOT onto the given
    /// component and joins the block.
    pub fn encoder_step(&self, block: usize, component: usize) -> Result<Self, ParityError> {
        let target = self.component(block, component)?;
        if self.reg.qubit_count() >= MAX_QUBITS {
            return Err(ParityError::TooManyQubits(MAX_QUBITS + 1));
        }
        let mut out = self.clone();
        let anc = out.reg.append_plus();
        out.reg.apply_cnot(anc, target);
        out.blocks[block].push(anc);
        Ok(out)
    }

    /// Z-measures a component and drops it from the register, with no
    /// correction. Returns the probability of `outcome`.
    fn measure_component(&self, block: usize, component: usize, outcome: bool) -> Result<(Self, f64), ParityError> {
        let q = self.component(block, component)?;
        let (reg, p) = self
            .reg
            .measure_remove(q, outcome)
            .ok_or(ParityError::ImpossibleOutcome { outcome })?;
        let mut blocks = self.blocks.clone();
        blocks[block].remove(component);
        for b in blocks.iter_mut() {
            for idx in b.iter_mut() {
                if *idx > q {
                    *idx -= 1;
                }
            }
        }
        Ok((Self { reg, blocks }, p))
    }

    /// Z-measurement of one component with the known-outcome recovery: on
    /// outcome 1 the lowest-indexed remaining component is bit-flipped.
    pub fn z_measure_recover(&self, block: usize, component: usize, outcome: bool) -> Result<Self, ParityError> {
        if self.width(block)? < 2 {
            return Err(ParityError::LastComponent);
        }
        let (mut out, _) = self.measure_component(block, component, outcome)?;
        if outcome {
            let lowest = *out.blocks[block].iter().min().expect("width >= 1");
            out.reg.apply_x(lowest);
        }
        Ok(out)
    }

    /// As [`z_measure_recover`](Self::z_measure_recover) with the outcome drawn
    /// from the Born rule.
    pub fn z_measure_recover_sampled<R: Rng + ?Sized>(
        &self,
        block: usize,
        component: usize,
        rng: &mut R,
    ) -> Result<(Self, bool), ParityError> {
        let q = self.component(block, component)?;
        let outcome = rng.gen::<f64>() < self.reg.prob_one(q);
        Ok((self.z_measure_recover(block, component, outcome)?, outcome))
    }

    /// Rebuilds `block` from its component 0 and measures away the other
    /// original components. Returns the outcome parity.
    fn reencode_from_first(
        &self,
        block: usize,
        choose: &mut dyn FnMut(f64) -> Result<bool, ParityError>,
    ) -> Result<(Self, bool), ParityError> {
        let w = self.width(block)?;
        let mut out = self.clone();
        for _ in 1..w {
            out = out.encoder_step(block, 0)?;
        }
        let mut odd = false;
        for _ in 1..w {
            let q = out.component(block, 1)?;
            let outcome = choose(out.reg.prob_one(q))?;
            out = out.measure_component(block, 1, outcome)?.0;
            odd ^= outcome;
        }
        Ok((out, odd))
    }

    fn cnot_with(
        &self,
        control: usize,
        target: usize,
        choose: &mut dyn FnMut(f64) -> Result<bool, ParityError>,
    ) -> Result<Self, ParityError> {
        if control == target {
            return Err(ParityError::SameBlock);
        }
        let (c0, t0) = (self.component(control, 0)?, self.component(target, 0)?);
        let mut out = self.clone();
        out.reg.apply_cnot(c0, t0);
        let (mut out, odd) = out.reencode_from_first(control, choose)?;
        if odd {
            let (c0, t0) = (out.component(control, 0)?, out.component(target, 0)?);
            out.reg.apply_x(c0);
            out.reg.apply_x(t0);
        }
        Ok(out)
    }

    fn z90_with(
        &self,
        block: usize,
        choose: &mut dyn FnMut(f64) -> Result<bool, ParityError>,
    ) -> Result<Self, ParityError> {
        let c0 = self.component(block, 0)?;
        let mut out = self.clone();
        out.reg.apply_diag(c0, Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
        let (mut out, odd) = out.reencode_from_first(block, choose)?;
        if odd {
            out.reg.apply_x(out.component(block, 0)?);
            for q in out.blocks[block].clone() {
                out.reg.apply_z(q);
            }
        }
        Ok(out)
    }

    /// Encoded CNOT assuming every teleport succeeds. The remainder
    /// measurements are sampled from the Born rule.
    pub fn logical_cnot<R: Rng + ?Sized>(&self, control: usize, target: usize, rng: &mut R) -> Result<Self, ParityError> {
        self.cnot_with(control, target, &mut |p1| Ok(rng.gen::<f64>() < p1))
    }

    /// Encoded CNOT with the remainder measurement outcomes given in order.
    pub fn logical_cnot_forced(&self, control: usize, target: usize, outcomes: &[bool]) -> Result<Self, ParityError> {
        let mut it = outcomes.iter().copied();
        self.cnot_with(control, target, &mut |_| it.next().ok_or(ParityError::OutcomesExhausted))
    }

    /// Encoded `Z_90 = diag(1, i)` assuming every teleport succeeds.
    pub fn logical_z90<R: Rng + ?Sized>(&self, block: usize, rng: &mut R) -> Result<Self, ParityError> {
        self.z90_with(block, &mut |p1| Ok(rng.gen::<f64>() < p1))
    }

    pub fn logical_z90_forced(&self, block: usize, outcomes: &[bool]) -> Result<Self, ParityError> {
        let mut it = outcomes.iter().copied();
        self.z90_with(block, &mut |_| it.next().ok_or(ParityError::OutcomesExhausted))
    }

    /// Joint logical amplitudes, block 0 most significant. Fails if more than
    /// [`CODE_SPACE_TOL`] of the norm lies outside the code space.
    pub fn logical_amplitudes(&self) -> Result<Vec<Complex64>, ParityError> {
        let n = self.reg.qubit_count();
        let masks = Self::masks(n, &self.blocks);
        let scale = (0.5f64).powf(self.blocks.iter().map(|b| (b.len() - 1) as f64).sum::<f64>() / 2.0);
        let mut logical = vec![Complex64::new(0.0, 0.0); 1 << self.blocks.len()];
        for (k, a) in self.reg.amplitudes() {
            logical[Self::logical_index(k, &masks)] += a * scale;
        }
        let captured: f64 = logical.iter().map(|a| a.norm_sqr()).sum();
        let residual = self.reg.norm_sqr() - captured;
        if residual > CODE_SPACE_TOL {
            return Err(ParityError::CodeSpaceViolation(residual));
        }
        Ok(logical)
    }

    /// `(alpha, beta)` of a single encoded qubit.
    pub fn readout_logical(&self) -> Result<(Complex64, Complex64), ParityError> {
        if self.blocks.len() != 1 {
            return Err(ParityError::NotSingleBlock(self.blocks.len()));
        }
        let l = self.logical_amplitudes()?;
        Ok((l[0], l[1]))
    }
}

/// `|<a|b>|^2` for normalized logical amplitude vectors.
pub fn logical_fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_component_encoding() {
        let (a, b) = (c(0.6, 0.0), c(0.0, 0.8));
        let q = encode_logical(a, b, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((q.register().amplitude(0b00) - a * h).norm() < 1e-15);
        assert!((q.register().amplitude(0b11) - a * h).norm() < 1e-15);
        assert!((q.register().amplitude(0b01) - b * h).norm() < 1e-15);
        assert!((q.register().amplitude(0b10) - b * h).norm() < 1e-15);
    }

    #[test]
    fn unencoded_limit() {
        let q = encode_logical(c(1.0, 0.0), c(0.0, 0.0), 1).unwrap();
        assert_eq!(q.register().amplitude(0), c(1.0, 0.0));
        assert!(encode_logical(c(1.0, 0.0), c(1.0, 0.0), 2).is_err());
    }

    #[test]
    fn measuring_from_two_components() {
        let (a, b) = (c(0.6, 0.0), c(0.8, 0.0));
        let q = encode_logical(a, b, 2).unwrap();
        for outcome in [false, true] {
            let r = q.z_measure_recover(0, 0, outcome).unwrap();
            assert_eq!(r.width(0).unwrap(), 1);
            let (ra, rb) = r.readout_logical().unwrap();
            assert!((ra - a).norm() < 1e-12 && (rb - b).norm() < 1e-12);
        }
        let single = q.z_measure_recover(0, 1, false).unwrap();
        assert_eq!(single.z_measure_recover(0, 0, false).unwrap_err(), ParityError::LastComponent);
    }

    #[test]
    fn ghz_is_not_a_code_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let reg = QubitRegister::from_amplitudes(3, [(0b000, c(h, 0.0)), (0b111, c(h, 0.0))]);
        let ghz = CodeRegister { reg, blocks: vec![vec![0, 1, 2]] };
        assert!(matches!(ghz.readout_logical(), Err(ParityError::CodeSpaceViolation(_))));
    }

    #[test]
    fn logical_cnot_makes_bell_pair() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ctl = encode_logical(c(h, 0.0), c(h, 0.0), 3).unwrap();
        let tgt = encode_logical(c(1.0, 0.0), c(0.0, 0.0), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = ctl.tensor(&tgt).unwrap().logical_cnot(0, 1, &mut rng).unwrap();
        let l = out.logical_amplitudes().unwrap();
        let bell = [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
        assert!(logical_fidelity(&l, &bell) > 1.0 - 1e-12);
        assert_eq!(out.width(0).unwrap(), 3);
        assert_eq!(out.width(1).unwrap(), 2);
    }

    #[test]
    fn z90_on_plus() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let q = encode_logical(c(h, 0.0), c(h, 0.0), 3).unwrap();
        for outcomes in [[false, false], [false, true], [true, false], [true, true]] {
            let out = q.logical_z90_forced(0, &outcomes).unwrap();
            let (a, b) = out.readout_logical().unwrap();
            assert!(logical_fidelity(&[a, b], &[c(h, 0.0), c(0.0, h)]) > 1.0 - 1e-12);
        }
    }

    #[test]
    fn forced_outcomes_must_suffice() {
        let q = encode_logical(c(1.0, 0.0), c(0.0, 0.0), 3).unwrap();
        assert_eq!(q.logical_z90_forced(0, &[true]).unwrap_err(), ParityError::OutcomesExhausted);
    }
}
