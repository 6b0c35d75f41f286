use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::amplitude::Amplitude;

/// Photon count per mode.
pub type Occupation = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("occupation vector has {found} modes, expected {expected}")]
    InconsistentLength { expected: usize, found: usize },
    #[error("mode {mode} would hold {count} photons, above the cutoff {cutoff}")]
    CutoffExceeded { mode: usize, count: u32, cutoff: u32 },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("mode {mode} out of range for a {modes}-mode state")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("beam splitter needs two distinct modes, got {0} twice")]
    SameMode(usize),
    #[error("reflectivity must lie in [0, 1], got {0}")]
    InvalidReflectivity(f64),
    #[error("exact amplitudes need a rational reflectivity")]
    NotExact,
    #[error("normalization is not representable exactly (norm^2 is irrational)")]
    NotNormalizable,
    #[error("every term was removed")]
    EmptyResult,
    #[error("states have different mode counts ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("mode {0} is not a qubit mode (occupation above 1)")]
    NotQubitMode(usize),
    #[error("order must be between 1 and {max}, got {n}")]
    OrderOutOfRange { n: u32, max: u32 },
    #[error("bad permutation: {0:?}")]
    BadPermutation(Vec<usize>),
    #[error("dump line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reflectivity {
    Exact(BigRational),
    Real(f64),
}

impl Reflectivity {
    pub fn ratio(num: i64, den: i64) -> Self {
        Reflectivity::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Reflectivity::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Reflectivity::Real(x) => *x,
        }
    }
}

/// Beam splitter acting on creation operators as
/// `a_i -> t a_i + r a_j`, `a_j -> r a_i - t a_j`, with `r = sqrt(reflectivity)`
/// and `t = sqrt(1 - reflectivity)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSplitterSpec {
    pub mode_i: usize,
    pub mode_j: usize,
    pub reflectivity: Reflectivity,
}

impl BeamSplitterSpec {
    pub fn exact(mode_i: usize, mode_j: usize, num: i64, den: i64) -> Self {
        Self { mode_i, mode_j, reflectivity: Reflectivity::ratio(num, den) }
    }

    pub fn real(mode_i: usize, mode_j: usize, reflectivity: f64) -> Self {
        Self { mode_i, mode_j, reflectivity: Reflectivity::Real(reflectivity) }
    }
}

/// Sparse multimode Fock state. The squared norm may be below one, in which
/// case it is the probability of the post-selection events applied so far.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState<A: Amplitude = Complex64> {
    modes: usize,
    cutoff: u32,
    amps: BTreeMap<Occupation, A>,
}

/// Renormalized state after a post-selection, with the event probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditioned<A: Amplitude> {
    pub state: FockState<A>,
    pub probability: A,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * i64::from(n - i) / i64::from(i + 1))
}

impl<A: Amplitude> FockState<A> {
    /// Builds a state from terms without normalizing. Duplicate occupations
    /// are summed.
    pub fn from_terms(
        cutoff: u32,
        terms: impl IntoIterator<Item = (Occupation, A)>,
    ) -> Result<Self, FockError> {
        let mut modes = None;
        let mut amps: BTreeMap<Occupation, A> = BTreeMap::new();
        for (occ, a) in terms {
            let expected = *modes.get_or_insert(occ.len());
            if occ.len() != expected {
                return Err(FockError::InconsistentLength { expected, found: occ.len() });
            }
            if let Some((mode, &count)) = occ.iter().enumerate().find(|(_, &c)| c > cutoff) {
                return Err(FockError::CutoffExceeded { mode, count, cutoff });
            }
            let entry = amps.entry(occ).or_insert_with(A::zero);
            *entry = entry.add(&a);
        }
        amps.retain(|_, a| !a.is_negligible());
        if amps.is_empty() {
            return Err(FockError::ZeroNorm);
        }
        Ok(Self { modes: modes.unwrap_or(0), cutoff, amps })
    }

    /// Normalized version of [`from_terms`](Self::from_terms).
    pub fn make_state(
        cutoff: u32,
        terms: impl IntoIterator<Item = (Occupation, A)>,
    ) -> Result<Self, FockError> {
        Self::from_terms(cutoff, terms)?.normalized()
    }

    pub fn basis(occ: Occupation, cutoff: u32) -> Result<Self, FockError> {
        Self::from_terms(cutoff, [(occ, A::one())])
    }

    fn empty_like(&self, modes: usize) -> Self {
        Self { modes, cutoff: self.cutoff, amps: BTreeMap::new() }
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn with_cutoff(mut self, cutoff: u32) -> Result<Self, FockError> {
        for occ in self.amps.keys() {
            if let Some((mode, &count)) = occ.iter().enumerate().find(|(_, &c)| c > cutoff) {
                return Err(FockError::CutoffExceeded { mode, count, cutoff });
            }
        }
        self.cutoff = cutoff;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, occ: &[u32]) -> Option<&A> {
        self.amps.get(occ)
    }

    /// Terms in lexicographic order of occupation.
    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &A)> {
        self.amps.iter()
    }

    pub fn norm_sqr(&self) -> A {
        self.amps.values().fold(A::zero(), |acc, a| acc.add(&a.norm_sqr()))
    }

    pub fn scale(&self, k: &A) -> Self {
        let mut out = self.clone();
        out.amps = self.amps.iter().map(|(o, a)| (o.clone(), a.mul(k))).collect();
        out.amps.retain(|_, a| !a.is_negligible());
        out
    }

    pub fn normalized(&self) -> Result<Self, FockError> {
        if self.amps.is_empty() {
            return Err(FockError::ZeroNorm);
        }
        let inv = self.norm_sqr().inv_sqrt().ok_or(FockError::NotNormalizable)?;
        Ok(self.scale(&inv))
    }

    fn check_mode(&self, mode: usize) -> Result<(), FockError> {
        if mode >= self.modes {
            return Err(FockError::ModeOutOfRange { mode, modes: self.modes });
        }
        Ok(())
    }

    pub fn apply_bs(&self, bs: &BeamSplitterSpec) -> Result<Self, FockError> {
        let (i, j) = (bs.mode_i, bs.mode_j);
        self.check_mode(i)?;
        self.check_mode(j)?;
        if i == j {
            return Err(FockError::SameMode(i));
        }
        let eta = bs.reflectivity.to_f64();
        if !(0.0..=1.0).contains(&eta) {
            return Err(FockError::InvalidReflectivity(eta));
        }
        let exact = match &bs.reflectivity {
            Reflectivity::Exact(q) => Some((q.clone(), BigRational::one() - q)),
            Reflectivity::Real(_) => {
                if A::from_real(0.0).is_none() {
                    return Err(FockError::NotExact);
                }
                None
            }
        };
        let (r, t) = (eta.sqrt(), (1.0 - eta).sqrt());

        let mut out: BTreeMap<Occupation, A> = BTreeMap::new();
        for (occ, amp) in &self.amps {
            let (ni, nj) = (occ[i], occ[j]);
            let in_fact = factorial(ni) * factorial(nj);
            for k in 0..=ni {
                for l in 0..=nj {
                    let mi = k + l;
                    let mj = ni + nj - mi;
                    let sign = if (nj - l) % 2 == 0 { 1 } else { -1 };
                    let int = sign * binomial(ni, k) * binomial(nj, l);
                    let t_pow = k + (nj - l);
                    let r_pow = (ni - k) + l;
                    let out_fact = factorial(mi) * factorial(mj);
                    let coeff = match &exact {
                        Some((refl, trans)) => {
                            let q = num_traits::Pow::pow(trans, t_pow)
                                * num_traits::Pow::pow(refl, r_pow)
                                * BigRational::new(out_fact, in_fact.clone());
                            if q.is_zero() {
                                continue;
                            }
                            A::scaled_sqrt(int, &q)
                        }
                        None => {
                            let ratio = BigRational::new(out_fact, in_fact.clone())
                                .to_f64()
                                .unwrap_or(f64::NAN);
                            let x = int as f64 * t.powi(t_pow as i32) * r.powi(r_pow as i32) * ratio.sqrt();
                            if x == 0.0 {
                                continue;
                            }
                            A::from_real(x).ok_or(FockError::NotExact)?
                        }
                    };
                    for (mode, count) in [(i, mi), (j, mj)] {
                        if count > self.cutoff {
                            return Err(FockError::CutoffExceeded { mode, count, cutoff: self.cutoff });
                        }
                    }
                    let mut target = occ.clone();
                    target[i] = mi;
                    target[j] = mj;
                    let entry = out.entry(target).or_insert_with(A::zero);
                    *entry = entry.add(&coeff.mul(amp));
                }
            }
        }
        out.retain(|_, a| !a.is_negligible());
        Ok(Self { modes: self.modes, cutoff: self.cutoff, amps: out })
    }

    /// Phase shift of pi on one mode: amplitudes pick up `(-1)^n`.
    pub fn sign_flip(&self, mode: usize) -> Result<Self, FockError> {
        self.check_mode(mode)?;
        let mut out = self.clone();
        for (occ, a) in out.amps.iter_mut() {
            if occ[mode] % 2 == 1 {
                *a = a.neg();
            }
        }
        Ok(out)
    }

    /// Projects onto `count` photons in `mode` and removes the mode, without
    /// renormalizing. The result may be empty.
    pub fn project_count(&self, mode: usize, count: u32) -> Result<Self, FockError> {
        self.check_mode(mode)?;
        let mut out = self.empty_like(self.modes - 1);
        for (occ, a) in &self.amps {
            if occ[mode] == count {
                let mut reduced = occ.clone();
                reduced.remove(mode);
                out.amps.insert(reduced, a.clone());
            }
        }
        Ok(out)
    }

    /// Post-selects `count` photons in `mode`, drops the mode and renormalizes.
    /// Returns `None` for a zero-probability outcome.
    pub fn condition_count(&self, mode: usize, count: u32) -> Result<Option<Conditioned<A>>, FockError> {
        let projected = self.project_count(mode, count)?;
        if projected.is_empty() {
            return Ok(None);
        }
        let probability = self.relative_probability(&projected)?;
        Ok(Some(Conditioned { state: projected.normalized()?, probability }))
    }

    fn relative_probability(&self, part: &Self) -> Result<A, FockError> {
        let inv = self.norm_sqr().inv_sqrt().ok_or(FockError::NotNormalizable)?;
        Ok(part.norm_sqr().mul(&inv).mul(&inv))
    }

    /// Removes every term with one photon in both `b` and `c` without
    /// renormalizing.
    pub fn project_out_11(&self, b: usize, c: usize) -> Result<Self, FockError> {
        self.check_mode(b)?;
        self.check_mode(c)?;
        let mut out = self.clone();
        for (occ, _) in &self.amps {
            for m in [b, c] {
                if occ[m] > 1 {
                    return Err(FockError::NotQubitMode(m));
                }
            }
        }
        out.amps.retain(|occ, _| !(occ[b] == 1 && occ[c] == 1));
        Ok(out)
    }

    /// Elimination of `|11>` on modes `b`, `c`: renormalized state and
    /// survival probability.
    pub fn eliminate_11(&self, b: usize, c: usize) -> Result<Conditioned<A>, FockError> {
        let kept = self.project_out_11(b, c)?;
        if kept.is_empty() {
            return Err(FockError::EmptyResult);
        }
        let probability = self.relative_probability(&kept)?;
        Ok(Conditioned { state: kept.normalized()?, probability })
    }

    /// Tensor product; `other`'s modes follow this state's modes.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = self.empty_like(self.modes + other.modes);
        out.cutoff = self.cutoff.max(other.cutoff);
        for (oa, a) in &self.amps {
            for (ob, b) in &other.amps {
                let mut occ = oa.clone();
                occ.extend_from_slice(ob);
                let v = a.mul(b);
                if !v.is_negligible() {
                    out.amps.insert(occ, v);
                }
            }
        }
        out
    }

    /// Reorders modes so that new mode `k` is old mode `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<Self, FockError> {
        let mut seen = vec![false; self.modes];
        if order.len() != self.modes {
            return Err(FockError::BadPermutation(order.to_vec()));
        }
        for &m in order {
            if m >= self.modes || std::mem::replace(&mut seen[m], true) {
                return Err(FockError::BadPermutation(order.to_vec()));
            }
        }
        let mut out = self.empty_like(self.modes);
        for (occ, a) in &self.amps {
            out.amps.insert(order.iter().map(|&m| occ[m]).collect(), a.clone());
        }
        Ok(out)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64, FockError> {
        if self.modes != other.modes {
            return Err(FockError::DimensionMismatch(self.modes, other.modes));
        }
        Ok(self
            .amps
            .iter()
            .filter_map(|(occ, a)| other.amps.get(occ).map(|b| a.to_complex().conj() * b.to_complex()))
            .sum())
    }

    pub fn to_complex(&self) -> FockState<Complex64> {
        FockState {
            modes: self.modes,
            cutoff: self.cutoff,
            amps: self.amps.iter().map(|(o, a)| (o.clone(), a.to_complex())).collect(),
        }
    }

    /// Photon numbers present in the support.
    pub fn photon_numbers(&self) -> Vec<u32> {
        let mut n: Vec<u32> = self.amps.keys().map(|o| o.iter().sum()).collect();
        n.sort_unstable();
        n.dedup();
        n
    }
}

impl FockState<Complex64> {
    /// Multiplies amplitudes by `exp(i * phi * n)` on `mode`.
    pub fn phase(&self, mode: usize, phi: f64) -> Result<Self, FockError> {
        self.check_mode(mode)?;
        let mut out = self.clone();
        for (occ, a) in out.amps.iter_mut() {
            *a *= Complex64::from_polar(1.0, phi * f64::from(occ[mode]));
        }
        Ok(out)
    }
}

/// Normalized floating-point state from terms.
pub fn make_state(
    cutoff: u32,
    terms: impl IntoIterator<Item = (Occupation, Complex64)>,
) -> Result<FockState<Complex64>, FockError> {
    FockState::make_state(cutoff, terms)
}

/// `|<a|b>|^2 / (<a|a> <b|b>)`.
pub fn fidelity<A: Amplitude, B: Amplitude>(a: &FockState<A>, b: &FockState<B>) -> Result<f64, FockError> {
    let (a, b) = (a.to_complex(), b.to_complex());
    let overlap = a.inner(&b)?.norm_sqr();
    let na = a.norm_sqr().re;
    let nb = b.norm_sqr().re;
    if na == 0.0 || nb == 0.0 {
        return Err(FockError::ZeroNorm);
    }
    Ok(overlap / (na * nb))
}

/// Global-phase-insensitive equality: `|<a|b>| >= 1 - tol` after normalization.
pub fn states_equal<A: Amplitude, B: Amplitude>(
    a: &FockState<A>,
    b: &FockState<B>,
    tol: f64,
) -> Result<bool, FockError> {
    Ok(fidelity(a, b)?.sqrt() >= 1.0 - tol)
}
