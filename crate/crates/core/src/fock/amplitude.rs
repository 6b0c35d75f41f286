use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Amplitudes below this magnitude are dropped from floating-point states.
pub const PRUNE: f64 = 1e-14;

/// Scalar type carried by a [`FockState`](super::FockState).
pub trait Amplitude: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_negligible(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// `k * sqrt(q)` for an integer `k` and a nonnegative rational `q`.
    fn scaled_sqrt(k: i64, q: &BigRational) -> Self;
    /// `None` when the type cannot hold an arbitrary real exactly.
    fn from_real(x: f64) -> Option<Self>;
    /// `|a|^2` as a real value of the same type.
    fn norm_sqr(&self) -> Self;
    /// `1 / sqrt(x)` for a positive real `x`; `None` if not representable.
    fn inv_sqrt(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
}

impl Amplitude for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_negligible(&self) -> bool {
        self.norm() < PRUNE
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn scaled_sqrt(k: i64, q: &BigRational) -> Self {
        Complex64::new(k as f64 * q.to_f64().unwrap_or(f64::NAN).sqrt(), 0.0)
    }
    fn from_real(x: f64) -> Option<Self> {
        Some(Complex64::new(x, 0.0))
    }
    fn norm_sqr(&self) -> Self {
        Complex64::new(Complex64::norm_sqr(self), 0.0)
    }
    fn inv_sqrt(&self) -> Option<Self> {
        (self.re > 0.0).then(|| Complex64::new(1.0 / self.re.sqrt(), 0.0))
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Exact real number `sum_r q_r * sqrt(r)` with rational `q_r` and
/// square-free integer radicands `r`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Surd {
    terms: BTreeMap<u64, BigRational>,
}

fn squarefree_split(n: &BigUint) -> (BigUint, u64) {
    // n = s^2 * f with f square-free
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut f = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut count = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        for _ in 0..count / 2 {
            s *= &p;
        }
        if count % 2 == 1 {
            f *= &p;
        }
        p += 1u32;
    }
    f *= rest;
    let f = f.to_u64().expect("radicand exceeds u64");
    (s, f)
}

impl Surd {
    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    /// `sqrt(q)` for rational `q >= 0`.
    pub fn sqrt_of(q: &BigRational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        if q.is_zero() {
            return Self::default();
        }
        // sqrt(a/b) = sqrt(a*b)/b
        let a = q.numer().to_biguint().expect("nonnegative");
        let b = q.denom().to_biguint().expect("positive");
        let (s, f) = squarefree_split(&(&a * &b));
        let coeff = BigRational::new(BigInt::from(s), BigInt::from(b));
        let mut terms = BTreeMap::new();
        terms.insert(f, coeff);
        Self { terms }
    }

    /// The value as a rational, if it has no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(r, q)| (*r, q))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, q)| q.to_f64().unwrap_or(f64::NAN) * (*r as f64).sqrt())
            .sum()
    }

    fn insert_add(terms: &mut BTreeMap<u64, BigRational>, r: u64, q: BigRational) {
        let entry = terms.entry(r).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            terms.remove(&r);
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, q)| if *r == 1 { q.to_string() } else { format!("{q}*sqrt({r})") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Amplitude for Surd {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::from_int(1)
    }
    fn is_negligible(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (r, q) in &other.terms {
            Self::insert_add(&mut terms, *r, q.clone());
        }
        Self { terms }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (r1, q1) in &self.terms {
            for (r2, q2) in &other.terms {
                // r1 = g*a, r2 = g*b with a, b, g pairwise coprime
                let g = r1.gcd(r2);
                let ab = (r1 / g).checked_mul(r2 / g).expect("radicand overflow");
                let q = q1 * q2 * BigRational::from_integer(BigInt::from(g));
                Self::insert_add(&mut terms, ab, q);
            }
        }
        Self { terms }
    }
    fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(r, q)| (*r, -q)).collect() }
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn scaled_sqrt(k: i64, q: &BigRational) -> Self {
        Self::sqrt_of(q).mul(&Self::from_int(k))
    }
    fn from_real(_: f64) -> Option<Self> {
        None
    }
    fn norm_sqr(&self) -> Self {
        self.mul(self)
    }
    fn inv_sqrt(&self) -> Option<Self> {
        let q = self.as_rational()?;
        if !q.is_positive() {
            return None;
        }
        Some(Self::sqrt_of(&q.recip()))
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
}
