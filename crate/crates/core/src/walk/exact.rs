use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::{EncodingWidth, WalkError};

pub type RationalProbability = BigRational;

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn check(p: &BigRational) -> Result<BigRational, WalkError> {
    if p <= &BigRational::zero() || p >= &BigRational::one() {
        return Err(WalkError::DegenerateProbability(to_f64(p)));
    }
    Ok((BigRational::one() - p) / p)
}

pub(crate) fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact `P_{R,m}` for rational `p`.
pub fn absorb_prob_exact(
    p: &BigRational,
    left: i64,
    right: i64,
    start: i64,
) -> Result<BigRational, WalkError> {
    if right <= left {
        return Err(WalkError::DegenerateLattice { left, right });
    }
    if start < left || start > right {
        return Err(WalkError::InvalidBoundaries { left, right, start });
    }
    let beta = check(p)?;
    if *p == half() {
        return Ok(BigRational::new(
            BigInt::from(start - left),
            BigInt::from(right - left),
        ));
    }
    let one = BigRational::one();
    let num = &one - Pow::pow(&beta, (start - left) as u64);
    let den = &one - Pow::pow(&beta, (right - left) as u64);
    Ok(num / den)
}

pub fn p_add_exact(p: &BigRational, w: EncodingWidth) -> Result<BigRational, WalkError> {
    if w.is_lost() {
        return Ok(BigRational::zero());
    }
    absorb_prob_exact(p, -i64::from(w.get()), 1, 0)
}

pub fn p_re_exact(p: &BigRational, w: EncodingWidth) -> Result<BigRational, WalkError> {
    if w.is_lost() {
        return Ok(BigRational::zero());
    }
    absorb_prob_exact(p, 0, i64::from(w.get()), 1)
}

/// `1 - P_add`, computed without cancellation: `β^w (1 - β) / (1 - β^{w+1})`.
pub fn p_add_complement_exact(p: &BigRational, w: EncodingWidth) -> Result<BigRational, WalkError> {
    if w.is_lost() {
        return Ok(BigRational::one());
    }
    let beta = check(p)?;
    if *p == half() {
        return Ok(BigRational::new(BigInt::one(), BigInt::from(w.get() + 1)));
    }
    let one = BigRational::one();
    let bw = Pow::pow(&beta, u64::from(w.get()));
    let bw1 = &bw * &beta;
    Ok(&bw * (&one - &beta) / (&one - bw1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn headline_rationals() {
        assert_eq!(p_add_exact(&rat(3, 4), EncodingWidth::new(4)).unwrap(), rat(120, 121));
        assert_eq!(p_add_exact(&rat(2, 3), EncodingWidth::new(4)).unwrap(), rat(30, 31));
        assert_eq!(p_re_exact(&rat(2, 3), EncodingWidth::new(4)).unwrap(), rat(8, 15));
        assert_eq!(p_re_exact(&rat(1, 2), EncodingWidth::new(4)).unwrap(), rat(1, 4));
        assert_eq!(p_add_exact(&rat(1, 2), EncodingWidth::new(4)).unwrap(), rat(4, 5));
    }

    #[test]
    fn complement_is_exact() {
        for n in 1..6i64 {
            let p = rat(n, n + 1);
            for w in 1..12 {
                let w = EncodingWidth::new(w);
                let sum = p_add_exact(&p, w).unwrap() + p_add_complement_exact(&p, w).unwrap();
                assert_eq!(sum, BigRational::one());
            }
        }
    }

    #[test]
    fn matches_float_version() {
        let p = rat(4, 5);
        for w in 1..20u32 {
            let exact = to_f64(&p_re_exact(&p, EncodingWidth::new(w)).unwrap());
            let float = super::super::p_re(0.8, EncodingWidth::new(w)).unwrap();
            assert!((exact - float).abs() < 1e-14);
        }
    }
}
