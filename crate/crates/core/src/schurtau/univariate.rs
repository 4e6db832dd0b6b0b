//! Univariate polynomials over the rationals and Sturm-sequence root counting.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient `k` multiplies `t₁^k`; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateExact {
    coeffs: Vec<BigRational>,
}

impl UnivariateExact {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariateExact { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    /// `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        if rem.len() <= dd {
            return (Self::new(vec![]), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / d.lead();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    fn monic(&self) -> Self {
        let l = self.lead().clone();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// `f / gcd(f, f')`: same roots, each simple.
    pub fn square_free_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    pub fn negated(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

/// Number of distinct real roots, exactly.
pub fn sturm_real_roots(f: &UnivariateExact) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p0 = f.square_free_part();
    if p0.degree() == Some(0) {
        return Ok(0);
    }
    let mut seq = vec![p0.clone(), p0.derivative()];
    loop {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(r.negated());
    }
    let changes = |signs: Vec<bool>| signs.windows(2).filter(|w| w[0] != w[1]).count();
    // Signs at ±∞ come from leading coefficients.
    let at_pos: Vec<bool> = seq.iter().map(|p| p.lead().is_positive()).collect();
    let at_neg: Vec<bool> = seq
        .iter()
        .map(|p| p.lead().is_positive() == (p.degree().unwrap() % 2 == 0))
        .collect();
    Ok(changes(at_neg) - changes(at_pos))
}
