//! Blow-up polynomials `p_ε(q) = (−1)^{l(w*)} Σ_w (−1)^{l(w)} q^{η(w,ε)}`, their closed
//! factorizations `Π (q^{d_i} − 1)`, and point counts of `SO(n)` over finite fields.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{compact_dual_info, LieType};
use crate::signflow::{eta_table, SignVector};
use crate::weyl::WeylGroup;

/// Integer polynomial, coefficient `k` multiplies `q^k`; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

pub type BlowupPolynomial = IntPoly;

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::new(vec![1])
    }

    /// `c·q^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        IntPoly::new(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).copied().unwrap_or(0) + other.coeffs.get(k).copied().unwrap_or(0))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, c: i64) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, &c| acc * x + BigInt::from(c))
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let a = c.unsigned_abs();
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 || a != 1 {
                out.push_str(&a.to_string());
            }
            out.push_str(&mono);
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("q"))
    }
}

/// `Π (q^{d_i} − 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredForm {
    pub degrees: Vec<u32>,
}

impl FactoredForm {
    pub fn expand(&self) -> IntPoly {
        self.degrees
            .iter()
            .fold(IntPoly::one(), |acc, &d| acc.mul(&IntPoly::monomial(1, d as usize).add(&IntPoly::new(vec![-1]))))
    }

    pub fn degree(&self) -> u32 {
        self.degrees.iter().sum()
    }
}

impl fmt::Display for FactoredForm {
    /// Ascending degrees with repeats grouped: `(q-1)(q^2-1)^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degrees.is_empty() {
            return f.write_str("1");
        }
        let mut ds = self.degrees.clone();
        ds.sort_unstable();
        let mut k = 0;
        while k < ds.len() {
            let d = ds[k];
            let run = ds[k..].iter().take_while(|&&x| x == d).count();
            if d == 1 {
                write!(f, "(q-1)")?;
            } else {
                write!(f, "(q^{d}-1)")?;
            }
            if run > 1 {
                write!(f, "^{run}")?;
            }
            k += run;
        }
        Ok(())
    }
}

/// `p_ε(q)` from an η table over the whole group.
pub fn p_epsilon(group: &WeylGroup, eps: &SignVector) -> Result<IntPoly> {
    let table = eta_table(group, eps)?;
    Ok(alternating_sum(group, &table.eta))
}

/// `(−1)^{l(w*)} Σ_w (−1)^{l(w)} q^{η(w)}` for precomputed η values.
pub fn alternating_sum(group: &WeylGroup, eta: &[usize]) -> IntPoly {
    let top = group.max_length();
    let mut coeffs = vec![0i64; eta.iter().copied().max().unwrap_or(0) + 1];
    for (id, &e) in eta.iter().enumerate() {
        coeffs[e] += if (group.element(id).length + top).is_multiple_of(2) { 1 } else { -1 };
    }
    IntPoly::new(coeffs)
}

/// The closed factorization attached to `ty` through its compact dual.
pub fn closed_form_p(ty: LieType) -> Result<FactoredForm> {
    Ok(FactoredForm { degrees: compact_dual_info(ty)?.degrees })
}

/// `(p, k)` with `q = p^k`, `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= q).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn check_odd_prime_power(q: u64) -> Result<(u64, u32)> {
    let pk = prime_power(q).ok_or_else(|| Error::InvalidQ { q, reason: "not a prime power".into() })?;
    if pk.0 == 2 {
        return Err(Error::InvalidQ { q, reason: "even characteristic is not supported".into() });
    }
    Ok(pk)
}

/// `|Ǩ(F_q)| = q^r · p(q)` with `r = dim Ǩ − Σ d_i`.
pub fn chevalley_order(ty: LieType, q: u64) -> Result<BigInt> {
    check_odd_prime_power(q)?;
    let info = compact_dual_info(ty)?;
    let p = closed_form_p(ty)?.expand();
    let qb = BigInt::from(q);
    Ok(Pow::pow(&qb, info.r() as u32) * p.eval(&qb))
}

/// `Π (1 + x^{2d_i − 1})`, the rational Poincaré polynomial of `Ǩ`.
pub fn poincare_polynomial_k(ty: LieType) -> Result<IntPoly> {
    let info = compact_dual_info(ty)?;
    Ok(info
        .degrees
        .iter()
        .fold(IntPoly::one(), |acc, &d| acc.mul(&IntPoly::one().add(&IntPoly::monomial(1, 2 * d as usize - 1)))))
}

pub const SO2_Q_CAP: u64 = 10_000;
pub const SO3_Q_CAP: u64 = 7;

/// Counts `SO(n)(F_q)` by enumeration: solutions of `x² + y² = 1` for `n = 2`, and
/// `3×3` matrices with orthonormal columns and determinant 1 for `n = 3`.
pub fn brute_force_so_order(n: usize, q: u64) -> Result<u64> {
    check_odd_prime_power(q)?;
    let cap = match n {
        2 => SO2_Q_CAP,
        3 => SO3_Q_CAP,
        _ => return Err(Error::InvalidArgument(format!("brute-force SO(n) supports n = 2, 3, not {n}"))),
    };
    if q > cap {
        return Err(Error::CapExceeded { what: format!("brute-force SO({n}) field size"), size: q as usize, cap: cap as usize });
    }
    let f = FiniteField::new(q)?;
    match n {
        2 => {
            let mut square_count = vec![0u64; q as usize];
            for x in 0..f.q {
                square_count[f.mul(x, x) as usize] += 1;
            }
            if square_count[f.neg(1) as usize] == 0 {
                return Err(Error::AssumptionViolated(format!("-1 is not a square in F_{q}")));
            }
            Ok((0..f.q).map(|x| square_count[f.sub(1, f.mul(x, x)) as usize]).sum())
        }
        _ => {
            let dot = |a: &[u32; 3], b: &[u32; 3]| f.add(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])), f.mul(a[2], b[2]));
            let vectors: Vec<[u32; 3]> = (0..f.q)
                .flat_map(|a| (0..f.q).flat_map(move |b| (0..f.q).map(move |c| [a, b, c])))
                .collect();
            let units: Vec<[u32; 3]> = vectors.iter().copied().filter(|v| dot(v, v) == 1).collect();
            let mut count = 0u64;
            for c1 in &units {
                for c2 in units.iter().filter(|c2| dot(c1, c2) == 0) {
                    for c3 in units.iter().filter(|c3| dot(c1, c3) == 0 && dot(c2, c3) == 0) {
                        if f.det3(c1, c2, c3) == 1 {
                            count += 1;
                        }
                    }
                }
            }
            Ok(count)
        }
    }
}

/// `F_{p^k}` with elements encoded as base-`p` digit strings of polynomials in a primitive root.
#[derive(Debug, Clone)]
pub struct FiniteField {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidQ { q, reason: "not a prime power".into() })?;
        if q > u32::MAX as u64 / 2 {
            return Err(Error::InvalidQ { q, reason: "field too large".into() });
        }
        let (p, q) = (p as u32, q as u32);
        // Search monic f(x) = x^k + c_{k-1}x^{k-1} + ... + c_0 for which x has order q - 1.
        for tail in 0..q {
            let c: Vec<u32> = (0..k).map(|i| tail / p.pow(i) % p).collect();
            if c[0] == 0 {
                continue;
            }
            if let Some(exp) = Self::power_table(p, k, q, &c) {
                let mut log = vec![0u32; q as usize];
                for (e, &v) in exp.iter().enumerate() {
                    log[v as usize] = e as u32;
                }
                return Ok(FiniteField { p, k, q, exp, log });
            }
        }
        unreachable!("a primitive polynomial exists for every finite field")
    }

    /// Powers 1, x, x², … modulo `f`, or `None` if `x` is not primitive.
    fn power_table(p: u32, k: u32, q: u32, c: &[u32]) -> Option<Vec<u32>> {
        if k == 1 {
            // Constant term c0 = -g: x ≡ g.
            let g = (p - c[0]) % p;
            let mut out = Vec::with_capacity(q as usize - 1);
            let mut v = 1u64;
            for _ in 0..q - 1 {
                out.push(v as u32);
                v = v * g as u64 % p as u64;
                if v == 1 && out.len() < q as usize - 1 {
                    return None;
                }
            }
            return (v == 1).then_some(out);
        }
        let mut digits = vec![0u32; k as usize];
        digits[0] = 1;
        let encode = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &x| acc * p + x);
        let mut out = Vec::with_capacity(q as usize - 1);
        for step in 0..q - 1 {
            out.push(encode(&digits));
            let carry = digits[k as usize - 1];
            for i in (1..k as usize).rev() {
                digits[i] = (digits[i - 1] + p * p - carry * c[i] % p) % p;
            }
            digits[0] = (p * p - carry * c[0] % p) % p;
            let back_to_one = digits[0] == 1 && digits[1..].iter().all(|&d| d == 0);
            if back_to_one && step + 1 < q - 1 {
                return None;
            }
        }
        Some(out)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.k {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.k {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.exp[((self.q - 1 - self.log[a as usize]) % (self.q - 1)) as usize])
    }

    fn det3(&self, c1: &[u32; 3], c2: &[u32; 3], c3: &[u32; 3]) -> u32 {
        // Columns c1, c2, c3; cofactor expansion along the first row.
        let m = |a: u32, b: u32| self.mul(a, b);
        let minor = |x1: u32, y1: u32, x2: u32, y2: u32| self.sub(m(x1, y2), m(x2, y1));
        let t1 = m(c1[0], minor(c2[1], c2[2], c3[1], c3[2]));
        let t2 = m(c2[0], minor(c1[1], c1[2], c3[1], c3[2]));
        let t3 = m(c3[0], minor(c1[1], c1[2], c2[1], c2[2]));
        self.add(self.sub(t1, t2), t3)
    }
}

pub fn matches_closed_form(ty: LieType, p: &IntPoly) -> Result<bool> {
    Ok(closed_form_p(ty)?.expand() == *p)
}
