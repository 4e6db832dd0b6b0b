//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

fn total(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Graded order: total degree first, then lexicographic on exponents.
fn graded_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    total(a).cmp(&total(b)).then_with(|| a.cmp(b))
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Poly::from_terms(nvars, [(m, BigRational::one())])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut m2 = m.clone();
                m2[i] -= 1;
                out.add_term(m2, c * BigRational::from_integer(m[i].into()));
            }
        }
        out
    }

    pub fn nth_derivative(&self, i: usize, n: u32) -> Poly {
        (0..n).fold(self.clone(), |acc, _| acc.derivative(i))
    }

    /// Sets variable `i` to `value` (the variable stays in the ring with exponent 0).
    pub fn substitute(&self, i: usize, value: &BigRational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = std::mem::replace(&mut m2[i], 0);
            out.add_term(m2, c * pow_q(value, e));
        }
        out
    }

    /// Univariate restriction in variable `keep`, all other variables set to `values[j]`.
    pub fn restrict(&self, keep: usize, values: &[BigRational]) -> Vec<BigRational> {
        let mut coeffs: Vec<BigRational> = Vec::new();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (j, &e) in m.iter().enumerate() {
                if j != keep && e > 0 {
                    v *= pow_q(&values[j], e);
                }
            }
            let k = m[keep] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] += v;
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        coeffs
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| total(m)).max()
    }

    /// Lowest total degree of a monomial (standard grading).
    pub fn min_degree(&self) -> Result<u32> {
        self.terms.keys().map(|m| total(m)).min().ok_or(Error::ZeroPolynomial)
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[i]).max()
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| total(m) == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Distinct weighted degrees `Σ w_i e_i` among the monomials.
    pub fn weighted_degrees(&self, weights: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .terms
            .keys()
            .map(|m| m.iter().zip(weights).map(|(e, w)| e * w).sum())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| graded_cmp(a.0, b.0))
    }

    /// `self / divisor`, failing unless the division is exact.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (lm, lc) = divisor.leading_term().ok_or(Error::ZeroPolynomial)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let Some(shift) = monomial_div(m, &lm) else {
                return Err(Error::InexactDivision);
            };
            let t = Poly::from_terms(self.nvars, [(shift, c / &lc)]);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    /// Square root, if `self` is the square of a polynomial with rational coefficients.
    /// The root returned has a positive coefficient on [`Poly::normalization_monomial`].
    pub fn sqrt(&self) -> Result<Poly> {
        let not_square = |why: &str| Error::NotAPerfectSquare(why.to_string());
        if self.is_zero() {
            return Ok(self.clone());
        }
        let (lm, lc) = self.leading_term().unwrap();
        let root_lm: Monomial = lm
            .iter()
            .map(|&e| (e % 2 == 0).then_some(e / 2))
            .collect::<Option<_>>()
            .ok_or_else(|| not_square("leading monomial has an odd exponent"))?;
        let root_lc = rational_sqrt(lc).ok_or_else(|| not_square("leading coefficient is not a rational square"))?;
        let floor = self.min_degree()?;
        let two_lc = &root_lc + &root_lc;
        let mut root = Poly::from_terms(self.nvars, [(root_lm.clone(), root_lc)]);
        let mut rem = self - &(&root * &root);
        let mut last = root_lm.clone();
        // Each step peels the leading term of the remainder against 2·LT(root).
        while let Some((m, c)) = rem.leading_term() {
            let next = monomial_div(m, &root_lm).ok_or_else(|| not_square("remainder not divisible"))?;
            if graded_cmp(&next, &last) != std::cmp::Ordering::Less || 2 * total(&next) < floor {
                return Err(not_square("remainder does not close"));
            }
            let term = Poly::from_terms(self.nvars, [(next.clone(), c / &two_lc)]);
            let inc = &(&(&root + &root) * &term) + &(&term * &term);
            rem = &rem - &inc;
            root = &root + &term;
            last = next;
        }
        let m = root.normalization_monomial().unwrap();
        if root.coeff(&m).is_negative() {
            root = -&root;
        }
        Ok(root)
    }

    /// Lowest total degree, then lexicographically largest exponent vector.
    pub fn normalization_monomial(&self) -> Option<Monomial> {
        self.terms.keys().min_by(|a, b| total(a).cmp(&total(b)).then_with(|| b.cmp(a))).cloned()
    }

    /// `(k, Q)` with `self = ±k·Q²`, `k` a squarefree positive integer and the sign chosen
    /// so the leading coefficient is positive. Fails if no such `Q` exists.
    pub fn sqrt_up_to_content(&self) -> Result<(BigInt, bool, Poly)> {
        let (_, lc) = self.leading_term().ok_or(Error::ZeroPolynomial)?;
        let negated = lc.is_negative();
        let p = if negated { -self } else { self.clone() };
        let lc = p.leading_term().unwrap().1.clone();
        let kernel = squarefree_kernel(&(lc.numer() * lc.denom()));
        let q = p.scale(&BigRational::new(BigInt::one(), kernel.clone())).sqrt()?;
        Ok((kernel, negated, q))
    }

    /// Sorted monomial list: `[{exponents, num, den}]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!({"exponents": m, "num": c.numer().to_string(), "den": c.denom().to_string()}))
                .collect(),
        )
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| graded_cmp(a, b));
        let mut out = String::new();
        for m in keys {
            let c = &self.terms[m];
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{e}", names[i]) })
                .collect();
            let mono = vars.join("*");
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else if a.is_integer() {
                out.push_str(&format!("{a}*{mono}"));
            } else {
                out.push_str(&format!("({a})*{mono}"));
            }
        }
        out
    }
}

fn monomial_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    a.iter().zip(b).map(|(&x, &y)| x.checked_sub(y)).collect()
}

pub(crate) fn pow_q(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow::Pow::pow(x, e)
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == BigSign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub(crate) fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(integer_sqrt(x.numer())?, integer_sqrt(x.denom())?))
}

/// Squarefree part of a positive integer, by trial division; a leftover cofactor with no
/// factor below 10⁶ is kept whole unless it is a perfect square.
pub(crate) fn squarefree_kernel(n: &BigInt) -> BigInt {
    let mut rest = n.abs();
    let mut kernel = BigInt::one();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &d * &d <= rest && d < limit {
        let mut e = 0;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        if e % 2 == 1 {
            kernel *= &d;
        }
        d += 1;
    }
    if rest > BigInt::one() && integer_sqrt(&rest).is_none() {
        kernel *= rest;
    }
    kernel
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomials from different rings");
        let mut acc: HashMap<Monomial, BigRational> = HashMap::with_capacity(self.len() * rhs.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                acc.entry(m).and_modify(|v| *v += &c).or_insert(c);
            }
        }
        Poly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i + 1)).collect();
        f.write_str(&self.display_with(&names))
    }
}

/// Determinant of a square matrix of polynomials by Laplace expansion along rows, memoized
/// on the set of remaining columns.
pub fn det(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let k = m.len();
    if k == 0 {
        return Poly::one(nvars);
    }
    assert!(k <= 20 && m.iter().all(|r| r.len() == k), "det expects a small square matrix");
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    det_rec(m, 0, (1u32 << k) - 1, &mut memo, nvars)
}

fn det_rec(m: &[Vec<Poly>], row: usize, cols: u32, memo: &mut HashMap<u32, Poly>, nvars: usize) -> Poly {
    if cols == 0 {
        return Poly::one(nvars);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut out = Poly::zero(nvars);
    let mut position = 0;
    for j in 0..m.len() {
        if cols >> j & 1 == 0 {
            continue;
        }
        if !m[row][j].is_zero() {
            let minor = det_rec(m, row + 1, cols & !(1 << j), memo, nvars);
            let t = &m[row][j] * &minor;
            out = if position % 2 == 0 { &out + &t } else { &out - &t };
        }
        position += 1;
    }
    memo.insert(cols, out.clone());
    out
}
