//! Sign dynamics for the affine Weyl group of `A_l^(1)`.
//!
//! Elements are affine permutations `w: ℤ → ℤ` with `w(i + n) = w(i) + n` and
//! `Σ w(i) = Σ i` over one window, `n = l + 1`. Right multiplication by `s_i` swaps window
//! positions `i, i+1` for `1 ≤ i ≤ l`; `s_0` swaps `w(0) = w(n) − n` with `w(1)`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{extended_cartan, LieType, Series};
use crate::signflow::{eta_word, SignVector};

pub const AFFINE_ELEMENT_CAP: usize = 2_000_000;
pub const MIN_STABLE_COEFFS: usize = 6;
/// Largest numerator or denominator degree tried by [`rational_guess`].
pub const MAX_GUESS_DEGREE: usize = 4;
/// Coefficients beyond the fitted parameters that a guess must also reproduce.
pub const GUESS_VERIFICATION: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineElement {
    /// `w(i) mod n`, zero-based.
    pub perm: Vec<u16>,
    /// `w(i) = perm[i] + 1 + n·translation[i]` (one-based positions); entries sum to 0.
    pub translation: Vec<i64>,
    pub length: usize,
    pub witness_word: Vec<usize>,
}

impl AffineElement {
    fn from_window(window: &[i64], witness_word: Vec<usize>) -> Self {
        let n = window.len() as i64;
        let (perm, translation) = window
            .iter()
            .map(|&v| {
                let (k, r) = (v - 1).div_mod_floor(&n);
                (r as u16, k)
            })
            .unzip();
        AffineElement { perm, translation, length: window_length(window), witness_word }
    }

    /// One-based window `[w(1), …, w(n)]`.
    pub fn window(&self) -> Vec<i64> {
        let n = self.perm.len() as i64;
        self.perm.iter().zip(&self.translation).map(|(&p, &k)| p as i64 + 1 + n * k).collect()
    }

    pub fn word_string(&self) -> String {
        if self.witness_word.is_empty() {
            "e".into()
        } else {
            self.witness_word.iter().map(|i| i.to_string()).collect()
        }
    }
}

fn node_count(ty: LieType) -> Result<usize> {
    if !ty.is_affine() || ty.series() != Series::A {
        return Err(Error::UnsupportedType { ty: ty.to_string(), reason: "affine sign dynamics cover A_l^(1) only".into() });
    }
    Ok(ty.rank() + 1)
}

fn apply_simple(window: &mut [i64], i: usize) {
    let n = window.len();
    if i == 0 {
        let (a, b) = (window[0], window[n - 1]);
        window[0] = b - n as i64;
        window[n - 1] = a + n as i64;
    } else {
        window.swap(i - 1, i);
    }
}

/// Whether `w·s_i` is longer than `w`.
fn ascends(window: &[i64], i: usize) -> bool {
    let n = window.len();
    if i == 0 {
        window[n - 1] - (n as i64) < window[0]
    } else {
        window[i - 1] < window[i]
    }
}

/// Inversion count `Σ_{i<j} |⌊(w(j) − w(i))/n⌋|`.
pub fn window_length(window: &[i64]) -> usize {
    let n = window.len() as i64;
    let mut len = 0;
    for i in 0..window.len() {
        for j in i + 1..window.len() {
            len += Integer::div_floor(&(window[j] - window[i]), &n).unsigned_abs() as usize;
        }
    }
    len
}

pub fn window_of_word(ty: LieType, word: &[usize]) -> Result<Vec<i64>> {
    let n = node_count(ty)?;
    let mut w: Vec<i64> = (1..=n as i64).collect();
    for &i in word {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        apply_simple(&mut w, i);
    }
    Ok(w)
}

pub fn affine_length(ty: LieType, word: &[usize]) -> Result<usize> {
    Ok(window_length(&window_of_word(ty, word)?))
}

/// Every element of length at most `lmax`, ordered by length and then by lex-least reduced word.
pub fn enumerate_by_length(ty: LieType, lmax: usize, cap: usize) -> Result<Vec<AffineElement>> {
    let n = node_count(ty)?;
    let identity: Vec<i64> = (1..=n as i64).collect();
    let mut out = vec![AffineElement::from_window(&identity, vec![])];
    let mut layer = vec![(identity, Vec::<usize>::new())];
    for _ in 0..lmax {
        let children: Vec<(Vec<i64>, Vec<usize>)> = layer
            .par_iter()
            .flat_map_iter(|(w, word)| {
                (0..n).filter(|&i| ascends(w, i)).map(move |i| {
                    let mut next = w.clone();
                    apply_simple(&mut next, i);
                    let mut next_word = word.clone();
                    next_word.push(i);
                    (next, next_word)
                })
            })
            .collect();
        let mut seen = HashSet::new();
        layer = children.into_iter().filter(|(w, _)| seen.insert(w.clone())).collect();
        if out.len() + layer.len() > cap {
            return Err(Error::CapExceeded { what: format!("elements of {ty} up to length {lmax}"), size: out.len() + layer.len(), cap });
        }
        out.extend(layer.iter().map(|(w, word)| AffineElement::from_window(w, word.clone())));
    }
    Ok(out)
}

/// η of a reduced word under the extended Cartan matrix.
pub fn affine_eta(ty: LieType, eps: &SignVector, word: &[usize]) -> Result<usize> {
    let c = extended_cartan(ty)?;
    let length = affine_length(ty, word)?;
    if length != word.len() {
        return Err(Error::NonReducedWord { word: word.to_vec(), word_len: word.len(), length });
    }
    eta_word(&c, word, eps)
}

/// All reduced words of the element with the given window, by peeling right descents.
pub fn reduced_words_of_window(window: &[i64]) -> Vec<Vec<usize>> {
    if window_length(window) == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..window.len() {
        if !ascends(window, i) {
            let mut shorter = window.to_vec();
            apply_simple(&mut shorter, i);
            for mut w in reduced_words_of_window(&shorter) {
                w.push(i);
                out.push(w);
            }
        }
    }
    out
}

/// Experiment configs for `A_2^(1)` need at least one `+` sign, since `a₀a₁a₂ > 0`.
pub fn check_admissible(ty: LieType, eps: &SignVector) -> Result<()> {
    let n = node_count(ty)?;
    eps.check_len(n)?;
    if ty.rank() == 2 && eps.is_all_minus() {
        return Err(Error::InvalidSignVector(format!("{eps} is not admissible for {ty}: at least one sign must be +")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    pub coeffs: Vec<i64>,
    /// Largest length summed over.
    pub order: usize,
    /// Heuristic: no element of length in `(order − buffer, order]` touched the coefficient.
    pub stable: Vec<bool>,
    pub buffer: usize,
}

impl TruncatedSeries {
    /// A series known exactly, every coefficient stable.
    pub fn exact(coeffs: Vec<i64>) -> Self {
        let n = coeffs.len();
        TruncatedSeries { order: n.saturating_sub(1), stable: vec![true; n], coeffs, buffer: 0 }
    }

    /// Coefficients before the first unstable one.
    pub fn stable_prefix(&self) -> &[i64] {
        let k = self.stable.iter().position(|s| !s).unwrap_or(self.coeffs.len());
        &self.coeffs[..k]
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "{a}q")?,
                (_, 1) => write!(f, "q^{k}")?,
                _ => write!(f, "{a}q^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.coeffs.len())
    }
}

/// Partial sum of `Σ (−1)^{l(w)} q^{η(w, ε)}` over lengths `≤ lmax`.
pub fn p_series(ty: LieType, eps: &SignVector, lmax: usize, cap: usize) -> Result<TruncatedSeries> {
    let n = node_count(ty)?;
    let c = extended_cartan(ty)?;
    eps.check_len(n)?;
    let elements = enumerate_by_length(ty, lmax, cap)?;
    let etas: Vec<usize> = elements
        .par_iter()
        .map(|e| eta_word(&c, &e.witness_word, eps))
        .collect::<Result<_>>()?;
    let buffer = 2 * n;
    let mut coeffs = vec![0i64; lmax + 1];
    let mut last_len: Vec<Option<usize>> = vec![None; lmax + 1];
    for (e, &k) in elements.iter().zip(&etas) {
        coeffs[k] += if e.length % 2 == 0 { 1 } else { -1 };
        last_len[k] = last_len[k].max(Some(e.length));
    }
    let stable = last_len
        .iter()
        .map(|l| match l {
            None => true,
            Some(len) => len + buffer <= lmax,
        })
        .collect();
    Ok(TruncatedSeries { coeffs, order: lmax, stable, buffer })
}

/// `num(q)/den(q)` with integer coefficients, `den(0) > 0`, content removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunction {
    pub num: Vec<BigInt>,
    pub den: Vec<BigInt>,
}

impl RationalFunction {
    /// First `n` Taylor coefficients at `q = 0`.
    pub fn expand(&self, n: usize) -> Vec<BigRational> {
        let d0 = BigRational::from_integer(self.den[0].clone());
        let mut out: Vec<BigRational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = BigRational::from_integer(self.num.get(k).cloned().unwrap_or_default());
            for j in 1..self.den.len().min(k + 1) {
                acc -= BigRational::from_integer(self.den[j].clone()) * &out[k - j];
            }
            out.push(acc / &d0);
        }
        out
    }
}

fn fmt_int_poly(f: &mut fmt::Formatter<'_>, c: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (k, a) in c.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if first {
            if a.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if a.is_negative() { '-' } else { '+' })?;
        }
        first = false;
        let m = a.abs();
        let coef = if m.is_one() && k > 0 { String::new() } else { m.to_string() };
        match k {
            0 => write!(f, "{m}")?,
            1 => write!(f, "{coef}q")?,
            _ => write!(f, "{coef}q^{k}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let multi = |c: &[BigInt]| c.iter().filter(|x| !x.is_zero()).count() > 1;
        if self.den.len() == 1 && self.den[0].is_one() {
            return fmt_int_poly(f, &self.num);
        }
        for (c, sep) in [(&self.num, "/"), (&self.den, "")] {
            if multi(c) {
                write!(f, "(")?;
                fmt_int_poly(f, c)?;
                write!(f, ")")?;
            } else {
                fmt_int_poly(f, c)?;
            }
            write!(f, "{sep}")?;
        }
        Ok(())
    }
}

/// Solves `m·x = rhs` exactly; `None` when singular.
fn solve(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[col][col];
                for c in col..n {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
                let delta = &factor * &rhs[col];
                rhs[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

fn to_integer_pair(num: Vec<BigRational>, den: Vec<BigRational>) -> RationalFunction {
    let all = num.iter().chain(&den);
    let lcm = all.clone().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scale = |v: Vec<BigRational>| -> Vec<BigInt> { v.into_iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect() };
    let (mut num, mut den) = (scale(num), scale(den));
    let g = num.iter().chain(&den).fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if den[0].is_negative() { -g } else { g };
    for x in num.iter_mut().chain(den.iter_mut()) {
        *x /= &g;
    }
    while num.len() > 1 && num.last().is_some_and(Zero::is_zero) {
        num.pop();
    }
    RationalFunction { num, den }
}

/// Lowest-degree Padé fit `P/Q` (`deg ≤ 4` each) reproducing every stable coefficient,
/// with at least two coefficients left over as a check.
pub fn rational_guess(series: &TruncatedSeries) -> Result<Option<RationalFunction>> {
    let c = series.stable_prefix();
    let m = c.len();
    if m < MIN_STABLE_COEFFS {
        return Err(Error::InsufficientData(format!("{m} stable coefficients, need {MIN_STABLE_COEFFS}")));
    }
    let c: Vec<BigRational> = c.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    let at = |k: i64| if k < 0 { BigRational::zero() } else { c[k as usize].clone() };
    for total in 0..=2 * MAX_GUESS_DEGREE {
        for a in 0..=total.min(MAX_GUESS_DEGREE) {
            let b = total - a;
            if b > MAX_GUESS_DEGREE || a + b + 1 + GUESS_VERIFICATION > m {
                continue;
            }
            // Σ_{j=1..b} q_j c_{k−j} = −c_k for k = a+1..a+b.
            let rows: Vec<Vec<BigRational>> =
                (a + 1..=a + b).map(|k| (1..=b).map(|j| at(k as i64 - j as i64)).collect()).collect();
            let rhs: Vec<BigRational> = (a + 1..=a + b).map(|k| -at(k as i64)).collect();
            let Some(q_tail) = solve(rows, rhs) else { continue };
            let mut den = vec![BigRational::one()];
            den.extend(q_tail);
            let conv = |k: usize| -> BigRational { (0..=b.min(k)).map(|j| &den[j] * &c[k - j]).sum() };
            if (a + 1..m).any(|k| !conv(k).is_zero()) {
                continue;
            }
            let num: Vec<BigRational> = (0..=a.min(m - 1)).map(conv).collect();
            return Ok(Some(to_integer_pair(num, den)));
        }
    }
    Ok(None)
}
