//! Type-A Lax matrices and their τ-functions.
//!
//! `L = diag(b₁, b₂−b₁, …, −b_l) + (unit superdiagonal) + (subdiagonal a_i)`, and
//! `τ_j(t) = det[exp(Σ t_k L₀^k)]_{j×j}`, so `τ_j(0) = 1` and `d/dt₁ log τ_j |₀ = b_j`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::LieType;
use crate::signflow::{eta, Sign, SignVector};
use crate::weyl::WeylGroup;

pub const NUM_RANK_CAP: usize = 10;
/// Below this eigenvalue gap the exponential falls back to scaling and squaring.
pub const SPECTRAL_GAP: f64 = 1e-6;
pub const BISECTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LaxMatrixA {
    b: Vec<f64>,
    a: Vec<f64>,
    m: DMatrix<f64>,
}

impl LaxMatrixA {
    pub fn new(b: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        let l = b.len();
        if l == 0 || a.len() != l {
            return Err(Error::InvalidArgument(format!("need l values of b and of a, got {} and {}", b.len(), a.len())));
        }
        if l > NUM_RANK_CAP {
            return Err(Error::CapExceeded { what: "Lax matrix rank".into(), size: l, cap: NUM_RANK_CAP });
        }
        if b.iter().chain(&a).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("Lax entries must be finite".into()));
        }
        let n = l + 1;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            let hi = if i < l { b[i] } else { 0.0 };
            let lo = if i > 0 { b[i - 1] } else { 0.0 };
            m[(i, i)] = hi - lo;
            if i + 1 < n {
                m[(i, i + 1)] = 1.0;
                m[(i + 1, i)] = a[i];
            }
        }
        Ok(LaxMatrixA { b, a, m })
    }

    /// Reads `(b, a)` back from a matrix of the required shape.
    pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if n < 2 || m.ncols() != n {
            return Err(Error::InvalidArgument("Lax matrix must be square of size at least 2".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let ok = match j as i64 - i as i64 {
                    1 => m[(i, j)] == 1.0,
                    d if !(-1..=1).contains(&d) => m[(i, j)] == 0.0,
                    _ => true,
                };
                if !ok {
                    return Err(Error::InvalidArgument(format!("entry ({i},{j}) breaks the tridiagonal unit-superdiagonal form")));
                }
            }
        }
        if m.trace().abs() > 1e-12 * (1.0 + m.abs().max()) {
            return Err(Error::InvalidArgument("Lax matrix must be traceless".into()));
        }
        let mut b = Vec::with_capacity(n - 1);
        let mut acc = 0.0;
        for i in 0..n - 1 {
            acc += m[(i, i)];
            b.push(acc);
        }
        let a = (0..n - 1).map(|i| m[(i + 1, i)]).collect();
        Self::new(b, a)
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn lie_type(&self) -> LieType {
        format!("A{}", self.rank()).parse().expect("rank within range")
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `ε_i = sgn a_i`; a zero entry counts as `+`.
    pub fn signs(&self) -> SignVector {
        SignVector::new(self.a.iter().map(|&x| if x < 0.0 { Sign::Minus } else { Sign::Plus }).collect())
    }

    /// `I_k = tr(L^{k+1})/(k+1)` for `k = 1..l`.
    pub fn invariants(&self) -> Vec<f64> {
        let mut p = self.m.clone();
        (1..=self.rank())
            .map(|k| {
                p = &p * &self.m;
                p.trace() / (k + 1) as f64
            })
            .collect()
    }

    /// Characteristic polynomial `det(L − λ)` and its derivative, by the tridiagonal recurrence.
    fn char_poly(&self, x: f64) -> (f64, f64) {
        let n = self.m.nrows();
        let (mut p0, mut p1) = (1.0, self.m[(0, 0)] - x);
        let (mut d0, mut d1) = (0.0, -1.0);
        for k in 1..n {
            let c = self.m[(k, k)] - x;
            let off = self.a[k - 1];
            let p2 = c * p1 - off * p0;
            let d2 = -p1 + c * d1 - off * d0;
            (p0, p1, d0, d1) = (p1, p2, d1, d2);
        }
        (p1, d1)
    }

    /// Eigenvalues, which must be real; sorted in decreasing order.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let eig = self.m.complex_eigenvalues();
        let scale = 1.0 + self.m.abs().max();
        let mut values = Vec::with_capacity(eig.len());
        for z in eig.iter() {
            if z.im.abs() > 1e-8 * scale {
                return Err(Error::DegenerateSpectrum(format!("non-real eigenvalue {:.6}{:+.6}i", z.re, z.im)));
            }
            let mut x = z.re;
            for _ in 0..3 {
                let (p, dp) = self.char_poly(x);
                if dp == 0.0 || !(p / dp).is_finite() {
                    break;
                }
                x -= p / dp;
            }
            values.push(x);
        }
        values.sort_by(|x, y| y.total_cmp(x));
        let min_gap = values.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
        Ok(Spectrum { values, min_gap })
    }

    /// Eigenvector for `λ`, normalized to first entry 1.
    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.m.nrows();
        let mut v = vec![0.0; n];
        v[0] = 1.0;
        for i in 0..n - 1 {
            let prev = if i > 0 { self.a[i - 1] * v[i - 1] } else { 0.0 };
            v[i + 1] = -(prev + (self.m[(i, i)] - lambda) * v[i]);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub min_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpMethod {
    Eigen,
    ScalingSquaring,
}

/// One Cauchy–Binet term `c_S·exp(Σ_{s∈S} φ(λ_s))`.
#[derive(Debug, Clone)]
struct Term {
    coeff: f64,
    subset: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TauEvaluator {
    lax: LaxMatrixA,
    spectrum: Spectrum,
    method: ExpMethod,
    terms: Vec<Vec<Term>>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl TauEvaluator {
    pub fn new(lax: &LaxMatrixA) -> Result<Self> {
        let spectrum = lax.spectrum()?;
        let n = lax.m.nrows();
        let method = if spectrum.min_gap > SPECTRAL_GAP { ExpMethod::Eigen } else { ExpMethod::ScalingSquaring };
        log::debug!("exp(tL0): {method:?}, eigenvalue gap {:.3e}", spectrum.min_gap);
        let mut terms = Vec::new();
        if method == ExpMethod::Eigen {
            let mut v = DMatrix::zeros(n, n);
            for (c, &lam) in spectrum.values.iter().enumerate() {
                for (r, x) in lax.eigenvector(lam).into_iter().enumerate() {
                    v[(r, c)] = x;
                }
            }
            let vinv = v.clone().try_inverse().ok_or_else(|| Error::DegenerateSpectrum("eigenvector matrix is singular".into()))?;
            for j in 1..n {
                let rows: Vec<usize> = (0..j).collect();
                terms.push(
                    subsets(n, j)
                        .into_iter()
                        .map(|s| {
                            let left = v.select_rows(&rows).select_columns(&s).determinant();
                            let right = vinv.select_rows(&s).select_columns(&rows).determinant();
                            Term { coeff: left * right, subset: s }
                        })
                        .filter(|t| t.coeff != 0.0)
                        .collect(),
                );
            }
        }
        Ok(TauEvaluator { lax: lax.clone(), spectrum, method, terms })
    }

    pub fn method(&self) -> ExpMethod {
        self.method
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn lax(&self) -> &LaxMatrixA {
        &self.lax
    }

    fn phi(&self, times: &[f64], lambda: f64) -> f64 {
        let mut p = 1.0;
        times
            .iter()
            .map(|t| {
                p *= lambda;
                t * p
            })
            .sum()
    }

    /// `τ_j = mantissa · e^{exponent}`, `1 ≤ j ≤ l`; the split avoids overflow far from `t = 0`.
    pub fn scaled(&self, j: usize, times: &[f64]) -> (f64, f64) {
        assert!(j >= 1 && j <= self.lax.rank(), "tau index {j} out of range");
        match self.method {
            ExpMethod::Eigen => {
                let phis: Vec<f64> = self.spectrum.values.iter().map(|&l| self.phi(times, l)).collect();
                let ex: Vec<f64> = self.terms[j - 1].iter().map(|t| t.subset.iter().map(|&s| phis[s]).sum()).collect();
                let top = ex.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let m = self.terms[j - 1].iter().zip(&ex).map(|(t, e)| t.coeff * (e - top).exp()).sum();
                (m, top)
            }
            ExpMethod::ScalingSquaring => {
                let n = self.lax.m.nrows();
                let mut gen = DMatrix::zeros(n, n);
                let mut p = DMatrix::identity(n, n);
                for t in times {
                    p = &p * &self.lax.m;
                    gen += &p * *t;
                }
                let g = gen.exp();
                (g.view((0, 0), (j, j)).determinant(), 0.0)
            }
        }
    }

    pub fn tau(&self, j: usize, times: &[f64]) -> f64 {
        let (m, e) = self.scaled(j, times);
        m * e.exp()
    }

    /// `[τ_1, …, τ_l]` at the given times `(t₁, t₂, …)`.
    pub fn taus(&self, times: &[f64]) -> Vec<f64> {
        (1..=self.lax.rank()).map(|j| self.tau(j, times)).collect()
    }

    /// `b_k(t) = d/dt log τ_k` along the `t₁` flow.
    pub fn b_from_tau(&self, k: usize, t: f64) -> f64 {
        match self.method {
            ExpMethod::Eigen => {
                let lam = &self.spectrum.values;
                let ex: Vec<(f64, f64, f64)> = self.terms[k - 1]
                    .iter()
                    .map(|term| {
                        let rate: f64 = term.subset.iter().map(|&s| lam[s]).sum();
                        (term.coeff, rate * t, rate)
                    })
                    .collect();
                let top = ex.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
                let (num, den) = ex.iter().fold((0.0, 0.0), |(n, d), (c, e, r)| {
                    let w = c * (e - top).exp();
                    (n + w * r, d + w)
                });
                num / den
            }
            ExpMethod::ScalingSquaring => {
                let h = 1e-5;
                ((self.tau(k, &[t + h]).abs()).ln() - (self.tau(k, &[t - h]).abs()).ln()) / (2.0 * h)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub j: usize,
    pub count: usize,
    /// Zeros refined by bisection to 1e-10.
    pub crossings: Vec<f64>,
    pub window: f64,
    pub grid: usize,
}

fn sign_at(ev: &TauEvaluator, j: usize, t: f64) -> f64 {
    ev.scaled(j, &[t]).0.signum()
}

fn crossings_on_grid(ev: &TauEvaluator, j: usize, window: f64, grid: usize) -> Vec<(f64, f64)> {
    let ts: Vec<f64> = (0..grid).map(|i| -window + 2.0 * window * i as f64 / (grid - 1) as f64).collect();
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &t in &ts {
        let s = sign_at(ev, j, t);
        if s == 0.0 {
            continue;
        }
        if let Some((pt, ps)) = prev {
            if ps != s {
                out.push((pt, t));
            }
        }
        prev = Some((t, s));
    }
    out
}

/// Sign changes of `τ_j` on `[−window, window]`, checked against a grid of twice the density.
pub fn count_zero_crossings(ev: &TauEvaluator, j: usize, window: f64, grid: usize) -> Result<CrossingReport> {
    if j == 0 || j > ev.lax.rank() {
        return Err(Error::IndexOutOfRange { index: j, dim: ev.lax.rank() });
    }
    if grid < 3 || !(window > 0.0) {
        return Err(Error::InvalidArgument("need grid >= 3 and a positive window".into()));
    }
    let coarse = crossings_on_grid(ev, j, window, grid);
    let fine = crossings_on_grid(ev, j, window, 2 * grid - 1);
    if coarse.len() != fine.len() {
        return Err(Error::GridUnstable { coarse: coarse.len(), fine: fine.len() });
    }
    let crossings = fine
        .iter()
        .map(|&(mut lo, mut hi)| {
            let s_lo = sign_at(ev, j, lo);
            while hi - lo > BISECTION_TOL {
                let mid = 0.5 * (lo + hi);
                let s = sign_at(ev, j, mid);
                if s == 0.0 {
                    return mid;
                }
                if s == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect::<Vec<_>>();
    Ok(CrossingReport { j, count: crossings.len(), crossings, window, grid })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignsVsEta {
    pub lie_type: String,
    pub signs: String,
    pub eta_longest: usize,
    pub crossings: Vec<CrossingReport>,
    pub total: usize,
    pub agrees: bool,
}

/// Total τ zero-crossings on a wide window against `η(w*, ε)` for `ε = sgn a(0)`.
pub fn signs_vs_eta_report(lax: &LaxMatrixA, window: f64, grid: usize) -> Result<SignsVsEta> {
    let ev = TauEvaluator::new(lax)?;
    let ty = lax.lie_type();
    let group = WeylGroup::generate(ty)?;
    let eps = lax.signs();
    let eta_longest = eta(&group, group.longest_element(), &eps)?;
    let crossings = (1..=lax.rank()).map(|j| count_zero_crossings(&ev, j, window, grid)).collect::<Result<Vec<_>>>()?;
    let total = crossings.iter().map(|c| c.count).sum();
    Ok(SignsVsEta { lie_type: ty.to_string(), signs: eps.to_string(), eta_longest, crossings, total, agrees: total == eta_longest })
}
