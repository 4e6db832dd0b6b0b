//! Cartan data for the finite simple types and the untwisted affine family `A_l^(1)`.
//!
//! Cartan matrices follow the convention `C[i][j] = α_i(h_{α_j}) = 2(α_i, α_j)/(α_j, α_j)`,
//! so that the simple reflections act on roots by `s_i(α_j) = α_j − C[j][i] α_i`.
//! With this convention
//!
//! | type | matrix |
//! |------|--------|
//! | B2   | `[[2,-2],[-1,2]]` |
//! | C2   | `[[2,-1],[-2,2]]` |
//! | G2   | `[[2,-1],[-3,2]]` |
//!
//! Every other type uses Bourbaki node numbering (`α_l` short in `B_l`, long in `C_l`,
//! the branch node of `D_l` is `l-2`, node 2 of `E_l` hangs off node 4, `α_1, α_2` long in `F_4`).
//! All indices in this crate are zero-based: node `i` here is `α_{i+1}` in the usual notation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

/// A series letter, a rank and an affine flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LieType {
    series: Series,
    rank: usize,
    affine: bool,
}

impl LieType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if !ok {
            return Err(Error::InvalidType(format!(
                "{}{} is not a valid rank for series {}",
                series.letter(),
                rank,
                series.letter()
            )));
        }
        Ok(LieType { series, rank, affine: false })
    }

    /// Untwisted affine `A_l^(1)`; the only affine family supported.
    pub fn affine_a(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidType("A0^(1)".into()));
        }
        Ok(LieType { series: Series::A, rank, affine: true })
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_affine(&self) -> bool {
        self.affine
    }

    /// Number of nodes of the (extended, when affine) Dynkin diagram.
    pub fn node_count(&self) -> usize {
        if self.affine {
            self.rank + 1
        } else {
            self.rank
        }
    }

    fn require_finite(&self) -> Result<()> {
        if self.affine {
            Err(Error::UnsupportedType {
                ty: self.to_string(),
                reason: "affine type where a finite type is required (use extended_cartan)".into(),
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)?;
        if self.affine {
            write!(f, "^(1)")?;
        }
        Ok(())
    }
}

impl FromStr for LieType {
    type Err = Error;

    /// Accepts `B3`, `g2`, and for the affine family `A2^(1)`, `A2(1)` or `A2~`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| Error::InvalidType(s.into()))?;
        let series = match letter.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return Err(Error::InvalidType(s.into())),
        };
        let rest = chars.as_str();
        let (digits, suffix) = match rest.find(|c: char| !c.is_ascii_digit()) {
            Some(pos) => rest.split_at(pos),
            None => (rest, ""),
        };
        let rank: usize = digits.parse().map_err(|_| Error::InvalidType(s.into()))?;
        match suffix {
            "" => LieType::new(series, rank),
            "^(1)" | "(1)" | "~" if series == Series::A => LieType::affine_a(rank),
            _ => Err(Error::InvalidType(format!(
                "{s}: only untwisted affine A^(1) is supported"
            ))),
        }
    }
}

/// Interface shared by finite and extended Cartan matrices, used by the sign dynamics.
pub trait CartanLike {
    fn size(&self) -> usize;
    fn entry(&self, i: usize, j: usize) -> i64;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// Validates the generalized Cartan matrix axioms and (finite type) invertibility.
    pub fn from_entries(entries: Vec<Vec<i64>>) -> Result<Self> {
        validate_generalized(&entries)?;
        let m = CartanMatrix { entries };
        if rational_determinant(&m.as_rational()).is_zero() {
            return Err(Error::InvalidArgument("Cartan matrix is singular".into()));
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn transpose(&self) -> CartanMatrix {
        let n = self.rank();
        CartanMatrix {
            entries: (0..n).map(|i| (0..n).map(|j| self.entries[j][i]).collect()).collect(),
        }
    }

    pub fn as_rational(&self) -> Vec<Vec<BigRational>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect()
    }

    pub fn determinant(&self) -> BigRational {
        rational_determinant(&self.as_rational())
    }

    /// Exact inverse over the rationals.
    pub fn inverse(&self) -> Vec<Vec<BigRational>> {
        rational_inverse(&self.as_rational()).expect("finite Cartan matrices are invertible")
    }

    /// Positive weights `κ_i` (smallest integers) such that `diag(κ)·C` is symmetric.
    pub fn symmetrizer(&self) -> Vec<i64> {
        let n = self.rank();
        let mut kappa: Vec<Option<BigRational>> = vec![None; n];
        kappa[0] = Some(BigRational::one());
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && self.entries[i][j] != 0 && kappa[j].is_none() {
                    let ki = kappa[i].clone().unwrap();
                    let v = ki * BigRational::new(self.entries[i][j].into(), self.entries[j][i].into());
                    kappa[j] = Some(v);
                    stack.push(j);
                }
            }
        }
        let kappa: Vec<BigRational> = kappa.into_iter().map(|k| k.unwrap_or_else(BigRational::one)).collect();
        let lcm = kappa
            .iter()
            .fold(BigInt::one(), |acc, k| num_integer::Integer::lcm(&acc, k.denom()));
        let ints: Vec<BigInt> = kappa.iter().map(|k| (k * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
        ints.iter().map(|x| (x / &g).to_i64().unwrap()).collect()
    }
}

impl CartanLike for CartanMatrix {
    fn size(&self) -> usize {
        self.rank()
    }
    fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }
}

/// Extended Cartan matrix, nodes indexed `0..=l` with node 0 the affine node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedCartanMatrix {
    entries: Vec<Vec<i64>>,
    marks: Vec<i64>,
}

impl ExtendedCartanMatrix {
    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Null vector `δ` with `Ĉ·δ = 0` (all ones for `A_l^(1)`).
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    pub fn null_vector_residual(&self) -> Vec<i64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(&self.marks).map(|(a, m)| a * m).sum())
            .collect()
    }
}

impl CartanLike for ExtendedCartanMatrix {
    fn size(&self) -> usize {
        self.entries.len()
    }
    fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }
}

fn validate_generalized(entries: &[Vec<i64>]) -> Result<()> {
    let n = entries.len();
    if n == 0 || entries.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("Cartan matrix must be square and nonempty".into()));
    }
    for i in 0..n {
        if entries[i][i] != 2 {
            return Err(Error::InvalidArgument(format!("diagonal entry {i} is not 2")));
        }
        for j in 0..n {
            if i != j {
                let (a, b) = (entries[i][j], entries[j][i]);
                if !(-3..=0).contains(&a) || ((a == 0) != (b == 0)) {
                    return Err(Error::InvalidArgument(format!(
                        "entries ({i},{j})={a} and ({j},{i})={b} violate the Cartan axioms"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Cartan matrix of a finite type.
pub fn cartan_matrix(ty: LieType) -> Result<CartanMatrix> {
    ty.require_finite()?;
    let l = ty.rank();
    let mut c = vec![vec![0i64; l]; l];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match ty.series() {
        Series::A | Series::B | Series::C => {
            for i in 0..l - 1 {
                link(i, i + 1);
            }
            if ty.series() == Series::B {
                c[l - 2][l - 1] = -2;
            } else if ty.series() == Series::C {
                c[l - 1][l - 2] = -2;
            }
        }
        Series::D => {
            for i in 0..l - 2 {
                link(i, i + 1);
            }
            link(l - 3, l - 1);
        }
        Series::E => {
            link(0, 2);
            link(2, 3);
            link(1, 3);
            for i in 3..l - 1 {
                link(i, i + 1);
            }
        }
        Series::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
            c[1][2] = -2;
        }
        Series::G => {
            c[0][1] = -1;
            c[1][0] = -3;
        }
    }
    CartanMatrix::from_entries(c)
}

/// Extended Cartan matrix of `A_l^(1)`: cyclic Dynkin diagram on `l+1` nodes.
pub fn extended_cartan(ty: LieType) -> Result<ExtendedCartanMatrix> {
    if !ty.is_affine() || ty.series() != Series::A {
        return Err(Error::UnsupportedType {
            ty: ty.to_string(),
            reason: "extended Cartan matrices are available for A_l^(1) only".into(),
        });
    }
    let n = ty.rank() + 1;
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        c[i][i] = 2;
        if n == 2 {
            c[i][1 - i] = -2;
        } else {
            c[i][(i + 1) % n] = -1;
            c[i][(i + n - 1) % n] = -1;
        }
    }
    validate_generalized(&c)?;
    Ok(ExtendedCartanMatrix { entries: c, marks: vec![1; n] })
}

/// Langlands dual: the type whose Cartan matrix is the transpose.
pub fn langlands_dual(ty: LieType) -> LieType {
    let series = match ty.series() {
        Series::B => Series::C,
        Series::C => Series::B,
        s => s,
    };
    LieType { series, ..ty }
}

pub fn inverse_cartan(ty: LieType) -> Result<Vec<Vec<BigRational>>> {
    Ok(cartan_matrix(ty)?.inverse())
}

fn doubled_sums(rows: impl Iterator<Item = BigRational>) -> Result<Vec<u64>> {
    rows.map(|s| {
        let v = s * BigRational::from_integer(2.into());
        if !v.is_integer() || v.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "doubled inverse-Cartan sum {v} is not a nonnegative integer"
            )));
        }
        Ok(v.to_integer().to_u64().unwrap())
    })
    .collect()
}

/// `ν_k = 2 Σ_j (C⁻¹)_{k,j}`: vanishing order of `τ_k` along the `t_1` axis.
pub fn tau_multiplicities(ty: LieType) -> Result<Vec<u64>> {
    let inv = inverse_cartan(ty)?;
    doubled_sums(inv.iter().map(|row| row.iter().sum()))
}

/// `n_k = 2 Σ_j (C⁻¹)_{j,k}`: coefficient of `α_k` in the sum of positive roots.
pub fn dual_root_counts(ty: LieType) -> Result<Vec<u64>> {
    let inv = inverse_cartan(ty)?;
    let l = inv.len();
    doubled_sums((0..l).map(|k| inv.iter().map(|row| row[k].clone()).sum()))
}

/// Height `|2ρ| = Σ ν_k`.
pub fn two_rho_height(ty: LieType) -> Result<u64> {
    Ok(tau_multiplicities(ty)?.iter().sum())
}

/// Maximal compact subgroup `Ǩ` of the Langlands dual, as it enters the point count
/// `p(q) = q^{-r} |Ǩ(F_q)|` with `p(q) = Π (q^{d_i} - 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactDualInfo {
    pub dual_name: String,
    pub dual_dim: u32,
    pub dual_rank: usize,
    pub degrees: Vec<u32>,
}

impl CompactDualInfo {
    /// `r = dim Ǩ − Σ d_i`; computed, never stored.
    pub fn r(&self) -> i64 {
        self.dual_dim as i64 - self.degree_sum() as i64
    }

    pub fn degree_sum(&self) -> u32 {
        self.degrees.iter().sum()
    }

    /// `(dim + g)/2 = Σ d_i`: a Borel subalgebra of `Lie(Ǩ_C)` has dimension `Σ d_i`.
    pub fn borel_identity_holds(&self) -> bool {
        let twice = self.dual_dim as usize + self.dual_rank;
        twice.is_multiple_of(2) && twice / 2 == self.degree_sum() as usize
    }
}

pub fn compact_dual_info(ty: LieType) -> Result<CompactDualInfo> {
    ty.require_finite()?;
    let l = ty.rank() as u32;
    let evens = |upto: u32| (1..=upto / 2).map(|k| 2 * k);
    let doubled_evens = |upto: u32| evens(upto).flat_map(|d| [d, d]);
    let (name, dim, degrees): (String, u32, Vec<u32>) = match ty.series() {
        Series::A => {
            let degrees = if l.is_multiple_of(2) {
                evens(l).collect()
            } else {
                evens(l - 1).chain(std::iter::once(l.div_ceil(2))).collect()
            };
            (format!("SO({})", l + 1), (l + 1) * l / 2, degrees)
        }
        Series::B => (format!("U({l})"), l * l, (1..=l).collect()),
        Series::C => {
            let degrees = if l.is_multiple_of(2) {
                doubled_evens(l - 2).chain([l, l / 2]).collect()
            } else {
                doubled_evens(l - 1).chain(std::iter::once(l.div_ceil(2))).collect()
            };
            (format!("SO({l})xSO({})", l + 1), l * l, degrees)
        }
        Series::D => {
            let degrees = if l.is_multiple_of(2) {
                doubled_evens(l - 2).chain([l / 2, l / 2]).collect()
            } else {
                doubled_evens(l - 1).collect()
            };
            (format!("SO({l})xSO({l})"), l * (l - 1), degrees)
        }
        Series::E => match l {
            6 => ("Sp(4)".into(), 36, vec![2, 4, 6, 8]),
            7 => ("SU(8)".into(), 63, vec![2, 3, 4, 5, 6, 7, 8]),
            _ => ("SO(16)".into(), 120, vec![2, 4, 6, 8, 10, 12, 14, 8]),
        },
        Series::F => ("Sp(1)xSp(3)".into(), 24, vec![2, 2, 4, 6]),
        Series::G => ("SU(2)xSU(2)".into(), 6, vec![2, 2]),
    };
    let info = CompactDualInfo { dual_name: name, dual_dim: dim, dual_rank: degrees.len(), degrees };
    debug_assert!(info.r() >= 0, "dim table inconsistent for {ty}");
    Ok(info)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    pub rank: usize,
    /// Positive roots in the simple-root basis, ordered by height then lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        v
    }

    pub fn len(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positive_roots.is_empty()
    }
}

/// `s_i(β) = β − (Σ_j β_j C[j][i]) α_i`.
pub fn reflect_root(c: &CartanMatrix, i: usize, beta: &[i64]) -> Vec<i64> {
    let pairing: i64 = beta.iter().enumerate().map(|(j, b)| b * c.entry(j, i)).sum();
    let mut out = beta.to_vec();
    out[i] -= pairing;
    out
}

pub fn positive_roots(ty: LieType) -> Result<RootSystem> {
    let c = cartan_matrix(ty)?;
    Ok(root_closure(&c))
}

pub(crate) fn root_closure(c: &CartanMatrix) -> RootSystem {
    let l = c.rank();
    let simple: Vec<Vec<i64>> = (0..l)
        .map(|i| {
            let mut v = vec![0; l];
            v[i] = 1;
            v
        })
        .collect();
    let mut seen: std::collections::BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut frontier = simple;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for i in 0..l {
                let r = reflect_root(c, i, beta);
                if r.iter().all(|&x| x >= 0) && seen.insert(r.clone()) {
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    let mut positive_roots: Vec<Vec<i64>> = seen.into_iter().collect();
    positive_roots.sort_by(|a, b| {
        let (ha, hb): (i64, i64) = (a.iter().sum(), b.iter().sum());
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    RootSystem { rank: l, positive_roots }
}

pub(crate) fn rational_determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &pivot;
                for k in col..n {
                    let v = &f * &a[col][k];
                    a[r][k] -= v;
                }
            }
        }
    }
    det
}

pub(crate) fn rational_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        let pivot = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &pivot;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..2 * n {
                    let v = &f * &a[col][k];
                    a[r][k] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Node-numbering conventions, as a JSON document for the docs.
pub fn conventions_table() -> serde_json::Value {
    let sample = |s: &str| {
        let ty: LieType = s.parse().unwrap();
        json!({
            "type": s,
            "cartan": cartan_matrix(ty).unwrap().entries(),
            "dual": langlands_dual(ty).to_string(),
        })
    };
    json!({
        "convention": "C[i][j] = alpha_i(h_{alpha_j}) = 2(alpha_i,alpha_j)/(alpha_j,alpha_j); s_i(alpha_j) = alpha_j - C[j][i] alpha_i",
        "indexing": "zero-based; node i is alpha_{i+1}",
        "series": {
            "A": "chain 0-1-...-(l-1)",
            "B": "chain, alpha_{l} short (C[l-2][l-1] = -2)",
            "C": "chain, alpha_{l} long (C[l-1][l-2] = -2)",
            "D": "chain 0-...-(l-2), node l-1 attached to node l-3",
            "E": "Bourbaki: chain 0-2-3-4-..., node 1 attached to node 3",
            "F": "chain, alpha_1 alpha_2 long, C[1][2] = -2",
            "G": "alpha_1 short, C[1][0] = -3",
            "A^(1)": "cyclic on nodes 0..l, node 0 affine; A1^(1) = [[2,-2],[-2,2]]"
        },
        "samples": [sample("A2"), sample("B2"), sample("C2"), sample("G2"), sample("B3"), sample("D4"), sample("F4")],
    })
}
