//! τ-functions of the nilpotent Toda lattices for types A, B, C, D and G₂.
//!
//! `h_n` is the complete homogeneous polynomial in the times, `exp(Σ t_j x^j) = Σ h_n x^n`,
//! computed from `n·h_n = Σ_j j·t_j·h_{n−j}` over the active times. Every τ is a Wronskian
//! in `t₁`; since `∂h_n/∂t₁ = h_{n−1}` this is the Schur determinant `det(h_{i_α−β+1})`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{det, Poly};
use crate::error::{Error, Result};
use crate::rootdata::{cartan_matrix, tau_multiplicities, CartanLike, LieType, Series};

pub const TAU_RANK_CAP: usize = 6;

/// Polynomial ring variables: times `t_j` (weight `j`) and optionally the D-type flow `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vars {
    pub names: Vec<String>,
    pub weights: Vec<u32>,
    /// Time index `j` for each slot, `None` for `s`.
    pub time_index: Vec<Option<u32>>,
}

impl Vars {
    pub fn times(indices: &[u32]) -> Self {
        Vars {
            names: indices.iter().map(|j| format!("t{j}")).collect(),
            weights: indices.to_vec(),
            time_index: indices.iter().map(|&j| Some(j)).collect(),
        }
    }

    pub fn with_s(mut self, weight: u32) -> Self {
        self.names.push("s".into());
        self.weights.push(weight);
        self.time_index.push(None);
        self
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn slot_of_time(&self, j: u32) -> Option<usize> {
        self.time_index.iter().position(|&t| t == Some(j))
    }

    pub fn slot_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Slot of `t₁`, with respect to which all Wronskians are taken.
    pub fn t1(&self) -> usize {
        self.slot_of_time(1).expect("t1 is always active")
    }
}

/// `h_0, …, h_max`.
pub fn h_list(max: u32, vars: &Vars) -> Vec<Poly> {
    let n = vars.len();
    let mut h = vec![Poly::one(n)];
    for k in 1..=max {
        let mut acc = Poly::zero(n);
        for (slot, j) in vars.time_index.iter().enumerate() {
            let Some(j) = *j else { continue };
            if j <= k {
                let term = &Poly::var(n, slot) * &h[(k - j) as usize];
                acc = &acc + &term.scale(&BigRational::from_integer(j.into()));
            }
        }
        h.push(acc.scale(&BigRational::new(BigInt::one(), k.into())));
    }
    h
}

/// `h_k`; zero for `k < 0`.
pub fn h_k(k: i64, vars: &Vars) -> Poly {
    if k < 0 {
        return Poly::zero(vars.len());
    }
    h_list(k as u32, vars).pop().unwrap()
}

/// `det[∂^{β} f_α]` with derivatives in `t₁`, rows `α`, columns `β` (both from 0).
pub fn wronskian(fs: &[Poly], vars: &Vars) -> Poly {
    let t1 = vars.t1();
    let m: Vec<Vec<Poly>> = fs
        .iter()
        .map(|f| {
            let mut row = Vec::with_capacity(fs.len());
            let mut d = f.clone();
            for _ in 0..fs.len() {
                let next = d.derivative(t1);
                row.push(d);
                d = next;
            }
            row
        })
        .collect();
    det(&m, vars.len())
}

/// `S_{(i_1,…,i_k)} = det(h_{i_α−β+1})` for strictly increasing indices.
pub fn schur_wronskian(indices: &[u32], vars: &Vars) -> Result<Poly> {
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!("Schur indices {indices:?} must be strictly increasing")));
    }
    let max = indices.last().copied().unwrap_or(0);
    let h = h_list(max, vars);
    let m: Vec<Vec<Poly>> = indices
        .iter()
        .map(|&i| {
            (0..indices.len() as i64)
                .map(|b| {
                    let idx = i as i64 - b;
                    if idx < 0 {
                        Poly::zero(vars.len())
                    } else {
                        h[idx as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    Ok(det(&m, vars.len()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauSystem {
    pub lie_type: LieType,
    pub vars: Vars,
    pub taus: Vec<Poly>,
    /// Choices made during construction (square-root content, bordered-determinant sign).
    pub notes: Vec<String>,
}

impl TauSystem {
    pub fn product(&self) -> Poly {
        self.taus.iter().fold(Poly::one(self.vars.len()), |acc, t| &acc * t)
    }

    pub fn display(&self, k: usize) -> String {
        self.taus[k].display_with(&self.vars.names)
    }
}

pub fn tau_functions(ty: LieType) -> Result<TauSystem> {
    if ty.is_affine() || matches!(ty.series(), Series::E | Series::F) {
        return Err(Error::UnsupportedType {
            ty: ty.to_string(),
            reason: "nilpotent tau-functions are available for A, B, C, D and G2".into(),
        });
    }
    let l = ty.rank();
    if l > TAU_RANK_CAP {
        return Err(Error::CapExceeded { what: format!("tau-function rank for {ty}"), size: l, cap: TAU_RANK_CAP });
    }
    let lu = l as u32;
    let odd = |count: u32| (0..count).map(|k| 2 * k + 1).collect::<Vec<u32>>();
    let mut notes = Vec::new();
    let (vars, taus) = match ty.series() {
        Series::A => {
            let vars = Vars::times(&(1..=lu).collect::<Vec<_>>());
            let taus = (1..=lu)
                .map(|k| {
                    let idx: Vec<u32> = (lu - k + 1..=lu).collect();
                    let s = schur_wronskian(&idx, &vars)?;
                    Ok(if (k * (k - 1) / 2) % 2 == 1 { -&s } else { s })
                })
                .collect::<Result<Vec<_>>>()?;
            (vars, taus)
        }
        Series::B => {
            let vars = Vars::times(&odd(lu));
            let h = h_list(2 * lu, &vars);
            let block = |k: u32| wronskian(&(0..k).map(|j| h[(2 * lu - j) as usize].clone()).collect::<Vec<_>>(), &vars);
            let mut taus: Vec<Poly> = (1..lu).map(block).collect();
            let (kernel, negated, root) = block(lu).sqrt_up_to_content()?;
            notes.push(format!(
                "tau_{l} = sqrt({}Wr(h_{}..h_{}) / {kernel})",
                if negated { "-" } else { "" },
                2 * l,
                l + 1
            ));
            taus.push(root);
            (vars, taus)
        }
        Series::C => {
            let vars = Vars::times(&odd(lu));
            let h = h_list(2 * lu - 1, &vars);
            let taus = (1..=lu)
                .map(|k| wronskian(&(0..k).map(|j| h[(2 * lu - 1 - j) as usize].clone()).collect::<Vec<_>>(), &vars))
                .collect();
            (vars, taus)
        }
        Series::G => {
            let vars = Vars::times(&[1, 5]);
            let h = h_list(6, &vars);
            // The displayed τ₂ is Wr(h₅, h₆) itself; its stated prefactor −1 conflicts with the display.
            let taus = vec![h[6].clone(), wronskian(&[h[5].clone(), h[6].clone()], &vars)];
            (vars, taus)
        }
        Series::D => d_type(lu, &mut notes)?,
        Series::E | Series::F => unreachable!(),
    };
    Ok(TauSystem { lie_type: ty, vars, taus, notes })
}

fn d_type(l: u32, notes: &mut Vec<String>) -> Result<(Vars, Vec<Poly>)> {
    let vars = Vars::times(&(0..l - 1).map(|k| 2 * k + 1).collect::<Vec<_>>()).with_s(l - 1);
    let n = vars.len();
    let s = Poly::var(n, vars.slot_of("s").unwrap());
    let t1 = vars.t1();
    let h = h_list(2 * l - 2, &vars);
    let two = BigRational::from_integer(2.into());
    let f = if l.is_multiple_of(2) {
        &(&s * &h[(l - 1) as usize]) + &h[(2 * l - 2) as usize].scale(&two)
    } else {
        &(&s * &s) + &h[(2 * l - 2) as usize].scale(&two)
    };
    let g = &s + &h[(l - 1) as usize];
    let fd: Vec<Poly> = (0..2 * l).map(|m| f.nth_derivative(t1, m)).collect();
    let gd: Vec<Poly> = (0..l).map(|m| g.nth_derivative(t1, m)).collect();
    let hankel = |k: usize| -> Poly {
        let m: Vec<Vec<Poly>> = (0..k).map(|r| (0..k).map(|c| fd[r + c].clone()).collect()).collect();
        det(&m, n)
    };
    let mut taus: Vec<Poly> = (1..=(l as usize - 2)).map(hankel).collect();
    let last_pair = hankel(l as usize - 1);
    let lu = l as usize;
    let mut bordered: Vec<Vec<Poly>> = (0..lu)
        .map(|r| {
            (0..lu)
                .map(|c| match (r < lu - 1, c < lu - 1) {
                    (true, true) => fd[r + c].clone(),
                    (true, false) => gd[r].clone(),
                    (false, true) => gd[c].clone(),
                    (false, false) => Poly::zero(n),
                })
                .collect()
        })
        .collect();
    if l % 2 == 1 {
        bordered[lu - 1][lu - 1] = Poly::one(n);
    }
    let bdet = det(&bordered, n);
    let mut found = None;
    for sign in [1i64, -1] {
        let candidate = if sign == 1 { bdet.clone() } else { -&bdet };
        if let Ok(root) = candidate.sqrt() {
            notes.push(format!("tau_{l}^2 = {}(bordered determinant)", if sign == 1 { "+" } else { "-" }));
            log::debug!("D{l}: bordered determinant is a square with sign {sign}");
            found = Some(root);
            break;
        }
    }
    let tau_l = match found {
        Some(r) => r,
        None => {
            let (kernel, negated, root) = bdet.sqrt_up_to_content()?;
            notes.push(format!(
                "tau_{l}^2 = {}(bordered determinant)/{kernel}",
                if negated { "-" } else { "+" }
            ));
            root
        }
    };
    let tau_lm1 = last_pair.exact_div(&tau_l)?;
    taus.push(tau_lm1);
    taus.push(tau_l);
    Ok((vars, taus))
}

/// Lowest total degree (every variable has degree 1).
pub fn minimal_degree(p: &Poly) -> Result<u32> {
    p.min_degree()
}

pub fn minimal_degrees(sys: &TauSystem) -> Result<Vec<u32>> {
    sys.taus.iter().map(minimal_degree).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentCone {
    /// Lowest homogeneous part `F_d` of `Π τ_k`.
    pub f_d: Poly,
    pub degree: u32,
    pub sum_of_minimal_degrees: u32,
    /// True when the lowest parts of the τ's multiply to zero, so `d` exceeds the sum.
    pub cancellation: bool,
}

pub fn tangent_cone(sys: &TauSystem) -> Result<TangentCone> {
    let product = sys.product();
    let degree = product.min_degree()?;
    let mins = minimal_degrees(sys)?;
    let sum: u32 = mins.iter().sum();
    let lowest = sys
        .taus
        .iter()
        .zip(&mins)
        .fold(Poly::one(sys.vars.len()), |acc, (t, &d)| &acc * &t.homogeneous_part(d));
    let cancellation = lowest.is_zero();
    if cancellation {
        log::warn!("{}: lowest parts of the tau-functions cancel in the product", sys.lie_type);
    }
    Ok(TangentCone { f_d: product.homogeneous_part(degree), degree, sum_of_minimal_degrees: sum, cancellation })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HirotaFit {
    pub k: usize,
    pub constant: BigRational,
    pub residual: Poly,
}

/// Fits `τ_k τ_k'' − (τ_k')² = a·Π_{j≠k} τ_j^{−C[k][j]}` (derivatives in `t₁`, `k` zero-based).
pub fn hirota_fit(sys: &TauSystem, k: usize) -> Result<HirotaFit> {
    let c = cartan_matrix(sys.lie_type)?;
    if k >= sys.taus.len() {
        return Err(Error::IndexOutOfRange { index: k, dim: sys.taus.len() });
    }
    let t1 = sys.vars.t1();
    let tau = &sys.taus[k];
    let d1 = tau.derivative(t1);
    let d2 = d1.derivative(t1);
    let lhs = &(tau * &d2) - &(&d1 * &d1);
    let mut rhs = Poly::one(sys.vars.len());
    for (j, tj) in sys.taus.iter().enumerate() {
        if j != k {
            let e = -c.entry(k, j);
            if e < 0 {
                return Err(Error::InvalidArgument("Cartan off-diagonal entry is positive".into()));
            }
            rhs = &rhs * &tj.pow(e as u32);
        }
    }
    let constant = match rhs.leading_term() {
        Some((m, rc)) => lhs.coeff(m) / rc,
        None => BigRational::zero(),
    };
    let residual = &lhs - &rhs.scale(&constant);
    Ok(HirotaFit { k, constant, residual })
}

/// As [`hirota_fit`], but a nonzero residual is an error.
pub fn hirota_residual(sys: &TauSystem, k: usize) -> Result<HirotaFit> {
    let fit = hirota_fit(sys, k)?;
    if !fit.residual.is_zero() {
        return Err(Error::NoConstantFits { k: k + 1, residual_terms: fit.residual.len() });
    }
    Ok(fit)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuCheck {
    pub expected: u64,
    pub observed: Option<u64>,
    pub ok: bool,
}

/// Vanishing order of `τ_k(t₁, 0, …, 0)` at `t₁ = 0` against `ν_k`.
pub fn nu_check(sys: &TauSystem) -> Result<Vec<NuCheck>> {
    let nu = tau_multiplicities(sys.lie_type)?;
    let zeros = vec![BigRational::zero(); sys.vars.len()];
    Ok(sys
        .taus
        .iter()
        .zip(nu)
        .map(|(t, expected)| {
            let coeffs = t.restrict(sys.vars.t1(), &zeros);
            let observed = coeffs.iter().position(|c| !c.is_zero()).map(|k| k as u64);
            NuCheck { expected, observed, ok: observed == Some(expected) }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn poly(vars: &Vars, terms: &[(&[(&str, u32)], i64, i64)]) -> Poly {
        Poly::from_terms(
            vars.len(),
            terms.iter().map(|(mono, n, d)| {
                let mut m = vec![0; vars.len()];
                for (name, e) in mono.iter() {
                    m[vars.slot_of(name).unwrap()] = *e;
                }
                (m, q(*n, *d))
            }),
        )
    }

    fn sys(s: &str) -> TauSystem {
        tau_functions(s.parse().unwrap()).unwrap()
    }

    /// Oracle: `h_k` as the sum over partitions `Σ j·i_j = k` of `Π t_j^{i_j}/i_j!`.
    fn h_by_partitions(k: u32, vars: &Vars) -> Poly {
        fn rec(slot: usize, left: u32, vars: &Vars, m: &mut Vec<u32>, coef: BigRational, out: &mut Poly) {
            if slot == vars.len() {
                if left == 0 {
                    *out = &*out + &Poly::from_terms(vars.len(), [(m.clone(), coef)]);
                }
                return;
            }
            let Some(j) = vars.time_index[slot] else {
                rec(slot + 1, left, vars, m, coef, out);
                return;
            };
            let mut i = 0;
            let mut fact = BigRational::one();
            while i * j <= left {
                m[slot] = i;
                rec(slot + 1, left - i * j, vars, m, &coef / &fact, out);
                i += 1;
                fact *= BigRational::from_integer(i.into());
            }
            m[slot] = 0;
        }
        let mut out = Poly::zero(vars.len());
        rec(0, k, vars, &mut vec![0; vars.len()], BigRational::one(), &mut out);
        out
    }

    #[test]
    fn h_matches_partition_oracle() {
        let all = Vars::times(&(1..=8).collect::<Vec<_>>());
        let odd = Vars::times(&[1, 3, 5, 7]);
        for k in 0..=8 {
            assert_eq!(h_k(k as i64, &all), h_by_partitions(k, &all));
            assert_eq!(h_k(k as i64, &odd), h_by_partitions(k, &odd));
        }
        assert!(h_k(-1, &all).is_zero());
        let v3 = Vars::times(&[1, 2, 3]);
        assert_eq!(h_k(2, &v3), poly(&v3, &[(&[("t2", 1)], 1, 1), (&[("t1", 2)], 1, 2)]));
        assert_eq!(
            h_k(3, &v3),
            poly(&v3, &[(&[("t3", 1)], 1, 1), (&[("t1", 1), ("t2", 1)], 1, 1), (&[("t1", 3)], 1, 6)])
        );
    }

    #[test]
    fn h_derivative_shifts_index() {
        let vars = Vars::times(&(1..=12).collect::<Vec<_>>());
        let h = h_list(12, &vars);
        for n in 1..=12 {
            assert_eq!(h[n].derivative(0), h[n - 1]);
        }
    }

    #[test]
    fn schur_small_cases() {
        let v = Vars::times(&[1, 2]);
        assert_eq!(schur_wronskian(&[2], &v).unwrap(), h_k(2, &v));
        let s12 = schur_wronskian(&[1, 2], &v).unwrap();
        assert_eq!(-&s12, poly(&v, &[(&[("t2", 1)], 1, 1), (&[("t1", 2)], -1, 2)]));
        assert!(schur_wronskian(&[2, 1], &v).is_err());
        let g = Vars::times(&[1, 5]);
        let s56 = schur_wronskian(&[5, 6], &g).unwrap();
        let want = poly(&g, &[(&[("t5", 2)], 1, 1), (&[("t5", 1), ("t1", 5)], -1, 40), (&[("t1", 10)], 1, 86400)]);
        assert_eq!(s56, want);
        // Determinant form agrees with the t1-Wronskian.
        let h = h_list(6, &g);
        assert_eq!(s56, wronskian(&[h[5].clone(), h[6].clone()], &g));
    }

    #[test]
    fn displayed_tau_functions() {
        let a2 = sys("A2");
        let v = &a2.vars;
        assert_eq!(a2.taus[0], poly(v, &[(&[("t2", 1)], 1, 1), (&[("t1", 2)], 1, 2)]));
        assert_eq!(a2.taus[1], poly(v, &[(&[("t2", 1)], 1, 1), (&[("t1", 2)], -1, 2)]));
        let b2 = sys("B2");
        let v = &b2.vars;
        assert_eq!(b2.taus[0], poly(v, &[(&[("t1", 1), ("t3", 1)], 1, 1), (&[("t1", 4)], 1, 24)]));
        assert_eq!(b2.taus[1], poly(v, &[(&[("t3", 1)], 1, 1), (&[("t1", 3)], -1, 12)]));
        let c2 = sys("C2");
        let v = &c2.vars;
        assert_eq!(c2.taus[0], poly(v, &[(&[("t3", 1)], 1, 1), (&[("t1", 3)], 1, 6)]));
        assert_eq!(c2.taus[1], poly(v, &[(&[("t1", 1), ("t3", 1)], 1, 1), (&[("t1", 4)], -1, 12)]));
        let g2 = sys("G2");
        let v = &g2.vars;
        assert_eq!(g2.taus[0], poly(v, &[(&[("t1", 1), ("t5", 1)], 1, 1), (&[("t1", 6)], 1, 720)]));
        assert_eq!(
            g2.taus[1],
            poly(v, &[(&[("t5", 2)], 1, 1), (&[("t5", 1), ("t1", 5)], -1, 40), (&[("t1", 10)], 1, 86400)])
        );
    }

    #[test]
    fn b3_last_tau() {
        let b3 = sys("B3");
        let v = &b3.vars;
        let want = poly(
            v,
            &[
                (&[("t1", 6)], 1, 1440),
                (&[("t1", 3), ("t3", 1)], -1, 24),
                (&[("t1", 1), ("t5", 1)], 1, 2),
                (&[("t3", 2)], -1, 2),
            ],
        );
        assert_eq!(b3.taus[2], want);
        assert!(b3.notes[0].contains("/ 2"), "{:?}", b3.notes);
    }

    #[test]
    fn unsupported_types() {
        assert_eq!(tau_functions("E6".parse().unwrap()).unwrap_err().code(), "unsupported-type");
        assert_eq!(tau_functions("F4".parse().unwrap()).unwrap_err().code(), "unsupported-type");
        assert_eq!(tau_functions("A7".parse().unwrap()).unwrap_err().code(), "cap-exceeded");
    }

    #[test]
    fn minimal_degree_lists() {
        let cases: &[(&str, &[u32])] = &[
            ("A1", &[1]),
            ("A2", &[1, 1]),
            ("A3", &[1, 2, 1]),
            ("A4", &[1, 2, 2, 1]),
            ("A5", &[1, 2, 3, 2, 1]),
            ("B2", &[2, 1]),
            ("B3", &[2, 2, 2]),
            ("B4", &[2, 2, 4, 2]),
            ("C2", &[1, 2]),
            ("C3", &[1, 2, 3]),
            ("C4", &[1, 2, 3, 4]),
            ("D4", &[2, 2, 2, 2]),
            ("D5", &[2, 2, 4, 2, 2]),
            ("G2", &[2, 2]),
        ];
        for (t, want) in cases {
            assert_eq!(minimal_degrees(&sys(t)).unwrap(), want.to_vec(), "{t}");
        }
        assert!(minimal_degree(&Poly::zero(2)).is_err());
    }

    #[test]
    fn tangent_cones() {
        let a2 = tangent_cone(&sys("A2")).unwrap();
        let v = sys("A2").vars;
        assert_eq!((a2.degree, a2.cancellation), (2, false));
        assert_eq!(a2.f_d, poly(&v, &[(&[("t2", 2)], 1, 1)]));
        let b2 = tangent_cone(&sys("B2")).unwrap();
        let v = sys("B2").vars;
        assert_eq!(b2.f_d, poly(&v, &[(&[("t1", 1), ("t3", 2)], 1, 1)]));
        assert_eq!(b2.degree, 3);
        let a1 = tangent_cone(&sys("A1")).unwrap();
        assert_eq!(a1.f_d, Poly::var(1, 0));
    }

    #[test]
    fn hirota_constants() {
        let a2 = sys("A2");
        assert_eq!(hirota_residual(&a2, 0).unwrap().constant, q(1, 1));
        let b2 = sys("B2");
        assert_eq!(hirota_residual(&b2, 0).unwrap().constant, q(-1, 1));
        assert_eq!(hirota_residual(&b2, 1).unwrap().constant, q(-1, 2));
        for t in ["A3", "B3", "C2", "C3", "D4", "G2"] {
            let s = sys(t);
            for k in 0..s.taus.len() {
                let fit = hirota_residual(&s, k).unwrap();
                assert!(!fit.constant.is_zero(), "{t} {k}");
            }
        }
        // A perturbed system has no fitting constant.
        let mut bad = sys("A2");
        bad.taus[1] = &bad.taus[1] + &Poly::var(2, 1);
        assert_eq!(hirota_residual(&bad, 0).unwrap_err().code(), "no-constant-fits");
    }

    #[test]
    fn nu_and_weights() {
        for t in ["A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D4", "G2"] {
            let s = sys(t);
            let checks = nu_check(&s).unwrap();
            assert!(checks.iter().all(|c| c.ok), "{t}: {checks:?}");
            let nu = tau_multiplicities(s.lie_type).unwrap();
            for (tau, n) in s.taus.iter().zip(nu) {
                assert_eq!(tau.weighted_degrees(&s.vars.weights), vec![n as u32], "{t}");
            }
        }
        let b2 = nu_check(&sys("B2")).unwrap();
        assert_eq!((b2[0].observed, b2[1].observed), (Some(4), Some(3)));
        let g2 = nu_check(&sys("G2")).unwrap();
        assert_eq!((g2[0].observed, g2[1].observed), (Some(6), Some(10)));
    }

    #[test]
    fn t1_degree_of_product_is_height() {
        for (t, want) in [("A2", 4), ("B2", 7), ("G2", 16), ("C3", 22), ("B3", 22)] {
            let s = sys(t);
            assert_eq!(s.product().degree_in(s.vars.t1()), Some(want), "{t}");
        }
    }
}
