//! Sign action of simple reflections on `{+,−}^l` and the blow-up count η.
//!
//! `s_i` sends `ε_j ↦ ε_j · ε_i^{−C[j][i]}`. A word is read left to right: the letter `j1`
//! acts first, then `j2`, and so on. η counts the letters at which the current sign at the
//! reflecting node is `−`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::CartanLike;
use crate::weyl::{ElementId, WeylGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i8(v: i8) -> Sign {
        if v < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignVector(signs)
    }

    pub fn all_minus(n: usize) -> Self {
        SignVector(vec![Sign::Minus; n])
    }

    pub fn all_plus(n: usize) -> Self {
        SignVector(vec![Sign::Plus; n])
    }

    /// Every vector of length `n`, ordered with bit `i` of the counter giving `ε_i = −`.
    pub fn all(n: usize) -> impl Iterator<Item = SignVector> {
        (0..1usize << n).map(move |code| {
            SignVector((0..n).map(|i| if code >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect())
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }

    pub fn is_all_minus(&self) -> bool {
        self.0.iter().all(|&s| s == Sign::Minus)
    }

    pub fn is_all_plus(&self) -> bool {
        self.0.iter().all(|&s| s == Sign::Plus)
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::InvalidSignVector(format!(
                "\"{self}\" has length {} but the Cartan matrix has size {n}",
                self.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    /// Accepts `+` and `-` (the Unicode minus `−` is tolerated).
    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' | '−' => Ok(Sign::Minus),
                other => Err(Error::InvalidSignVector(format!("unexpected character {other:?} in \"{s}\""))),
            })
            .collect::<Result<Vec<_>>>()?;
        if signs.is_empty() {
            return Err(Error::InvalidSignVector("empty sign vector".into()));
        }
        Ok(SignVector(signs))
    }
}

/// `s_i ε`, using the parity shortcut: `ε_j` flips iff `ε_i = −` and `C[j][i]` is odd.
pub fn reflect_sign<C: CartanLike + ?Sized>(c: &C, i: usize, eps: &SignVector) -> Result<SignVector> {
    let n = c.size();
    eps.check_len(n)?;
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    Ok(reflect_unchecked(c, i, eps))
}

fn reflect_unchecked<C: CartanLike + ?Sized>(c: &C, i: usize, eps: &SignVector) -> SignVector {
    if eps.get(i) == Sign::Plus {
        return eps.clone();
    }
    SignVector(
        eps.0
            .iter()
            .enumerate()
            .map(|(j, &s)| if c.entry(j, i) % 2 != 0 { s.flip() } else { s })
            .collect(),
    )
}

/// `s_i ε` evaluated literally as `ε_j · ε_i^{−C[j][i]}` with `ε = ±1`.
pub fn reflect_sign_by_exponent<C: CartanLike + ?Sized>(c: &C, i: usize, eps: &SignVector) -> Result<SignVector> {
    let n = c.size();
    eps.check_len(n)?;
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    let ei = eps.get(i).as_i8() as i64;
    Ok(SignVector(
        (0..n)
            .map(|j| {
                let exp = -c.entry(j, i);
                let factor = if exp >= 0 { ei.pow(exp as u32) } else { ei.pow((-exp) as u32) };
                Sign::from_i8((eps.get(j).as_i8() as i64 * factor) as i8)
            })
            .collect(),
    ))
}

/// Applies the letters of `word` left to right and returns the final vector (`w⁻¹ε`).
pub fn act_word<C: CartanLike + ?Sized>(c: &C, word: &[usize], eps: &SignVector) -> Result<SignVector> {
    Ok(walk(c, word, eps)?.1)
}

/// η of a word: the number of letters met while the sign at that node is `−`.
pub fn eta_word<C: CartanLike + ?Sized>(c: &C, word: &[usize], eps: &SignVector) -> Result<usize> {
    Ok(walk(c, word, eps)?.0)
}

fn walk<C: CartanLike + ?Sized>(c: &C, word: &[usize], eps: &SignVector) -> Result<(usize, SignVector)> {
    let n = c.size();
    eps.check_len(n)?;
    let mut cur = eps.clone();
    let mut eta = 0;
    for &i in word {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        if cur.get(i) == Sign::Minus {
            eta += 1;
        }
        cur = reflect_unchecked(c, i, &cur);
    }
    Ok((eta, cur))
}

/// η of a group element via its witness word.
pub fn eta(group: &WeylGroup, w: ElementId, eps: &SignVector) -> Result<usize> {
    eta_word(group.cartan(), &group.element(w).witness_word, eps)
}

/// η of `word`, after checking that it is a reduced word of some element.
pub fn eta_reduced(group: &WeylGroup, word: &[usize], eps: &SignVector) -> Result<usize> {
    let w = group.act_on_word(word)?;
    let length = group.element(w).length;
    if length != word.len() {
        return Err(Error::NonReducedWord { word: word.to_vec(), word_len: word.len(), length });
    }
    eta_word(group.cartan(), word, eps)
}

/// η over every reduced word of `w`; `Err(AssumptionViolated)` if two words disagree.
pub fn eta_all_words(group: &WeylGroup, w: ElementId, eps: &SignVector) -> Result<usize> {
    let mut value = None;
    for word in group.reduced_words(w) {
        let e = eta_word(group.cartan(), &word, eps)?;
        match value {
            None => value = Some(e),
            Some(v) if v != e => {
                return Err(Error::AssumptionViolated(format!(
                    "eta differs between reduced words of {}: {v} vs {e} on {}",
                    WeylGroup::word_string(&group.element(w).witness_word),
                    WeylGroup::word_string(&word)
                )))
            }
            _ => {}
        }
    }
    Ok(value.unwrap_or(0))
}

/// η(w, ε) and the transported sign `w⁻¹ε` for every element, indexed like the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaTable {
    pub base: SignVector,
    pub eta: Vec<usize>,
    pub transported: Vec<SignVector>,
}

impl EtaTable {
    pub fn max(&self) -> usize {
        self.eta.iter().copied().max().unwrap_or(0)
    }
}

/// Built along the canonical order: each witness word extends its parent's by one letter.
pub fn eta_table(group: &WeylGroup, eps: &SignVector) -> Result<EtaTable> {
    eps.check_len(group.rank())?;
    let n = group.len();
    let mut eta = vec![0usize; n];
    let mut transported = Vec::with_capacity(n);
    transported.push(eps.clone());
    for id in 1..n {
        let word = &group.element(id).witness_word;
        let last = *word.last().expect("non-identity has a nonempty word");
        let parent = group.right_mul_simple(id, last);
        debug_assert!(parent < id);
        let s = &transported[parent];
        eta[id] = eta[parent] + usize::from(s.get(last) == Sign::Minus);
        let next = reflect_unchecked(group.cartan(), last, s);
        transported.push(next);
    }
    Ok(EtaTable { base: eps.clone(), eta, transported })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{cartan_matrix, extended_cartan, LieType};
    use proptest::prelude::*;

    fn sv(s: &str) -> SignVector {
        s.parse().unwrap()
    }

    fn group(s: &str) -> WeylGroup {
        WeylGroup::generate(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn a2_reflections() {
        let c = cartan_matrix("A2".parse().unwrap()).unwrap();
        assert_eq!(reflect_sign(&c, 0, &sv("--")).unwrap(), sv("-+"));
        assert_eq!(reflect_sign(&c, 1, &sv("-+")).unwrap(), sv("-+"));
        assert_eq!(act_word(&c, &[0, 1], &sv("--")).unwrap(), sv("-+"));
        assert_eq!(act_word(&c, &[], &sv("--")).unwrap(), sv("--"));
        assert_eq!(reflect_sign(&c, 1, &sv("++")).unwrap(), sv("++"));
        assert_eq!(reflect_sign(&c, 2, &sv("++")).unwrap_err().code(), "index-out-of-range");
        assert_eq!(reflect_sign(&c, 0, &sv("+++")).unwrap_err().code(), "invalid-sign-vector");
    }

    #[test]
    fn parse_signs() {
        assert_eq!(sv("+−-"), SignVector::new(vec![Sign::Plus, Sign::Minus, Sign::Minus]));
        assert!("+x".parse::<SignVector>().is_err());
        assert!("".parse::<SignVector>().is_err());
        assert_eq!(sv("-+").to_string(), "-+");
        assert_eq!(SignVector::all(3).count(), 8);
    }

    #[test]
    fn a2_eta_values() {
        let g = group("A2");
        let m = sv("--");
        let s1 = g.act_on_word(&[0]).unwrap();
        let s12 = g.act_on_word(&[0, 1]).unwrap();
        assert_eq!(eta(&g, s1, &m).unwrap(), 1);
        assert_eq!(eta(&g, s12, &m).unwrap(), 1);
        assert_eq!(eta(&g, g.longest_element(), &m).unwrap(), 2);
        assert_eq!(eta(&g, 0, &m).unwrap(), 0);
        let table = eta_table(&g, &m).unwrap();
        assert_eq!(table.eta, vec![0, 1, 1, 1, 1, 2]);
    }

    #[test]
    fn g2_eta_table() {
        let g = group("G2");
        let table = eta_table(&g, &sv("--")).unwrap();
        let mut vals = table.eta.clone();
        vals.sort();
        assert_eq!(vals, vec![0, 1, 1, 1, 1, 2, 2, 3, 3, 3, 3, 4]);
        assert_eq!(table.eta[g.longest_element()], 4);
        let s121 = g.act_on_word(&[0, 1, 0]).unwrap();
        let s212 = g.act_on_word(&[1, 0, 1]).unwrap();
        assert_eq!((table.eta[s121], table.eta[s212]), (2, 2));
    }

    #[test]
    fn a1_tables() {
        let g = group("A1");
        assert_eq!(eta_table(&g, &sv("-")).unwrap().eta, vec![0, 1]);
        assert_eq!(eta_table(&g, &sv("+")).unwrap().eta, vec![0, 0]);
    }

    #[test]
    fn table_agrees_with_word_rule() {
        for t in ["B3", "C3", "D4", "F4"] {
            let g = group(t);
            for eps in SignVector::all(g.rank()).step_by(3) {
                let table = eta_table(&g, &eps).unwrap();
                for id in 0..g.len() {
                    let word = &g.element(id).witness_word;
                    assert_eq!(table.eta[id], eta_word(g.cartan(), word, &eps).unwrap());
                    assert_eq!(table.transported[id], act_word(g.cartan(), word, &eps).unwrap());
                }
            }
        }
    }

    #[test]
    fn non_reduced_word_rejected() {
        let g = group("A2");
        let err = eta_reduced(&g, &[0, 0], &sv("--")).unwrap_err();
        assert_eq!(err.code(), "non-reduced-word");
        assert_eq!(eta_reduced(&g, &[1, 0, 1], &sv("--")).unwrap(), 2);
    }

    #[test]
    fn eta_word_independent_small() {
        for t in ["A3", "B2", "G2"] {
            let g = group(t);
            for eps in SignVector::all(g.rank()) {
                for id in 0..g.len() {
                    assert_eq!(eta_all_words(&g, id, &eps).unwrap(), eta(&g, id, &eps).unwrap());
                }
            }
        }
    }

    #[test]
    fn total_eta_is_degree_sum() {
        let mut types: Vec<String> = (1..=5).map(|l| format!("A{l}")).collect();
        for l in 2..=5 {
            types.push(format!("B{l}"));
            types.push(format!("C{l}"));
        }
        types.extend(["D4", "D5", "G2", "F4", "E6"].map(String::from));
        for t in types {
            let ty: LieType = t.parse().unwrap();
            let g = WeylGroup::generate(ty).unwrap();
            let table = eta_table(&g, &SignVector::all_minus(g.rank())).unwrap();
            let info = crate::rootdata::compact_dual_info(ty).unwrap();
            assert_eq!(table.eta[g.longest_element()] as u32, info.degree_sum(), "{t}");
            assert_eq!(table.max(), table.eta[g.longest_element()], "{t}");
        }
    }

    fn cartans() -> Vec<Box<dyn CartanLike>> {
        let mut out: Vec<Box<dyn CartanLike>> = Vec::new();
        for t in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D3", "D4", "F4", "G2"] {
            out.push(Box::new(cartan_matrix(t.parse().unwrap()).unwrap()));
        }
        for t in ["A1^(1)", "A2^(1)", "A3^(1)"] {
            out.push(Box::new(extended_cartan(t.parse().unwrap()).unwrap()));
        }
        out
    }

    /// Order of `s_i s_j` from the Cartan product `C_ij C_ji`.
    fn coxeter_m(c: &dyn CartanLike, i: usize, j: usize) -> Option<usize> {
        match c.entry(i, j) * c.entry(j, i) {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    }

    #[test]
    fn involution_and_braid_relations_exhaustive() {
        for c in cartans() {
            let n = c.size();
            for eps in SignVector::all(n) {
                for i in 0..n {
                    let once = reflect_sign(c.as_ref(), i, &eps).unwrap();
                    assert_eq!(once, reflect_sign_by_exponent(c.as_ref(), i, &eps).unwrap());
                    assert_eq!(reflect_sign(c.as_ref(), i, &once).unwrap(), eps);
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let Some(m) = coxeter_m(c.as_ref(), i, j) else { continue };
                        let word: Vec<usize> = (0..2 * m).map(|k| if k % 2 == 0 { i } else { j }).collect();
                        assert_eq!(act_word(c.as_ref(), &word, &eps).unwrap(), eps);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn eta_increments_by_zero_or_one(word in proptest::collection::vec(0usize..4, 0..30), code in 0usize..16) {
            let c = cartan_matrix("B4".parse().unwrap()).unwrap();
            let eps = SignVector::all(4).nth(code).unwrap();
            let mut prev = 0;
            for k in 0..=word.len() {
                let e = eta_word(&c, &word[..k], &eps).unwrap();
                prop_assert!(e == prev || e == prev + 1);
                prop_assert!(e <= k);
                prev = e;
            }
        }

        #[test]
        fn word_then_reverse_is_identity(word in proptest::collection::vec(0usize..3, 0..20), code in 0usize..8) {
            let c = cartan_matrix("C3".parse().unwrap()).unwrap();
            let eps = SignVector::all(3).nth(code).unwrap();
            let there = act_word(&c, &word, &eps).unwrap();
            let rev: Vec<usize> = word.iter().rev().copied().collect();
            prop_assert_eq!(act_word(&c, &rev, &there).unwrap(), eps);
        }
    }
}
