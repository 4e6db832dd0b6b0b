//! Finite Weyl groups as permutation groups of the root list.
//!
//! Elements are enumerated breadth-first by right multiplication `w ↦ w·s_i`; each element
//! keeps the lexicographically smallest reduced word, and the canonical order is
//! (length, that word). Generation is deterministic regardless of the rayon pool size.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{cartan_matrix, reflect_root, root_closure, CartanMatrix, LieType, RootSystem, Series};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// Bytes per element, roughly: the root permutation (`u16` per root), the witness word
/// and the right-multiplication table. E7 (2 903 040 elements, 126 roots) needs about 1.2 GB.
pub fn memory_estimate_bytes(ty: LieType) -> Option<u128> {
    let order = closed_form_order(ty)?;
    let roots = 2 * positive_root_count(ty) as u128;
    let per = roots * 2 + positive_root_count(ty) as u128 + ty.rank() as u128 * 4 + 64;
    Some(order * per)
}

/// Textbook group orders, used only to refuse oversized groups before enumerating.
pub fn closed_form_order(ty: LieType) -> Option<u128> {
    if ty.is_affine() {
        return None;
    }
    let l = ty.rank() as u128;
    let fact = |n: u128| (1..=n).product::<u128>();
    Some(match ty.series() {
        Series::A => fact(l + 1),
        Series::B | Series::C => (1u128 << l) * fact(l),
        Series::D => (1u128 << (l - 1)) * fact(l),
        Series::E => match l {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        Series::F => 1152,
        Series::G => 12,
    })
}

fn positive_root_count(ty: LieType) -> usize {
    let l = ty.rank();
    match ty.series() {
        Series::A => l * (l + 1) / 2,
        Series::B | Series::C => l * l,
        Series::D => l * (l - 1),
        Series::E => [36, 63, 120][l - 6],
        Series::F => 24,
        Series::G => 6,
    }
}

pub type ElementId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylElement {
    /// Image of root `k` (index into [`WeylGroup::roots`]) under the element.
    pub perm: Vec<u16>,
    pub length: usize,
    /// Lexicographically smallest reduced word; letters are zero-based node indices.
    pub witness_word: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BruhatCover {
    pub lower: ElementId,
    pub upper: ElementId,
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    ty: LieType,
    cartan: CartanMatrix,
    roots: RootSystem,
    /// Positive roots followed by their negatives, in the same order.
    all_roots: Vec<Vec<i64>>,
    simple_perms: Vec<Vec<u16>>,
    simple_idx: Vec<usize>,
    elements: Vec<WeylElement>,
    index: HashMap<Vec<u16>, ElementId>,
    right_mul: Vec<Vec<u32>>,
}

impl WeylGroup {
    pub fn generate(ty: LieType) -> Result<Self> {
        Self::generate_with_cap(ty, DEFAULT_GROUP_CAP)
    }

    pub fn generate_with_cap(ty: LieType, cap: usize) -> Result<Self> {
        let cartan = cartan_matrix(ty)?;
        if let Some(order) = closed_form_order(ty) {
            if order > cap as u128 {
                return Err(Error::CapExceeded {
                    what: format!("Weyl group of {ty}"),
                    size: usize::try_from(order).unwrap_or(usize::MAX),
                    cap,
                });
            }
        }
        let mut g = Self::skeleton(ty, cartan);
        g.enumerate(cap)?;
        g.finish();
        Ok(g)
    }

    /// Rebuilds a group from stored witness words, checking that the words describe
    /// a complete, consistent enumeration. Used by the on-disk cache.
    pub fn from_witness_words(ty: LieType, words: &[Vec<usize>]) -> Result<Self> {
        let cartan = cartan_matrix(ty)?;
        let mut g = Self::skeleton(ty, cartan);
        let corrupt = |reason: String| Error::InvalidArgument(format!("stored words for {ty}: {reason}"));
        for word in words {
            if word.iter().any(|&i| i >= ty.rank()) {
                return Err(corrupt("letter out of range".into()));
            }
            let perm = g.perm_of_word(word);
            let length = g.count_inversions(&perm);
            if length != word.len() {
                return Err(corrupt(format!("word {word:?} is not reduced")));
            }
            if g.index.insert(perm.clone(), g.elements.len()).is_some() {
                return Err(corrupt(format!("duplicate element {word:?}")));
            }
            g.elements.push(WeylElement { perm, length, witness_word: word.clone() });
        }
        if let Some(order) = closed_form_order(ty) {
            if order != g.elements.len() as u128 {
                return Err(corrupt(format!("{} elements, expected {order}", g.elements.len())));
            }
        }
        let ordered = g
            .elements
            .windows(2)
            .all(|w| (w[0].length, &w[0].witness_word) < (w[1].length, &w[1].witness_word));
        if !ordered || g.elements.first().map(|e| e.length) != Some(0) {
            return Err(corrupt("elements are not in canonical order".into()));
        }
        g.finish();
        Ok(g)
    }

    fn skeleton(ty: LieType, cartan: CartanMatrix) -> Self {
        let roots = root_closure(&cartan);
        let mut all_roots = roots.positive_roots.clone();
        all_roots.extend(roots.positive_roots.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let lookup: HashMap<&Vec<i64>, u16> = all_roots.iter().enumerate().map(|(k, r)| (r, k as u16)).collect();
        let simple_perms = (0..cartan.rank())
            .map(|i| all_roots.iter().map(|r| lookup[&reflect_root(&cartan, i, r)]).collect())
            .collect();
        let simple_idx = (0..cartan.rank())
            .map(|i| {
                let alpha = roots.simple_root(i);
                roots.positive_roots.iter().position(|r| *r == alpha).expect("simple roots are positive roots")
            })
            .collect();
        WeylGroup {
            ty,
            cartan,
            roots,
            all_roots,
            simple_perms,
            simple_idx,
            elements: Vec::new(),
            index: HashMap::new(),
            right_mul: Vec::new(),
        }
    }

    fn enumerate(&mut self, cap: usize) -> Result<()> {
        let identity: Vec<u16> = (0..self.all_roots.len() as u16).collect();
        self.index.insert(identity.clone(), 0);
        self.elements.push(WeylElement { perm: identity, length: 0, witness_word: vec![] });
        let mut layer: Vec<ElementId> = vec![0];
        while !layer.is_empty() {
            let candidates: Vec<Vec<(Vec<u16>, usize)>> = layer
                .par_iter()
                .map(|&id| {
                    let w = &self.elements[id];
                    (0..self.rank())
                        .filter(|&i| !self.is_negative(w.perm[self.simple_root_index(i)]))
                        .map(|i| (compose(&w.perm, &self.simple_perms[i]), i))
                        .collect()
                })
                .collect();
            let mut next = Vec::new();
            for (&id, cands) in layer.iter().zip(candidates) {
                for (perm, i) in cands {
                    if self.index.contains_key(&perm) {
                        continue;
                    }
                    if self.elements.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: format!("Weyl group of {}", self.ty),
                            size: self.elements.len() + 1,
                            cap,
                        });
                    }
                    let parent = &self.elements[id];
                    let mut word = parent.witness_word.clone();
                    word.push(i);
                    let new_id = self.elements.len();
                    self.index.insert(perm.clone(), new_id);
                    self.elements.push(WeylElement { perm, length: parent.length + 1, witness_word: word });
                    next.push(new_id);
                }
            }
            layer = next;
        }
        Ok(())
    }

    fn finish(&mut self) {
        let right_mul = self
            .elements
            .par_iter()
            .map(|w| {
                (0..self.rank())
                    .map(|i| self.index[&compose(&w.perm, &self.simple_perms[i])] as u32)
                    .collect()
            })
            .collect();
        self.right_mul = right_mul;
        log::debug!("generated W({}) with {} elements", self.ty, self.elements.len());
    }

    fn perm_of_word(&self, word: &[usize]) -> Vec<u16> {
        let mut perm: Vec<u16> = (0..self.all_roots.len() as u16).collect();
        for &i in word {
            perm = compose(&perm, &self.simple_perms[i]);
        }
        perm
    }

    fn count_inversions(&self, perm: &[u16]) -> usize {
        perm[..self.n_positive()].iter().filter(|&&k| self.is_negative(k)).count()
    }

    pub fn lie_type(&self) -> LieType {
        self.ty
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    /// Positive roots then negatives; permutation entries index into this list.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.all_roots
    }

    pub fn n_positive(&self) -> usize {
        self.roots.positive_roots.len()
    }

    fn is_negative(&self, root: u16) -> bool {
        root as usize >= self.n_positive()
    }

    /// Position of `α_i` in the root list (the list is height-sorted, so this is not `i`).
    pub fn simple_root_index(&self, i: usize) -> usize {
        self.simple_idx[i]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, id: ElementId) -> &WeylElement {
        &self.elements[id]
    }

    pub fn identity(&self) -> ElementId {
        0
    }

    pub fn longest_element(&self) -> ElementId {
        self.elements.len() - 1
    }

    pub fn max_length(&self) -> usize {
        self.elements.last().map_or(0, |e| e.length)
    }

    pub fn id_of_perm(&self, perm: &[u16]) -> Option<ElementId> {
        self.index.get(perm).copied()
    }

    /// `w·s_i`.
    pub fn right_mul_simple(&self, id: ElementId, i: usize) -> ElementId {
        self.right_mul[id][i] as ElementId
    }

    pub fn multiply(&self, a: ElementId, b: ElementId) -> ElementId {
        self.index[&compose(&self.elements[a].perm, &self.elements[b].perm)]
    }

    pub fn inverse(&self, a: ElementId) -> ElementId {
        let perm = &self.elements[a].perm;
        let mut inv = vec![0u16; perm.len()];
        for (k, &v) in perm.iter().enumerate() {
            inv[v as usize] = k as u16;
        }
        self.index[&inv]
    }

    /// Evaluates an arbitrary (not necessarily reduced) word `s_{j1} s_{j2} ⋯`.
    pub fn act_on_word(&self, word: &[usize]) -> Result<ElementId> {
        let mut id = self.identity();
        for &i in word {
            if i >= self.rank() {
                return Err(Error::IndexOutOfRange { index: i, dim: self.rank() });
            }
            id = self.right_mul_simple(id, i);
        }
        Ok(id)
    }

    /// Nodes `i` with `l(w·s_i) < l(w)`.
    pub fn right_descents(&self, id: ElementId) -> Vec<usize> {
        let perm = &self.elements[id].perm;
        (0..self.rank()).filter(|&i| self.is_negative(perm[self.simple_root_index(i)])).collect()
    }

    /// Lazily enumerates every reduced word of `w` (depth-first on the last letter, deterministic order).
    pub fn reduced_words(&self, id: ElementId) -> ReducedWords<'_> {
        ReducedWords { group: self, stack: vec![(id, Vec::new())] }
    }

    pub fn all_reduced_words(&self, id: ElementId) -> Vec<Vec<usize>> {
        self.reduced_words(id).collect()
    }

    /// Reflections `t_β` for each positive root `β`, as `(root index, element)`.
    pub fn reflections(&self) -> Vec<(usize, ElementId)> {
        let mut found: Vec<Option<ElementId>> = vec![None; self.n_positive()];
        let simple_ids: Vec<ElementId> = (0..self.rank()).map(|i| self.right_mul_simple(0, i)).collect();
        for (u, el) in self.elements.iter().enumerate() {
            for (i, &si) in simple_ids.iter().enumerate() {
                let beta = el.perm[self.simple_root_index(i)] as usize;
                if beta < self.n_positive() && found[beta].is_none() {
                    found[beta] = Some(self.multiply(self.multiply(u, si), self.inverse(u)));
                }
            }
            if found.iter().all(Option::is_some) {
                break;
            }
        }
        found.into_iter().enumerate().map(|(k, t)| (k, t.expect("every positive root is W-conjugate to a simple root"))).collect()
    }

    /// All pairs `(w, w·t_β)` with `l(w·t_β) = l(w) + 1`, sorted.
    pub fn bruhat_covers(&self) -> Vec<BruhatCover> {
        let refl: Vec<&Vec<u16>> = self.reflections().into_iter().map(|(_, t)| &self.elements[t].perm).collect();
        let mut covers: Vec<BruhatCover> = (0..self.len())
            .into_par_iter()
            .flat_map_iter(|w| {
                let el = &self.elements[w];
                refl.iter()
                    .filter_map(move |t| {
                        let up = self.index[&compose(&el.perm, t)];
                        (self.elements[up].length == el.length + 1).then_some(BruhatCover { lower: w, upper: up })
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        covers.sort_unstable();
        covers
    }

    /// Witness words in canonical order, the on-disk representation.
    pub fn witness_words(&self) -> Vec<Vec<usize>> {
        self.elements.iter().map(|e| e.witness_word.clone()).collect()
    }

    /// `w(β)` for a root given in simple-root coordinates.
    pub fn apply_to_root(&self, id: ElementId, beta: &[i64]) -> Option<Vec<i64>> {
        let k = self.all_roots.iter().position(|r| r == beta)?;
        Some(self.all_roots[self.elements[id].perm[k] as usize].clone())
    }

    pub fn word_string(word: &[usize]) -> String {
        if word.is_empty() {
            "e".into()
        } else {
            word.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(if word.iter().any(|&i| i >= 9) { "." } else { "" })
        }
    }
}

fn compose(a: &[u16], b: &[u16]) -> Vec<u16> {
    b.iter().map(|&k| a[k as usize]).collect()
}

pub struct ReducedWords<'a> {
    group: &'a WeylGroup,
    stack: Vec<(ElementId, Vec<usize>)>,
}

impl Iterator for ReducedWords<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        while let Some((id, suffix)) = self.stack.pop() {
            if id == 0 {
                let mut word = suffix;
                word.reverse();
                return Some(word);
            }
            let mut descents = self.group.right_descents(id);
            descents.reverse();
            for i in descents {
                let mut s = suffix.clone();
                s.push(i);
                self.stack.push((self.group.right_mul_simple(id, i), s));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::generate(s.parse().unwrap()).unwrap()
    }

    fn fact(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn orders_match_textbook_values() {
        for l in 1..=5 {
            assert_eq!(group(&format!("A{l}")).len(), fact(l + 1));
        }
        for l in 2..=4 {
            assert_eq!(group(&format!("B{l}")).len(), (1 << l) * fact(l));
            assert_eq!(group(&format!("C{l}")).len(), (1 << l) * fact(l));
        }
        for l in 3..=5 {
            assert_eq!(group(&format!("D{l}")).len(), (1 << (l - 1)) * fact(l));
        }
        assert_eq!(group("G2").len(), 12);
        assert_eq!(group("F4").len(), 1152);
    }

    #[test]
    fn e6_order_and_longest() {
        let g = group("E6");
        assert_eq!(g.len(), 51_840);
        assert_eq!(g.max_length(), 36);
        assert_eq!(g.elements().iter().filter(|e| e.length == 36).count(), 1);
    }

    #[test]
    fn e8_refused_by_default() {
        let err = WeylGroup::generate("E8".parse().unwrap()).unwrap_err();
        assert_eq!(err.code(), "cap-exceeded");
        assert!(WeylGroup::generate_with_cap("A3".parse().unwrap(), 10).is_err());
    }

    #[test]
    fn longest_elements() {
        let a2 = group("A2");
        let w = a2.element(a2.longest_element());
        assert_eq!((w.length, w.witness_word.clone()), (3, vec![0, 1, 0]));
        let a1 = group("A1");
        assert_eq!(a1.element(a1.longest_element()).witness_word, vec![0]);
        assert_eq!(group("A3").max_length(), 6);
        let g2 = group("G2");
        assert_eq!(g2.max_length(), 6);
        for t in ["A4", "B3", "C4", "D4", "F4", "G2"] {
            let g = group(t);
            assert_eq!(g.max_length(), g.n_positive(), "{t}");
            assert_eq!(g.elements().iter().filter(|e| e.length == g.max_length()).count(), 1, "{t}");
        }
    }

    #[test]
    fn reduced_words_of_longest() {
        let a2 = group("A2");
        let words: BTreeSet<_> = a2.all_reduced_words(a2.longest_element()).into_iter().collect();
        assert_eq!(words, BTreeSet::from([vec![0, 1, 0], vec![1, 0, 1]]));
        let b2 = group("B2");
        let words: BTreeSet<_> = b2.all_reduced_words(b2.longest_element()).into_iter().collect();
        assert_eq!(words, BTreeSet::from([vec![0, 1, 0, 1], vec![1, 0, 1, 0]]));
        assert_eq!(a2.all_reduced_words(0), vec![Vec::<usize>::new()]);
        // A3 longest element has 16 reduced words.
        let a3 = group("A3");
        assert_eq!(a3.reduced_words(a3.longest_element()).count(), 16);
    }

    #[test]
    fn reduced_words_evaluate_back() {
        for t in ["A3", "B3", "C3", "G2"] {
            let g = group(t);
            for id in 0..g.len() {
                let words = g.all_reduced_words(id);
                assert!(words.contains(&g.element(id).witness_word));
                for w in &words {
                    assert_eq!(w.len(), g.element(id).length);
                    assert_eq!(g.act_on_word(w).unwrap(), id, "{t}");
                }
                let distinct: BTreeSet<_> = words.iter().collect();
                assert_eq!(distinct.len(), words.len());
            }
        }
    }

    #[test]
    fn reduced_words_exhaustive_against_brute_force() {
        // Oracle: all words of length l(w) that evaluate to w.
        let g = group("B2");
        for id in 0..g.len() {
            let len = g.element(id).length;
            let mut brute = BTreeSet::new();
            for code in 0..(1usize << len) {
                let word: Vec<usize> = (0..len).map(|k| (code >> k) & 1).collect();
                if g.act_on_word(&word).unwrap() == id {
                    brute.insert(word);
                }
            }
            let ours: BTreeSet<_> = g.all_reduced_words(id).into_iter().collect();
            assert_eq!(ours, brute);
        }
    }

    #[test]
    fn group_laws() {
        let g = group("A2");
        let s1 = g.act_on_word(&[0]).unwrap();
        let s2 = g.act_on_word(&[1]).unwrap();
        assert_eq!(g.multiply(s1, s1), g.identity());
        assert_eq!(g.multiply(g.multiply(s1, s2), s1), g.longest_element());
        for a in 0..g.len() {
            assert_eq!(g.multiply(0, a), a);
            assert_eq!(g.multiply(a, g.inverse(a)), 0);
        }
        assert!(g.act_on_word(&[2]).is_err());
    }

    #[test]
    fn witness_is_lex_min_reduced_word() {
        let g = group("B3");
        for id in 0..g.len() {
            let min = g.reduced_words(id).min().unwrap();
            assert_eq!(g.element(id).witness_word, min);
        }
    }

    #[test]
    fn covers_in_a2() {
        let g = group("A2");
        let covers = g.bruhat_covers();
        let s1 = g.act_on_word(&[0]).unwrap();
        let s2 = g.act_on_word(&[1]).unwrap();
        let s12 = g.act_on_word(&[0, 1]).unwrap();
        let s21 = g.act_on_word(&[1, 0]).unwrap();
        let of_e: BTreeSet<_> = covers.iter().filter(|c| c.lower == 0).map(|c| c.upper).collect();
        assert_eq!(of_e, BTreeSet::from([s1, s2]));
        let below_top: BTreeSet<_> = covers.iter().filter(|c| c.upper == g.longest_element()).map(|c| c.lower).collect();
        assert_eq!(below_top, BTreeSet::from([s12, s21]));
        assert_eq!(covers.len(), 8);
        let a1 = group("A1");
        assert_eq!(a1.bruhat_covers(), vec![BruhatCover { lower: 0, upper: 1 }]);
    }

    #[test]
    fn covers_match_subword_criterion() {
        // Oracle: u ≤ w iff some subword of a reduced word of w evaluates to u.
        for t in ["A3", "B2", "G2"] {
            let g = group(t);
            let covers: BTreeSet<_> = g.bruhat_covers().into_iter().map(|c| (c.lower, c.upper)).collect();
            let mut brute = BTreeSet::new();
            for w in 0..g.len() {
                let word = &g.element(w).witness_word;
                for skip in 0..word.len() {
                    let mut sub = word.clone();
                    sub.remove(skip);
                    let u = g.act_on_word(&sub).unwrap();
                    if g.element(u).length + 1 == g.element(w).length {
                        brute.insert((u, w));
                    }
                }
            }
            assert_eq!(covers, brute, "{t}");
            assert!(covers.iter().all(|&(u, w)| g.element(u).length + 1 == g.element(w).length));
        }
    }

    #[test]
    fn reflections_are_involutions_fixing_nothing_else() {
        let g = group("C3");
        let refl = g.reflections();
        assert_eq!(refl.len(), 9);
        for (k, t) in refl {
            assert_eq!(g.multiply(t, t), 0);
            let beta = g.roots()[k].clone();
            let neg: Vec<i64> = beta.iter().map(|x| -x).collect();
            assert_eq!(g.apply_to_root(t, &beta).unwrap(), neg);
            assert_eq!(g.element(t).length % 2, 1);
        }
    }

    #[test]
    fn rebuild_from_words() {
        let ty = "B3".parse().unwrap();
        let g = WeylGroup::generate(ty).unwrap();
        let h = WeylGroup::from_witness_words(ty, &g.witness_words()).unwrap();
        assert_eq!(g.elements(), h.elements());
        let mut bad = g.witness_words();
        bad.pop();
        assert!(WeylGroup::from_witness_words(ty, &bad).is_err());
        let mut bad = g.witness_words();
        bad[3] = vec![0, 0];
        assert!(WeylGroup::from_witness_words(ty, &bad).is_err());
    }

    #[test]
    fn length_is_inversion_count() {
        let g = group("D4");
        for e in g.elements() {
            assert_eq!(g.count_inversions(&e.perm), e.length);
        }
    }
}
