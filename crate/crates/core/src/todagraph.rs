//! The blow-up graph `G_ε`: vertices are Weyl elements, and `w₁ ⇒ w₂` when `w₂` covers `w₁`
//! in Bruhat order with `η(w₁,ε) = η(w₂,ε)` and `w₁⁻¹ε = w₂⁻¹ε`.

use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::blowup_poly::IntPoly;
use crate::error::{Error, Result};
use crate::rootdata::LieType;
use crate::signflow::{eta_table, SignVector};
use crate::weyl::{ElementId, WeylGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub word: Vec<usize>,
    pub length: usize,
    pub eta: usize,
    /// `w⁻¹ε`.
    pub sign: SignVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupGraph {
    pub lie_type: LieType,
    pub base: SignVector,
    /// Indexed by group element id, in canonical order.
    pub vertices: Vec<Vertex>,
    /// `(lower, upper)` pairs, sorted.
    pub edges: Vec<(ElementId, ElementId)>,
}

pub fn build_graph(group: &WeylGroup, eps: &SignVector) -> Result<BlowupGraph> {
    let table = eta_table(group, eps)?;
    let vertices: Vec<Vertex> = group
        .elements()
        .iter()
        .enumerate()
        .map(|(id, e)| Vertex {
            word: e.witness_word.clone(),
            length: e.length,
            eta: table.eta[id],
            sign: table.transported[id].clone(),
        })
        .collect();
    let edges = group
        .bruhat_covers()
        .into_iter()
        .filter(|c| {
            let (a, b) = (&vertices[c.lower], &vertices[c.upper]);
            a.eta == b.eta && a.sign == b.sign
        })
        .map(|c| (c.lower, c.upper))
        .collect();
    Ok(BlowupGraph { lie_type: group.lie_type(), base: eps.clone(), vertices, edges })
}

impl BlowupGraph {
    /// Undirected components; each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<ElementId>> {
        let n = self.vertices.len();
        let mut uf = UnionFind::<usize>::new(n);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let labels = uf.into_labeling();
        let mut slot_of_label = vec![usize::MAX; n];
        let mut out: Vec<Vec<ElementId>> = Vec::new();
        for (v, &label) in labels.iter().enumerate() {
            if slot_of_label[label] == usize::MAX {
                slot_of_label[label] = out.len();
                out.push(Vec::new());
            }
            out[slot_of_label[label]].push(v);
        }
        out
    }

    /// Re-checks every edge against the defining conditions using `group`.
    pub fn validate(&self, group: &WeylGroup) -> Result<()> {
        let covers = group.bruhat_covers();
        for &(a, b) in &self.edges {
            let (va, vb) = (&self.vertices[a], &self.vertices[b]);
            let is_cover = covers.binary_search(&crate::weyl::BruhatCover { lower: a, upper: b }).is_ok();
            let eta_a = crate::signflow::eta_word(group.cartan(), &va.word, &self.base)?;
            let eta_b = crate::signflow::eta_word(group.cartan(), &vb.word, &self.base)?;
            let sign_a = crate::signflow::act_word(group.cartan(), &va.word, &self.base)?;
            let sign_b = crate::signflow::act_word(group.cartan(), &vb.word, &self.base)?;
            if !is_cover || vb.length != va.length + 1 || eta_a != eta_b || sign_a != sign_b {
                return Err(Error::AssumptionViolated(format!(
                    "edge {} => {} violates the edge conditions",
                    WeylGroup::word_string(&va.word),
                    WeylGroup::word_string(&vb.word)
                )));
            }
        }
        Ok(())
    }

    /// `(−1)^{l(w*)} Σ_v (−1)^{l(v)} q^{η(v)}` over the vertices.
    pub fn alternating_sum(&self) -> IntPoly {
        let top = self.vertices.iter().map(|v| v.length).max().unwrap_or(0);
        self.vertices.iter().fold(IntPoly::zero(), |acc, v| {
            let sign = if (v.length + top) % 2 == 0 { 1 } else { -1 };
            acc.add(&IntPoly::monomial(sign, v.eta))
        })
    }

    pub fn matching_report(&self) -> MatchingReport {
        let mut degree = vec![0usize; self.vertices.len()];
        for &(a, b) in &self.edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        let is_matching = degree.iter().all(|&d| d <= 1);
        let max_degree = degree.iter().copied().max().unwrap_or(0);
        let unmatched_per_length = is_matching.then(|| {
            let top = self.vertices.iter().map(|v| v.length).max().unwrap_or(0);
            let mut counts = vec![0u64; top + 1];
            for (v, d) in self.vertices.iter().zip(&degree) {
                if *d == 0 {
                    counts[v.length] += 1;
                }
            }
            counts
        });
        MatchingReport { is_matching, max_degree, edge_count: self.edges.len(), unmatched_per_length }
    }

    pub fn to_dot(&self) -> String {
        let comps = self.components();
        let mut out = String::new();
        let _ = writeln!(out, "// blow-up graph of {} with base sign {}", self.lie_type, self.base);
        let _ = writeln!(
            out,
            "// {} vertices, {} edges, {} connected components",
            self.vertices.len(),
            self.edges.len(),
            comps.len()
        );
        let _ = writeln!(out, "digraph blowup {{");
        let _ = writeln!(out, "  rankdir=TB;");
        let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
        let top = self.vertices.iter().map(|v| v.length).max().unwrap_or(0);
        for len in 0..=top {
            let ids: Vec<String> = (0..self.vertices.len())
                .filter(|&i| self.vertices[i].length == len)
                .map(|i| format!("v{i}"))
                .collect();
            let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(
                out,
                "  v{i} [label=\"{}\\neta={} sign={}\"];",
                WeylGroup::word_string(&v.word),
                v.eta,
                v.sign
            );
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  v{a} -> v{b};");
        }
        out.push_str("}\n");
        out
    }

    /// `{vertices: [{word, length, eta, sign}], edges: [[i, j]], components: [[...]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "type": self.lie_type.to_string(),
            "base_sign": self.base.to_string(),
            "vertices": self.vertices.iter().map(|v| json!({
                "word": WeylGroup::word_string(&v.word),
                "length": v.length,
                "eta": v.eta,
                "sign": v.sign.to_string(),
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "components": self.components(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingReport {
    pub is_matching: bool,
    pub max_degree: usize,
    pub edge_count: usize,
    /// Unmatched vertices per length: candidate rational Betti numbers. `None` when the
    /// edge set is not a matching.
    pub unmatched_per_length: Option<Vec<u64>>,
}

impl MatchingReport {
    /// Generating polynomial `Σ b_k x^k` of the Betti candidates.
    pub fn betti_polynomial(&self) -> Option<IntPoly> {
        self.unmatched_per_length
            .as_ref()
            .map(|b| IntPoly::new(b.iter().map(|&x| x as i64).collect()))
    }
}
