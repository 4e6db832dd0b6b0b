//! Acceptance criteria, one line each. Expected values are literals or small oracles in this file.
//!
//! Runs without the libtest harness so the PASS/FAIL lines always print; exits 1 if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use toda_core::affine::{affine_eta, enumerate_by_length, p_series, rational_guess, AFFINE_ELEMENT_CAP};
use toda_core::blowup_poly::{brute_force_so_order, chevalley_order, p_epsilon, poincare_polynomial_k};
use toda_core::numtoda::{count_zero_crossings, ode_integrate, LaxMatrixA, OdeControls, TauEvaluator, DRIFT_BOUND};
use toda_core::rootdata::cartan_matrix;
use toda_core::schurtau::{hirota_residual, minimal_degrees, real_root_count_experiment, tau_functions, TauSystem};
use toda_core::signflow::{eta, eta_all_words, eta_table, reflect_sign};
use toda_core::todagraph::build_graph;
use toda_core::{CartanLike, LieType, SignVector, WeylGroup};

type Outcome = Result<String, String>;

fn ty(s: &str) -> LieType {
    s.parse().unwrap()
}

fn group(s: &str) -> WeylGroup {
    WeylGroup::generate(ty(s)).unwrap()
}

fn minus(n: usize) -> SignVector {
    SignVector::all_minus(n)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Coefficients (constant first) of Π (q^d − 1).
fn expand(degrees: &[u32]) -> Vec<i64> {
    let mut p = vec![1i64];
    for &d in degrees {
        let mut next = vec![0i64; p.len() + d as usize];
        for (i, &c) in p.iter().enumerate() {
            next[i] -= c;
            next[i + d as usize] += c;
        }
        p = next;
    }
    p
}

fn trimmed(c: &[i64]) -> Vec<i64> {
    let mut v = c.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Factor degrees read off the closed-form table.
const CLOSED_FORMS: &[(&str, &[u32])] = &[
    ("A1", &[1]),
    ("A2", &[2]),
    ("A3", &[2, 2]),
    ("A4", &[2, 4]),
    ("A5", &[2, 4, 3]),
    ("B2", &[1, 2]),
    ("B3", &[1, 2, 3]),
    ("B4", &[1, 2, 3, 4]),
    ("C2", &[2, 1]),
    ("C3", &[2, 2, 2]),
    ("C4", &[2, 2, 4, 2]),
    ("D4", &[2, 2, 2, 2]),
    ("D5", &[2, 2, 4, 4]),
    ("G2", &[2, 2]),
    ("F4", &[2, 2, 4, 6]),
    ("E6", &[2, 4, 6, 8]),
];

fn c1_closed_forms() -> Outcome {
    for (t, degrees) in CLOSED_FORMS {
        let g = group(t);
        let p = p_epsilon(&g, &minus(g.rank())).map_err(|e| e.to_string())?;
        check(trimmed(p.coeffs()) == expand(degrees), || format!("{t}: p = {p}"))?;
    }
    // E7 and E8 are checked through their degree data only.
    for (t, sum) in [("E7", 35), ("E8", 64)] {
        let d = toda_core::blowup_poly::closed_form_p(ty(t)).map_err(|e| e.to_string())?.degree();
        check(d == sum, || format!("{t}: deg p = {d}"))?;
    }
    Ok(format!("{} types exact, E7/E8 degrees 35/64", CLOSED_FORMS.len()))
}

const SMALL: [&str; 8] = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "G2"];

fn c2_vanishing() -> Outcome {
    let mut n = 0;
    for t in SMALL {
        let g = group(t);
        for eps in SignVector::all(g.rank()) {
            if eps == minus(g.rank()) {
                continue;
            }
            let p = p_epsilon(&g, &eps).unwrap();
            check(p.is_zero(), || format!("{t} {eps}: {p}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} sign vectors give 0"))
}

fn c3_word_independence() -> Outcome {
    let mut n = 0;
    for t in ["A3", "B3", "C3", "G2"] {
        let g = group(t);
        for eps in SignVector::all(g.rank()) {
            for id in 0..g.len() {
                let single = eta(&g, id, &eps).unwrap();
                let all = eta_all_words(&g, id, &eps).map_err(|e| format!("{t} {eps} {id}: {e}"))?;
                check(all == single, || format!("{t} {eps} element {id}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} (w, eps) pairs"))
}

fn eta_of(g: &WeylGroup, one_based: &str) -> usize {
    let word: Vec<usize> = one_based.bytes().map(|b| (b - b'1') as usize).collect();
    eta(g, g.act_on_word(&word).unwrap(), &minus(g.rank())).unwrap()
}

fn c4_eta_tables() -> Outcome {
    let a2 = group("A2");
    let got: Vec<usize> = ["", "1", "2", "12", "21", "121"].iter().map(|w| eta_of(&a2, w)).collect();
    check(got == [0, 1, 1, 1, 1, 2], || format!("A2 {got:?}"))?;
    let g2 = group("G2");
    let words = ["", "1", "2", "12", "21", "121", "212", "1212", "2121", "12121", "21212", "121212"];
    let got: Vec<usize> = words.iter().map(|w| eta_of(&g2, w)).collect();
    check(got == [0, 1, 1, 1, 1, 2, 2, 3, 3, 3, 3, 4], || format!("G2 {got:?}"))?;
    Ok("A2 (0,1,1,1,1,2), G2 12 values".into())
}

fn c5_components() -> Outcome {
    let a2 = group("A2");
    let mut parts: Vec<Vec<String>> = build_graph(&a2, &minus(2))
        .unwrap()
        .components()
        .iter()
        .map(|c| {
            let mut v: Vec<String> = c.iter().map(|&id| WeylGroup::word_string(&a2.element(id).witness_word)).collect();
            v.sort();
            v
        })
        .collect();
    parts.sort();
    let want: Vec<Vec<String>> = [vec!["1", "12"], vec!["121"], vec!["2", "21"], vec!["e"]]
        .iter()
        .map(|c| c.iter().map(|s| s.to_string()).collect())
        .collect();
    check(parts == want, || format!("A2 {parts:?}"))?;
    let a3 = build_graph(&group("A3"), &minus(3)).unwrap().components().len();
    let a1 = build_graph(&group("A1"), &minus(1)).unwrap().components().len();
    check(a3 == 10 && a1 == 2, || format!("A3 {a3}, A1 {a1}"))?;
    Ok("A2 {e}{1,12}{2,21}{121}, A3 10, A1 2".into())
}

fn c6_chevalley() -> Outcome {
    // SO(2, F_q) is split for q ≡ 1 mod 4, order q − 1; |SO(3, F_q)| = q(q² − 1).
    for (t, n, q, order) in [("A1", 2, 5, 4u64), ("A1", 2, 13, 12), ("A1", 2, 17, 16), ("A2", 3, 3, 24), ("A2", 3, 5, 120)] {
        let formula = chevalley_order(ty(t), q).unwrap();
        let count = brute_force_so_order(n, q).unwrap();
        check(formula == order.into() && count == order, || format!("{t} q={q}: formula {formula}, count {count}"))?;
    }
    Ok("A1 q=5,13,17; A2 q=3,5".into())
}

/// Terms keyed by a canonical monomial string such as "t1^5 t5".
fn term_map(sys: &TauSystem, k: usize) -> BTreeMap<String, BigRational> {
    sys.taus[k]
        .terms()
        .map(|(m, c)| {
            let key: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { sys.vars.names[i].clone() } else { format!("{}^{e}", sys.vars.names[i]) })
                .collect();
            (key.join(" "), c.clone())
        })
        .collect()
}

fn literal(terms: &[(&str, i64, i64)]) -> BTreeMap<String, BigRational> {
    terms.iter().map(|(m, n, d)| (m.to_string(), BigRational::new((*n).into(), (*d).into()))).collect()
}

fn c7_tau_literals() -> Outcome {
    let cases: [(&str, [&[(&str, i64, i64)]; 2]); 4] = [
        ("A2", [&[("t2", 1, 1), ("t1^2", 1, 2)], &[("t2", 1, 1), ("t1^2", -1, 2)]]),
        ("B2", [&[("t1 t3", 1, 1), ("t1^4", 1, 24)], &[("t3", 1, 1), ("t1^3", -1, 12)]]),
        ("C2", [&[("t3", 1, 1), ("t1^3", 1, 6)], &[("t1 t3", 1, 1), ("t1^4", -1, 12)]]),
        ("G2", [&[("t1 t5", 1, 1), ("t1^6", 1, 720)], &[("t5^2", 1, 1), ("t1^5 t5", -1, 40), ("t1^10", 1, 86400)]]),
    ];
    for (t, want) in cases {
        let sys = tau_functions(ty(t)).unwrap();
        for (k, w) in want.iter().enumerate() {
            check(term_map(&sys, k) == literal(w), || format!("{t} tau{}: {}", k + 1, sys.display(k)))?;
        }
    }
    Ok("A2, B2, C2, G2 exact".into())
}

fn c8_degrees() -> Outcome {
    // (type, minimal degrees, exponents); |2ρ| = Σ m(m+1)/2 over the exponents.
    let cases: [(&str, &[u32], &[u32]); 13] = [
        ("A2", &[1, 1], &[1, 2]),
        ("A3", &[1, 2, 1], &[1, 2, 3]),
        ("A4", &[1, 2, 2, 1], &[1, 2, 3, 4]),
        ("A5", &[1, 2, 3, 2, 1], &[1, 2, 3, 4, 5]),
        ("B2", &[2, 1], &[1, 3]),
        ("B3", &[2, 2, 2], &[1, 3, 5]),
        ("B4", &[2, 2, 4, 2], &[1, 3, 5, 7]),
        ("C2", &[1, 2], &[1, 3]),
        ("C3", &[1, 2, 3], &[1, 3, 5]),
        ("C4", &[1, 2, 3, 4], &[1, 3, 5, 7]),
        ("D4", &[2, 2, 2, 2], &[1, 3, 3, 5]),
        ("D5", &[2, 2, 4, 2, 2], &[1, 3, 4, 5, 7]),
        ("G2", &[2, 2], &[1, 5]),
    ];
    for (t, mins, exps) in cases {
        let sys = tau_functions(ty(t)).unwrap();
        let got = minimal_degrees(&sys).unwrap();
        check(got == mins, || format!("{t}: minimal degrees {got:?}"))?;
        let g = group(t);
        let top = eta(&g, g.longest_element(), &minus(g.rank())).unwrap();
        let deg_p = CLOSED_FORMS.iter().find(|(n, _)| *n == t).unwrap().1.iter().sum::<u32>();
        let sum: u32 = mins.iter().sum();
        check(sum as usize == top && sum == deg_p, || format!("{t}: sum {sum}, eta(w*) {top}, deg p {deg_p}"))?;
        let height: u32 = exps.iter().map(|m| m * (m + 1) / 2).sum();
        let t1 = sys.product().degree_in(sys.vars.t1());
        check(t1 == Some(height), || format!("{t}: t1-degree {t1:?}, |2rho| {height}"))?;
    }
    Ok("13 types; B2 7, G2 16, A2 4".into())
}

fn c9_hirota() -> Outcome {
    let mut out = Vec::new();
    for t in ["A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2"] {
        let sys = tau_functions(ty(t)).unwrap();
        for k in 0..sys.taus.len() {
            let fit = hirota_residual(&sys, k).map_err(|e| format!("{t} k={}: {e}", k + 1))?;
            check(fit.residual.is_zero() && !fit.constant.is_zero(), || format!("{t} k={}", k + 1))?;
        }
        out.push(t);
    }
    Ok(format!("residual 0 for every k in {}", out.join(",")))
}

fn c10_real_roots() -> Outcome {
    let mut out = Vec::new();
    for (t, deg) in [("A2", 2), ("B2", 3), ("C2", 3), ("G2", 4), ("A3", 4), ("C3", 6)] {
        let r = real_root_count_experiment(&tau_functions(ty(t)).unwrap(), 20, 7).unwrap();
        check(r.modal_count == deg, || format!("{t}: mode {}", r.modal_count))?;
        check(r.modal_fraction >= 0.9, || format!("{t}: {:.2} at the mode", r.modal_fraction))?;
        out.push(format!("{t}:{}", r.modal_count));
    }
    Ok(format!("20 slices, seed 7: {}", out.join(" ")))
}

fn c11_affine() -> Outcome {
    let t = LieType::affine_a(1).unwrap();
    let eps = minus(2);
    let elements = enumerate_by_length(t, 12, AFFINE_ELEMENT_CAP).unwrap();
    for e in &elements {
        check(affine_eta(t, &eps, &e.witness_word).unwrap() == e.length, || format!("eta({})", e.word_string()))?;
    }
    let s = p_series(t, &eps, 16, AFFINE_ELEMENT_CAP).unwrap();
    let stable = s.stable_prefix();
    let want: Vec<i64> = (0..stable.len()).map(|k| if k == 0 { 1 } else if k % 2 == 1 { -2 } else { 2 }).collect();
    check(stable.len() >= 6 && stable == want.as_slice(), || format!("series {s}"))?;
    let g = rational_guess(&s).unwrap().ok_or("no guess")?.to_string();
    check(g == "(1 - q)/(1 + q)", || format!("guess {g}"))?;
    Ok(format!("{} elements to length 12, {} stable coefficients, {g}", elements.len(), stable.len()))
}

fn c12_numerics() -> Outcome {
    let ctl = OdeControls::default();
    let pos = ode_integrate(ty("A1"), &[1.0], &[0.0], -5.0, 5.0, &ctl).unwrap();
    let err = pos
        .times
        .iter()
        .enumerate()
        .map(|(k, &t)| (pos.a[k][0] - 1.0 / t.cosh().powi(2)).abs().max((pos.b[k][0] - t.tanh()).abs()))
        .fold(0.0, f64::max);
    check(err <= 1e-6 && pos.events.is_empty(), || format!("sech2/tanh error {err:e}"))?;
    let neg = ode_integrate(ty("A1"), &[-3.0], &[2.0], -3.0, 3.0, &ctl).unwrap();
    check(neg.events.len() == 1, || format!("A1 negative: {} blow-ups", neg.events.len()))?;
    let (b0, a0) = (vec![2.0, 1.5], vec![-0.3, -0.2]);
    let ev = TauEvaluator::new(&LaxMatrixA::new(b0.clone(), a0.clone()).unwrap()).unwrap();
    let mut total = 0;
    for j in 1..=2 {
        // Err here would mean the coarse and refined grids disagree.
        total += count_zero_crossings(&ev, j, 30.0, 2001).map_err(|e| e.to_string())?.count;
    }
    let g = group("A2");
    let top = eta(&g, g.longest_element(), &minus(2)).unwrap();
    check(total == 2 && top == 2, || format!("crossings {total}, eta(w*) {top}"))?;
    let a2 = ode_integrate(ty("A2"), &a0, &b0, -30.0, 30.0, &ctl).unwrap();
    let drift = [&pos, &neg, &a2].iter().map(|tr| tr.invariant_drift(DRIFT_BOUND)).fold(0.0, f64::max);
    check(drift <= 1e-8, || format!("drift {drift:e}"))?;
    Ok(format!("sech2 err {err:.1e}, 1 blow-up, A2 crossings 2 (grid-stable), drift {drift:.1e}"))
}

fn m(c: &dyn CartanLike, i: usize, j: usize) -> usize {
    [2, 3, 4, 6][(c.entry(i, j) * c.entry(j, i)) as usize]
}

fn c13_properties() -> Outcome {
    for t in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2"] {
        let c = cartan_matrix(ty(t)).unwrap();
        let n = c.rank();
        for eps in SignVector::all(n) {
            for i in 0..n {
                let s = |k: usize, e: &SignVector| reflect_sign(&c, k, e).unwrap();
                check(s(i, &s(i, &eps)) == eps, || format!("{t}: s{i}^2 on {eps}"))?;
                for j in i + 1..n {
                    let mut cur = eps.clone();
                    for _ in 0..m(&c, i, j) {
                        cur = s(j, &s(i, &cur));
                    }
                    check(cur == eps, || format!("{t}: braid ({i},{j}) on {eps}"))?;
                }
            }
        }
    }
    let mut matched = Vec::new();
    let mut not_matching = Vec::new();
    for t in SMALL {
        let g = group(t);
        for eps in SignVector::all(g.rank()) {
            let table = eta_table(&g, &eps).unwrap();
            for id in 0..g.len() {
                for i in 0..g.rank() {
                    let up = g.right_mul_simple(id, i);
                    if g.element(up).length == g.element(id).length + 1 {
                        let d = table.eta[up] as i64 - table.eta[id] as i64;
                        check(d == 0 || d == 1, || format!("{t} {eps}: increment {d}"))?;
                    }
                }
            }
            let graph = build_graph(&g, &eps).unwrap();
            check(graph.alternating_sum() == p_epsilon(&g, &eps).unwrap(), || format!("{t} {eps}: vertex sum"))?;
        }
        match build_graph(&g, &minus(g.rank())).unwrap().matching_report().betti_polynomial() {
            Some(b) => {
                let want = poincare_polynomial_k(ty(t)).unwrap();
                check(b == want, || format!("{t}: Betti {b}, expected {want}"))?;
                matched.push(t);
            }
            None => not_matching.push(t),
        }
    }
    Ok(format!("Betti = Poincare for matchings {}; not a matching: {}", matched.join(","), not_matching.join(",")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("closed-form p(q)", c1_closed_forms),
        ("vanishing", c2_vanishing),
        ("reduced-word independence", c3_word_independence),
        ("eta tables", c4_eta_tables),
        ("graph components", c5_components),
        ("Chevalley orders", c6_chevalley),
        ("tau literals", c7_tau_literals),
        ("degree bookkeeping", c8_degrees),
        ("Hirota residuals", c9_hirota),
        ("real-root modes", c10_real_roots),
        ("affine A1(1)", c11_affine),
        ("numerics", c12_numerics),
        ("property suites", c13_properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {:>2} {name} ({secs:.1}s): {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {d}", i + 1);
            }
        }
    }
    println!("{}/13 criteria passed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
