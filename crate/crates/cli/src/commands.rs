//! Subcommand bodies. Each returns an [`Output`]; formatting and exit codes live in `main`.

use serde_json::{json, Value};
use toda_core::affine::{check_admissible, p_series, rational_guess};
use toda_core::blowup_poly::{brute_force_so_order, chevalley_order, closed_form_p, matches_closed_form, p_epsilon};
use toda_core::cache::{group_for, GroupCache};
use toda_core::numtoda::{ode_integrate, signs_vs_eta_report, LaxMatrixA, OdeControls, DRIFT_BOUND};
use toda_core::rootdata::{compact_dual_info, tau_multiplicities, two_rho_height, Series};
use toda_core::schurtau::{hirota_residual, minimal_degrees, real_root_count_experiment, tau_functions};
use toda_core::signflow::eta_table;
use toda_core::todagraph::build_graph;
use toda_core::verify::{verify_all, Scope};
use toda_core::{Error, LieType, Result, SignVector, WeylGroup};

use crate::output::{csv_table, Output};

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Context {
    pub cache: Option<GroupCache>,
    pub group_cap: usize,
    pub seed: u64,
}

impl Context {
    fn group(&self, ty: LieType) -> Result<WeylGroup> {
        group_for(ty, self.group_cap, self.cache.as_ref())
    }
}

fn sign_or_all_minus(sign: Option<&SignVector>, n: usize) -> SignVector {
    sign.cloned().unwrap_or_else(|| SignVector::all_minus(n))
}

pub fn pq(ctx: &Context, ty: LieType, sign: Option<&SignVector>) -> Result<Output> {
    let g = ctx.group(ty)?;
    let eps = sign_or_all_minus(sign, g.rank());
    let p = p_epsilon(&g, &eps)?;
    let closed = closed_form_p(ty)?;
    let matches = eps.is_all_minus() && matches_closed_form(ty, &p)?;
    let shown = if matches { closed.to_string() } else { p.to_string() };
    let json = json!({
        "type": ty.to_string(),
        "sign": eps.to_string(),
        "p": shown,
        "expanded": p.to_string(),
        "coeffs": p.coeffs(),
        "degree": p.degree(),
        "matches_closed_form": matches,
    });
    let mut text = format!("p(q) for {ty}, sign {eps}: {shown}\n");
    if matches && shown != p.to_string() {
        text.push_str(&format!("expanded: {p}\n"));
    }
    if eps.is_all_minus() {
        text.push_str(&format!("closed form {closed}: {}\n", if matches { "matches" } else { "DIFFERS" }));
    }
    let csv = csv_table(&["power", "coeff"], p.coeffs().iter().enumerate().map(|(k, c)| vec![k.to_string(), c.to_string()]));
    Ok(Output::new("pq", json, text).with_csv(csv))
}

pub fn eta(ctx: &Context, ty: LieType, sign: Option<&SignVector>) -> Result<Output> {
    let g = ctx.group(ty)?;
    let eps = sign_or_all_minus(sign, g.rank());
    let table = eta_table(&g, &eps)?;
    let rows: Vec<(String, usize, usize, String)> = (0..g.len())
        .map(|id| {
            let e = g.element(id);
            (WeylGroup::word_string(&e.witness_word), e.length, table.eta[id], table.transported[id].to_string())
        })
        .collect();
    let json = json!({
        "type": ty.to_string(),
        "sign": eps.to_string(),
        "elements": rows.iter().map(|(w, l, e, s)| json!({"word": w, "length": l, "eta": e, "sign": s})).collect::<Vec<_>>(),
    });
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(1).max(4);
    let mut text = format!("eta for {ty}, sign {eps} ({} elements)\n{:<width$}  len  eta  sign\n", g.len(), "word");
    for (w, l, e, s) in &rows {
        text.push_str(&format!("{w:<width$}  {l:>3}  {e:>3}  {s}\n"));
    }
    let csv = csv_table(&["word", "length", "eta", "sign"], rows.iter().map(|(w, l, e, s)| vec![w.clone(), l.to_string(), e.to_string(), s.clone()]));
    Ok(Output::new("eta", json, text).with_csv(csv))
}

pub fn graph(ctx: &Context, ty: LieType, sign: Option<&SignVector>) -> Result<Output> {
    let g = ctx.group(ty)?;
    let eps = sign_or_all_minus(sign, g.rank());
    let graph = build_graph(&g, &eps)?;
    graph.validate(&g)?;
    let comps = graph.components();
    let report = graph.matching_report();
    let mut json = graph.to_json();
    json["component_count"] = json!(comps.len());
    json["alternating_sum"] = json!(graph.alternating_sum().to_string());
    json["matching"] = serde_json::to_value(&report).expect("report serializes");
    let mut text = format!(
        "blow-up graph of {ty}, sign {eps}: {} vertices, {} edges, {} components\n",
        graph.vertices.len(),
        graph.edges.len(),
        comps.len()
    );
    text.push_str(&format!("alternating vertex sum: {}\n", graph.alternating_sum()));
    match report.betti_polynomial() {
        Some(b) => text.push_str(&format!("matching; unmatched vertices by length give {}\n", b.display_in("x"))),
        None => text.push_str(&format!("not a matching (max degree {})\n", report.max_degree)),
    }
    for (k, c) in comps.iter().enumerate() {
        let words: Vec<String> = c.iter().map(|&id| WeylGroup::word_string(&g.element(id).witness_word)).collect();
        text.push_str(&format!("  component {k}: {{{}}}\n", words.join(", ")));
    }
    let mut component_of = vec![0; graph.vertices.len()];
    for (k, c) in comps.iter().enumerate() {
        for &id in c {
            component_of[id] = k;
        }
    }
    let csv = csv_table(
        &["id", "word", "length", "eta", "sign", "component"],
        graph.vertices.iter().enumerate().map(|(i, v)| {
            vec![
                i.to_string(),
                WeylGroup::word_string(&v.word),
                v.length.to_string(),
                v.eta.to_string(),
                v.sign.to_string(),
                component_of[i].to_string(),
            ]
        }),
    );
    Ok(Output::new("graph", json, text).with_csv(csv).with_dot(graph.to_dot()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    RealRoots,
}

pub fn schur(ctx: &Context, ty: LieType, experiment: Option<Experiment>, samples: usize, hirota: bool) -> Result<Output> {
    let sys = tau_functions(ty)?;
    if let Some(Experiment::RealRoots) = experiment {
        let r = real_root_count_experiment(&sys, samples, ctx.seed)?;
        let json = json!({ "type": ty.to_string(), "experiment": "real-roots", "report": r });
        let mut text = format!(
            "real roots in t1 of the tau product for {ty}: {} slices, seed {}\nmodal count {} ({:.0}% of slices), deg p(q) = {}: {}\n",
            r.samples,
            r.seed,
            r.modal_count,
            100.0 * r.modal_fraction,
            r.expected,
            if r.agrees { "agrees" } else { "differs" }
        );
        if !r.generic {
            text.push_str("fewer than 90% of slices at the mode\n");
        }
        for (count, freq) in &r.histogram {
            text.push_str(&format!("  {count:>3} real roots: {freq}\n"));
        }
        let csv = csv_table(&["real_roots", "slices"], r.histogram.iter().map(|(c, f)| vec![c.to_string(), f.to_string()]));
        return Ok(Output::new("schur", json, text).with_csv(csv));
    }
    let mins = minimal_degrees(&sys)?;
    let height = two_rho_height(ty)?;
    let t1_degree = sys.product().degree_in(sys.vars.t1());
    let mut taus = Vec::new();
    let mut text = format!("tau-functions of {ty} in {}\n", sys.vars.names.join(", "));
    for k in 0..sys.taus.len() {
        let mut entry = json!({ "k": k + 1, "tau": sys.display(k), "minimal_degree": mins[k] });
        text.push_str(&format!("tau_{} = {}\n", k + 1, sys.display(k)));
        if hirota {
            let fit = hirota_residual(&sys, k)?;
            entry["hirota_constant"] = json!(fit.constant.to_string());
            text.push_str(&format!("  Hirota constant {}\n", fit.constant));
        }
        taus.push(entry);
    }
    text.push_str(&format!(
        "minimal degrees {mins:?} (sum {}), t1-degree of the product {}, |2rho| = {height}\n",
        mins.iter().sum::<u32>(),
        t1_degree.map_or("-".into(), |d| d.to_string())
    ));
    let json = json!({
        "type": ty.to_string(),
        "variables": sys.vars.names,
        "taus": taus,
        "minimal_degrees": mins,
        "t1_degree": t1_degree,
        "two_rho_height": height,
        "multiplicities": tau_multiplicities(ty)?,
        "notes": sys.notes,
    });
    let csv = csv_table(&["k", "tau", "minimal_degree"], (0..sys.taus.len()).map(|k| vec![(k + 1).to_string(), sys.display(k), mins[k].to_string()]));
    Ok(Output::new("schur", json, text).with_csv(csv))
}

pub fn affine(ty: LieType, sign: Option<&SignVector>, lmax: usize, cap: usize) -> Result<Output> {
    if !ty.is_affine() {
        return Err(Error::UnsupportedType { ty: ty.to_string(), reason: "affine expects an affine type such as A2^(1)".into() });
    }
    let eps = sign_or_all_minus(sign, ty.node_count());
    check_admissible(ty, &eps)?;
    let s = p_series(ty, &eps, lmax, cap)?;
    let guess = match rational_guess(&s) {
        Ok(g) => g,
        Err(Error::InsufficientData(_)) => None,
        Err(e) => return Err(e),
    };
    let json = json!({
        "type": ty.to_string(),
        "sign": eps.to_string(),
        "lmax": lmax,
        "series": s,
        "stable_prefix": s.stable_prefix(),
        "guess": guess.as_ref().map(|g| g.to_string()),
    });
    let mut text = format!("affine series for {ty}, sign {eps}, lengths <= {lmax}\n{s}\n");
    text.push_str(&format!("stable coefficients: {}\n", s.stable_prefix().len()));
    text.push_str(&match &guess {
        Some(g) => format!("rational guess: {g}\n"),
        None => "rational guess: none\n".into(),
    });
    let csv = csv_table(&["power", "coeff", "stable"], s.coeffs.iter().zip(&s.stable).enumerate().map(|(k, (c, st))| vec![k.to_string(), c.to_string(), st.to_string()]));
    Ok(Output::new("affine", json, text).with_csv(csv))
}

pub struct OdeArgs {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub t_min: f64,
    pub t_max: f64,
    pub controls: OdeControls,
    /// Type A only: compare τ zero-crossings on `[-w, w]` with η.
    pub tau_window: Option<f64>,
}

pub fn ode(ty: LieType, args: &OdeArgs) -> Result<Output> {
    let tr = ode_integrate(ty, &args.a, &args.b, args.t_min, args.t_max, &args.controls)?;
    let drift = tr.invariant_drift(DRIFT_BOUND);
    let mut json = json!({
        "type": ty.to_string(),
        "controls": args.controls,
        "events": tr.events,
        "invariant_drift": drift,
        "drift_bound": DRIFT_BOUND,
        "trajectory": { "t": tr.times, "a": tr.a, "b": tr.b, "invariant": tr.invariant },
    });
    let mut text = format!(
        "{ty} Toda flow on [{}, {}]: {} samples, {} blow-up(s), invariant drift {drift:.2e}\n",
        args.t_min,
        args.t_max,
        tr.times.len(),
        tr.events.len()
    );
    for ev in &tr.events {
        text.push_str(&format!("  a_{} blows up near t = {:.8} (last steps {:.8}, {:.8})\n", ev.index + 1, ev.time, ev.bracket.0, ev.bracket.1));
    }
    if let Some(w) = args.tau_window {
        if ty.series() != Series::A || ty.is_affine() {
            return Err(Error::UnsupportedType { ty: ty.to_string(), reason: "tau crossings are computed for type A only".into() });
        }
        let report = signs_vs_eta_report(&LaxMatrixA::new(args.b.clone(), args.a.clone())?, w, 2001)?;
        text.push_str(&format!(
            "tau zero-crossings on [-{w}, {w}]: {} total, eta(w*, {}) = {}: {}\n",
            report.total,
            report.signs,
            report.eta_longest,
            if report.agrees { "agrees" } else { "differs" }
        ));
        json["tau_crossings"] = serde_json::to_value(&report).expect("report serializes");
    }
    Ok(Output::new("ode", json, text).with_csv(tr.to_csv()))
}

pub fn chevalley(ty: LieType, q: u64, brute_force: bool) -> Result<Output> {
    let info = compact_dual_info(ty)?;
    let order = chevalley_order(ty, q)?;
    let mut json = json!({
        "type": ty.to_string(),
        "q": q,
        "dual": info.dual_name,
        "dual_dim": info.dual_dim,
        "r": info.r(),
        "p": closed_form_p(ty)?.to_string(),
        "order": order.to_string(),
    });
    let mut text = format!("|{}(F_{q})| = q^{} p(q) = {order}\n", info.dual_name, info.r());
    if brute_force {
        let n = match (ty.series(), ty.rank()) {
            (Series::A, 1) => 2,
            (Series::A, 2) => 3,
            _ => return Err(Error::UnsupportedType { ty: ty.to_string(), reason: "brute-force counting covers A1 and A2".into() }),
        };
        let count = brute_force_so_order(n, q)?;
        let agrees = order == count.into();
        json["brute_force"] = json!({ "n": n, "count": count, "agrees": agrees });
        text.push_str(&format!("brute-force |SO({n})(F_{q})| = {count}: {}\n", if agrees { "agrees" } else { "differs" }));
    }
    Ok(Output::new("chevalley", json, text))
}

pub fn verify(scope: Scope) -> Output {
    let report = verify_all(scope);
    let json = json!({ "scope": scope.to_string(), "all_passed": report.all_passed(), "rows": report.rows });
    let csv = csv_table(
        &["id", "name", "passed", "seconds", "detail"],
        report.rows.iter().map(|r| vec![r.id.to_string(), r.name.clone(), r.passed.to_string(), format!("{:.3}", r.seconds), r.detail.clone()]),
    );
    Output::new("verify", json, report.to_table()).with_csv(csv)
}

pub fn all_passed(out: &Output) -> bool {
    out.json.get("all_passed").and_then(Value::as_bool).unwrap_or(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheAction {
    List,
    Clear,
}

pub fn cache(cache: Option<&GroupCache>, action: CacheAction) -> Result<Output> {
    let cache = cache.ok_or_else(|| Error::InvalidArgument("no cache directory: pass --cache-dir or set TODA_CACHE_DIR".into()))?;
    let dir = cache.dir().display().to_string();
    match action {
        CacheAction::List => {
            let entries = cache.list()?;
            let mut text = format!("{} cache entries in {dir}\n", entries.len());
            for e in &entries {
                text.push_str(&format!("  {}  {} bytes\n", e.file, e.bytes));
            }
            let csv = csv_table(&["file", "bytes"], entries.iter().map(|e| vec![e.file.clone(), e.bytes.to_string()]));
            Ok(Output::new("cache", json!({ "dir": dir, "action": "list", "entries": entries }), text).with_csv(csv))
        }
        CacheAction::Clear => {
            let removed = cache.clear()?;
            Ok(Output::new("cache", json!({ "dir": dir, "action": "clear", "removed": removed }), format!("removed {removed} cache entries from {dir}\n")))
        }
    }
}
