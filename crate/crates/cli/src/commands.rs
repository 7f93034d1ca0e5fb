//! Subcommands. Each one fans out over the requested primes and assembles
//! its rows in prime order (rationals last).

use std::thread;

use loopcoh_core::emss::{
    base_truncation_for, classify, local_global, loop_series, splitting_check, Classification, E2Page, EdgeColumn,
    LocalGlobal, Verdict,
};
use loopcoh_core::series::GeneratorCounts;
use loopcoh_core::thom::{massey_transform, ThomModule};
use serde_json::{json, Map, Value};

use crate::args::{Command, Common, LocalGlobalArgs};
use crate::builtins::builtin;
use crate::error::CliError;
use crate::report::{prime_label, series_json, series_text, Report, Table};
use crate::spec::SpaceSpec;

pub const DEFAULT_MAX_DEGREE: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// A verdict is unknown; fatal only under `--strict`.
    Unknown(String),
    /// A cross-check that must hold did not.
    Invariant(String),
}

pub struct Context {
    pub spec: SpaceSpec,
    pub primes: Vec<u32>,
    pub max_degree: u32,
}

fn sort_primes(primes: &mut Vec<u32>) {
    primes.sort_unstable_by_key(|&p| (p == 0, p));
    primes.dedup();
}

impl Context {
    /// `extra` primes get tables generated for built-ins without being
    /// selected.
    pub fn load(common: &Common, extra: &[u32]) -> Result<Self, CliError> {
        let spec = match (&common.builtin, &common.space) {
            (Some(name), None) => {
                let mut wanted = common.primes.clone();
                wanted.extend_from_slice(extra);
                builtin(name, &wanted)?
            }
            (None, Some(path)) => SpaceSpec::from_file(path)?,
            _ => return Err(CliError::Usage("give exactly one of --builtin and --space".into())),
        };
        let mut primes = if common.primes.is_empty() {
            spec.primes.clone()
        } else {
            common.primes.clone()
        };
        sort_primes(&mut primes);
        let max_degree = common.max_degree.or(spec.max_degree).unwrap_or(DEFAULT_MAX_DEGREE);
        Ok(Context {
            spec,
            primes,
            max_degree,
        })
    }

    pub fn module(&self, p: u32) -> Result<ThomModule, CliError> {
        let n = self.spec.bundle.fiber_dim;
        let truncation = base_truncation_for(n, self.max_degree).max(2 * n - 2);
        Ok(self.spec.module(p, truncation)?)
    }

    fn require_primes(&self, primes: &[u32]) -> Result<(), CliError> {
        if primes.is_empty() {
            return Err(CliError::Usage("no primes selected; pass --prime".into()));
        }
        Ok(())
    }

    /// Runs `f` for every prime on its own thread; results in prime order.
    fn per_prime<T, F>(&self, primes: &[u32], f: F) -> Result<Vec<(u32, T)>, CliError>
    where
        T: Send,
        F: Fn(u32, ThomModule) -> Result<T, CliError> + Sync,
    {
        self.require_primes(primes)?;
        let f = &f;
        let results: Vec<Result<T, CliError>> = thread::scope(|scope| {
            let handles: Vec<_> = primes
                .iter()
                .map(|&p| scope.spawn(move || f(p, self.module(p)?)))
                .collect();
            handles
                .into_iter()
                .map(|h| {
                    h.join()
                        .unwrap_or_else(|_| Err(CliError::Internal("worker thread panicked".into())))
                })
                .collect()
        });
        primes.iter().copied().zip(results).map(|(p, r)| r.map(|v| (p, v))).collect()
    }

    fn report(&self, command: &str, body: Map<String, Value>, text: String) -> Report {
        Report::new(command, &self.spec.name, self.max_degree, body, text)
    }
}

pub fn run(command: &Command) -> Result<(Report, Option<Failure>), CliError> {
    match command {
        Command::LocalGlobal(args) => run_local_global(args),
        _ => {
            let ctx = Context::load(command.common(), &[])?;
            match command {
                Command::Classify(_) => run_classify(&ctx),
                Command::E2(_) => run_e2(&ctx),
                Command::Series(_) => run_series(&ctx),
                Command::Generators(_) => run_generators(&ctx),
                Command::Massey(_) => run_massey(&ctx),
                Command::SplitCheck(_) => run_split_check(&ctx),
                Command::LocalGlobal(_) => unreachable!(),
            }
        }
    }
}

fn counts_json(c: &GeneratorCounts) -> Value {
    json!({
        "shape": c.shape.name(),
        "counts": c.counts.iter().map(|(d, k)| json!([d, k])).collect::<Vec<_>>(),
    })
}

fn counts_text(c: &GeneratorCounts) -> String {
    if c.counts.is_empty() {
        return "none".into();
    }
    c.counts.iter().map(|(d, k)| format!("{d}:{k}")).collect::<Vec<_>>().join(" ")
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

/// Which hypothesis failed, for an unknown verdict.
fn unknown_reason(c: &Classification) -> &'static str {
    let e = &c.evidence;
    if !e.euler_zero {
        "the Euler class is nonzero, so collapse is not known"
    } else if e.wu_zero.is_none() {
        "the Wu class is undefined (odd prime, even fiber dimension)"
    } else {
        "the base has nilpotent elements and the Wu class is nonzero"
    }
}

struct Classified {
    c: Classification,
    wu: Option<String>,
}

fn classify_all(ctx: &Context, primes: &[u32]) -> Result<Vec<(u32, Classified)>, CliError> {
    ctx.per_prime(primes, |_, m| {
        let c = classify(&m, ctx.max_degree)?;
        let wu = m.wu_class().ok().map(|w| m.base().format_class(&w));
        Ok(Classified { c, wu })
    })
}

fn unknown_failure(rows: &[(u32, Classified)]) -> Option<Failure> {
    rows.iter()
        .find(|(_, r)| r.c.verdict == Verdict::Unknown)
        .map(|(p, r)| Failure::Unknown(format!("verdict unknown at p = {p}: {}", unknown_reason(&r.c))))
}

fn run_classify(ctx: &Context) -> Result<(Report, Option<Failure>), CliError> {
    let rows = classify_all(ctx, &ctx.primes)?;
    let mut results = Vec::new();
    let mut table = Table::new(&["prime", "verdict", "euler=0", "wu class", "reduced", "generators"]);
    for (p, r) in &rows {
        let e = &r.c.evidence;
        results.push(json!({
            "prime": p,
            "verdict": r.c.verdict.name(),
            "evidence": {
                "euler_zero": e.euler_zero,
                "wu_class": r.wu,
                "wu_zero": e.wu_zero,
                "nilpotent_free": e.nilpotent_free,
                "fiber_dim": e.n,
                "odd_concentrated": e.odd_concentrated,
            },
            "unknown_reason": (r.c.verdict == Verdict::Unknown).then(|| unknown_reason(&r.c)),
            "generators": r.c.counts.as_ref().map(counts_json),
        }));
        table.row(vec![
            prime_label(*p),
            r.c.verdict.name().into(),
            yes_no(e.euler_zero),
            r.wu.clone().unwrap_or_else(|| "-".into()),
            yes_no(e.nilpotent_free),
            r.c.counts.as_ref().map_or_else(|| "-".into(), counts_text),
        ]);
    }
    let mut body = Map::new();
    body.insert("results".into(), Value::Array(results));
    let mut text = table.render();
    for (p, r) in &rows {
        if r.c.verdict == Verdict::Unknown {
            text.push_str(&format!("\np = {p}: {}\n", unknown_reason(&r.c)));
        }
    }
    Ok((ctx.report("classify", body, text), unknown_failure(&rows)))
}

fn run_generators(ctx: &Context) -> Result<(Report, Option<Failure>), CliError> {
    let rows = classify_all(ctx, &ctx.primes)?;
    let mut results = Vec::new();
    let mut table = Table::new(&["prime", "shape", "degree:count"]);
    for (p, r) in &rows {
        results.push(json!({
            "prime": p,
            "verdict": r.c.verdict.name(),
            "generators": r.c.counts.as_ref().map(counts_json),
        }));
        let (shape, counts) = match &r.c.counts {
            Some(c) => (c.shape.name().to_string(), counts_text(c)),
            None => ("unknown".into(), unknown_reason(&r.c).into()),
        };
        table.row(vec![prime_label(*p), shape, counts]);
    }
    let mut body = Map::new();
    body.insert("results".into(), Value::Array(results));
    Ok((ctx.report("generators", body, table.render()), unknown_failure(&rows)))
}

fn run_e2(ctx: &Context) -> Result<(Report, Option<Failure>), CliError> {
    let n = ctx.spec.bundle.fiber_dim;
    let rows = ctx.per_prime(&ctx.primes, |_, m| {
        let page = E2Page::compute(&m, ctx.max_degree)?;
        let edge = EdgeColumn::of_page(&page);
        Ok((page, edge))
    })?;
    let mut results = Vec::new();
    let mut text = String::new();
    for (p, (page, edge)) in &rows {
        results.push(json!({
            "prime": p,
            "collapse": page.collapse,
            "entries": page.dims.iter().map(|(&(s, t), d)| json!([s, t, d])).collect::<Vec<_>>(),
            "total": series_json(&page.total_series()),
            "edge": {
                "dims": edge.dims.iter().map(|(t, d)| json!([t, d])).collect::<Vec<_>>(),
                "injective": edge.injective,
            },
        }));
        text.push_str(&format!("p = {}, collapse: {}\n", prime_label(*p), yes_no(page.collapse)));
        let mut header = vec!["s \\ t-s".to_string()];
        header.extend((0..=ctx.max_degree).map(|k| k.to_string()));
        let mut table = Table::new(&header);
        for s in 0..=ctx.max_degree / (n - 1) {
            let mut row = vec![s.to_string()];
            row.extend((0..=ctx.max_degree).map(|k| match page.dim(s, k + s) {
                0 => ".".to_string(),
                d => d.to_string(),
            }));
            table.row(row);
        }
        text.push_str(&table.render());
        text.push_str(&format!("total: {}\n", series_text(&page.total_series())));
        text.push_str(&format!("edge column injective: {}\n\n", yes_no(edge.injective)));
    }
    let mut body = Map::new();
    body.insert("results".into(), Value::Array(results));
    Ok((ctx.report("e2", body, text), None))
}

fn run_series(ctx: &Context) -> Result<(Report, Option<Failure>), CliError> {
    let rows = ctx.per_prime(&ctx.primes, |_, m| Ok(loop_series(&m, ctx.max_degree)?))?;
    let mut results = Vec::new();
    let mut table = Table::new(&["prime", "coefficients from degree 0"]);
    for (p, s) in &rows {
        results.push(json!({ "prime": p, "coefficients": series_json(s) }));
        table.row(vec![prime_label(*p), series_text(s)]);
    }
    let mut body = Map::new();
    body.insert("results".into(), Value::Array(results));
    Ok((ctx.report("series", body, table.render()), None))
}

fn run_massey(ctx: &Context) -> Result<(Report, Option<Failure>), CliError> {
    if ctx.spec.massey.is_none() {
        return Err(CliError::Usage(format!(
            "space `{}` has no sphere-bundle relation (massey.s, massey.t)",
            ctx.spec.name
        )));
    }
    let rows = ctx.per_prime(&ctx.primes, |_, m| {
        let data = ctx.spec.massey_data(&m).expect("checked above")?;
        let base = m.base();
        let n = m.n();
        let consistent = m.massey_consistency(&data).ok();
        let wu = m.wu_class().ok().map(|w| base.format_class(&w));
        let mut transforms = Vec::new();
        for w in base.monomial_basis(n - 1).map_err(|e| CliError::Internal(e.to_string()))? {
            let w = base.monomial_class(w.clone());
            let moved = massey_transform(base, n, &data, &w).map_err(|e| CliError::Internal(e.to_string()))?;
            let back = massey_transform(base, n, &moved, &w.neg()).map_err(|e| CliError::Internal(e.to_string()))?;
            transforms.push((
                base.format_class(&w),
                base.format_class(&moved.s),
                base.format_class(&moved.t),
                back == data,
            ));
        }
        Ok((
            base.format_class(&data.s),
            base.format_class(&data.t),
            wu,
            consistent,
            transforms,
        ))
    })?;
    let mut results = Vec::new();
    let mut text = String::new();
    let mut failure = None;
    for (p, (s, t, wu, consistent, transforms)) in &rows {
        results.push(json!({
            "prime": p,
            "relation": { "s": s, "t": t },
            "wu_class": wu,
            "t_equals_wu": consistent,
            "transforms": transforms
                .iter()
                .map(|(w, s, t, inv)| json!({ "w": w, "s": s, "t": t, "inverse_restores": inv }))
                .collect::<Vec<_>>(),
        }));
        text.push_str(&format!("p = {}: v^2 = {s} + ({t})*v\n", prime_label(*p)));
        if let Some(c) = consistent {
            text.push_str(&format!("  t = w_(n-1): {}\n", yes_no(*c)));
        }
        if !transforms.is_empty() {
            let mut table = Table::new(&["  v + w", "s'", "t'", "inverse"]);
            for (w, s, t, inv) in transforms {
                table.row(vec![format!("  v + {w}"), s.clone(), t.clone(), yes_no(*inv)]);
                if !inv && failure.is_none() {
                    failure = Some(Failure::Invariant(format!("transform by {w} is not undone at p = {p}")));
                }
            }
            text.push_str(&table.render());
        }
    }
    let mut body = Map::new();
    body.insert("results".into(), Value::Array(results));
    Ok((ctx.report("massey", body, text), failure))
}

fn run_split_check(ctx: &Context) -> Result<(Report, Option<Failure>), CliError> {
    let rows = ctx.per_prime(&ctx.primes, |_, m| Ok(splitting_check(&m, ctx.max_degree)?))?;
    let mut results = Vec::new();
    let mut table = Table::new(&["prime", "holds", "side", "coefficients from degree 0"]);
    let mut failure = None;
    for (p, r) in &rows {
        results.push(json!({
            "prime": p,
            "holds": r.holds,
            "tensor_side": series_json(&r.tensor_side),
            "loop_side": series_json(&r.loop_side),
            "tor_side": series_json(&r.tor_side),
        }));
        let label = prime_label(*p);
        table.row(vec![label, yes_no(r.holds), "tensor".into(), series_text(&r.tensor_side)]);
        table.row(vec![String::new(), String::new(), "loop - 1".into(), series_text(&r.loop_side)]);
        table.row(vec![String::new(), String::new(), "tor".into(), series_text(&r.tor_side)]);
        if !r.holds && failure.is_none() {
            failure = Some(Failure::Invariant(format!("splitting identity fails at p = {p}")));
        }
    }
    let mut body = Map::new();
    body.insert("results".into(), Value::Array(results));
    Ok((ctx.report("split-check", body, table.render()), failure))
}

fn ring_name(excluded: &[u32]) -> String {
    if excluded.is_empty() {
        return "Z".into();
    }
    let inv: Vec<String> = excluded.iter().map(|p| format!("1/{p}")).collect();
    format!("Z[{}]", inv.join(", "))
}

fn run_local_global(args: &LocalGlobalArgs) -> Result<(Report, Option<Failure>), CliError> {
    let mut excluded = args.exclude.clone();
    sort_primes(&mut excluded);
    if excluded.contains(&0) || args.common.primes.contains(&0) {
        return Err(CliError::Usage("local-global works over prime fields; p = 0 is not allowed".into()));
    }
    let ctx = Context::load(&args.common, &excluded)?;
    let sampled: Vec<u32> = if args.common.primes.is_empty() {
        ctx.primes.iter().copied().filter(|p| *p != 0 && !excluded.contains(p)).collect()
    } else {
        ctx.primes.clone()
    };
    if let Some(p) = sampled.iter().find(|p| excluded.contains(p)) {
        return Err(CliError::Usage(format!("prime {p} is both sampled and excluded")));
    }
    let rows = classify_all(&ctx, &sampled)?;
    let excluded_rows = if excluded.is_empty() {
        Vec::new()
    } else {
        classify_all(&ctx, &excluded)?
    };
    let pairs: Vec<(u32, Classification)> = rows.iter().map(|(p, r)| (*p, r.c.clone())).collect();
    let verdict = local_global(&pairs, &excluded)?;

    let (result, summary) = match &verdict {
        LocalGlobal::Polynomial { excluded, counts } => {
            let ring = ring_name(excluded);
            let gens: Vec<Value> = counts.iter().map(|(d, k)| json!([d, k])).collect();
            let listed: Vec<String> = counts.iter().map(|(d, k)| format!("{d}:{k}")).collect();
            (
                json!({ "kind": "polynomial", "ring": ring, "generators": gens }),
                format!("polynomial over {ring}; generators {}", listed.join(" ")),
            )
        }
        LocalGlobal::NotPolynomial { prime, verdict } => (
            json!({ "kind": "not-polynomial", "prime": prime, "verdict": verdict.name() }),
            format!("not polynomial: verdict at p = {prime} is {}", verdict.name()),
        ),
        LocalGlobal::OddGenerator { prime, degree } => (
            json!({ "kind": "odd-generator", "prime": prime, "degree": degree }),
            format!("not polynomial over the integers: odd generator in degree {degree} at p = {prime}"),
        ),
        LocalGlobal::Disagreement {
            prime,
            degree,
            expected,
            found,
        } => (
            json!({ "kind": "disagreement", "prime": prime, "degree": degree, "expected": expected, "found": found }),
            format!("generator counts disagree at p = {prime} in degree {degree}: {expected} vs {found}"),
        ),
        LocalGlobal::Empty => (json!({ "kind": "empty" }), "no primes sampled".into()),
    };

    let mut table = Table::new(&["prime", "role", "verdict", "generators"]);
    let mut sampled_json = Vec::new();
    for (p, r) in &rows {
        sampled_json.push(json!({
            "prime": p,
            "verdict": r.c.verdict.name(),
            "generators": r.c.counts.as_ref().map(counts_json),
        }));
        table.row(vec![
            p.to_string(),
            "sampled".into(),
            r.c.verdict.name().into(),
            r.c.counts.as_ref().map_or_else(|| "-".into(), counts_text),
        ]);
    }
    let mut excluded_json = Vec::new();
    for (p, r) in &excluded_rows {
        excluded_json.push(json!({ "prime": p, "verdict": r.c.verdict.name() }));
        table.row(vec![p.to_string(), "excluded".into(), r.c.verdict.name().into(), "-".into()]);
    }
    let mut body = Map::new();
    body.insert("sampled".into(), Value::Array(sampled_json));
    body.insert("excluded".into(), Value::Array(excluded_json));
    body.insert("result".into(), result);
    let text = format!("{}\n{summary}\n", table.render());
    Ok((ctx.report("local-global", body, text), None))
}
