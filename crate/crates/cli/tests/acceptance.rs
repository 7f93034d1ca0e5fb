//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use loopcoh::builtins::{builtin, NAMES};
use loopcoh::spec::SpaceSpec;
use loopcoh_core::algebra::{AlgebraPresentation, Class, Monomial, Relation, SteenrodOp};
use loopcoh_core::bar::{coproduct, coproduct_element, shuffle, shuffle_elements, tensor_shuffle, BarComplex, BarElement, BarWord};
use loopcoh_core::emss::{base_truncation_for, E2Page};
use loopcoh_core::field::{Field, Scalar};
use loopcoh_core::thom::{massey_transform, MasseyData, ThomModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn module(name: &str, p: u32, truncation: u32) -> ThomModule {
    builtin(name, &[p]).unwrap().module(p, truncation).unwrap()
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_loopcoh"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out) = run_cli(&all);
    ensure(code == 0, || format!("`loopcoh {}` exited with {code}", args.join(" ")))?;
    serde_json::from_slice(&out).map_err(|e| e.to_string())
}

fn results_by_prime(doc: &Value) -> BTreeMap<u64, Value> {
    doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["prime"].as_u64().unwrap(), r.clone()))
        .collect()
}

/// One-letter element `[c·u]` for a base class `c`.
fn letter_element(bar: &BarComplex<'_>, c: &Class) -> BarElement {
    let mut e = BarElement::zero(1, c.degree() + bar.module().n());
    for (m, k) in c.terms() {
        e.add_term(bar.word(&[m.clone()]), k.clone());
    }
    e
}

fn terms(e: &BarElement) -> Vec<(BarWord, Scalar)> {
    e.terms().map(|(w, c)| (w.clone(), c.clone())).collect()
}

// 1
fn collapse_oracle() -> Check {
    let mut cells = 0;
    for name in ["cpinf-eta-plus-r", "spin3"] {
        for p in [2, 3] {
            let m = module(name, p, 20);
            let bar = BarComplex::new(&m);
            let n = m.n();
            for t in 0..=20 {
                for s in 0..=t / n {
                    let tor = bar.tor_dim(s, t).map_err(|e| e.to_string())?;
                    let words = bar.basis(s, t).unwrap().len();
                    ensure(tor == words, || format!("{name} p={p} (s,t)=({s},{t}): Tor {tor}, words {words}"))?;
                    cells += 1;
                }
            }
        }
    }
    Ok(format!("{cells} bidegrees"))
}

// 2
fn nonzero_euler_oracle() -> Check {
    let n_max = 12;
    let m = module("cpinf-eta", 2, base_truncation_for(2, n_max));
    let mut expected = vec![0u64; n_max as usize + 1];
    expected[0] = 1;
    expected[1] = 1;
    let page = E2Page::compute(&m, n_max).map_err(|e| e.to_string())?;
    let total: Vec<u64> = page.total_series().coeffs().iter().map(|c| c.try_into().unwrap()).collect();
    ensure(total == expected, || format!("sparse page totals {total:?}"))?;
    // dense homology, one bidegree at a time
    let bar = BarComplex::new(&m);
    let mut dense = vec![0u64; n_max as usize + 1];
    for s in 0..=n_max {
        for t in 2 * s..=n_max + s {
            dense[(t - s) as usize] += bar.tor_dim(s, t).map_err(|e| e.to_string())? as u64;
        }
    }
    ensure(dense == expected, || format!("dense totals {dense:?}"))?;
    let doc = cli_json(&["e2", "--builtin", "cpinf-eta", "--prime", "2", "--max-degree", "12"])?;
    let cli_total: Vec<u64> = doc["results"][0]["total"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    ensure(cli_total == expected, || format!("cli totals {cli_total:?}"))?;
    Ok("totals 1 1 0 ... 0 by sparse, dense and CLI".into())
}

// 3
fn classification_table() -> Check {
    let table: [(&str, &[(u64, &str)]); 2] = [
        (
            "cpinf-eta-plus-r",
            &[(2, "polynomial"), (3, "polynomial"), (5, "polynomial"), (0, "polynomial")],
        ),
        ("spin3", &[(2, "exterior"), (3, "polynomial"), (5, "polynomial")]),
    ];
    let mut rows = 0;
    for (name, expected) in table {
        let mut args = vec!["classify", "--builtin", name, "--max-degree", "16"];
        let primes: Vec<String> = expected.iter().map(|(p, _)| p.to_string()).collect();
        for p in &primes {
            args.extend(["--prime", p]);
        }
        let doc = cli_json(&args)?;
        let results = results_by_prime(&doc);
        for (p, verdict) in expected {
            let got = results[p]["verdict"].as_str().unwrap_or("");
            ensure(got == *verdict, || format!("{name} p={p}: {got}, expected {verdict}"))?;
            rows += 1;
        }
    }
    Ok(format!("{rows} verdicts"))
}

// 4
fn mechanisms() -> Check {
    let mut checked = 0;
    // Sq^{|x|+n-1}[x u] = [x^2 Sq^{n-1}u]
    let m = module("cpinf-eta-plus-r", 2, 30);
    let bar = BarComplex::new(&m);
    let base = m.base();
    let n = m.n();
    let w = m.orientation_op(SteenrodOp::Sq(n - 1)).unwrap();
    for d in 0..=10 {
        for x in base.monomial_basis(d).unwrap() {
            let xc = base.monomial_class(x.clone());
            let actual = bar.steenrod_bar(SteenrodOp::Sq(d + n - 1), &bar.word(&[x.clone()])).unwrap();
            let expected = letter_element(&bar, &base.multiply(&base.multiply(&xc, &xc), &w));
            ensure(!expected.is_zero() && terms(&actual) == terms(&expected), || {
                format!("cpinf-eta-plus-r Sq on [{}u]", base.format_monomial(x))
            })?;
            checked += 1;
        }
    }

    // spin3 at p = 2: Sq^{Σk_i + (r+1)(n-1)} kills every word of length r+1 <= 3
    let m = module("spin3", 2, 30);
    let bar = BarComplex::new(&m);
    let n = m.n();
    for len in 1..=3 {
        for t in len * n..=16 {
            for word in bar.basis(len, t).unwrap() {
                let index: u32 = word.letters().iter().map(|l| l.degree() - 1).sum();
                let v = bar.steenrod_bar(SteenrodOp::Sq(index), &word).unwrap();
                ensure(v.is_zero(), || format!("spin3 Sq^{index} on {}", bar.format_word(&word)))?;
                checked += 1;
            }
        }
    }

    // P^{k+m}[x u] = [x^p W u] at p = 3, |x| = 2k, n = 2m + 1
    for name in ["cpinf-eta-plus-r", "spin3"] {
        let m = module(name, 3, 40);
        let bar = BarComplex::new(&m);
        let base = m.base();
        let half = (m.n() - 1) / 2;
        let wu = m.orientation_op(SteenrodOp::P(half)).unwrap();
        for d in (0..=10).step_by(2) {
            for x in base.monomial_basis(d).unwrap() {
                let xc = base.monomial_class(x.clone());
                let actual = bar.steenrod_bar(SteenrodOp::P(d / 2 + half), &bar.word(&[x.clone()])).unwrap();
                let expected = letter_element(&bar, &base.multiply(&base.pow(&xc, 3), &wu));
                ensure(!expected.is_zero() && terms(&actual) == terms(&expected), || {
                    format!("{name} P on [{}u]", base.format_monomial(x))
                })?;
                checked += 1;
            }
        }
    }

    // P^m u = 0 at p = 3: P^{m+k}[x u] = [(P^k x) P^m u] = 0 and the verdict is p-truncated
    let spec = SpaceSpec::from_json(
        r#"{
            "name": "cp-trivial-3",
            "base": { "generators": [{ "name": "x", "degree": 2 }] },
            "bundle": { "fiber_dim": 3, "orientation": { "3": {} } }
        }"#,
    )
    .map_err(|e| e.to_string())?;
    let m = spec.module(3, 40).map_err(|e| e.to_string())?;
    let c = loopcoh_core::emss::classify(&m, 12).map_err(|e| e.to_string())?;
    ensure(c.verdict == loopcoh_core::emss::Verdict::PTruncated, || format!("verdict {:?}", c.verdict))?;
    let bar = BarComplex::new(&m);
    for k in 0..=5 {
        let x = Monomial::new(vec![k]);
        let v = bar.steenrod_bar(SteenrodOp::P(k + 1), &bar.word(&[x])).unwrap();
        ensure(v.is_zero(), || format!("P^{} on [x^{k} u]", k + 1))?;
        checked += 1;
    }
    Ok(format!("{checked} identities"))
}

/// Degree-wise counts of monomials in the given generators, each exponent
/// below `height` when set.
fn enumerate_monomials(degrees: &[u32], height: Option<u32>, top: u32) -> Vec<u64> {
    fn go(degrees: &[u32], height: Option<u32>, top: u32, used: u32, out: &mut [u64]) {
        let Some((&d, rest)) = degrees.split_first() else {
            out[used as usize] += 1;
            return;
        };
        let mut e = 0;
        while used + e * d <= top && height.is_none_or(|h| e < h) {
            go(rest, height, top, used + e * d, out);
            e += 1;
        }
    }
    let mut out = vec![0; top as usize + 1];
    go(degrees, height, top, 0, &mut out);
    out
}

// 5
fn generator_counts() -> Check {
    let top = 12;
    let cases: [(&str, &str, &[(u64, u64)], Option<u32>); 2] = [
        ("cpinf-eta-plus-r", "polynomial", &[(2, 1), (4, 1), (6, 2), (8, 3)], None),
        ("spin3", "exterior", &[(2, 1), (4, 1), (6, 1), (8, 2)], Some(2)),
    ];
    for (name, shape, expected, height) in cases {
        let doc = cli_json(&["generators", "--builtin", name, "--prime", "2", "--max-degree", "12"])?;
        let gens = &doc["results"][0]["generators"];
        ensure(gens["shape"] == shape, || format!("{name}: shape {}", gens["shape"]))?;
        let counts: BTreeMap<u64, u64> = gens["counts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|pair| (pair[0].as_u64().unwrap(), pair[1].as_u64().unwrap()))
            .collect();
        for (d, c) in expected {
            ensure(counts.get(d) == Some(c), || format!("{name}: count in degree {d} is {:?}", counts.get(d)))?;
        }
        // free algebra on these generators, by enumeration, against bar words
        let mut degrees = Vec::new();
        for (&d, &c) in &counts {
            degrees.extend(std::iter::repeat_n(d as u32, c as usize));
        }
        let free = enumerate_monomials(&degrees, height, top);
        let m = module(name, 2, base_truncation_for(3, top));
        let bar = BarComplex::new(&m);
        let mut words = vec![0u64; top as usize + 1];
        for s in 0..=top / (m.n() - 1) {
            for t in s * m.n()..=top + s {
                words[(t - s) as usize] += bar.basis(s, t).unwrap().len() as u64;
            }
        }
        ensure(free == words, || format!("{name}: monomials {free:?}, words {words:?}"))?;
    }
    Ok("both tables confirmed to degree 12".into())
}

fn mixed(p: u32) -> ThomModule {
    let b = AlgebraPresentation::builder(Field::new(p).unwrap(), 24)
        .generator("x", 2, Relation::Polynomial)
        .generator("z", 3, Relation::Truncated(2))
        .build()
        .unwrap();
    ThomModule::new(b, 2, Class::zero(2), vec![]).unwrap()
}

fn random_word(bar: &BarComplex<'_>, rng: &mut ChaCha8Rng, max_len: usize, max_total: u32) -> BarWord {
    loop {
        let len = rng.gen_range(0..=max_len);
        let letters: Vec<Monomial> = (0..len)
            .map(|_| Monomial::new(vec![rng.gen_range(0..3), rng.gen_range(0..2)]))
            .collect();
        let w = bar.word(&letters);
        if w.total_degree() <= max_total {
            return w;
        }
    }
}

// 6
fn hopf_shuffle_suite() -> Check {
    const CASES: usize = 250;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut total = 0;
    for p in [2u32, 3] {
        let m = mixed(p);
        let bar = BarComplex::new(&m);
        let f = Field::new(p).unwrap();
        for case in 0..CASES {
            let fail = |what: &str| format!("p={p} case {case}: {what}");
            let w = random_word(&bar, &mut rng, 4, 16);
            ensure(bar.differential_element(&bar.differential(&w)).is_zero(), || fail("d^2"))?;

            let a = random_word(&bar, &mut rng, 2, 5);
            let b = random_word(&bar, &mut rng, 2, 5);
            let c = random_word(&bar, &mut rng, 2, 5);
            let ea = BarElement::from_word(a.clone(), f);
            let ec = BarElement::from_word(c.clone(), f);
            let left = shuffle_elements(&shuffle(&a, &b, f), &ec, f);
            let right = shuffle_elements(&ea, &shuffle(&b, &c, f), f);
            ensure(terms(&left) == terms(&right), || fail("associativity"))?;

            let sign = f.sign(u64::from(a.total_degree()) * u64::from(b.total_degree()));
            ensure(terms(&shuffle(&a, &b, f)) == terms(&shuffle(&b, &a, f).scale(&sign)), || {
                fail("graded commutativity")
            })?;

            let mut l3 = Vec::new();
            let mut r3 = Vec::new();
            for (x, y) in coproduct(&w) {
                for (x1, x2) in coproduct(&x) {
                    l3.push((x1, x2, y.clone()));
                }
                for (y1, y2) in coproduct(&y) {
                    r3.push((x.clone(), y1, y2));
                }
            }
            l3.sort();
            r3.sort();
            ensure(l3 == r3, || fail("coassociativity"))?;

            let lhs = coproduct_element(&shuffle(&a, &b, f));
            let rhs = tensor_shuffle(
                &coproduct_element(&BarElement::from_word(a.clone(), f)),
                &coproduct_element(&BarElement::from_word(b.clone(), f)),
                f,
            );
            ensure(lhs == rhs, || fail("Hopf compatibility"))?;

            let k = rng.gen_range(0..if p == 2 { 8 } else { 4 });
            let op = |i| SteenrodOp::power(p, i);
            let lhs = bar.steenrod_element(op(k), &shuffle(&a, &b, f)).map_err(|e| e.to_string())?;
            let mut rhs = BarElement::zero(0, 0);
            for i in 0..=k {
                let x = bar.steenrod_bar(op(i), &a).map_err(|e| e.to_string())?;
                let y = bar.steenrod_bar(op(k - i), &b).map_err(|e| e.to_string())?;
                rhs = rhs.add(&shuffle_elements(&x, &y, f));
            }
            ensure(terms(&lhs) == terms(&rhs), || fail("Cartan on the bar construction"))?;
            total += 1;
        }
    }
    Ok(format!("{total} cases x 6 properties"))
}

fn random_class(base: &AlgebraPresentation, degree: u32, rng: &mut ChaCha8Rng) -> Class {
    let p = i64::from(base.prime().max(7));
    let terms: Vec<(Vec<u32>, i64)> = base
        .monomial_basis(degree)
        .unwrap()
        .iter()
        .map(|m| (m.exponents().to_vec(), rng.gen_range(-p..p)))
        .collect();
    let refs: Vec<(&[u32], i64)> = terms.iter().map(|(e, c)| (e.as_slice(), *c)).collect();
    base.class(degree, &refs).unwrap()
}

// 7
fn massey_suite() -> Check {
    let spec = builtin("spin3", &[2]).unwrap();
    let m = spec.module(2, 10).unwrap();
    let data = spec.massey_data(&m).unwrap().unwrap();
    ensure(data.s == m.base().generator_class(0) && data.t.is_zero(), || "spin3 relation".into())?;
    let doc = cli_json(&["massey", "--builtin", "spin3", "--prime", "2", "--max-degree", "8"])?;
    let rel = &doc["results"][0]["relation"];
    ensure(rel["s"] == "y" && rel["t"] == "0", || format!("spin3 relation in report: {rel}"))?;

    for name in ["cpinf-eta-plus-r", "spin3", "spin2-suspension"] {
        let spec = builtin(name, &[2]).unwrap();
        let m = spec.module(2, 10).unwrap();
        let data = spec.massey_data(&m).unwrap().unwrap();
        ensure(m.massey_consistency(&data) == Ok(true), || format!("{name}: t != w_(n-1)"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut cases = 0;
    for p in [2u32, 3] {
        // n odd over x(2), y(4); n even over a(1), x(2), z(3)
        let odd = AlgebraPresentation::builder(Field::new(p).unwrap(), 16)
            .generator("x", 2, Relation::Polynomial)
            .generator("y", 4, Relation::Polynomial)
            .build()
            .unwrap();
        let even = AlgebraPresentation::builder(Field::new(p).unwrap(), 16)
            .generator("a", 1, Relation::Truncated(2))
            .generator("x", 2, Relation::Polynomial)
            .generator("z", 3, Relation::Polynomial)
            .build()
            .unwrap();
        for (base, n) in [(&odd, 5u32), (&even, 4u32)] {
            for _ in 0..100 {
                let data = MasseyData::new(
                    random_class(base, 2 * n - 2, &mut rng),
                    random_class(base, n - 1, &mut rng),
                    n,
                )
                .unwrap();
                let w = random_class(base, n - 1, &mut rng);
                let moved = massey_transform(base, n, &data, &w).unwrap();
                let back = massey_transform(base, n, &moved, &w.neg()).unwrap();
                ensure(back == data, || format!("p={p} n={n}: transform by w then -w moved the relation"))?;
                let idle = massey_transform(base, n, &data, &Class::zero(n - 1)).unwrap();
                ensure(idle == data, || format!("p={p} n={n}: transform by 0"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("relation, consistency on 3 spaces, {cases} transforms"))
}

fn series_u64(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect()
}

// 8
fn splitting_identity() -> Check {
    let mut rows = 0;
    for name in ["cpinf-eta-plus-r", "spin3", "sphere-3", "sphere-4"] {
        let doc = cli_json(&["split-check", "--builtin", name, "--max-degree", "16"])?;
        for (p, r) in results_by_prime(&doc) {
            let tensor = series_u64(&r["tensor_side"]);
            let looped = series_u64(&r["loop_side"]);
            let tor = series_u64(&r["tor_side"]);
            ensure(r["holds"] == true, || format!("{name} p={p}: holds = false"))?;
            ensure(tensor == looped, || format!("{name} p={p}: tensor {tensor:?} vs loop {looped:?}"))?;
            ensure(tor[0] == 1 && tor[1..] == looped[1..], || format!("{name} p={p}: tor {tor:?}"))?;
            rows += 1;
        }
    }
    Ok(format!("{rows} (space, prime) pairs at N = 16"))
}

// 9
fn local_global_verdicts() -> Check {
    let doc = cli_json(&[
        "local-global", "--builtin", "cpinf-eta-plus-r", "--prime", "2", "--prime", "3", "--prime", "5", "--max-degree", "16",
    ])?;
    let r = &doc["result"];
    ensure(r["kind"] == "polynomial" && r["ring"] == "Z", || format!("cpinf-eta-plus-r: {r}"))?;

    let doc = cli_json(&[
        "local-global", "--builtin", "spin3", "--prime", "3", "--prime", "5", "--prime", "7", "--exclude", "2",
        "--max-degree", "16",
    ])?;
    let r = &doc["result"];
    ensure(r["kind"] == "polynomial" && r["ring"] == "Z[1/2]", || format!("spin3: {r}"))?;
    let excluded = &doc["excluded"][0];
    ensure(excluded["prime"] == 2 && excluded["verdict"] == "exterior", || format!("spin3 excluded: {excluded}"))?;
    Ok("Z for cpinf-eta-plus-r, Z[1/2] for spin3 with p = 2 exterior".into())
}

// 10
fn determinism() -> Check {
    let commands = ["classify", "e2", "series", "generators", "massey", "split-check", "local-global"];
    let mut runs = 0;
    for name in NAMES {
        for cmd in commands {
            let args = [cmd, "--builtin", name, "--max-degree", "12", "--format", "json"];
            let (c1, o1) = run_cli(&args);
            let (c2, o2) = run_cli(&args);
            ensure(c1 == c2 && o1 == o2, || format!("{cmd} on {name} differs between runs"))?;
            ensure(!o1.is_empty(), || format!("{cmd} on {name} printed nothing"))?;
            serde_json::from_slice::<Value>(&o1).map_err(|e| format!("{cmd} on {name}: {e}"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} command/space pairs, byte-identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 10] = [
        ("collapse oracle", collapse_oracle, Some(Duration::from_secs(5))),
        ("nonzero-Euler oracle", nonzero_euler_oracle, Some(Duration::from_secs(5))),
        ("classification table", classification_table, None),
        ("mechanism identities", mechanisms, None),
        ("generator counts", generator_counts, None),
        ("Hopf/shuffle suite", hopf_shuffle_suite, None),
        ("Massey suite", massey_suite, None),
        ("splitting identity", splitting_identity, None),
        ("local-global", local_global_verdicts, None),
        ("determinism", determinism, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
