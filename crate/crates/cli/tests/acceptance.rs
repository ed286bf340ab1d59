//! Acceptance criteria, one line each. Exact arithmetic throughout, so every
//! comparison has zero tolerance; runtime limits are wall-clock per criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use qcat::commands::{embedding_suite, injective_against, naturality_failure, Options};
use qcat::fixtures;
use qcat::report::Report;
use qcat::suite;
use qcat_core::monadic::{algebra_check, is_dense, kz_check, split_fork_check, EquivalenceRelation};
use qcat_core::presheaf::{
    cocomplete_check, kan_extension, smear, star_mate, yoneda_lemma_at, yoneda_theorem, PresheafCategory,
};
use qcat_core::tcat::all_functors;
use qcat_core::topo::{phi_iso_check, FiniteSpace};
use qcat_core::{Quantale, TCategory, TFunctor, TModule, VRel, Value, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fails(r: &Report) -> Vec<String> {
    r.checks
        .iter()
        .filter(|c| c.verdict.is_fail() || c.verdict == Verdict::UnknownWithinBound)
        .map(|c| format!("{} [{}] {}", c.name, c.verdict, c.counterexample.clone().unwrap_or_default()))
        .collect()
}

// ---- oracles over plain boolean matrices ----

fn le_matrix(c: &TCategory) -> Vec<Vec<bool>> {
    (0..c.len()).map(|i| (0..c.len()).map(|j| c.le_points(i, j)).collect()).collect()
}

/// Every subset has an upper bound below all upper bounds.
fn lattice_oracle(le: &[Vec<bool>]) -> bool {
    let n = le.len();
    (0u32..1 << n).all(|s| {
        let ubs: Vec<usize> = (0..n).filter(|&u| (0..n).all(|x| s >> x & 1 == 0 || le[x][u])).collect();
        ubs.iter().any(|&l| ubs.iter().all(|&u| le[l][u]))
    })
}

fn preorder_count_oracle(n: usize) -> usize {
    let cells = n * n;
    (0u64..1 << cells)
        .filter(|&m| {
            let r = |i: usize, j: usize| m >> (i * n + j) & 1 == 1;
            (0..n).all(|i| r(i, i))
                && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(r(i, j) && r(j, k)) || r(i, k))))
        })
        .count()
}

/// Down-sets of a preorder as bit masks.
fn down_sets(le: &[Vec<bool>]) -> Vec<u32> {
    let n = le.len();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|x| s >> x & 1 == 0 || (0..n).all(|y| !le[y][x] || s >> y & 1 == 1)))
        .collect()
}

fn mask_of(v: &[Value]) -> u32 {
    v.iter().enumerate().filter(|(_, b)| **b == Value::Bool(true)).fold(0, |m, (i, _)| m | 1 << i)
}

fn join_in(le: &[Vec<bool>], a: usize, b: usize) -> usize {
    let n = le.len();
    let ubs: Vec<usize> = (0..n).filter(|&u| le[a][u] && le[b][u]).collect();
    *ubs.iter().find(|&&l| ubs.iter().all(|&u| le[l][u])).expect("lattice")
}

fn bool_lattices(max_n: usize) -> Vec<Arc<TCategory>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for c in fixtures::preorders_up_to_iso(n).unwrap() {
            let le = le_matrix(&c);
            let antisymmetric = (0..n).all(|i| (0..n).all(|j| i == j || !(le[i][j] && le[j][i])));
            if antisymmetric && lattice_oracle(&le) {
                out.push(c);
            }
        }
    }
    out
}

// ---- criteria ----

fn residuation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut quantales = vec![Quantale::Bool2];
    quantales.extend((2..=6).map(|n| Quantale::chain(n).unwrap()));
    let mut triples = 0;
    for q in quantales {
        let el = q.enumerate().unwrap();
        for u in &el {
            for v in &el {
                // hom(u, v) is the largest w with w ⊗ u ≤ v
                let best = el.iter().filter(|w| q.leq(&q.otimes(w, u), v)).last().unwrap();
                ensure(q.residual(u, v) == *best, || format!("{q}: hom({u},{v})"))?;
                for w in &el {
                    triples += 1;
                    ensure(q.leq(&q.otimes(w, u), v) == q.leq(w, &q.residual(u, v)), || {
                        format!("{q}: w={w} u={u} v={v}")
                    })?;
                }
            }
        }
    }
    let q = Quantale::Lawvere;
    for _ in 0..10_000 {
        let (w, u, v) = (
            suite::random_distance(&mut rng),
            suite::random_distance(&mut rng),
            suite::random_distance(&mut rng),
        );
        triples += 1;
        ensure(q.leq(&q.otimes(&w, &u), &v) == q.leq(&w, &q.residual(&u, &v)), || {
            format!("lawvere: w={w} u={u} v={v}")
        })?;
    }
    Ok(format!("{triples} triples"))
}

/// `⟨y(x), φ⟩ = ⋀_z hom(a(z, x), φ(z))` over the identity theory.
fn bracket_oracle(q: Quantale, c: &TCategory, x: usize, phi: &[Value]) -> Value {
    q.inf((0..c.len()).map(|z| q.residual(c.hom(z, x), &phi[z])).collect::<Vec<_>>().iter())
}

fn presheaf_oracle(q: Quantale, c: &TCategory) -> Vec<Vec<Value>> {
    let el = q.enumerate().unwrap();
    let n = c.len();
    let mut out = Vec::new();
    for mut code in 0..el.len().pow(n as u32) {
        let mut phi = Vec::with_capacity(n);
        for _ in 0..n {
            phi.push(el[code % el.len()].clone());
            code /= el.len();
        }
        if (0..n).all(|x| (0..n).all(|y| q.leq(&q.otimes(c.hom(x, y), &phi[y]), &phi[x]))) {
            out.push(phi);
        }
    }
    out
}

fn yoneda_lemma() -> Outcome {
    let mut checked = 0;
    for (q, max_n) in [(Quantale::Bool2, 3), (Quantale::chain(3).unwrap(), 2)] {
        for n in 1..=max_n {
            for c in fixtures::v_categories(q, n).unwrap() {
                let px = PresheafCategory::new(c.clone()).unwrap();
                let oracle = presheaf_oracle(q, &c);
                ensure(oracle.len() == px.len(), || format!("{q}: presheaf count on {:?}", c.structure()))?;
                let y = px.yoneda().unwrap();
                for phi in &oracle {
                    let i = px.index_of(phi).ok_or_else(|| format!("{q}: missing presheaf"))?;
                    for x in 0..n {
                        checked += 1;
                        let lib = px.category().hom(y.apply(x), i);
                        ensure(phi[x] == bracket_oracle(q, &c, x, phi) && *lib == phi[x], || {
                            format!("{q}: {:?} at {x}", c.structure())
                        })?;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let q = Quantale::Lawvere;
    for fx in fixtures::metric_fixtures().unwrap() {
        let c = &fx.cat;
        for _ in 0..100 {
            let raw: Vec<Value> = (0..c.len()).map(|_| suite::random_distance(&mut rng)).collect();
            let phi = smear(c, &raw).unwrap();
            for x in 0..c.len() {
                checked += 1;
                ensure(phi[x] == bracket_oracle(q, c, x, &phi), || format!("{}: {x}", fx.name))?;
            }
            ensure(yoneda_lemma_at(c, &phi), || fx.name.clone())?;
        }
    }
    Ok(format!("{checked} equalities"))
}

fn yoneda_theorem_exhaustive() -> Outcome {
    let q = Quantale::Bool2;
    let mut cats = Vec::new();
    for n in 1..=2 {
        cats.extend(fixtures::preorders(n).unwrap());
    }
    let modules = |x: &Arc<TCategory>, y: &Arc<TCategory>| -> Vec<TModule> {
        let cells = x.len() * y.len();
        (0u32..1 << cells)
            .map(|m| {
                let rel = VRel::from_fn(q, x.carrier().clone(), y.carrier().clone(), |i, j| {
                    Value::Bool(m >> (i * y.len() + j) & 1 == 1)
                });
                TModule::new(x.clone(), y.clone(), rel).unwrap()
            })
            .filter(|m| m.is_module().unwrap())
            .collect()
    };
    let mut pairs = 0;
    for x in &cats {
        let px = PresheafCategory::new(x.clone()).unwrap();
        for z in &cats {
            for y in &cats {
                for psi in modules(x, z) {
                    let mpsi = px.mate(&psi).unwrap();
                    for phi in modules(x, y) {
                        pairs += 1;
                        let mphi = px.mate(&phi).unwrap();
                        let ext = phi.extend(&psi).unwrap();
                        for zz in 0..z.len() {
                            for yy in 0..y.len() {
                                // (φ ↙ ψ)(z, y) = ⋀_x hom(ψ(x, z), φ(x, y))
                                let direct = q.inf(
                                    (0..x.len())
                                        .map(|xx| q.residual(psi.rel().get(xx, zz), phi.rel().get(xx, yy)))
                                        .collect::<Vec<_>>()
                                        .iter(),
                                );
                                let hat = px.category().hom(mpsi.apply(zz), mphi.apply(yy));
                                ensure(*ext.rel().get(zz, yy) == direct && *hat == direct, || {
                                    format!("ψ={:?} φ={:?}", psi.rel(), phi.rel())
                                })?;
                            }
                        }
                        ensure(yoneda_theorem(&psi, &phi).unwrap(), || format!("ψ={:?}", psi.rel()))?;
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} module pairs"))
}

fn char_cocomplete() -> Outcome {
    let counts: Vec<usize> = (1..=3).map(|n| fixtures::preorders(n).unwrap().len()).collect();
    let oracle: Vec<usize> = (1..=3).map(preorder_count_oracle).collect();
    ensure(counts == oracle && oracle[2] == 29, || format!("counts {counts:?} vs {oracle:?}"))?;
    let suite = embedding_suite(Quantale::Bool2, 4).map_err(|e| e.to_string())?;
    let (mut total, mut lattices) = (0, 0);
    for n in 1..=3 {
        for c in fixtures::preorders(n).unwrap() {
            total += 1;
            let px = PresheafCategory::new(c.clone()).unwrap();
            let rep = cocomplete_check(&px).unwrap();
            let injective = injective_against(&c, &suite).is_none();
            let sup = px.sup_search().unwrap().is_some();
            let left_adjoint = px.yoneda_left_adjoint().unwrap().is_some();
            let lattice = lattice_oracle(&le_matrix(&c));
            lattices += lattice as usize;
            let all = [injective, sup, left_adjoint, rep.colimits, rep.cocomplete(), lattice];
            ensure(all.iter().all(|&b| b == lattice) && rep.agree(), || {
                format!("{}: {all:?}", fixtures::describe(&c))
            })?;
        }
    }
    Ok(format!("{total} preorders, {lattices} complete, {} embeddings", suite.len()))
}

fn hat_cocomplete() -> Outcome {
    let mut n_cats = 0;
    for n in 1..=3 {
        for c in fixtures::preorders(n).unwrap() {
            n_cats += 1;
            let px = PresheafCategory::new(c.clone()).unwrap();
            let pxx = PresheafCategory::new(px.category().clone()).unwrap();
            let mu = px.yoneda_inverse(&pxx).unwrap();
            ensure(algebra_check(&mu, &pxx).unwrap(), || fixtures::describe(&c))?;
        }
    }
    Ok(format!("{n_cats} presheaf categories"))
}

fn kan() -> Outcome {
    let lats = bool_lattices(4);
    ensure(lats.len() == 5, || format!("{} lattices on at most 4 points", lats.len()))?;
    let mut n_fun = 0;
    for n in 1..=2 {
        for a in fixtures::preorders(n).unwrap() {
            let pa = PresheafCategory::new(a.clone()).unwrap();
            let y = pa.yoneda().unwrap();
            let downs = down_sets(&le_matrix(&a));
            for l in &lats {
                let lle = le_matrix(l);
                let pl = PresheafCategory::new(l.clone()).unwrap();
                let sup = pl.sup_search().unwrap().ok_or("lattice without Sup")?;
                let bottom = (0..l.len()).find(|&b| (0..l.len()).all(|u| lle[b][u])).unwrap();
                for m in all_functors(&a, l) {
                    n_fun += 1;
                    let f = TFunctor::new(a.clone(), l.clone(), m.clone()).unwrap();
                    let fl = kan_extension(&f, &sup, &pa, &pl).unwrap();
                    ensure(y.then(&fl).unwrap().equivalent(&f), || format!("f_L·y ≠ f for {m:?}"))?;
                    ensure(fl.is_left_adjoint_to(&star_mate(&f, &pa).unwrap()), || format!("f_L ⋢ ⌜f_*⌝ for {m:?}"))?;
                    // every join-preserving g on down-sets with g(↓x) = f(x)
                    let mut found = Vec::new();
                    let k = downs.len();
                    for mut code in 0..l.len().pow(k as u32) {
                        let mut g = Vec::with_capacity(k);
                        for _ in 0..k {
                            g.push(code % l.len());
                            code /= l.len();
                        }
                        let at = |s: u32| g[downs.iter().position(|&d| d == s).unwrap()];
                        let joins = at(0) == bottom
                            && downs.iter().all(|&s| downs.iter().all(|&t| at(s | t) == join_in(&lle, at(s), at(t))));
                        let extends = (0..a.len()).all(|x| {
                            let principal = (0..a.len()).filter(|&z| a.le_points(z, x)).fold(0, |acc, z| acc | 1 << z);
                            at(principal) == m[x]
                        });
                        if joins && extends {
                            found.push(g);
                        }
                    }
                    ensure(found.len() == 1, || format!("{} left adjoint extensions of {m:?}", found.len()))?;
                    let g = &found[0];
                    let matches = (0..pa.len()).all(|i| {
                        let s = mask_of(pa.vector(i));
                        fl.apply(i) == g[downs.iter().position(|&d| d == s).unwrap()]
                    });
                    ensure(matches, || format!("f_L differs from the unique extension for {m:?}"))?;
                }
            }
        }
    }
    Ok(format!("{n_fun} functors into {} lattices", lats.len()))
}

fn kz() -> Outcome {
    let mut n_cats = 0;
    for n in 1..=2 {
        for c in fixtures::preorders(n).unwrap() {
            n_cats += 1;
            let px = PresheafCategory::new(c.clone()).unwrap();
            let pxx = PresheafCategory::new(px.category().clone()).unwrap();
            let rep = kz_check(&px, &pxx).unwrap();
            ensure(rep.holds(), || format!("{}: {rep:?}", fixtures::describe(&c)))?;
        }
    }
    Ok(format!("{n_cats} categories"))
}

fn split_fork() -> Outcome {
    let (mut rels, mut skipped) = (0, 0);
    for x in bool_lattices(4) {
        let px = PresheafCategory::new(x.clone()).unwrap();
        let sup = px.sup_search().unwrap().ok_or("lattice without Sup")?;
        for partition in EquivalenceRelation::all_partitions(x.len()) {
            let rel = EquivalenceRelation::new(x.clone(), partition.clone()).unwrap();
            if !rel.projections_left_adjoint() {
                skipped += 1;
                continue;
            }
            rels += 1;
            let rep = split_fork_check(&rel, &sup, &px).unwrap();
            ensure(rep.holds(), || format!("{} {partition:?}: {rep:?}", fixtures::describe(&x)))?;
        }
    }
    ensure(rels > 0, || "no relation qualified".into())?;
    Ok(format!("{rels} relations ({skipped} without left adjoint projections)"))
}

fn density() -> Outcome {
    let mut r = Report::new("density");
    suite::density(&mut r, Quantale::Bool2, 3).map_err(|e| e.to_string())?;
    let bad = fails(&r);
    ensure(bad.is_empty(), || bad.join("; "))?;
    // dense ⇔ every point lies above an image point
    let mut cats = Vec::new();
    for n in 1..=3 {
        cats.extend(fixtures::preorders_up_to_iso(n).unwrap());
    }
    let mut n_fun = 0;
    for x in &cats {
        for y in &cats {
            for m in all_functors(x, y) {
                n_fun += 1;
                let oracle = (0..y.len()).all(|p| m.iter().any(|&fx| y.le_points(fx, p)));
                let f = TFunctor::new(x.clone(), y.clone(), m.clone()).unwrap();
                ensure(is_dense(&f) == oracle, || format!("density of {m:?}"))?;
            }
        }
    }
    Ok(format!("{} checks, {n_fun} functors against the density oracle", r.checks.len()))
}

fn t0_count_oracle(n: usize) -> usize {
    let full = (1u32 << n) - 1;
    let subsets = 1u32 << n;
    (0u64..1 << subsets)
        .filter(|&fam| {
            let has = |s: u32| fam >> s & 1 == 1;
            has(0)
                && has(full)
                && (0..subsets).all(|a| (0..subsets).all(|b| !(has(a) && has(b)) || (has(a | b) && has(a & b))))
                && (0..n).all(|x| {
                    (0..n).all(|y| x == y || (0..subsets).any(|u| has(u) && ((u >> x) & 1) != ((u >> y) & 1)))
                })
        })
        .count()
}

fn topology() -> Outcome {
    let mut spaces = Vec::new();
    for n in 1..=3 {
        let t0: Vec<FiniteSpace> = FiniteSpace::all_topologies(n).unwrap().into_iter().filter(|s| s.is_t0()).collect();
        let oracle = t0_count_oracle(n);
        ensure(t0.len() == oracle, || format!("{} T0 topologies on {n} points, oracle {oracle}", t0.len()))?;
        spaces.extend(t0);
    }
    for s in &spaces {
        let rep = phi_iso_check(s).unwrap();
        ensure(rep.holds(), || format!("{:?}: {rep:?}", s.opens()))?;
    }
    let mut maps = 0;
    for sx in &spaces {
        for sy in &spaces {
            let ms = sx.continuous_maps(sy);
            maps += ms.len();
            let bad = naturality_failure(sx, sy, &ms).map_err(|e| e.to_string())?;
            ensure(bad.is_none(), || format!("{:?} → {:?}: {bad:?}", sx.opens(), sy.opens()))?;
        }
    }
    Ok(format!("{} spaces, {maps} continuous maps", spaces.len()))
}

fn word_theory() -> Outcome {
    let mut r = Report::new("word");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    suite::word_theory(&mut r, 3, 20, &mut rng).map_err(|e| e.to_string())?;
    let bad = fails(&r);
    ensure(bad.is_empty(), || bad.join("; "))?;
    ensure(r.checks.iter().all(|c| c.verdict == Verdict::PassWithinBound), || {
        "a bounded verdict was reported as definitive".into()
    })?;
    Ok(format!("{} checks pass within L=3", r.checks.len()))
}

fn determinism() -> Outcome {
    let opts = Options::default();
    let a = suite::verify_all(&opts).map_err(|e| e.to_string())?;
    let b = suite::verify_all(&opts).map_err(|e| e.to_string())?;
    ensure(a.stable_hash() == b.stable_hash(), || "stable hashes differ".into())?;
    ensure(a.to_json()["checks"] == b.to_json()["checks"], || "reports differ".into())?;
    let bad = fails(&a);
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("stable hash {}", &a.stable_hash()[..16]))
}

fn main() {
    type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        (1, "residuation laws", Some(Duration::from_secs(5)), residuation),
        (2, "Yoneda lemma", Some(Duration::from_secs(60)), yoneda_lemma),
        (3, "Yoneda theorem on module pairs", Some(Duration::from_secs(60)), yoneda_theorem_exhaustive),
        (4, "characterisations of cocompleteness", Some(Duration::from_secs(300)), char_cocomplete),
        (5, "y⁻¹ is Sup on presheaf categories", None, hat_cocomplete),
        (6, "Kan extensions into lattices", Some(Duration::from_secs(120)), kan),
        (7, "KZ and monad laws", Some(Duration::from_secs(120)), kz),
        (8, "split fork", Some(Duration::from_secs(120)), split_fork),
        (9, "density and X⁺", None, density),
        (10, "topology bridge", Some(Duration::from_secs(60)), topology),
        (11, "word theory within bound", Some(Duration::from_secs(120)), word_theory),
        (12, "verify-all determinism", None, determinism),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let limit_text = limit.map_or("none".to_string(), |l| format!("{}s", l.as_secs()));
        let (ok, detail) = match outcome {
            Ok(d) if limit.map_or(true, |l| took <= l) => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!(
            "{} {id:>2} {name}: {detail} (tolerance exact, {:.2}s, limit {limit_text})",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
