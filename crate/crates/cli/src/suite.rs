//! `verify-all`: the theorem suite over the built-in fixture library.
//!
//! Enumerated sections run over the quantale chosen by `--quantale`
//! (default `bool2`); the topology and word-theory sections always run over
//! `2`, and the sampled metric section always runs over `[0, ∞]`.

use std::sync::Arc;

use qcat_core::monadic::{
    algebra_check, comp_canc_dense, dense_plus_equivalence, is_dense, kz_check, plus_closed_in_hat, split_fork_check,
    x_plus, EquivalenceRelation,
};
use qcat_core::presheaf::{
    cocomplete_check, is_presheaf, kan_extension, smear, star_mate, yoneda_lemma_at, yoneda_theorem, PresheafCategory,
};
use qcat_core::tcat::all_functors;
use qcat_core::theory::{is_unitary, kleisli_assoc, trel_extend, txi};
use qcat_core::topo::{phi_iso_check, FiniteSpace};
use qcat_core::{Carrier, Quantale, TCategory, TFunctor, TModule, Theory, VRel, Value, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::{embedding_suite, injective_against, naturality_failure, CliResult, Options};
use crate::fixtures;
use crate::report::Report;

fn show(c: &TCategory) -> String {
    if c.quantale() == Quantale::Bool2 {
        fixtures::describe(c)
    } else {
        format!("{:?}", c.structure())
    }
}

fn labeled(q: Quantale, max_n: usize) -> CliResult<Vec<Arc<TCategory>>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(fixtures::v_categories(q, n)?);
    }
    Ok(out)
}

fn unlabeled(q: Quantale, max_n: usize) -> CliResult<Vec<Arc<TCategory>>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(fixtures::up_to_iso(q, fixtures::v_categories(q, n)?));
    }
    Ok(out)
}

/// Separated cocomplete categories up to isomorphism, with their `Sup`.
pub fn lattices(q: Quantale, max_n: usize) -> CliResult<Vec<(Arc<TCategory>, TFunctor)>> {
    let mut out = Vec::new();
    for c in unlabeled(q, max_n)? {
        if !c.is_separated() {
            continue;
        }
        if let Some(sup) = PresheafCategory::new(c.clone())?.sup_search()? {
            out.push((c, sup));
        }
    }
    Ok(out)
}

fn functors(x: &Arc<TCategory>, y: &Arc<TCategory>) -> Vec<TFunctor> {
    all_functors(x, y)
        .into_iter()
        .map(|m| TFunctor::new(x.clone(), y.clone(), m).expect("total map"))
        .collect()
}

/// Size bound for sections whose cost grows fastest with `|V|`.
fn cap(q: Quantale, max_n: usize) -> usize {
    if q == Quantale::Bool2 {
        max_n
    } else {
        max_n.min(2)
    }
}

fn outcome(r: &mut Report, name: &str, failure: Option<String>, detail: serde_json::Value) {
    let v = if failure.is_none() { Verdict::Pass } else { Verdict::Fail };
    r.push_with(name, v, detail, failure);
}

pub fn random_distance(rng: &mut ChaCha8Rng) -> Value {
    if rng.gen_ratio(1, 10) {
        Value::infinity()
    } else {
        Value::dist_ratio(rng.gen_range(0..40), rng.gen_range(1..7))
    }
}

/// `w ⊗ u ≤ v ⇔ w ≤ hom(u, v)`: exhaustive on enumerable quantales, on
/// `triples` seeded samples for `[0, ∞]`.
pub fn residuation(r: &mut Report, q: Quantale, triples: usize, rng: &mut ChaCha8Rng) -> CliResult<()> {
    let law = |w: &Value, u: &Value, v: &Value| q.leq(&q.otimes(w, u), v) == q.leq(w, &q.residual(u, v));
    let mut failure = None;
    let mut n = 0;
    match q.elements() {
        Some(el) => {
            for w in &el {
                for u in &el {
                    for v in &el {
                        n += 1;
                        if failure.is_none() && !law(w, u, v) {
                            failure = Some(format!("w={w}, u={u}, v={v}"));
                        }
                    }
                }
            }
        }
        None => {
            for _ in 0..triples {
                let (w, u, v) = (random_distance(rng), random_distance(rng), random_distance(rng));
                n += 1;
                if failure.is_none() && !law(&w, &u, &v) {
                    failure = Some(format!("w={w}, u={u}, v={v}"));
                }
            }
        }
    }
    outcome(r, &format!("residuation over {q}"), failure, json!({ "triples": n }));
    Ok(())
}

/// `φ(𝔵) = ⟨Ty(𝔵), φ⟩` for every presheaf on every category on at most `max_n` points.
pub fn yoneda_lemma(r: &mut Report, q: Quantale, max_n: usize) -> CliResult<()> {
    let mut failure = None;
    let (mut cats, mut presheaves) = (0, 0);
    for c in labeled(q, max_n)? {
        let px = PresheafCategory::new(c.clone())?;
        cats += 1;
        presheaves += px.len();
        if !(px.yoneda_lemma()? && px.yoneda()?.is_fully_faithful()) {
            failure.get_or_insert_with(|| show(&c));
        }
    }
    outcome(
        r,
        &format!("Yoneda lemma over {q}"),
        failure,
        json!({ "categories": cats, "presheaves": presheaves }),
    );
    Ok(())
}

/// The Yoneda lemma on sampled presheaves of the metric fixtures.
pub fn metric_yoneda(r: &mut Report, samples: usize, rng: &mut ChaCha8Rng) -> CliResult<()> {
    let mut failure = None;
    let mut n = 0;
    for fx in fixtures::metric_fixtures()? {
        let x = &fx.cat;
        let g = Arc::new(TCategory::generator(x.theory())?);
        for p in 0..x.len() {
            if !yoneda_lemma_at(x, &x.structure().column(p)) {
                failure.get_or_insert_with(|| format!("{}: y({p})", fx.name));
            }
        }
        for _ in 0..samples {
            let raw: Vec<Value> = (0..x.tspace().len()).map(|_| random_distance(rng)).collect();
            let psi = smear(x, &raw)?;
            n += 1;
            if !(is_presheaf(x, &g, &psi)? && yoneda_lemma_at(x, &psi)) {
                failure.get_or_insert_with(|| format!("{}: {}", fx.name, qcat_core::presheaf::render_vector(&psi)));
            }
        }
    }
    outcome(r, "Yoneda lemma on sampled metric presheaves", failure, json!({ "samples": n }));
    Ok(())
}

fn relations(q: Quantale, dom: &Arc<Carrier>, cod: &Arc<Carrier>) -> CliResult<Vec<VRel>> {
    let el = q.enumerate()?;
    let cells = dom.len() * cod.len();
    let total = el.len().pow(cells as u32);
    Ok((0..total)
        .map(|mut code| {
            let mut vals = vec![q.bottom(); cells];
            for v in vals.iter_mut() {
                *v = el[code % el.len()].clone();
                code /= el.len();
            }
            VRel::from_fn(q, dom.clone(), cod.clone(), |i, j| vals[i * cod.len() + j].clone())
        })
        .collect())
}

fn modules(x: &Arc<TCategory>, y: &Arc<TCategory>) -> CliResult<Vec<TModule>> {
    let mut out = Vec::new();
    for rel in relations(x.quantale(), x.tspace().carrier(), y.carrier())? {
        let m = TModule::new(x.clone(), y.clone(), rel)?;
        if m.is_module()? {
            out.push(m);
        }
    }
    Ok(out)
}

/// `φ ↙ ψ` computed two ways, for all module pairs out of a common
/// category on at most two points. Over `2` every pair is checked; over
/// larger quantales `samples` pairs per triple of categories.
pub fn yoneda_theorem_section(
    r: &mut Report,
    q: Quantale,
    max_n: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> CliResult<()> {
    let exhaustive = q == Quantale::Bool2;
    let cats = if exhaustive { labeled(q, max_n.min(2))? } else { unlabeled(q, max_n.min(2))? };
    let mods: Vec<Vec<Vec<TModule>>> = cats
        .iter()
        .map(|x| cats.iter().map(|y| modules(x, y)).collect::<CliResult<Vec<_>>>())
        .collect::<CliResult<_>>()?;
    let mut failure = None;
    let mut pairs = 0;
    for row in &mods {
        for zs in row {
            for ys in row {
                let mut check = |psi: &TModule, phi: &TModule| -> CliResult<()> {
                    pairs += 1;
                    if !yoneda_theorem(psi, phi)? {
                        failure.get_or_insert_with(|| format!("ψ={:?}, φ={:?}", psi.rel(), phi.rel()));
                    }
                    Ok(())
                };
                if exhaustive {
                    for psi in zs {
                        for phi in ys {
                            check(psi, phi)?;
                        }
                    }
                } else {
                    for _ in 0..samples {
                        check(&zs[rng.gen_range(0..zs.len())], &ys[rng.gen_range(0..ys.len())])?;
                    }
                }
            }
        }
    }
    outcome(
        r,
        &format!("Yoneda theorem over {q}"),
        failure,
        json!({ "pairs": pairs, "exhaustive": exhaustive }),
    );
    Ok(())
}

/// A Bool2 preorder in which every subset has a least upper bound.
pub fn is_complete_lattice(c: &TCategory) -> bool {
    let n = c.len();
    (0u32..(1 << n)).all(|s| {
        let ubs: Vec<usize> = (0..n).filter(|&u| (0..n).all(|x| s & (1 << x) == 0 || c.le_points(x, u))).collect();
        ubs.iter().any(|&l| ubs.iter().all(|&u| c.le_points(l, u)))
    })
}

/// The characterisations of cocompleteness agree on every labeled category
/// on at most `max_n` points; over `2` also injectivity (against embeddings
/// into categories on at most `inj_b` points) and completeness as a lattice.
pub fn char_cocomplete(r: &mut Report, q: Quantale, max_n: usize, inj_b: usize) -> CliResult<()> {
    let bool2 = q == Quantale::Bool2;
    let suite = if bool2 { embedding_suite(q, inj_b)? } else { Vec::new() };
    let mut failure = None;
    let (mut cats, mut cocomplete) = (0, 0);
    for c in labeled(q, max_n)? {
        cats += 1;
        let px = PresheafCategory::new(c.clone())?;
        let rep = cocomplete_check(&px)?;
        let mut agree = rep.agree();
        if bool2 {
            agree &= injective_against(&c, &suite).is_none() == rep.cocomplete();
            agree &= is_complete_lattice(&c) == rep.cocomplete();
        }
        cocomplete += rep.cocomplete() as usize;
        if !agree {
            failure.get_or_insert_with(|| show(&c));
        }
    }
    outcome(
        r,
        &format!("characterisations of cocompleteness over {q}"),
        failure,
        json!({ "categories": cats, "cocomplete": cocomplete, "embeddings": suite.len() }),
    );
    Ok(())
}

/// `y⁻¹: X̂̂ → X̂` is a `Sup` for `X̂`.
pub fn hat_cocomplete(r: &mut Report, q: Quantale, max_n: usize) -> CliResult<()> {
    let mut failure = None;
    let mut cats = 0;
    for c in labeled(q, max_n)? {
        cats += 1;
        let px = PresheafCategory::new(c.clone())?;
        let pxx = PresheafCategory::new(px.category().clone())?;
        let mu = px.yoneda_inverse(&pxx)?;
        if !algebra_check(&mu, &pxx)? {
            failure.get_or_insert_with(|| show(&c));
        }
    }
    outcome(r, &format!("y⁻¹ is Sup on X̂ over {q}"), failure, json!({ "categories": cats }));
    Ok(())
}

/// `f_L = Sup·f̂` for every `f: A → L`, `A` on at most `dom_n` points and `L`
/// a separated cocomplete category on at most `lat_n` points, against a
/// search over all left adjoints `X̂ → L` extending `f`.
pub fn kan(r: &mut Report, q: Quantale, dom_n: usize, lat_n: usize) -> CliResult<()> {
    let lats = lattices(q, lat_n)?;
    let mut failure = None;
    let mut n = 0;
    for a in labeled(q, dom_n)? {
        let pa = PresheafCategory::new(a.clone())?;
        let y = pa.yoneda()?;
        for (l, sup) in &lats {
            let pl = PresheafCategory::new(l.clone())?;
            let candidates = functors(pa.category(), l);
            for f in functors(&a, l) {
                n += 1;
                let fl = kan_extension(&f, sup, &pa, &pl)?;
                let extends = y.then(&fl)?.equivalent(&f);
                let adjoint = fl.is_left_adjoint_to(&star_mate(&f, &pa)?);
                let mut found = 0;
                let mut unique = true;
                for g in &candidates {
                    if g.right_adjoint().is_some() && y.then(g)?.equivalent(&f) {
                        found += 1;
                        unique &= g.equivalent(&fl);
                    }
                }
                if !(extends && adjoint && found > 0 && unique) {
                    failure.get_or_insert_with(|| format!("A={}, L={}, f={:?}", show(&a), show(l), f.map()));
                }
            }
        }
    }
    outcome(
        r,
        &format!("Kan extensions over {q}"),
        failure,
        json!({ "functors": n, "lattices": lats.len() }),
    );
    Ok(())
}

/// `ŷ ≤ y_{X̂}` and the monad laws of `(X̂, y, y⁻¹)`.
pub fn kz(r: &mut Report, q: Quantale, max_n: usize) -> CliResult<()> {
    let mut failure = None;
    let mut cats = 0;
    for c in labeled(q, max_n)? {
        cats += 1;
        let px = PresheafCategory::new(c.clone())?;
        let pxx = PresheafCategory::new(px.category().clone())?;
        if !kz_check(&px, &pxx)?.holds() {
            failure.get_or_insert_with(|| show(&c));
        }
    }
    outcome(r, &format!("KZ and monad laws over {q}"), failure, json!({ "categories": cats }));
    Ok(())
}

/// The split fork for every equivalence relation with left adjoint
/// projections on every separated cocomplete category on at most `lat_n` points.
pub fn split_fork(r: &mut Report, q: Quantale, lat_n: usize) -> CliResult<()> {
    let mut failure = None;
    let (mut rels, mut skipped) = (0, 0);
    let lats = lattices(q, lat_n)?;
    for (x, sup) in &lats {
        let px = PresheafCategory::new(x.clone())?;
        for partition in EquivalenceRelation::all_partitions(x.len()) {
            let rel = EquivalenceRelation::new(x.clone(), partition.clone())?;
            if !rel.projections_left_adjoint() {
                skipped += 1;
                continue;
            }
            rels += 1;
            if !split_fork_check(&rel, sup, &px)?.holds() {
                failure.get_or_insert_with(|| format!("X={}, classes={partition:?}", show(x)));
            }
        }
    }
    outcome(
        r,
        &format!("split fork over {q}"),
        failure,
        json!({ "lattices": lats.len(), "relations": rels, "without_left_adjoint_projections": skipped }),
    );
    Ok(())
}

/// Density: left adjoints are dense, the cancellation rules for triangles,
/// `f` dense ⇔ `f⁺` left adjoint ⇔ `f⁺` dense, and closure of `X⁺`.
pub fn density(r: &mut Report, q: Quantale, max_n: usize) -> CliResult<()> {
    let cats = unlabeled(q, max_n)?;
    let hats: Vec<PresheafCategory> =
        cats.iter().map(|c| PresheafCategory::new(c.clone())).collect::<Result<_, _>>()?;
    let plus: Vec<PresheafCategory> = hats.iter().map(x_plus).collect::<Result<_, _>>()?;
    let fun: Vec<Vec<Vec<TFunctor>>> = cats.iter().map(|x| cats.iter().map(|y| functors(x, y)).collect()).collect();

    let mut adj = None;
    let mut equiv = None;
    let mut n_fun = 0;
    for (i, row) in fun.iter().enumerate() {
        for (j, fs) in row.iter().enumerate() {
            for f in fs {
                n_fun += 1;
                if f.right_adjoint().is_some() && !is_dense(f) {
                    adj.get_or_insert_with(|| format!("{} → {}: {:?}", show(&cats[i]), show(&cats[j]), f.map()));
                }
                let [a, b, c] = dense_plus_equivalence(f, &plus[i], &plus[j])?;
                if !(a == b && b == c) {
                    equiv.get_or_insert_with(|| format!("{} → {}: {:?}", show(&cats[i]), show(&cats[j]), f.map()));
                }
            }
        }
    }
    outcome(r, &format!("left adjoints are dense over {q}"), adj, json!({ "functors": n_fun }));
    outcome(r, &format!("dense ⇔ f⁺ left adjoint ⇔ f⁺ dense over {q}"), equiv, json!({ "functors": n_fun }));

    let mut canc = None;
    let mut triangles = 0;
    for (i, row) in fun.iter().enumerate() {
        for (j, fs) in row.iter().enumerate() {
            for hs in &fun[j] {
                for f in fs {
                    for h in hs {
                        triangles += 1;
                        if comp_canc_dense(f, h)?.iter().any(|ok| !ok) {
                            canc.get_or_insert_with(|| format!("X={}, f={:?}, h={:?}", show(&cats[i]), f.map(), h.map()));
                        }
                    }
                }
            }
        }
    }
    outcome(r, &format!("density under composition over {q}"), canc, json!({ "triangles": triangles }));

    let mut closed = None;
    let mut weights = 0;
    for (i, c) in cats.iter().enumerate() {
        match plus_closed_in_hat(&hats[i], &plus[i])? {
            Some(n) => weights += n,
            None => {
                closed.get_or_insert_with(|| show(c));
            }
        }
    }
    outcome(
        r,
        &format!("X⁺ closed under inhabited colimits over {q}"),
        closed,
        json!({ "categories": cats.len(), "weights": weights }),
    );
    Ok(())
}

/// `X̂ ≅ F₀X` for every T0 topology on at most `max_n` points, naturally in
/// continuous maps.
pub fn topology(r: &mut Report, max_n: usize) -> CliResult<()> {
    let mut spaces: Vec<FiniteSpace> = Vec::new();
    for n in 1..=max_n {
        spaces.extend(FiniteSpace::all_topologies(n)?.into_iter().filter(|s| s.is_t0()));
    }
    let mut iso = None;
    for s in &spaces {
        if !phi_iso_check(s)?.holds() {
            iso.get_or_insert_with(|| format!("{:?}", s.opens()));
        }
    }
    outcome(r, "Φ: X̂ ≅ F₀X on T0 spaces", iso, json!({ "spaces": spaces.len() }));
    let mut nat = None;
    let mut maps = 0;
    for sx in &spaces {
        for sy in &spaces {
            let ms = sx.continuous_maps(sy);
            maps += ms.len();
            if let Some(m) = naturality_failure(sx, sy, &ms)? {
                nat.get_or_insert_with(|| format!("{:?} → {:?}: {m:?}", sx.opens(), sy.opens()));
            }
        }
    }
    outcome(r, "Φ natural in continuous maps", nat, json!({ "continuous_maps": maps }));
    Ok(())
}

/// Word theory over `2` within `bound`: functoriality of `T_ξ`, Kleisli
/// associativity on sampled unitary relations, and the axioms of `|X|`.
pub fn word_theory(r: &mut Report, bound: usize, samples: usize, rng: &mut ChaCha8Rng) -> CliResult<()> {
    let q = Quantale::Bool2;
    let th = Theory::word(q, bound)?;
    let carriers: Vec<Arc<Carrier>> = (1..=2).map(|n| Carrier::range(n).arc()).collect();
    let spaces: Vec<_> = carriers.iter().map(|c| th.apply(c)).collect::<Result<_, _>>()?;

    let mut holds = true;
    let mut witness = None;
    let mut pairs = 0;
    for (x, tx) in carriers.iter().zip(&spaces) {
        if txi(&VRel::identity(q, x.clone()), tx, tx)? != VRel::identity(q, tx.carrier().clone()) {
            holds = false;
            witness.get_or_insert_with(|| format!("identity on {} points", x.len()));
        }
        for (y, ty) in carriers.iter().zip(&spaces) {
            for (z, tz) in carriers.iter().zip(&spaces) {
                for rr in relations(q, x, y)? {
                    let trr = txi(&rr, tx, ty)?;
                    if txi(&rr.involution(), ty, tx)? != trr.involution() {
                        holds = false;
                        witness.get_or_insert_with(|| format!("involution of {rr:?}"));
                    }
                    for s in relations(q, y, z)? {
                        pairs += 1;
                        if txi(&rr.compose(&s)?, tx, tz)? != trr.compose(&txi(&s, ty, tz)?)? {
                            holds = false;
                            witness.get_or_insert_with(|| format!("r={rr:?}, s={s:?}"));
                        }
                    }
                }
            }
        }
    }
    r.push_with(
        format!("T_ξ functorial (L={bound})"),
        th.pointwise_verdict(holds),
        json!({ "pairs": pairs }),
        witness,
    );

    let mut verdict = Verdict::Pass;
    let mut witness = None;
    let mut triples = 0;
    for (x, tx) in carriers.iter().zip(&spaces) {
        let unitary = |rng: &mut ChaCha8Rng| -> CliResult<VRel> {
            let raw = VRel::from_fn(q, tx.carrier().clone(), x.clone(), |_, _| Value::Bool(rng.gen_bool(0.4)));
            Ok(trel_extend(&raw, &raw, tx, tx)?)
        };
        for _ in 0..samples {
            let (a, b, c) = (unitary(rng)?, unitary(rng)?, unitary(rng)?);
            triples += 1;
            let mut v = kleisli_assoc(&c, &b, &a, tx, tx, tx)?;
            if ![&a, &b, &c].iter().all(|m| is_unitary(m, tx, tx).unwrap_or(false)) {
                v = Verdict::Fail;
            }
            if v.is_fail() {
                witness.get_or_insert_with(|| format!("α={a:?}, β={b:?}, γ={c:?}"));
            }
            verdict = verdict.and(v);
        }
    }
    r.push_with(
        format!("Kleisli associativity on unitary relations (L={bound})"),
        verdict,
        json!({ "triples": triples }),
        witness,
    );

    for tx in &spaces {
        let rep = TCategory::free_algebra(tx)?.check_axioms()?;
        r.push_with(
            format!("|X| is a T-category, |X|={} (L={bound})", tx.base().len()),
            rep.verdict(),
            json!({ "points": tx.len() }),
            rep.transitivity_witness.or(rep.reflexivity_witness).map(|w| qcat_core::tcat::render_witness(&w)),
        );
    }
    Ok(())
}

pub fn verify_all(opts: &Options) -> CliResult<Report> {
    let q = opts.quantale.unwrap_or(Quantale::Bool2);
    let m = opts.max_size;
    let bound = opts.word_bound.unwrap_or(qcat_core::theory::DEFAULT_WORD_BOUND);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut r = Report::new("verify-all");
    r.timed("residuation", |r| residuation(r, q, 100 * opts.samples, &mut rng))?;
    r.timed("metric yoneda", |r| metric_yoneda(r, opts.samples, &mut rng))?;
    if q.is_enumerable() {
        let c = cap(q, m);
        let lat_n = if q == Quantale::Bool2 { m + 1 } else { c };
        r.timed("yoneda lemma", |r| yoneda_lemma(r, q, m))?;
        r.timed("yoneda theorem", |r| yoneda_theorem_section(r, q, m, opts.samples, &mut rng))?;
        r.timed("cocomplete", |r| char_cocomplete(r, q, c, m + 1))?;
        r.timed("hat cocomplete", |r| hat_cocomplete(r, q, c))?;
        r.timed("kan", |r| kan(r, q, m.min(2), lat_n))?;
        r.timed("kz", |r| kz(r, q, m.min(2)))?;
        r.timed("split fork", |r| split_fork(r, q, lat_n))?;
        r.timed("density", |r| density(r, q, c))?;
    }
    r.timed("topology", |r| topology(r, m.min(4)))?;
    r.timed("word theory", |r| word_theory(r, bound, opts.samples.min(20), &mut rng))?;
    Ok(r)
}
