//! Command dispatch over a parsed instance.

use std::sync::Arc;

use qcat_core::monadic::{
    dense_plus_equivalence, inhabited_check, is_dense, kz_check, plus_closed_in_hat, proper_quotient,
    split_fork_check, x_plus, EquivalenceRelation,
};
use qcat_core::presheaf::{
    cocomplete_check, enumerate_presheaves, extend_along, is_presheaf, kan_extension, left_adjoint_of, render_vector,
    star_mate, weighted_colimit, yoneda_lemma_at, yoneda_theorem, PresheafCategory,
};
use qcat_core::tcat::{all_functors, render_witness};
use qcat_core::topo::{phi_iso_check, phi_naturality, FiniteSpace};
use qcat_core::{Quantale, TCategory, TFunctor, Theory, Verdict};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::fixtures;
use crate::instance::{Instance, InstanceError};
use crate::report::Report;

pub const COMMANDS: &[&str] = &[
    "check-category",
    "check-functor",
    "adjoint",
    "yoneda",
    "presheaves",
    "colim",
    "cocomplete",
    "injective",
    "kan",
    "kz",
    "quotient",
    "split-fork",
    "inhabited",
    "x-plus",
    "topology",
    "verify-all",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("{0}")]
    Core(#[from] qcat_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug)]
pub struct Options {
    pub max_size: usize,
    pub word_bound: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub quantale: Option<Quantale>,
    /// Restrict a command to the named entity.
    pub name: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_size: 3,
            word_bound: None,
            samples: 100,
            seed: 0,
            quantale: None,
            name: None,
        }
    }
}

fn selected<'a, T>(
    map: &'a std::collections::BTreeMap<String, T>,
    opts: &Options,
) -> CliResult<Vec<(&'a String, &'a T)>> {
    match &opts.name {
        None => Ok(map.iter().collect()),
        Some(n) => map
            .get_key_value(n)
            .map(|kv| vec![kv])
            .ok_or_else(|| CliError::Usage(format!("no entity named `{n}` for this command"))),
    }
}

fn verdict(theory: Theory, holds: bool) -> Verdict {
    theory.truncated_verdict(holds)
}

/// Categories among `names` that satisfy the axioms; each failure is
/// reported instead of being passed on to constructions that assume it.
fn valid<'a>(
    inst: &'a Instance,
    names: impl IntoIterator<Item = &'a String>,
    r: &mut Report,
) -> CliResult<std::collections::BTreeSet<&'a String>> {
    let mut ok = std::collections::BTreeSet::new();
    for name in names {
        if ok.contains(name) || r.checks.iter().any(|c| c.name == format!("{name}: is a T-category")) {
            continue;
        }
        let rep = inst.categories[name].check_axioms()?;
        if rep.verdict().is_fail() {
            r.push_with(
                format!("{name}: is a T-category"),
                Verdict::Fail,
                Json::Null,
                rep.transitivity_witness.or(rep.reflexivity_witness).as_ref().map(render_witness),
            );
        } else {
            ok.insert(name);
        }
    }
    Ok(ok)
}

fn all_valid<'a, const N: usize>(inst: &'a Instance, names: [&'a String; N], r: &mut Report) -> CliResult<bool> {
    let ok = valid(inst, names, r)?;
    Ok(names.iter().all(|n| ok.contains(n)))
}

/// Selected categories that satisfy the axioms.
fn valid_categories<'a>(
    inst: &'a Instance,
    opts: &Options,
    r: &mut Report,
) -> CliResult<Vec<(&'a String, &'a Arc<TCategory>)>> {
    let sel = selected(&inst.categories, opts)?;
    let ok = valid(inst, sel.iter().map(|(n, _)| *n), r)?;
    Ok(sel.into_iter().filter(|(n, _)| ok.contains(n)).collect())
}

/// Dispatch `command` over `inst`. `verify-all` ignores the instance.
pub fn run(command: &str, inst: Option<&Instance>, opts: &Options) -> CliResult<Report> {
    if command == "verify-all" {
        return crate::suite::verify_all(opts);
    }
    if !COMMANDS.contains(&command) {
        return Err(CliError::Usage(format!("unknown command `{command}`")));
    }
    let inst = inst.ok_or_else(|| CliError::Usage(format!("`{command}` needs an instance file")))?;
    let mut r = Report::new(command);
    match command {
        "check-category" => check_category(inst, opts, &mut r)?,
        "check-functor" => check_functor(inst, opts, &mut r)?,
        "adjoint" => adjoint(inst, opts, &mut r)?,
        "yoneda" => yoneda(inst, opts, &mut r)?,
        "presheaves" => presheaves(inst, opts, &mut r)?,
        "colim" => colim(inst, opts, &mut r)?,
        "cocomplete" => cocomplete(inst, opts, &mut r)?,
        "injective" => injective(inst, opts, &mut r)?,
        "kan" => kan(inst, opts, &mut r)?,
        "kz" => kz(inst, opts, &mut r)?,
        "quotient" => quotient(inst, opts, &mut r)?,
        "split-fork" => split_fork(inst, opts, &mut r)?,
        "inhabited" => inhabited(inst, opts, &mut r)?,
        "x-plus" => xplus(inst, opts, &mut r)?,
        "topology" => topology(inst, opts, &mut r)?,
        _ => unreachable!(),
    }
    Ok(r)
}

fn check_category(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    for (name, c) in selected(&inst.categories, opts)? {
        let rep = c.check_axioms()?;
        r.push_with(
            format!("{name}: reflexive"),
            rep.reflexive,
            Json::Null,
            rep.reflexivity_witness.as_ref().map(render_witness),
        );
        r.push_with(
            format!("{name}: transitive"),
            rep.transitive,
            Json::Null,
            rep.transitivity_witness.as_ref().map(render_witness),
        );
    }
    Ok(())
}

fn check_functor(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    for (name, f) in selected(&inst.functors, opts)? {
        let rep = f.functor.check();
        r.push_with(
            format!("{name}: functor"),
            rep.functor,
            json!({ "fully_faithful": !rep.fully_faithful.is_fail(), "dense": is_dense(&f.functor) }),
            rep.functor_witness.as_ref().map(render_witness),
        );
    }
    Ok(())
}

fn map_labels(f: &TFunctor) -> Json {
    Json::Array((0..f.dom().len()).map(|x| json!(f.cod().label(f.apply(x)))).collect())
}

fn adjoint(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    let th = inst.theory;
    for (name, nf) in selected(&inst.functors, opts)? {
        let f = &nf.functor;
        if !f.is_functor() {
            r.expect(format!("{name}: functor"), false, Json::Null);
            continue;
        }
        let right = f.right_adjoint();
        let left = left_adjoint_of(f)?;
        let mut detail = serde_json::Map::new();
        detail.insert("right_adjoint".into(), right.as_ref().map(map_labels).unwrap_or(Json::Null));
        detail.insert("left_adjoint".into(), left.as_ref().map(map_labels).unwrap_or(Json::Null));
        // a found adjoint must satisfy the adjunction inequalities
        let sound = right.as_ref().map_or(true, |g| f.is_left_adjoint_to(g))
            && left.as_ref().map_or(true, |g| g.is_left_adjoint_to(f));
        r.push(format!("{name}: adjoints"), verdict(th, sound), Json::Object(detail));
    }
    Ok(())
}

fn yoneda(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    let th = inst.theory;
    for (name, c) in valid_categories(inst, opts, r)? {
        if !inst.quantale.is_enumerable() {
            let reps = (0..c.len()).all(|p| yoneda_lemma_at(c, &c.structure().column(p)));
            r.push(format!("{name}: Yoneda lemma at representables"), verdict(th, reps), Json::Null);
            continue;
        }
        let px = PresheafCategory::new(c.clone())?;
        let y = px.yoneda()?;
        r.push(
            format!("{name}: Yoneda lemma"),
            verdict(th, px.yoneda_lemma()?),
            json!({ "presheaves": px.len() }),
        );
        r.push(format!("{name}: y fully faithful"), verdict(th, y.is_fully_faithful()), Json::Null);
    }
    for (name, p) in &inst.presheaves {
        if opts.name.as_ref().is_some_and(|n| n != &p.category) || !all_valid(inst, [&p.category], r)? {
            continue;
        }
        let c = &inst.categories[&p.category];
        r.push(format!("{name}: Yoneda lemma at presheaf"), verdict(th, yoneda_lemma_at(c, &p.values)), Json::Null);
    }
    let mods: Vec<_> = inst.modules.iter().collect();
    for (n1, psi) in &mods {
        for (n2, phi) in &mods {
            if psi.dom != phi.dom || !all_valid(inst, [&psi.dom, &psi.cod, &phi.cod], r)? {
                continue;
            }
            let holds = yoneda_theorem(&psi.module, &phi.module)?;
            r.push(format!("{n2} ↙ {n1}: Yoneda theorem"), verdict(th, holds), Json::Null);
        }
    }
    Ok(())
}

fn presheaves(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    for (name, c) in valid_categories(inst, opts, r)? {
        let all = enumerate_presheaves(c)?;
        let rendered: Vec<String> = all.iter().map(|v| render_vector(v)).collect();
        r.push(
            format!("{name}: presheaves"),
            Verdict::Pass,
            json!({ "count": all.len(), "vectors": rendered }),
        );
    }
    for (name, p) in &inst.presheaves {
        if !all_valid(inst, [&p.category], r)? {
            continue;
        }
        let c = &inst.categories[&p.category];
        let g = Arc::new(TCategory::generator(c.theory())?);
        let holds = is_presheaf(c, &g, &p.values)?;
        r.push(format!("{name}: is presheaf"), inst.theory.pointwise_verdict(holds), Json::Null);
    }
    Ok(())
}

/// Colimits of every functor `h: Y → X` weighted by every module out of `Y`.
fn colim(inst: &Instance, _opts: &Options, r: &mut Report) -> CliResult<()> {
    let th = inst.theory;
    for (hn, h) in &inst.functors {
        for (pn, psi) in &inst.modules {
            if psi.dom != h.dom || !all_valid(inst, [&psi.dom, &psi.cod, &h.cod], r)? {
                continue;
            }
            let col = weighted_colimit(&psi.module, &h.functor)?;
            let detail = json!({
                "colimit": col.functor.as_ref().map(map_labels).unwrap_or(Json::Null),
                "reduction_agrees": col.reduction_agrees,
            });
            r.push(format!("{pn}-weighted colimit of {hn}"), verdict(th, col.reduction_agrees), detail);
        }
    }
    Ok(())
}

/// The `Sup` table of a cocomplete category, presheaf ↦ point.
pub fn sup_table(px: &PresheafCategory, sup: &TFunctor) -> Json {
    let mut m = serde_json::Map::new();
    for i in 0..px.len() {
        m.insert(render_vector(px.vector(i)), json!(sup.cod().label(sup.apply(i))));
    }
    Json::Object(m)
}

fn cocomplete(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    let th = inst.theory;
    for (name, c) in valid_categories(inst, opts, r)? {
        let px = PresheafCategory::new(c.clone())?;
        let rep = cocomplete_check(&px)?;
        let detail = json!({
            "cocomplete": rep.cocomplete(),
            "left_inverse": rep.left_inverse.is_some(),
            "left_adjoint": rep.left_adjoint.is_some(),
            "colimits": rep.colimits,
            "weights": rep.weights,
            "sup": rep.left_inverse.as_ref().map(|s| sup_table(&px, s)).unwrap_or(Json::Null),
        });
        r.push(format!("{name}: characterisations agree"), verdict(th, rep.agree()), detail);
    }
    Ok(())
}

/// Full embeddings `A ↪ B` with `B` running over the V-categories on at
/// most `max_b` points up to isomorphism and `A` over the subsets of `B`.
pub fn embedding_suite(q: Quantale, max_b: usize) -> CliResult<Vec<TFunctor>> {
    let mut out = Vec::new();
    for n in 1..=max_b {
        for b in fixtures::up_to_iso(q, fixtures::v_categories(q, n)?) {
            for mask in 0u32..(1 << n) {
                let points: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                let (a, _) = b.restrict(&points)?;
                out.push(TFunctor::new(Arc::new(a), b.clone(), points)?);
            }
        }
    }
    Ok(out)
}

/// First `(i, f)` in the suite with no extension of `f` along `i`.
pub fn injective_against(x: &Arc<TCategory>, suite: &[TFunctor]) -> Option<String> {
    for i in suite {
        for m in all_functors(i.dom(), x) {
            let f = TFunctor::new(i.dom().clone(), x.clone(), m).expect("functor");
            if extend_along(i, &f).is_none() {
                let b = i.cod();
                return Some(format!(
                    "A={:?} in B={}, f={:?}",
                    i.map(),
                    if b.quantale() == Quantale::Bool2 { fixtures::describe(b) } else { format!("{:?}", b.structure()) },
                    f.map()
                ));
            }
        }
    }
    None
}

fn injective(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    let th = inst.theory;
    if th.kind() != qcat_core::TheoryKind::Identity {
        return Err(CliError::Usage("injective runs over the identity theory only".into()));
    }
    let q = inst.quantale;
    let max_b = if q == Quantale::Bool2 { opts.max_size + 1 } else { opts.max_size };
    let suite = embedding_suite(q, max_b)?;
    for (name, c) in valid_categories(inst, opts, r)? {
        let failure = injective_against(c, &suite);
        let cocomplete = PresheafCategory::new(c.clone())?.sup_search()?.is_some();
        r.push_with(
            format!("{name}: injective iff cocomplete"),
            verdict(th, failure.is_none() == cocomplete),
            json!({ "injective": failure.is_none(), "cocomplete": cocomplete, "embeddings": suite.len() }),
            failure,
        );
    }
    Ok(())
}

fn kan(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    let th = inst.theory;
    for (name, nf) in selected(&inst.functors, opts)? {
        let f = &nf.functor;
        if !all_valid(inst, [&nf.dom, &nf.cod], r)? {
            continue;
        }
        if !f.is_functor() {
            r.expect(format!("{name}: functor"), false, Json::Null);
            continue;
        }
        let px = PresheafCategory::new(f.dom().clone())?;
        let pl = PresheafCategory::new(f.cod().clone())?;
        let Some(sup) = pl.sup_search()? else {
            r.expect(format!("{name}: codomain cocomplete"), false, Json::Null);
            continue;
        };
        let fl = kan_extension(f, &sup, &px, &pl)?;
        let extends = px.yoneda()?.then(&fl)?.equivalent(f);
        let adjoint = fl.is_left_adjoint_to(&star_mate(f, &px)?);
        let detail = json!({ "extension": sup_table(&px, &fl) });
        r.push(format!("{name}: f_L·y ≅ f"), verdict(th, extends), detail);
        r.push(format!("{name}: f_L ⊣ ⌜f_*⌝"), verdict(th, adjoint), Json::Null);
    }
    Ok(())
}

fn kz(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    let th = inst.theory;
    for (name, c) in valid_categories(inst, opts, r)? {
        let px = PresheafCategory::new(c.clone())?;
        let pxx = PresheafCategory::new(px.category().clone())?;
        let rep = kz_check(&px, &pxx)?;
        r.push(format!("{name}: ŷ ≤ y"), verdict(th, rep.kz), Json::Null);
        r.push(format!("{name}: y⁻¹ ⊣ y"), verdict(th, rep.mu_left_adjoint), Json::Null);
        r.push(format!("{name}: unit laws"), verdict(th, rep.unit_left && rep.unit_right), Json::Null);
    }
    Ok(())
}

fn quotient(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    let th = inst.theory;
    for (name, nq) in selected(&inst.quotients, opts)? {
        if !all_valid(inst, [&nq.category], r)? {
            continue;
        }
        let base = inst.categories[&nq.category].clone();
        let rel = EquivalenceRelation::new(base, nq.partition.clone())?;
        let quot = proper_quotient(&rel)?;
        let rep = quot.category.check_axioms()?;
        r.push_with(
            format!("{name}: quotient is a category"),
            rep.verdict(),
            json!({ "classes": quot.category.carrier().labels(), "separated": quot.category.is_separated() }),
            rep.transitivity_witness.or(rep.reflexivity_witness).as_ref().map(render_witness),
        );
        r.push(format!("{name}: q proper"), verdict(th, quot.proper), Json::Null);
        r.push(
            format!("{name}: projections left adjoint"),
            Verdict::Pass,
            json!({ "holds": rel.projections_left_adjoint() }),
        );
    }
    Ok(())
}

fn split_fork(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    let th = inst.theory;
    for (name, nq) in selected(&inst.quotients, opts)? {
        if !all_valid(inst, [&nq.category], r)? {
            continue;
        }
        let base = inst.categories[&nq.category].clone();
        let px = PresheafCategory::new(base.clone())?;
        let Some(sup) = px.sup_search()? else {
            r.expect(format!("{name}: base cocomplete"), false, Json::Null);
            continue;
        };
        let rel = EquivalenceRelation::new(base, nq.partition.clone())?;
        if !rel.projections_left_adjoint() {
            r.expect(format!("{name}: projections left adjoint"), false, Json::Null);
            continue;
        }
        let rep = split_fork_check(&rel, &sup, &px)?;
        let detail = json!({
            "geq": rep.geq, "leq": rep.leq, "formulas_agree": rep.formulas_agree,
            "splittings": rep.splittings, "quotient_proper": rep.quotient_proper,
            "quotient_is_category": rep.quotient_is_category, "quotient_separated": rep.quotient_separated,
            "sup_square": rep.sup_square, "sup_retraction": rep.sup_retraction,
        });
        r.push(format!("{name}: q⁻¹·q̂ = π̂₂·π₁⁻¹"), verdict(th, rep.holds()), detail);
    }
    Ok(())
}

fn inhabited(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    for (name, m) in selected(&inst.modules, opts)? {
        let w = inhabited_check(m.module.rel());
        let tx = m.module.dom().tspace();
        let wit: Vec<Json> = w
            .witnesses
            .iter()
            .enumerate()
            .map(|(y, (at, v))| {
                json!({
                    "point": m.module.cod().label(y),
                    "best": at.map(|i| tx.label(i).to_string()),
                    "value": v.to_string(),
                })
            })
            .collect();
        r.push(format!("{name}: inhabited"), Verdict::Pass, json!({ "inhabited": w.inhabited, "witnesses": wit }));
    }
    for (name, nf) in &inst.functors {
        if opts.name.is_none() {
            r.push(format!("{name}: dense"), Verdict::Pass, json!({ "dense": is_dense(&nf.functor) }));
        }
    }
    Ok(())
}

fn xplus(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    let th = inst.theory;
    let mut plus = std::collections::BTreeMap::new();
    let ok = valid(inst, inst.categories.keys(), r)?;
    for (name, c) in &inst.categories {
        if !ok.contains(name) {
            continue;
        }
        let px = PresheafCategory::new(c.clone())?;
        let pxp = x_plus(&px)?;
        if opts.name.as_ref().map_or(true, |n| n == name) {
            let closed = plus_closed_in_hat(&px, &pxp)?;
            r.push(
                format!("{name}: X⁺ closed under inhabited colimits"),
                verdict(th, closed.is_some()),
                json!({ "inhabited_presheaves": pxp.len(), "weights": closed }),
            );
        }
        plus.insert(name.clone(), pxp);
    }
    for (name, nf) in selected(&inst.functors, opts)? {
        if !(ok.contains(&nf.dom) && ok.contains(&nf.cod)) {
            continue;
        }
        if !nf.functor.is_functor() {
            r.expect(format!("{name}: functor"), false, Json::Null);
            continue;
        }
        let [dense, left, plus_dense] = dense_plus_equivalence(&nf.functor, &plus[&nf.dom], &plus[&nf.cod])?;
        r.push(
            format!("{name}: dense ⇔ f⁺ left adjoint ⇔ f⁺ dense"),
            verdict(th, dense == left && left == plus_dense),
            json!({ "dense": dense, "plus_left_adjoint": left, "plus_dense": plus_dense }),
        );
    }
    Ok(())
}

fn topology(inst: &Instance, opts: &Options, r: &mut Report) -> CliResult<()> {
    let spaces = selected(&inst.topologies, opts)?;
    for (name, s) in &spaces {
        let rep = phi_iso_check(s)?;
        r.push(
            format!("{name}: Φ: X̂ ≅ F₀X"),
            if rep.holds() { Verdict::Pass } else { Verdict::Fail },
            json!({
                "t0": s.is_t0(),
                "bijective": rep.bijective,
                "structure_preserved": rep.structure_preserved,
                "neighbourhoods": rep.neighbourhoods,
            }),
        );
    }
    for (n1, s1) in &spaces {
        for (n2, s2) in &spaces {
            let maps = s1.continuous_maps(s2);
            let bad = naturality_failure(s1, s2, &maps)?;
            r.push_with(
                format!("{n1} → {n2}: Φ natural"),
                if bad.is_none() { Verdict::Pass } else { Verdict::Fail },
                json!({ "continuous_maps": maps.len() }),
                bad.map(|m| format!("{m:?}")),
            );
        }
    }
    Ok(())
}

pub fn naturality_failure(sx: &FiniteSpace, sy: &FiniteSpace, maps: &[Vec<usize>]) -> CliResult<Option<Vec<usize>>> {
    for m in maps {
        if !phi_naturality(m, sx, sy)? {
            return Ok(Some(m.clone()));
        }
    }
    Ok(None)
}
