//! The presheaf monad `(X̂, y, y⁻¹)`, its algebras, proper quotients and
//! split forks, and inhabited modules, dense functors and `X⁺`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presheaf::{enumerate_presheaves, hat_functor, inverse_image_functor, weighted_colimit, PresheafCategory};
use crate::quantale::Value;
use crate::tcat::{TCategory, TFunctor, TModule};
use crate::theory::kleisli_lift;
use crate::vrel::{Carrier, VRel};

/// Outcome of the Kock-Zöberlein and monad-law checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KzReport {
    /// `ŷ_X ≤ y_{X̂}`.
    pub kz: bool,
    /// `μ ⊣ y_{X̂}` with `μ = y⁻¹`.
    pub mu_left_adjoint: bool,
    /// `μ · y_{X̂} = 1`.
    pub unit_left: bool,
    /// `μ · ŷ_X = 1`.
    pub unit_right: bool,
}

impl KzReport {
    pub fn holds(&self) -> bool {
        self.kz && self.mu_left_adjoint && self.unit_left && self.unit_right
    }
}

/// `px` is `X̂`, `pxx` is the presheaf category of `X̂`.
pub fn kz_check(px: &PresheafCategory, pxx: &PresheafCategory) -> Result<KzReport> {
    let y = px.yoneda()?;
    let y_hat = hat_functor(&y, px, pxx)?;
    let yy = pxx.yoneda()?;
    let mu = px.yoneda_inverse(pxx)?;
    let one = TFunctor::identity(px.category().clone());
    Ok(KzReport {
        kz: y_hat.le(&yy),
        mu_left_adjoint: mu.is_left_adjoint_to(&yy),
        unit_left: yy.then(&mu)?.map() == one.map(),
        unit_right: y_hat.then(&mu)?.map() == one.map(),
    })
}

/// `h ⊣ y_X` and `h · y_X = 1_X`, for separated `X`.
pub fn algebra_check(h: &TFunctor, px: &PresheafCategory) -> Result<bool> {
    let x = px.base();
    if !x.is_separated() {
        return Err(Error::NotSeparated("the base category".into()));
    }
    let y = px.yoneda()?;
    let retraction = y.then(h)?.map() == TFunctor::identity(x.clone()).map();
    Ok(retraction && h.is_left_adjoint_to(&y))
}

/// An equivalence relation on the points of a T-category, with `R ⊆ X × X`
/// carrying the restricted product structure.
pub struct EquivalenceRelation {
    base: Arc<TCategory>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    r: Arc<TCategory>,
    pi1: TFunctor,
    pi2: TFunctor,
}

impl EquivalenceRelation {
    /// Classes are normalised: sorted internally and by least element.
    pub fn new(base: Arc<TCategory>, partition: Vec<Vec<usize>>) -> Result<Self> {
        let n = base.len();
        let mut classes: Vec<Vec<usize>> = partition
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        classes.sort();
        let mut class_of = vec![usize::MAX; n];
        for (i, c) in classes.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Precondition("empty equivalence class".into()));
            }
            for &x in c {
                if x >= n || class_of[x] != usize::MAX {
                    return Err(Error::Precondition(format!("point {x} is out of range or repeated")));
                }
                class_of[x] = i;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(Error::Precondition("partition does not cover the carrier".into()));
        }
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (0..n).map(move |x2| (x, x2)))
            .filter(|&(x, x2)| class_of[x] == class_of[x2])
            .collect();
        let labels = pairs
            .iter()
            .map(|&(x, x2)| format!("({},{})", base.label(x), base.label(x2)));
        let carrier = Carrier::new(labels)?.arc();
        let theory = base.theory();
        let tr = theory.apply(&carrier)?;
        let tx = base.tspace();
        let p1: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let p2: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let t1 = tr.map(&p1, tx)?;
        let t2 = tr.map(&p2, tx)?;
        let q = theory.quantale();
        let a = base.structure();
        let rel = VRel::from_fn(q, tr.carrier().clone(), carrier, |w, j| {
            q.wedge(a.get(t1[w], p1[j]), a.get(t2[w], p2[j]))
        });
        let r = Arc::new(TCategory::new(tr, rel)?);
        let pi1 = TFunctor::new(r.clone(), base.clone(), p1)?;
        let pi2 = TFunctor::new(r.clone(), base.clone(), p2)?;
        Ok(EquivalenceRelation {
            base,
            classes,
            class_of,
            r,
            pi1,
            pi2,
        })
    }

    pub fn base(&self) -> &Arc<TCategory> {
        &self.base
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn relation(&self) -> &Arc<TCategory> {
        &self.r
    }

    pub fn pi1(&self) -> &TFunctor {
        &self.pi1
    }

    pub fn pi2(&self) -> &TFunctor {
        &self.pi2
    }

    /// `π₂` has a right adjoint.
    pub fn projections_left_adjoint(&self) -> bool {
        self.pi2.right_adjoint().is_some()
    }

    /// Every partition of the carrier, as restricted-growth strings in
    /// lexicographic order.
    pub fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
        fn rec(i: usize, n: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
            if i == n {
                let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
                let mut classes = vec![Vec::new(); k];
                for (x, &c) in rgs.iter().enumerate() {
                    classes[c].push(x);
                }
                out.push(classes);
                return;
            }
            let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
            for c in 0..=k {
                rgs.push(c);
                rec(i + 1, n, rgs, out);
                rgs.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, &mut Vec::new(), &mut out);
        out
    }
}

/// The quotient `q: X → Q` with structure `c(𝔮, y) = ⋁_{Tq𝔵=𝔮} ⋁_{qx'=y} a(𝔵, x')`.
pub struct Quotient {
    pub category: Arc<TCategory>,
    pub q: TFunctor,
    /// `c(Tq 𝔵, y) = ⋁_{qx'=y} a(𝔵, x')` for all `𝔵, y`.
    pub proper: bool,
}

pub fn proper_quotient(rel: &EquivalenceRelation) -> Result<Quotient> {
    let x = rel.base();
    let labels = rel.classes().iter().map(|c| {
        let parts: Vec<&str> = c.iter().map(|&p| x.label(p)).collect();
        format!("{{{}}}", parts.join(","))
    });
    let carrier = Carrier::new(labels)?.arc();
    let theory = x.theory();
    let tq = theory.apply(&carrier)?;
    let tx = x.tspace();
    let qmap = rel.class_of().to_vec();
    let tqmap = tx.map(&qmap, &tq)?;
    let v = theory.quantale();
    let a = x.structure();
    let mut c = VRel::bottom(v, tq.carrier().clone(), carrier.clone());
    // pushed-forward rows, 𝔵 ↦ (y ↦ ⋁_{qx'=y} a(𝔵, x'))
    let pushed: Vec<Vec<Value>> = (0..tx.len())
        .map(|w| {
            let mut row = vec![v.bottom(); carrier.len()];
            for (xp, &y) in qmap.iter().enumerate() {
                row[y] = v.vee(&row[y], a.get(w, xp));
            }
            row
        })
        .collect();
    for (w, row) in pushed.iter().enumerate() {
        for (y, val) in row.iter().enumerate() {
            let cur = v.vee(c.get(tqmap[w], y), val);
            c.set(tqmap[w], y, cur)?;
        }
    }
    let proper = pushed
        .iter()
        .enumerate()
        .all(|(w, row)| row.iter().enumerate().all(|(y, val)| c.get(tqmap[w], y) == val));
    let category = Arc::new(TCategory::new(tq, c)?);
    let q = TFunctor::new(x.clone(), category.clone(), qmap)?;
    Ok(Quotient { category, q, proper })
}

/// Outcome of the split-fork check.
#[derive(Clone, Debug)]
pub struct SplitForkReport {
    /// `π₂ · π₁⁻¹ ≤ q⁻¹ · q̂` pointwise.
    pub geq: bool,
    /// `q⁻¹ · q̂ ≤ π̂₂ · π₁⁻¹` pointwise.
    pub leq: bool,
    /// The two join formulas agree with the raw composites.
    pub formulas_agree: bool,
    /// `q̂ · q⁻¹ = 1` and `π̂₁ · π₁⁻¹ = 1`.
    pub splittings: bool,
    pub quotient_proper: bool,
    pub quotient_is_category: bool,
    pub quotient_separated: bool,
    /// `Sup_Q · q̂ = q · Sup_X`.
    pub sup_square: bool,
    /// `Sup_Q · y_Q = 1`.
    pub sup_retraction: bool,
    /// `Sup_Q = q · Sup_X · q⁻¹`.
    pub sup_q: Vec<usize>,
}

impl SplitForkReport {
    pub fn holds(&self) -> bool {
        self.geq
            && self.leq
            && self.formulas_agree
            && self.splittings
            && self.quotient_proper
            && self.quotient_is_category
            && self.quotient_separated
            && self.sup_square
            && self.sup_retraction
    }
}

/// `q⁻¹ · q̂ = π̂₂ · π₁⁻¹` for an equivalence relation on a separated
/// cocomplete `X` given with its `Sup`.
pub fn split_fork_check(
    rel: &EquivalenceRelation,
    sup_x: &TFunctor,
    px: &PresheafCategory,
) -> Result<SplitForkReport> {
    let x = rel.base();
    if !algebra_check(sup_x, px)? {
        return Err(Error::Precondition("Sup is not a left-adjoint retraction of y".into()));
    }
    if !rel.projections_left_adjoint() {
        return Err(Error::Precondition("projections of R are not left adjoint".into()));
    }
    let quot = proper_quotient(rel)?;
    let pq = PresheafCategory::new(quot.category.clone())?;
    let pr = PresheafCategory::new(rel.relation().clone())?;
    let q_hat = hat_functor(&quot.q, px, &pq)?;
    let q_inv = inverse_image_functor(&quot.q, px, &pq)?;
    let pi1_inv = inverse_image_functor(rel.pi1(), &pr, px)?;
    let pi1_hat = hat_functor(rel.pi1(), &pr, px)?;
    let pi2_hat = hat_functor(rel.pi2(), &pr, px)?;
    let lhs = q_hat.then(&q_inv)?;
    let rhs = pi1_inv.then(&pi2_hat)?;

    let v = x.quantale();
    let tx = x.tspace();
    let tqmap = tx.map(rel.class_of(), quot.category.tspace())?;
    let r = kleisli_lift(x.structure(), tx, tx)?;
    let mut geq = true;
    let mut leq = true;
    let mut formulas_agree = true;
    for (i, psi) in px.vectors().iter().enumerate() {
        let (l, rr) = (px.vector(lhs.apply(i)), px.vector(rhs.apply(i)));
        for w in 0..tx.len() {
            geq &= v.leq(&rr[w], &l[w]);
            leq &= v.leq(&l[w], &rr[w]);
            let mut fl = v.bottom();
            let mut fr = v.bottom();
            for w1 in 0..tx.len() {
                for w2 in 0..tx.len() {
                    if tqmap[w1] != tqmap[w2] {
                        continue;
                    }
                    fl = v.vee(&fl, &v.otimes(&psi[w1], r.get(w, w2)));
                    fr = v.vee(&fr, &v.otimes(&psi[w2], r.get(w, w1)));
                }
            }
            formulas_agree &= fl == l[w] && fr == rr[w];
        }
    }
    let splittings = q_inv.then(&q_hat)?.map() == TFunctor::identity(pq.category().clone()).map()
        && pi1_inv.then(&pi1_hat)?.map() == TFunctor::identity(px.category().clone()).map();
    let sup_q = q_inv.then(sup_x)?.then(&quot.q)?;
    let sup_square = q_hat.then(&sup_q)?.map() == sup_x.then(&quot.q)?.map();
    let sup_retraction =
        pq.yoneda()?.then(&sup_q)?.map() == TFunctor::identity(quot.category.clone()).map();
    let quotient_is_category = !quot.category.check_axioms()?.verdict().is_fail();
    Ok(SplitForkReport {
        geq,
        leq,
        formulas_agree,
        splittings,
        quotient_proper: quot.proper,
        quotient_is_category,
        quotient_separated: quot.category.is_separated(),
        sup_square,
        sup_retraction,
        sup_q: sup_q.map().to_vec(),
    })
}

/// Inhabitedness of a module with, per `y`, the best `𝔵` and its value.
#[derive(Clone, Debug)]
pub struct InhabitedWitness {
    pub inhabited: bool,
    pub witnesses: Vec<(Option<usize>, Value)>,
}

/// `k ≤ ⋀_y ⋁_𝔵 φ(𝔵, y)`. All shipped quantales are linear, so the join
/// is attained; the witness is the first `𝔵` attaining it.
pub fn inhabited_check(phi: &VRel) -> InhabitedWitness {
    let q = phi.quantale();
    let k = q.unit();
    let witnesses: Vec<(Option<usize>, Value)> = (0..phi.cols())
        .map(|y| {
            let col = phi.column(y);
            let best = q.sup(col.iter());
            let at = col.iter().position(|v| *v == best).filter(|_| !q.is_bottom(&best));
            (at, best)
        })
        .collect();
    let inhabited = witnesses.iter().all(|(_, v)| q.leq(&k, v));
    InhabitedWitness { inhabited, witnesses }
}

/// `f_*` is inhabited.
pub fn is_dense(f: &TFunctor) -> bool {
    inhabited_check(&f.star()).inhabited
}

/// `k ≤ ⋁_𝔵 ψ(𝔵)`.
pub fn is_inhabited_presheaf(q: crate::quantale::Quantale, psi: &[Value]) -> bool {
    q.leq(&q.unit(), &q.sup(psi.iter()))
}

/// `X⁺ ⊆ X̂`, the inhabited presheaves, with the restricted structure.
pub fn x_plus(px: &PresheafCategory) -> Result<PresheafCategory> {
    let q = px.base().quantale();
    let keep: Vec<usize> = (0..px.len()).filter(|&i| is_inhabited_presheaf(q, px.vector(i))).collect();
    px.restrict(&keep)
}

/// `ι: X⁺ ↪ X̂`.
pub fn plus_inclusion(px: &PresheafCategory, pxp: &PresheafCategory) -> Result<TFunctor> {
    let map = pxp
        .vectors()
        .iter()
        .map(|v| px.index_of(v).ok_or_else(|| Error::Precondition("X⁺ is not inside X̂".into())))
        .collect::<Result<Vec<_>>>()?;
    TFunctor::new(pxp.category().clone(), px.category().clone(), map)
}

/// `f⁺: X⁺ → Y⁺`, the restriction of `f̂`.
pub fn plus_functor(f: &TFunctor, pxp: &PresheafCategory, pyp: &PresheafCategory) -> Result<TFunctor> {
    hat_functor(f, pxp, pyp)
}

/// Closure of `X⁺` under inhabited colimits in `X̂`: every inhabited
/// presheaf `φ` on `X⁺` has a `φ`-weighted colimit of `ι` lying in `X⁺`.
/// Returns the number of weights checked, or `None` on a failure.
pub fn plus_closed_in_hat(px: &PresheafCategory, pxp: &PresheafCategory) -> Result<Option<usize>> {
    let iota = plus_inclusion(px, pxp)?;
    let xp = pxp.category();
    let g = Arc::new(TCategory::generator(xp.theory())?);
    let q = xp.quantale();
    let mut n = 0;
    for phi in enumerate_presheaves(xp)? {
        if !is_inhabited_presheaf(q, &phi) {
            continue;
        }
        n += 1;
        let rel = VRel::from_fn(q, xp.tspace().carrier().clone(), g.carrier().clone(), |w, _| phi[w].clone());
        let weight = TModule::new(xp.clone(), g.clone(), rel)?;
        let col = weighted_colimit(&weight, &iota)?;
        match col.functor {
            Some(c) if is_inhabited_presheaf(q, px.vector(c.apply(0))) => {}
            _ => return Ok(None),
        }
    }
    Ok(Some(n))
}

/// The three clauses for a triangle `g = h · f`, each as "the implication holds".
pub fn comp_canc_dense(f: &TFunctor, h: &TFunctor) -> Result<[bool; 3]> {
    let g = f.then(h)?;
    let (df, dg, dh) = (is_dense(f), is_dense(&g), is_dense(h));
    Ok([
        !(dh && df) || dg,
        !(dg && h.is_fully_faithful()) || df,
        !dg || dh,
    ])
}

/// `f` dense, `f⁺` left adjoint, `f⁺` dense.
pub fn dense_plus_equivalence(f: &TFunctor, pxp: &PresheafCategory, pyp: &PresheafCategory) -> Result<[bool; 3]> {
    let fp = plus_functor(f, pxp, pyp)?;
    Ok([is_dense(f), fp.right_adjoint().is_some(), is_dense(&fp)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::cocomplete_check;
    use crate::quantale::Quantale;
    use crate::tcat::all_functors;
    use crate::theory::Theory;

    fn b(v: bool) -> Value {
        Value::Bool(v)
    }

    fn preorder(rel: &[(usize, usize)], n: usize) -> Arc<TCategory> {
        let x = Carrier::range(n).arc();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| b(i == j || rel.contains(&(i, j)))).collect())
            .collect();
        Arc::new(TCategory::checked(Theory::identity(Quantale::Bool2), &x, rows).unwrap())
    }

    fn chain(n: usize) -> Arc<TCategory> {
        let rel: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        preorder(&rel, n)
    }

    // 0 = ⊥, 1, 2 incomparable, 3 = ⊤
    fn square() -> Arc<TCategory> {
        preorder(&[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)], 4)
    }

    #[test]
    fn kz_on_small_orders() {
        for x in [chain(1), chain(2), preorder(&[], 2), preorder(&[(0, 1), (1, 0)], 2)] {
            let px = PresheafCategory::new(x).unwrap();
            let pxx = PresheafCategory::new(px.category().clone()).unwrap();
            assert!(kz_check(&px, &pxx).unwrap().holds());
        }
    }

    #[test]
    fn algebra_examples() {
        let c = chain(3);
        let pc = PresheafCategory::new(c.clone()).unwrap();
        let sup = pc.sup_search().unwrap().unwrap();
        assert!(algebra_check(&sup, &pc).unwrap());
        // every monotone retraction of y on a finite lattice is forced to be Sup
        let y = pc.yoneda().unwrap();
        for m in all_functors(pc.category(), &c) {
            let h = TFunctor::new(pc.category().clone(), c.clone(), m).unwrap();
            if y.then(&h).unwrap().map() == [0, 1, 2] {
                assert_eq!(h.map(), sup.map());
            }
        }
        let constant = TFunctor::checked(pc.category().clone(), c.clone(), vec![2; pc.len()]).unwrap();
        assert!(!algebra_check(&constant, &pc).unwrap());
        let pcc = PresheafCategory::new(pc.category().clone()).unwrap();
        assert!(algebra_check(&pc.yoneda_inverse(&pcc).unwrap(), &pcc).unwrap());
        let pre = PresheafCategory::new(preorder(&[(0, 1), (1, 0)], 2)).unwrap();
        let any = TFunctor::new(pre.category().clone(), pre.base().clone(), vec![0; pre.len()]).unwrap();
        assert!(matches!(algebra_check(&any, &pre), Err(Error::NotSeparated(_))));
    }

    #[test]
    fn partitions_are_bell_numbers() {
        let counts: Vec<usize> = (0..6).map(|n| EquivalenceRelation::all_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn quotient_examples() {
        let c = chain(2);
        let triv = EquivalenceRelation::new(c.clone(), vec![vec![1], vec![0]]).unwrap();
        let qt = proper_quotient(&triv).unwrap();
        assert!(qt.proper);
        assert_eq!(qt.category.structure(), &c.structure().relabel(qt.category.tspace().carrier().clone(), qt.category.carrier().clone()).unwrap());
        let all = EquivalenceRelation::new(c.clone(), vec![vec![0, 1]]).unwrap();
        let q1 = proper_quotient(&all).unwrap();
        assert_eq!(q1.category.len(), 1);
        assert_eq!(q1.category.hom(0, 0), &b(true));
        assert_eq!(q1.category.label(0), "{0,1}");
        assert!(all.projections_left_adjoint());
        assert_eq!(all.relation().len(), 4);
    }

    #[test]
    fn split_fork_on_square() {
        let x = square();
        let px = PresheafCategory::new(x.clone()).unwrap();
        let sup = px.sup_search().unwrap().unwrap();
        let mut checked = 0;
        for part in EquivalenceRelation::all_partitions(4) {
            let rel = EquivalenceRelation::new(x.clone(), part).unwrap();
            if !rel.projections_left_adjoint() {
                assert!(split_fork_check(&rel, &sup, &px).is_err());
                continue;
            }
            checked += 1;
            let rep = split_fork_check(&rel, &sup, &px).unwrap();
            assert!(rep.holds(), "{:?} {:?}", rel.classes(), rep);
        }
        assert!(checked >= 2);
        // collapsing an edge {⊥, 1} and {2, ⊤}
        let rel = EquivalenceRelation::new(x.clone(), vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(rel.projections_left_adjoint());
        assert!(split_fork_check(&rel, &sup, &px).unwrap().holds());
    }

    #[test]
    fn inhabited_examples() {
        let one = chain(1);
        let c = chain(2);
        // a(x, y) = ⊤ iff x ≤ y, so nothing lies below the image of the top
        let top = TFunctor::checked(one.clone(), c.clone(), vec![1]).unwrap();
        let w = inhabited_check(&top.star());
        assert!(!w.inhabited);
        assert_eq!(w.witnesses[0], (None, b(false)));
        assert_eq!(w.witnesses[1], (Some(0), b(true)));
        let bottom = TFunctor::checked(one.clone(), c.clone(), vec![0]).unwrap();
        assert!(is_dense(&bottom));
        assert!(inhabited_check(&top.costar()).inhabited);
        let collapse = TFunctor::checked(c.clone(), one, vec![0, 0]).unwrap();
        assert!(is_dense(&collapse));
    }

    #[test]
    fn adjoints_are_dense() {
        let xs = [chain(2), chain(3), preorder(&[], 2), preorder(&[(0, 1), (0, 2)], 3)];
        for x in &xs {
            for y in &xs {
                for m in all_functors(x, y) {
                    let f = TFunctor::new(x.clone(), y.clone(), m).unwrap();
                    assert!(inhabited_check(&f.costar()).inhabited);
                    if f.right_adjoint().is_some() {
                        assert!(is_dense(&f));
                    }
                }
            }
        }
    }

    #[test]
    fn x_plus_examples() {
        let c = chain(2);
        let px = PresheafCategory::new(c.clone()).unwrap();
        let pxp = x_plus(&px).unwrap();
        assert_eq!(pxp.vectors(), &[vec![b(true), b(false)], vec![b(true), b(true)]]);
        assert!(is_dense(&pxp.yoneda().unwrap()));
        assert_eq!(plus_closed_in_hat(&px, &pxp).unwrap(), Some(2));
        let d = preorder(&[], 2);
        let pd = PresheafCategory::new(d).unwrap();
        let pdp = x_plus(&pd).unwrap();
        assert_eq!(pdp.len(), 3);
        let dense_inj = cocomplete_check(&pdp).unwrap();
        assert!(dense_inj.agree() && !dense_inj.cocomplete());
        assert!(!cocomplete_check(&pd).unwrap().cocomplete());
        assert!(cocomplete_check(&pxp).unwrap().cocomplete());
    }

    #[test]
    fn dense_plus_equivalence_on_chains() {
        let xs = [chain(1), chain(2), preorder(&[], 2)];
        for x in &xs {
            let pxp = x_plus(&PresheafCategory::new(x.clone()).unwrap()).unwrap();
            for y in &xs {
                let pyp = x_plus(&PresheafCategory::new(y.clone()).unwrap()).unwrap();
                for m in all_functors(x, y) {
                    let f = TFunctor::new(x.clone(), y.clone(), m).unwrap();
                    let [a, bb, c] = dense_plus_equivalence(&f, &pxp, &pyp).unwrap();
                    assert!(a == bb && bb == c);
                }
            }
        }
    }
}
