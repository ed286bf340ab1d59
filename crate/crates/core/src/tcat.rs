//! T-categories, T-functors and T-modules.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantale::{Quantale, Value};
use crate::theory::{
    kleisli, kleisli_lift, trel_extend, txi, unit_op, TSpace, Theory, TheoryKind, Verdict,
};
use crate::vrel::{expect_carrier, same_carrier, Carrier, VRel};

/// Named components of a counterexample, e.g. `[("𝔛", "((a),(b))"), ("x", "a")]`.
pub type Witness = Vec<(String, String)>;

fn witness(parts: &[(&str, String)]) -> Witness {
    parts.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// A T-category `(X, a)` with `a: TX ⇸ X`.
#[derive(Clone)]
pub struct TCategory {
    tx: Arc<TSpace>,
    a: VRel,
}

impl fmt::Debug for TCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TCategory[{}] {:?}", self.theory(), self.a)
    }
}

impl PartialEq for TCategory {
    fn eq(&self, other: &Self) -> bool {
        self.theory() == other.theory() && self.a == other.a
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CategoryReport {
    pub reflexive: Verdict,
    pub transitive: Verdict,
    /// `x` with `k ≰ a(e_X(x), x)`.
    pub reflexivity_witness: Option<Witness>,
    /// `(𝔛, 𝔵, x)` with `T_ξa(𝔛,𝔵) ⊗ a(𝔵,x) ≰ a(m_X(𝔛), x)`.
    pub transitivity_witness: Option<Witness>,
}

impl CategoryReport {
    pub fn verdict(&self) -> Verdict {
        self.reflexive.and(self.transitive)
    }
}

impl TCategory {
    /// Wrap a structure without checking the axioms.
    pub fn new(tx: Arc<TSpace>, a: VRel) -> Result<Self> {
        expect_carrier(tx.carrier(), a.dom())?;
        expect_carrier(tx.base(), a.cod())?;
        if a.quantale() != tx.quantale() {
            return Err(Error::QuantaleConflict(tx.quantale(), a.quantale()));
        }
        Ok(TCategory { tx, a })
    }

    /// Build from a theory and structure matrix, requiring both axioms.
    pub fn checked(theory: Theory, carrier: &Arc<Carrier>, rows: Vec<Vec<Value>>) -> Result<Self> {
        let tx = theory.apply(carrier)?;
        let a = VRel::new(theory.quantale(), tx.carrier().clone(), carrier.clone(), rows)?;
        let cat = TCategory::new(tx, a)?;
        let report = cat.check_axioms()?;
        if report.verdict().is_fail() {
            return Err(Error::Precondition(format!(
                "structure is not a T-category (reflexive: {}, transitive: {})",
                report.reflexive, report.transitive
            )));
        }
        Ok(cat)
    }

    /// `(X, e_X°)`.
    pub fn discrete(tx: Arc<TSpace>) -> Self {
        let a = unit_op(&tx);
        TCategory { tx, a }
    }

    /// `G = (1, e_1°)`.
    pub fn generator(theory: Theory) -> Result<Self> {
        Ok(Self::discrete(theory.apply(&Carrier::new(["*"])?.arc())?))
    }

    /// `E = (1, k)`.
    pub fn tensor_unit(theory: Theory) -> Result<Self> {
        let tx = theory.apply(&Carrier::new(["*"])?.arc())?;
        let q = theory.quantale();
        let a = VRel::constant(q, tx.carrier().clone(), tx.base().clone(), q.unit())?;
        Ok(TCategory { tx, a })
    }

    /// A V-category (identity theory) from a preorder-like matrix.
    pub fn v_category(q: Quantale, carrier: &Arc<Carrier>, r: VRel) -> Result<Self> {
        let tx = Theory::identity(q).apply(carrier)?;
        TCategory::new(tx, r)
    }

    pub fn theory(&self) -> Theory {
        self.tx.theory()
    }

    pub fn quantale(&self) -> Quantale {
        self.tx.quantale()
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        self.tx.base()
    }

    pub fn tspace(&self) -> &Arc<TSpace> {
        &self.tx
    }

    pub fn structure(&self) -> &VRel {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.carrier().len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier().is_empty()
    }

    pub fn label(&self, x: usize) -> &str {
        self.carrier().label(x)
    }

    /// `a(e_X(x), y)`, the underlying V-category hom.
    pub fn hom(&self, x: usize, y: usize) -> &Value {
        self.a.get(self.tx.unit(x), y)
    }

    /// `k ≤ a(e_X(x), y)`.
    pub fn le_points(&self, x: usize, y: usize) -> bool {
        self.quantale().leq(&self.quantale().unit(), self.hom(x, y))
    }

    pub fn check_axioms(&self) -> Result<CategoryReport> {
        let q = self.quantale();
        let th = self.theory();
        let k = q.unit();
        let refl = (0..self.len()).find(|&x| !q.leq(&k, self.hom(x, x)));
        let comp = kleisli(&self.a, &self.a, &self.tx, &self.tx)?;
        let trans = comp.first_violation(&self.a);
        let transitivity_witness = match trans {
            None => None,
            Some((target, x)) => Some(self.transitivity_witness(target, x)),
        };
        Ok(CategoryReport {
            reflexive: th.pointwise_verdict(refl.is_none()),
            transitive: th.pointwise_verdict(trans.is_none()),
            reflexivity_witness: refl.map(|x| witness(&[("x", self.label(x).to_string())])),
            transitivity_witness,
        })
    }

    fn transitivity_witness(&self, target: usize, x: usize) -> Witness {
        let q = self.quantale();
        let bound = self.a.get(target, x);
        for split in self.tx.splits().iter().filter(|s| s.target == target) {
            // search 𝔶 letter by letter
            let mut found = None;
            let n = split.parts.len();
            let mut ys = vec![0usize; n];
            let m = self.len();
            let total = m.checked_pow(n as u32).unwrap_or(0);
            for code in 0..total {
                let mut c = code;
                for slot in ys.iter_mut() {
                    *slot = c % m;
                    c /= m;
                }
                let letters: Vec<Value> = split
                    .parts
                    .iter()
                    .zip(&ys)
                    .map(|(&p, &y)| self.a.get(p, y).clone())
                    .collect();
                let Some(mid) = self.tx.index_of(&ys) else { continue };
                let v = q.otimes(&self.theory().xi(&letters), self.a.get(mid, x));
                if !q.leq(&v, bound) {
                    found = Some(mid);
                    break;
                }
            }
            if let Some(mid) = found {
                let outer: Vec<&str> = split.parts.iter().map(|&p| self.tx.label(p)).collect();
                return witness(&[
                    ("𝔛", format!("({})", outer.join(","))),
                    ("𝔵", self.tx.label(mid).to_string()),
                    ("x", self.label(x).to_string()),
                ]);
            }
        }
        witness(&[
            ("𝔵", self.tx.label(target).to_string()),
            ("x", self.label(x).to_string()),
        ])
    }

    /// `x ≅ y` in the underlying order.
    pub fn equivalent_points(&self, x: usize, y: usize) -> bool {
        self.le_points(x, y) && self.le_points(y, x)
    }

    /// No two distinct points are equivalent.
    pub fn is_separated(&self) -> bool {
        (0..self.len()).all(|x| (x + 1..self.len()).all(|y| !self.equivalent_points(x, y)))
    }

    /// `S X = (X, a · e_X)` over the identity theory.
    pub fn underlying(&self) -> Result<TCategory> {
        let q = self.quantale();
        let r = VRel::from_fn(q, self.carrier().clone(), self.carrier().clone(), |x, y| {
            self.hom(x, y).clone()
        });
        TCategory::v_category(q, self.carrier(), r)
    }

    /// `A X = (X, e_X° · T_ξ r)` for a V-category `X` (identity theory).
    pub fn free_from_v(vcat: &TCategory, theory: Theory) -> Result<TCategory> {
        if vcat.theory().kind() != TheoryKind::Identity {
            return Err(Error::Precondition("expected a V-category".into()));
        }
        let tx = theory.apply(vcat.carrier())?;
        let r = vcat.structure().relabel(vcat.carrier().clone(), vcat.carrier().clone())?;
        let t = txi(&r, &tx, &tx)?;
        let q = theory.quantale();
        let a = VRel::from_fn(q, tx.carrier().clone(), tx.base().clone(), |w, x| {
            t.get(w, tx.unit(x)).clone()
        });
        TCategory::new(tx, a)
    }

    /// `M X = (TX, T_ξa · m_X°)` over the identity theory.
    pub fn m_functor(&self) -> Result<TCategory> {
        let r = kleisli_lift(&self.a, &self.tx, &self.tx)?;
        TCategory::v_category(self.quantale(), self.tx.carrier(), r)
    }

    /// `X^op = A(M(X)^op)`, with carrier `TX`.
    pub fn dual(&self) -> Result<TCategory> {
        let m = self.m_functor()?;
        let op = m.structure().involution();
        let mop = TCategory::v_category(self.quantale(), self.tx.carrier(), op)?;
        TCategory::free_from_v(&mop, self.theory())
    }

    /// `|X| = (TX, m_X)`, the free Eilenberg–Moore algebra as a T-category.
    pub fn free_algebra(tx: &Arc<TSpace>) -> Result<TCategory> {
        let theory = tx.theory();
        let ttx = theory.apply(tx.carrier())?;
        let q = theory.quantale();
        let mut a = VRel::bottom(q, ttx.carrier().clone(), tx.carrier().clone());
        for split in tx.splits() {
            if let Some(w) = ttx.index_of(&split.parts) {
                a.set_unchecked(w, split.target, q.unit());
            }
        }
        TCategory::new(ttx, a)
    }

    /// `X ⊗ Y` on `X × Y`, pairs ordered lexicographically.
    pub fn tensor(&self, other: &TCategory) -> Result<TCategory> {
        if self.theory() != other.theory() {
            return Err(Error::Precondition("tensor of categories over different theories".into()));
        }
        let theory = self.theory();
        let q = self.quantale();
        let (n, m) = (self.len(), other.len());
        let labels = (0..n).flat_map(|x| (0..m).map(move |y| (x, y)));
        let carrier = Carrier::new(
            labels.map(|(x, y)| format!("({},{})", self.label(x), other.label(y))),
        )?
        .arc();
        let txy = theory.apply(&carrier)?;
        let p1: Vec<usize> = (0..n * m).map(|p| p / m).collect();
        let p2: Vec<usize> = (0..n * m).map(|p| p % m).collect();
        let t1 = txy.map(&p1, &self.tx)?;
        let t2 = txy.map(&p2, &other.tx)?;
        let a = VRel::from_fn(q, txy.carrier().clone(), carrier.clone(), |w, p| {
            q.otimes(self.a.get(t1[w], p / m), other.a.get(t2[w], p % m))
        });
        TCategory::new(txy, a)
    }

    /// The quantale as a T-category with `hom_ξ(𝔳, v) = hom(ξ(𝔳), v)`.
    pub fn quantale_category(theory: Theory) -> Result<TCategory> {
        let q = theory.quantale();
        let elems = q.enumerate()?;
        let carrier = Carrier::new(elems.iter().map(|v| v.to_string()))?.arc();
        let tv = theory.apply(&carrier)?;
        let a = VRel::from_fn(q, tv.carrier().clone(), carrier, |w, v| {
            let letters: Vec<Value> = tv.word(w).iter().map(|&i| elems[i].clone()).collect();
            q.residual(&theory.xi(&letters), &elems[v])
        });
        TCategory::new(tv, a)
    }

    /// Index of a value in the carrier of [`TCategory::quantale_category`].
    pub fn value_index(q: Quantale, v: &Value) -> Result<usize> {
        q.enumerate()?
            .iter()
            .position(|e| e == v)
            .ok_or_else(|| Error::QuantaleMismatch {
                quantale: q,
                value: v.to_string(),
            })
    }

    /// Sub-T-category on the given points (in the given order).
    pub fn restrict(&self, points: &[usize]) -> Result<(TCategory, Vec<usize>)> {
        let carrier = Carrier::new(points.iter().map(|&p| self.label(p).to_string()))?.arc();
        let ts = self.theory().apply(&carrier)?;
        let tmap = ts.map(points, &self.tx)?;
        let a = VRel::from_fn(self.quantale(), ts.carrier().clone(), carrier, |w, x| {
            self.a.get(tmap[w], points[x]).clone()
        });
        Ok((TCategory::new(ts, a)?, points.to_vec()))
    }
}

/// How two parallel functors compare under the pointwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctorOrder {
    Equivalent,
    Less,
    Greater,
    Incomparable,
}

impl fmt::Display for FunctorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctorOrder::Equivalent => "equivalent",
            FunctorOrder::Less => "f≤g",
            FunctorOrder::Greater => "g≤f",
            FunctorOrder::Incomparable => "incomparable",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctorReport {
    pub functor: Verdict,
    pub fully_faithful: Verdict,
    /// `(𝔵, x)` where `a(𝔵,x) ≰ b(Tf𝔵, fx)`.
    pub functor_witness: Option<Witness>,
    /// `(𝔵, x)` where `a(𝔵,x) ≠ b(Tf𝔵, fx)`.
    pub faithful_witness: Option<Witness>,
}

/// A function between the carriers of two T-categories.
#[derive(Clone)]
pub struct TFunctor {
    dom: Arc<TCategory>,
    cod: Arc<TCategory>,
    map: Vec<usize>,
    tmap: Vec<usize>,
}

impl fmt::Debug for TFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}↦{}", self.dom.label(x), self.cod.label(y)))
            .collect();
        write!(f, "TFunctor[{}]", pairs.join(", "))
    }
}

impl PartialEq for TFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

/// `Tf` on a single word; avoids a lookup for identity-like theories.
fn tmap_word(tx: &TSpace, ty: &TSpace, f: &[usize], w: usize) -> Option<usize> {
    match tx.theory().kind() {
        TheoryKind::Identity | TheoryKind::Ultrafilter => Some(f[w]),
        TheoryKind::Word { .. } => {
            let image: Vec<usize> = tx.word(w).iter().map(|&x| f[x]).collect();
            ty.index_of(&image)
        }
    }
}

impl TFunctor {
    /// Wrap a function without checking the functor inequality.
    pub fn new(dom: Arc<TCategory>, cod: Arc<TCategory>, map: Vec<usize>) -> Result<Self> {
        if dom.theory() != cod.theory() {
            return Err(Error::Precondition("functor between different theories".into()));
        }
        let tmap = dom.tx.map(&map, &cod.tx)?;
        Ok(TFunctor {
            dom,
            cod,
            map,
            tmap,
        })
    }

    /// Wrap a function, requiring it to be a T-functor.
    pub fn checked(dom: Arc<TCategory>, cod: Arc<TCategory>, map: Vec<usize>) -> Result<Self> {
        let f = TFunctor::new(dom, cod, map)?;
        let r = f.check();
        if r.functor.is_fail() {
            let w = r.functor_witness.unwrap_or_default();
            return Err(Error::NotFunctor(render_witness(&w)));
        }
        Ok(f)
    }

    pub fn identity(cat: Arc<TCategory>) -> Self {
        let map: Vec<usize> = (0..cat.len()).collect();
        let tmap = (0..cat.tx.len()).collect();
        TFunctor {
            dom: cat.clone(),
            cod: cat,
            map,
            tmap,
        }
    }

    pub fn dom(&self) -> &Arc<TCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<TCategory> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `Tf` as an index map `TX → TY`.
    pub fn tmap(&self) -> &[usize] {
        &self.tmap
    }

    pub fn check(&self) -> FunctorReport {
        let q = self.dom.quantale();
        let (a, b) = (&self.dom.a, &self.cod.a);
        let mut functor_witness = None;
        let mut faithful_witness = None;
        'outer: for w in 0..self.dom.tx.len() {
            for x in 0..self.dom.len() {
                let (u, v) = (a.get(w, x), b.get(self.tmap[w], self.map[x]));
                let wit = || {
                    witness(&[
                        ("𝔵", self.dom.tx.label(w).to_string()),
                        ("x", self.dom.label(x).to_string()),
                    ])
                };
                if !q.leq(u, v) {
                    functor_witness = Some(wit());
                    faithful_witness.get_or_insert_with(wit);
                    break 'outer;
                }
                if u != v && faithful_witness.is_none() {
                    faithful_witness = Some(wit());
                }
            }
        }
        let th = self.dom.theory();
        FunctorReport {
            functor: th.pointwise_verdict(functor_witness.is_none()),
            fully_faithful: th.pointwise_verdict(faithful_witness.is_none()),
            functor_witness,
            faithful_witness,
        }
    }

    pub fn is_functor(&self) -> bool {
        !self.check().functor.is_fail()
    }

    pub fn is_fully_faithful(&self) -> bool {
        !self.check().fully_faithful.is_fail()
    }

    /// `g · f`.
    pub fn then(&self, g: &TFunctor) -> Result<TFunctor> {
        if !Arc::ptr_eq(&self.cod, &g.dom) && *self.cod != *g.dom {
            return Err(Error::Precondition("functors are not composable".into()));
        }
        let map = self.map.iter().map(|&y| g.map[y]).collect();
        TFunctor::new(self.dom.clone(), g.cod.clone(), map)
    }

    /// `f_* = b · Tf: TX ⇸ Y`.
    pub fn star(&self) -> VRel {
        let b = &self.cod.a;
        VRel::from_fn(
            self.dom.quantale(),
            self.dom.tx.carrier().clone(),
            self.cod.carrier().clone(),
            |w, y| b.get(self.tmap[w], y).clone(),
        )
    }

    /// `f^* = f° · b: TY ⇸ X`.
    pub fn costar(&self) -> VRel {
        let b = &self.cod.a;
        VRel::from_fn(
            self.dom.quantale(),
            self.cod.tx.carrier().clone(),
            self.dom.carrier().clone(),
            |w, x| b.get(w, self.map[x]).clone(),
        )
    }

    pub fn star_module(&self) -> TModule {
        TModule {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            rel: self.star(),
        }
    }

    pub fn costar_module(&self) -> TModule {
        TModule {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            rel: self.costar(),
        }
    }

    /// `f ≤ g` iff `k ≤ b(e_Y(f x), g x)` for all `x`.
    pub fn le(&self, g: &TFunctor) -> bool {
        (0..self.dom.len()).all(|x| self.cod.le_points(self.map[x], g.map[x]))
    }

    pub fn order(&self, g: &TFunctor) -> FunctorOrder {
        match (self.le(g), g.le(self)) {
            (true, true) => FunctorOrder::Equivalent,
            (true, false) => FunctorOrder::Less,
            (false, true) => FunctorOrder::Greater,
            (false, false) => FunctorOrder::Incomparable,
        }
    }

    pub fn equivalent(&self, g: &TFunctor) -> bool {
        self.order(g) == FunctorOrder::Equivalent
    }

    /// A right adjoint `g` with `f_* = g^*`, the first in carrier order.
    pub fn right_adjoint(&self) -> Option<TFunctor> {
        let fs = self.star();
        let a = &self.dom.a;
        let mut g = Vec::with_capacity(self.cod.len());
        for y in 0..self.cod.len() {
            let col = fs.column(y);
            let x = (0..self.dom.len()).find(|&x| (0..col.len()).all(|w| *a.get(w, x) == col[w]))?;
            g.push(x);
        }
        TFunctor::new(self.cod.clone(), self.dom.clone(), g).ok()
    }

    /// `f ⊣ g` via `1 ≤ g·f` and `f·g ≤ 1`.
    pub fn is_left_adjoint_to(&self, g: &TFunctor) -> bool {
        (0..self.dom.len()).all(|x| self.dom.le_points(x, g.map[self.map[x]]))
            && (0..self.cod.len()).all(|y| self.cod.le_points(self.map[g.map[y]], y))
    }
}

pub fn render_witness(w: &Witness) -> String {
    let parts: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join(", ")
}

/// Backtracking enumeration of T-functors `dom → cod` whose value at each
/// point is drawn from `candidates[x]`, in lexicographic order of the
/// candidate lists. `visit` returns `false` to stop early.
pub fn search_functors(
    dom: &TCategory,
    cod: &TCategory,
    candidates: &[Vec<usize>],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let n = dom.len();
    assert_eq!(candidates.len(), n);
    let q = dom.quantale();
    // pairs (𝔵, x) with a(𝔵, x) > ⊥, grouped by the largest point involved
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for w in 0..dom.tx.len() {
        let top_letter = dom.tx.word(w).iter().copied().max();
        for x in 0..n {
            if q.is_bottom(dom.a.get(w, x)) {
                continue;
            }
            let p = top_letter.map_or(x, |t| t.max(x));
            checks[p].push((w, x));
        }
    }
    let mut f = vec![0usize; n];
    let mut stop = false;
    rec(dom, cod, candidates, &checks, 0, &mut f, visit, &mut stop);

    #[allow(clippy::too_many_arguments)]
    fn rec(
        dom: &TCategory,
        cod: &TCategory,
        candidates: &[Vec<usize>],
        checks: &[Vec<(usize, usize)>],
        p: usize,
        f: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
        stop: &mut bool,
    ) {
        if p == f.len() {
            if !visit(f) {
                *stop = true;
            }
            return;
        }
        let q = dom.quantale();
        for &c in &candidates[p] {
            f[p] = c;
            let ok = checks[p].iter().all(|&(w, x)| match tmap_word(&dom.tx, &cod.tx, f, w) {
                Some(tw) => q.leq(dom.a.get(w, x), cod.a.get(tw, f[x])),
                None => false,
            });
            if ok {
                rec(dom, cod, candidates, checks, p + 1, f, visit, stop);
                if *stop {
                    return;
                }
            }
        }
    }
}

/// All T-functors `dom → cod` in lexicographic order.
pub fn all_functors(dom: &Arc<TCategory>, cod: &Arc<TCategory>) -> Vec<Vec<usize>> {
    let cands: Vec<Vec<usize>> = vec![(0..cod.len()).collect(); dom.len()];
    let mut out = Vec::new();
    search_functors(dom, cod, &cands, &mut |f| {
        out.push(f.to_vec());
        true
    });
    out
}

/// A T-module `φ: X ⇸∘ Y`, i.e. a T-relation `TX ⇸ Y` absorbing both structures.
#[derive(Clone)]
pub struct TModule {
    dom: Arc<TCategory>,
    cod: Arc<TCategory>,
    rel: VRel,
}

impl fmt::Debug for TModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TModule {:?}", self.rel)
    }
}

impl PartialEq for TModule {
    fn eq(&self, other: &Self) -> bool {
        self.rel == other.rel
    }
}

impl TModule {
    /// Wrap a T-relation without checking the module laws.
    pub fn new(dom: Arc<TCategory>, cod: Arc<TCategory>, rel: VRel) -> Result<Self> {
        expect_carrier(dom.tx.carrier(), rel.dom())?;
        expect_carrier(cod.carrier(), rel.cod())?;
        Ok(TModule { dom, cod, rel })
    }

    /// The identity module `a: X ⇸∘ X`.
    pub fn identity(cat: Arc<TCategory>) -> Self {
        TModule {
            rel: cat.a.clone(),
            dom: cat.clone(),
            cod: cat,
        }
    }

    pub fn dom(&self) -> &Arc<TCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<TCategory> {
        &self.cod
    }

    pub fn rel(&self) -> &VRel {
        &self.rel
    }

    /// `φ∘a ≤ φ` and `b∘φ ≤ φ`.
    pub fn check(&self) -> Result<Verdict> {
        let left = kleisli(&self.rel, &self.dom.a, &self.dom.tx, &self.dom.tx)?;
        let right = kleisli(&self.cod.a, &self.rel, &self.dom.tx, &self.cod.tx)?;
        let holds = left.le(&self.rel)? && right.le(&self.rel)?;
        Ok(self.dom.theory().pointwise_verdict(holds))
    }

    pub fn is_module(&self) -> Result<bool> {
        Ok(!self.check()?.is_fail())
    }

    /// `ψ ∘ φ` for `φ = self: X ⇸ Y`, `ψ: Y ⇸ Z`.
    pub fn then(&self, psi: &TModule) -> Result<TModule> {
        let rel = kleisli(&psi.rel, &self.rel, &self.dom.tx, &self.cod.tx)?;
        Ok(TModule {
            dom: self.dom.clone(),
            cod: psi.cod.clone(),
            rel,
        })
    }

    /// `φ ↙ ψ: Z ⇸ Y` for `φ = self: X ⇸ Y`, `ψ: X ⇸ Z`.
    pub fn extend(&self, psi: &TModule) -> Result<TModule> {
        if !same_carrier(self.dom.carrier(), psi.dom.carrier()) {
            return Err(Error::CarrierMismatch {
                expected: self.dom.carrier().to_string(),
                found: psi.dom.carrier().to_string(),
            });
        }
        let rel = trel_extend(&self.rel, &psi.rel, &self.dom.tx, &psi.cod.tx)?;
        Ok(TModule {
            dom: psi.cod.clone(),
            cod: self.cod.clone(),
            rel,
        })
    }

    /// `φ ⊣ ψ` in `Mod(T)`: `a ≤ ψ∘φ` and `φ∘ψ ≤ b`.
    pub fn is_left_adjoint_to(&self, psi: &TModule) -> Result<bool> {
        let unit = self.then(psi)?;
        let counit = psi.then(self)?;
        Ok(self.dom.a.le(&unit.rel)? && counit.rel.le(&self.cod.a)?)
    }

    /// `k ≤ ⋀_y ⋁_𝔵 φ(𝔵, y)`.
    pub fn is_inhabited(&self) -> bool {
        let q = self.dom.quantale();
        let k = q.unit();
        (0..self.rel.cols()).all(|y| q.leq(&k, &q.sup(self.rel.column(y).iter())))
    }
}

/// `α∘(φ↙ψ) = (α∘φ)↙ψ` for a right adjoint `α: Y ⇸∘ B` with left adjoint `β`.
pub fn adj_module_lemma(
    phi: &TModule,
    psi: &TModule,
    alpha: &TModule,
    beta: &TModule,
) -> Result<bool> {
    if !beta.is_left_adjoint_to(alpha)? {
        return Err(Error::NotRightAdjoint("supplied left adjoint does not witness α".into()));
    }
    let lhs = phi.extend(psi)?.then(alpha)?;
    let rhs = phi.then(alpha)?.extend(psi)?;
    Ok(lhs.rel == rhs.rel)
}

/// Both sides of the characterisation of modules: `(is module, both maps
/// |X| ⊗ Y → V and X^op ⊗ Y → V are T-functors)`.
pub fn char_tmod(x: &Arc<TCategory>, y: &Arc<TCategory>, psi: &VRel) -> Result<(bool, bool)> {
    let module = TModule::new(x.clone(), y.clone(), psi.clone())?.is_module()?;
    let theory = x.theory();
    let q = theory.quantale();
    let v = Arc::new(TCategory::quantale_category(theory)?);
    let elems = q.enumerate()?;
    let idx = |val: &Value| elems.iter().position(|e| e == val).expect("enumerable value");
    // both tensors have carrier TX × Y, pairs in lexicographic order
    let map: Vec<usize> = (0..psi.rows())
        .flat_map(|w| (0..psi.cols()).map(move |yy| (w, yy)))
        .map(|(w, yy)| idx(psi.get(w, yy)))
        .collect();
    let free = Arc::new(TCategory::free_algebra(x.tspace())?.tensor(y)?);
    let dual = Arc::new(x.dual()?.tensor(y)?);
    let f1 = TFunctor::new(free, v.clone(), map.clone())?;
    let f2 = TFunctor::new(dual, v, map)?;
    Ok((module, f1.is_functor() && f2.is_functor()))
}
