//! Presheaf categories `X̂`, the Yoneda embedding, weighted colimits,
//! cocompleteness and Kan extensions.
//!
//! A presheaf is a module `ψ: X ⇸∘ G`, stored as a vector indexed by `TX`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantale::{Quantale, Value};
use crate::tcat::{search_functors, TCategory, TFunctor, TModule};
use crate::theory::{kleisli, kleisli_lift, TSpace, TheoryKind};
use crate::vrel::{Carrier, VRel};

/// Upper limit on candidate vectors examined when enumerating `X̂`.
pub const MAX_CANDIDATES: u64 = 1 << 22;

/// Upper limit on entries of the structure matrix of `X̂`.
pub const MAX_STRUCTURE: usize = 4_000_000;

pub fn render_vector(v: &[Value]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// `⟨𝔭, ψ⟩` for `𝔭 ∈ T(V^{|X|})` given as a word of vectors.
///
/// For the word theory this is the infimum, over all tuples
/// `(𝔵_1, …, 𝔵_n)` whose concatenation stays within the bound, of
/// `hom(⊗ p_i(𝔵_i), ψ(𝔵_1⋯𝔵_n))`.
pub fn bracket(tx: &TSpace, p: &[&[Value]], psi: &[Value]) -> Value {
    let q = tx.quantale();
    match tx.theory().kind() {
        TheoryKind::Identity | TheoryKind::Ultrafilter => {
            debug_assert_eq!(p.len(), 1);
            let mut acc = q.top();
            for (u, v) in p[0].iter().zip(psi) {
                acc = q.wedge(&acc, &q.residual(u, v));
            }
            acc
        }
        TheoryKind::Word { bound } => {
            let mut acc = q.top();
            let mut letters = Vec::new();
            bracket_rec(tx, q, p, psi, bound, &mut letters, q.unit(), &mut acc);
            acc
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn bracket_rec(
    tx: &TSpace,
    q: Quantale,
    p: &[&[Value]],
    psi: &[Value],
    budget: usize,
    letters: &mut Vec<usize>,
    weight: Value,
    acc: &mut Value,
) {
    let Some((first, rest)) = p.split_first() else {
        let w = tx.index_of(letters).expect("within bound");
        *acc = q.wedge(acc, &q.residual(&weight, &psi[w]));
        return;
    };
    for (i, word) in tx.words().iter().enumerate() {
        if word.len() > budget {
            continue;
        }
        let next = q.otimes(&weight, &first[i]);
        if q.is_bottom(&next) {
            continue;
        }
        let n = letters.len();
        letters.extend_from_slice(word);
        bracket_rec(tx, q, rest, psi, budget - word.len(), letters, next, acc);
        letters.truncate(n);
    }
}

/// `⟨e(ψ), φ⟩ = ⋀_𝔵 hom(ψ(𝔵), φ(𝔵))`.
pub fn presheaf_hom(q: Quantale, psi: &[Value], phi: &[Value]) -> Value {
    let mut acc = q.top();
    for (u, v) in psi.iter().zip(phi) {
        acc = q.wedge(&acc, &q.residual(u, v));
    }
    acc
}

/// `φ(𝔵) = ⟨Ty(𝔵), φ⟩` at every `𝔵`, for a single presheaf vector.
pub fn yoneda_lemma_at(base: &TCategory, phi: &[Value]) -> bool {
    let tx = base.tspace();
    let reps: Vec<Vec<Value>> = (0..base.len()).map(|x| base.structure().column(x)).collect();
    (0..tx.len()).all(|w| {
        let p: Vec<&[Value]> = tx.word(w).iter().map(|&x| reps[x].as_slice()).collect();
        bracket(tx, &p, phi) == phi[w]
    })
}

/// `⟨T⌜ψ⌝(𝔷), ⌜φ⌝(y)⟩ = (φ ↙ ψ)(𝔷, y)` for modules `ψ: X ⇸∘ Z`, `φ: X ⇸∘ Y`.
pub fn yoneda_theorem(psi: &TModule, phi: &TModule) -> Result<bool> {
    let tx = psi.dom().tspace();
    let tz = psi.cod().tspace();
    let lifted = phi.extend(psi)?;
    let cols_psi: Vec<Vec<Value>> = (0..psi.cod().len()).map(|z| psi.rel().column(z)).collect();
    let cols_phi: Vec<Vec<Value>> = (0..phi.cod().len()).map(|y| phi.rel().column(y)).collect();
    Ok((0..tz.len()).all(|w| {
        let p: Vec<&[Value]> = tz.word(w).iter().map(|&z| cols_psi[z].as_slice()).collect();
        (0..cols_phi.len()).all(|y| bracket(tx, &p, &cols_phi[y]) == *lifted.rel().get(w, y))
    }))
}

/// `ψ ∘ a ≤ ψ` and `e_1° ∘ ψ ≤ ψ`.
pub fn is_presheaf(base: &TCategory, g: &Arc<TCategory>, psi: &[Value]) -> Result<bool> {
    let rel = VRel::from_fn(base.quantale(), base.tspace().carrier().clone(), g.carrier().clone(), |w, _| {
        psi[w].clone()
    });
    let left = kleisli(&rel, base.structure(), base.tspace(), base.tspace())?;
    if !left.le(&rel)? {
        return Ok(false);
    }
    let right = kleisli(g.structure(), &rel, base.tspace(), g.tspace())?;
    right.le(&rel)
}

/// Every presheaf on `base`, in lexicographic order of the vectors
/// (first entry most significant, values ascending).
pub fn enumerate_presheaves(base: &TCategory) -> Result<Vec<Vec<Value>>> {
    let q = base.quantale();
    let elems = q.enumerate()?;
    let n = base.tspace().len();
    let total = (elems.len() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > MAX_CANDIDATES {
        return Err(Error::Capacity(format!(
            "{} candidate presheaves exceed {MAX_CANDIDATES}",
            if total == u64::MAX { "too many".to_string() } else { total.to_string() }
        )));
    }
    let g = Arc::new(TCategory::generator(base.theory())?);
    let identity_like = !base.theory().is_bounded();
    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let v: Vec<Value> = digits.iter().map(|&d| elems[d].clone()).collect();
        let ok = if identity_like {
            downward_closed(base, &v)
        } else {
            is_presheaf(base, &g, &v)?
        };
        if ok {
            out.push(v);
        }
        // odometer, last digit fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < elems.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

// Identity-like theories: ψ(y) ⊗ a(x, y) ≤ ψ(x); the G-action is trivial.
fn downward_closed(base: &TCategory, v: &[Value]) -> bool {
    let q = base.quantale();
    let a = base.structure();
    (0..v.len()).all(|x| (0..v.len()).all(|y| q.leq(&q.otimes(a.get(x, y), &v[y]), &v[x])))
}

/// `X̂` with its T-structure, together with the enumerated presheaves.
pub struct PresheafCategory {
    base: Arc<TCategory>,
    vectors: Vec<Vec<Value>>,
    index: HashMap<Vec<Value>, usize>,
    cat: Arc<TCategory>,
}

impl PresheafCategory {
    pub fn new(base: Arc<TCategory>) -> Result<Self> {
        let vectors = enumerate_presheaves(&base)?;
        Self::from_vectors(base, vectors)
    }

    /// `X̂` restricted to the given presheaves (which must be presheaves on `base`).
    pub fn from_vectors(base: Arc<TCategory>, vectors: Vec<Vec<Value>>) -> Result<Self> {
        let theory = base.theory();
        let q = theory.quantale();
        let labels: Vec<String> = vectors.iter().map(|v| render_vector(v)).collect();
        let carrier = Carrier::new(labels)?.arc();
        let tp = theory.apply(&carrier)?;
        if tp.len().saturating_mul(vectors.len()) > MAX_STRUCTURE {
            return Err(Error::Capacity(format!(
                "presheaf structure with {}×{} entries",
                tp.len(),
                vectors.len()
            )));
        }
        let tx = base.tspace();
        let structure = VRel::from_fn(q, tp.carrier().clone(), carrier, |w, psi| {
            let p: Vec<&[Value]> = tp.word(w).iter().map(|&i| vectors[i].as_slice()).collect();
            bracket(tx, &p, &vectors[psi])
        });
        let cat = Arc::new(TCategory::new(tp, structure)?);
        let index = vectors.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Ok(PresheafCategory {
            base,
            vectors,
            index,
            cat,
        })
    }

    /// The full sub-category on the given presheaf indices, inheriting the
    /// structure of `X̂` by restriction.
    pub fn restrict(&self, keep: &[usize]) -> Result<PresheafCategory> {
        let (cat, _) = self.cat.restrict(keep)?;
        let vectors: Vec<Vec<Value>> = keep.iter().map(|&i| self.vectors[i].clone()).collect();
        let index = vectors.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Ok(PresheafCategory {
            base: self.base.clone(),
            vectors,
            index,
            cat: Arc::new(cat),
        })
    }

    pub fn base(&self) -> &Arc<TCategory> {
        &self.base
    }

    /// `X̂` as a T-category.
    pub fn category(&self) -> &Arc<TCategory> {
        &self.cat
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Value>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[Value] {
        &self.vectors[i]
    }

    pub fn index_of(&self, v: &[Value]) -> Option<usize> {
        self.index.get(v).copied()
    }

    fn lookup(&self, v: &[Value]) -> Result<usize> {
        self.index_of(v)
            .ok_or_else(|| Error::Precondition(format!("{} is not in the presheaf list", render_vector(v))))
    }

    /// `y_X(x) = a(−, x)`.
    pub fn representable(&self, x: usize) -> Vec<Value> {
        self.base.structure().column(x)
    }

    /// `y_X: X → X̂`.
    pub fn yoneda(&self) -> Result<TFunctor> {
        let map = (0..self.base.len())
            .map(|x| self.lookup(&self.representable(x)))
            .collect::<Result<Vec<_>>>()?;
        TFunctor::new(self.base.clone(), self.cat.clone(), map)
    }

    /// `⌜φ⌝: Y → X̂`, `y ↦ φ(−, y)`, for a module `φ: X ⇸∘ Y`.
    pub fn mate(&self, phi: &TModule) -> Result<TFunctor> {
        let map = (0..phi.cod().len())
            .map(|y| self.lookup(&phi.rel().column(y)))
            .collect::<Result<Vec<_>>>()?;
        TFunctor::new(phi.cod().clone(), self.cat.clone(), map)
    }

    /// `φ(𝔵) = ⟨Ty(𝔵), φ⟩` for every presheaf and every `𝔵`.
    pub fn yoneda_lemma(&self) -> Result<bool> {
        let y = self.yoneda()?;
        let s = self.cat.structure();
        Ok((0..self.len()).all(|phi| {
            (0..self.base.tspace().len()).all(|w| self.vectors[phi][w] == *s.get(y.tmap()[w], phi))
        }))
    }

    /// `y⁻¹: X̂̂ → X̂`, given the presheaf category of `X̂`.
    pub fn yoneda_inverse(&self, hat_hat: &PresheafCategory) -> Result<TFunctor> {
        let y = self.yoneda()?;
        inverse_image_functor(&y, self, hat_hat)
    }

    /// A T-functor `Sup: X̂ → X` with `Sup · y ≅ 1`, the first in
    /// lexicographic order of candidate values.
    pub fn sup_search(&self) -> Result<Option<TFunctor>> {
        let x = &self.base;
        let y = self.yoneda()?;
        let mut cands: Vec<Vec<usize>> = vec![(0..x.len()).collect(); self.len()];
        for p in 0..x.len() {
            let psi = y.apply(p);
            cands[psi].retain(|&c| x.equivalent_points(c, p));
        }
        let mut found = None;
        search_functors(&self.cat, x, &cands, &mut |f| {
            found = Some(f.to_vec());
            false
        });
        found
            .map(|m| TFunctor::new(self.cat.clone(), x.clone(), m))
            .transpose()
    }

    /// The left adjoint of `y_X`, if any.
    pub fn yoneda_left_adjoint(&self) -> Result<Option<TFunctor>> {
        left_adjoint_of(&self.yoneda()?)
    }
}

/// A left adjoint `f` of `g: X → Y` (so `f_* = g^*`), the first in carrier order.
pub fn left_adjoint_of(g: &TFunctor) -> Result<Option<TFunctor>> {
    let (x, y) = (g.dom(), g.cod());
    let gs = g.costar();
    let ty = y.tspace();
    let mut map = Vec::with_capacity(y.len());
    for p in 0..y.len() {
        let row = gs.row(ty.unit(p));
        match (0..x.len()).find(|&c| (0..x.len()).all(|z| x.hom(c, z) == &row[z])) {
            Some(c) => map.push(c),
            None => return Ok(None),
        }
    }
    let f = TFunctor::new(y.clone(), x.clone(), map)?;
    Ok((f.star() == gs).then_some(f))
}

/// `f⁻¹(ψ) = ψ · Tf`.
pub fn inverse_image(f: &TFunctor, psi: &[Value]) -> Vec<Value> {
    f.tmap().iter().map(|&w| psi[w].clone()).collect()
}

/// `f̂(ψ)(𝔶) = ⋁_𝔵 ψ(𝔵) ⊗ s(𝔶, Tf 𝔵)` with `s = T_ξb · m_Y°`.
pub fn hat_image(f: &TFunctor, s: &VRel, psi: &[Value]) -> Vec<Value> {
    let q = f.dom().quantale();
    (0..s.rows())
        .map(|yw| {
            let mut acc = q.bottom();
            for (xw, v) in psi.iter().enumerate() {
                if q.is_bottom(v) {
                    continue;
                }
                acc = q.vee(&acc, &q.otimes(v, s.get(yw, f.tmap()[xw])));
            }
            acc
        })
        .collect()
}

/// `R_X(ψ)(𝔵) = ⋁_𝔶 ψ(𝔶) ⊗ r(𝔵, 𝔶)` with `r = T_ξa · m_X°`.
pub fn smear(base: &TCategory, psi: &[Value]) -> Result<Vec<Value>> {
    let r = kleisli_lift(base.structure(), base.tspace(), base.tspace())?;
    let q = base.quantale();
    Ok((0..r.rows())
        .map(|xw| {
            let mut acc = q.bottom();
            for (yw, v) in psi.iter().enumerate() {
                acc = q.vee(&acc, &q.otimes(v, r.get(xw, yw)));
            }
            acc
        })
        .collect())
}

/// Left adjoint of `f⁻¹: V^{|Y|} → V^{|X|}`: `𝔶 ↦ ⋁_{Tf𝔵 = 𝔶} ψ(𝔵)`.
pub fn pushforward(q: Quantale, tmap: &[usize], ty_len: usize, psi: &[Value]) -> Vec<Value> {
    let mut out = vec![q.bottom(); ty_len];
    for (xw, &yw) in tmap.iter().enumerate() {
        out[yw] = q.vee(&out[yw], &psi[xw]);
    }
    out
}

/// `f⁻¹: Ŷ → X̂` as a T-functor.
pub fn inverse_image_functor(
    f: &TFunctor,
    px: &PresheafCategory,
    py: &PresheafCategory,
) -> Result<TFunctor> {
    let map = py
        .vectors()
        .iter()
        .map(|psi| px.lookup(&inverse_image(f, psi)))
        .collect::<Result<Vec<_>>>()?;
    TFunctor::new(py.category().clone(), px.category().clone(), map)
}

/// `f̂: X̂ → Ŷ` as a T-functor.
pub fn hat_functor(f: &TFunctor, px: &PresheafCategory, py: &PresheafCategory) -> Result<TFunctor> {
    let cod = f.cod();
    let s = kleisli_lift(cod.structure(), cod.tspace(), cod.tspace())?;
    let map = px
        .vectors()
        .iter()
        .map(|psi| py.lookup(&hat_image(f, &s, psi)))
        .collect::<Result<Vec<_>>>()?;
    TFunctor::new(px.category().clone(), py.category().clone(), map)
}

/// Outcome of a weighted-colimit search.
#[derive(Clone, Debug)]
pub struct Colimit {
    /// A representing functor `g: Z → X`, if one exists.
    pub functor: Option<TFunctor>,
    /// `h_* ↙ ψ: TZ ⇸ X`.
    pub target: VRel,
    /// `h_* ↙ ψ = a ↙ (ψ ∘ h^*)`.
    pub reduction_agrees: bool,
}

/// The `ψ`-weighted colimit of `h: Y → X`, for `ψ: Y ⇸∘ Z`.
pub fn weighted_colimit(psi: &TModule, h: &TFunctor) -> Result<Colimit> {
    let x = h.cod();
    let z = psi.cod();
    let target = h.star_module().extend(psi)?;
    let reduced = TModule::identity(x.clone()).extend(&h.costar_module().then(psi)?)?;
    let reduction_agrees = target.rel() == reduced.rel();
    let t = target.rel();
    let tz = z.tspace();
    let cands: Vec<Vec<usize>> = (0..z.len())
        .map(|p| {
            let row = t.row(tz.unit(p));
            (0..x.len())
                .filter(|&c| (0..x.len()).all(|w| x.hom(c, w) == &row[w]))
                .collect()
        })
        .collect();
    let mut found = None;
    search_functors(z, x, &cands, &mut |g| {
        let f = TFunctor::new(z.clone(), x.clone(), g.to_vec()).expect("total map");
        if f.star() == *t {
            found = Some(f);
            false
        } else {
            true
        }
    });
    Ok(Colimit {
        functor: found,
        target: target.rel().clone(),
        reduction_agrees,
    })
}

/// Extend `f: A → X` along `i: A → B`: a T-functor `g: B → X` with `g·i ≅ f`.
pub fn extend_along(i: &TFunctor, f: &TFunctor) -> Option<TFunctor> {
    let (b, x) = (i.cod(), f.cod());
    let mut cands: Vec<Vec<usize>> = vec![(0..x.len()).collect(); b.len()];
    for a in 0..i.dom().len() {
        let target = f.apply(a);
        cands[i.apply(a)].retain(|&c| x.equivalent_points(c, target));
    }
    let mut found = None;
    search_functors(b, x, &cands, &mut |g| {
        found = Some(g.to_vec());
        false
    });
    found.and_then(|m| TFunctor::new(b.clone(), x.clone(), m).ok())
}

/// Every `(i, f)` pair extends. Errors if some `i` is not fully faithful.
pub fn injective_check(pairs: &[(TFunctor, TFunctor)]) -> Result<bool> {
    for (i, f) in pairs {
        if !i.is_fully_faithful() {
            return Err(Error::NotFullyFaithful(format!("{i:?}")));
        }
        if extend_along(i, f).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f_L = Sup_Y · f̂: X̂ → Y`.
pub fn kan_extension(
    f: &TFunctor,
    sup_y: &TFunctor,
    px: &PresheafCategory,
    py: &PresheafCategory,
) -> Result<TFunctor> {
    hat_functor(f, px, py)?.then(sup_y)
}

/// `⌜f_*⌝: Y → X̂`.
pub fn star_mate(f: &TFunctor, px: &PresheafCategory) -> Result<TFunctor> {
    px.mate(&f.star_module())
}

/// `f · Sup_X ≅ Sup_Y · f̂`.
pub fn cocontinuous(
    f: &TFunctor,
    sup_x: &TFunctor,
    sup_y: &TFunctor,
    px: &PresheafCategory,
    py: &PresheafCategory,
) -> Result<bool> {
    let lhs = sup_x.then(f)?;
    let rhs = hat_functor(f, px, py)?.then(sup_y)?;
    Ok(lhs.equivalent(&rhs))
}

/// Verdicts of the four characterisations of cocompleteness that do not need
/// an embedding suite, plus the detected `Sup`.
#[derive(Clone, Debug)]
pub struct CocompleteReport {
    /// `y_X` has a left inverse.
    pub left_inverse: Option<TFunctor>,
    /// `y_X` has a left adjoint.
    pub left_adjoint: Option<TFunctor>,
    /// Every weight in the checked family has a colimit of `1_X`.
    pub colimits: bool,
    /// Number of weights examined.
    pub weights: usize,
    /// The detected left inverse is left adjoint to `y_X`.
    pub sup_is_left_adjoint: bool,
}

impl CocompleteReport {
    pub fn agree(&self) -> bool {
        let li = self.left_inverse.is_some();
        li == self.left_adjoint.is_some() && li == self.colimits && (!li || self.sup_is_left_adjoint)
    }

    pub fn cocomplete(&self) -> bool {
        self.left_inverse.is_some()
    }
}

/// Check `(ii)`–`(iv)`: left inverse, left adjoint, and colimits of `1_X`
/// weighted by every presheaf and by `(y_X)_*`.
pub fn cocomplete_check(px: &PresheafCategory) -> Result<CocompleteReport> {
    let x = px.base().clone();
    let left_inverse = px.sup_search()?;
    let y = px.yoneda()?;
    let left_adjoint = left_adjoint_of(&y)?;
    let sup_is_left_adjoint = match &left_inverse {
        Some(s) => s.is_left_adjoint_to(&y),
        None => false,
    };
    let one = TFunctor::identity(x.clone());
    let g = Arc::new(TCategory::generator(x.theory())?);
    let mut colimits = true;
    let mut weights = 0;
    for v in px.vectors() {
        weights += 1;
        let rel = VRel::from_fn(x.quantale(), x.tspace().carrier().clone(), g.carrier().clone(), |w, _| {
            v[w].clone()
        });
        let weight = TModule::new(x.clone(), g.clone(), rel)?;
        if weighted_colimit(&weight, &one)?.functor.is_none() {
            colimits = false;
            break;
        }
    }
    if colimits {
        weights += 1;
        let ystar = y.star_module();
        if weighted_colimit(&ystar, &one)?.functor.is_none() {
            colimits = false;
        }
    }
    Ok(CocompleteReport {
        left_inverse,
        left_adjoint,
        colimits,
        weights,
        sup_is_left_adjoint,
    })
}
