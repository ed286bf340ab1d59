//! Topological theories `(T, e, m, ξ)` on finite carriers.
//!
//! Every element of `TX` is stored as a word over `X`. The identity and the
//! (finite, hence principal) ultrafilter monads use words of length exactly
//! one; the word monad uses all words up to a fixed bound, with `m` given by
//! concatenation wherever the result stays within the bound.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::quantale::{Quantale, Value};
use crate::vrel::{expect_carrier, Carrier, VRel};

/// Upper limit on `|TX|` before enumeration is refused.
pub const MAX_WORDS: usize = 200_000;

pub const DEFAULT_WORD_BOUND: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoryKind {
    Identity,
    /// Ultrafilters on finite sets; all principal, so `T` acts as the identity.
    Ultrafilter,
    /// Words of length `≤ bound`, `ξ` the tensor of the letters.
    Word { bound: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Theory {
    q: Quantale,
    kind: TheoryKind,
}

/// Outcome of a check. The bounded variants only arise for the word theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    PassWithinBound,
    UnknownWithinBound,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::PassWithinBound)
    }

    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }

    /// The weaker of two verdicts: fail dominates unknown, which dominates pass.
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::PassWithinBound => "pass-within-bound",
            Verdict::UnknownWithinBound => "unknown-within-bound",
            Verdict::Fail => "fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TheoryKind::Identity => write!(f, "identity over {}", self.q),
            TheoryKind::Ultrafilter => write!(f, "ultrafilter over {}", self.q),
            TheoryKind::Word { bound } => write!(f, "word(≤{bound}) over {}", self.q),
        }
    }
}

impl Theory {
    pub fn identity(q: Quantale) -> Self {
        Theory {
            q,
            kind: TheoryKind::Identity,
        }
    }

    pub fn ultrafilter(q: Quantale) -> Self {
        Theory {
            q,
            kind: TheoryKind::Ultrafilter,
        }
    }

    pub fn word(q: Quantale, bound: usize) -> Result<Self> {
        if bound == 0 {
            return Err(Error::Precondition("word bound must be positive".into()));
        }
        Ok(Theory {
            q,
            kind: TheoryKind::Word { bound },
        })
    }

    pub fn quantale(&self) -> Quantale {
        self.q
    }

    pub fn kind(&self) -> TheoryKind {
        self.kind
    }

    pub fn bound(&self) -> Option<usize> {
        match self.kind {
            TheoryKind::Word { bound } => Some(bound),
            _ => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.bound().is_some()
    }

    /// Same monad over another quantale.
    pub fn with_quantale(&self, q: Quantale) -> Theory {
        Theory { q, kind: self.kind }
    }

    /// Verdict for a check whose counterexamples are exact even under
    /// truncation (pointwise inequalities between in-bound entries).
    pub fn pointwise_verdict(&self, holds: bool) -> Verdict {
        match (holds, self.is_bounded()) {
            (true, false) => Verdict::Pass,
            (true, true) => Verdict::PassWithinBound,
            (false, _) => Verdict::Fail,
        }
    }

    /// Verdict for a check whose values may depend on discarded witnesses.
    pub fn truncated_verdict(&self, holds: bool) -> Verdict {
        match (holds, self.is_bounded()) {
            (true, false) => Verdict::Pass,
            (false, false) => Verdict::Fail,
            (true, true) => Verdict::PassWithinBound,
            (false, true) => Verdict::UnknownWithinBound,
        }
    }

    /// `ξ` applied to a word of values.
    pub fn xi(&self, letters: &[Value]) -> Value {
        match self.kind {
            TheoryKind::Identity | TheoryKind::Ultrafilter => {
                debug_assert_eq!(letters.len(), 1);
                letters[0].clone()
            }
            TheoryKind::Word { .. } => self.q.product(letters),
        }
    }

    /// Enumerate `TX`.
    pub fn apply(&self, base: &Arc<Carrier>) -> Result<Arc<TSpace>> {
        TSpace::build(*self, base.clone())
    }
}

/// A decomposition `𝔛 ∈ TTX` with `m_X(𝔛)` defined: `parts` are `TX`
/// indices whose concatenation is the word at `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub parts: Vec<usize>,
    pub target: usize,
}

/// The enumerated set `TX` together with `e_X` and the defined part of `m_X`.
pub struct TSpace {
    theory: Theory,
    base: Arc<Carrier>,
    carrier: Arc<Carrier>,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    splits: OnceLock<Vec<Split>>,
}

impl fmt::Debug for TSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{}]({:?})", self.theory, self.base)
    }
}

pub fn word_label(base: &Carrier, w: &[usize]) -> String {
    let inner: Vec<&str> = w.iter().map(|&i| base.label(i)).collect();
    format!("({})", inner.join(","))
}

fn word_count(n: usize, bound: usize) -> Option<usize> {
    let mut total: usize = 0;
    let mut layer: usize = 1;
    for len in 0..=bound {
        if len > 0 {
            layer = layer.checked_mul(n)?;
        }
        total = total.checked_add(layer)?;
    }
    Some(total)
}

impl TSpace {
    fn build(theory: Theory, base: Arc<Carrier>) -> Result<Arc<TSpace>> {
        let n = base.len();
        let (words, carrier) = match theory.kind {
            TheoryKind::Identity | TheoryKind::Ultrafilter => {
                ((0..n).map(|i| vec![i]).collect::<Vec<_>>(), base.clone())
            }
            TheoryKind::Word { bound } => {
                match word_count(n, bound) {
                    Some(c) if c <= MAX_WORDS => {}
                    _ => {
                        return Err(Error::Capacity(format!(
                            "{n} letters with word bound {bound} exceed {MAX_WORDS} words"
                        )))
                    }
                }
                let mut words: Vec<Vec<usize>> = vec![vec![]];
                let mut layer: Vec<Vec<usize>> = vec![vec![]];
                for _ in 0..bound {
                    let mut next = Vec::with_capacity(layer.len() * n);
                    for w in &layer {
                        for x in 0..n {
                            let mut v = w.clone();
                            v.push(x);
                            next.push(v);
                        }
                    }
                    words.extend(next.iter().cloned());
                    layer = next;
                }
                let labels: Vec<String> = words.iter().map(|w| word_label(&base, w)).collect();
                let carrier = Carrier::new(labels)?.arc();
                (words, carrier)
            }
        };
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(Arc::new(TSpace {
            theory,
            base,
            carrier,
            words,
            index,
            splits: OnceLock::new(),
        }))
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn quantale(&self) -> Quantale {
        self.theory.q
    }

    /// The underlying set `X`.
    pub fn base(&self) -> &Arc<Carrier> {
        &self.base
    }

    /// `TX` as a carrier (labels are rendered words; for the identity-like
    /// theories this is the base carrier itself).
    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn label(&self, i: usize) -> &str {
        self.carrier.label(i)
    }

    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// `e_X(x)`.
    pub fn unit(&self, x: usize) -> usize {
        match self.theory.kind {
            TheoryKind::Identity | TheoryKind::Ultrafilter => x,
            TheoryKind::Word { .. } => self.index[&vec![x]],
        }
    }

    pub fn unit_map(&self) -> Vec<usize> {
        (0..self.base.len()).map(|x| self.unit(x)).collect()
    }

    /// `x` if the element at `i` is `e_X(x)`.
    pub fn as_unit(&self, i: usize) -> Option<usize> {
        match self.words[i].as_slice() {
            [x] => Some(*x),
            _ => None,
        }
    }

    /// `Tf: TX → TY` as an index map, for `f: X → Y` given as indices.
    pub fn map(&self, f: &[usize], cod: &TSpace) -> Result<Vec<usize>> {
        if f.len() != self.base.len() {
            return Err(Error::NotTotal(format!(
                "map defined on {} of {} points",
                f.len(),
                self.base.len()
            )));
        }
        self.words
            .iter()
            .map(|w| {
                let image: Vec<usize> = w.iter().map(|&x| f[x]).collect();
                cod.index_of(&image).ok_or_else(|| {
                    Error::NotTotal(format!("image word of length {} outside T(Y)", image.len()))
                })
            })
            .collect()
    }

    /// All `𝔛 ∈ TTX` on which `m_X` is defined, with their values.
    pub fn splits(&self) -> &[Split] {
        self.splits.get_or_init(|| self.compute_splits())
    }

    fn compute_splits(&self) -> Vec<Split> {
        match self.theory.kind {
            TheoryKind::Identity | TheoryKind::Ultrafilter => (0..self.len())
                .map(|i| Split {
                    parts: vec![i],
                    target: i,
                })
                .collect(),
            TheoryKind::Word { bound } => {
                let mut out = Vec::new();
                for (target, w) in self.words.iter().enumerate() {
                    let mut parts = Vec::new();
                    self.split_rec(w, bound, &mut parts, target, &mut out);
                }
                out
            }
        }
    }

    // Split `rest` into at most `budget` further (possibly empty) pieces.
    fn split_rec(
        &self,
        rest: &[usize],
        budget: usize,
        parts: &mut Vec<usize>,
        target: usize,
        out: &mut Vec<Split>,
    ) {
        if rest.is_empty() {
            out.push(Split {
                parts: parts.clone(),
                target,
            });
        }
        if budget == 0 {
            return;
        }
        for cut in 0..=rest.len() {
            parts.push(self.index[&rest[..cut].to_vec()]);
            self.split_rec(&rest[cut..], budget - 1, parts, target, out);
            parts.pop();
        }
    }
}

fn expect_space(t: &TSpace, c: &Arc<Carrier>) -> Result<()> {
    expect_carrier(t.base(), c)
}

/// `T_ξ r: TX ⇸ TY` for `r: X ⇸ Y`.
pub fn txi(r: &VRel, tx: &TSpace, ty: &TSpace) -> Result<VRel> {
    expect_space(tx, r.dom())?;
    expect_space(ty, r.cod())?;
    let th = tx.theory();
    let q = r.quantale();
    match th.kind {
        TheoryKind::Identity | TheoryKind::Ultrafilter => {
            r.relabel(tx.carrier().clone(), ty.carrier().clone())
        }
        TheoryKind::Word { .. } => {
            let b = q.bottom();
            Ok(VRel::from_fn(q, tx.carrier().clone(), ty.carrier().clone(), |i, j| {
                let (u, v) = (tx.word(i), ty.word(j));
                if u.len() != v.len() {
                    return b.clone();
                }
                let letters: Vec<Value> = u.iter().zip(v).map(|(&a, &c)| r.get(a, c).clone()).collect();
                th.xi(&letters)
            }))
        }
    }
}

/// `e_X°: TX ⇸ X`, the discrete T-structure on `X`.
pub fn unit_op(tx: &TSpace) -> VRel {
    let q = tx.quantale();
    let (k, b) = (q.unit(), q.bottom());
    VRel::from_fn(q, tx.carrier().clone(), tx.base().clone(), |i, x| {
        if tx.as_unit(i) == Some(x) {
            k.clone()
        } else {
            b.clone()
        }
    })
}

/// `e_X: X ⇸ TX` as a relation.
pub fn unit_rel(tx: &TSpace) -> VRel {
    unit_op(tx).involution()
}

/// `T_ξα · m_X°: TX ⇸ TY`, split by the number of letters of the `TY` word.
/// The `n`-th entry only has support on words of length `n`.
pub fn kleisli_lift_graded(alpha: &VRel, tx: &TSpace, ty: &TSpace) -> Result<Vec<VRel>> {
    expect_carrier(tx.carrier(), alpha.dom())?;
    expect_space(ty, alpha.cod())?;
    let q = alpha.quantale();
    let grades = tx.theory().bound().unwrap_or(1) + 1;
    let mut out: Vec<VRel> = (0..grades)
        .map(|_| VRel::bottom(q, tx.carrier().clone(), ty.carrier().clone()))
        .collect();
    let support = alpha.row_support();
    let mut ys = Vec::new();
    for split in tx.splits() {
        let n = split.parts.len();
        dfs_words(q, &support, &split.parts, &mut ys, q.unit(), &mut |ys, v| {
            let j = ty.index_of(ys).expect("word length within bound");
            let cur = out[n].get(split.target, j);
            let nv = q.vee(cur, &v);
            out[n].set_unchecked(split.target, j, nv);
        });
    }
    Ok(out)
}

fn dfs_words(
    q: Quantale,
    support: &[Vec<(usize, Value)>],
    parts: &[usize],
    ys: &mut Vec<usize>,
    acc: Value,
    emit: &mut impl FnMut(&[usize], Value),
) {
    let i = ys.len();
    if i == parts.len() {
        emit(ys, acc);
        return;
    }
    for (y, v) in &support[parts[i]] {
        let next = q.otimes(&acc, v);
        if q.is_bottom(&next) {
            continue;
        }
        ys.push(*y);
        dfs_words(q, support, parts, ys, next, emit);
        ys.pop();
    }
}

/// `T_ξα · m_X°: TX ⇸ TY`.
pub fn kleisli_lift(alpha: &VRel, tx: &TSpace, ty: &TSpace) -> Result<VRel> {
    let graded = kleisli_lift_graded(alpha, tx, ty)?;
    let mut acc = graded[0].clone();
    for g in &graded[1..] {
        acc = acc.join(g)?;
    }
    Ok(acc)
}

/// Kleisli convolution `β ∘ α = β · T_ξα · m_X°` for `α: TX ⇸ Y`, `β: TY ⇸ Z`.
pub fn kleisli(beta: &VRel, alpha: &VRel, tx: &TSpace, ty: &TSpace) -> Result<VRel> {
    expect_carrier(ty.carrier(), beta.dom())?;
    kleisli_lift(alpha, tx, ty)?.compose(beta)
}

/// Kleisli convolution keeping only decompositions with exactly `n` middle
/// letters, for each `n`.
pub fn kleisli_graded(beta: &VRel, alpha: &VRel, tx: &TSpace, ty: &TSpace) -> Result<Vec<VRel>> {
    expect_carrier(ty.carrier(), beta.dom())?;
    kleisli_lift_graded(alpha, tx, ty)?
        .iter()
        .map(|m| m.compose(beta))
        .collect()
}

/// `e_Y° ∘ α = α`.
pub fn is_unitary(alpha: &VRel, tx: &TSpace, ty: &TSpace) -> Result<bool> {
    Ok(kleisli(&unit_op(ty), alpha, tx, ty)? == *alpha)
}

/// `γ ↙ α := γ ↙ (T_ξα · m_X°): TY ⇸ Z` for `γ: TX ⇸ Z`, `α: TX ⇸ Y`.
pub fn trel_extend(gamma: &VRel, alpha: &VRel, tx: &TSpace, ty: &TSpace) -> Result<VRel> {
    expect_carrier(tx.carrier(), gamma.dom())?;
    gamma.extend(&kleisli_lift(alpha, tx, ty)?)
}

/// Associativity `(γ∘β)∘α = γ∘(β∘α)` within the bound.
///
/// Under truncation the right-hand side may pick up decompositions whose
/// total number of middle letters exceeds the bound; these are dropped
/// before comparing, so in-bound agreement is exact.
pub fn kleisli_assoc(
    gamma: &VRel,
    beta: &VRel,
    alpha: &VRel,
    tx: &TSpace,
    ty: &TSpace,
    tz: &TSpace,
) -> Result<Verdict> {
    let th = tx.theory();
    let lhs = kleisli(&kleisli(gamma, beta, ty, tz)?, alpha, tx, ty)?;
    let rhs = match th.bound() {
        None => kleisli(gamma, &kleisli(beta, alpha, tx, ty)?, tx, tz)?,
        Some(bound) => {
            // graded[n](v, z) = part of (β∘α)(v, z) through n letters of Y
            let graded = kleisli_graded(beta, alpha, tx, ty)?;
            let q = alpha.quantale();
            let supports: Vec<Vec<Vec<(usize, Value)>>> =
                graded.iter().map(|g| g.row_support()).collect();
            let mut mid = VRel::bottom(q, tx.carrier().clone(), tz.carrier().clone());
            for split in tx.splits() {
                let mut zs = Vec::new();
                strict_rec(
                    q, &supports, &split.parts, bound, &mut zs, q.unit(),
                    &mut |zs, v| {
                        let j = tz.index_of(zs).expect("within bound");
                        let nv = q.vee(mid.get(split.target, j), &v);
                        mid.set_unchecked(split.target, j, nv);
                    },
                );
            }
            mid.compose(gamma)?
        }
    };
    Ok(th.truncated_verdict(lhs == rhs))
}

#[allow(clippy::too_many_arguments)]
fn strict_rec(
    q: Quantale,
    supports: &[Vec<Vec<(usize, Value)>>],
    parts: &[usize],
    budget: usize,
    zs: &mut Vec<usize>,
    acc: Value,
    emit: &mut impl FnMut(&[usize], Value),
) {
    let i = zs.len();
    if i == parts.len() {
        emit(zs, acc);
        return;
    }
    for (n, sup) in supports.iter().enumerate().take(budget + 1) {
        for (z, v) in &sup[parts[i]] {
            let next = q.otimes(&acc, v);
            if q.is_bottom(&next) {
                continue;
            }
            zs.push(*z);
            strict_rec(q, supports, parts, budget - n, zs, next, emit);
            zs.pop();
        }
    }
}
