//! Finite topological spaces as categories over the ultrafilter theory, and
//! the filter space `F₀X` as a model of `X̂`.
//!
//! Subsets of the points are bitmasks. A principal ultrafilter on `x'`
//! converges to `x` iff `x ∈ cl{x'}`, which is the structure `a(x', x)`.
//! With this orientation open sets are down-closed.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presheaf::{inverse_image, PresheafCategory};
use crate::quantale::{Quantale, Value};
use crate::tcat::{TCategory, TFunctor};
use crate::theory::Theory;
use crate::vrel::Carrier;

pub const MAX_POINTS: usize = 16;

pub type Set = u32;

fn render_set(points: &Carrier, s: Set) -> String {
    let parts: Vec<&str> = (0..points.len()).filter(|&i| s >> i & 1 == 1).map(|i| points.label(i)).collect();
    format!("{{{}}}", parts.join(","))
}

/// A topology on a finite carrier, opens sorted by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    points: Arc<Carrier>,
    opens: Vec<Set>,
}

impl FiniteSpace {
    pub fn new(points: Arc<Carrier>, opens: Vec<Set>) -> Result<Self> {
        let n = points.len();
        if n > MAX_POINTS {
            return Err(Error::Capacity(format!("{n} points exceed {MAX_POINTS}")));
        }
        let full: Set = if n == 0 { 0 } else { (1 << n) - 1 };
        let mut opens = opens;
        opens.sort_unstable();
        opens.dedup();
        let bad = |msg: String| Err(Error::InvalidTopology(msg));
        if opens.iter().any(|&u| u & !full != 0) {
            return bad("an open set mentions an unknown point".into());
        }
        if opens.binary_search(&0).is_err() || opens.binary_search(&full).is_err() {
            return bad("the empty set and the whole space must be open".into());
        }
        for &u in &opens {
            for &v in &opens {
                if opens.binary_search(&(u | v)).is_err() {
                    return bad(format!("union of {} and {} is not open", render_set(&points, u), render_set(&points, v)));
                }
                if opens.binary_search(&(u & v)).is_err() {
                    return bad(format!(
                        "intersection of {} and {} is not open",
                        render_set(&points, u),
                        render_set(&points, v)
                    ));
                }
            }
        }
        Ok(FiniteSpace { points, opens })
    }

    /// Opens given as lists of point indices.
    pub fn from_lists(points: Arc<Carrier>, opens: &[Vec<usize>]) -> Result<Self> {
        let n = points.len();
        let mut masks = Vec::with_capacity(opens.len());
        for u in opens {
            let mut m = 0;
            for &p in u {
                if p >= n {
                    return Err(Error::InvalidTopology(format!("point {p} out of range")));
                }
                m |= 1 << p;
            }
            masks.push(m);
        }
        Self::new(points, masks)
    }

    pub fn discrete(n: usize) -> Self {
        let points = Carrier::range(n).arc();
        Self::new(points, (0..1u32 << n).collect()).expect("powerset")
    }

    pub fn indiscrete(n: usize) -> Self {
        let full = if n == 0 { 0 } else { (1 << n) - 1 };
        Self::new(Carrier::range(n).arc(), vec![0, full]).expect("indiscrete")
    }

    /// Opens `∅, {1}, {0, 1}`.
    pub fn sierpinski() -> Self {
        Self::new(Carrier::range(2).arc(), vec![0, 0b10, 0b11]).expect("sierpinski")
    }

    /// Every topology on `n` points, in lexicographic order of the sorted
    /// open lists.
    pub fn all_topologies(n: usize) -> Result<Vec<FiniteSpace>> {
        if n > 4 {
            return Err(Error::Capacity(format!("enumerating topologies on {n} points")));
        }
        let full: Set = if n == 0 { 0 } else { (1 << n) - 1 };
        let middle: Vec<Set> = (1..full).collect();
        let points = Carrier::range(n).arc();
        let mut out = Vec::new();
        for pick in 0u64..1 << middle.len() {
            let mut opens = vec![0, full];
            opens.extend(middle.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &u)| u));
            if let Ok(s) = Self::new(points.clone(), opens) {
                out.push(s);
            }
        }
        out.sort_by(|a, b| a.opens.cmp(&b.opens));
        Ok(out)
    }

    /// The Alexandroff topology of a preorder: the down-closed sets.
    pub fn from_preorder(x: &TCategory) -> Result<Self> {
        let n = x.len();
        if n > MAX_POINTS {
            return Err(Error::Capacity(format!("{n} points exceed {MAX_POINTS}")));
        }
        let opens = (0..1u32 << n)
            .filter(|&u| (0..n).all(|y| u >> y & 1 == 0 || (0..n).all(|z| !x.le_points(z, y) || u >> z & 1 == 1)))
            .collect();
        Self::new(x.carrier().clone(), opens)
    }

    pub fn points(&self) -> &Arc<Carrier> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn opens(&self) -> &[Set] {
        &self.opens
    }

    pub fn full(&self) -> Set {
        if self.len() == 0 {
            0
        } else {
            (1 << self.len()) - 1
        }
    }

    pub fn is_open(&self, s: Set) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn render(&self, s: Set) -> String {
        render_set(&self.points, s)
    }

    /// Smallest closed set containing `s`.
    pub fn closure(&self, s: Set) -> Set {
        let full = self.full();
        self.opens
            .iter()
            .map(|&u| full & !u)
            .filter(|&c| c & s == s)
            .fold(full, |acc, c| acc & c)
    }

    /// Smallest open set containing `s`.
    pub fn interior_hull(&self, s: Set) -> Set {
        self.opens.iter().filter(|&&u| u & s == s).fold(self.full(), |acc, &u| acc & u)
    }

    pub fn neighbourhoods(&self, x: usize) -> Vec<Set> {
        self.opens.iter().copied().filter(|&u| u >> x & 1 == 1).collect()
    }

    pub fn is_t0(&self) -> bool {
        (0..self.len()).all(|x| (x + 1..self.len()).all(|y| self.closure(1 << x) != self.closure(1 << y)))
    }

    pub fn is_continuous(&self, f: &[usize], cod: &FiniteSpace) -> bool {
        f.len() == self.len() && f.iter().all(|&y| y < cod.len()) && cod.opens.iter().all(|&v| self.is_open(preimage(f, v)))
    }

    /// Continuous maps to `cod`, in lexicographic order.
    pub fn continuous_maps(&self, cod: &FiniteSpace) -> Vec<Vec<usize>> {
        let (n, m) = (self.len(), cod.len());
        let mut out = Vec::new();
        if m == 0 && n > 0 {
            return out;
        }
        let mut f = vec![0usize; n];
        loop {
            if self.is_continuous(&f, cod) {
                out.push(f.clone());
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                f[i] += 1;
                if f[i] < m {
                    break;
                }
                f[i] = 0;
            }
        }
    }

    /// The category over the ultrafilter theory with `a(x', x) = [x ∈ cl{x'}]`.
    pub fn to_tcat(&self) -> Result<TCategory> {
        let n = self.len();
        let rows = (0..n)
            .map(|xp| {
                let cl = self.closure(1 << xp);
                (0..n).map(|x| Value::Bool(cl >> x & 1 == 1)).collect()
            })
            .collect();
        TCategory::checked(Theory::ultrafilter(Quantale::Bool2), &self.points, rows)
    }
}

pub fn preimage(f: &[usize], v: Set) -> Set {
    f.iter().enumerate().filter(|(_, &y)| v >> y & 1 == 1).fold(0, |acc, (x, _)| acc | 1 << x)
}

/// A filter on the lattice of opens, stored as its sorted members.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenFilter {
    members: Vec<Set>,
}

impl OpenFilter {
    pub fn members(&self) -> &[Set] {
        &self.members
    }

    pub fn contains(&self, u: Set) -> bool {
        self.members.binary_search(&u).is_ok()
    }

    /// Intersection of all members.
    pub fn generator(&self) -> Set {
        self.members.iter().fold(Set::MAX, |acc, &u| acc & u)
    }

    /// `↑u ∩ τ`.
    pub fn principal(space: &FiniteSpace, u: Set) -> Self {
        OpenFilter {
            members: space.opens.iter().copied().filter(|&v| v & u == u).collect(),
        }
    }

    /// Upward closure in `τ` of the given opens (assumed closed under meets).
    pub fn generated(space: &FiniteSpace, opens: impl IntoIterator<Item = Set>) -> Self {
        let gens: Vec<Set> = opens.into_iter().collect();
        OpenFilter {
            members: space.opens.iter().copied().filter(|&v| gens.iter().any(|&g| g & v == g)).collect(),
        }
    }

    /// Nonempty, upward closed in `τ`, closed under binary meets.
    pub fn is_filter(space: &FiniteSpace, members: &[Set]) -> bool {
        !members.is_empty()
            && members.iter().all(|&u| {
                space.opens.iter().all(|&v| u & v != u || members.contains(&v))
                    && members.iter().all(|&w| members.contains(&(u & w)))
            })
    }
}

/// `F₀X` with the topology generated by the sets `{𝔣 | U ∈ 𝔣}`, `U` open.
#[derive(Clone, Debug)]
pub struct FilterSpace {
    pub filters: Vec<OpenFilter>,
    /// For each closed `B`, the basic open `{𝔣 | X∖B ∈ 𝔣}` as a filter set.
    pub basis: Vec<(Set, Set)>,
    pub space: FiniteSpace,
}

/// All filters on `τ` (every one principal, the improper filter `τ` included),
/// ordered by their generating open.
pub fn filter_space(s: &FiniteSpace) -> Result<FilterSpace> {
    let filters: Vec<OpenFilter> = s.opens.iter().map(|&u| OpenFilter::principal(s, u)).collect();
    if filters.len() > MAX_POINTS {
        return Err(Error::Capacity(format!("{} filters exceed {MAX_POINTS}", filters.len())));
    }
    let full = s.full();
    let basis: Vec<(Set, Set)> = s
        .opens
        .iter()
        .map(|&u| {
            let members = filters
                .iter()
                .enumerate()
                .filter(|(_, f)| f.contains(u))
                .fold(0, |acc, (i, _)| acc | 1 << i);
            (full & !u, members)
        })
        .collect();
    // basic opens are closed under meets, so the topology is their unions
    let mut opens: Vec<Set> = vec![0];
    for &(_, b) in &basis {
        let mut next = opens.clone();
        for &o in &opens {
            next.push(o | b);
        }
        next.sort_unstable();
        next.dedup();
        opens = next;
    }
    let labels = filters.iter().map(|f| format!("↑{}", s.render(f.generator() & full)));
    let points = Carrier::new(labels)?.arc();
    let space = FiniteSpace::new(points, opens)?;
    Ok(FilterSpace { filters, basis, space })
}

/// `Φ(ψ) = {U ∈ τ | ψ⁻¹(⊤) ⊆ U}`.
pub fn phi(s: &FiniteSpace, x: &TCategory, psi: &[Value]) -> OpenFilter {
    let tx = x.tspace();
    let a = (0..s.len()).filter(|&p| psi[tx.unit(p)] == Value::Bool(true)).fold(0, |acc, p| acc | 1 << p);
    OpenFilter::principal(s, a)
}

/// `𝔤 ↦ {f⁻¹(B) | B ∈ 𝔤}`, upward closed.
pub fn filter_inverse_image(f: &[usize], dom: &FiniteSpace, g: &OpenFilter) -> OpenFilter {
    OpenFilter::generated(dom, g.members.iter().map(|&v| preimage(f, v)))
}

#[derive(Clone, Debug)]
pub struct PhiIsoReport {
    /// `phi[i]` is the filter index of `Φ` of presheaf `i`.
    pub phi: Vec<usize>,
    pub bijective: bool,
    pub structure_preserved: bool,
    pub neighbourhoods: bool,
}

impl PhiIsoReport {
    pub fn holds(&self) -> bool {
        self.bijective && self.structure_preserved && self.neighbourhoods
    }
}

pub fn phi_iso_check(s: &FiniteSpace) -> Result<PhiIsoReport> {
    let x = Arc::new(s.to_tcat()?);
    let px = PresheafCategory::new(x.clone())?;
    let fs = filter_space(s)?;
    let f0 = fs.space.to_tcat()?;
    let mut phi_map = Vec::with_capacity(px.len());
    for v in px.vectors() {
        let f = phi(s, &x, v);
        match fs.filters.iter().position(|g| *g == f) {
            Some(i) => phi_map.push(i),
            None => {
                return Ok(PhiIsoReport {
                    phi: phi_map,
                    bijective: false,
                    structure_preserved: false,
                    neighbourhoods: false,
                })
            }
        }
    }
    let mut seen = vec![false; fs.filters.len()];
    for &i in &phi_map {
        seen[i] = true;
    }
    let bijective = phi_map.len() == fs.filters.len() && seen.iter().all(|&b| b);
    let hat = px.category();
    let structure_preserved = (0..px.len())
        .all(|i| (0..px.len()).all(|j| hat.hom(i, j) == f0.hom(phi_map[i], phi_map[j])));
    let y = px.yoneda()?;
    let neighbourhoods = (0..s.len()).all(|p| fs.filters[phi_map[y.apply(p)]].members == s.neighbourhoods(p));
    Ok(PhiIsoReport {
        phi: phi_map,
        bijective,
        structure_preserved,
        neighbourhoods,
    })
}

/// `Φ_X · f⁻¹ = f⁻¹ · Φ_Y` on every presheaf of `Y`, for continuous `f: X → Y`.
pub fn phi_naturality(f: &[usize], sx: &FiniteSpace, sy: &FiniteSpace) -> Result<bool> {
    if !sx.is_continuous(f, sy) {
        return Err(Error::Precondition("map is not continuous".into()));
    }
    let x = Arc::new(sx.to_tcat()?);
    let y = Arc::new(sy.to_tcat()?);
    let ft = TFunctor::checked(x.clone(), y.clone(), f.to_vec())?;
    let py = PresheafCategory::new(y.clone())?;
    Ok(py.vectors().iter().all(|psi| {
        let left = phi(sx, &x, &inverse_image(&ft, psi));
        let right = filter_inverse_image(f, sx, &phi(sy, &y, psi));
        left == right
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_counts() {
        let counts: Vec<usize> = (0..4).map(|n| FiniteSpace::all_topologies(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29]);
        let t0: Vec<usize> = (0..4)
            .map(|n| FiniteSpace::all_topologies(n).unwrap().iter().filter(|s| s.is_t0()).count())
            .collect();
        assert_eq!(t0, vec![1, 1, 3, 19]);
    }

    #[test]
    fn validation() {
        let p = Carrier::range(2).arc();
        assert!(matches!(FiniteSpace::new(p.clone(), vec![0b11]), Err(Error::InvalidTopology(_))));
        assert!(matches!(FiniteSpace::new(p.clone(), vec![0, 0b01, 0b10, 0b11]), Ok(_)));
        let q = Carrier::range(3).arc();
        assert!(FiniteSpace::new(q, vec![0, 0b011, 0b110, 0b111]).is_err());
        assert!(FiniteSpace::new(p, vec![0, 0b100, 0b11]).is_err());
    }

    #[test]
    fn specialisation_examples() {
        let d = FiniteSpace::discrete(2).to_tcat().unwrap();
        assert!(!d.le_points(0, 1) && !d.le_points(1, 0));
        // cl{0} = {0}, cl{1} = {0, 1}: the open point 1 converges to 0
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.closure(0b01), 0b01);
        assert_eq!(s.closure(0b10), 0b11);
        let st = s.to_tcat().unwrap();
        assert!(st.le_points(1, 0) && !st.le_points(0, 1));
        let i = FiniteSpace::indiscrete(2).to_tcat().unwrap();
        assert!(i.equivalent_points(0, 1) && !i.is_separated());
    }

    #[test]
    fn alexandroff_round_trip() {
        for n in 0..4 {
            for s in FiniteSpace::all_topologies(n).unwrap() {
                let x = s.to_tcat().unwrap();
                assert_eq!(FiniteSpace::from_preorder(&x).unwrap(), s);
            }
        }
    }

    #[test]
    fn filters_are_principal() {
        for n in 0..4 {
            for s in FiniteSpace::all_topologies(n).unwrap() {
                // brute force over subsets of τ
                let k = s.opens().len();
                let mut brute = Vec::new();
                for pick in 0u32..1 << k {
                    let members: Vec<Set> = (0..k).filter(|i| pick >> i & 1 == 1).map(|i| s.opens()[i]).collect();
                    if OpenFilter::is_filter(&s, &members) {
                        brute.push(OpenFilter { members });
                    }
                }
                brute.sort();
                let mut fs = filter_space(&s).unwrap().filters;
                fs.sort();
                assert_eq!(brute, fs);
            }
        }
        let one = filter_space(&FiniteSpace::discrete(1)).unwrap();
        assert_eq!(one.filters.len(), 2);
        assert_eq!(filter_space(&FiniteSpace::sierpinski()).unwrap().filters.len(), 3);
    }

    #[test]
    fn sierpinski_basis() {
        let s = FiniteSpace::sierpinski();
        let fs = filter_space(&s).unwrap();
        // filters ↑∅, ↑{1}, ↑{0,1} and the closed sets {0,1}, {0}, ∅
        let closed: Vec<Set> = fs.basis.iter().map(|b| b.0).collect();
        assert_eq!(closed, vec![0b11, 0b01, 0]);
        let members: Vec<Set> = fs.basis.iter().map(|b| b.1).collect();
        assert_eq!(members, vec![0b001, 0b011, 0b111]);
        assert_eq!(fs.space.opens(), &[0, 0b001, 0b011, 0b111]);
    }

    #[test]
    fn phi_iso_on_small_spaces() {
        for n in 0..4 {
            for s in FiniteSpace::all_topologies(n).unwrap() {
                assert!(phi_iso_check(&s).unwrap().holds(), "{:?}", s.opens());
            }
        }
    }

    #[test]
    fn naturality_on_two_points() {
        let spaces = FiniteSpace::all_topologies(2).unwrap();
        for a in &spaces {
            for b in &spaces {
                for f in a.continuous_maps(b) {
                    assert!(phi_naturality(&f, a, b).unwrap());
                }
            }
        }
        let s = FiniteSpace::sierpinski();
        assert!(phi_naturality(&[1, 0], &s, &s).is_err());
    }
}
