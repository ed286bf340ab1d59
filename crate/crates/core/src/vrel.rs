//! V-relations: dense `V`-valued matrices between finite carriers.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantale::{Quantale, Value};

/// An ordered set of distinct labels. The order fixes matrix indexing.
#[derive(Clone)]
pub struct Carrier {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Carrier {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Carrier { labels, index })
    }

    /// `{"0", …, "n-1"}`.
    pub fn range(n: usize) -> Self {
        Carrier::new((0..n).map(|i| i.to_string())).expect("distinct labels")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn arc(self) -> Arc<Carrier> {
        Arc::new(self)
    }
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Carrier {}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.labels).finish()
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels.join(","))
    }
}

pub(crate) fn same_carrier(a: &Arc<Carrier>, b: &Arc<Carrier>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn expect_carrier(expected: &Arc<Carrier>, found: &Arc<Carrier>) -> Result<()> {
    if same_carrier(expected, found) {
        Ok(())
    } else {
        Err(Error::CarrierMismatch {
            expected: truncate(expected.to_string()),
            found: truncate(found.to_string()),
        })
    }
}

fn truncate(mut s: String) -> String {
    if s.len() > 80 {
        let cut = (0..=80).rev().find(|&i| s.is_char_boundary(i)).unwrap_or(0);
        s.truncate(cut);
        s.push('…');
    }
    s
}

/// A `V`-relation `r: dom ⇸ cod`, stored row-major (rows indexed by `dom`).
#[derive(Clone, PartialEq)]
pub struct VRel {
    q: Quantale,
    dom: Arc<Carrier>,
    cod: Arc<Carrier>,
    data: Vec<Value>,
}

impl fmt::Debug for VRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "VRel {:?} -> {:?} over {}", self.dom, self.cod, self.q)?;
        for i in 0..self.rows() {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {}: [{}]", self.dom.label(i), row.join(", "))?;
        }
        Ok(())
    }
}

impl VRel {
    /// Build from nested rows, validating shape and membership of every entry.
    pub fn new(
        q: Quantale,
        dom: Arc<Carrier>,
        cod: Arc<Carrier>,
        rows: Vec<Vec<Value>>,
    ) -> Result<Self> {
        if rows.len() != dom.len() {
            return Err(Error::Shape(format!(
                "expected {} rows, got {}",
                dom.len(),
                rows.len()
            )));
        }
        let mut data = Vec::with_capacity(dom.len() * cod.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cod.len() {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    cod.len()
                )));
            }
            for v in &row {
                q.check(v)?;
            }
            data.extend(row);
        }
        Ok(VRel { q, dom, cod, data })
    }

    /// Build entrywise. The closure must return values of `q`.
    pub fn from_fn(
        q: Quantale,
        dom: Arc<Carrier>,
        cod: Arc<Carrier>,
        mut f: impl FnMut(usize, usize) -> Value,
    ) -> Self {
        let (n, m) = (dom.len(), cod.len());
        let mut data = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let v = f(i, j);
                debug_assert!(q.contains(&v));
                data.push(v);
            }
        }
        VRel { q, dom, cod, data }
    }

    pub fn constant(q: Quantale, dom: Arc<Carrier>, cod: Arc<Carrier>, v: Value) -> Result<Self> {
        q.check(&v)?;
        Ok(Self::from_fn(q, dom, cod, |_, _| v.clone()))
    }

    pub fn bottom(q: Quantale, dom: Arc<Carrier>, cod: Arc<Carrier>) -> Self {
        let b = q.bottom();
        Self::from_fn(q, dom, cod, |_, _| b.clone())
    }

    /// `1_X`: `k` on the diagonal, `⊥` elsewhere.
    pub fn identity(q: Quantale, x: Arc<Carrier>) -> Self {
        let (k, b) = (q.unit(), q.bottom());
        Self::from_fn(q, x.clone(), x, |i, j| if i == j { k.clone() } else { b.clone() })
    }

    /// The graph of a function given as an index map `dom → cod`.
    pub fn graph(q: Quantale, dom: Arc<Carrier>, cod: Arc<Carrier>, f: &[usize]) -> Result<Self> {
        if f.len() != dom.len() {
            return Err(Error::NotTotal(format!(
                "map defined on {} of {} points",
                f.len(),
                dom.len()
            )));
        }
        if let Some(&y) = f.iter().find(|&&y| y >= cod.len()) {
            return Err(Error::NotTotal(format!("image index {y} outside codomain")));
        }
        let (k, b) = (q.unit(), q.bottom());
        Ok(Self::from_fn(q, dom, cod, |i, j| {
            if f[i] == j {
                k.clone()
            } else {
                b.clone()
            }
        }))
    }

    pub fn quantale(&self) -> Quantale {
        self.q
    }

    pub fn dom(&self) -> &Arc<Carrier> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Carrier> {
        &self.cod
    }

    pub fn rows(&self) -> usize {
        self.dom.len()
    }

    pub fn cols(&self) -> usize {
        self.cod.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Value {
        &self.data[i * self.cod.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Value) -> Result<()> {
        self.q.check(&v)?;
        let m = self.cod.len();
        self.data[i * m + j] = v;
        Ok(())
    }

    pub(crate) fn set_unchecked(&mut self, i: usize, j: usize, v: Value) {
        let m = self.cod.len();
        self.data[i * m + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Value] {
        let m = self.cod.len();
        &self.data[i * m..(i + 1) * m]
    }

    pub fn column(&self, j: usize) -> Vec<Value> {
        (0..self.rows()).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Value] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Value>> {
        (0..self.rows()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Non-bottom entries of each row, `(column, value)`.
    pub(crate) fn row_support(&self) -> Vec<Vec<(usize, Value)>> {
        (0..self.rows())
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !self.q.is_bottom(v))
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect()
    }

    /// Same matrix, relabelled carriers of equal size.
    pub fn relabel(&self, dom: Arc<Carrier>, cod: Arc<Carrier>) -> Result<VRel> {
        if dom.len() != self.dom.len() || cod.len() != self.cod.len() {
            return Err(Error::Shape("relabel changes dimensions".into()));
        }
        Ok(VRel {
            q: self.q,
            dom,
            cod,
            data: self.data.clone(),
        })
    }

    fn same_quantale(&self, other: &VRel) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::QuantaleConflict(self.q, other.q))
        }
    }

    /// `s · self`: first `self: X ⇸ Y`, then `s: Y ⇸ Z`;
    /// `(s·r)(x,z) = ⋁_y r(x,y) ⊗ s(y,z)`.
    pub fn compose(&self, s: &VRel) -> Result<VRel> {
        self.same_quantale(s)?;
        expect_carrier(&self.cod, &s.dom)?;
        let q = self.q;
        let mut out = VRel::bottom(q, self.dom.clone(), s.cod.clone());
        for i in 0..self.rows() {
            for (y, ry) in self.row(i).iter().enumerate() {
                if q.is_bottom(ry) {
                    continue;
                }
                for z in 0..s.cols() {
                    let t = q.otimes(ry, s.get(y, z));
                    let cur = out.get(i, z);
                    let v = q.vee(cur, &t);
                    out.set_unchecked(i, z, v);
                }
            }
        }
        Ok(out)
    }

    /// `r°`, the transpose.
    pub fn involution(&self) -> VRel {
        VRel::from_fn(self.q, self.cod.clone(), self.dom.clone(), |i, j| {
            self.get(j, i).clone()
        })
    }

    /// `self ↙ t` for `self = r: X ⇸ Y`, `t: X ⇸ Z`: the largest `s: Z ⇸ Y`
    /// with `s · t ≤ r`, computed as `⋀_x hom(t(x,z), r(x,y))`.
    pub fn extend(&self, t: &VRel) -> Result<VRel> {
        self.same_quantale(t)?;
        expect_carrier(&self.dom, &t.dom)?;
        let q = self.q;
        Ok(VRel::from_fn(q, t.cod.clone(), self.cod.clone(), |z, y| {
            let mut acc = q.top();
            for x in 0..self.rows() {
                acc = q.wedge(&acc, &q.residual(t.get(x, z), self.get(x, y)));
            }
            acc
        }))
    }

    /// `t ↘ r` for `t = self: X ⇸ Z`, `r: Y ⇸ Z`: the largest `s: Y ⇸ X`
    /// with `t · s ≤ r`, computed as `⋀_z hom(t(x,z), r(y,z))`.
    pub fn lift(&self, r: &VRel) -> Result<VRel> {
        self.same_quantale(r)?;
        expect_carrier(&self.cod, &r.cod)?;
        let q = self.q;
        Ok(VRel::from_fn(q, r.dom.clone(), self.dom.clone(), |y, x| {
            let mut acc = q.top();
            for z in 0..self.cols() {
                acc = q.wedge(&acc, &q.residual(self.get(x, z), r.get(y, z)));
            }
            acc
        }))
    }

    /// Pointwise order.
    pub fn le(&self, other: &VRel) -> Result<bool> {
        self.same_quantale(other)?;
        expect_carrier(&self.dom, &other.dom)?;
        expect_carrier(&self.cod, &other.cod)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| self.q.leq(a, b)))
    }

    /// First entry where `self ≤ other` fails.
    pub fn first_violation(&self, other: &VRel) -> Option<(usize, usize)> {
        let m = self.cols();
        self.data
            .iter()
            .zip(&other.data)
            .position(|(a, b)| !self.q.leq(a, b))
            .map(|p| (p / m, p % m))
    }

    /// Pointwise join.
    pub fn join(&self, other: &VRel) -> Result<VRel> {
        self.same_quantale(other)?;
        expect_carrier(&self.dom, &other.dom)?;
        expect_carrier(&self.cod, &other.cod)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.q.vee(a, b))
            .collect();
        Ok(VRel {
            q: self.q,
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: bool) -> Value {
        Value::Bool(v)
    }

    fn carrier(n: usize) -> Arc<Carrier> {
        Carrier::range(n).arc()
    }

    fn all_bool_rels(dom: &Arc<Carrier>, cod: &Arc<Carrier>) -> Vec<VRel> {
        let n = dom.len() * cod.len();
        (0..1u32 << n)
            .map(|bits| {
                VRel::from_fn(Quantale::Bool2, dom.clone(), cod.clone(), |i, j| {
                    b(bits >> (i * cod.len() + j) & 1 == 1)
                })
            })
            .collect()
    }

    #[test]
    fn compose_examples() {
        let q = Quantale::Bool2;
        let x = Carrier::new(["x"]).unwrap().arc();
        let y = Carrier::new(["y1", "y2"]).unwrap().arc();
        let z = Carrier::new(["z"]).unwrap().arc();
        let r = VRel::new(q, x.clone(), y.clone(), vec![vec![b(true), b(false)]]).unwrap();
        let s = VRel::new(q, y, z, vec![vec![b(false)], vec![b(true)]]).unwrap();
        assert_eq!(*r.compose(&s).unwrap().get(0, 0), b(false));
        assert_eq!(VRel::identity(q, x).compose(&r).unwrap(), r);

        let p = Quantale::Lawvere;
        let one = carrier(1);
        let r = VRel::new(p, one.clone(), one.clone(), vec![vec![Value::dist(2)]]).unwrap();
        let s = VRel::new(p, one.clone(), one.clone(), vec![vec![Value::dist(3)]]).unwrap();
        assert_eq!(*r.compose(&s).unwrap().get(0, 0), Value::dist(5));
    }

    #[test]
    fn compose_rejects_carrier_mismatch() {
        let q = Quantale::Bool2;
        let r = VRel::bottom(q, carrier(2), carrier(3));
        let s = VRel::bottom(q, carrier(2), carrier(2));
        assert!(matches!(r.compose(&s), Err(Error::CarrierMismatch { .. })));
    }

    #[test]
    fn involution_examples() {
        let q = Quantale::Chain(3);
        let x = carrier(3);
        let id = VRel::identity(q, x);
        assert_eq!(id.involution(), id);
        let r = VRel::new(q, carrier(2), carrier(1), vec![vec![Value::Chain(1)], vec![Value::Chain(2)]])
            .unwrap();
        let t = r.involution();
        assert_eq!(t.row(0), &[Value::Chain(1), Value::Chain(2)]);
        assert_eq!(t.involution(), r);
    }

    #[test]
    fn graph_examples() {
        let q = Quantale::Bool2;
        let x = carrier(3);
        assert_eq!(VRel::graph(q, x.clone(), x.clone(), &[0, 1, 2]).unwrap(), VRel::identity(q, x.clone()));
        let c = VRel::graph(q, carrier(2), carrier(1), &[0, 0]).unwrap();
        assert_eq!(c.column(0), vec![b(true), b(true)]);
        assert!(VRel::graph(q, carrier(2), carrier(1), &[0]).is_err());
        assert!(VRel::graph(q, carrier(2), carrier(1), &[0, 1]).is_err());
    }

    #[test]
    fn graph_is_left_adjoint_to_its_converse() {
        let q = Quantale::Chain(4);
        let (x, y) = (carrier(3), carrier(2));
        let f = VRel::graph(q, x.clone(), y.clone(), &[1, 0, 1]).unwrap();
        let fo = f.involution();
        // unit 1_X ≤ f°·f and counit f·f° ≤ 1_Y
        assert!(VRel::identity(q, x).le(&f.compose(&fo).unwrap()).unwrap());
        assert!(fo.compose(&f).unwrap().le(&VRel::identity(q, y)).unwrap());
    }

    #[test]
    fn extend_and_lift_examples() {
        let q = Quantale::Chain(3);
        let x = carrier(2);
        let r = VRel::new(q, x.clone(), carrier(3), vec![
            vec![Value::Chain(0), Value::Chain(1), Value::Chain(2)],
            vec![Value::Chain(2), Value::Chain(0), Value::Chain(1)],
        ])
        .unwrap();
        assert_eq!(r.extend(&VRel::identity(q, x.clone())).unwrap(), r);
        let rt = r.involution();
        assert_eq!(VRel::identity(q, x.clone()).lift(&rt).unwrap(), rt);

        let p = Quantale::Lawvere;
        let one = carrier(1);
        let r = VRel::new(p, one.clone(), one.clone(), vec![vec![Value::dist(5)]]).unwrap();
        let t = VRel::new(p, one.clone(), one.clone(), vec![vec![Value::dist(2)]]).unwrap();
        assert_eq!(*r.extend(&t).unwrap().get(0, 0), Value::dist(3));
        assert_eq!(*t.lift(&r).unwrap().get(0, 0), Value::dist(3));
    }

    /// Brute-force oracle: the join of all `s` satisfying the Galois inequality.
    fn max_solution(candidates: &[VRel], ok: impl Fn(&VRel) -> bool) -> VRel {
        let sols: Vec<&VRel> = candidates.iter().filter(|s| ok(s)).collect();
        let mut acc = VRel::bottom(Quantale::Bool2, candidates[0].dom.clone(), candidates[0].cod.clone());
        for s in sols {
            acc = acc.join(s).unwrap();
        }
        acc
    }

    #[test]
    fn extend_matches_brute_force_on_bool2() {
        for (nx, ny, nz) in [(1, 1, 1), (2, 2, 1), (2, 1, 2), (3, 3, 3), (2, 3, 2), (3, 2, 2)] {
            let (x, y, z) = (carrier(nx), carrier(ny), carrier(nz));
            let rs = all_bool_rels(&x, &y);
            let ts = all_bool_rels(&x, &z);
            let ss = all_bool_rels(&z, &y);
            // sample to keep runtime low on the 3×3 case
            let step = (rs.len() * ts.len() / 400).max(1);
            for (idx, (r, t)) in rs.iter().flat_map(|r| ts.iter().map(move |t| (r, t))).enumerate() {
                if idx % step != 0 {
                    continue;
                }
                let e = r.extend(t).unwrap();
                let brute = max_solution(&ss, |s| t.compose(s).unwrap().le(r).unwrap());
                assert_eq!(e, brute);
                for s in &ss {
                    assert_eq!(s.le(&e).unwrap(), t.compose(s).unwrap().le(r).unwrap());
                }
            }
        }
    }

    #[test]
    fn lift_matches_brute_force_on_bool2() {
        for (nx, ny, nz) in [(1, 1, 1), (2, 2, 1), (1, 2, 2), (3, 3, 3), (2, 3, 2)] {
            let (x, y, z) = (carrier(nx), carrier(ny), carrier(nz));
            let ts = all_bool_rels(&x, &z);
            let rs = all_bool_rels(&y, &z);
            let ss = all_bool_rels(&y, &x);
            let step = (rs.len() * ts.len() / 400).max(1);
            for (idx, (t, r)) in ts.iter().flat_map(|t| rs.iter().map(move |r| (t, r))).enumerate() {
                if idx % step != 0 {
                    continue;
                }
                let l = t.lift(r).unwrap();
                let brute = max_solution(&ss, |s| s.compose(t).unwrap().le(r).unwrap());
                assert_eq!(l, brute);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn chain_rel(n: usize, m: usize) -> impl Strategy<Value = VRel> {
            proptest::collection::vec(0u32..4, n * m).prop_map(move |vals| {
                VRel::from_fn(Quantale::Chain(4), carrier(n), carrier(m), |i, j| {
                    Value::Chain(vals[i * m + j])
                })
            })
        }

        proptest! {
            #[test]
            fn composition_is_associative_and_unital(
                r in chain_rel(2, 3), s in chain_rel(3, 2), t in chain_rel(2, 3)
            ) {
                let left = r.compose(&s).unwrap().compose(&t).unwrap();
                let right = r.compose(&s.compose(&t).unwrap()).unwrap();
                prop_assert_eq!(left, right);
                let q = Quantale::Chain(4);
                prop_assert_eq!(VRel::identity(q, carrier(2)).compose(&r).unwrap(), r.clone());
                prop_assert_eq!(r.compose(&VRel::identity(q, carrier(3))).unwrap(), r.clone());
            }

            #[test]
            fn involution_reverses_composition(r in chain_rel(2, 3), s in chain_rel(3, 3)) {
                let lhs = r.compose(&s).unwrap().involution();
                let rhs = s.involution().compose(&r.involution()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn galois_properties(r in chain_rel(2, 3), t in chain_rel(2, 2), s in chain_rel(2, 3)) {
                // s ≤ r ↙ t  ⇔  s·t ≤ r
                let e = r.extend(&t).unwrap();
                prop_assert_eq!(s.le(&e).unwrap(), t.compose(&s).unwrap().le(&r).unwrap());
                // s' ≤ t' ↘ r'  ⇔  t'·s' ≤ r' with t': 2⇸3, r': 2⇸3, s': 2⇸2
                let l = s.lift(&r).unwrap();
                prop_assert_eq!(t.le(&l).unwrap(), t.compose(&s).unwrap().le(&r).unwrap());
            }

            #[test]
            fn operations_are_monotone(r in chain_rel(2, 3), s in chain_rel(3, 2), d in chain_rel(2, 3)) {
                let bigger = r.join(&d).unwrap();
                prop_assert!(r.compose(&s).unwrap().le(&bigger.compose(&s).unwrap()).unwrap());
                let t = VRel::identity(Quantale::Chain(4), carrier(2));
                prop_assert!(r.extend(&t).unwrap().le(&bigger.extend(&t).unwrap()).unwrap());
                let st = s.involution();
                prop_assert!(st.lift(&r).unwrap().le(&st.lift(&bigger).unwrap()).unwrap());
            }
        }
    }
}
