//! Commutative quantales: the value lattices every relation is enriched in.
//!
//! Three carriers ship: the two-element Boolean algebra, finite chains with
//! `min` as tensor, and the Lawvere quantale `([0,∞]^op, +, 0)` over exact
//! extended rationals. All order statements below are in the *quantale*
//! order, which for Lawvere is the reverse of the numeric order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Which quantale a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantale {
    Bool2,
    /// `0 < 1 < … < n-1` with `⊗ = min` and unit `n-1`.
    Chain(u32),
    /// `[0,∞]` with reversed order, `⊗ = +` and unit `0`.
    Lawvere,
}

/// A point of `[0,∞]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distance {
    Finite(BigRational),
    Infinite,
}

impl Distance {
    pub fn int(n: i64) -> Self {
        Distance::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Distance::Finite(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    fn add(&self, other: &Distance) -> Distance {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Infinite,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Infinite => write!(f, "inf"),
            Distance::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Distance::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// A scalar belonging to exactly one [`Quantale`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Bool(bool),
    Chain(u32),
    Lawvere(Distance),
}

impl Value {
    pub fn dist(n: i64) -> Self {
        Value::Lawvere(Distance::int(n))
    }

    pub fn dist_ratio(p: i64, q: i64) -> Self {
        Value::Lawvere(Distance::ratio(p, q))
    }

    pub fn infinity() -> Self {
        Value::Lawvere(Distance::Infinite)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{}", u8::from(*b)),
            Value::Chain(i) => write!(f, "{i}"),
            Value::Lawvere(d) => write!(f, "{d}"),
        }
    }
}

impl fmt::Display for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantale::Bool2 => write!(f, "bool2"),
            Quantale::Chain(n) => write!(f, "chain{n}"),
            Quantale::Lawvere => write!(f, "lawvere"),
        }
    }
}

impl std::str::FromStr for Quantale {
    type Err = Error;

    /// `bool2`, `chainN` or `lawvere`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "bool2" | "bool" | "2" => Ok(Quantale::Bool2),
            "lawvere" | "p+" => Ok(Quantale::Lawvere),
            _ => match t.strip_prefix("chain").map(str::parse::<u32>) {
                Some(Ok(n)) => Quantale::chain(n),
                _ => Err(Error::Parse(format!("unknown quantale `{s}`"))),
            },
        }
    }
}

impl Quantale {
    /// A finite chain; needs at least two elements so that `⊥ < k`.
    pub fn chain(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidQuantale(format!(
                "chain needs at least 2 elements, got {n}"
            )));
        }
        Ok(Quantale::Chain(n))
    }

    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Quantale::Bool2, Value::Bool(_)) => true,
            (Quantale::Chain(n), Value::Chain(i)) => i < n,
            (Quantale::Lawvere, Value::Lawvere(Distance::Finite(r))) => !r.is_negative(),
            (Quantale::Lawvere, Value::Lawvere(Distance::Infinite)) => true,
            _ => false,
        }
    }

    pub fn check(&self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::QuantaleMismatch {
                quantale: *self,
                value: v.to_string(),
            })
        }
    }

    pub fn bottom(&self) -> Value {
        match self {
            Quantale::Bool2 => Value::Bool(false),
            Quantale::Chain(_) => Value::Chain(0),
            Quantale::Lawvere => Value::Lawvere(Distance::Infinite),
        }
    }

    pub fn top(&self) -> Value {
        match self {
            Quantale::Bool2 => Value::Bool(true),
            Quantale::Chain(n) => Value::Chain(n - 1),
            Quantale::Lawvere => Value::dist(0),
        }
    }

    /// The tensor unit `k`. For all shipped quantales `k` is the top.
    pub fn unit(&self) -> Value {
        self.top()
    }

    pub fn is_enumerable(&self) -> bool {
        !matches!(self, Quantale::Lawvere)
    }

    /// All elements in ascending quantale order, when the carrier is finite.
    pub fn elements(&self) -> Option<Vec<Value>> {
        match self {
            Quantale::Bool2 => Some(vec![Value::Bool(false), Value::Bool(true)]),
            Quantale::Chain(n) => Some((0..*n).map(Value::Chain).collect()),
            Quantale::Lawvere => None,
        }
    }

    pub fn enumerate(&self) -> Result<Vec<Value>> {
        self.elements()
            .ok_or(Error::NotEnumerable("the Lawvere quantale has no finite carrier"))
    }

    // Unchecked operations. Callers guarantee both arguments belong to `self`;
    // every relation validates its entries on construction.

    /// `u ⊗ v`.
    pub fn otimes(&self, u: &Value, v: &Value) -> Value {
        match (u, v) {
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(*a && *b),
            (Value::Chain(a), Value::Chain(b)) => Value::Chain(*a.min(b)),
            (Value::Lawvere(a), Value::Lawvere(b)) => Value::Lawvere(a.add(b)),
            _ => mismatch(self, u, v),
        }
    }

    /// Binary join.
    pub fn vee(&self, u: &Value, v: &Value) -> Value {
        match (u, v) {
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(*a || *b),
            (Value::Chain(a), Value::Chain(b)) => Value::Chain(*a.max(b)),
            (Value::Lawvere(a), Value::Lawvere(b)) => Value::Lawvere(a.min(b).clone()),
            _ => mismatch(self, u, v),
        }
    }

    /// Binary meet.
    pub fn wedge(&self, u: &Value, v: &Value) -> Value {
        match (u, v) {
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(*a && *b),
            (Value::Chain(a), Value::Chain(b)) => Value::Chain(*a.min(b)),
            (Value::Lawvere(a), Value::Lawvere(b)) => Value::Lawvere(a.max(b).clone()),
            _ => mismatch(self, u, v),
        }
    }

    /// Residuation: the largest `w` with `w ⊗ u ≤ v`.
    pub fn residual(&self, u: &Value, v: &Value) -> Value {
        match (u, v) {
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(!*a || *b),
            (Value::Chain(a), Value::Chain(b)) => {
                if a <= b {
                    self.top()
                } else {
                    Value::Chain(*b)
                }
            }
            (Value::Lawvere(a), Value::Lawvere(b)) => Value::Lawvere(match (a, b) {
                (Distance::Infinite, _) => Distance::int(0),
                (Distance::Finite(_), Distance::Infinite) => Distance::Infinite,
                (Distance::Finite(x), Distance::Finite(y)) => {
                    let d = y - x;
                    if d.is_negative() {
                        Distance::Finite(BigRational::zero())
                    } else {
                        Distance::Finite(d)
                    }
                }
            }),
            _ => mismatch(self, u, v),
        }
    }

    /// `u ≤ v` in the quantale order.
    pub fn leq(&self, u: &Value, v: &Value) -> bool {
        match (u, v) {
            (Value::Bool(a), Value::Bool(b)) => a <= b,
            (Value::Chain(a), Value::Chain(b)) => a <= b,
            (Value::Lawvere(a), Value::Lawvere(b)) => a >= b,
            _ => mismatch(self, u, v),
        }
    }

    pub fn is_bottom(&self, v: &Value) -> bool {
        match v {
            Value::Bool(b) => !b,
            Value::Chain(i) => *i == 0,
            Value::Lawvere(d) => *d == Distance::Infinite,
        }
    }

    /// Comparison in the quantale order, `None` when incomparable (never for
    /// the shipped chains, kept for API honesty).
    pub fn compare(&self, u: &Value, v: &Value) -> Option<Ordering> {
        match (self.leq(u, v), self.leq(v, u)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    pub fn sup<'a>(&self, vs: impl IntoIterator<Item = &'a Value>) -> Value {
        vs.into_iter()
            .fold(self.bottom(), |acc, v| self.vee(&acc, v))
    }

    pub fn inf<'a>(&self, vs: impl IntoIterator<Item = &'a Value>) -> Value {
        vs.into_iter().fold(self.top(), |acc, v| self.wedge(&acc, v))
    }

    /// `⊗` of a finite list, `k` for the empty list.
    pub fn product<'a>(&self, vs: impl IntoIterator<Item = &'a Value>) -> Value {
        vs.into_iter().fold(self.unit(), |acc, v| self.otimes(&acc, v))
    }

    // Checked operations.

    pub fn tensor(&self, u: &Value, v: &Value) -> Result<Value> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.otimes(u, v))
    }

    pub fn hom(&self, u: &Value, v: &Value) -> Result<Value> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.residual(u, v))
    }

    pub fn le(&self, u: &Value, v: &Value) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.leq(u, v))
    }

    /// Supremum; the empty join is `⊥`.
    pub fn join(&self, vs: &[Value]) -> Result<Value> {
        vs.iter().try_for_each(|v| self.check(v))?;
        Ok(self.sup(vs))
    }

    /// Infimum; the empty meet is `⊤`.
    pub fn meet(&self, vs: &[Value]) -> Result<Value> {
        vs.iter().try_for_each(|v| self.check(v))?;
        Ok(self.inf(vs))
    }

    /// Parse a scalar written the way instance files write it: `0`/`1`/`true`/`false`
    /// for Bool2, an index for chains, and `p/q`, an integer or `inf` for Lawvere.
    pub fn parse_value(&self, s: &str) -> Result<Value> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not an element of {self}"));
        let v = match self {
            Quantale::Bool2 => match s {
                "1" | "true" | "top" => Value::Bool(true),
                "0" | "false" | "bot" => Value::Bool(false),
                _ => return Err(bad()),
            },
            Quantale::Chain(_) => Value::Chain(s.parse().map_err(|_| bad())?),
            Quantale::Lawvere => {
                if s == "inf" || s == "∞" {
                    Value::infinity()
                } else {
                    let r = match s.split_once('/') {
                        Some((p, q)) => {
                            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                            if q.is_zero() {
                                return Err(bad());
                            }
                            BigRational::new(p, q)
                        }
                        None => BigRational::from_integer(s.parse().map_err(|_| bad())?),
                    };
                    Value::Lawvere(Distance::Finite(r))
                }
            }
        };
        self.check(&v).map_err(|_| bad())?;
        Ok(v)
    }
}

#[cold]
fn mismatch(q: &Quantale, u: &Value, v: &Value) -> ! {
    panic!("values {u} and {v} do not both belong to {q}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_finite() -> Vec<Quantale> {
        let mut qs = vec![Quantale::Bool2];
        qs.extend((2..=6).map(Quantale::Chain));
        qs
    }

    #[test]
    fn parse_quantale_names() {
        assert_eq!("bool2".parse::<Quantale>().unwrap(), Quantale::Bool2);
        assert_eq!("Chain3".parse::<Quantale>().unwrap(), Quantale::Chain(3));
        assert_eq!("lawvere".parse::<Quantale>().unwrap(), Quantale::Lawvere);
        assert!("chain1".parse::<Quantale>().is_err());
        assert!("reals".parse::<Quantale>().is_err());
    }

    #[test]
    fn tensor_examples() {
        let b = Quantale::Bool2;
        assert_eq!(b.tensor(&Value::Bool(true), &Value::Bool(false)).unwrap(), Value::Bool(false));
        let p = Quantale::Lawvere;
        assert_eq!(p.tensor(&Value::dist(2), &Value::dist(3)).unwrap(), Value::dist(5));
        let c = Quantale::Chain(3);
        assert_eq!(c.tensor(&Value::Chain(1), &Value::Chain(2)).unwrap(), Value::Chain(1));
    }

    #[test]
    fn join_meet_examples() {
        assert_eq!(Quantale::Bool2.join(&[]).unwrap(), Value::Bool(false));
        assert_eq!(
            Quantale::Lawvere.join(&[Value::dist(2), Value::dist(5)]).unwrap(),
            Value::dist(2)
        );
        assert_eq!(
            Quantale::Chain(3).meet(&[Value::Chain(1), Value::Chain(2)]).unwrap(),
            Value::Chain(1)
        );
        assert_eq!(Quantale::Lawvere.meet(&[]).unwrap(), Value::dist(0));
    }

    #[test]
    fn hom_examples() {
        assert_eq!(
            Quantale::Bool2.hom(&Value::Bool(true), &Value::Bool(false)).unwrap(),
            Value::Bool(false)
        );
        let p = Quantale::Lawvere;
        assert_eq!(p.hom(&Value::dist(2), &Value::dist(5)).unwrap(), Value::dist(3));
        assert_eq!(p.hom(&Value::dist(5), &Value::dist(2)).unwrap(), Value::dist(0));
        assert_eq!(
            Quantale::Chain(3).hom(&Value::Chain(2), &Value::Chain(1)).unwrap(),
            Value::Chain(1)
        );
    }

    #[test]
    fn lawvere_hom_matches_grid_search() {
        // residuation oracle: scan a rational grid for the largest w
        // (numerically smallest) with w + u >= v
        let p = Quantale::Lawvere;
        let grid: Vec<Value> = (0..=40).map(|i| Value::dist_ratio(i, 4)).collect();
        for u in &grid {
            for v in &grid {
                let best = grid
                    .iter()
                    .filter(|w| p.leq(&p.otimes(w, u), v))
                    .fold(p.bottom(), |acc, w| p.vee(&acc, w));
                assert_eq!(p.residual(u, v), best, "hom({u},{v})");
            }
        }
    }

    #[test]
    fn chain_hom_matches_scan() {
        let c = Quantale::Chain(3);
        let els = c.elements().unwrap();
        let best = els
            .iter()
            .filter(|w| c.leq(&c.otimes(w, &Value::Chain(2)), &Value::Chain(1)))
            .fold(c.bottom(), |a, w| c.vee(&a, w));
        assert_eq!(best, Value::Chain(1));
    }

    #[test]
    fn residuation_adjunction_exhaustive() {
        for q in all_finite() {
            let els = q.elements().unwrap();
            for u in &els {
                for v in &els {
                    let h = q.residual(u, v);
                    for w in &els {
                        assert_eq!(q.leq(&q.otimes(w, u), v), q.leq(w, &h), "{q}: {w} {u} {v}");
                    }
                    assert!(q.leq(&q.otimes(u, &h), v));
                }
                assert_eq!(q.residual(&q.unit(), u), *u);
                assert_eq!(q.residual(u, &q.top()), q.top());
            }
        }
    }

    #[test]
    fn laws_exhaustive() {
        for q in all_finite() {
            let els = q.elements().unwrap();
            assert!(q.leq(&q.bottom(), &q.unit()) && q.bottom() != q.unit());
            for a in &els {
                assert_eq!(q.otimes(a, &q.unit()), *a);
                for b in &els {
                    assert_eq!(q.otimes(a, b), q.otimes(b, a));
                    for c in &els {
                        assert_eq!(q.otimes(&q.otimes(a, b), c), q.otimes(a, &q.otimes(b, c)));
                        assert_eq!(
                            q.otimes(a, &q.vee(b, c)),
                            q.vee(&q.otimes(a, b), &q.otimes(a, c))
                        );
                    }
                }
                assert_eq!(q.otimes(a, &q.bottom()), q.bottom());
            }
        }
    }

    #[test]
    fn mismatch_is_an_error() {
        let err = Quantale::Bool2.tensor(&Value::Chain(0), &Value::Bool(true));
        assert!(matches!(err, Err(Error::QuantaleMismatch { .. })));
        assert!(Quantale::Chain(3).check(&Value::Chain(3)).is_err());
        assert!(Quantale::Lawvere.check(&Value::dist(-1)).is_err());
        assert!(Quantale::chain(1).is_err());
    }

    #[test]
    fn parse_and_display() {
        let p = Quantale::Lawvere;
        assert_eq!(p.parse_value("3/6").unwrap(), Value::dist_ratio(1, 2));
        assert_eq!(p.parse_value("inf").unwrap(), Value::infinity());
        assert_eq!(p.parse_value("7").unwrap().to_string(), "7");
        assert_eq!(Value::dist_ratio(5, 2).to_string(), "5/2");
        assert!(p.parse_value("-1").is_err());
        assert!(p.parse_value("1/0").is_err());
        assert_eq!(Quantale::Bool2.parse_value("true").unwrap(), Value::Bool(true));
        assert!(Quantale::Chain(3).parse_value("3").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn dist() -> impl Strategy<Value = Value> {
            prop_oneof![
                1 => Just(Value::infinity()),
                9 => (0i64..200, 1i64..12).prop_map(|(p, q)| Value::dist_ratio(p, q)),
            ]
        }

        proptest! {
            #[test]
            fn lawvere_adjunction(u in dist(), v in dist(), w in dist()) {
                let q = Quantale::Lawvere;
                let h = q.residual(&u, &v);
                prop_assert_eq!(q.leq(&q.otimes(&w, &u), &v), q.leq(&w, &h));
            }

            #[test]
            fn lawvere_join_is_least_upper_bound(vs in proptest::collection::vec(dist(), 0..6)) {
                let q = Quantale::Lawvere;
                let j = q.join(&vs).unwrap();
                for v in &vs {
                    prop_assert!(q.leq(v, &j));
                }
                // least: any upper bound drawn from the set itself or ⊤ dominates j
                let m = q.meet(&vs).unwrap();
                for v in &vs {
                    prop_assert!(q.leq(&m, v));
                }
            }
        }
    }
}
