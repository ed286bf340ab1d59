//! Built-in fixture library: enumerated preorders and V-categories, small
//! lattices and metric spaces.

use std::sync::Arc;

use qcat_core::{Carrier, Quantale, Result, TCategory, Theory, Value};

/// A named fixture category.
#[derive(Clone)]
pub struct Fixture {
    pub name: String,
    pub cat: Arc<TCategory>,
}

fn off_diagonal(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

fn is_transitive(q: Quantale, m: &[Vec<Value>]) -> bool {
    let n = m.len();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| q.leq(&q.otimes(&m[x][y], &m[y][z]), &m[x][z]))))
}

/// Every V-category structure on `n` labeled points over an enumerable
/// quantale, identity theory, in lexicographic order of off-diagonal entries.
pub fn v_categories(q: Quantale, n: usize) -> Result<Vec<Arc<TCategory>>> {
    let elems = q.enumerate()?;
    let cells = off_diagonal(n);
    let carrier = Carrier::range(n).arc();
    let theory = Theory::identity(q);
    let mut out = Vec::new();
    let mut digits = vec![0usize; cells.len()];
    loop {
        let mut m = vec![vec![q.unit(); n]; n];
        for (k, &(i, j)) in cells.iter().enumerate() {
            m[i][j] = elems[digits[k]].clone();
        }
        if is_transitive(q, &m) {
            out.push(Arc::new(TCategory::checked(theory, &carrier, m)?));
        }
        let mut k = cells.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < elems.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Labeled preorders on `n` points.
pub fn preorders(n: usize) -> Result<Vec<Arc<TCategory>>> {
    v_categories(Quantale::Bool2, n)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn entries(c: &TCategory, perm: &[usize]) -> Vec<Value> {
    let n = c.len();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| c.hom(perm[i], perm[j]).clone()).collect()
}

fn value_key(q: Quantale, v: &[Value]) -> Vec<usize> {
    v.iter().map(|x| TCategory::value_index(q, x).unwrap_or(usize::MAX)).collect()
}

/// One representative per isomorphism class, in order of first appearance.
pub fn up_to_iso(q: Quantale, cats: Vec<Arc<TCategory>>) -> Vec<Arc<TCategory>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for c in cats {
        let canon = permutations(c.len())
            .iter()
            .map(|p| value_key(q, &entries(&c, p)))
            .min()
            .unwrap_or_default();
        if seen.insert(canon) {
            out.push(c);
        }
    }
    out
}

/// Unlabeled preorders on `n` points.
pub fn preorders_up_to_iso(n: usize) -> Result<Vec<Arc<TCategory>>> {
    Ok(up_to_iso(Quantale::Bool2, preorders(n)?))
}

/// The preorder with `i ≤ j` iff `rel` contains `(i, j)` or `i = j`
/// (the relation is closed transitively).
pub fn preorder_from(n: usize, rel: &[(usize, usize)]) -> Result<Arc<TCategory>> {
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(i, j) in rel {
        m[i][j] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] && m[k][j] {
                    m[i][j] = true;
                }
            }
        }
    }
    let rows = m.into_iter().map(|r| r.into_iter().map(Value::Bool).collect()).collect();
    Ok(Arc::new(TCategory::checked(Theory::identity(Quantale::Bool2), &Carrier::range(n).arc(), rows)?))
}

pub fn chain(n: usize) -> Result<Arc<TCategory>> {
    let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    preorder_from(n, &rel)
}

/// `⊥ < a, b < ⊤`.
pub fn diamond() -> Result<Arc<TCategory>> {
    preorder_from(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])
}

/// Small Lawvere metric spaces used for sampled presheaf checks.
pub fn metric_fixtures() -> Result<Vec<Fixture>> {
    let q = Quantale::Lawvere;
    let theory = Theory::identity(q);
    let d = |rows: &[&[(i64, i64)]]| -> Vec<Vec<Value>> {
        rows.iter()
            .map(|r| r.iter().map(|&(p, s)| if s == 0 { Value::infinity() } else { Value::dist_ratio(p, s) }).collect())
            .collect()
    };
    let specs: Vec<(&str, Vec<Vec<Value>>)> = vec![
        ("two-points-distance-1", d(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]])),
        ("asymmetric-pair", d(&[&[(0, 1), (1, 2)], &[(3, 1), (0, 1)]])),
        (
            "three-point-line",
            d(&[&[(0, 1), (1, 1), (2, 1)], &[(1, 1), (0, 1), (1, 1)], &[(2, 1), (1, 1), (0, 1)]]),
        ),
        (
            "directed-triangle",
            d(&[&[(0, 1), (1, 3), (1, 1)], &[(7, 6), (0, 1), (2, 3)], &[(1, 2), (5, 6), (0, 1)]]),
        ),
        ("disconnected-pair", d(&[&[(0, 1), (1, 0)], &[(1, 0), (0, 1)]])),
    ];
    specs
        .into_iter()
        .map(|(name, rows)| {
            let c = Carrier::range(rows.len()).arc();
            Ok(Fixture {
                name: name.to_string(),
                cat: Arc::new(TCategory::checked(theory, &c, rows)?),
            })
        })
        .collect()
}

/// Render a Bool2 preorder as its strict relation, e.g. `3:0≤1,0≤2`.
pub fn describe(c: &TCategory) -> String {
    let n = c.len();
    let mut parts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && c.le_points(i, j) {
                parts.push(format!("{}≤{}", c.label(i), c.label(j)));
            }
        }
    }
    if parts.is_empty() {
        format!("discrete({n})")
    } else {
        format!("{n}:{}", parts.join(","))
    }
}
