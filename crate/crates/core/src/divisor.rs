//! Divisors and the chip-firing engine.
//!
//! Reduction to the `v`-reduced form runs in two phases. Debt away from the
//! root is cleared first by repeatedly firing every vertex that is out of debt
//! (the root always included). The result is then driven to the reduced form
//! with Dhar's burning algorithm: burn from the root, fire whatever stays
//! unburnt, repeat until the whole graph burns.

use std::fmt;
use std::ops::{Add, Index, Sub};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexSet};

/// Root used whenever a canonical representative of a class is needed.
pub const EQUIVALENCE_ROOT: usize = 0;

/// Integer chip counts indexed by the vertex order of one graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Divisor {
    graph: u64,
    values: Vec<i64>,
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Divisor").field(&self.values).finish()
    }
}

impl Divisor {
    pub fn zero(g: &Multigraph) -> Self {
        Divisor {
            graph: g.fingerprint(),
            values: vec![0; g.vertex_count()],
        }
    }

    pub fn from_values(g: &Multigraph, values: Vec<i64>) -> Result<Self> {
        if values.len() != g.vertex_count() {
            return Err(Error::DivisorLength {
                expected: g.vertex_count(),
                found: values.len(),
            });
        }
        Ok(Divisor {
            graph: g.fingerprint(),
            values,
        })
    }

    /// Builds a divisor from `(label, chips)` pairs; repeated labels accumulate.
    pub fn from_labels<S: AsRef<str>>(g: &Multigraph, chips: &[(S, i64)]) -> Result<Self> {
        let mut d = Divisor::zero(g);
        for (l, c) in chips {
            d.values[g.vertex(l.as_ref())?] += c;
        }
        Ok(d)
    }

    /// One chip on each listed vertex, with repetition.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(g: &Multigraph, vertices: I) -> Self {
        let mut d = Divisor::zero(g);
        for v in vertices {
            d.values[v] += 1;
        }
        d
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn graph_id(&self) -> u64 {
        self.graph
    }

    pub fn degree(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.values.iter().all(|&c| c >= 0)
    }

    pub fn support(&self) -> VertexSet {
        VertexSet::new(
            self.values
                .iter()
                .enumerate()
                .filter_map(|(v, &c)| (c > 0).then_some(v)),
        )
    }

    pub fn check(&self, g: &Multigraph) -> Result<()> {
        if self.graph != g.fingerprint() {
            return Err(Error::GraphMismatch);
        }
        Ok(())
    }

    /// Multiset of vertices, ascending, for an effective divisor.
    pub fn chips(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .flat_map(|(v, &c)| std::iter::repeat_n(v, c.max(0) as usize))
            .collect()
    }

    pub fn scaled(&self, k: i64) -> Divisor {
        Divisor {
            graph: self.graph,
            values: self.values.iter().map(|c| c * k).collect(),
        }
    }

    fn zip_with(&self, other: &Divisor, f: impl Fn(i64, i64) -> i64) -> Divisor {
        assert_eq!(self.graph, other.graph, "divisors live on different graphs");
        Divisor {
            graph: self.graph,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Index<usize> for Divisor {
    type Output = i64;
    fn index(&self, v: usize) -> &i64 {
        &self.values[v]
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Outcome of one run of the burning process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnResult {
    pub unburnt: VertexSet,
    /// `(vertex, round)` in burn order; ascending vertex index within a round.
    pub order: Vec<(usize, usize)>,
}

impl BurnResult {
    pub fn all_burned(&self) -> bool {
        self.unburnt.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub divisor: Divisor,
    /// Fired sets, in order, including the debt-clearing phase.
    pub fired: Vec<VertexSet>,
}

impl ReductionTrace {
    /// Re-applies the fired sets to `start`.
    pub fn replay(&self, g: &Multigraph, start: &Divisor) -> Result<Vec<Divisor>> {
        let mut out = Vec::with_capacity(self.fired.len() + 1);
        let mut cur = start.clone();
        out.push(cur.clone());
        for a in &self.fired {
            cur = fire_subset(g, &cur, a)?;
            out.push(cur.clone());
        }
        Ok(out)
    }
}

/// The principal divisor `Δf` of an integer vertex function.
pub fn principal(g: &Multigraph, f: &[i64]) -> Divisor {
    let values = (0..g.vertex_count())
        .map(|v| {
            g.valence(v) as i64 * f[v]
                - g.neighbors(v)
                    .iter()
                    .map(|&(w, m)| m as i64 * f[w])
                    .sum::<i64>()
        })
        .collect();
    Divisor {
        graph: g.fingerprint(),
        values,
    }
}

fn fire_mask(g: &Multigraph, values: &mut [i64], mask: &[bool], times: i64) {
    for u in 0..g.vertex_count() {
        if !mask[u] {
            continue;
        }
        for &(w, m) in g.neighbors(u) {
            if !mask[w] {
                values[u] -= m as i64 * times;
                values[w] += m as i64 * times;
            }
        }
    }
}

/// `D - Δ1_A`: every vertex of `a` sends one chip along each edge leaving `a`.
pub fn fire_subset(g: &Multigraph, d: &Divisor, a: &VertexSet) -> Result<Divisor> {
    d.check(g)?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(v) = a.iter().find(|&v| v >= g.vertex_count()) {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let mut out = d.clone();
    fire_mask(g, &mut out.values, &a.mask(g.vertex_count()), 1);
    Ok(out)
}

/// Burning fixed point from `root`. Returns the burnt mask; fills `order` if given.
fn burn(
    g: &Multigraph,
    values: &[i64],
    root: usize,
    mut order: Option<&mut Vec<(usize, usize)>>,
) -> Vec<bool> {
    let n = g.vertex_count();
    let mut burnt = vec![false; n];
    let mut incoming = vec![0i64; n];
    burnt[root] = true;
    if let Some(o) = order.as_deref_mut() {
        o.push((root, 0));
    }
    let mut frontier = vec![root];
    let mut round = 0;
    while !frontier.is_empty() {
        round += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for &(w, m) in g.neighbors(u) {
                if burnt[w] {
                    continue;
                }
                incoming[w] += m as i64;
                if incoming[w] > values[w] {
                    burnt[w] = true;
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        if let Some(o) = order.as_deref_mut() {
            o.extend(next.iter().map(|&w| (w, round)));
        }
        frontier = next;
    }
    burnt
}

/// Runs the burning process from `v`; every vertex other than `v` must be out of debt.
pub fn dhar_burn(g: &Multigraph, d: &Divisor, v: usize) -> Result<BurnResult> {
    d.check(g)?;
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    if let Some(w) = (0..g.vertex_count()).find(|&w| w != v && d[w] < 0) {
        return Err(Error::DebtOutsideRoot(g.label(w).to_string()));
    }
    let mut order = Vec::new();
    let burnt = burn(g, &d.values, v, Some(&mut order));
    Ok(BurnResult {
        unburnt: VertexSet::from_mask(&burnt.iter().map(|b| !b).collect::<Vec<_>>()),
        order,
    })
}

/// Brings `values` to its `root`-reduced form in place.
fn reduce_in_place(
    g: &Multigraph,
    values: &mut [i64],
    root: usize,
    mut trace: Option<&mut Vec<VertexSet>>,
) {
    let n = g.vertex_count();
    // debt clearing
    while (0..n).any(|w| w != root && values[w] < 0) {
        let mask: Vec<bool> = (0..n).map(|u| u == root || values[u] >= 0).collect();
        fire_mask(g, values, &mask, 1);
        if let Some(t) = trace.as_deref_mut() {
            t.push(VertexSet::from_mask(&mask));
        }
    }
    // Dhar rounds; the unburnt set is fired as many times as it stays legal
    loop {
        let burnt = burn(g, values, root, None);
        if burnt.iter().all(|&b| b) {
            break;
        }
        let unburnt: Vec<bool> = burnt.iter().map(|b| !b).collect();
        let times = (0..n)
            .filter(|&u| unburnt[u])
            .filter_map(|u| {
                let out: i64 = g
                    .neighbors(u)
                    .iter()
                    .filter(|(w, _)| !unburnt[*w])
                    .map(|&(_, m)| m as i64)
                    .sum();
                (out > 0).then(|| values[u] / out)
            })
            .min()
            .unwrap_or(1)
            .max(1);
        fire_mask(g, values, &unburnt, times);
        if let Some(t) = trace.as_deref_mut() {
            let set = VertexSet::from_mask(&unburnt);
            t.extend(std::iter::repeat_n(set, times as usize));
        }
    }
}

/// `Red_v(D)` together with the sequence of fired sets that produced it.
pub fn reduce(g: &Multigraph, d: &Divisor, v: usize) -> Result<ReductionTrace> {
    d.check(g)?;
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let mut out = d.clone();
    let mut fired = Vec::new();
    reduce_in_place(g, &mut out.values, v, Some(&mut fired));
    Ok(ReductionTrace {
        divisor: out,
        fired,
    })
}

/// `Red_v(D)` without the trace.
pub fn reduced(g: &Multigraph, d: &Divisor, v: usize) -> Result<Divisor> {
    d.check(g)?;
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let mut out = d.clone();
    reduce_in_place(g, &mut out.values, v, None);
    Ok(out)
}

pub(crate) fn reduced_values(g: &Multigraph, values: &[i64], v: usize) -> Vec<i64> {
    let mut out = values.to_vec();
    reduce_in_place(g, &mut out, v, None);
    out
}

/// Linear equivalence, decided by comparing reduced forms at [`EQUIVALENCE_ROOT`].
pub fn is_equivalent(g: &Multigraph, d: &Divisor, e: &Divisor) -> Result<bool> {
    d.check(g)?;
    e.check(g)?;
    if d.degree() != e.degree() {
        return Ok(false);
    }
    Ok(reduced_values(g, &d.values, EQUIVALENCE_ROOT) == reduced_values(g, &e.values, EQUIVALENCE_ROOT))
}

/// `r(D) >= 1`, checked as `Red_v(D)(v) >= 1` at every vertex.
pub fn has_positive_rank(g: &Multigraph, d: &Divisor) -> Result<bool> {
    d.check(g)?;
    Ok(positive_rank_values(g, &d.values))
}

pub(crate) fn positive_rank_values(g: &Multigraph, values: &[i64]) -> bool {
    let effective = values.iter().all(|&c| c >= 0);
    (0..g.vertex_count()).all(|v| {
        // an effective divisor never loses chips at v when reduced there
        (effective && values[v] >= 1) || reduced_values(g, values, v)[v] >= 1
    })
}

/// Calls `f` on every multiset of `k` vertices from `0..n`, as a nondecreasing
/// index sequence, in lexicographic order. Stops early when `f` returns false.
pub fn for_each_multiset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if n == 0 {
        return;
    }
    let mut c = vec![0usize; k];
    loop {
        if !f(&c) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - 1) else {
            return;
        };
        let next = c[i] + 1;
        for x in &mut c[i..] {
            *x = next;
        }
    }
}

/// All effective divisors of degree `k`, in graded-lex order.
pub fn effective_divisors(g: &Multigraph, k: usize) -> Vec<Divisor> {
    let mut out = Vec::new();
    for_each_multiset(g.vertex_count(), k, |c| {
        out.push(Divisor::from_vertices(g, c.iter().copied()));
        true
    });
    out
}

/// Baker-Norine rank by direct enumeration of the subtracted effective divisors.
pub fn rank(g: &Multigraph, d: &Divisor) -> Result<i64> {
    d.check(g)?;
    let q = EQUIVALENCE_ROOT;
    if reduced_values(g, &d.values, q)[q] < 0 {
        return Ok(-1);
    }
    let deg = d.degree();
    for k in 1..=deg {
        let mut subtracted = Vec::new();
        for_each_multiset(g.vertex_count(), k as usize, |c| {
            subtracted.push(c.to_vec());
            true
        });
        let fails = subtracted.par_iter().any(|c| {
            let mut v = d.values.clone();
            for &x in c {
                v[x] -= 1;
            }
            reduced_values(g, &v, q)[q] < 0
        });
        if fails {
            return Ok(k - 1);
        }
    }
    Ok(deg)
}

/// `K = Σ (val(v) - 2)(v)`.
pub fn canonical_divisor(g: &Multigraph) -> Divisor {
    Divisor {
        graph: g.fingerprint(),
        values: (0..g.vertex_count())
            .map(|v| g.valence(v) as i64 - 2)
            .collect(),
    }
}

/// `r(D) - r(K - D) - deg(D) - 1 + g`, zero by Riemann-Roch.
pub fn riemann_roch_residual(g: &Multigraph, d: &Divisor) -> Result<i64> {
    let k = canonical_divisor(g);
    let lhs = rank(g, d)? - rank(g, &(&k - d))?;
    Ok(lhs - d.degree() - 1 + g.genus() as i64)
}

/// Invariant factors (> 1, each dividing the next) of the reduced Laplacian.
pub fn jacobian_invariants(g: &Multigraph) -> Result<Vec<u64>> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::SingleVertex);
    }
    let size = n - 1;
    let mut a: Vec<Vec<i128>> = (1..n)
        .map(|u| {
            (1..n)
                .map(|v| {
                    if u == v {
                        g.valence(u) as i128
                    } else {
                        -(g.multiplicity(u, v) as i128)
                    }
                })
                .collect()
        })
        .collect();
    let diag = smith_diagonal(&mut a, size);
    let mut out: Vec<u64> = diag
        .into_iter()
        .map(|x| x.unsigned_abs() as u64)
        .filter(|&x| x != 1)
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Diagonal of the Smith normal form of a square integer matrix.
fn smith_diagonal(a: &mut [Vec<i128>], size: usize) -> Vec<i128> {
    for t in 0..size {
        loop {
            let pivot = (t..size)
                .flat_map(|i| (t..size).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return (0..size).map(|i| a[i][i]).collect();
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..size {
                let q = a[i][t] / p;
                if q != 0 {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0][t..size].iter_mut().zip(&top[t][t..size]) {
                        *x -= q * y;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..size {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().take(size).skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // pivot must divide the remaining block
            let bad = (t + 1..size).find(|&i| (t + 1..size).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in top[t][t..size].iter_mut().zip(&rest[0][t..size]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
    }
    (0..size).map(|i| a[i][i]).collect()
}

/// Every effective divisor linearly equivalent to `d`, in graded-lex order.
pub fn effective_representatives(g: &Multigraph, d: &Divisor) -> Result<Vec<Divisor>> {
    d.check(g)?;
    let deg = d.degree();
    if deg < 0 {
        return Ok(Vec::new());
    }
    let key = reduced_values(g, &d.values, EQUIVALENCE_ROOT);
    Ok(effective_divisors(g, deg as usize)
        .into_par_iter()
        .filter(|e| reduced_values(g, &e.values, EQUIVALENCE_ROOT) == key)
        .collect())
}

pub(crate) fn require_three_edge_connected(g: &Multigraph) -> Result<()> {
    match g.edge_connectivity() {
        Ok(eta) if eta >= 3 => Ok(()),
        _ => Err(Error::NotThreeEdgeConnected),
    }
}

pub(crate) fn require_degree(d: &Divisor, expected: i64) -> Result<()> {
    if d.degree() != expected {
        return Err(Error::WrongDegree {
            expected,
            found: d.degree(),
        });
    }
    Ok(())
}

/// The unique effective `D_v ~ D` with `v` in its support, for a degree-3,
/// positive-rank `D` on a 3-edge-connected graph.
pub fn equivalent_effective_through(g: &Multigraph, d: &Divisor, v: usize) -> Result<Divisor> {
    d.check(g)?;
    require_degree(d, 3)?;
    require_three_edge_connected(g)?;
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    if !has_positive_rank(g, d)? {
        return Err(Error::NotRankOne);
    }
    through_unchecked(g, d, v)
}

pub(crate) fn through_unchecked(g: &Multigraph, d: &Divisor, v: usize) -> Result<Divisor> {
    let n = g.vertex_count();
    let key = reduced_values(g, &d.values, EQUIVALENCE_ROOT);
    let mut found = Vec::new();
    for i in 0..n {
        for j in i..n {
            let e = Divisor::from_vertices(g, [v, i, j]);
            if reduced_values(g, &e.values, EQUIVALENCE_ROOT) == key {
                found.push(e);
            }
        }
    }
    if found.len() != 1 {
        return Err(Error::UniquenessViolated {
            vertex: g.label(v).to_string(),
            count: found.len(),
        });
    }
    Ok(found.pop().expect("one element"))
}
