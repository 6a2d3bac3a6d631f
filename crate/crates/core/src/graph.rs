//! Finite connected loopless multigraphs and the structural queries used as
//! preconditions elsewhere in the crate.
//!
//! Vertices are addressed by their index in declaration order; labels are only
//! used at the boundaries. Edges keep the position they had in the input list,
//! so parallel edges stay distinguishable.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A subset of a graph's vertices, kept sorted by vertex index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet(
            mask.iter()
                .enumerate()
                .filter_map(|(i, &b)| b.then_some(i))
                .collect(),
        )
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            if v < n {
                m[v] = true;
            }
        }
        m
    }

    /// Complement within `0..n`.
    pub fn complement(&self, n: usize) -> Self {
        VertexSet((0..n).filter(|v| !self.contains(*v)).collect())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

#[derive(Clone)]
pub struct Multigraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    // dense n*n multiplicity table
    mult: Vec<u32>,
    // distinct neighbours with multiplicity, ascending by index
    adj: Vec<Vec<(usize, u32)>>,
    valence: Vec<u32>,
    fingerprint: u64,
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multigraph")
            .field("vertices", &self.labels)
            .field("edges", &self.edges)
            .finish()
    }
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for Multigraph {}

impl Multigraph {
    /// Builds and validates a graph from labels and an edge list given by labels.
    pub fn new<V, E, S, T>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (T, T)>,
        T: AsRef<str>,
    {
        let labels: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let mut idx_edges = Vec::new();
        for (e, (a, b)) in edges.into_iter().enumerate() {
            let lookup = |s: &str| {
                index.get(s).copied().ok_or_else(|| Error::UnknownEndpoint {
                    edge: e,
                    label: s.to_string(),
                })
            };
            idx_edges.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_indices(labels, idx_edges)
    }

    /// Builds and validates a graph whose edges are given by vertex index.
    pub fn from_indices(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let mut mult = vec![0u32; n * n];
        let mut valence = vec![0u32; n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::UnknownEndpoint {
                        edge: e,
                        label: format!("#{x}"),
                    });
                }
            }
            if u == v {
                return Err(Error::LoopEdge {
                    edge: e,
                    vertex: labels[u].clone(),
                });
            }
            mult[u * n + v] += 1;
            mult[v * n + u] += 1;
            valence[u] += 1;
            valence[v] += 1;
        }
        let adj = (0..n)
            .map(|u| {
                (0..n)
                    .filter_map(|v| {
                        let m = mult[u * n + v];
                        (m > 0).then_some((v, m))
                    })
                    .collect()
            })
            .collect();
        let fingerprint = fingerprint(&labels, &edges);
        let g = Multigraph {
            labels,
            index,
            edges,
            mult,
            adj,
            valence,
            fingerprint,
        };
        let reach = g.reachable_from(0, &vec![false; n], None);
        if let Some(v) = reach.iter().position(|r| !r) {
            return Err(Error::Disconnected {
                vertex: g.labels[v].clone(),
                root: g.labels[0].clone(),
            });
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn vertex_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<VertexSet> {
        labels
            .iter()
            .map(|l| self.vertex(l.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(VertexSet::new)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Result<(usize, usize)> {
        self.edges.get(e).copied().ok_or(Error::UnknownEdge(e))
    }

    /// Structural identity; equal graphs built separately share it.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// `|E(u, v)|`.
    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.mult[u * self.vertex_count() + v]
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.adj[v]
    }

    pub fn valence(&self, v: usize) -> u32 {
        self.valence[v]
    }

    pub fn valence_of(&self, label: &str) -> Result<u32> {
        Ok(self.valence(self.vertex(label)?))
    }

    pub fn min_valence(&self) -> u32 {
        self.valence.iter().copied().min().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.mult.iter().all(|&m| m <= 1)
    }

    pub fn genus(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_tree(&self) -> bool {
        self.genus() == 0
    }

    /// Edges with one endpoint in `a` and the other in `b`, each listed once.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| (a.contains(u) && b.contains(v)) || (a.contains(v) && b.contains(u)))
            .map(|(e, _)| e)
            .collect()
    }

    /// Number of edges from `v` to vertices outside `a`.
    pub fn outdeg(&self, a: &VertexSet, v: usize) -> Result<u32> {
        if !a.contains(v) {
            return Err(Error::VertexNotInSet(
                self.labels.get(v).cloned().unwrap_or_else(|| format!("#{v}")),
            ));
        }
        Ok(self.adj[v]
            .iter()
            .filter(|(w, _)| !a.contains(*w))
            .map(|(_, m)| m)
            .sum())
    }

    pub fn total_outdeg(&self, a: &VertexSet) -> u32 {
        a.iter().map(|v| self.outdeg(a, v).unwrap_or(0)).sum()
    }

    /// Vertices reachable from `root` avoiding `removed` vertices and optionally one edge.
    pub(crate) fn reachable_from(
        &self,
        root: usize,
        removed: &[bool],
        skip_edge: Option<usize>,
    ) -> Vec<bool> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        if removed[root] {
            return seen;
        }
        let skip = skip_edge.map(|e| self.edges[e]);
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, m) in &self.adj[u] {
                if seen[w] || removed[w] {
                    continue;
                }
                if let Some((a, b)) = skip {
                    if m == 1 && ((a, b) == (u, w) || (a, b) == (w, u)) {
                        continue;
                    }
                }
                seen[w] = true;
                queue.push_back(w);
            }
        }
        seen
    }

    fn connected_without(&self, removed: &[bool]) -> bool {
        let Some(root) = removed.iter().position(|r| !r) else {
            return true;
        };
        let reach = self.reachable_from(root, removed, None);
        reach.iter().zip(removed).all(|(&r, &x)| r || x)
    }

    /// Global minimum edge cut, via unit-capacity max-flow from vertex 0.
    pub fn edge_connectivity(&self) -> Result<usize> {
        let n = self.vertex_count();
        if n < 2 {
            return Err(Error::SingleVertex);
        }
        let cap: Vec<i64> = self.mult.iter().map(|&m| m as i64).collect();
        Ok((1..n)
            .map(|t| max_flow(n, cap.clone(), 0, t))
            .min()
            .unwrap_or(0) as usize)
    }

    /// Vertex connectivity, with `|V| - 1` when every pair of vertices is adjacent.
    pub fn vertex_connectivity(&self) -> usize {
        let n = self.vertex_count();
        let complete = (0..n).all(|u| (0..n).all(|v| u == v || self.multiplicity(u, v) > 0));
        if complete {
            return n - 1;
        }
        // small separators by enumeration
        let mut removed = vec![false; n];
        for k in 1..=3.min(n - 2) {
            if subsets_disconnect(self, &mut removed, 0, k) {
                return k;
            }
        }
        // otherwise the smallest vertex separator over non-adjacent pairs
        let mut best = n - 2;
        for s in 0..n {
            for t in s + 1..n {
                if self.multiplicity(s, t) == 0 {
                    best = best.min(self.vertex_disjoint_paths(s, t));
                }
            }
        }
        best
    }

    fn vertex_disjoint_paths(&self, s: usize, t: usize) -> usize {
        let n = self.vertex_count();
        let big = n as i64 + 1;
        let nodes = 2 * n;
        let mut cap = vec![0i64; nodes * nodes];
        for v in 0..n {
            let inner = if v == s || v == t { big } else { 1 };
            cap[(2 * v) * nodes + 2 * v + 1] = inner;
            for &(w, _) in &self.adj[v] {
                cap[(2 * v + 1) * nodes + 2 * w] = big;
            }
        }
        max_flow(nodes, cap, 2 * s + 1, 2 * t) as usize
    }

    /// Edge indices whose deletion disconnects the graph.
    pub fn bridges(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let none = vec![false; n];
        (0..self.edge_count())
            .filter(|&e| {
                let (u, v) = self.edges[e];
                self.multiplicity(u, v) == 1 && !self.reachable_from(u, &none, Some(e))[v]
            })
            .collect()
    }

    /// Contracts every bridge. A merged vertex keeps the label of its smallest-index member.
    pub fn contract_bridges(&self) -> Multigraph {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for e in self.bridges() {
            let (u, v) = self.edges[e];
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            // keep the smaller index as representative
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
        let reps: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut new_index = vec![usize::MAX; n];
        let mut labels = Vec::new();
        for v in 0..n {
            if reps[v] == v {
                new_index[v] = labels.len();
                labels.push(self.labels[v].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (new_index[reps[u]], new_index[reps[v]]))
            .filter(|(a, b)| a != b)
            .collect();
        Multigraph::from_indices(labels, edges).expect("bridge contraction preserves validity")
    }

    /// Series-parallel reduction: true iff the graph has no K4 minor.
    pub fn has_treewidth_at_most_2(&self) -> bool {
        let n = self.vertex_count();
        let mut nbrs: Vec<BTreeSet<usize>> = self
            .adj
            .iter()
            .map(|a| a.iter().map(|&(w, _)| w).collect())
            .collect();
        let mut alive = vec![true; n];
        let mut remaining = n;
        let mut queue: VecDeque<usize> = (0..n).collect();
        while let Some(v) = queue.pop_front() {
            if !alive[v] || nbrs[v].len() > 2 {
                continue;
            }
            alive[v] = false;
            remaining -= 1;
            let ns: Vec<usize> = nbrs[v].iter().copied().collect();
            for &w in &ns {
                nbrs[w].remove(&v);
            }
            if let [a, b] = ns[..] {
                nbrs[a].insert(b);
                nbrs[b].insert(a);
            }
            queue.extend(ns);
        }
        remaining == 0
    }

    /// Cartesian product of two simple graphs; vertex `(u, v)` is labelled `(u,v)`.
    pub fn cartesian_product(g: &Multigraph, h: &Multigraph) -> Result<Multigraph> {
        if !g.is_simple() || !h.is_simple() {
            return Err(Error::MultigraphInput);
        }
        let (ng, nh) = (g.vertex_count(), h.vertex_count());
        let id = |u: usize, v: usize| u * nh + v;
        let labels = (0..ng)
            .flat_map(|u| (0..nh).map(move |v| (u, v)))
            .map(|(u, v)| format!("({},{})", g.labels[u], h.labels[v]))
            .collect();
        let mut edges = Vec::with_capacity(g.edge_count() * nh + h.edge_count() * ng);
        for v in 0..nh {
            edges.extend(g.edges.iter().map(|&(a, b)| (id(a, v), id(b, v))));
        }
        for u in 0..ng {
            edges.extend(h.edges.iter().map(|&(a, b)| (id(u, a), id(u, b))));
        }
        Multigraph::from_indices(labels, edges)
    }
}

fn subsets_disconnect(g: &Multigraph, removed: &mut [bool], start: usize, k: usize) -> bool {
    if k == 0 {
        return !g.connected_without(removed);
    }
    for v in start..removed.len() {
        removed[v] = true;
        let hit = subsets_disconnect(g, removed, v + 1, k - 1);
        removed[v] = false;
        if hit {
            return true;
        }
    }
    false
}

/// Edmonds-Karp on a dense capacity matrix.
fn max_flow(n: usize, mut cap: Vec<i64>, s: usize, t: usize) -> i64 {
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for w in 0..n {
                if prev[w] == usize::MAX && cap[u * n + w] > 0 {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while v != s {
            let u = prev[v];
            bottleneck = bottleneck.min(cap[u * n + v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            cap[u * n + v] -= bottleneck;
            cap[v * n + u] += bottleneck;
            v = u;
        }
        flow += bottleneck;
    }
}

// FNV-1a; stable across runs and platforms.
fn fingerprint(labels: &[String], edges: &[(usize, usize)]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    for l in labels {
        eat(l.as_bytes());
        eat(&[0xff]);
    }
    for &(u, v) in edges {
        eat(&(u as u64).to_le_bytes());
        eat(&(v as u64).to_le_bytes());
    }
    h
}
