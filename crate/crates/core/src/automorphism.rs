//! Automorphisms by backtracking over colour-refined partitions, the group
//! order via a stabiliser chain, order-3 automorphisms fixing no edge, and
//! quotients by them.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::divisor::{has_positive_rank, require_degree, Divisor};
use crate::error::{Error, Result};
use crate::gonality::{check_zero_three, class_partition};
use crate::graph::{Multigraph, VertexSet};
use crate::morphism::{EdgeImage, GraphMorphism};

/// A vertex permutation preserving every edge multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    perm: Vec<usize>,
    graph: u64,
}

impl Automorphism {
    pub fn new(g: &Multigraph, perm: Vec<usize>) -> Result<Self> {
        let n = g.vertex_count();
        if perm.len() != n {
            return Err(Error::NotAutomorphism);
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::NotAutomorphism);
            }
            seen[p] = true;
        }
        if !preserves(g, g, &perm) {
            return Err(Error::NotAutomorphism);
        }
        Ok(Automorphism {
            perm,
            graph: g.fingerprint(),
        })
    }

    pub fn identity(g: &Multigraph) -> Self {
        Automorphism {
            perm: (0..g.vertex_count()).collect(),
            graph: g.fingerprint(),
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn graph_id(&self) -> u64 {
        self.graph
    }

    pub fn apply(&self, v: usize) -> usize {
        self.perm[v]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            perm: other.perm.iter().map(|&v| self.perm[v]).collect(),
            graph: self.graph,
        }
    }

    pub fn order(&self) -> usize {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut order = 1usize;
        for s in 0..n {
            let mut len = 0;
            let mut v = s;
            while !seen[v] {
                seen[v] = true;
                v = self.perm[v];
                len += 1;
            }
            if len > 0 {
                order = lcm(order, len);
            }
        }
        order
    }

    /// First edge whose endpoint pair is mapped onto itself.
    pub fn fixed_edge(&self, g: &Multigraph) -> Option<usize> {
        g.edges().iter().position(|&(u, v)| {
            let (a, b) = (self.perm[u], self.perm[v]);
            (a, b) == (u, v) || (a, b) == (v, u)
        })
    }

    /// Orbits, each sorted, ordered by their smallest vertex.
    pub fn orbits(&self) -> Vec<VertexSet> {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut v = s;
            while !seen[v] {
                seen[v] = true;
                orbit.push(v);
                v = self.perm[v];
            }
            out.push(VertexSet::new(orbit));
        }
        out
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn preserves(g: &Multigraph, h: &Multigraph, perm: &[usize]) -> bool {
    g.edge_count() == h.edge_count()
        && (0..g.vertex_count()).all(|u| {
            g.neighbors(u)
                .iter()
                .all(|&(v, m)| h.multiplicity(perm[u], perm[v]) == m)
        })
}

/// Backtracking search for isomorphisms `g → h` under joint colour refinement.
struct Search<'a> {
    g: &'a Multigraph,
    h: &'a Multigraph,
}

type Signature = (u32, Vec<(u32, u32)>);

impl Search<'_> {
    fn signature(graph: &Multigraph, colors: &[u32], v: usize) -> Signature {
        let mut nb: Vec<(u32, u32)> = graph
            .neighbors(v)
            .iter()
            .map(|&(w, m)| (colors[w], m))
            .collect();
        nb.sort_unstable();
        (colors[v], nb)
    }

    /// Refines both colourings with a shared palette until stable. `None` when
    /// some colour class has different sizes on the two sides.
    fn refine(&self, mut left: Vec<u32>, mut right: Vec<u32>) -> Option<(Vec<u32>, Vec<u32>)> {
        let mut classes = 0;
        loop {
            let sl: Vec<Signature> = (0..left.len()).map(|v| Self::signature(self.g, &left, v)).collect();
            let sr: Vec<Signature> = (0..right.len()).map(|v| Self::signature(self.h, &right, v)).collect();
            let mut palette: BTreeMap<&Signature, (u32, usize, usize)> = BTreeMap::new();
            for s in &sl {
                palette.entry(s).or_default().1 += 1;
            }
            for s in &sr {
                palette.entry(s).or_default().2 += 1;
            }
            if palette.values().any(|&(_, a, b)| a != b) {
                return None;
            }
            for (i, entry) in palette.values_mut().enumerate() {
                entry.0 = i as u32;
            }
            left = sl.iter().map(|s| palette[s].0).collect();
            right = sr.iter().map(|s| palette[s].0).collect();
            if palette.len() == classes {
                return Some((left, right));
            }
            classes = palette.len();
        }
    }

    /// Calls `visit` on each isomorphism extending the colourings, in search
    /// order. Returns `false` once `visit` asks to stop.
    fn run(&self, left: Vec<u32>, right: Vec<u32>, visit: &mut dyn FnMut(Vec<usize>) -> bool) -> bool {
        let Some((left, right)) = self.refine(left, right) else {
            return true;
        };
        let n = left.len();
        let mut size = vec![0usize; n + 1];
        for &c in &left {
            size[c as usize] += 1;
        }
        let target = (0..n).filter(|&u| size[left[u] as usize] > 1).min_by_key(|&u| (left[u], u));
        let Some(u) = target else {
            let mut by_color = vec![0usize; n];
            for (w, &c) in right.iter().enumerate() {
                by_color[c as usize] = w;
            }
            let perm: Vec<usize> = left.iter().map(|&c| by_color[c as usize]).collect();
            if preserves(self.g, self.h, &perm) {
                return visit(perm);
            }
            return true;
        };
        let fresh = n as u32 + 1;
        for w in (0..n).filter(|&w| right[w] == left[u]) {
            let mut l = left.clone();
            let mut r = right.clone();
            l[u] = fresh;
            r[w] = fresh;
            if !self.run(l, r, visit) {
                return false;
            }
        }
        true
    }

    /// Initial colourings pinning each pair `(u, w)` to a colour of its own.
    fn pinned(&self, pairs: &[(usize, usize)]) -> (Vec<u32>, Vec<u32>) {
        let mut left = vec![0u32; self.g.vertex_count()];
        let mut right = vec![0u32; self.h.vertex_count()];
        for (i, &(u, w)) in pairs.iter().enumerate() {
            left[u] = i as u32 + 1;
            right[w] = i as u32 + 1;
        }
        (left, right)
    }

    fn first(&self, pairs: &[(usize, usize)]) -> Option<Vec<usize>> {
        if self.g.vertex_count() != self.h.vertex_count() || self.g.edge_count() != self.h.edge_count() {
            return None;
        }
        let (l, r) = self.pinned(pairs);
        let mut found = None;
        self.run(l, r, &mut |p| {
            found = Some(p);
            false
        });
        found
    }
}

/// A vertex bijection `g → h` preserving multiplicities, if one exists.
pub fn find_isomorphism(g: &Multigraph, h: &Multigraph) -> Option<Vec<usize>> {
    Search { g, h }.first(&[])
}

pub fn is_isomorphic(g: &Multigraph, h: &Multigraph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Every automorphism, in search order (the identity first).
pub fn all_automorphisms(g: &Multigraph) -> Vec<Automorphism> {
    let search = Search { g, h: g };
    let (l, r) = search.pinned(&[]);
    let mut out = Vec::new();
    search.run(l, r, &mut |perm| {
        out.push(Automorphism {
            perm,
            graph: g.fingerprint(),
        });
        true
    });
    out
}

#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub order: u128,
    /// Coset representatives along the stabiliser chain of `0, 1, ..`.
    pub generators: Vec<Automorphism>,
}

/// Group order as the product of orbit sizes along the point-stabiliser chain.
pub fn automorphism_group(g: &Multigraph) -> AutomorphismGroup {
    let search = Search { g, h: g };
    let n = g.vertex_count();
    let mut fixed: Vec<(usize, usize)> = Vec::new();
    let mut order: u128 = 1;
    let mut generators = Vec::new();
    for b in 0..n {
        let (l, r) = search.pinned(&fixed);
        let Some((l, r)) = search.refine(l, r) else {
            break;
        };
        if l.iter().filter(|&&c| c == l[b]).count() == 1 {
            fixed.push((b, b));
            continue;
        }
        let mut orbit = 1u128;
        for w in (0..n).filter(|&w| w != b && r[w] == l[b]) {
            let mut pairs = fixed.clone();
            pairs.push((b, w));
            if let Some(perm) = search.first(&pairs) {
                orbit += 1;
                generators.push(Automorphism {
                    perm,
                    graph: g.fingerprint(),
                });
            }
        }
        order *= orbit;
        fixed.push((b, b));
    }
    AutomorphismGroup { order, generators }
}

/// Every `σ` with `σ³ = id`, `σ ≠ id`, fixing no edge.
pub fn order3_edge_free(g: &Multigraph) -> Vec<Automorphism> {
    all_automorphisms(g)
        .into_iter()
        .filter(|s| s.order() == 3 && s.fixed_edge(g).is_none())
        .collect()
}

/// `G/σ`: one vertex per orbit (labelled by its smallest member), one edge per
/// edge orbit between distinct vertex orbits, ordered by smallest source edge.
pub fn quotient_by(g: &Multigraph, sigma: &Automorphism) -> Result<(Multigraph, GraphMorphism)> {
    if sigma.graph != g.fingerprint() {
        return Err(Error::GraphMismatch);
    }
    if !preserves(g, g, &sigma.perm) {
        return Err(Error::NotAutomorphism);
    }
    if sigma.order() != 3 {
        return Err(Error::WrongOrder);
    }
    if let Some(e) = sigma.fixed_edge(g) {
        return Err(Error::FixedEdge(e));
    }
    let orbits = sigma.orbits();
    let mut orbit_of = vec![0usize; g.vertex_count()];
    for (i, o) in orbits.iter().enumerate() {
        for v in o.iter() {
            orbit_of[v] = i;
        }
    }

    // j-th parallel edge of {u, v} goes to the j-th parallel edge of {σu, σv}
    let mut parallel: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut rank = vec![0usize; g.edge_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let list = parallel.entry((u.min(v), u.max(v))).or_default();
        rank[e] = list.len();
        list.push(e);
    }
    let image = |e: usize| {
        let (u, v) = g.edges()[e];
        let (a, b) = (sigma.apply(u), sigma.apply(v));
        parallel[&(a.min(b), a.max(b))][rank[e]]
    };

    let labels: Vec<String> = orbits.iter().map(|o| g.label(o.as_slice()[0]).to_string()).collect();
    let mut edge_orbit: Vec<Option<usize>> = vec![None; g.edge_count()];
    let mut q_edges = Vec::new();
    let mut edge_map = Vec::with_capacity(g.edge_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (ou, ov) = (orbit_of[u], orbit_of[v]);
        if ou == ov {
            edge_map.push(EdgeImage::Vertex(ou));
            continue;
        }
        if edge_orbit[e].is_none() {
            let orbit = [e, image(e), image(image(e))];
            if orbit[1] == e || orbit[2] == e || orbit[1] == orbit[2] || image(orbit[2]) != e {
                return Err(Error::VerificationFailed(format!("edge {e} has an orbit of size below 3")));
            }
            for f in orbit {
                edge_orbit[f] = Some(q_edges.len());
            }
            q_edges.push((ou, ov));
        }
        edge_map.push(EdgeImage::Edge(edge_orbit[e].expect("assigned above")));
    }
    let quotient = Multigraph::from_indices(labels, q_edges)?;
    let morphism = GraphMorphism::new(g.clone(), quotient.clone(), orbit_of, edge_map)?;
    Ok((quotient, morphism))
}

/// Builds the order-3 automorphism attached to a degree-3 positive-rank divisor
/// satisfying the zero-three condition on a simple 3-vertex-connected graph.
///
/// The first size-3 class is cycled in ascending order; the rest follows
/// breadth-first over the class tree. A size-3 class next to an already
/// ordered size-3 class is ordered through the matching between them; one
/// reached from a singleton is cycled in ascending order; singletons are fixed.
pub fn sigma_from_divisor(g: &Multigraph, d: &Divisor) -> Result<Automorphism> {
    d.check(g)?;
    if !g.is_simple() {
        return Err(Error::MultigraphInput);
    }
    if g.vertex_connectivity() < 3 {
        return Err(Error::NotThreeVertexConnected);
    }
    require_degree(d, 3)?;
    if !has_positive_rank(g, d)? {
        return Err(Error::NotRankOne);
    }
    check_zero_three(g, d)?;
    let partition = class_partition(g, d)?;
    let classes = &partition.classes;
    let class_of = &partition.class_of;
    let k = classes.len();

    let mut adjacent = vec![Vec::new(); k];
    for &(u, v) in g.edges() {
        let (a, b) = (class_of[u], class_of[v]);
        if a != b && !adjacent[a].contains(&b) {
            adjacent[a].push(b);
            adjacent[b].push(a);
        }
    }
    for list in &mut adjacent {
        list.sort_unstable();
    }

    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let cycle_ascending = |perm: &mut Vec<usize>, c: &VertexSet| {
        if let [x, y, z] = *c.as_slice() {
            perm[x] = y;
            perm[y] = z;
            perm[z] = x;
        }
    };
    let start = (0..k).find(|&c| classes[c].len() == 3).unwrap_or(0);
    let mut visited = vec![false; k];
    let mut queue = VecDeque::from([start]);
    visited[start] = true;
    cycle_ascending(&mut perm, &classes[start]);
    while let Some(p) = queue.pop_front() {
        for &c in &adjacent[p] {
            if visited[c] {
                continue;
            }
            visited[c] = true;
            queue.push_back(c);
            if classes[c].len() != 3 {
                continue;
            }
            if classes[p].len() != 3 {
                cycle_ascending(&mut perm, &classes[c]);
                continue;
            }
            for u in classes[c].iter() {
                let v = g
                    .neighbors(u)
                    .iter()
                    .map(|&(w, _)| w)
                    .find(|&w| class_of[w] == p)
                    .ok_or_else(|| Error::VerificationFailed(format!("`{}` has no neighbour in the parent class", g.label(u))))?;
                let sv = perm[v];
                let targets: Vec<usize> = g
                    .neighbors(sv)
                    .iter()
                    .map(|&(w, _)| w)
                    .filter(|&w| class_of[w] == c)
                    .collect();
                if targets.len() != 1 {
                    return Err(Error::VerificationFailed(format!(
                        "`{}` has {} neighbours in the child class",
                        g.label(sv),
                        targets.len()
                    )));
                }
                perm[u] = targets[0];
            }
        }
    }

    let sigma = Automorphism::new(g, perm).map_err(|_| Error::VerificationFailed("not an automorphism".into()))?;
    if sigma.order() != 3 {
        return Err(Error::VerificationFailed(format!("order {}", sigma.order())));
    }
    if let Some(e) = sigma.fixed_edge(g) {
        return Err(Error::VerificationFailed(format!("fixes edge {e}")));
    }
    let (quotient, _) = quotient_by(g, &sigma)?;
    if !quotient.is_tree() {
        return Err(Error::VerificationFailed("quotient is not a tree".into()));
    }
    Ok(sigma)
}

/// First order-3 edge-free automorphism (search order) whose quotient is a tree.
pub fn theorem41_condition3(g: &Multigraph) -> (bool, Option<Automorphism>) {
    let witness = order3_edge_free(g).into_iter().find(|s| {
        quotient_by(g, s).is_ok_and(|(q, _)| q.is_tree())
    });
    (witness.is_some(), witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;

    #[test]
    fn group_orders() {
        assert_eq!(automorphism_group(&frucht()).order, 1);
        assert_eq!(automorphism_group(&wheel(5).unwrap()).order, 8);
        assert_eq!(automorphism_group(&fig7()).order, 8);
        assert_eq!(automorphism_group(&complete(4).unwrap()).order, 24);
        assert_eq!(automorphism_group(&cube()).order, 48);
        assert_eq!(automorphism_group(&prism()).order, 12);
        assert_eq!(automorphism_group(&complete_bipartite(3, 3).unwrap()).order, 72);
        assert_eq!(automorphism_group(&banana(3).unwrap()).order, 2);
        assert_eq!(automorphism_group(&cycle(7).unwrap()).order, 14);
        assert_eq!(automorphism_group(&complete(6).unwrap()).order, 720);
    }

    #[test]
    fn enumeration_matches_order() {
        for g in [wheel(5).unwrap(), prism(), cube(), fig7(), complete(4).unwrap()] {
            let all = all_automorphisms(&g);
            assert_eq!(all.len() as u128, automorphism_group(&g).order);
            assert!(all[0].is_identity());
        }
        // the swaps u2<->u3 and u_i<->w_i do not commute: dihedral of order 8
        let fig = all_automorphisms(&fig7());
        let mut orders: Vec<usize> = fig.iter().map(Automorphism::order).collect();
        orders.sort_unstable();
        assert_eq!(orders, [1, 2, 2, 2, 2, 2, 4, 4]);
    }

    #[test]
    fn order_three() {
        assert!(order3_edge_free(&fig7()).is_empty());
        assert!(order3_edge_free(&wheel(5).unwrap()).is_empty());
        let p = prism();
        let cyc = Automorphism::new(&p, vec![1, 2, 0, 4, 5, 3]).unwrap();
        assert!(order3_edge_free(&p).contains(&cyc));
    }

    #[test]
    fn quotients() {
        let p = prism();
        let cyc = Automorphism::new(&p, vec![1, 2, 0, 4, 5, 3]).unwrap();
        let (q, phi) = quotient_by(&p, &cyc).unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.edge_count(), 1);
        assert_eq!(phi.degree().unwrap(), 3);

        let k4 = complete(4).unwrap();
        let abc = Automorphism::new(&k4, vec![1, 2, 0, 3]).unwrap();
        let (q, phi) = quotient_by(&k4, &abc).unwrap();
        assert!(q.is_tree() && q.vertex_count() == 2);
        assert!(phi.is_nondegenerate());

        let t = path(4).unwrap();
        let cover = triple_cover(&t, &VertexSet::new([0, 3])).unwrap();
        let cycling = Automorphism::new(&cover, (0..12).map(|v| v / 3 * 3 + (v + 1) % 3).collect()).unwrap();
        let (q, _) = quotient_by(&cover, &cycling).unwrap();
        assert!(is_isomorphic(&q, &t));

        let swap = Automorphism::new(&k4, vec![1, 0, 2, 3]).unwrap();
        assert!(matches!(quotient_by(&k4, &swap), Err(Error::WrongOrder)));
        let fixes = Automorphism::new(&k4, vec![0, 2, 3, 1]).unwrap();
        assert!(quotient_by(&k4, &fixes).is_ok());
        let w = complete(5).unwrap();
        let three = Automorphism::new(&w, vec![1, 2, 0, 3, 4]).unwrap();
        assert!(matches!(quotient_by(&w, &three), Err(Error::FixedEdge(_))));
    }

    #[test]
    fn sigma_construction() {
        let p = prism();
        let s = sigma_from_divisor(&p, &Divisor::from_vertices(&p, [0, 1, 2])).unwrap();
        assert_eq!(s.perm(), &[1, 2, 0, 4, 5, 3]);

        let k4 = complete(4).unwrap();
        let s = sigma_from_divisor(&k4, &Divisor::from_vertices(&k4, [0, 1, 2])).unwrap();
        assert_eq!(s.perm(), &[1, 2, 0, 3]);

        let t = path(3).unwrap();
        let cover = triple_cover(&t, &VertexSet::new(0..3)).unwrap();
        let s = sigma_from_divisor(&cover, &Divisor::from_vertices(&cover, [0, 1, 2])).unwrap();
        assert_eq!(s.perm(), &[1, 2, 0, 4, 5, 3, 7, 8, 6]);
        let orbits: Vec<VertexSet> = s.orbits();
        assert_eq!(orbits.len(), 3);

        let w5 = wheel(5).unwrap();
        assert!(matches!(
            sigma_from_divisor(&w5, &Divisor::from_vertices(&w5, [0, 1, 3])),
            Err(Error::ZeroThreeViolated(_))
        ));
        assert!(matches!(
            sigma_from_divisor(&fig7(), &Divisor::from_vertices(&fig7(), [0, 1, 1])),
            Err(Error::NotThreeVertexConnected)
        ));
    }

    #[test]
    fn condition_three() {
        assert!(theorem41_condition3(&prism()).0);
        assert!(!theorem41_condition3(&fig7()).0);
        assert!(!theorem41_condition3(&frucht()).0);
        assert!(theorem41_condition3(&complete(4).unwrap()).0);
    }

    #[test]
    fn isomorphism() {
        assert!(is_isomorphic(&prism(), &Multigraph::cartesian_product(&path(2).unwrap(), &complete(3).unwrap()).unwrap()));
        assert!(!is_isomorphic(&prism(), &complete_bipartite(3, 3).unwrap()));
        assert!(!is_isomorphic(&path(4).unwrap(), &complete_bipartite(1, 3).unwrap()));
    }
}
