//! Builders for the named graphs and the tree-cover families.
//!
//! Cover constructions label copy `i` of tree vertex `v` as `v#i` and list
//! vertices tree-vertex-major (`v#1, v#2, .., w#1, ..`).

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexSet};

/// Two vertices `x`, `y` joined by `n` parallel edges.
pub fn banana(n: usize) -> Result<Multigraph> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("banana needs n >= 1".into()));
    }
    Multigraph::new(["x", "y"], std::iter::repeat_n(("x", "y"), n))
}

/// Hub `h` joined to every vertex of the rim cycle `w1 .. w{n-1}`.
pub fn wheel(n: usize) -> Result<Multigraph> {
    if n < 4 {
        return Err(Error::ParameterOutOfRange("wheel needs n >= 4".into()));
    }
    let rim = n - 1;
    let labels = std::iter::once("h".to_string())
        .chain((1..=rim).map(|i| format!("w{i}")))
        .collect();
    let mut edges: Vec<(usize, usize)> = (1..=rim).map(|i| (0, i)).collect();
    edges.extend((1..=rim).map(|i| (i, i % rim + 1)));
    Multigraph::from_indices(labels, edges)
}

fn letter_labels(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=n).map(|i| format!("v{i}")).collect()
    }
}

/// `K_n`, labelled `a, b, c, ..` (or `v1 ..` past 26 vertices).
pub fn complete(n: usize) -> Result<Multigraph> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("complete needs n >= 1".into()));
    }
    let edges = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    Multigraph::from_indices(letter_labels(n), edges)
}

/// `K_{m,n}` with sides `l1 ..` and `r1 ..`.
pub fn complete_bipartite(m: usize, n: usize) -> Result<Multigraph> {
    if m == 0 || n == 0 {
        return Err(Error::ParameterOutOfRange("both sides must be non-empty".into()));
    }
    let labels = (1..=m)
        .map(|i| format!("l{i}"))
        .chain((1..=n).map(|j| format!("r{j}")))
        .collect();
    let edges = (0..m).flat_map(|i| (0..n).map(move |j| (i, m + j))).collect();
    Multigraph::from_indices(labels, edges)
}

/// The 3-cube; vertices are 3-bit strings.
pub fn cube() -> Multigraph {
    let labels = (0..8).map(|i| format!("{i:03b}")).collect();
    let mut edges = Vec::with_capacity(12);
    for u in 0..8usize {
        for bit in 0..3 {
            let v = u ^ (1 << bit);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    Multigraph::from_indices(labels, edges).expect("cube is valid")
}

/// The Frucht graph: a 7-cycle `0..6` plus five further vertices, 18 edges.
pub fn frucht() -> Multigraph {
    let mut edges: Vec<(usize, usize)> = (0..7).map(|i| (i, (i + 1) % 7)).collect();
    edges.extend([
        (0, 7),
        (1, 7),
        (2, 8),
        (3, 9),
        (4, 9),
        (5, 10),
        (6, 10),
        (7, 11),
        (8, 11),
        (8, 9),
        (10, 11),
    ]);
    let labels = (0..12).map(|i| i.to_string()).collect();
    Multigraph::from_indices(labels, edges).expect("frucht is valid")
}

/// Two triangles `u1u2u3`, `w1w2w3`; `v2` sees `u2,u3,w2,w3,v1`; `v1` sees `u1,w1,v2`.
pub fn fig7() -> Multigraph {
    Multigraph::new(
        ["v1", "v2", "u1", "u2", "u3", "w1", "w2", "w3"],
        [
            ("u1", "u2"),
            ("u2", "u3"),
            ("u3", "u1"),
            ("w1", "w2"),
            ("w2", "w3"),
            ("w3", "w1"),
            ("v2", "u2"),
            ("v2", "u3"),
            ("v2", "w2"),
            ("v2", "w3"),
            ("v2", "v1"),
            ("v1", "u1"),
            ("v1", "w1"),
        ],
    )
    .expect("fig7 is valid")
}

/// Path `p1 - p2 - .. - pn`.
pub fn path(n: usize) -> Result<Multigraph> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("path needs n >= 1".into()));
    }
    let labels = (1..=n).map(|i| format!("p{i}")).collect();
    Multigraph::from_indices(labels, (1..n).map(|i| (i - 1, i)).collect())
}

/// Cycle on `n >= 2` vertices `c1 .. cn`.
pub fn cycle(n: usize) -> Result<Multigraph> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange("cycle needs n >= 2".into()));
    }
    let labels = (1..=n).map(|i| format!("c{i}")).collect();
    Multigraph::from_indices(labels, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

/// `K2 x K3`: triangles `a#1 a#2 a#3`, `b#1 b#2 b#3` with matching `a#i b#i`.
pub fn prism() -> Multigraph {
    let t = Multigraph::new(["a", "b"], [("a", "b")]).expect("edge is valid");
    triple_cover(&t, &VertexSet::new([0, 1])).expect("prism is valid")
}

/// Uniform random labelled tree on `n` vertices `t0 ..`, decoded from a Prüfer sequence.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Multigraph> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("tree needs n >= 1".into()));
    }
    let labels: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    if n <= 2 {
        let edges = if n == 2 { vec![(0, 1)] } else { vec![] };
        return Multigraph::from_indices(labels, edges);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    Multigraph::from_indices(labels, prufer_decode(n, &code))
}

fn prufer_decode(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf.min(c), leaf.max(c)));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Random tree on `n` vertices plus `extra` uniformly chosen edges (parallel edges allowed).
pub fn random_connected<R: Rng + ?Sized>(n: usize, extra: usize, rng: &mut R) -> Result<Multigraph> {
    let t = random_tree(n, rng)?;
    if n < 2 {
        return Ok(t);
    }
    let mut edges = t.edges().to_vec();
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        edges.push((u.min(v), u.max(v)));
    }
    Multigraph::from_indices(t.labels().to_vec(), edges)
}

fn require_tree(t: &Multigraph) -> Result<()> {
    if t.is_tree() {
        Ok(())
    } else {
        Err(Error::NotATree)
    }
}

/// `k` copies of `t`, tree-vertex-major, with the copy edges listed copy by copy.
fn copies(t: &Multigraph, k: usize) -> (Vec<String>, Vec<(usize, usize)>) {
    let labels = t
        .labels()
        .iter()
        .flat_map(|l| (1..=k).map(move |i| format!("{l}#{i}")))
        .collect();
    let edges = (0..k)
        .flat_map(|i| t.edges().iter().map(move |&(u, v)| (u * k + i, v * k + i)))
        .collect();
    (labels, edges)
}

/// Two copies of a tree of maximum valence 3, twins joined by `3 - val` edges.
pub fn ladder(t: &Multigraph) -> Result<Multigraph> {
    require_tree(t)?;
    if let Some(v) = (0..t.vertex_count()).find(|&v| t.valence(v) > 3) {
        return Err(Error::ValenceTooHigh(t.label(v).to_string()));
    }
    let (labels, mut edges) = copies(t, 2);
    for v in 0..t.vertex_count() {
        for _ in t.valence(v)..3 {
            edges.push((2 * v, 2 * v + 1));
        }
    }
    Multigraph::from_indices(labels, edges)
}

/// Three copies of `t`; the copies of every vertex in `s` are joined in a 3-cycle.
pub fn triple_cover(t: &Multigraph, s: &VertexSet) -> Result<Multigraph> {
    triple_cover_thickened(t, s, 0)
}

/// As [`triple_cover`], with `extra` further parallel copies of every triangle edge.
pub fn triple_cover_thickened(t: &Multigraph, s: &VertexSet, extra: usize) -> Result<Multigraph> {
    require_tree(t)?;
    if t.vertex_count() < 2 {
        return Err(Error::TreeTooSmall);
    }
    if s.len() < 2 {
        return Err(Error::AttachmentSetTooSmall);
    }
    if let Some(v) = s.iter().find(|&v| v >= t.vertex_count()) {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let (labels, mut edges) = copies(t, 3);
    for v in s.iter() {
        let b = 3 * v;
        for _ in 0..=extra {
            edges.extend([(b, b + 1), (b + 1, b + 2), (b + 2, b)]);
        }
    }
    Multigraph::from_indices(labels, edges)
}

/// `k` copies of `t`; copies of each vertex of valence at most `k - 1` form a `K_k`.
pub fn k_cover(t: &Multigraph, k: usize) -> Result<Multigraph> {
    let s = (0..t.vertex_count())
        .filter(|&v| (t.valence(v) as usize) < k)
        .collect();
    k_cover_with(t, k, &s)
}

/// [`k_cover`] with an explicit attachment set, which must contain every vertex of
/// valence at most `k - 1`.
pub fn k_cover_with(t: &Multigraph, k: usize, s: &VertexSet) -> Result<Multigraph> {
    if k < 2 {
        return Err(Error::ParameterOutOfRange("k_cover needs k >= 2".into()));
    }
    require_tree(t)?;
    if t.vertex_count() < 2 {
        return Err(Error::TreeTooSmall);
    }
    if let Some(v) = (0..t.vertex_count()).find(|&v| (t.valence(v) as usize) < k && !s.contains(v)) {
        return Err(Error::AttachmentSetIncomplete(t.label(v).to_string()));
    }
    let (labels, mut edges) = copies(t, k);
    for v in s.iter() {
        let b = k * v;
        for i in 0..k {
            for j in i + 1..k {
                edges.push((b + i, b + j));
            }
        }
    }
    Multigraph::from_indices(labels, edges)
}

/// Removes edge `e1` from `h1` and `e2` from `h2`, then joins the freed endpoints
/// pairwise across. Vertices of `h1` are suffixed `#1`, those of `h2` `#2`.
pub fn two_bridge_join(h1: &Multigraph, e1: usize, h2: &Multigraph, e2: usize) -> Result<Multigraph> {
    let (a1, b1) = h1.edge(e1)?;
    let (a2, b2) = h2.edge(e2)?;
    let n1 = h1.vertex_count();
    let labels = h1
        .labels()
        .iter()
        .map(|l| format!("{l}#1"))
        .chain(h2.labels().iter().map(|l| format!("{l}#2")))
        .collect();
    let mut edges: Vec<(usize, usize)> = h1
        .edges()
        .iter()
        .enumerate()
        .filter(|&(e, _)| e != e1)
        .map(|(_, &p)| p)
        .collect();
    edges.extend(
        h2.edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| e != e2)
            .map(|(_, &(u, v))| (u + n1, v + n1)),
    );
    edges.push((a1, a2 + n1));
    edges.push((b1, b2 + n1));
    Multigraph::from_indices(labels, edges)
}

/// Two copies of `K4` minus an edge, joined by two edges between their degree-2 vertices.
pub fn two_bridge_trivalent() -> Multigraph {
    let k4 = complete(4).expect("K4");
    let cd = last_edge(&k4);
    two_bridge_join(&k4, cd, &k4, cd).expect("valid join")
}

fn last_edge(g: &Multigraph) -> usize {
    g.edge_count() - 1
}

/// Further simple, bridgeless, trivalent, exactly 2-edge-connected graphs of the same
/// shape. `index` 0 is [`two_bridge_trivalent`].
pub fn two_bridge_family(index: usize) -> Result<Multigraph> {
    let k4 = complete(4)?;
    let k33 = complete_bipartite(3, 3)?;
    let pr = prism();
    let q3 = cube();
    let (h1, h2) = match index {
        0 => (&k4, &k4),
        1 => (&pr, &pr),
        2 => (&k4, &pr),
        3 => (&k33, &k4),
        4 => (&q3, &k33),
        _ => return Err(Error::ParameterOutOfRange("family index must be at most 4".into())),
    };
    two_bridge_join(h1, last_edge(h1), h2, last_edge(h2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, SeedableRng};

    #[test]
    fn banana_shapes() {
        let b3 = banana(3).unwrap();
        assert_eq!(b3.edge_connectivity().unwrap(), 3);
        assert_eq!(b3.genus(), 2);
        let b2 = banana(2).unwrap();
        assert_eq!((b2.vertex_count(), b2.edge_count(), b2.genus()), (2, 2, 1));
        assert!(banana(0).is_err());
    }

    #[test]
    fn named_graphs() {
        let w5 = wheel(5).unwrap();
        assert_eq!(w5.valence_of("h").unwrap(), 4);
        assert_eq!(w5.vertex_connectivity(), 3);
        assert!(!w5.has_treewidth_at_most_2());
        assert!(wheel(3).is_err());

        let q3 = cube();
        assert_eq!((q3.vertex_count(), q3.edge_count(), q3.genus()), (8, 12, 5));
        assert!((0..8).all(|v| q3.valence(v) == 3));
        // bipartite by bit parity
        assert!(q3
            .edges()
            .iter()
            .all(|&(u, v)| (u.count_ones() + v.count_ones()) % 2 == 1));

        let f = frucht();
        assert_eq!((f.vertex_count(), f.edge_count()), (12, 18));
        assert!((0..12).all(|v| f.valence(v) == 3));
        assert_eq!(f.vertex_connectivity(), 3);

        let g = fig7();
        assert_eq!(g.valence_of("v2").unwrap(), 5);
        assert_eq!(
            (0..8).filter(|&v| g.valence(v) == 5).count(),
            1,
            "v2 is the only degree-5 vertex"
        );
        assert_eq!(g.edge_connectivity().unwrap(), 3);
        assert_eq!(g.vertex_connectivity(), 2);
    }

    #[test]
    fn ladder_shapes() {
        let p3 = path(3).unwrap();
        let l = ladder(&p3).unwrap();
        assert_eq!(l.vertex_count(), 6);
        assert!((0..6).all(|v| l.valence(v) == 3));
        assert_eq!(l.multiplicity(l.vertex("p1#1").unwrap(), l.vertex("p1#2").unwrap()), 2);
        assert_eq!(l.multiplicity(l.vertex("p2#1").unwrap(), l.vertex("p2#2").unwrap()), 1);
        let e = ladder(&path(2).unwrap()).unwrap();
        assert_eq!(e.vertex_count(), 4);
        assert_eq!(e.multiplicity(0, 1), 2);
        assert_eq!(e.multiplicity(2, 3), 2);
        let star = Multigraph::new(
            ["c", "1", "2", "3", "4"],
            [("c", "1"), ("c", "2"), ("c", "3"), ("c", "4")],
        )
        .unwrap();
        assert!(matches!(ladder(&star), Err(Error::ValenceTooHigh(_))));
        assert!(matches!(ladder(&cycle(3).unwrap()), Err(Error::NotATree)));
    }

    #[test]
    fn triple_cover_shapes() {
        let p = prism();
        assert_eq!((p.vertex_count(), p.edge_count()), (6, 9));
        assert_eq!(p.labels()[0], "a#1");
        let p2 = path(2).unwrap();
        assert!(matches!(
            triple_cover(&p2, &VertexSet::new([0])),
            Err(Error::AttachmentSetTooSmall)
        ));
        let single = path(1).unwrap();
        assert!(matches!(
            triple_cover(&single, &VertexSet::new([0, 0])),
            Err(Error::TreeTooSmall)
        ));
        let thick = triple_cover_thickened(&p2, &VertexSet::new([0, 1]), 1).unwrap();
        assert_eq!(thick.edge_count(), 3 + 12);
    }

    #[test]
    fn k_cover_shapes() {
        let p2 = path(2).unwrap();
        let k3 = k_cover(&p2, 3).unwrap();
        let tc = triple_cover(&p2, &VertexSet::new([0, 1])).unwrap();
        let norm = |g: &Multigraph| {
            let mut e: Vec<_> = g.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
            e.sort_unstable();
            (g.labels().to_vec(), e)
        };
        assert_eq!(norm(&k3), norm(&tc));
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let t = random_tree(rng.gen_range(2..8), &mut rng).unwrap();
            for k in 2..5 {
                let g = k_cover(&t, k).unwrap();
                assert!((0..g.vertex_count()).all(|v| g.valence(v) as usize >= k));
            }
        }
        assert!(matches!(
            k_cover_with(&p2, 3, &VertexSet::new([0])),
            Err(Error::AttachmentSetIncomplete(_))
        ));
    }

    #[test]
    fn two_bridge_shapes() {
        for i in 0..5 {
            let g = two_bridge_family(i).unwrap();
            assert!(g.is_simple());
            assert!((0..g.vertex_count()).all(|v| g.valence(v) == 3), "member {i}");
            assert!(g.bridges().is_empty());
            assert_eq!(g.edge_connectivity().unwrap(), 2);
            assert!(g.vertex_connectivity() < 3);
        }
        assert_eq!(two_bridge_family(0).unwrap(), two_bridge_trivalent());
        assert!(!two_bridge_trivalent().has_treewidth_at_most_2());
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = StdRng::seed_from_u64(0);
        for n in 1..15 {
            let t = random_tree(n, &mut rng).unwrap();
            assert_eq!(t.vertex_count(), n);
            assert!(t.is_tree());
        }
    }
}
