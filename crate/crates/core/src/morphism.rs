//! Graph morphisms, harmonicity and degree, pullbacks, and the passage between
//! degree-3 positive-rank divisors and degree-3 harmonic morphisms onto trees.

use std::collections::HashMap;

use crate::divisor::{has_positive_rank, require_degree, require_three_edge_connected, Divisor};
use crate::error::{Error, Result};
use crate::gonality::{class_partition, ClassPartition};
use crate::graph::Multigraph;

/// Where a source edge goes: a target edge, or the common image of its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeImage {
    Edge(usize),
    Vertex(usize),
}

#[derive(Clone, Debug)]
pub struct GraphMorphism {
    source: Multigraph,
    target: Multigraph,
    vertex_map: Vec<usize>,
    edge_map: Vec<EdgeImage>,
}

impl GraphMorphism {
    /// Checks that collapsed edges go to the common endpoint image and every
    /// other edge goes to a target edge joining the endpoint images.
    pub fn new(
        source: Multigraph,
        target: Multigraph,
        vertex_map: Vec<usize>,
        edge_map: Vec<EdgeImage>,
    ) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() {
            return Err(Error::MalformedMorphism(format!(
                "vertex map has {} entries, source has {} vertices",
                vertex_map.len(),
                source.vertex_count()
            )));
        }
        if edge_map.len() != source.edge_count() {
            return Err(Error::MalformedMorphism(format!(
                "edge map has {} entries, source has {} edges",
                edge_map.len(),
                source.edge_count()
            )));
        }
        if let Some(&w) = vertex_map.iter().find(|&&w| w >= target.vertex_count()) {
            return Err(Error::MalformedMorphism(format!("vertex image {w} out of range")));
        }
        for (e, (&(u, v), img)) in source.edges().iter().zip(&edge_map).enumerate() {
            let (fu, fv) = (vertex_map[u], vertex_map[v]);
            match *img {
                EdgeImage::Vertex(w) if w >= target.vertex_count() => {
                    return Err(Error::MalformedMorphism(format!("vertex image {w} out of range")))
                }
                EdgeImage::Edge(f) if f >= target.edge_count() => {
                    return Err(Error::MalformedMorphism(format!("edge image {f} out of range")))
                }
                EdgeImage::Vertex(w) => {
                    if fu != fv {
                        return Err(Error::EndpointMismatch(e));
                    }
                    if w != fu {
                        return Err(Error::EdgeCollapseViolation(e));
                    }
                }
                EdgeImage::Edge(f) => {
                    if fu == fv {
                        return Err(Error::EdgeCollapseViolation(e));
                    }
                    let (a, b) = target.edges()[f];
                    if !((a, b) == (fu, fv) || (b, a) == (fu, fv)) {
                        return Err(Error::EndpointMismatch(e));
                    }
                }
            }
        }
        Ok(GraphMorphism {
            source,
            target,
            vertex_map,
            edge_map,
        })
    }

    /// Extends a vertex map to edges. Parallel source edges between two fibres
    /// are dealt round-robin onto the parallel target edges, in index order.
    pub fn from_vertex_map(source: Multigraph, target: Multigraph, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() {
            return Err(Error::MalformedMorphism(format!(
                "vertex map has {} entries, source has {} vertices",
                vertex_map.len(),
                source.vertex_count()
            )));
        }
        if let Some(&w) = vertex_map.iter().find(|&&w| w >= target.vertex_count()) {
            return Err(Error::MalformedMorphism(format!("vertex image {w} out of range")));
        }
        let mut parallel: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (f, &(a, b)) in target.edges().iter().enumerate() {
            parallel.entry((a.min(b), a.max(b))).or_default().push(f);
        }
        let mut used: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edge_map = Vec::with_capacity(source.edge_count());
        for (e, &(u, v)) in source.edges().iter().enumerate() {
            let (fu, fv) = (vertex_map[u], vertex_map[v]);
            if fu == fv {
                edge_map.push(EdgeImage::Vertex(fu));
                continue;
            }
            let key = (fu.min(fv), fu.max(fv));
            let Some(list) = parallel.get(&key) else {
                return Err(Error::EndpointMismatch(e));
            };
            let k = used.entry(key).or_insert(0);
            edge_map.push(EdgeImage::Edge(list[*k % list.len()]));
            *k += 1;
        }
        GraphMorphism::new(source, target, vertex_map, edge_map)
    }

    pub fn identity(g: &Multigraph) -> Self {
        GraphMorphism {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.edge_count()).map(EdgeImage::Edge).collect(),
        }
    }

    pub fn source(&self) -> &Multigraph {
        &self.source
    }

    pub fn target(&self) -> &Multigraph {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[EdgeImage] {
        &self.edge_map
    }

    pub fn image(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    fn target_edges_at(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        self.target
            .edges()
            .iter()
            .enumerate()
            .filter(move |(_, &(a, b))| a == w || b == w)
            .map(|(f, _)| f)
    }

    /// Counts per incident target edge at `φ(v)`, indexed like `target_edges_at`.
    fn local_counts(&self, v: usize) -> Vec<(usize, u32)> {
        let mut counts: Vec<(usize, u32)> = self.target_edges_at(self.vertex_map[v]).map(|f| (f, 0)).collect();
        for (e, &(a, b)) in self.source.edges().iter().enumerate() {
            if a != v && b != v {
                continue;
            }
            if let EdgeImage::Edge(f) = self.edge_map[e] {
                if let Some(c) = counts.iter_mut().find(|(g, _)| *g == f) {
                    c.1 += 1;
                }
            }
        }
        counts
    }

    /// Number of edges at `v` sent to `e′`, which must meet `φ(v)`.
    pub fn multiplicity(&self, v: usize, target_edge: usize) -> Result<u32> {
        if v >= self.source.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{v}")));
        }
        if target_edge >= self.target.edge_count() {
            return Err(Error::UnknownEdge(target_edge));
        }
        self.local_counts(v)
            .into_iter()
            .find(|&(f, _)| f == target_edge)
            .map(|(_, c)| c)
            .ok_or_else(|| Error::EdgeNotIncident {
                vertex: self.source.label(v).to_string(),
                edge: target_edge,
            })
    }

    /// `m_φ(v)` for a harmonic vertex; `0` when `φ(v)` is isolated in the target.
    pub fn local_multiplicity(&self, v: usize) -> u32 {
        self.local_counts(v).first().map_or(0, |&(_, c)| c)
    }

    fn first_non_harmonic(&self) -> Option<usize> {
        (0..self.source.vertex_count()).find(|&v| {
            let counts = self.local_counts(v);
            counts.iter().any(|&(_, c)| c != counts[0].1)
        })
    }

    pub fn is_harmonic(&self) -> bool {
        self.first_non_harmonic().is_none()
    }

    /// Harmonic with every `m_φ(v) > 0`. A map onto a single vertex counts as non-degenerate.
    pub fn is_nondegenerate(&self) -> bool {
        self.first_degenerate().is_none() && self.is_harmonic()
    }

    fn first_degenerate(&self) -> Option<usize> {
        if self.target.vertex_count() == 1 {
            return None;
        }
        (0..self.source.vertex_count()).find(|&v| self.local_multiplicity(v) == 0)
    }

    /// `|φ⁻¹(e′)|`, checked to be the same for every target edge.
    pub fn degree(&self) -> Result<usize> {
        if self.target.edge_count() == 0 {
            return Err(Error::TargetEdgeless);
        }
        if let Some(v) = self.first_non_harmonic() {
            return Err(Error::NotHarmonic(self.source.label(v).to_string()));
        }
        let mut sizes = vec![0usize; self.target.edge_count()];
        for img in &self.edge_map {
            if let EdgeImage::Edge(f) = *img {
                sizes[f] += 1;
            }
        }
        if sizes.iter().any(|&s| s != sizes[0]) {
            return Err(Error::InconsistentDegree);
        }
        Ok(sizes[0])
    }

    /// `φ*(D′)(v) = m_φ(v) · D′(φ(v))`.
    pub fn pullback(&self, d: &Divisor) -> Result<Divisor> {
        d.check(&self.target)?;
        if let Some(v) = self.first_non_harmonic() {
            return Err(Error::NotHarmonic(self.source.label(v).to_string()));
        }
        let values = (0..self.source.vertex_count())
            .map(|v| self.local_multiplicity(v) as i64 * d[self.vertex_map[v]])
            .collect();
        Divisor::from_values(&self.source, values)
    }
}

/// Projection of a cover built copy-major over `tree` (`k` consecutive copies
/// of each tree vertex) back onto the tree.
pub fn cover_projection(cover: &Multigraph, tree: &Multigraph, k: usize) -> Result<GraphMorphism> {
    if k == 0 || cover.vertex_count() != tree.vertex_count() * k {
        return Err(Error::MalformedMorphism(format!(
            "{} vertices is not {k} copies of {}",
            cover.vertex_count(),
            tree.vertex_count()
        )));
    }
    let vertex_map = (0..cover.vertex_count()).map(|v| v / k).collect();
    GraphMorphism::from_vertex_map(cover.clone(), tree.clone(), vertex_map)
}

/// The quotient `G/~_D` together with the projection onto it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub tree: Multigraph,
    pub morphism: GraphMorphism,
    pub partition: ClassPartition,
}

/// Collapses each class of a degree-3 positive-rank divisor to a vertex and
/// each triple of edges between adjacent classes to one edge. The expected
/// properties (tree, harmonic, non-degenerate, degree 3, edge counts) are
/// re-checked and reported as internal errors if they fail.
pub fn quotient_from_divisor(g: &Multigraph, d: &Divisor) -> Result<Quotient> {
    d.check(g)?;
    require_three_edge_connected(g)?;
    if g.vertex_count() <= 3 {
        return Err(Error::TooFewVertices(3));
    }
    require_degree(d, 3)?;
    let partition = class_partition(g, d)?;
    let class_of = &partition.class_of;

    let labels: Vec<String> = partition
        .classes
        .iter()
        .map(|c| g.label(c.as_slice()[0]).to_string())
        .collect();
    let mut pair_edge: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pair_count: HashMap<(usize, usize), usize> = HashMap::new();
    let mut tree_edges = Vec::new();
    let mut edge_map = Vec::with_capacity(g.edge_count());
    for &(u, v) in g.edges() {
        let (cu, cv) = (class_of[u], class_of[v]);
        if cu == cv {
            edge_map.push(EdgeImage::Vertex(cu));
            continue;
        }
        let key = (cu.min(cv), cu.max(cv));
        let f = *pair_edge.entry(key).or_insert_with(|| {
            tree_edges.push(key);
            tree_edges.len() - 1
        });
        *pair_count.entry(key).or_insert(0) += 1;
        edge_map.push(EdgeImage::Edge(f));
    }
    let tree = Multigraph::from_indices(labels, tree_edges)?;
    if !tree.is_tree() {
        return Err(Error::QuotientNotTree);
    }

    for (&(a, b), &count) in &pair_count {
        if count != 3 {
            return Err(Error::EdgeCountViolation(format!(
                "{} edges between classes of `{}` and `{}`",
                count,
                tree.label(a),
                tree.label(b)
            )));
        }
    }
    for u in 0..g.vertex_count() {
        let mut toward: HashMap<usize, i64> = HashMap::new();
        for &(w, m) in g.neighbors(u) {
            if class_of[w] != class_of[u] {
                *toward.entry(class_of[w]).or_insert(0) += m as i64;
            }
        }
        if let Some((&c, &k)) = toward.iter().find(|(_, &k)| k != partition.chips_at(u)) {
            return Err(Error::EdgeCountViolation(format!(
                "`{}` has {} edges toward the class of `{}`, expected {}",
                g.label(u),
                k,
                tree.label(c),
                partition.chips_at(u)
            )));
        }
    }

    let morphism = GraphMorphism::new(g.clone(), tree.clone(), class_of.clone(), edge_map)?;
    if let Some(v) = morphism.first_non_harmonic() {
        return Err(Error::NotHarmonic(g.label(v).to_string()));
    }
    if let Some(v) = morphism.first_degenerate() {
        return Err(Error::Degenerate(g.label(v).to_string()));
    }
    let deg = morphism.degree()?;
    if deg != 3 {
        return Err(Error::EdgeCountViolation(format!("quotient map has degree {deg}")));
    }
    Ok(Quotient {
        tree,
        morphism,
        partition,
    })
}

/// `φ*((x₀))` for a non-degenerate harmonic morphism onto a tree, certified to
/// have positive rank.
pub fn divisor_from_morphism(phi: &GraphMorphism, x0: usize) -> Result<Divisor> {
    if !phi.target.is_tree() {
        return Err(Error::TargetNotTree);
    }
    if x0 >= phi.target.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{x0}")));
    }
    phi.degree()?;
    if let Some(v) = phi.first_degenerate() {
        return Err(Error::Degenerate(phi.source.label(v).to_string()));
    }
    let point = Divisor::from_vertices(&phi.target, [x0]);
    let d = phi.pullback(&point)?;
    if !has_positive_rank(&phi.source, &d)? {
        return Err(Error::RankCertificateFailed);
    }
    Ok(d)
}
