//! Gonality search, the `~_D` class partition of a degree-3 positive-rank
//! divisor, and the zero-three condition.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::divisor::{
    for_each_multiset, positive_rank_values, reduced_values, require_degree,
    require_three_edge_connected, through_unchecked, Divisor, EQUIVALENCE_ROOT,
};
use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexSet};

/// Lower and upper bounds on gonality available without search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GonalityBounds {
    /// `min{|V|, η}`; `1` for a single vertex.
    pub vertex_edge: usize,
    /// No K4-free reduction exists, so treewidth (and gonality) is at least 3.
    pub treewidth_at_least_3: bool,
    /// Minimum valence; only a bound for simple graphs.
    pub min_valence: Option<usize>,
    /// Positive genus rules out gonality 1.
    pub has_cycle: bool,
    /// `|V|`.
    pub upper: usize,
}

impl GonalityBounds {
    pub fn compute(g: &Multigraph) -> Self {
        let n = g.vertex_count();
        let vertex_edge = match g.edge_connectivity() {
            Ok(eta) => n.min(eta),
            Err(_) => 1,
        };
        GonalityBounds {
            vertex_edge,
            treewidth_at_least_3: !g.has_treewidth_at_most_2(),
            min_valence: g.is_simple().then(|| g.min_valence() as usize),
            has_cycle: g.genus() > 0,
            upper: n,
        }
    }

    pub fn lower(&self) -> usize {
        let mut lb = self.vertex_edge.max(1);
        if self.treewidth_at_least_3 {
            lb = lb.max(3);
        }
        if let Some(v) = self.min_valence {
            lb = lb.max(v);
        }
        if self.has_cycle {
            lb = lb.max(2);
        }
        lb.min(self.upper)
    }
}

#[derive(Clone, Debug)]
pub struct GonalityReport {
    pub gonality: usize,
    /// Graded-lex-first effective divisor of degree `gonality` with positive rank.
    pub witness: Divisor,
    pub bounds: GonalityBounds,
}

fn first_positive_rank(g: &Multigraph, d: usize) -> Option<Vec<usize>> {
    let mut candidates = Vec::new();
    for_each_multiset(g.vertex_count(), d, |c| {
        candidates.push(c.to_vec());
        true
    });
    candidates.into_par_iter().find_first(|c| {
        let d = Divisor::from_vertices(g, c.iter().copied());
        positive_rank_values(g, d.values())
    })
}

/// Smallest degree of an effective positive-rank divisor, searched upward from
/// the best lower bound. With `max_degree` set, gives up past that degree.
pub fn gonality(g: &Multigraph, max_degree: Option<usize>) -> Result<GonalityReport> {
    let bounds = GonalityBounds::compute(g);
    let lower = bounds.lower();
    let cap = max_degree.unwrap_or(bounds.upper).min(bounds.upper);
    for d in lower..=cap {
        if let Some(c) = first_positive_rank(g, d) {
            return Ok(GonalityReport {
                gonality: d,
                witness: Divisor::from_vertices(g, c),
                bounds,
            });
        }
    }
    Err(Error::SearchCapExceeded {
        cap,
        lower_bound: lower.max(cap + 1),
    })
}

/// Every effective degree-`d` divisor of positive rank, graded-lex order.
pub fn positive_rank_divisors(g: &Multigraph, d: usize) -> Vec<Divisor> {
    let mut candidates = Vec::new();
    for_each_multiset(g.vertex_count(), d, |c| {
        candidates.push(Divisor::from_vertices(g, c.iter().copied()));
        true
    });
    candidates
        .into_par_iter()
        .filter(|d| positive_rank_values(g, d.values()))
        .collect()
}

/// The classes `[v]_D` of a degree-3 positive-rank divisor.
#[derive(Clone, Debug)]
pub struct ClassPartition {
    pub divisor: Divisor,
    /// Blocks ordered by their smallest vertex.
    pub classes: Vec<VertexSet>,
    /// Block index of every vertex.
    pub class_of: Vec<usize>,
    /// `D_v` for every vertex `v`.
    pub through: Vec<Divisor>,
}

impl ClassPartition {
    /// `D_v(v)`.
    pub fn chips_at(&self, v: usize) -> i64 {
        self.through[v][v]
    }

    pub fn class(&self, v: usize) -> &VertexSet {
        &self.classes[self.class_of[v]]
    }
}

/// Partitions the vertices by the supports of the effective representatives of `d`.
pub fn class_partition(g: &Multigraph, d: &Divisor) -> Result<ClassPartition> {
    d.check(g)?;
    require_degree(d, 3)?;
    require_three_edge_connected(g)?;
    if !positive_rank_values(g, d.values()) {
        return Err(Error::NotRankOne);
    }
    let n = g.vertex_count();
    let through = (0..n)
        .into_par_iter()
        .map(|v| through_unchecked(g, d, v))
        .collect::<Result<Vec<_>>>()?;
    let supports: Vec<VertexSet> = through.iter().map(Divisor::support).collect();
    for v in 0..n {
        if supports[v].iter().any(|u| supports[u] != supports[v]) {
            return Err(Error::NotAnEquivalence(g.label(v).to_string()));
        }
    }
    let mut classes: Vec<VertexSet> = Vec::new();
    let mut class_of = vec![usize::MAX; n];
    for v in 0..n {
        if class_of[v] == usize::MAX {
            for u in supports[v].iter() {
                class_of[u] = classes.len();
            }
            classes.push(supports[v].clone());
        }
    }
    Ok(ClassPartition {
        divisor: d.clone(),
        classes,
        class_of,
        through,
    })
}

/// Edges induced among three distinct vertices, multiplicities counted.
fn induced_edges(g: &Multigraph, a: usize, b: usize, c: usize) -> u32 {
    g.multiplicity(a, b) + g.multiplicity(b, c) + g.multiplicity(a, c)
}

/// Three distinct support vertices that induce neither 0 nor 3 edges, if any.
fn zero_three_offender<'a>(g: &Multigraph, reps: impl IntoIterator<Item = &'a Divisor>) -> Option<Vec<usize>> {
    reps.into_iter().find_map(|r| {
        let s = r.support();
        if let [a, b, c] = s.as_slice() {
            let k = induced_edges(g, *a, *b, *c);
            (k != 0 && k != 3).then(|| vec![*a, *b, *c])
        } else {
            None
        }
    })
}

/// Whether every representative `(a)+(b)+(c)` of `d` with distinct vertices induces
/// 0 or 3 edges. Errors with the offending triple otherwise.
pub fn check_zero_three(g: &Multigraph, d: &Divisor) -> Result<()> {
    let reps = crate::divisor::effective_representatives(g, d)?;
    match zero_three_offender(g, &reps) {
        None => Ok(()),
        Some(t) => Err(Error::ZeroThreeViolated(
            t.into_iter().map(|v| g.label(v).to_string()).collect(),
        )),
    }
}

#[derive(Clone, Debug)]
pub struct ZeroThree {
    pub holds: bool,
    /// First qualifying degree-3 divisor in graded-lex order.
    pub witness: Option<Divisor>,
}

/// Zero-three condition for a gonality-3 graph.
pub fn zero_three_condition(g: &Multigraph) -> Result<ZeroThree> {
    match gonality(g, Some(3)) {
        Ok(r) if r.gonality == 3 => {}
        Ok(r) => return Err(Error::NotGonalityThree(format!("gonality {}", r.gonality))),
        Err(Error::SearchCapExceeded { .. }) => {
            return Err(Error::NotGonalityThree("gonality > 3".into()))
        }
        Err(e) => return Err(e),
    }
    let winners = positive_rank_divisors(g, 3);
    let keys: Vec<Vec<i64>> = winners
        .par_iter()
        .map(|d| reduced_values(g, d.values(), EQUIVALENCE_ROOT))
        .collect();
    let mut classes: HashMap<&[i64], Vec<usize>> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        classes.entry(k.as_slice()).or_default().push(i);
    }
    let mut verdict: HashMap<&[i64], bool> = HashMap::new();
    for (i, d) in winners.iter().enumerate() {
        let key = keys[i].as_slice();
        let ok = *verdict.entry(key).or_insert_with(|| {
            zero_three_offender(g, classes[key].iter().map(|&j| &winners[j])).is_none()
        });
        if ok {
            return Ok(ZeroThree {
                holds: true,
                witness: Some(d.clone()),
            });
        }
    }
    Ok(ZeroThree {
        holds: false,
        witness: None,
    })
}

/// Every effective representative of `d` has support of size 1 or 3.
pub fn support_size_check(g: &Multigraph, d: &Divisor) -> Result<bool> {
    d.check(g)?;
    if !g.is_simple() {
        return Err(Error::MultigraphInput);
    }
    if g.vertex_connectivity() < 3 {
        return Err(Error::NotThreeVertexConnected);
    }
    require_degree(d, 3)?;
    if !positive_rank_values(g, d.values()) {
        return Err(Error::NotRankOne);
    }
    let reps = crate::divisor::effective_representatives(g, d)?;
    Ok(reps.iter().all(|r| matches!(r.support().len(), 1 | 3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;

    fn div(g: &Multigraph, chips: &[(&str, i64)]) -> Divisor {
        Divisor::from_labels(g, chips).unwrap()
    }

    #[test]
    fn gonality_of_named_graphs() {
        let w5 = wheel(5).unwrap();
        let r = gonality(&w5, None).unwrap();
        assert_eq!(r.gonality, 3);
        assert_eq!(r.witness, div(&w5, &[("h", 1), ("w1", 1), ("w3", 1)]));
        assert_eq!(gonality(&cube(), None).unwrap().gonality, 4);
        assert_eq!(gonality(&complete(4).unwrap(), None).unwrap().gonality, 3);
        assert_eq!(gonality(&banana(4).unwrap(), None).unwrap().gonality, 2);
        assert_eq!(gonality(&path(1).unwrap(), None).unwrap().gonality, 1);
        assert_eq!(gonality(&path(4).unwrap(), None).unwrap().gonality, 1);
    }

    #[test]
    fn capped_search() {
        assert!(matches!(
            gonality(&cube(), Some(3)),
            Err(Error::SearchCapExceeded { cap: 3, lower_bound: 4 })
        ));
    }

    #[test]
    fn bounds_record() {
        let b = GonalityBounds::compute(&cube());
        assert_eq!(b.vertex_edge, 3);
        assert!(b.treewidth_at_least_3);
        assert_eq!(b.min_valence, Some(3));
        assert_eq!(b.upper, 8);
        assert_eq!(b.lower(), 3);
        let b3 = GonalityBounds::compute(&banana(3).unwrap());
        assert_eq!(b3.min_valence, None);
        assert_eq!(b3.lower(), 2);
    }

    #[test]
    fn positive_rank_lists() {
        let b3 = banana(3).unwrap();
        assert!(positive_rank_divisors(&b3, 2).contains(&div(&b3, &[("x", 1), ("y", 1)])));
        let w5 = wheel(5).unwrap();
        let list = positive_rank_divisors(&w5, 3);
        assert!(list.contains(&div(&w5, &[("w1", 1), ("h", 1), ("w3", 1)])));
        assert!(!list.contains(&div(&w5, &[("w1", 1), ("w2", 1), ("h", 1)])));
    }

    #[test]
    fn partitions() {
        let p = prism();
        let d = div(&p, &[("a#1", 1), ("a#2", 1), ("a#3", 1)]);
        let cp = class_partition(&p, &d).unwrap();
        assert_eq!(cp.classes, vec![VertexSet::new([0, 1, 2]), VertexSet::new([3, 4, 5])]);
        assert!((0..6).all(|v| cp.chips_at(v) == 1));

        let k4 = complete(4).unwrap();
        let cp = class_partition(&k4, &div(&k4, &[("a", 1), ("b", 1), ("c", 1)])).unwrap();
        assert_eq!(cp.classes, vec![VertexSet::new([0, 1, 2]), VertexSet::new([3])]);
        assert_eq!(cp.chips_at(3), 3);
    }

    #[test]
    fn zero_three_examples() {
        assert!(!zero_three_condition(&wheel(5).unwrap()).unwrap().holds);
        assert!(zero_three_condition(&fig7()).unwrap().holds);
        let k4 = complete(4).unwrap();
        let z = zero_three_condition(&k4).unwrap();
        assert!(z.holds);
        // graded-lex first is 3(a) ~ (b)+(c)+(d); the triangle class qualifies as well
        assert_eq!(z.witness.unwrap(), div(&k4, &[("a", 3)]));
        assert!(check_zero_three(&k4, &div(&k4, &[("a", 1), ("b", 1), ("c", 1)])).is_ok());
        assert!(matches!(
            zero_three_condition(&cube()),
            Err(Error::NotGonalityThree(_))
        ));
        assert!(matches!(
            zero_three_condition(&banana(3).unwrap()),
            Err(Error::NotGonalityThree(_))
        ));
    }

    #[test]
    fn support_sizes() {
        let p = prism();
        assert!(support_size_check(&p, &div(&p, &[("a#1", 1), ("a#2", 1), ("a#3", 1)])).unwrap());
        let k4 = complete(4).unwrap();
        assert!(support_size_check(&k4, &div(&k4, &[("a", 1), ("b", 1), ("c", 1)])).unwrap());
        let g = fig7();
        assert!(matches!(
            support_size_check(&g, &div(&g, &[("v1", 1), ("v2", 2)])),
            Err(Error::NotThreeVertexConnected)
        ));
    }
}
