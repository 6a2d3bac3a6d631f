//! JSON and DOT formats for graphs, divisors, morphisms and automorphisms.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::automorphism::Automorphism;
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexSet};
use crate::morphism::{EdgeImage, GraphMorphism};

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

pub fn graph_from_json(text: &str) -> Result<Multigraph> {
    let raw: GraphJson = serde_json::from_str(text)?;
    Multigraph::new(raw.vertices, raw.edges)
}

pub fn graph_to_value(g: &Multigraph) -> Value {
    let raw = GraphJson {
        vertices: g.labels().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|&(u, v)| (g.label(u).to_string(), g.label(v).to_string()))
            .collect(),
    };
    serde_json::to_value(raw).expect("graph serialises")
}

pub fn graph_to_json(g: &Multigraph) -> String {
    graph_to_value(g).to_string()
}

/// Reads `{"label": chips, ..}`; omitted vertices carry no chips.
pub fn divisor_from_json(g: &Multigraph, text: &str) -> Result<Divisor> {
    let raw: HashMap<String, i64> = serde_json::from_str(text)?;
    let mut values = vec![0i64; g.vertex_count()];
    for (label, chips) in raw {
        values[g.vertex(&label)?] = chips;
    }
    Divisor::from_values(g, values)
}

/// Non-zero entries in vertex order.
pub fn divisor_to_value(g: &Multigraph, d: &Divisor) -> Value {
    let map: Map<String, Value> = d
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(v, &c)| (g.label(v).to_string(), json!(c)))
        .collect();
    Value::Object(map)
}

pub fn vertex_set_to_value(g: &Multigraph, s: &VertexSet) -> Value {
    Value::Array(s.iter().map(|v| json!(g.label(v))).collect())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EdgeImageJson {
    Edge(usize),
    Vertex { vertex: String },
}

#[derive(Deserialize)]
struct MorphismJson {
    vertex_map: HashMap<String, String>,
    edge_map: Vec<EdgeImageJson>,
}

pub fn morphism_from_json(source: &Multigraph, target: &Multigraph, text: &str) -> Result<GraphMorphism> {
    let raw: MorphismJson = serde_json::from_str(text)?;
    let mut vertex_map = vec![usize::MAX; source.vertex_count()];
    for (s, t) in &raw.vertex_map {
        vertex_map[source.vertex(s)?] = target.vertex(t)?;
    }
    if let Some(v) = vertex_map.iter().position(|&w| w == usize::MAX) {
        return Err(Error::MalformedMorphism(format!(
            "vertex `{}` has no image",
            source.label(v)
        )));
    }
    let edge_map = raw
        .edge_map
        .into_iter()
        .map(|img| match img {
            EdgeImageJson::Edge(f) => Ok(EdgeImage::Edge(f)),
            EdgeImageJson::Vertex { vertex } => Ok(EdgeImage::Vertex(target.vertex(&vertex)?)),
        })
        .collect::<Result<Vec<_>>>()?;
    GraphMorphism::new(source.clone(), target.clone(), vertex_map, edge_map)
}

pub fn morphism_to_value(phi: &GraphMorphism) -> Value {
    let (s, t) = (phi.source(), phi.target());
    let vertex_map: Map<String, Value> = phi
        .vertex_map()
        .iter()
        .enumerate()
        .map(|(v, &w)| (s.label(v).to_string(), json!(t.label(w))))
        .collect();
    let edge_map: Vec<Value> = phi
        .edge_map()
        .iter()
        .map(|img| match *img {
            EdgeImage::Edge(f) => json!(f),
            EdgeImage::Vertex(w) => json!({ "vertex": t.label(w) }),
        })
        .collect();
    json!({ "vertex_map": vertex_map, "edge_map": edge_map })
}

#[derive(Deserialize)]
struct AutomorphismJson {
    map: HashMap<String, String>,
}

pub fn automorphism_from_json(g: &Multigraph, text: &str) -> Result<Automorphism> {
    let raw: AutomorphismJson = serde_json::from_str(text)?;
    let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
    for (a, b) in &raw.map {
        perm[g.vertex(a)?] = g.vertex(b)?;
    }
    Automorphism::new(g, perm)
}

pub fn automorphism_to_value(g: &Multigraph, s: &Automorphism) -> Value {
    let map: Map<String, Value> = s
        .perm()
        .iter()
        .enumerate()
        .map(|(v, &w)| (g.label(v).to_string(), json!(g.label(w))))
        .collect();
    json!({ "map": map })
}

/// Undirected DOT: vertices in declaration order, then one line per edge.
pub fn to_dot(g: &Multigraph) -> String {
    let mut out = String::from("graph G {\n");
    for l in g.labels() {
        let _ = writeln!(out, "  {l:?};");
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  {:?} -- {:?};", g.label(u), g.label(v));
    }
    out.push_str("}\n");
    out
}
