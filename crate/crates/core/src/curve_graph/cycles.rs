//! Simple cycles of a dual graph.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::DualGraph;
use crate::ids::{EdgeId, VertexId};

/// A simple cycle: `vertices[i]` and `vertices[i + 1]` (cyclically) are
/// joined by `edges[i]`. A loop is a cycle of length one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_set(&self) -> BTreeSet<&EdgeId> {
        self.edges.iter().collect()
    }
}

/// Every simple cycle, each reported once. Each cycle starts at its smallest
/// vertex, and of its two orientations the one whose first edge is smaller
/// is kept. Parallel edges give cycles of length two.
pub fn find_cycles(g: &DualGraph) -> Vec<Cycle> {
    let mut out: Vec<Cycle> = g
        .loops()
        .map(|e| Cycle {
            vertices: vec![g.ends(e).unwrap()[0].clone()],
            edges: vec![e.clone()],
        })
        .collect();

    let adjacency = |v: &VertexId| -> Vec<(EdgeId, VertexId)> {
        g.edges()
            .filter(|(_, [a, b])| a != b && (a == v || b == v))
            .map(|(e, [a, b])| (e.clone(), if a == v { b.clone() } else { a.clone() }))
            .collect()
    };

    for (start, _) in g.vertices() {
        let mut path_vertices = vec![start.clone()];
        let mut path_edges: Vec<EdgeId> = Vec::new();
        dfs(
            start,
            &adjacency,
            &mut path_vertices,
            &mut path_edges,
            &mut out,
        );
    }
    out
}

fn dfs(
    start: &VertexId,
    adjacency: &dyn Fn(&VertexId) -> Vec<(EdgeId, VertexId)>,
    path_vertices: &mut Vec<VertexId>,
    path_edges: &mut Vec<EdgeId>,
    out: &mut Vec<Cycle>,
) {
    let here = path_vertices.last().unwrap().clone();
    for (e, w) in adjacency(&here) {
        if path_edges.contains(&e) {
            continue;
        }
        if &w == start {
            if path_edges.first().is_some_and(|first| first < &e) {
                let mut edges = path_edges.clone();
                edges.push(e);
                out.push(Cycle {
                    vertices: path_vertices.clone(),
                    edges,
                });
            }
            continue;
        }
        // Only vertices larger than the start, so each cycle is rooted once.
        if &w < start || path_vertices.contains(&w) {
            continue;
        }
        path_vertices.push(w);
        path_edges.push(e);
        dfs(start, adjacency, path_vertices, path_edges, out);
        path_vertices.pop();
        path_edges.pop();
    }
}
