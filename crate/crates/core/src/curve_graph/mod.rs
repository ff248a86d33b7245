//! Decorated dual graphs of nodal curves.
//!
//! A [`DualGraph`] has one vertex per irreducible component (decorated with
//! its geometric genus), one edge per node and one leg per marked point. An
//! edge whose two ends coincide is an internal node of its component.
//!
//! The arithmetic genus is `Σ g_v + |E| − |V| + 1`. Stability counts loops
//! twice toward the valence of their vertex, since an internal node puts two
//! special points on the normalization of the component.

mod contraction;
mod cycles;
mod iso;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::{EdgeId, LegId, PointLabel, VertexId};

pub(crate) use contraction::Contractor;
pub use contraction::{contract_unstable, Contraction, ContractionStep, StepKind, VertexImage};
pub use cycles::{find_cycles, Cycle};
pub use iso::{are_isomorphic, isomorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("{element} references unknown vertex `{vertex}`")]
    UnknownVertex { element: String, vertex: VertexId },
    #[error("unknown edge `{0}`")]
    UnknownEdge(EdgeId),
    #[error("unknown leg `{0}`")]
    UnknownLeg(LegId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("cutting the requested edges disconnects the graph")]
    Disconnects,
    #[error("leg id `{0}` is already in use")]
    LegIdCollision(LegId),
    #[error("contraction would remove every component")]
    EmptyResult,
    #[error("vertex `{0}` cannot be contracted")]
    NotContractible(VertexId),
}

impl GraphError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::Empty => "empty_graph",
            GraphError::DuplicateId(_) => "duplicate_id",
            GraphError::UnknownVertex { .. } => "unknown_vertex",
            GraphError::UnknownEdge(_) => "unknown_edge",
            GraphError::UnknownLeg(_) => "unknown_leg",
            GraphError::Disconnected => "disconnected",
            GraphError::Disconnects => "disconnects",
            GraphError::LegIdCollision(_) => "leg_id_collision",
            GraphError::EmptyResult => "empty_result",
            GraphError::NotContractible(_) => "not_contractible",
        }
    }
}

/// Raw, unchecked graph data. Used while a graph is being rewired.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct GraphParts {
    pub vertices: BTreeMap<VertexId, u32>,
    pub edges: BTreeMap<EdgeId, [VertexId; 2]>,
    pub legs: BTreeMap<LegId, VertexId>,
}

impl GraphParts {
    pub fn is_loop(&self, e: &EdgeId) -> bool {
        self.edges.get(e).is_some_and(|[a, b]| a == b)
    }

    pub fn incident_edges(&self, v: &VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, [a, b])| a == v || b == v)
            .map(|(e, _)| e.clone())
            .collect()
    }

    pub fn valence(&self, v: &VertexId) -> usize {
        self.edges
            .values()
            .map(|[a, b]| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn legs_at(&self, v: &VertexId) -> Vec<LegId> {
        self.legs
            .iter()
            .filter(|(_, w)| *w == v)
            .map(|(l, _)| l.clone())
            .collect()
    }

    pub fn has_loop_at(&self, v: &VertexId) -> bool {
        self.edges.values().any(|[a, b]| a == v && b == v)
    }

    pub fn half_end_labels(&self, e: &EdgeId) -> Option<[(VertexId, PointLabel); 2]> {
        self.edges.get(e).map(|ends| half_end_labels_for(e, ends))
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices.keys().next() else {
            return true;
        };
        let mut adjacency: BTreeMap<&VertexId, Vec<&VertexId>> = BTreeMap::new();
        for [a, b] in self.edges.values() {
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in adjacency.get(v).into_iter().flatten() {
                if seen.insert(*w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    pub fn all_names(&self) -> BTreeSet<String> {
        self.vertices
            .keys()
            .map(|v| v.as_str().to_owned())
            .chain(self.edges.keys().map(|e| e.as_str().to_owned()))
            .chain(self.legs.keys().map(|l| l.as_str().to_owned()))
            .collect()
    }

    pub fn check(self) -> Result<DualGraph, GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        for (e, ends) in &self.edges {
            for v in ends {
                if !self.vertices.contains_key(v) {
                    return Err(GraphError::UnknownVertex {
                        element: format!("edge `{e}`"),
                        vertex: v.clone(),
                    });
                }
            }
        }
        for (l, v) in &self.legs {
            if !self.vertices.contains_key(v) {
                return Err(GraphError::UnknownVertex {
                    element: format!("leg `{l}`"),
                    vertex: v.clone(),
                });
            }
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(DualGraph { parts: self })
    }
}

/// Names of the two branches of a node, as points on the normalization.
///
/// A node joining two distinct components is named by its edge id on both
/// sides (the two names live on different components). The two branches of
/// an internal node `e` are `e.1` and `e.2`.
pub fn half_end_labels_for(e: &EdgeId, ends: &[VertexId; 2]) -> [(VertexId, PointLabel); 2] {
    if ends[0] == ends[1] {
        [
            (ends[0].clone(), PointLabel::new(format!("{e}.1"))),
            (ends[1].clone(), PointLabel::new(format!("{e}.2"))),
        ]
    } else {
        [
            (ends[0].clone(), PointLabel::from(e)),
            (ends[1].clone(), PointLabel::from(e)),
        ]
    }
}

/// Dual graph of a connected nodal curve with marked points.
/// The two legs left by cutting each node.
pub type BranchLegs = BTreeMap<EdgeId, (LegId, LegId)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDualGraph", into = "RawDualGraph")]
pub struct DualGraph {
    parts: GraphParts,
}

impl DualGraph {
    pub fn new<V, E, L>(vertices: V, edges: E, legs: L) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = (VertexId, u32)>,
        E: IntoIterator<Item = (EdgeId, [VertexId; 2])>,
        L: IntoIterator<Item = (LegId, VertexId)>,
    {
        let mut parts = GraphParts::default();
        for (v, g) in vertices {
            if parts.vertices.insert(v.clone(), g).is_some() {
                return Err(GraphError::DuplicateId(v.to_string()));
            }
        }
        for (e, ends) in edges {
            if parts.edges.insert(e.clone(), ends).is_some() {
                return Err(GraphError::DuplicateId(e.to_string()));
            }
        }
        for (l, v) in legs {
            if parts.legs.insert(l.clone(), v).is_some() {
                return Err(GraphError::DuplicateId(l.to_string()));
            }
        }
        parts.check()
    }

    /// One component of the given genus, no nodes, no marked points.
    pub fn smooth(id: &str, genus: u32) -> Self {
        DualGraph {
            parts: GraphParts {
                vertices: BTreeMap::from([(VertexId::from(id), genus)]),
                ..GraphParts::default()
            },
        }
    }

    pub(crate) fn parts(&self) -> &GraphParts {
        &self.parts
    }

    pub(crate) fn into_parts(self) -> GraphParts {
        self.parts
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&VertexId, u32)> {
        self.parts.vertices.iter().map(|(v, g)| (v, *g))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, &[VertexId; 2])> {
        self.parts.edges.iter()
    }

    pub fn legs(&self) -> impl Iterator<Item = (&LegId, &VertexId)> {
        self.parts.legs.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.parts.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.parts.edges.len()
    }

    pub fn leg_count(&self) -> usize {
        self.parts.legs.len()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.parts.vertices.contains_key(v)
    }

    pub fn contains_edge(&self, e: &EdgeId) -> bool {
        self.parts.edges.contains_key(e)
    }

    pub fn genus_of(&self, v: &VertexId) -> Option<u32> {
        self.parts.vertices.get(v).copied()
    }

    pub fn ends(&self, e: &EdgeId) -> Option<&[VertexId; 2]> {
        self.parts.edges.get(e)
    }

    pub fn leg_vertex(&self, l: &LegId) -> Option<&VertexId> {
        self.parts.legs.get(l)
    }

    pub fn is_loop(&self, e: &EdgeId) -> bool {
        self.parts.is_loop(e)
    }

    pub fn loops(&self) -> impl Iterator<Item = &EdgeId> {
        self.parts
            .edges
            .iter()
            .filter(|(_, [a, b])| a == b)
            .map(|(e, _)| e)
    }

    pub fn incident_edges(&self, v: &VertexId) -> Vec<EdgeId> {
        self.parts.incident_edges(v)
    }

    /// Number of edge ends at `v`; a loop contributes two.
    pub fn valence(&self, v: &VertexId) -> usize {
        self.parts.valence(v)
    }

    pub fn legs_at(&self, v: &VertexId) -> Vec<LegId> {
        self.parts.legs_at(v)
    }

    /// Nodes plus marked points on the normalization of `v`.
    pub fn special_points(&self, v: &VertexId) -> usize {
        self.valence(v) + self.legs_at(v).len()
    }

    pub fn half_end_labels(&self, e: &EdgeId) -> Option<[(VertexId, PointLabel); 2]> {
        self.parts.half_end_labels(e)
    }

    /// `Σ g_v + |E| − |V| + 1`.
    pub fn arithmetic_genus(&self) -> u32 {
        let geometric: i64 = self.parts.vertices.values().map(|g| i64::from(*g)).sum();
        let genus = geometric + self.edge_count() as i64 - self.vertex_count() as i64 + 1;
        u32::try_from(genus).expect("connected graphs have non-negative genus")
    }

    /// Stability of the pointed curve: every component has `2g − 2 + n > 0`
    /// special points, and so does the whole curve.
    pub fn is_stable(&self) -> bool {
        let total = 2 * i64::from(self.arithmetic_genus()) - 2 + self.leg_count() as i64;
        total > 0
            && self
                .parts
                .vertices
                .iter()
                .all(|(v, g)| 2 * i64::from(*g) - 2 + self.special_points(v) as i64 > 0)
    }

    /// Cuts every edge in `at`; the two branches of each become new legs
    /// `e.1` (at the first end) and `e.2` (at the second end).
    pub fn normalize_at(
        &self,
        at: &BTreeSet<EdgeId>,
    ) -> Result<(DualGraph, BranchLegs), GraphError> {
        let mut parts = self.parts.clone();
        let mut branch_legs = BTreeMap::new();
        for e in at {
            let [a, b] = parts
                .edges
                .remove(e)
                .ok_or_else(|| GraphError::UnknownEdge(e.clone()))?;
            let l1 = LegId::new(format!("{e}.1"));
            let l2 = LegId::new(format!("{e}.2"));
            for (l, v) in [(&l1, a), (&l2, b)] {
                if parts.legs.contains_key(l) || self.parts.edges.contains_key(l.as_str()) {
                    return Err(GraphError::LegIdCollision(l.clone()));
                }
                parts.legs.insert(l.clone(), v);
            }
            branch_legs.insert(e.clone(), (l1, l2));
        }
        if !parts.is_connected() {
            return Err(GraphError::Disconnects);
        }
        Ok((DualGraph { parts }, branch_legs))
    }

    /// Inverse of [`DualGraph::normalize_at`]: each pair of legs is replaced
    /// by an edge with the given id.
    pub fn reglue(
        &self,
        pairs: &BTreeMap<EdgeId, (LegId, LegId)>,
    ) -> Result<DualGraph, GraphError> {
        let mut parts = self.parts.clone();
        for (e, (l1, l2)) in pairs {
            let a = parts
                .legs
                .remove(l1)
                .ok_or_else(|| GraphError::UnknownLeg(l1.clone()))?;
            let b = parts
                .legs
                .remove(l2)
                .ok_or_else(|| GraphError::UnknownLeg(l2.clone()))?;
            if parts.edges.insert(e.clone(), [a, b]).is_some() {
                return Err(GraphError::DuplicateId(e.to_string()));
            }
        }
        parts.check()
    }

    /// Adds legs (marked points) to existing vertices.
    pub fn with_legs<I>(&self, legs: I) -> Result<DualGraph, GraphError>
    where
        I: IntoIterator<Item = (LegId, VertexId)>,
    {
        let mut parts = self.parts.clone();
        for (l, v) in legs {
            if parts.legs.insert(l.clone(), v).is_some() {
                return Err(GraphError::DuplicateId(l.to_string()));
            }
        }
        parts.check()
    }

    /// Arithmetic genus of the subcurve spanned by `vertices`, or `None` when
    /// that subcurve is empty or disconnected.
    pub fn subcurve_genus(&self, vertices: &BTreeSet<VertexId>) -> Option<u32> {
        let parts = GraphParts {
            vertices: self
                .parts
                .vertices
                .iter()
                .filter(|(v, _)| vertices.contains(*v))
                .map(|(v, g)| (v.clone(), *g))
                .collect(),
            edges: self
                .parts
                .edges
                .iter()
                .filter(|(_, [a, b])| vertices.contains(a) && vertices.contains(b))
                .map(|(e, ends)| (e.clone(), ends.clone()))
                .collect(),
            legs: BTreeMap::new(),
        };
        parts.check().ok().map(|g| g.arithmetic_genus())
    }

    /// Two disjoint connected subcurves of positive genus, if any exist.
    ///
    /// Exponential in the number of components; intended for small graphs.
    pub fn disjoint_positive_genus_subcurves(
        &self,
    ) -> Option<(BTreeSet<VertexId>, BTreeSet<VertexId>)> {
        let ids: Vec<&VertexId> = self.parts.vertices.keys().collect();
        assert!(ids.len() < 20, "subcurve enumeration is exponential");
        let positive: Vec<u32> = (1u32..(1 << ids.len()))
            .filter(|mask| {
                let set = mask_to_set(&ids, *mask);
                self.subcurve_genus(&set).is_some_and(|g| g > 0)
            })
            .collect();
        for (i, &m1) in positive.iter().enumerate() {
            for &m2 in &positive[i + 1..] {
                if m1 & m2 == 0 {
                    return Some((mask_to_set(&ids, m1), mask_to_set(&ids, m2)));
                }
            }
        }
        None
    }
}

fn mask_to_set(ids: &[&VertexId], mask: u32) -> BTreeSet<VertexId> {
    ids.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, v)| (*v).clone())
        .collect()
}

#[derive(Serialize, Deserialize)]
struct RawVertex {
    id: VertexId,
    genus: u32,
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    id: EdgeId,
    ends: [VertexId; 2],
}

#[derive(Serialize, Deserialize)]
struct RawLeg {
    id: LegId,
    vertex: VertexId,
}

#[derive(Serialize, Deserialize)]
struct RawDualGraph {
    vertices: Vec<RawVertex>,
    #[serde(default)]
    edges: Vec<RawEdge>,
    #[serde(default)]
    legs: Vec<RawLeg>,
}

impl TryFrom<RawDualGraph> for DualGraph {
    type Error = GraphError;

    fn try_from(raw: RawDualGraph) -> Result<Self, Self::Error> {
        DualGraph::new(
            raw.vertices.into_iter().map(|v| (v.id, v.genus)),
            raw.edges.into_iter().map(|e| (e.id, e.ends)),
            raw.legs.into_iter().map(|l| (l.id, l.vertex)),
        )
    }
}

impl From<DualGraph> for RawDualGraph {
    fn from(g: DualGraph) -> Self {
        let parts = g.parts;
        RawDualGraph {
            vertices: parts
                .vertices
                .into_iter()
                .map(|(id, genus)| RawVertex { id, genus })
                .collect(),
            edges: parts
                .edges
                .into_iter()
                .map(|(id, ends)| RawEdge { id, ends })
                .collect(),
            legs: parts
                .legs
                .into_iter()
                .map(|(id, vertex)| RawLeg { id, vertex })
                .collect(),
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::{graph, rational_cycle};
    use super::*;

    #[test]
    fn genus_of_smooth_curve() {
        assert_eq!(DualGraph::smooth("c", 2).arithmetic_genus(), 2);
    }

    #[test]
    fn rational_cycles_have_genus_one() {
        for len in 1..=6 {
            assert_eq!(rational_cycle(len).arithmetic_genus(), 1, "length {len}");
        }
    }

    #[test]
    fn genus_one_vertex_with_loop() {
        let g = graph(&[("v", 1)], &[("n", "v", "v")], &[]);
        assert_eq!(g.arithmetic_genus(), 2);
    }

    #[test]
    fn stability_examples() {
        let three_legs = graph(&[("v", 0)], &[], &[("a", "v"), ("b", "v"), ("c", "v")]);
        assert!(three_legs.is_stable());
        let nodal_rational = graph(&[("v", 0)], &[("n", "v", "v")], &[]);
        assert!(!nodal_rational.is_stable());
        let elliptic_one_point = graph(&[("v", 1)], &[], &[("p", "v")]);
        assert!(elliptic_one_point.is_stable());
        let two_legs = graph(&[("v", 0)], &[], &[("a", "v"), ("b", "v")]);
        assert!(!two_legs.is_stable());
    }

    #[test]
    fn construction_rejects_bad_graphs() {
        let disconnected =
            DualGraph::new([(VertexId::from("a"), 0), (VertexId::from("b"), 1)], [], []);
        assert_eq!(disconnected.unwrap_err(), GraphError::Disconnected);
        let dangling = DualGraph::new(
            [(VertexId::from("a"), 0)],
            [(
                EdgeId::from("e"),
                [VertexId::from("a"), VertexId::from("z")],
            )],
            [],
        );
        assert!(matches!(dangling, Err(GraphError::UnknownVertex { .. })));
        let empty = DualGraph::new([], [], []);
        assert_eq!(empty.unwrap_err(), GraphError::Empty);
    }

    #[test]
    fn normalize_loop() {
        let g = graph(&[("v", 1)], &[("n", "v", "v")], &[]);
        let (norm, legs) = g
            .normalize_at(&BTreeSet::from([EdgeId::from("n")]))
            .unwrap();
        assert_eq!(norm.arithmetic_genus(), 1);
        assert_eq!(norm.leg_count(), 2);
        assert_eq!(
            legs[&EdgeId::from("n")],
            (LegId::from("n.1"), LegId::from("n.2"))
        );
    }

    #[test]
    fn normalize_separating_edge_fails() {
        let g = graph(&[("a", 1), ("b", 1)], &[("n", "a", "b")], &[]);
        let err = g
            .normalize_at(&BTreeSet::from([EdgeId::from("n")]))
            .unwrap_err();
        assert_eq!(err.code(), "disconnects");
    }

    #[test]
    fn normalize_three_loops() {
        let g = graph(
            &[("v", 1)],
            &[("a", "v", "v"), ("b", "v", "v"), ("c", "v", "v")],
            &[],
        );
        assert_eq!(g.arithmetic_genus(), 4);
        let all: BTreeSet<EdgeId> = ["a", "b", "c"].into_iter().map(EdgeId::from).collect();
        let (norm, _) = g.normalize_at(&all).unwrap();
        assert_eq!(norm.leg_count(), 6);
        assert_eq!(norm.arithmetic_genus(), 1);
    }

    #[test]
    fn normalize_then_reglue_is_isomorphic() {
        let g = graph(
            &[("a", 0), ("b", 2), ("c", 0)],
            &[
                ("x", "a", "b"),
                ("y", "b", "c"),
                ("z", "c", "a"),
                ("w", "b", "b"),
            ],
            &[("p", "a")],
        );
        let at: BTreeSet<EdgeId> = ["x", "w"].into_iter().map(EdgeId::from).collect();
        let (norm, legs) = g.normalize_at(&at).unwrap();
        assert_eq!(norm.arithmetic_genus(), g.arithmetic_genus() - 2);
        let back = norm.reglue(&legs).unwrap();
        assert!(are_isomorphic(&g, &back));
        assert_eq!(back, g);
    }

    #[test]
    fn json_round_trip() {
        let g = graph(&[("a", 0), ("b", 2)], &[("x", "a", "b")], &[("p", "a")]);
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(
            text,
            r#"{"vertices":[{"id":"a","genus":0},{"id":"b","genus":2}],"edges":[{"id":"x","ends":["a","b"]}],"legs":[{"id":"p","vertex":"a"}]}"#
        );
        let back: DualGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"vertices":[{"id":"a","genus":0},{"id":"b","genus":0}]}"#;
        assert!(serde_json::from_str::<DualGraph>(bad).is_err());
    }

    #[test]
    fn positive_genus_subcurves() {
        // Two elliptic tails joined by a rational bridge: disjoint positive genus pieces.
        let g = graph(
            &[("a", 1), ("m", 0), ("b", 1)],
            &[("x", "a", "m"), ("y", "m", "b")],
            &[],
        );
        assert!(g.disjoint_positive_genus_subcurves().is_some());
        // A one-vertex curve with loops has only one positive-genus subcurve.
        let h = graph(&[("v", 2)], &[("x", "v", "v")], &[]);
        assert!(h.disjoint_positive_genus_subcurves().is_none());
    }
}
