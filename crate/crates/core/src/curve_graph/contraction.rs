//! Contraction of unstable rational components (stable equivalence).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{DualGraph, GraphError, GraphParts};
use crate::ids::{EdgeId, VertexId};

/// Where a source vertex ends up under a contraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum VertexImage {
    /// Not contracted; the component keeps its id.
    Vertex(VertexId),
    /// Collapsed onto the node `EdgeId` of the target.
    Edge(EdgeId),
    /// Collapsed onto a smooth point of the target component.
    Point(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    /// A rational tail attached by `edge` to `onto` was removed; its marked
    /// point (if any) moved to `onto`.
    Tail { edge: EdgeId, onto: VertexId },
    /// A rational bridge between `kept_end` and `dropped_end` was removed and
    /// its two nodes merged into `kept` (the smaller edge id).
    Bridge {
        kept: EdgeId,
        dropped: EdgeId,
        kept_end: VertexId,
        dropped_end: VertexId,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionStep {
    pub vertex: VertexId,
    pub genus: u32,
    /// Nodes plus marked points on the component when it was contracted.
    pub special_points: usize,
    #[serde(flatten)]
    pub kind: StepKind,
}

/// A contraction map between dual graphs, `source ≻ target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contraction {
    pub source: DualGraph,
    pub target: DualGraph,
    pub vertex_map: BTreeMap<VertexId, VertexImage>,
    /// Surviving nodes. Nodes contracted to smooth points are absent.
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    pub steps: Vec<ContractionStep>,
}

impl Contraction {
    pub fn identity(g: &DualGraph) -> Self {
        Contraction {
            source: g.clone(),
            target: g.clone(),
            vertex_map: g
                .vertices()
                .map(|(v, _)| (v.clone(), VertexImage::Vertex(v.clone())))
                .collect(),
            edge_map: g.edges().map(|(e, _)| (e.clone(), e.clone())).collect(),
            steps: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    /// Source vertices mapping onto `target` without being collapsed.
    pub fn dominating(&self, target: &VertexId) -> Vec<&VertexId> {
        self.vertex_map
            .iter()
            .filter(|(_, img)| matches!(img, VertexImage::Vertex(w) if w == target))
            .map(|(v, _)| v)
            .collect()
    }

    /// Source edges that map onto the target edge `e`.
    pub fn edges_over(&self, e: &EdgeId) -> Vec<&EdgeId> {
        self.edge_map
            .iter()
            .filter(|(_, t)| *t == e)
            .map(|(s, _)| s)
            .collect()
    }
}

/// Incremental contraction on a mutable copy of a graph.
pub(crate) struct Contractor {
    parts: GraphParts,
    source: DualGraph,
    vertex_map: BTreeMap<VertexId, VertexImage>,
    edge_map: BTreeMap<EdgeId, EdgeId>,
    steps: Vec<ContractionStep>,
}

impl Contractor {
    pub fn new(g: &DualGraph) -> Self {
        let identity = Contraction::identity(g);
        Contractor {
            parts: g.parts().clone(),
            source: g.clone(),
            vertex_map: identity.vertex_map,
            edge_map: identity.edge_map,
            steps: Vec::new(),
        }
    }

    pub fn parts(&self) -> &GraphParts {
        &self.parts
    }

    /// Genus 0, smooth (no internal node), at most two special points, and
    /// not the last component.
    pub fn is_contractible(&self, v: &VertexId) -> bool {
        self.parts.vertices.get(v) == Some(&0)
            && !self.parts.has_loop_at(v)
            && self.parts.valence(v) + self.parts.legs_at(v).len() <= 2
            && self.parts.vertices.len() > 1
            && !self.parts.incident_edges(v).is_empty()
    }

    pub fn contract(&mut self, v: &VertexId) -> Result<ContractionStep, GraphError> {
        let genus = *self
            .parts
            .vertices
            .get(v)
            .ok_or_else(|| GraphError::UnknownVertex {
                element: "contraction".into(),
                vertex: v.clone(),
            })?;
        let special = self.parts.valence(v) + self.parts.legs_at(v).len();
        if genus != 0 || self.parts.has_loop_at(v) || special > 2 {
            return Err(GraphError::NotContractible(v.clone()));
        }
        let incident = self.parts.incident_edges(v);
        let other_end = |parts: &GraphParts, e: &EdgeId| {
            let [a, b] = &parts.edges[e];
            if a == v {
                b.clone()
            } else {
                a.clone()
            }
        };
        let kind = match incident.as_slice() {
            [] => return Err(GraphError::EmptyResult),
            [edge] => {
                let onto = other_end(&self.parts, edge);
                self.parts.edges.remove(edge);
                for w in self.parts.legs.values_mut() {
                    if w == v {
                        *w = onto.clone();
                    }
                }
                for img in self.vertex_map.values_mut() {
                    let collapses = match img {
                        VertexImage::Vertex(w) | VertexImage::Point(w) => w == v,
                        VertexImage::Edge(e) => e == edge,
                    };
                    if collapses {
                        *img = VertexImage::Point(onto.clone());
                    }
                }
                self.edge_map.retain(|_, t| t != edge);
                StepKind::Tail {
                    edge: edge.clone(),
                    onto,
                }
            }
            [e1, e2] => {
                let (kept, dropped) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
                let kept_end = other_end(&self.parts, kept);
                let dropped_end = other_end(&self.parts, dropped);
                self.parts.edges.remove(dropped);
                self.parts
                    .edges
                    .insert(kept.clone(), [kept_end.clone(), dropped_end.clone()]);
                for img in self.vertex_map.values_mut() {
                    let collapses = match img {
                        VertexImage::Vertex(w) | VertexImage::Point(w) => w == v,
                        VertexImage::Edge(e) => e == dropped,
                    };
                    if collapses {
                        *img = VertexImage::Edge(kept.clone());
                    }
                }
                for t in self.edge_map.values_mut() {
                    if t == dropped {
                        *t = kept.clone();
                    }
                }
                StepKind::Bridge {
                    kept: kept.clone(),
                    dropped: dropped.clone(),
                    kept_end,
                    dropped_end,
                }
            }
            _ => return Err(GraphError::NotContractible(v.clone())),
        };
        self.parts.vertices.remove(v);
        let step = ContractionStep {
            vertex: v.clone(),
            genus,
            special_points: special,
            kind,
        };
        self.steps.push(step.clone());
        Ok(step)
    }

    pub fn finish(self) -> Result<Contraction, GraphError> {
        Ok(Contraction {
            target: self.parts.check()?,
            source: self.source,
            vertex_map: self.vertex_map,
            edge_map: self.edge_map,
            steps: self.steps,
        })
    }
}

/// Repeatedly contracts smooth rational components with at most two special
/// points, lowest id first, never touching `protected`.
pub fn contract_unstable(
    g: &DualGraph,
    protected: &BTreeSet<VertexId>,
) -> Result<Contraction, GraphError> {
    let mut contractor = Contractor::new(g);
    loop {
        let next = contractor
            .parts()
            .vertices
            .keys()
            .find(|v| !protected.contains(*v) && contractor.is_contractible(v))
            .cloned();
        match next {
            Some(v) => {
                contractor.contract(&v)?;
            }
            None => {
                // A lone rational component with at most two special points
                // would have to be contracted too.
                let parts = contractor.parts();
                if parts.vertices.len() == 1 {
                    let (v, g) = parts.vertices.iter().next().unwrap();
                    if *g == 0
                        && !protected.contains(v)
                        && !parts.has_loop_at(v)
                        && parts.legs.len() <= 2
                    {
                        return Err(GraphError::EmptyResult);
                    }
                }
                break;
            }
        }
    }
    contractor.finish()
}

#[cfg(test)]
mod tests {
    use super::super::are_isomorphic;
    use super::super::fixtures::{graph, rational_cycle};
    use super::*;

    fn none() -> BTreeSet<VertexId> {
        BTreeSet::new()
    }

    fn check_invariants(c: &Contraction) {
        assert_eq!(c.source.arithmetic_genus(), c.target.arithmetic_genus());
        for step in &c.steps {
            assert_eq!(step.genus, 0);
            assert!(step.special_points <= 2);
        }
        for (w, _) in c.target.vertices() {
            assert_eq!(c.dominating(w).len(), 1, "vertex {w}");
        }
    }

    #[test]
    fn bridge_between_two_components() {
        let g = graph(
            &[("v0", 2), ("w", 0), ("v1", 3)],
            &[("a", "v0", "w"), ("b", "w", "v1")],
            &[],
        );
        let c = contract_unstable(&g, &none()).unwrap();
        check_invariants(&c);
        assert_eq!(
            c.target,
            graph(&[("v0", 2), ("v1", 3)], &[("a", "v0", "v1")], &[])
        );
        assert_eq!(
            c.vertex_map[&VertexId::from("w")],
            VertexImage::Edge(EdgeId::from("a"))
        );
        assert_eq!(c.edge_map[&EdgeId::from("b")], EdgeId::from("a"));
    }

    #[test]
    fn rational_tail_removed() {
        let g = graph(&[("v", 2), ("t", 0)], &[("a", "v", "t")], &[]);
        let c = contract_unstable(&g, &none()).unwrap();
        check_invariants(&c);
        assert_eq!(c.target, DualGraph::smooth("v", 2));
        assert_eq!(
            c.vertex_map[&VertexId::from("t")],
            VertexImage::Point(VertexId::from("v"))
        );
        assert!(c.edge_map.is_empty());
    }

    #[test]
    fn rational_chain_of_three() {
        let g = graph(
            &[("a", 1), ("r1", 0), ("r2", 0), ("r3", 0), ("b", 1)],
            &[
                ("e1", "a", "r1"),
                ("e2", "r1", "r2"),
                ("e3", "r2", "r3"),
                ("e4", "r3", "b"),
            ],
            &[],
        );
        assert_eq!(g.arithmetic_genus(), 2);
        let c = contract_unstable(&g, &none()).unwrap();
        check_invariants(&c);
        assert_eq!(c.target.vertex_count(), 2);
        assert_eq!(c.target.edge_count(), 1);
        assert_eq!(c.target.arithmetic_genus(), 2);
        assert_eq!(c.edges_over(&EdgeId::from("e1")).len(), 4);
    }

    #[test]
    fn rational_cycle_becomes_nodal_rational_curve() {
        let c = contract_unstable(&rational_cycle(4), &none()).unwrap();
        check_invariants(&c);
        assert_eq!(c.target.vertex_count(), 1);
        assert_eq!(c.target.loops().count(), 1);
        assert_eq!(c.target.arithmetic_genus(), 1);
    }

    #[test]
    fn protected_vertices_survive() {
        let g = graph(&[("v", 2), ("t", 0)], &[("a", "v", "t")], &[]);
        let c = contract_unstable(&g, &BTreeSet::from([VertexId::from("t")])).unwrap();
        assert!(c.is_identity());
    }

    #[test]
    fn leg_moves_to_attaching_component() {
        let g = graph(&[("v", 1), ("t", 0)], &[("a", "v", "t")], &[("p", "t")]);
        let c = contract_unstable(&g, &none()).unwrap();
        assert_eq!(c.target.leg_vertex(&"p".into()), Some(&VertexId::from("v")));
    }

    #[test]
    fn contracting_everything_is_an_error() {
        let g = graph(&[("a", 0), ("b", 0)], &[("e", "a", "b")], &[]);
        assert_eq!(
            contract_unstable(&g, &none()).unwrap_err(),
            GraphError::EmptyResult
        );
        let lone = graph(&[("a", 0)], &[], &[("p", "a"), ("q", "a")]);
        assert_eq!(
            contract_unstable(&lone, &none()).unwrap_err(),
            GraphError::EmptyResult
        );
    }

    #[test]
    fn idempotent() {
        let g = graph(
            &[("a", 1), ("r1", 0), ("r2", 0), ("t", 0)],
            &[
                ("e1", "a", "r1"),
                ("e2", "r1", "r2"),
                ("e3", "r2", "a"),
                ("e4", "a", "t"),
            ],
            &[],
        );
        let c = contract_unstable(&g, &none()).unwrap();
        let again = contract_unstable(&c.target, &none()).unwrap();
        assert!(again.is_identity());
        assert_eq!(again.target, c.target);
    }

    #[test]
    fn order_does_not_matter() {
        // Relabelling the vertices changes the processing order.
        let a = graph(
            &[("a", 0), ("b", 0), ("c", 1), ("d", 0), ("e", 0)],
            &[
                ("x", "a", "b"),
                ("y", "b", "c"),
                ("z", "c", "d"),
                ("w", "d", "a"),
                ("u", "c", "e"),
            ],
            &[("p", "e")],
        );
        let b = graph(
            &[("e", 0), ("d", 0), ("a", 1), ("c", 0), ("b", 0)],
            &[
                ("x", "e", "d"),
                ("y", "d", "a"),
                ("z", "a", "c"),
                ("w", "c", "e"),
                ("u", "a", "b"),
            ],
            &[("p", "b")],
        );
        let ca = contract_unstable(&a, &none()).unwrap();
        let cb = contract_unstable(&b, &none()).unwrap();
        assert!(are_isomorphic(&ca.target, &cb.target));
    }
}
