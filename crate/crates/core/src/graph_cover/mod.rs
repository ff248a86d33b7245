//! Covers between dual graphs: the combinatorial shadow of a finite map of
//! nodal curves.
//!
//! Naming conventions tie the local branch data to the graphs:
//!
//! * A target point on component `w` that is a branch of a node is named by
//!   the node's half-end label (see [`half_end_labels_for`]); a target leg is
//!   named by its leg id; any other point may carry any fresh name.
//! * In the datum of a source component `v`, the preimage that is a branch of
//!   a source node carries that node's half-end label; a source leg carries
//!   its leg id. Other labels are free names.
//!
//! [`half_end_labels_for`]: crate::curve_graph::half_end_labels_for

mod builder;
mod complete;
mod convert;
mod invariants;
mod validate;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve_graph::{DualGraph, GraphError};
use crate::ids::{EdgeId, LegId, PointLabel, VertexId};
use crate::smooth_cover::BranchDatum;

pub(crate) use builder::{BridgePair, CoverParts};
pub use complete::complete_cover;
pub(crate) use complete::complete_skipping_marked;
pub use convert::{to_admissible, to_pseudo, AdmissibleConversion};
pub use invariants::{
    common_cycle, dominating_component, extends, node_branch_images, positive_genus_subcurves_meet,
    restriction_degree, separated_branch_violations, NodeBranchImages,
};
pub use validate::{
    stability_graph, validate, AdmissibilityReport, CheckOutcome, ValidationMode, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed cover at {element}: {reason}")]
    Malformed { element: String, reason: String },
    #[error("cover cannot be completed: {}", .0.summary())]
    NotCompletable(Box<AdmissibilityReport>),
    #[error("cover is not valid in {:?} mode: {}", .0.mode, .0.summary())]
    Invalid(Box<AdmissibilityReport>),
}

impl CoverError {
    pub fn code(&self) -> &'static str {
        match self {
            CoverError::Graph(g) => g.code(),
            CoverError::Malformed { .. } => "malformed_cover",
            CoverError::NotCompletable(_) => "not_completable",
            CoverError::Invalid(_) => "invalid_cover",
        }
    }

    pub(crate) fn malformed(element: impl ToString, reason: impl ToString) -> Self {
        CoverError::Malformed {
            element: element.to_string(),
            reason: reason.to_string(),
        }
    }
}

/// A degree-`d` cover of dual graphs with local branch data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraphCover", into = "RawGraphCover")]
pub struct GraphCover {
    source: DualGraph,
    target: DualGraph,
    degree: u32,
    vertex_map: BTreeMap<VertexId, VertexId>,
    vertex_data: BTreeMap<VertexId, BranchDatum>,
    edge_map: BTreeMap<EdgeId, EdgeId>,
    edge_index: BTreeMap<EdgeId, u32>,
}

/// Role of a point name on a component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointRole {
    /// Branch of the given node.
    Node(EdgeId),
    Leg(LegId),
    Free,
}

/// Names of node branches on component `v`, with their edge.
pub fn node_points(g: &DualGraph, v: &VertexId) -> BTreeMap<PointLabel, EdgeId> {
    let mut out = BTreeMap::new();
    for e in g.incident_edges(v) {
        for (end, label) in g.half_end_labels(&e).unwrap() {
            if &end == v {
                out.insert(label, e.clone());
            }
        }
    }
    out
}

pub(crate) fn role_of(g: &DualGraph, v: &VertexId, name: &PointLabel) -> PointRole {
    if let Some(e) = node_points(g, v).remove(name) {
        return PointRole::Node(e);
    }
    let leg = LegId::new(name.as_str());
    if g.leg_vertex(&leg) == Some(v) {
        return PointRole::Leg(leg);
    }
    PointRole::Free
}

impl GraphCover {
    pub fn new(
        source: DualGraph,
        target: DualGraph,
        degree: u32,
        vertex_map: BTreeMap<VertexId, VertexId>,
        vertex_data: BTreeMap<VertexId, BranchDatum>,
        edge_map: BTreeMap<EdgeId, EdgeId>,
        edge_index: BTreeMap<EdgeId, u32>,
    ) -> Result<Self, CoverError> {
        let cover = GraphCover {
            source,
            target,
            degree,
            vertex_map,
            vertex_data,
            edge_map,
            edge_index,
        };
        cover.check_structure()?;
        Ok(cover)
    }

    /// The identity cover of a curve.
    pub fn identity(g: &DualGraph) -> Self {
        let mut vertex_data = BTreeMap::new();
        for (v, genus) in g.vertices() {
            let fibers = node_points(g, v)
                .into_keys()
                .chain(g.legs_at(v).iter().map(PointLabel::from))
                .map(|p| {
                    crate::smooth_cover::Fiber::new(
                        p.clone(),
                        vec![crate::smooth_cover::Preimage::labeled(p, 1)],
                    )
                })
                .collect();
            vertex_data.insert(v.clone(), BranchDatum::new(1, genus, genus, fibers));
        }
        GraphCover::new(
            g.clone(),
            g.clone(),
            1,
            g.vertices().map(|(v, _)| (v.clone(), v.clone())).collect(),
            vertex_data,
            g.edges().map(|(e, _)| (e.clone(), e.clone())).collect(),
            g.edges().map(|(e, _)| (e.clone(), 1)).collect(),
        )
        .expect("identity cover is well formed")
    }

    pub fn source(&self) -> &DualGraph {
        &self.source
    }

    pub fn target(&self) -> &DualGraph {
        &self.target
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn vertex_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.vertex_map
    }

    pub fn vertex_data(&self) -> &BTreeMap<VertexId, BranchDatum> {
        &self.vertex_data
    }

    pub fn edge_map(&self) -> &BTreeMap<EdgeId, EdgeId> {
        &self.edge_map
    }

    pub fn edge_index(&self) -> &BTreeMap<EdgeId, u32> {
        &self.edge_index
    }

    pub fn datum(&self, v: &VertexId) -> &BranchDatum {
        &self.vertex_data[v]
    }

    /// Source components over target component `w`.
    pub fn over(&self, w: &VertexId) -> Vec<&VertexId> {
        self.vertex_map
            .iter()
            .filter(|(_, t)| *t == w)
            .map(|(v, _)| v)
            .collect()
    }

    /// Source nodes over target node `q`.
    pub fn edges_over(&self, q: &EdgeId) -> Vec<&EdgeId> {
        self.edge_map
            .iter()
            .filter(|(_, t)| *t == q)
            .map(|(s, _)| s)
            .collect()
    }

    /// Target point under each source leg, read off the local data.
    pub fn leg_map(&self) -> BTreeMap<LegId, PointLabel> {
        self.source
            .legs()
            .filter_map(|(l, v)| {
                self.vertex_data[v]
                    .locate(&PointLabel::new(l.as_str()))
                    .map(|(p, _)| (l.clone(), p.clone()))
            })
            .collect()
    }

    /// Ramification index at a source leg.
    pub fn leg_index(&self, l: &LegId) -> Option<u32> {
        let v = self.source.leg_vertex(l)?;
        self.vertex_data[v]
            .locate(&PointLabel::new(l.as_str()))
            .map(|(_, e)| e)
    }

    /// Smooth points of target component `w` named in the data over it.
    pub fn smooth_points(&self, w: &VertexId) -> BTreeSet<PointLabel> {
        let nodes = node_points(&self.target, w);
        self.over(w)
            .into_iter()
            .flat_map(|v| self.vertex_data[v].fibers.iter().map(|f| f.point.clone()))
            .filter(|p| !nodes.contains_key(p))
            .collect()
    }

    /// Smooth target points with at least one ramified preimage, by component.
    pub fn smooth_branch_points(&self) -> BTreeMap<PointLabel, VertexId> {
        let mut out = BTreeMap::new();
        for (w, _) in self.target.vertices() {
            let nodes = node_points(&self.target, w);
            for v in self.over(w) {
                for f in self.vertex_data[v].branch_fibers() {
                    if !nodes.contains_key(&f.point) {
                        out.insert(f.point.clone(), w.clone());
                    }
                }
            }
        }
        out
    }

    /// Target component carrying the point name `p`, if it is used anywhere.
    pub fn point_component(&self, p: &PointLabel) -> Option<VertexId> {
        if let Some(w) = self.target.leg_vertex(&LegId::new(p.as_str())) {
            return Some(w.clone());
        }
        self.vertex_data
            .iter()
            .find_map(|(v, b)| b.fiber(p).map(|_| self.vertex_map[v].clone()))
    }

    /// Preimages of target point `p` (on component `w`) over all source
    /// components: `(source vertex, label, index)`.
    pub fn fiber_over(
        &self,
        w: &VertexId,
        p: &PointLabel,
    ) -> Vec<(VertexId, Option<PointLabel>, u32)> {
        let mut out = Vec::new();
        for v in self.over(w) {
            let b = &self.vertex_data[v];
            match b.fiber(p) {
                Some(f) => {
                    out.extend(
                        f.preimages
                            .iter()
                            .map(|x| (v.clone(), x.label.clone(), x.e)),
                    );
                }
                None => out.extend((0..b.degree).map(|_| (v.clone(), None, 1))),
            }
        }
        out
    }

    pub(crate) fn into_parts(self) -> CoverParts {
        CoverParts {
            source: self.source.into_parts(),
            target: self.target.into_parts(),
            degree: self.degree,
            vertex_map: self.vertex_map,
            vertex_data: self.vertex_data,
            edge_map: self.edge_map,
            edge_index: self.edge_index,
        }
    }

    fn check_structure(&self) -> Result<(), CoverError> {
        if self.degree == 0 {
            return Err(CoverError::malformed("degree", "must be at least 1"));
        }
        for (v, _) in self.source.vertices() {
            let w = self
                .vertex_map
                .get(v)
                .ok_or_else(|| CoverError::malformed(v, "source vertex missing from vertex_map"))?;
            if !self.target.contains_vertex(w) {
                return Err(CoverError::malformed(
                    v,
                    format!("maps to unknown target vertex `{w}`"),
                ));
            }
            let b = self.vertex_data.get(v).ok_or_else(|| {
                CoverError::malformed(v, "source vertex missing from vertex_data")
            })?;
            if b.degree == 0 {
                return Err(CoverError::malformed(v, "local degree must be at least 1"));
            }
            if let Some(err) = b.structural_errors().into_iter().next() {
                return Err(CoverError::malformed(v, err));
            }
        }
        for key in self.vertex_map.keys().chain(self.vertex_data.keys()) {
            if !self.source.contains_vertex(key) {
                return Err(CoverError::malformed(key, "not a source vertex"));
            }
        }
        for (s, _) in self.source.edges() {
            let q = self
                .edge_map
                .get(s)
                .ok_or_else(|| CoverError::malformed(s, "source edge missing from edge_map"))?;
            if !self.target.contains_edge(q) {
                return Err(CoverError::malformed(
                    s,
                    format!("maps to unknown target edge `{q}`"),
                ));
            }
            match self.edge_index.get(s) {
                None => {
                    return Err(CoverError::malformed(
                        s,
                        "source edge missing from edge_index",
                    ))
                }
                Some(0) => return Err(CoverError::malformed(s, "edge index must be at least 1")),
                Some(_) => {}
            }
        }
        for key in self.edge_map.keys().chain(self.edge_index.keys()) {
            if !self.source.contains_edge(key) {
                return Err(CoverError::malformed(key, "not a source edge"));
            }
        }
        for g in [&self.source, &self.target] {
            for (l, _) in g.legs() {
                if g.contains_edge(&EdgeId::new(l.as_str())) {
                    return Err(CoverError::malformed(l, "leg id is also an edge id"));
                }
            }
        }

        // Target point names.
        let mut free_points: BTreeMap<PointLabel, VertexId> = BTreeMap::new();
        for (v, b) in &self.vertex_data {
            let w = &self.vertex_map[v];
            for f in &b.fibers {
                if role_of(&self.target, w, &f.point) != PointRole::Free {
                    continue;
                }
                if self.is_graph_name(&self.target, f.point.as_str()) {
                    return Err(CoverError::malformed(
                        v,
                        format!(
                            "point `{}` is not a point of target component `{w}`",
                            f.point
                        ),
                    ));
                }
                if let Some(other) = free_points.insert(f.point.clone(), w.clone()) {
                    if &other != w {
                        return Err(CoverError::malformed(
                            &f.point,
                            format!("point name used on both `{other}` and `{w}`"),
                        ));
                    }
                }
            }
        }

        // Source labels.
        let mut free_labels: BTreeSet<&PointLabel> = BTreeSet::new();
        for (v, b) in &self.vertex_data {
            for label in b.labels() {
                if role_of(&self.source, v, label) != PointRole::Free {
                    continue;
                }
                if self.is_graph_name(&self.source, label.as_str()) {
                    return Err(CoverError::malformed(
                        v,
                        format!("label `{label}` names a node or leg not on this component"),
                    ));
                }
                if !free_labels.insert(label) {
                    return Err(CoverError::malformed(label, "label used on two components"));
                }
            }
            for l in self.source.legs_at(v) {
                if b.locate(&PointLabel::new(l.as_str())).is_none() {
                    return Err(CoverError::malformed(
                        &l,
                        "source leg does not appear in its local datum",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Whether `name` is an edge id, a half-end label or a leg id of `g`.
    fn is_graph_name(&self, g: &DualGraph, name: &str) -> bool {
        g.contains_edge(&EdgeId::new(name))
            || g.leg_vertex(&LegId::new(name)).is_some()
            || g.loops()
                .any(|e| name == format!("{e}.1") || name == format!("{e}.2"))
    }
}

#[derive(Serialize, Deserialize)]
struct RawGraphCover {
    source: DualGraph,
    target: DualGraph,
    degree: u32,
    vertex_map: BTreeMap<VertexId, VertexId>,
    vertex_data: BTreeMap<VertexId, BranchDatum>,
    #[serde(default)]
    edge_map: BTreeMap<EdgeId, EdgeId>,
    #[serde(default)]
    edge_index: BTreeMap<EdgeId, u32>,
}

impl TryFrom<RawGraphCover> for GraphCover {
    type Error = CoverError;

    fn try_from(r: RawGraphCover) -> Result<Self, Self::Error> {
        GraphCover::new(
            r.source,
            r.target,
            r.degree,
            r.vertex_map,
            r.vertex_data,
            r.edge_map,
            r.edge_index,
        )
    }
}

impl From<GraphCover> for RawGraphCover {
    fn from(c: GraphCover) -> Self {
        RawGraphCover {
            source: c.source,
            target: c.target,
            degree: c.degree,
            vertex_map: c.vertex_map,
            vertex_data: c.vertex_data,
            edge_map: c.edge_map,
            edge_index: c.edge_index,
        }
    }
}
