//! Structural invariants of covers whose source stabilizes to an irreducible
//! curve.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{node_points, GraphCover};
use crate::curve_graph::{contract_unstable, find_cycles, Contraction, Cycle, DualGraph};
use crate::ids::{EdgeId, PointLabel, VertexId};

fn irreducible_contraction(c: &GraphCover) -> Option<Contraction> {
    let k = contract_unstable(c.source(), &BTreeSet::new()).ok()?;
    (k.target.vertex_count() == 1).then_some(k)
}

/// The source component that survives stabilization, when the source
/// stabilizes to an irreducible curve.
pub fn dominating_component(c: &GraphCover) -> Option<VertexId> {
    let k = irreducible_contraction(c)?;
    let (w, _) = k.target.vertices().next()?;
    k.dominating(w).first().map(|v| (*v).clone())
}

/// Degree of the cover restricted to source component `v`.
pub fn restriction_degree(c: &GraphCover, v: &VertexId) -> Option<u32> {
    c.vertex_data().get(v).map(|b| b.degree)
}

/// The two branches, on the dominating component, of one node of the
/// stabilized source, with their images and indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeBranchImages {
    /// Node of the stabilized source.
    pub node: EdgeId,
    pub branches: [PointLabel; 2],
    pub images: [PointLabel; 2],
    pub indices: [u32; 2],
}

/// Branch images of every node of the stabilized source, or `None` when the
/// source does not stabilize to an irreducible curve.
pub fn node_branch_images(c: &GraphCover) -> Option<Vec<NodeBranchImages>> {
    let k = irreducible_contraction(c)?;
    let (w, _) = k.target.vertices().next()?;
    let dom = k.dominating(w).first().map(|v| (*v).clone())?;
    let labels = node_points(c.source(), &dom);
    let datum = c.datum(&dom);
    let mut out = Vec::new();
    for n in k.target.loops() {
        let over: BTreeSet<&EdgeId> = k.edges_over(n).into_iter().collect();
        let branches: Vec<PointLabel> = labels
            .iter()
            .filter(|(_, e)| over.contains(e))
            .map(|(l, _)| l.clone())
            .collect();
        let [b1, b2] = <[PointLabel; 2]>::try_from(branches).ok()?;
        let (p1, e1) = datum.locate(&b1)?;
        let (p2, e2) = datum.locate(&b2)?;
        out.push(NodeBranchImages {
            node: n.clone(),
            images: [p1.clone(), p2.clone()],
            indices: [e1, e2],
            branches: [b1, b2],
        });
    }
    Some(out)
}

/// A cycle of `target` through the nodes named `p1` and `p2` on component `w`.
pub fn common_cycle(
    target: &DualGraph,
    w: &VertexId,
    p1: &PointLabel,
    p2: &PointLabel,
) -> Option<Cycle> {
    let nodes = node_points(target, w);
    let q1 = nodes.get(p1)?;
    let q2 = nodes.get(p2)?;
    find_cycles(target).into_iter().find(|z| {
        let edges = z.edge_set();
        edges.contains(q1) && edges.contains(q2)
    })
}

/// Nodes of the stabilized source whose branches have distinct images but
/// either different indices or no common target cycle through the images.
///
/// Empty when the source is not stably irreducible or the target is rational.
pub fn separated_branch_violations(c: &GraphCover) -> Vec<EdgeId> {
    if c.target().arithmetic_genus() == 0 {
        return Vec::new();
    }
    let Some(dom) = dominating_component(c) else {
        return Vec::new();
    };
    let w = &c.vertex_map()[&dom];
    node_branch_images(c)
        .unwrap_or_default()
        .into_iter()
        .filter(|n| n.images[0] != n.images[1])
        .filter(|n| {
            n.indices[0] != n.indices[1]
                || common_cycle(c.target(), w, &n.images[0], &n.images[1]).is_none()
        })
        .map(|n| n.node)
        .collect()
}

/// Whether every two connected positive-genus subcurves of the source share
/// a component.
pub fn positive_genus_subcurves_meet(c: &GraphCover) -> bool {
    c.source().disjoint_positive_genus_subcurves().is_none()
}

fn index_multiset(c: &GraphCover, v: &VertexId) -> BTreeMap<PointLabel, Vec<u32>> {
    c.datum(v)
        .fibers
        .iter()
        .map(|f| {
            let mut e: Vec<u32> = f.preimages.iter().map(|x| x.e).collect();
            e.sort_unstable();
            (f.point.clone(), e)
        })
        .collect()
}

/// Whether `smaller` sits inside `bigger` unchanged: same components and
/// nodes with the same maps and indices, and the same local data up to
/// labels added to unlabeled preimages and fibers made explicit.
pub fn extends(bigger: &GraphCover, smaller: &GraphCover) -> bool {
    if bigger.degree() != smaller.degree() {
        return false;
    }
    let same_vertices = |big: &DualGraph, small: &DualGraph| {
        small.vertices().all(|(v, g)| big.genus_of(v) == Some(g))
    };
    let same_edges = |big: &DualGraph, small: &DualGraph| {
        small.edges().all(|(e, ends)| big.ends(e) == Some(ends))
    };
    if !same_vertices(bigger.source(), smaller.source())
        || !same_vertices(bigger.target(), smaller.target())
        || !same_edges(bigger.source(), smaller.source())
        || !same_edges(bigger.target(), smaller.target())
    {
        return false;
    }
    let maps_agree = smaller
        .vertex_map()
        .iter()
        .all(|(v, w)| bigger.vertex_map().get(v) == Some(w))
        && smaller
            .edge_map()
            .iter()
            .all(|(e, q)| bigger.edge_map().get(e) == Some(q))
        && smaller
            .edge_index()
            .iter()
            .all(|(e, i)| bigger.edge_index().get(e) == Some(i));
    if !maps_agree {
        return false;
    }
    smaller.vertex_data().keys().all(|v| {
        let big = index_multiset(bigger, v);
        let labels_kept = smaller
            .datum(v)
            .fibers
            .iter()
            .flat_map(|f| {
                f.preimages
                    .iter()
                    .filter_map(move |x| x.label.as_ref().map(|l| (f, l, x.e)))
            })
            .all(|(f, l, e)| bigger.datum(v).locate(l) == Some((&f.point, e)));
        let fibers_kept = index_multiset(smaller, v)
            .into_iter()
            .all(|(p, e)| big.get(&p) == Some(&e));
        labels_kept && fibers_kept && bigger.datum(v).source_genus == smaller.datum(v).source_genus
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_cover::fixtures::*;

    #[test]
    fn smooth_cover_dominates_itself() {
        let c = bielliptic();
        let v = dominating_component(&c).unwrap();
        assert_eq!(v.as_str(), "c");
        assert_eq!(restriction_degree(&c, &v), Some(2));
        assert_eq!(node_branch_images(&c).unwrap(), vec![]);
        assert!(separated_branch_violations(&c).is_empty());
        assert!(positive_genus_subcurves_meet(&c));
    }

    #[test]
    fn two_positive_genus_components_do_not_meet() {
        let c = two_component();
        assert_eq!(dominating_component(&c), None);
        assert!(!positive_genus_subcurves_meet(&c));
    }

    #[test]
    fn extends_is_reflexive() {
        let c = two_component();
        assert!(extends(&c, &c));
        assert!(!extends(&bielliptic(), &c));
    }
}
