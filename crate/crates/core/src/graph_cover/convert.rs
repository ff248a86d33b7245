//! Passing between admissible and pseudo-admissible covers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::builder::BridgePair;
use super::validate::{validate, ValidationMode};
use super::{CoverError, CoverParts, GraphCover};
use crate::curve_graph::{Contraction, Contractor, GraphError, GraphParts, StepKind};
use crate::ids::{EdgeId, LegId, PointLabel, VertexId};

/// Output of [`to_admissible`]: the new cover and the contractions of its
/// source and target from the input ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleConversion {
    pub cover: GraphCover,
    pub source_contraction: Contraction,
    pub target_contraction: Contraction,
}

fn node_points_in(parts: &GraphParts, v: &VertexId) -> BTreeSet<PointLabel> {
    parts
        .incident_edges(v)
        .iter()
        .flat_map(|e| parts.half_end_labels(e).unwrap())
        .filter(|(end, _)| end == v)
        .map(|(_, l)| l)
        .collect()
}

/// Nodes, marked points and smooth branch points on target component `w`.
fn target_special_points(parts: &CoverParts, w: &VertexId) -> usize {
    let nodes = node_points_in(&parts.target, w);
    let legs = parts.target.legs_at(w);
    let branch: BTreeSet<&PointLabel> = parts
        .over(w)
        .iter()
        .flat_map(|v| parts.vertex_data[v].branch_fibers().map(|f| &f.point))
        .filter(|p| !nodes.contains(*p) && !parts.target.legs.contains_key(p.as_str()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    parts.target.valence(w) + legs.len() + branch.len()
}

/// Contracts every rational target component with at most two special
/// points (nodes, marked points and smooth branch points), together with the
/// source components over it.
pub fn to_admissible(c: &GraphCover) -> Result<AdmissibleConversion, CoverError> {
    let report = validate(c, ValidationMode::Pseudo);
    if !report.passed() {
        return Err(CoverError::Invalid(Box::new(report)));
    }
    let mut parts = CoverParts::from(c.clone());
    let mut source = Contractor::new(c.source());
    let mut target = Contractor::new(c.target());

    loop {
        let next = parts
            .target
            .vertices
            .iter()
            .filter(|(w, g)| {
                **g == 0
                    && !parts.target.has_loop_at(w)
                    && parts.target.vertices.len() > 1
                    && target_special_points(&parts, w) <= 2
            })
            .map(|(w, _)| w.clone())
            .next();
        let Some(w) = next else { break };
        let pieces = parts.over(&w);
        let target_leg = parts.target.legs_at(&w).into_iter().next();

        for r in &pieces {
            let source_leg: Option<LegId> = source.parts().legs_at(r).into_iter().next();
            let step = source.contract(r)?;
            match step.kind {
                StepKind::Tail { edge, onto } => {
                    if let Some(l) = source_leg {
                        parts.rename_source_label(
                            &onto,
                            &PointLabel::from(&edge),
                            &PointLabel::from(&l),
                        );
                    }
                    parts.edge_map.remove(&edge);
                    parts.edge_index.remove(&edge);
                }
                StepKind::Bridge {
                    kept,
                    dropped,
                    kept_end,
                    dropped_end,
                } => {
                    if kept_end == dropped_end {
                        parts.rename_source_label(
                            &kept_end,
                            &PointLabel::from(&kept),
                            &branch(&kept, 1),
                        );
                        parts.rename_source_label(
                            &kept_end,
                            &PointLabel::from(&dropped),
                            &branch(&kept, 2),
                        );
                    } else {
                        parts.rename_source_label(
                            &dropped_end,
                            &PointLabel::from(&dropped),
                            &PointLabel::from(&kept),
                        );
                    }
                    parts.edge_map.remove(&dropped);
                    parts.edge_index.remove(&dropped);
                }
            }
            parts.vertex_map.remove(r);
            parts.vertex_data.remove(r);
        }

        let step = target.contract(&w)?;
        match step.kind {
            StepKind::Tail { edge, onto } => {
                if let Some(l) = target_leg {
                    parts.rename_target_point(
                        &onto,
                        &PointLabel::from(&edge),
                        &PointLabel::from(&l),
                    );
                }
            }
            StepKind::Bridge {
                kept,
                dropped,
                kept_end,
                dropped_end,
            } => {
                if kept_end == dropped_end {
                    parts.rename_target_point(
                        &kept_end,
                        &PointLabel::from(&kept),
                        &branch(&kept, 1),
                    );
                    parts.rename_target_point(
                        &kept_end,
                        &PointLabel::from(&dropped),
                        &branch(&kept, 2),
                    );
                } else {
                    parts.rename_target_point(
                        &dropped_end,
                        &PointLabel::from(&dropped),
                        &PointLabel::from(&kept),
                    );
                }
                for q in parts.edge_map.values_mut() {
                    if *q == dropped {
                        *q = kept.clone();
                    }
                }
            }
        }
        parts.source = source.parts().clone();
        parts.target = target.parts().clone();
    }

    let lone_unstable = parts.target.vertices.len() == 1 && {
        let (w, g) = parts.target.vertices.iter().next().unwrap();
        *g == 0 && target_special_points(&parts, w) <= 2
    };
    if lone_unstable {
        return Err(GraphError::EmptyResult.into());
    }
    Ok(AdmissibleConversion {
        cover: parts.finish()?,
        source_contraction: source.finish()?,
        target_contraction: target.finish()?,
    })
}

fn branch(e: &EdgeId, k: u8) -> PointLabel {
    PointLabel::new(format!("{e}.{k}"))
}

/// Replaces every internal target node by a rational bridge: the target is
/// normalized at the node and its two branches are joined through a new
/// rational component, and likewise for each source node over it.
pub fn to_pseudo(c: &GraphCover) -> Result<GraphCover, CoverError> {
    let report = validate(c, ValidationMode::Admissible);
    if !report.passed() {
        return Err(CoverError::Invalid(Box::new(report)));
    }
    let loops: Vec<EdgeId> = c.target().loops().cloned().collect();
    if loops.is_empty() {
        return Ok(c.clone());
    }
    let mut parts = CoverParts::from(c.clone());
    for q in loops {
        let w = parts.target.edges[&q][0].clone();
        let (q1, q2) = (branch(&q, 1), branch(&q, 2));
        for name in [&q1, &q2] {
            if parts.target.edges.contains_key(name.as_str()) {
                return Err(CoverError::malformed(
                    name,
                    "branch name of an internal node is also an edge id",
                ));
            }
        }
        parts.target.edges.remove(&q);

        let over: Vec<EdgeId> = parts
            .edge_map
            .iter()
            .filter(|(_, t)| **t == q)
            .map(|(s, _)| s.clone())
            .collect();
        let mut pairs = Vec::new();
        for s in over {
            let halves = parts.source.half_end_labels(&s).unwrap();
            let e = parts.edge_index[&s];
            parts.source.edges.remove(&s);
            parts.edge_map.remove(&s);
            parts.edge_index.remove(&s);
            let mut located: Vec<(VertexId, PointLabel, PointLabel)> = Vec::new();
            for (k, (v, label)) in halves.into_iter().enumerate() {
                // A node between two components has one label on both; split it.
                let new = if parts.source.edges.contains_key(label.as_str())
                    || label.as_str() == s.as_str()
                {
                    let name = parts.fresh_source_name(&format!("{s}.{}", k + 1));
                    PointLabel::new(name)
                } else {
                    label.clone()
                };
                parts.rename_source_label(&v, &label, &new);
                let point = parts.vertex_data[&v]
                    .locate(&new)
                    .map(|(p, _)| p.clone())
                    .unwrap();
                located.push((v, new, point));
            }
            if located[0].2 != q1 {
                located.swap(0, 1);
            }
            let [(v1, l1, _), (v2, l2, _)] = <[_; 2]>::try_from(located).unwrap();
            pairs.push(BridgePair { v1, l1, v2, l2, e });
        }
        parts.raise_genus(&w, &q1, &w, &q2, &pairs);
    }
    parts.finish()
}
