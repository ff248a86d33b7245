//! Checks of the admissibility conditions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{node_points, GraphCover};
use crate::curve_graph::DualGraph;
use crate::ids::{LegId, PointLabel, VertexId};
use crate::smooth_cover::validate_rh;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationMode {
    /// Conditions 1, 2, 3 (stable pointed target) and 4.
    Admissible,
    /// Conditions 1, 2, 3′ (no internal target nodes) and 4.
    Pseudo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub element: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl CheckOutcome {
    fn from(violations: Vec<Violation>) -> Self {
        CheckOutcome {
            passed: violations.is_empty(),
            violations,
        }
    }
}

/// Result of [`validate`]. A `None` entry was not checked in this mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub mode: ValidationMode,
    pub c1: Option<CheckOutcome>,
    pub c2: Option<CheckOutcome>,
    pub c3_stable_target: Option<CheckOutcome>,
    pub c3prime_no_internal_nodes: Option<CheckOutcome>,
    pub c4: Option<CheckOutcome>,
    pub degree_consistency: Option<CheckOutcome>,
    pub rh_consistency: Option<CheckOutcome>,
}

impl AdmissibilityReport {
    fn checks(&self) -> [(&'static str, &Option<CheckOutcome>); 7] {
        [
            ("c1", &self.c1),
            ("c2", &self.c2),
            ("c3_stable_target", &self.c3_stable_target),
            ("c3prime_no_internal_nodes", &self.c3prime_no_internal_nodes),
            ("c4", &self.c4),
            ("degree_consistency", &self.degree_consistency),
            ("rh_consistency", &self.rh_consistency),
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks()
            .iter()
            .all(|(_, c)| c.as_ref().is_none_or(|c| c.passed))
    }

    /// Names of failed checks.
    pub fn failures(&self) -> Vec<&'static str> {
        self.checks()
            .iter()
            .filter(|(_, c)| c.as_ref().is_some_and(|c| !c.passed))
            .map(|(name, _)| *name)
            .collect()
    }

    pub fn summary(&self) -> String {
        let failures = self.failures();
        if failures.is_empty() {
            return "all checks passed".to_owned();
        }
        failures
            .iter()
            .map(|name| {
                let outcome = self
                    .checks()
                    .into_iter()
                    .find(|(n, _)| n == name)
                    .and_then(|(_, c)| c.clone())
                    .unwrap();
                let first = &outcome.violations[0];
                format!("{name} fails at `{}` ({})", first.element, first.reason)
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn violation(element: impl ToString, reason: impl ToString) -> Violation {
    Violation {
        element: element.to_string(),
        reason: reason.to_string(),
    }
}

/// Checks the cover against the conditions of the given mode.
pub fn validate(c: &GraphCover, mode: ValidationMode) -> AdmissibilityReport {
    let (c3, c3prime) = match mode {
        ValidationMode::Admissible => (Some(check_stable_target(c)), None),
        ValidationMode::Pseudo => (None, Some(check_no_internal_nodes(c))),
    };
    AdmissibilityReport {
        mode,
        c1: Some(check_nodes_over_nodes(c)),
        c2: Some(check_simple_branching(c)),
        c3_stable_target: c3,
        c3prime_no_internal_nodes: c3prime,
        c4: Some(check_edge_indices(c)),
        degree_consistency: Some(check_degrees(c)),
        rh_consistency: Some(check_rh(c)),
    }
}

/// The target with a leg added at every smooth branch point that is not
/// already marked.
pub fn stability_graph(c: &GraphCover) -> DualGraph {
    let extra: Vec<(LegId, VertexId)> = c
        .smooth_branch_points()
        .into_iter()
        .map(|(p, w)| (LegId::new(p.as_str()), w))
        .filter(|(l, _)| c.target().leg_vertex(l).is_none())
        .collect();
    c.target()
        .with_legs(extra)
        .expect("branch point names are fresh in the target")
}

/// Condition 1: the preimage of the target nodes is exactly the set of
/// source nodes, each lying over a node.
fn check_nodes_over_nodes(c: &GraphCover) -> CheckOutcome {
    let mut out = Vec::new();
    let (source, target) = (c.source(), c.target());

    for (q, _) in target.edges() {
        if c.edges_over(q).is_empty() {
            out.push(violation(q, "target node has no source node over it"));
        }
    }

    for (s, _) in source.edges() {
        let q = &c.edge_map()[s];
        let mut images: Vec<(VertexId, PointLabel)> = Vec::new();
        for (v, label) in source.half_end_labels(s).unwrap() {
            match c.datum(&v).locate(&label) {
                Some((p, _)) => images.push((c.vertex_map()[&v].clone(), p.clone())),
                None => out.push(violation(
                    s,
                    format!("branch `{label}` missing from the datum of `{v}`"),
                )),
            }
        }
        if images.len() == 2 {
            let mut expected: Vec<(VertexId, PointLabel)> =
                target.half_end_labels(q).unwrap().into_iter().collect();
            expected.sort();
            images.sort();
            if images != expected {
                out.push(violation(
                    s,
                    format!("branches do not lie over the two branches of `{q}`"),
                ));
            }
        }
    }

    for (v, b) in c.vertex_data() {
        let w = &c.vertex_map()[v];
        let own = node_points(source, v);
        for (p, q) in node_points(target, w) {
            let Some(f) = b.fiber(&p) else {
                out.push(violation(v, format!("no fiber over node branch `{p}`")));
                continue;
            };
            for x in &f.preimages {
                let ok = x
                    .label
                    .as_ref()
                    .and_then(|l| own.get(l))
                    .is_some_and(|s| c.edge_map()[s] == q);
                if !ok {
                    let name = x
                        .label
                        .as_ref()
                        .map_or("unlabeled".to_owned(), |l| format!("`{l}`"));
                    out.push(violation(
                        v,
                        format!("preimage {name} over node branch `{p}` is not a node over `{q}`"),
                    ));
                }
            }
        }
    }
    CheckOutcome::from(out)
}

/// Condition 2: over each smooth target point at most one preimage is
/// ramified, with index at most two.
fn check_simple_branching(c: &GraphCover) -> CheckOutcome {
    let mut out = Vec::new();
    for (w, _) in c.target().vertices() {
        for p in c.smooth_points(w) {
            let ramification: u32 = c.fiber_over(w, &p).iter().map(|(_, _, e)| e - 1).sum();
            if ramification > 1 {
                out.push(violation(
                    &p,
                    format!("smooth point with total ramification {ramification}"),
                ));
            }
        }
    }
    CheckOutcome::from(out)
}

/// Condition 3: the target, marked at its smooth branch points, is stable.
fn check_stable_target(c: &GraphCover) -> CheckOutcome {
    let g = stability_graph(c);
    let mut out = Vec::new();
    for (w, genus) in g.vertices() {
        if 2 * i64::from(genus) - 2 + g.special_points(w) as i64 <= 0 {
            out.push(violation(w, "unstable target component"));
        }
    }
    if out.is_empty() && !g.is_stable() {
        out.push(violation("target", "unstable pointed curve"));
    }
    CheckOutcome::from(out)
}

/// Condition 3′: no target node has both branches on one component.
fn check_no_internal_nodes(c: &GraphCover) -> CheckOutcome {
    CheckOutcome::from(
        c.target()
            .loops()
            .map(|e| violation(e, "internal node of the target"))
            .collect(),
    )
}

/// Condition 4: both branches of a source node have the node's index.
fn check_edge_indices(c: &GraphCover) -> CheckOutcome {
    let mut out = Vec::new();
    for (s, _) in c.source().edges() {
        let index = c.edge_index()[s];
        for (v, label) in c.source().half_end_labels(s).unwrap() {
            if let Some((_, e)) = c.datum(&v).locate(&label) {
                if e != index {
                    out.push(violation(
                        s,
                        format!("branch `{label}` on `{v}` has index {e}, node has index {index}"),
                    ));
                }
            }
        }
    }
    CheckOutcome::from(out)
}

fn check_degrees(c: &GraphCover) -> CheckOutcome {
    let mut out = Vec::new();
    let d = c.degree();
    for (w, _) in c.target().vertices() {
        let sum: u32 = c.over(w).iter().map(|v| c.datum(v).degree).sum();
        if sum != d {
            out.push(violation(
                w,
                format!("local degrees sum to {sum}, expected {d}"),
            ));
        }
    }
    for (q, _) in c.target().edges() {
        let sum: u32 = c.edges_over(q).iter().map(|s| c.edge_index()[*s]).sum();
        if sum != d {
            out.push(violation(
                q,
                format!("indices over the node sum to {sum}, expected {d}"),
            ));
        }
    }
    CheckOutcome::from(out)
}

fn check_rh(c: &GraphCover) -> CheckOutcome {
    let mut out = Vec::new();
    let mut by_vertex: BTreeMap<&VertexId, String> = BTreeMap::new();
    for (v, b) in c.vertex_data() {
        let w = &c.vertex_map()[v];
        if Some(b.source_genus) != c.source().genus_of(v) {
            by_vertex.insert(
                v,
                format!(
                    "datum source genus {} differs from the component",
                    b.source_genus
                ),
            );
        } else if Some(b.target_genus) != c.target().genus_of(w) {
            by_vertex.insert(
                v,
                format!("datum target genus {} differs from `{w}`", b.target_genus),
            );
        } else {
            let rh = validate_rh(b);
            if !rh.valid {
                by_vertex.insert(v, rh.reason.unwrap_or_default());
            }
        }
    }
    out.extend(by_vertex.into_iter().map(|(v, r)| violation(v, r)));
    CheckOutcome::from(out)
}
