//! Completion of a cover to a pseudo-admissible one by sprouting tails.

use super::validate::{validate, ValidationMode};
use super::{CoverError, CoverParts, GraphCover};
use crate::ids::{LegId, PointLabel, VertexId};

/// Smooth target points where condition 2 fails, with their component.
fn bad_points(c: &GraphCover) -> Vec<(VertexId, PointLabel)> {
    let mut out = Vec::new();
    for (w, _) in c.target().vertices() {
        for p in c.smooth_points(w) {
            let ramification: u32 = c.fiber_over(w, &p).iter().map(|(_, _, e)| e - 1).sum();
            if ramification > 1 {
                out.push((w.clone(), p));
            }
        }
    }
    out
}

/// Whether a target leg sits at `p` or a source leg lies over it.
fn is_marked(c: &GraphCover, w: &VertexId, p: &PointLabel) -> bool {
    c.target().leg_vertex(&LegId::new(p.as_str())).is_some()
        || c.fiber_over(w, p).iter().any(|(v, label, _)| {
            label
                .as_ref()
                .is_some_and(|l| c.source().leg_vertex(&LegId::new(l.as_str())) == Some(v))
        })
}

fn sprout_all(c: &GraphCover, points: &[(VertexId, PointLabel)]) -> Result<GraphCover, CoverError> {
    if points.is_empty() {
        return Ok(c.clone());
    }
    let mut parts = CoverParts::from(c.clone());
    for (w, p) in points {
        parts.sprout_tail(w, p, None);
    }
    parts.finish()
}

/// Resolves every smooth point with non-simple branching: the point becomes
/// a node to a rational tail, and each preimage of index `e` becomes a node
/// to a degree-`e` rational piece with `e − 1` simple branch points.
///
/// Requires conditions 1, 3′ and 4 and degree and Riemann–Hurwitz
/// consistency; marked points (legs) with non-simple branching cannot be
/// resolved. The input cover is a subcover of the output.
pub fn complete_cover(c: &GraphCover) -> Result<GraphCover, CoverError> {
    let report = validate(c, ValidationMode::Pseudo);
    let precondition = [
        &report.c1,
        &report.c3prime_no_internal_nodes,
        &report.c4,
        &report.degree_consistency,
        &report.rh_consistency,
    ];
    if precondition
        .iter()
        .any(|check| check.as_ref().is_some_and(|o| !o.passed))
    {
        return Err(CoverError::NotCompletable(Box::new(report)));
    }
    let bad = bad_points(c);
    if bad.iter().any(|(w, p)| is_marked(c, w, p)) {
        return Err(CoverError::NotCompletable(Box::new(report)));
    }
    sprout_all(c, &bad)
}

/// [`complete_cover`] without the precondition check, leaving marked points
/// alone. Used after gluings.
pub(crate) fn complete_skipping_marked(c: &GraphCover) -> Result<GraphCover, CoverError> {
    let bad: Vec<_> = bad_points(c)
        .into_iter()
        .filter(|(w, p)| !is_marked(c, w, p))
        .collect();
    sprout_all(c, &bad)
}
