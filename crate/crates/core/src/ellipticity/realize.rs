//! From certificates to covers, and judging a curve with a given map.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    check_parameters, verify_certificate, Decision, EllipticityCertificate, EllipticityError,
    IrreducibleCurveData, Refutation, RefutationTag, Verdict, SPECIFIC_SCOPE,
};
use crate::constructions::{glue_equal_images, glue_genus_raise, GluingMode, GluingSpec};
use crate::curve_graph::DualGraph;
use crate::graph_cover::{CoverError, GraphCover};
use crate::ids::{EdgeId, LegId, PointLabel, VertexId};
use crate::smooth_cover::{BranchDatum, HurwitzOracle, OracleError};

/// Builds the pseudo-admissible cover a certificate describes: the map of
/// the normalization with the shared-fiber nodes glued over common images
/// and each group glued through a rational bridge. Its source is stably
/// equivalent to the curve and its target has genus `h′ + s`.
///
/// Shared-fiber nodes must lie in distinct fibers.
pub fn realize_certificate(
    curve: &IrreducibleCurveData,
    cert: &EllipticityCertificate,
) -> Result<GraphCover, EllipticityError> {
    let c = VertexId::new("c");
    let legs: Vec<(LegId, VertexId)> = curve
        .nodes()
        .iter()
        .flat_map(|n| &n.branches)
        .map(|l| (LegId::new(l.as_str()), c.clone()))
        .collect();
    let source = DualGraph::new([(c.clone(), curve.normalization_genus())], [], legs)
        .map_err(|e| EllipticityError::InvalidCurve(e.to_string()))?;
    let mut cover = GraphCover::new(
        source,
        DualGraph::smooth("b", cert.h_prime()),
        cert.cover.degree,
        BTreeMap::from([(c.clone(), VertexId::new("b"))]),
        BTreeMap::from([(c, cert.cover.clone())]),
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .map_err(crate::constructions::ConstructionError::from)?;

    let grouped: BTreeSet<&EdgeId> = cert.groups.iter().flatten().collect();
    for n in curve.nodes().iter().filter(|n| !grouped.contains(&n.id)) {
        let [a, b] = &n.branches;
        cover = glue_equal_images(&GluingSpec {
            cover,
            pairs: vec![(LegId::new(a.as_str()), LegId::new(b.as_str()))],
            mode: GluingMode::EqualImages,
        })?;
    }
    for (group, (q1, q2)) in cert.groups.iter().zip(&cert.point_pairs) {
        let mut pairs = Vec::new();
        for id in group {
            let node = curve
                .node(id)
                .ok_or_else(|| EllipticityError::InvalidCurve(format!("unknown node {id}")))?;
            let [a, b] = &node.branches;
            let over_q1 = cert.cover.locate(a).is_some_and(|(p, _)| p == q1);
            let (x, y) = if over_q1 { (a, b) } else { (b, a) };
            pairs.push((LegId::new(x.as_str()), LegId::new(y.as_str())));
        }
        cover = glue_genus_raise(&GluingSpec {
            cover,
            pairs,
            mode: GluingMode::GenusRaise {
                q1: q1.clone(),
                q2: q2.clone(),
            },
        })?;
    }
    Ok(cover)
}

/// Reads off a certificate from a given map of the normalization: nodes
/// with both branches in one fiber form the shared block, the others are
/// grouped by the pair of points under their branches.
fn certificate_from_map(
    curve: &IrreducibleCurveData,
    map: &BranchDatum,
    oracle: &HurwitzOracle,
) -> Result<Result<EllipticityCertificate, Refutation>, EllipticityError> {
    let hp = Some(map.target_genus);
    let mut groups: BTreeMap<(PointLabel, PointLabel), Vec<EdgeId>> = BTreeMap::new();
    let mut delta0 = 0;
    for n in curve.nodes() {
        let located = n
            .branches
            .each_ref()
            .map(|l| map.locate(l).map(|(p, _)| p.clone()));
        let [Some(p1), Some(p2)] = located else {
            return Ok(Err(Refutation::new(
                hp,
                RefutationTag::Malformed,
                format!("branches of {} are not labeled in the map", n.id),
            )));
        };
        if p1 == p2 {
            delta0 += 1;
        } else {
            let key = if p1 < p2 { (p1, p2) } else { (p2, p1) };
            groups.entry(key).or_default().push(n.id.clone());
        }
    }
    let witness = match oracle.is_realizable(map) {
        Ok(Some(w)) => w,
        Ok(None) => {
            return Ok(Err(Refutation::new(
                hp,
                RefutationTag::Monodromy,
                "the map's branch data is not realized by a connected cover",
            )))
        }
        Err(OracleError::Malformed(m)) => {
            return Ok(Err(Refutation::new(hp, RefutationTag::Malformed, m)))
        }
        Err(e) => return Err(e.into()),
    };
    let (point_pairs, groups) = groups.into_iter().unzip();
    Ok(Ok(EllipticityCertificate {
        cover: map.clone(),
        delta0,
        groups,
        point_pairs,
        witness,
    }))
}

/// Decides (d,h)-ellipticity of a specific curve, which needs the map of its
/// normalization. Without one the answer is
/// [`Decision::UndecidableWithoutCoverInput`].
pub fn judge_specific(
    curve: &IrreducibleCurveData,
    d: u32,
    h: u32,
    map: Option<&BranchDatum>,
    oracle: &HurwitzOracle,
) -> Result<Verdict, EllipticityError> {
    check_parameters(d, h)?;
    let Some(map) = map else {
        return Ok(Verdict {
            decision: Decision::UndecidableWithoutCoverInput,
            certificate: None,
            refutations: vec![],
            scope:
                "a specific curve is decided only relative to a given map from its normalization"
                    .into(),
        });
    };
    let no = |refutations| Verdict {
        decision: Decision::NoCertificateFound,
        certificate: None,
        refutations,
        scope: SPECIFIC_SCOPE.into(),
    };
    let cert = match certificate_from_map(curve, map, oracle)? {
        Ok(c) => c,
        Err(r) => return Ok(no(vec![r])),
    };
    let report = verify_certificate(curve, d, h, &cert)?;
    if !report.valid {
        return Ok(no(report.refutations));
    }
    Ok(Verdict {
        decision: Decision::CertifiedYes,
        certificate: Some(cert),
        refutations: vec![],
        scope: SPECIFIC_SCOPE.into(),
    })
}

impl From<CoverError> for EllipticityError {
    fn from(e: CoverError) -> Self {
        EllipticityError::Construction(e.into())
    }
}
