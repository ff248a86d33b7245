//! (d,h)-ellipticity of irreducible nodal curves.
//!
//! An irreducible curve with normalization `C_n` and nodes `n_1, …, n_δ` is
//! (d,h)-elliptic exactly when `C_n` has a degree-`d` map to a smooth curve
//! of genus `h′ ≤ h` such that, after reordering, the first `δ_0` nodes have
//! both branches in one fiber and the rest split into `s = h − h′` groups
//! whose first and second branches fill two distinct fibers, with equal
//! ramification at the two branches of each node. An
//! [`EllipticityCertificate`] records that data together with a monodromy
//! witness for the map.

mod hyperelliptic;
mod realize;
mod search;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::curve_graph::DualGraph;
use crate::ids::{EdgeId, PointLabel, VertexId};
use crate::smooth_cover::{
    validate_rh, verify_witness, BranchDatum, MonodromyWitness, OracleError,
};

pub use hyperelliptic::{classify_hyperelliptic_one_node, BranchRelation, HyperellipticClass};
pub use realize::{judge_specific, realize_certificate};
pub use search::{decide, decide_one_node, decide_one_node_via, OneNodeRoute};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticityError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid curve data: {0}")]
    InvalidCurve(String),
    #[error("normalization of genus {0} has no unique hyperelliptic map")]
    AmbiguousHyperelliptic(u32),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

impl EllipticityError {
    pub fn code(&self) -> &'static str {
        match self {
            EllipticityError::InvalidParameters(_) => "invalid_parameters",
            EllipticityError::InvalidCurve(_) => "invalid_curve",
            EllipticityError::AmbiguousHyperelliptic(_) => "ambiguous_hyperelliptic_structure",
            EllipticityError::Oracle(e) => e.code(),
            EllipticityError::Construction(e) => e.code(),
        }
    }
}

/// A node with the labels of its two branches on the normalization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeBranches {
    pub id: EdgeId,
    pub branches: [PointLabel; 2],
}

/// Discrete data of an irreducible nodal curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct IrreducibleCurveData {
    normalization_genus: u32,
    nodes: Vec<NodeBranches>,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    normalization_genus: u32,
    nodes: Vec<NodeBranches>,
}

impl TryFrom<RawCurve> for IrreducibleCurveData {
    type Error = EllipticityError;

    fn try_from(raw: RawCurve) -> Result<Self, Self::Error> {
        IrreducibleCurveData::new(raw.normalization_genus, raw.nodes)
    }
}

impl From<IrreducibleCurveData> for RawCurve {
    fn from(c: IrreducibleCurveData) -> Self {
        RawCurve {
            normalization_genus: c.normalization_genus,
            nodes: c.nodes,
        }
    }
}

impl IrreducibleCurveData {
    /// Node ids and branch labels must be distinct, and the arithmetic genus
    /// positive.
    pub fn new(
        normalization_genus: u32,
        nodes: Vec<NodeBranches>,
    ) -> Result<Self, EllipticityError> {
        let mut ids = BTreeSet::new();
        let mut labels = BTreeSet::new();
        for n in &nodes {
            if !ids.insert(&n.id) {
                return Err(EllipticityError::InvalidCurve(format!(
                    "node {} listed twice",
                    n.id
                )));
            }
            for b in &n.branches {
                if !labels.insert(b) {
                    return Err(EllipticityError::InvalidCurve(format!(
                        "branch label {b} used twice"
                    )));
                }
            }
        }
        if normalization_genus as usize + nodes.len() == 0 {
            return Err(EllipticityError::InvalidCurve(
                "a smooth rational curve is not stable".into(),
            ));
        }
        Ok(IrreducibleCurveData {
            normalization_genus,
            nodes,
        })
    }

    /// Nodes named `n1, …, nδ` with branches `n{i}.1`, `n{i}.2`.
    pub fn with_nodes(normalization_genus: u32, delta: usize) -> Result<Self, EllipticityError> {
        let nodes = (1..=delta)
            .map(|i| NodeBranches {
                id: EdgeId::new(format!("n{i}")),
                branches: [
                    PointLabel::new(format!("n{i}.1")),
                    PointLabel::new(format!("n{i}.2")),
                ],
            })
            .collect();
        Self::new(normalization_genus, nodes)
    }

    pub fn normalization_genus(&self) -> u32 {
        self.normalization_genus
    }

    pub fn nodes(&self) -> &[NodeBranches] {
        &self.nodes
    }

    pub fn delta(&self) -> usize {
        self.nodes.len()
    }

    pub fn arithmetic_genus(&self) -> u32 {
        self.normalization_genus + self.nodes.len() as u32
    }

    pub fn node(&self, id: &EdgeId) -> Option<&NodeBranches> {
        self.nodes.iter().find(|n| &n.id == id)
    }

    /// One component of genus `g_n` with a loop per node.
    pub fn dual_graph(&self) -> DualGraph {
        let c = VertexId::new("c");
        DualGraph::new(
            [(c.clone(), self.normalization_genus)],
            self.nodes
                .iter()
                .map(|n| (n.id.clone(), [c.clone(), c.clone()])),
            std::iter::empty(),
        )
        .expect("one vertex with loops is a valid graph")
    }

    fn branch_labels(&self) -> BTreeSet<&PointLabel> {
        self.nodes.iter().flat_map(|n| &n.branches).collect()
    }
}

/// Data witnessing (d,h)-ellipticity of an irreducible curve.
///
/// Nodes not listed in `groups` form the block whose branches share a
/// fiber; `delta0` records its size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticityCertificate {
    /// Map from the normalization; its target genus is `h′`.
    pub cover: BranchDatum,
    pub delta0: usize,
    pub groups: Vec<Vec<EdgeId>>,
    pub point_pairs: Vec<(PointLabel, PointLabel)>,
    pub witness: MonodromyWitness,
}

impl EllipticityCertificate {
    pub fn h_prime(&self) -> u32 {
        self.cover.target_genus
    }
}

/// Which condition a candidate or certificate fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefutationTag {
    /// Branches of a shared-fiber node lie in different fibers.
    A,
    /// A group's branches do not fill the fibers over its two points.
    B,
    /// Paired branches have different indices.
    C,
    /// The number of groups is not `h − h′`, or cannot be.
    S,
    Rh,
    Monodromy,
    /// The certificate does not fit the curve.
    Malformed,
    /// A candidate was beyond the search bounds.
    Bounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h_prime: Option<u32>,
    pub tag: RefutationTag,
    pub detail: String,
}

impl Refutation {
    fn new(h_prime: Option<u32>, tag: RefutationTag, detail: impl Into<String>) -> Self {
        Refutation {
            h_prime,
            tag,
            detail: detail.into(),
        }
    }
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub valid: bool,
    pub refutations: Vec<Refutation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    CertifiedYes,
    NoCertificateFound,
    UndecidableWithoutCoverInput,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<EllipticityCertificate>,
    pub refutations: Vec<Refutation>,
    /// What the decision is about.
    pub scope: String,
}

pub(crate) const SEARCH_SCOPE: &str =
    "existence over all irreducible curves with this normalization genus \
     and number of nodes, decided on discrete branch data; a specific curve needs its map as input";
pub(crate) const SPECIFIC_SCOPE: &str = "the given curve with the given map from its normalization";

pub(crate) fn check_parameters(d: u32, h: u32) -> Result<(), EllipticityError> {
    if d < 2 || h < 1 {
        return Err(EllipticityError::InvalidParameters(format!(
            "need d >= 2 and h >= 1, got d = {d}, h = {h}"
        )));
    }
    Ok(())
}

/// Checks a certificate against the curve and `(d, h)`. Failures are
/// reported, not raised; only out-of-range `d` or `h` is an error.
pub fn verify_certificate(
    curve: &IrreducibleCurveData,
    d: u32,
    h: u32,
    cert: &EllipticityCertificate,
) -> Result<CertificateReport, EllipticityError> {
    check_parameters(d, h)?;
    let mut out = Vec::new();
    let hp = Some(cert.h_prime());
    let mut fail = |tag, detail: String| out.push(Refutation::new(hp, tag, detail));
    let b = &cert.cover;

    let structural = b.structural_errors();
    if !structural.is_empty() {
        for e in structural {
            fail(RefutationTag::Malformed, e);
        }
        return Ok(CertificateReport {
            valid: false,
            refutations: out,
        });
    }
    if b.degree != d {
        fail(
            RefutationTag::Malformed,
            format!("cover has degree {}, not {d}", b.degree),
        );
    }
    if b.source_genus != curve.normalization_genus() {
        fail(
            RefutationTag::Malformed,
            format!(
                "cover source genus {} differs from normalization genus {}",
                b.source_genus,
                curve.normalization_genus()
            ),
        );
    }
    for l in curve.branch_labels() {
        if b.locate(l).is_none() {
            fail(
                RefutationTag::Malformed,
                format!("branch {l} is not labeled in the cover"),
            );
        }
    }

    // Group structure.
    let s = cert.groups.len();
    if cert.h_prime() > h || s as u32 != h - cert.h_prime() {
        fail(
            RefutationTag::S,
            format!(
                "{s} groups but h - h' = {}",
                i64::from(h) - i64::from(cert.h_prime())
            ),
        );
    }
    if cert.point_pairs.len() != s {
        fail(
            RefutationTag::S,
            format!("{} point pairs for {s} groups", cert.point_pairs.len()),
        );
    }
    let mut grouped: BTreeSet<&EdgeId> = BTreeSet::new();
    for g in &cert.groups {
        if g.is_empty() {
            fail(RefutationTag::B, "empty group".into());
        }
        for n in g {
            if curve.node(n).is_none() {
                fail(RefutationTag::Malformed, format!("unknown node {n}"));
            } else if !grouped.insert(n) {
                fail(RefutationTag::B, format!("node {n} is in two groups"));
            }
        }
    }
    let block: Vec<&NodeBranches> = curve
        .nodes()
        .iter()
        .filter(|n| !grouped.contains(&n.id))
        .collect();
    if block.len() != cert.delta0 {
        fail(
            RefutationTag::A,
            format!(
                "delta0 is {} but {} nodes are outside the groups",
                cert.delta0,
                block.len()
            ),
        );
    }

    // (a)
    for n in &block {
        let [p1, p2] = n.branches.each_ref().map(|l| b.locate(l).map(|(p, _)| p));
        if let (Some(p1), Some(p2)) = (p1, p2) {
            if p1 != p2 {
                fail(
                    RefutationTag::A,
                    format!("branches of {} lie over {p1} and {p2}", n.id),
                );
            }
        }
    }

    // Distinct points.
    let points: Vec<&PointLabel> = cert.point_pairs.iter().flat_map(|(a, b)| [a, b]).collect();
    if points.iter().collect::<BTreeSet<_>>().len() != points.len() {
        fail(
            RefutationTag::B,
            "the group points are not pairwise distinct".into(),
        );
    }

    // (b) and (c)
    for (k, (g, (q1, q2))) in cert.groups.iter().zip(&cert.point_pairs).enumerate() {
        let (Some(f1), Some(f2)) = (b.fiber(q1), b.fiber(q2)) else {
            fail(
                RefutationTag::B,
                format!("group {k}: no fiber over {q1} or {q2}"),
            );
            continue;
        };
        let labels = |f: &crate::smooth_cover::Fiber| -> BTreeSet<PointLabel> {
            f.preimages.iter().filter_map(|x| x.label.clone()).collect()
        };
        let (over1, over2) = (labels(f1), labels(f2));
        let mut expected = 0;
        for n in g {
            let Some(node) = curve.node(n) else { continue };
            let [a, c] = &node.branches;
            let split = (over1.contains(a) && over2.contains(c))
                || (over1.contains(c) && over2.contains(a));
            if !split {
                fail(
                    RefutationTag::B,
                    format!("group {k}: branches of {n} are not over {q1} and {q2}"),
                );
            }
            expected += 1;
            let ea = b.locate(a).map(|(_, e)| e);
            let ec = b.locate(c).map(|(_, e)| e);
            if ea != ec {
                fail(
                    RefutationTag::C,
                    format!("branches of {n} have indices {ea:?} and {ec:?}"),
                );
            }
        }
        if f1.preimages.len() != expected || f2.preimages.len() != expected {
            fail(
                RefutationTag::B,
                format!("group {k}: fibers over {q1}, {q2} are not exactly its branches"),
            );
        }
    }

    let rh = validate_rh(b);
    if !rh.valid {
        fail(RefutationTag::Rh, rh.reason.unwrap_or_default());
    }
    if let Err(e) = verify_witness(b, &cert.witness) {
        fail(RefutationTag::Monodromy, e.to_string());
    }
    Ok(CertificateReport {
        valid: out.is_empty(),
        refutations: out,
    })
}

/// Counts of refutations by tag.
pub fn refutation_counts(refutations: &[Refutation]) -> BTreeMap<RefutationTag, usize> {
    let mut out = BTreeMap::new();
    for r in refutations {
        *out.entry(r.tag).or_default() += 1;
    }
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::smooth_cover::{Fiber, HurwitzOracle, Preimage};

    pub fn one_node(g: u32) -> IrreducibleCurveData {
        IrreducibleCurveData::with_nodes(g, 1).unwrap()
    }

    pub fn simple_points(n: usize, d: u32) -> Vec<Fiber> {
        (0..n)
            .map(|i| {
                let mut pre = vec![Preimage::unlabeled(2)];
                pre.extend((2..d).map(|_| Preimage::unlabeled(1)));
                Fiber::new(format!("b{i}"), pre)
            })
            .collect()
    }

    pub fn certify(
        cover: BranchDatum,
        delta0: usize,
        groups: Vec<Vec<&str>>,
        pairs: Vec<(&str, &str)>,
    ) -> EllipticityCertificate {
        let witness = HurwitzOracle::shared()
            .is_realizable(&cover)
            .unwrap()
            .unwrap();
        EllipticityCertificate {
            cover,
            delta0,
            groups: groups
                .into_iter()
                .map(|g| g.into_iter().map(EdgeId::new).collect())
                .collect(),
            point_pairs: pairs
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
            witness,
        }
    }

    /// Route (a): genus 2 onto an elliptic curve, both branches in one fiber.
    pub fn bielliptic_shared_fiber() -> EllipticityCertificate {
        let mut fibers = simple_points(2, 2);
        fibers.push(Fiber::new(
            "x",
            vec![Preimage::labeled("n1.1", 1), Preimage::labeled("n1.2", 1)],
        ));
        certify(BranchDatum::new(2, 2, 1, fibers), 1, vec![], vec![])
    }

    /// Route (b): hyperelliptic genus 2, both branches Weierstrass points.
    pub fn hyperelliptic_two_weierstrass() -> EllipticityCertificate {
        let mut fibers = simple_points(4, 2);
        fibers.push(Fiber::new("q1", vec![Preimage::labeled("n1.1", 2)]));
        fibers.push(Fiber::new("q2", vec![Preimage::labeled("n1.2", 2)]));
        certify(
            BranchDatum::new(2, 2, 0, fibers),
            0,
            vec![vec!["n1"]],
            vec![("q1", "q2")],
        )
    }
}
