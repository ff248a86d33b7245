//! Re-gluing branches of normalized nodes into a cover.
//!
//! [`glue_equal_images`] joins two source points with a common image through a
//! rational tail; [`glue_genus_raise`] joins the full fibers over two target
//! points through a rational bridge, raising the target genus by one.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph_cover::{complete_skipping_marked, CoverError, CoverParts, GraphCover};
use crate::ids::{LegId, PointLabel, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("legs {0} and {1} have different images")]
    ImagesDiffer(LegId, LegId),
    #[error("gluing at {0} would not give a node: {1}")]
    NonNodal(PointLabel, String),
    #[error("fiber over {0} is not exactly the listed legs")]
    FiberNotFull(PointLabel),
    #[error("legs {0} and {1} have different ramification indices")]
    IndexMismatch(LegId, LegId),
    #[error("both gluing points are {0}")]
    PointsEqual(PointLabel),
    #[error("no source leg {0}")]
    UnknownLeg(LegId),
    #[error("invalid gluing spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

impl ConstructionError {
    pub fn code(&self) -> &'static str {
        match self {
            ConstructionError::ImagesDiffer(..) => "images_differ",
            ConstructionError::NonNodal(..) => "non_nodal",
            ConstructionError::FiberNotFull(_) => "fiber_not_full",
            ConstructionError::IndexMismatch(..) => "index_mismatch",
            ConstructionError::PointsEqual(_) => "points_equal",
            ConstructionError::UnknownLeg(_) => "unknown_leg",
            ConstructionError::InvalidSpec(_) => "invalid_spec",
            ConstructionError::Cover(e) => e.code(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GluingMode {
    EqualImages,
    GenusRaise { q1: PointLabel, q2: PointLabel },
}

/// Source legs to glue pairwise, with the gluing mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingSpec {
    pub cover: GraphCover,
    pub pairs: Vec<(LegId, LegId)>,
    #[serde(flatten)]
    pub mode: GluingMode,
}

/// A source leg with its component, image and index.
struct Located {
    vertex: VertexId,
    label: PointLabel,
    component: VertexId,
    image: PointLabel,
    e: u32,
}

fn locate(c: &GraphCover, l: &LegId) -> Result<Located, ConstructionError> {
    let v = c
        .source()
        .leg_vertex(l)
        .ok_or_else(|| ConstructionError::UnknownLeg(l.clone()))?;
    let label = PointLabel::from(l);
    let (image, e) = c
        .datum(v)
        .locate(&label)
        .ok_or_else(|| ConstructionError::UnknownLeg(l.clone()))?;
    Ok(Located {
        vertex: v.clone(),
        component: c.vertex_map()[v].clone(),
        image: image.clone(),
        label,
        e,
    })
}

fn distinct_legs(pairs: &[(LegId, LegId)]) -> Result<(), ConstructionError> {
    let mut seen = BTreeSet::new();
    for l in pairs.iter().flat_map(|(a, b)| [a, b]) {
        if !seen.insert(l) {
            return Err(ConstructionError::InvalidSpec(format!(
                "leg {l} listed twice"
            )));
        }
    }
    Ok(())
}

/// Glues two source legs lying over the same target point.
///
/// The image point becomes a node to a new rational tail. The two legs become
/// nodes to one rational piece over the tail, of degree the sum of their
/// indices; the other preimages get pieces of their own. Remaining
/// non-simple smooth branching is then completed.
pub fn glue_equal_images(s: &GluingSpec) -> Result<GraphCover, ConstructionError> {
    if s.mode != GluingMode::EqualImages {
        return Err(ConstructionError::InvalidSpec(
            "expected equal_images mode".into(),
        ));
    }
    let [(l1, l2)] = s.pairs.as_slice() else {
        return Err(ConstructionError::InvalidSpec(
            "equal_images takes exactly one pair".into(),
        ));
    };
    let c = &s.cover;
    let a = locate(c, l1)?;
    if l1 == l2 {
        return Err(ConstructionError::NonNodal(
            a.image,
            format!("leg {l1} glued to itself"),
        ));
    }
    let b = locate(c, l2)?;
    if a.component != b.component || a.image != b.image {
        return Err(ConstructionError::ImagesDiffer(l1.clone(), l2.clone()));
    }
    let p = &a.image;
    if c.target().leg_vertex(&LegId::new(p.as_str())).is_some() {
        return Err(ConstructionError::NonNodal(
            p.clone(),
            "a target leg sits there".into(),
        ));
    }
    let others = c
        .fiber_over(&a.component, p)
        .into_iter()
        .filter(|(v, label, _)| {
            label.as_ref().is_some_and(|x| {
                x != &a.label
                    && x != &b.label
                    && c.source().leg_vertex(&LegId::new(x.as_str())) == Some(v)
            })
        });
    if let Some((_, Some(x), _)) = others.into_iter().next() {
        return Err(ConstructionError::NonNodal(
            p.clone(),
            format!("source leg {x} also lies over it"),
        ));
    }

    let mut parts = CoverParts::from(c.clone());
    parts.sprout_tail(&a.component, p, Some((&a.label, &b.label)));
    let glued = parts.finish()?;
    Ok(complete_skipping_marked(&glued)?)
}

/// Glues the full fibers over two target points through a rational bridge.
///
/// Pair `i` lists the legs over `q1` and `q2` joined through a rational
/// piece of degree `e_i`, totally ramified at both ends. The target gains a
/// rational component through `q1` and `q2`. Remaining non-simple smooth
/// branching is then completed.
pub fn glue_genus_raise(s: &GluingSpec) -> Result<GraphCover, ConstructionError> {
    let GluingMode::GenusRaise { q1, q2 } = &s.mode else {
        return Err(ConstructionError::InvalidSpec(
            "expected genus_raise mode".into(),
        ));
    };
    if q1 == q2 {
        return Err(ConstructionError::PointsEqual(q1.clone()));
    }
    if s.pairs.is_empty() {
        return Err(ConstructionError::InvalidSpec("no pairs to glue".into()));
    }
    distinct_legs(&s.pairs)?;
    let c = &s.cover;
    let mut pairs = Vec::new();
    let mut sides: [Option<VertexId>; 2] = [None, None];
    for (l1, l2) in &s.pairs {
        let a = locate(c, l1)?;
        let b = locate(c, l2)?;
        for (k, (x, q)) in [(&a, q1), (&b, q2)].into_iter().enumerate() {
            if &x.image != q || sides[k].get_or_insert(x.component.clone()) != &x.component {
                return Err(ConstructionError::FiberNotFull(q.clone()));
            }
        }
        if a.e != b.e {
            return Err(ConstructionError::IndexMismatch(l1.clone(), l2.clone()));
        }
        pairs.push(crate::graph_cover::BridgePair {
            v1: a.vertex,
            l1: a.label,
            v2: b.vertex,
            l2: b.label,
            e: a.e,
        });
    }
    let [Some(w1), Some(w2)] = sides else {
        unreachable!()
    };

    // The listed legs must be the whole fiber.
    for (w, q, listed) in [
        (
            &w1,
            q1,
            pairs
                .iter()
                .map(|p| (&p.v1, &p.l1))
                .collect::<BTreeSet<_>>(),
        ),
        (
            &w2,
            q2,
            pairs
                .iter()
                .map(|p| (&p.v2, &p.l2))
                .collect::<BTreeSet<_>>(),
        ),
    ] {
        let fiber = c.fiber_over(w, q);
        let full = fiber.len() == listed.len()
            && fiber
                .iter()
                .all(|(v, label, _)| label.as_ref().is_some_and(|l| listed.contains(&(v, l))));
        if !full {
            return Err(ConstructionError::FiberNotFull(q.clone()));
        }
    }

    let mut parts = CoverParts::from(c.clone());
    parts.raise_genus(&w1, q1, &w2, q2, &pairs);
    let glued = parts.finish()?;
    Ok(complete_skipping_marked(&glued)?)
}
