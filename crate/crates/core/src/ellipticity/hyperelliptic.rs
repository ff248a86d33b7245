//! One-node curves with hyperelliptic normalization.

use serde::{Deserialize, Serialize};

use super::EllipticityError;
use crate::ids::PointLabel;
use crate::smooth_cover::{BranchDatum, Fiber, Preimage};

/// Position of the two node branches relative to the hyperelliptic map of
/// the normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum BranchRelation {
    /// Exchanged by the hyperelliptic involution.
    ConjugatePair,
    /// Both Weierstrass points.
    TwoWeierstrass,
    WeierstrassAndGeneric,
    /// Neither Weierstrass nor conjugate.
    GenericPair,
}

impl BranchRelation {
    pub const ALL: [BranchRelation; 4] = [
        BranchRelation::ConjugatePair,
        BranchRelation::TwoWeierstrass,
        BranchRelation::WeierstrassAndGeneric,
        BranchRelation::GenericPair,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperellipticClass {
    Hyperelliptic,
    Bielliptic,
    Neither,
}

/// The hyperelliptic map of a genus-`g` curve with the node branches `a`,
/// `b` placed according to `relation`.
fn hyperelliptic_map(g: u32, relation: BranchRelation) -> BranchDatum {
    let (a, b) = (PointLabel::new("a"), PointLabel::new("b"));
    let weierstrass = |name: &str, label: Option<&PointLabel>| {
        let pre = match label {
            Some(l) => Preimage::labeled(l.clone(), 2),
            None => Preimage::unlabeled(2),
        };
        Fiber::new(name, vec![pre])
    };
    let generic = |name: &str, labels: &[&PointLabel]| {
        let mut pre: Vec<Preimage> = labels
            .iter()
            .map(|l| Preimage::labeled((*l).clone(), 1))
            .collect();
        pre.resize(2, Preimage::unlabeled(1));
        Fiber::new(name, pre)
    };
    let mut fibers = Vec::new();
    let mut marked_weierstrass = 0;
    match relation {
        BranchRelation::ConjugatePair => fibers.push(generic("x", &[&a, &b])),
        BranchRelation::TwoWeierstrass => {
            fibers.push(weierstrass("w.a", Some(&a)));
            fibers.push(weierstrass("w.b", Some(&b)));
            marked_weierstrass = 2;
        }
        BranchRelation::WeierstrassAndGeneric => {
            fibers.push(weierstrass("w.a", Some(&a)));
            fibers.push(generic("x", &[&b]));
            marked_weierstrass = 1;
        }
        BranchRelation::GenericPair => {
            fibers.push(generic("x", &[&a]));
            fibers.push(generic("y", &[&b]));
        }
    }
    for i in marked_weierstrass..2 * g + 2 {
        fibers.push(weierstrass(&format!("w{i}"), None));
    }
    BranchDatum::new(2, g, 0, fibers)
}

/// Classifies a one-node curve whose normalization has genus `g ≥ 2` and a
/// unique hyperelliptic map, by the position of the node branches.
///
/// The curve is hyperelliptic when that map identifies the branches, and
/// bielliptic when the branches lie over two distinct points whose fibers
/// they fill with equal index (then totally ramified, so a genus-raising
/// bridge over the two points gives an elliptic target).
pub fn classify_hyperelliptic_one_node(
    g: u32,
    relation: BranchRelation,
) -> Result<HyperellipticClass, EllipticityError> {
    if g < 2 {
        return Err(EllipticityError::AmbiguousHyperelliptic(g));
    }
    let map = hyperelliptic_map(g, relation);
    let (pa, ea) = map.locate(&"a".into()).expect("branch a is placed");
    let (pb, eb) = map.locate(&"b".into()).expect("branch b is placed");
    if pa == pb {
        return Ok(HyperellipticClass::Hyperelliptic);
    }
    let fills = |p: &PointLabel, label: &str| {
        let f = map.fiber(p).unwrap();
        f.preimages.len() == 1
            && f.preimages[0]
                .label
                .as_ref()
                .is_some_and(|l| l.as_str() == label)
    };
    if ea == eb && fills(pa, "a") && fills(pb, "b") {
        return Ok(HyperellipticClass::Bielliptic);
    }
    Ok(HyperellipticClass::Neither)
}
