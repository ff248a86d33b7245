//! Isomorphism of decorated dual graphs, ignoring element names.

use std::collections::BTreeMap;

use super::DualGraph;
use crate::ids::VertexId;

/// (genus, legs, loops, valence)
type Signature = (u32, usize, usize, usize);

struct Shape {
    vertices: Vec<VertexId>,
    signature: Vec<Signature>,
    /// Number of non-loop edges between vertex i and j.
    multiplicity: Vec<Vec<usize>>,
}

impl Shape {
    fn of(g: &DualGraph) -> Self {
        let vertices: Vec<VertexId> = g.vertices().map(|(v, _)| v.clone()).collect();
        let index: BTreeMap<&VertexId, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let n = vertices.len();
        let mut multiplicity = vec![vec![0; n]; n];
        let mut loops = vec![0; n];
        for (_, [a, b]) in g.edges() {
            let (i, j) = (index[a], index[b]);
            if i == j {
                loops[i] += 1;
            } else {
                multiplicity[i][j] += 1;
                multiplicity[j][i] += 1;
            }
        }
        let signature = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                (
                    g.genus_of(v).unwrap(),
                    g.legs_at(v).len(),
                    loops[i],
                    g.valence(v),
                )
            })
            .collect();
        Shape {
            vertices,
            signature,
            multiplicity,
        }
    }
}

/// Whether there is a bijection of components, nodes and marked points
/// preserving genera, incidences and leg attachments. Names are ignored.
pub fn are_isomorphic(g: &DualGraph, h: &DualGraph) -> bool {
    isomorphism(g, h).is_some()
}

/// A vertex bijection realising an isomorphism, if one exists.
pub fn isomorphism(g: &DualGraph, h: &DualGraph) -> Option<BTreeMap<VertexId, VertexId>> {
    if g.vertex_count() != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || g.leg_count() != h.leg_count()
    {
        return None;
    }
    let a = Shape::of(g);
    let b = Shape::of(h);
    let mut sa = a.signature.clone();
    let mut sb = b.signature.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    // Most constrained vertices first: rare signatures, then high valence.
    let mut order: Vec<usize> = (0..a.vertices.len()).collect();
    let frequency = |s: &Signature| a.signature.iter().filter(|t| *t == s).count();
    order.sort_by_key(|&i| {
        (
            frequency(&a.signature[i]),
            std::cmp::Reverse(a.signature[i].3),
        )
    });

    let mut image = vec![usize::MAX; a.vertices.len()];
    let mut used = vec![false; b.vertices.len()];
    if extend(&a, &b, &order, 0, &mut image, &mut used) {
        Some(
            image
                .iter()
                .enumerate()
                .map(|(i, &j)| (a.vertices[i].clone(), b.vertices[j].clone()))
                .collect(),
        )
    } else {
        None
    }
}

fn extend(
    a: &Shape,
    b: &Shape,
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&i) = order.get(depth) else {
        return true;
    };
    for j in 0..b.vertices.len() {
        if used[j] || a.signature[i] != b.signature[j] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&k| a.multiplicity[i][k] == b.multiplicity[j][image[k]]);
        if !consistent {
            continue;
        }
        image[i] = j;
        used[j] = true;
        if extend(a, b, order, depth + 1, image, used) {
            return true;
        }
        used[j] = false;
        image[i] = usize::MAX;
    }
    false
}
