//! Mutable cover data used while rewiring covers.

use std::collections::{BTreeMap, BTreeSet};

use super::{CoverError, GraphCover};
use crate::curve_graph::GraphParts;
use crate::ids::{fresh, EdgeId, PointLabel, VertexId};
use crate::smooth_cover::{BranchDatum, Fiber, Preimage};

#[derive(Clone, Debug)]
pub(crate) struct CoverParts {
    pub source: GraphParts,
    pub target: GraphParts,
    pub degree: u32,
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    pub vertex_data: BTreeMap<VertexId, BranchDatum>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    pub edge_index: BTreeMap<EdgeId, u32>,
}

/// One sheet-block of a genus-raising bridge: the source points `l1` on `v1`
/// over `q1` and `l2` on `v2` over `q2`, both of index `e`.
#[derive(Clone, Debug)]
pub(crate) struct BridgePair {
    pub v1: VertexId,
    pub l1: PointLabel,
    pub v2: VertexId,
    pub l2: PointLabel,
    pub e: u32,
}

impl CoverParts {
    pub fn finish(self) -> Result<GraphCover, CoverError> {
        GraphCover::new(
            self.source.check()?,
            self.target.check()?,
            self.degree,
            self.vertex_map,
            self.vertex_data,
            self.edge_map,
            self.edge_index,
        )
    }

    /// Edge ids, leg ids and point labels of the source.
    fn source_names(&self) -> BTreeSet<String> {
        let mut names = self.source.all_names();
        for b in self.vertex_data.values() {
            names.extend(b.labels().map(|l| l.as_str().to_owned()));
        }
        names
    }

    /// Edge ids, leg ids and point names of the target.
    fn target_names(&self) -> BTreeSet<String> {
        let mut names = self.target.all_names();
        for b in self.vertex_data.values() {
            names.extend(b.fibers.iter().map(|f| f.point.as_str().to_owned()));
        }
        names
    }

    pub fn fresh_source_vertex(&self, base: &str) -> VertexId {
        VertexId::new(fresh(base, |n| self.source.vertices.contains_key(n)))
    }

    pub fn fresh_target_vertex(&self, base: &str) -> VertexId {
        VertexId::new(fresh(base, |n| self.target.vertices.contains_key(n)))
    }

    pub fn fresh_source_name(&self, base: &str) -> String {
        let names = self.source_names();
        fresh(base, |n| {
            names.contains(n) || self.source.vertices.contains_key(n)
        })
    }

    pub fn over(&self, w: &VertexId) -> Vec<VertexId> {
        self.vertex_map
            .iter()
            .filter(|(_, t)| *t == w)
            .map(|(v, _)| v.clone())
            .collect()
    }

    pub fn rename_target_point(&mut self, w: &VertexId, old: &PointLabel, new: &PointLabel) {
        if old == new {
            return;
        }
        for v in self.over(w) {
            if let Some(f) = self.vertex_data.get_mut(&v).unwrap().fiber_mut(old) {
                f.point = new.clone();
            }
        }
    }

    pub fn rename_source_label(&mut self, v: &VertexId, old: &PointLabel, new: &PointLabel) {
        if old == new {
            return;
        }
        for f in &mut self.vertex_data.get_mut(v).unwrap().fibers {
            for x in &mut f.preimages {
                if x.label.as_ref() == Some(old) {
                    x.label = Some(new.clone());
                }
            }
        }
    }

    /// Adds a rational target component `L` through the smooth points `q1`
    /// (on its component) and `q2`, so that both become nodes with edge ids
    /// `q1` and `q2`; over `L`, each pair gets a rational component totally
    /// ramified over both nodes. Target legs at `q1`, `q2` and source legs at
    /// the paired points are consumed.
    pub fn raise_genus(
        &mut self,
        w1: &VertexId,
        q1: &PointLabel,
        w2: &VertexId,
        q2: &PointLabel,
        pairs: &[BridgePair],
    ) -> VertexId {
        let bridge = self.fresh_target_vertex(&format!("bridge:{q1}|{q2}"));
        self.target.vertices.insert(bridge.clone(), 0);
        for (w, q) in [(w1, q1), (w2, q2)] {
            self.target.legs.remove(q.as_str());
            self.target
                .edges
                .insert(EdgeId::new(q.as_str()), [w.clone(), bridge.clone()]);
        }
        for pair in pairs {
            let piece = self.fresh_source_vertex(&format!("bridge:{}|{}", pair.l1, pair.l2));
            self.source.vertices.insert(piece.clone(), 0);
            for (v, l, q) in [(&pair.v1, &pair.l1, q1), (&pair.v2, &pair.l2, q2)] {
                self.source.legs.remove(l.as_str());
                let s = EdgeId::new(l.as_str());
                self.source
                    .edges
                    .insert(s.clone(), [v.clone(), piece.clone()]);
                self.edge_map.insert(s.clone(), EdgeId::new(q.as_str()));
                self.edge_index.insert(s, pair.e);
            }
            self.vertex_map.insert(piece.clone(), bridge.clone());
            self.vertex_data.insert(
                piece,
                BranchDatum::new(
                    pair.e,
                    0,
                    0,
                    vec![
                        Fiber::new(q1.clone(), vec![Preimage::labeled(pair.l1.clone(), pair.e)]),
                        Fiber::new(q2.clone(), vec![Preimage::labeled(pair.l2.clone(), pair.e)]),
                    ],
                ),
            );
        }
        bridge
    }

    /// Turns the smooth point `p` of target component `w` into a node joining
    /// `w` to a new rational tail `T` (edge id `p`). Every preimage of `p`
    /// becomes a node joining its component to a rational piece over `T`,
    /// whose ramification is resolved into simple branch points of `T`.
    ///
    /// `glued` names two labeled preimages that are sent to one common piece
    /// of degree `e1 + e2` instead, closing a cycle in the source.
    ///
    /// The caller guarantees that no target leg sits at `p` and no source leg
    /// over `p` other than the glued ones.
    pub fn sprout_tail(
        &mut self,
        w: &VertexId,
        p: &PointLabel,
        glued: Option<(&PointLabel, &PointLabel)>,
    ) -> VertexId {
        let tail = self.fresh_target_vertex(&format!("tail:{p}"));
        self.target.vertices.insert(tail.clone(), 0);
        let q = EdgeId::new(p.as_str());
        self.target
            .edges
            .insert(q.clone(), [w.clone(), tail.clone()]);

        // Name every preimage; unlisted sheets become an explicit fiber.
        let mut sheets: Vec<(VertexId, PointLabel, u32)> = Vec::new();
        for v in self.over(w) {
            let degree = self.vertex_data[&v].degree;
            if self.vertex_data[&v].fiber(p).is_none() {
                let f = Fiber::new(
                    p.clone(),
                    (0..degree).map(|_| Preimage::unlabeled(1)).collect(),
                );
                self.vertex_data.get_mut(&v).unwrap().fibers.push(f);
            }
            let count = self.vertex_data[&v].fiber(p).unwrap().preimages.len();
            for k in 0..count {
                let existing = self.vertex_data[&v].fiber(p).unwrap().preimages[k].clone();
                let label = match existing.label {
                    Some(l) => l,
                    None => {
                        let name = PointLabel::new(self.fresh_source_name(&format!("{v}@{p}#{k}")));
                        self.vertex_data
                            .get_mut(&v)
                            .unwrap()
                            .fiber_mut(p)
                            .unwrap()
                            .preimages[k]
                            .label = Some(name.clone());
                        name
                    }
                };
                sheets.push((v.clone(), label, existing.e));
            }
        }

        let mut drawn: BTreeSet<String> = BTreeSet::new();
        let mut simple_points = |parts: &CoverParts, n: u32, degree: u32| -> Vec<Fiber> {
            (0..n)
                .map(|_| {
                    let taken = parts.target_names();
                    let name = fresh(&format!("{p}/b{}", drawn.len()), |x| {
                        taken.contains(x) || drawn.contains(x)
                    });
                    drawn.insert(name.clone());
                    let mut pre = vec![Preimage::unlabeled(2)];
                    pre.extend((2..degree).map(|_| Preimage::unlabeled(1)));
                    Fiber::new(name.as_str(), pre)
                })
                .collect()
        };

        let (glue_sheets, single): (Vec<_>, Vec<_>) = sheets
            .into_iter()
            .partition(|(_, l, _)| glued.is_some_and(|(a, b)| l == a || l == b));

        for (v, label, e) in single {
            let piece = self.fresh_source_vertex(&format!("{v}@{p}#{label}"));
            let s = EdgeId::new(label.as_str());
            self.source.vertices.insert(piece.clone(), 0);
            self.source
                .edges
                .insert(s.clone(), [v.clone(), piece.clone()]);
            self.edge_map.insert(s.clone(), q.clone());
            self.edge_index.insert(s, e);
            let mut fibers = vec![Fiber::new(
                p.clone(),
                vec![Preimage::labeled(label.clone(), e)],
            )];
            fibers.extend(simple_points(self, e - 1, e));
            self.vertex_map.insert(piece.clone(), tail.clone());
            self.vertex_data
                .insert(piece, BranchDatum::new(e, 0, 0, fibers));
        }

        if let Some((a, b)) = glued.filter(|_| !glue_sheets.is_empty()) {
            let piece = self.fresh_source_vertex(&format!("glue:{a}|{b}"));
            self.source.vertices.insert(piece.clone(), 0);
            let m: u32 = glue_sheets.iter().map(|(_, _, e)| e).sum();
            let mut preimages = Vec::new();
            for (v, label, e) in &glue_sheets {
                self.source.legs.remove(label.as_str());
                let s = EdgeId::new(label.as_str());
                self.source
                    .edges
                    .insert(s.clone(), [v.clone(), piece.clone()]);
                self.edge_map.insert(s.clone(), q.clone());
                self.edge_index.insert(s, *e);
                preimages.push(Preimage::labeled(label.clone(), *e));
            }
            let mut fibers = vec![Fiber::new(p.clone(), preimages)];
            // Riemann–Hurwitz on a genus-0 piece of degree m with two node
            // branches of indices summing to m leaves m simple points.
            fibers.extend(simple_points(self, m, m));
            self.vertex_map.insert(piece.clone(), tail.clone());
            self.vertex_data
                .insert(piece, BranchDatum::new(m, 0, 0, fibers));
        }

        tail
    }
}

impl From<GraphCover> for CoverParts {
    fn from(c: GraphCover) -> Self {
        c.into_parts()
    }
}
