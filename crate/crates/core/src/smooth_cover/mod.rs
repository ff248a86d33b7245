//! Branch data of finite maps between smooth curves.
//!
//! A [`BranchDatum`] records the degree `d`, the genera of source and target
//! and, for finitely many target points, the ramification indices of the
//! preimages. Points that are not listed are unramified.

mod oracle;
mod perm;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ids::PointLabel;

pub use oracle::{
    verify_witness, BranchPermutation, HurwitzOracle, MonodromyWitness, OracleError, SearchBounds,
    WitnessError,
};
pub use perm::{partitions, partitions_into, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Preimage {
    pub label: Option<PointLabel>,
    pub e: u32,
}

impl Preimage {
    pub fn unlabeled(e: u32) -> Self {
        Preimage { label: None, e }
    }

    pub fn labeled(label: impl Into<PointLabel>, e: u32) -> Self {
        Preimage {
            label: Some(label.into()),
            e,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fiber {
    pub point: PointLabel,
    pub preimages: Vec<Preimage>,
}

impl Fiber {
    pub fn new(point: impl Into<PointLabel>, preimages: Vec<Preimage>) -> Self {
        Fiber {
            point: point.into(),
            preimages,
        }
    }

    /// Ramification indices in non-increasing order.
    pub fn cycle_type(&self) -> Vec<u32> {
        let mut t: Vec<u32> = self.preimages.iter().map(|p| p.e).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// `Σ (e − 1)` over the fiber.
    pub fn ramification(&self) -> u32 {
        self.preimages.iter().map(|p| p.e.saturating_sub(1)).sum()
    }

    pub fn is_unramified(&self) -> bool {
        self.preimages.iter().all(|p| p.e == 1)
    }

    /// Shape `(2, 1, …, 1)`.
    pub fn is_simple_branch(&self) -> bool {
        self.cycle_type().first() == Some(&2) && self.ramification() == 1
    }

    pub fn find_label(&self, label: &PointLabel) -> Option<&Preimage> {
        self.preimages
            .iter()
            .find(|p| p.label.as_ref() == Some(label))
    }
}

/// Combinatorial data of a degree-`d` map from a smooth curve of genus
/// `source_genus` onto one of genus `target_genus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchDatum {
    pub degree: u32,
    pub source_genus: u32,
    pub target_genus: u32,
    #[serde(default)]
    pub fibers: Vec<Fiber>,
}

/// Outcome of [`validate_rh`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhCheck {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl RhCheck {
    fn ok() -> Self {
        RhCheck {
            valid: true,
            reason: None,
        }
    }

    fn fail(reason: String) -> Self {
        RhCheck {
            valid: false,
            reason: Some(reason),
        }
    }
}

impl BranchDatum {
    pub fn new(degree: u32, source_genus: u32, target_genus: u32, fibers: Vec<Fiber>) -> Self {
        BranchDatum {
            degree,
            source_genus,
            target_genus,
            fibers,
        }
    }

    /// The identity map of a genus-`g` curve.
    pub fn identity(genus: u32) -> Self {
        BranchDatum::new(1, genus, genus, Vec::new())
    }

    pub fn fiber(&self, point: &PointLabel) -> Option<&Fiber> {
        self.fibers.iter().find(|f| &f.point == point)
    }

    pub fn fiber_mut(&mut self, point: &PointLabel) -> Option<&mut Fiber> {
        self.fibers.iter_mut().find(|f| &f.point == point)
    }

    /// The target point under a labeled preimage, with its index.
    pub fn locate(&self, label: &PointLabel) -> Option<(&PointLabel, u32)> {
        self.fibers
            .iter()
            .find_map(|f| f.find_label(label).map(|p| (&f.point, p.e)))
    }

    pub fn labels(&self) -> impl Iterator<Item = &PointLabel> {
        self.fibers
            .iter()
            .flat_map(|f| f.preimages.iter().filter_map(|p| p.label.as_ref()))
    }

    /// Total ramification `Σ_fibers Σ (e − 1)`.
    pub fn total_ramification(&self) -> u32 {
        self.fibers.iter().map(Fiber::ramification).sum()
    }

    /// Fibers with at least one ramified preimage.
    pub fn branch_fibers(&self) -> impl Iterator<Item = &Fiber> {
        self.fibers.iter().filter(|f| !f.is_unramified())
    }

    /// Problems that make the datum meaningless: zero degree, indices
    /// outside `1..=d`, repeated points or labels.
    pub fn structural_errors(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if self.degree == 0 {
            errors.push("degree must be at least 1".to_owned());
        }
        let mut points = BTreeSet::new();
        let mut labels = BTreeSet::new();
        for f in &self.fibers {
            if !points.insert(&f.point) {
                errors.push(format!("point `{}` listed twice", f.point));
            }
            for p in &f.preimages {
                if p.e == 0 || p.e > self.degree {
                    errors.push(format!(
                        "index {} over `{}` outside 1..={}",
                        p.e, f.point, self.degree
                    ));
                }
                if let Some(l) = &p.label {
                    if !labels.insert(l) {
                        errors.push(format!("label `{l}` used twice"));
                    }
                }
            }
        }
        errors
    }
}

/// Fiber sums equal the degree and Riemann–Hurwitz holds:
/// `2g − 2 = d(2h′ − 2) + Σ (e − 1)`.
pub fn validate_rh(b: &BranchDatum) -> RhCheck {
    if let Some(err) = b.structural_errors().into_iter().next() {
        return RhCheck::fail(err);
    }
    for f in &b.fibers {
        let sum: u32 = f.preimages.iter().map(|p| p.e).sum();
        if sum != b.degree {
            return RhCheck::fail(format!(
                "fiber over `{}` has total index {sum}, expected {}",
                f.point, b.degree
            ));
        }
    }
    let lhs = 2 * i64::from(b.source_genus) - 2;
    let rhs = i64::from(b.degree) * (2 * i64::from(b.target_genus) - 2)
        + i64::from(b.total_ramification());
    if lhs != rhs {
        return RhCheck::fail(format!(
            "Riemann-Hurwitz fails: 2g-2 = {lhs} but d(2h'-2) + ramification = {rhs}"
        ));
    }
    RhCheck::ok()
}

/// Labels of preimages where the map is totally ramified (`e = d`).
pub fn totally_ramified_labels(b: &BranchDatum) -> BTreeSet<PointLabel> {
    b.fibers
        .iter()
        .flat_map(|f| f.preimages.iter())
        .filter(|p| p.e == b.degree)
        .filter_map(|p| p.label.clone())
        .collect()
}

/// Source genus forced by Riemann–Hurwitz, if it is a non-negative integer.
pub fn rh_source_genus(degree: u32, target_genus: u32, ramification: u32) -> Option<u32> {
    let twice = i64::from(degree) * (2 * i64::from(target_genus) - 2) + i64::from(ramification) + 2;
    (twice >= 0 && twice % 2 == 0).then_some((twice / 2) as u32)
}
