//! Dual graphs of nodal curves, admissible and pseudo-admissible covers
//! between them, and certificates of (d,h)-ellipticity for irreducible
//! nodal curves.

pub mod constructions;
pub mod curve_graph;
pub mod dot;
pub mod ellipticity;
pub mod graph_cover;
pub mod ids;
pub mod smooth_cover;
