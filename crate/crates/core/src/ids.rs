//! String identifiers for graph elements and marked points.

use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(
    /// A component of a nodal curve.
    VertexId
);
string_id!(
    /// A node of a nodal curve.
    EdgeId
);
string_id!(
    /// A marked (distinguished smooth) point of a nodal curve.
    LegId
);
string_id!(
    /// Name of a point on a smooth curve: a target point of a cover, or a
    /// labeled preimage on the source.
    PointLabel
);

impl From<&EdgeId> for PointLabel {
    fn from(e: &EdgeId) -> Self {
        PointLabel(e.0.clone())
    }
}

impl From<&LegId> for PointLabel {
    fn from(l: &LegId) -> Self {
        PointLabel(l.0.clone())
    }
}

/// `base`, or `base~k` for the least `k` not taken.
pub(crate) fn fresh(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_owned();
    }
    (1..)
        .map(|k| format!("{base}~{k}"))
        .find(|name| !taken(name))
        .unwrap()
}
