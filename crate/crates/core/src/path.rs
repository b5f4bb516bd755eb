use serde::{Deserialize, Serialize};

use crate::degree::Degree;

pub type VertexId = u32;
pub type EdgeId = u32;

/// A finite path stored as its color-normal edge word.
///
/// Paths are only built by [`crate::KGraph`], which keeps the word normalized,
/// so two paths are equal exactly when their fields are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Path {
    range: VertexId,
    source: VertexId,
    edges: Vec<EdgeId>,
    degree: Degree,
}

impl Path {
    pub(crate) fn from_parts(
        range: VertexId,
        source: VertexId,
        edges: Vec<EdgeId>,
        degree: Degree,
    ) -> Self {
        Path { range, source, edges, degree }
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}
