//! Finitely aligned higher-rank graphs.

pub mod alignment;
pub mod ckrep;
pub mod degree;
pub mod desource;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod genpath;
pub mod graph;
pub mod kgfile;
pub mod matrix;
pub mod path;
pub mod pathspace;
pub mod report;
pub mod tails;
pub mod tally;

pub use degree::{Degree, Ext, ExtDegree};
pub use error::{Error, Result};
pub use genpath::GeneralizedPath;
pub use graph::{Edge, KGraph, KGraphBuilder};
pub use path::{EdgeId, Path, VertexId};
