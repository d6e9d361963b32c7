pub mod bounds;
pub mod cli;
pub mod decomposition;
pub mod dot;
pub mod error;
pub mod graph;
pub mod json;
pub mod oracle;
pub mod orientation;
pub mod packing;
pub mod pipeline;
pub mod set;

pub use bounds::Bounds;
pub use error::{Error, Result};
pub use set::VertexSet;
