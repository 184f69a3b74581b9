pub mod apps;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod explicit;
pub mod ilp;
pub mod pipeline;
pub mod shift;
pub mod treewidth;

pub use error::{Error, Result};
