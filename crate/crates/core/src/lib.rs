//! Digraphs, their A_α matrices, spectral radius and energy, and checks of
//! the bounds relating them on digraphs with one nontrivial strong component.

pub mod digraph;
pub mod error;
pub mod laws;
pub mod linalg;
pub mod scc;
pub mod search;
pub mod spectra;
pub mod text;
pub mod transforms;
pub mod trees;

pub use error::{Error, Result};
