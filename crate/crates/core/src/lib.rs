pub mod error;
pub mod hilbert_module;
pub mod io;
pub mod linalg;
pub mod partial_isometry;
pub mod pdf_sets;
pub mod pdi;
pub mod random;
pub mod suites;

pub use error::{Error, Result};
