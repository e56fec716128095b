pub mod algebra;
pub mod error;

pub use error::{Error, ErrorKind, Result};
pub mod finite_ring;
pub mod quiver;
pub mod plethysm;
pub mod toric;
pub mod complex;
pub mod rank;
pub mod moment;
pub mod catalog;
pub mod report;
