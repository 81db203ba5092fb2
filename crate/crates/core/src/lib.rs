//! Exact enumeration and verification tools for Littlewood-Richardson coefficients through two
//! triangular-array models (hives and skeps), the octahedron recurrence relating them, and
//! L-convexity checks on integer lattices.

pub mod error;
pub mod grid;
pub mod hive;
pub mod lattice;
pub mod lconvex;
pub mod octahedron;
pub mod oracle;
pub(crate) mod search;
pub mod skep;
pub mod vector;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{MinusGrid, Parity, PlusGrid, TriGrid};
pub use hive::Hive;
pub use skep::Skep;
pub use vector::{IntVec, Partition};
