//! Whitehead graphs, free factors and apartment combinatorics for free groups.
//!
//! ```
//! use whlab::{whitehead, Word};
//!
//! let u: Word = "abbabbb".parse().unwrap();
//! assert!(whitehead::is_primitive(2, &u).unwrap());
//! assert!(!whitehead::is_primitive(2, &"abAB".parse().unwrap()).unwrap());
//! ```

pub mod aut;
pub mod error;
pub mod factorgraph;
pub mod oracle;
pub mod products;
pub mod random;
pub mod rigidity;
pub mod subgroups;
pub mod verify;
pub mod whitehead;
pub mod word;

#[cfg(test)]
mod testutil;

pub use aut::{FreeAut, HomologyMatrix, MAX_RANK};
pub use error::{Error, Result};
pub use subgroups::{CoreGraph, FactorKey};
pub use whitehead::{GalVerdict, Vertex, VertexSet, WhiteheadGraph, WhiteheadMove};
pub use word::{Letter, Word};
