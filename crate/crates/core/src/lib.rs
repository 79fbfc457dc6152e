//! Peisert-type Cayley graphs over finite fields: field towers, connection
//! sets, exact clique search, direction sets in `AG(2, q)` and exact
//! multiplicative character sums.

pub mod bitset;
pub mod cayley;
pub mod charsum;
pub mod clique;
pub mod directions;
pub mod ff;

pub use bitset::VertexSet;
pub use cayley::{CayleyGraph, ConnectionSet, ConnectionSpec};
pub use ff::{Elem, FieldTower, MultChar};
