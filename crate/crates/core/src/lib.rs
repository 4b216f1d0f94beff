//! Embeddings and isomorphisms of finite semigroups given by multiplication
//! tables.
//!
//! The search is a backtrack over partial maps from source to target
//! elements. Elements are first split into classes by invariants that any
//! embedding (index-period) or isomorphism (full element profile) must
//! preserve, and each source element is only tried against the target class
//! matching its own.
//!
//! Indices are 0-based throughout the library API. Text formats and reports
//! are 1-based.

pub mod families;
pub mod invariants;
pub mod search;
pub mod table;

pub use families::{build_family, Element, Family, FamilyElement};
pub use invariants::{ClassPartition, ElementProfile, IndexPeriod, PartitionMode, TableProfile};
pub use table::{close_generators, read_table, write_table, CayleyTable, GeneratedTable};
