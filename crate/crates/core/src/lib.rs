//! Construction and certification of (2,3,7)-generating triples of
//! alternating groups, with the mod-4 lifting rule deciding whether the
//! double cover of `Alt(n)` is Hurwitz as well.

pub mod certify;
pub mod diagram;
pub mod obstruct;
pub mod perm;
pub mod plan;
pub mod registry;
pub mod words;

pub use diagram::{Diagram, Handle, Triple237};
pub use perm::{CycleType, Permutation};
pub use words::{parse_word, Word};
