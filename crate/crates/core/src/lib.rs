//! Finite partially ordered monoids and the posets they act on.
//!
//! The crate builds order congruences, tensor products, pushouts, direct
//! limits and free extensions of finite S-posets, decides the pounitary
//! conditions for subpomonoids and morphisms, and approximates amalgamated
//! free products of pomonoids both by a tower of free extensions and by
//! bounded word rewriting. Positive answers carry certificates that can be
//! replayed without recomputing any closure.
//!
//! Everything is exact and finite; carriers are expected to stay at desk
//! scale (tens of elements, a few thousand tensor cells).

pub mod amalgam;
pub mod commutative;
pub mod congruence;
pub mod constructions;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod pomonoid;
pub mod poset;
pub mod relation;
pub mod sposet;
pub mod tensor;
pub mod unitary;

pub use amalgam::{PoAmalgam, Tower, Word};
pub use congruence::Quotient;
pub use error::{Error, Result, Side, Violation};
pub use pomonoid::{adjoin_identity, Pomonoid, PomonoidCandidate, PomonoidMorphism, Posemigroup, SubPomonoid};
pub use poset::{closure_order, MapFlags, MonotoneMap, Poset};
pub use relation::{BitSet, Relation};
pub use sposet::{analyze_map, ActSide, Action, SPoset, SPosetCandidate, SPosetMap};
pub use tensor::{TensorCertificate, TensorPoset};
pub use unitary::{UnitaryReport, UnitaryVerdict};
