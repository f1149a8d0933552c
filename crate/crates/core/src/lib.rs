//! Symbolic construction of a group topology on a free group of countably
//! infinite rank: reduced-word arithmetic, finite neighbourhood systems and
//! their enrichments, the foreign-word cancellation lemmas, the poset of
//! conditions with dense-set witnesses, and a generic-filter builder that
//! emits checkable certificates.

pub mod word;
pub mod nbhd;
pub mod cancellation;
pub mod poset;
pub mod filter;
pub mod suites;
