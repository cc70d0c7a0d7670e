//! Exact finite models of twisted arrow categories, ends and coends,
//! Grothendieck fibrations, simplicial sets and Duskin nerves, together with
//! brute-force verification suites for the identities relating them.

pub mod caps;
pub mod duskin;
pub mod error;
pub mod fincat;
pub mod gen;
pub mod groth;
pub mod par;
pub mod sset;
pub mod suite;
pub mod twisted;
pub mod verdict;

pub use error::{Error, Result};
pub use fincat::{CatValuedDiagram, FinCat, Functor, NatTrans};
pub use verdict::Verdict;
