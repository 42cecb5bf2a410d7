//! Exact invariants deciding distinction of cuspidal representations of inner forms of
//! `GL_{2n}` over a p-adic field (p odd) by an inner involution.

pub mod arith;
pub mod cyclotomic;
pub mod distinction_engine;
pub mod endo_invariants;
pub mod error;
pub mod ff_cuspidal;
pub mod report;
pub mod residue_field;
pub mod sign;
pub mod sweep;
pub mod tame_tower;

pub use error::{Error, Result};
pub use sign::Sign;
