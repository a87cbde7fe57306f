//! Generalized Fermat varieties: exact arithmetic on hyperplane arrangements,
//! the permutation action on their moduli, the diagonal group, and numerical
//! invariants.

pub mod arrangement;
pub mod constructions;
pub mod error;
pub mod exactfield;
pub mod fermatgroup;
pub mod invariants;
pub mod modaction;
pub mod par;

pub use error::{Error, Result};
pub use par::Exec;
