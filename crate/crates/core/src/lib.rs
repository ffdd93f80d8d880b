//! Construction and verification of symmetric 2-designs with a point
//! partition, built from a resolvable design, a symmetric index design and a
//! transversal design glued together by a family of bijections.

pub mod bitset;
pub mod builders;
pub mod canon;
pub mod compose;
pub mod error;
pub mod gf;
pub mod incidence;
pub mod io;
pub mod latin;
pub mod perms;
pub mod symplectic;

pub use error::{Error, Result};
