//! Cohomology of the toric variety attached to the unioriented type A_n
//! quiver fan, computed through two presentations and the isomorphism
//! between them.

pub mod combinat;
pub mod error;
pub mod exactla;
pub mod fan;
pub mod frobenius;
pub mod groebner;
pub mod hring;
pub mod iso;
pub mod mring;
pub mod parabolic;
pub mod parse;
pub mod verify;

pub use error::{Error, Result};
