//! Exact permanents, hafnians and their multidimensional generalizations,
//! together with upper bounds built from averaged squared minors.

pub mod bounds;
pub mod charfn;
pub mod combinatorics;
pub mod convolution;
pub mod error;
pub mod exact;
pub mod io;
pub mod random;
pub mod suites;
pub mod table1;

pub use error::{Error, Result};
