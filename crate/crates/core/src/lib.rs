//! Classification machinery for finite-volume hyperbolic Coxeter polytopes
//! whose facet count exceeds the dimension by three.

#![no_std]
extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod arith;
pub mod diagram;
pub mod error;
pub mod gale;
pub mod lemmas;
pub mod pyramid;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
