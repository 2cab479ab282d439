//! Exact toolkit for exterior differential systems attached to
//! second-order overdetermined PDE in two independent variables.

pub mod symcore;
pub mod error;
pub mod exterior;

pub use error::{Error, Result};
pub mod pfaffian;
pub mod io;
pub mod jetclassify;
pub mod prolong;
pub mod symbolalg;
pub mod cartan;
