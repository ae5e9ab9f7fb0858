pub mod error;
pub mod rational;

pub mod linalg;
pub mod matrix;
pub mod upoly;

pub mod invariants;
pub mod quadratic;
pub mod quiver;

pub mod ideal;
pub mod lie;
pub mod ncpoly;
pub mod poisson;
pub mod symbolic;

pub mod harness;
pub mod relations;
pub mod series;
pub mod yangian;

pub use error::{Error, Result};
pub use rational::Q;

#[cfg(doctest)]
mod book;
