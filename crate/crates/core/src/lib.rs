//! Compact Hermitian symmetric pairs, their restricted roots, and the
//! invariant hyperkähler structures on domains of the tangent bundle,
//! with a seeded verification engine.

pub mod cli;
pub mod context;
pub mod error;
pub mod fields;
pub mod lie;
pub mod pair;
pub mod restricted;
pub mod roots;
pub mod spectral;
pub mod verify;

pub use context::SpaceContext;
pub use error::{Error, Result};
