//! Polyhedral norms from the marked length spectrum of weighted graphs
//! embedded on the torus.

pub mod ball;
pub mod basis;
pub mod cover;
pub mod error;
pub mod fixtures;
pub mod genfun;
pub mod oracle;
pub mod plot;
pub mod reconstruct;
pub mod spectrum;
pub mod surface;
pub mod weight;

pub use error::{Error, Result};
pub use surface::{CycleRep, Dart, EmbeddedGraph, HomologyClass};
pub use weight::Weight;
