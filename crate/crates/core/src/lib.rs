pub mod benchstats;
pub mod cli;
pub mod diversity;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod io;
pub mod mog;
pub mod rng;
pub mod textproxy;

pub use error::{Error, Result};
