pub mod annulus;
pub mod blaschke;
pub mod cli;
pub mod error;
pub mod grid;
pub mod matcher;
pub mod rmt;
pub mod roots;
pub mod series;
pub mod spec;
pub mod target;
pub mod transport;

pub use error::{Error, Result};
