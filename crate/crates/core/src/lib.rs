pub mod chernweil;
pub mod comod;
pub mod cyclic;
pub mod error;
pub mod fixtures;
pub mod galois;
pub mod hopf;
pub mod io;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod twist;

pub use error::{Error, Result};
