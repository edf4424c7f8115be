pub mod coupling;
pub mod dyck;
pub mod error;
pub mod keyl;
pub mod linalg;
pub mod partition;
pub mod report;
pub mod rng;
pub mod schur;
pub mod schur_weyl;
pub mod spectrum;
pub mod suite;
pub mod tableau;

pub use error::{Error, Result};
