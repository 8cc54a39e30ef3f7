pub mod algebra;
pub mod characters;
pub mod config;
pub mod error;
pub mod groupalg;
pub mod oracles;
pub mod par;
pub mod perm;
pub mod specht;
pub mod spectra;
pub mod stats;

pub use error::{Error, Result};
