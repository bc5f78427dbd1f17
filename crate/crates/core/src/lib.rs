pub mod cli;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod noise;
pub mod params;
pub mod quad;
pub mod regime;
pub mod speed_meter;
pub mod symphotonic;
pub mod timedomain;

pub use error::{Error, Result};
pub use params::AntennaParams;
