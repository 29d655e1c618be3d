pub mod colex;
pub mod combinatorics;
pub mod error;
pub mod families;
pub mod setfamily;
pub mod verify;

pub use error::{Error, Result};
pub use setfamily::{Family, KSet};
