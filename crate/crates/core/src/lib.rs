pub mod bundle;
pub mod coxring;
pub mod error;
pub mod exactmath;
pub mod matroid;
pub mod nokbody;
pub mod positivity;
pub mod tropic;

pub use error::{Error, Result};
