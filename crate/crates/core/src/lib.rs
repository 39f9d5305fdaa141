//! Vector bundles on the quadric surface P¹×P¹ and their correspondence with
//! triples of graded modules, computed by exact linear algebra.

pub mod error;
pub mod bipoly;
pub mod exactla;
pub mod fixtures;
pub mod formats;
pub mod flmod;
pub mod horrocks;
pub mod linecoh;
pub mod presheaf;
pub mod random;
pub mod stability;

pub use error::{Error, Result};
