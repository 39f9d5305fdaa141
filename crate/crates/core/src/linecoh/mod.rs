//! Cohomology of split bundles on P¹×P¹ via Künneth, with explicit monomial
//! bases and multiplication actions.

pub mod bundle;
pub mod cohom;

pub use bundle::{h0_coker_dim, sheaf_surjective, FormMatrix, SplitBundle, SurjectivityReport};
pub use cohom::{coh_action, coh_basis, coh_index, euler_char_line, h0_p1, h1_p1, kunneth_dim};
