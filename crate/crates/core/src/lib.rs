//! Integral cohomology of toroidal orbifolds `(S¹)ⁿ / Z/p`.

pub mod classify;
pub mod cohomology;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod series;
pub mod snf;

pub use cohomology::{CohomologyTable, Group};
pub use error::{Error, Result};
pub use lattice::{LatticeType, Prime};
pub use series::AlphaSeries;
pub use snf::{AbelianGroup, IntMatrix, SmithForm};
