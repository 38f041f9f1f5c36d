//! Exact and numerical computations around the split exceptional group `G2`:
//! octonions, the Lie algebra `g2`, binary cubic forms and cubic rings,
//! local zeta polynomial identities, and generalized Whittaker functions.

pub mod algebra_core;
pub mod cubic_rings;
pub mod error;
pub mod g2_lie;
pub mod heis_so7;
pub mod local_zeta;
pub mod octonion;
pub mod whittaker;
pub mod checks;

pub use algebra_core::{GaussianRational, Matrix, Rational, ZetaPoly};
pub use cubic_rings::{BinaryCubic, CubicRingTable, FactorType, LatticeClass, SplittingType};
pub use error::{Error, Result};
pub use g2_lie::{G2Element, Wedge2, Z3Element};
pub use heis_so7::{SO7Matrix, WVector};
pub use octonion::{Octonion, V7Element};
