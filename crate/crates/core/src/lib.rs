//! Exact combinatorics and Chow rings of weighted Fulton-MacPherson
//! compactifications `X_A[n]` of configuration spaces of `n` points on a
//! smooth cellular base `X`.

pub mod base;
pub mod chow;
pub mod combinatorics;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod morphisms;
pub mod poly;
pub mod verify;

pub use base::{projective_space, CellularBase};
pub use chow::{BettiTable, Caps, Presentation, QuotientRing};
pub use combinatorics::{building_set, IndexSet, OrderedBuildingSet, WeightVector};
pub use error::{Error, Result};
pub use poly::{Monomial, MultiPoly, VariableSet};
