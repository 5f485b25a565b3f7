//! Matroids given by their bases, with structural predicates, isomorphism
//! machinery, minors, relaxation and Delta-Y exchange.

mod basis;
pub mod catalog;
pub mod colex;
mod deltay;
mod iso;
mod minors;
mod structure;

pub use basis::{elements_of, BasisMatroid};
pub use deltay::{delta_y, delta_y_closure, wye_delta};
pub use iso::{isomorphism_with, stable_hash, InvariantKey, Profile, StableHasher};
pub use minors::{has_minor_iso, has_minor_iso_naive, MinorCache};
pub use structure::{Predicates, RankTable};
