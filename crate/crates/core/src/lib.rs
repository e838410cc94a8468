//! Laminar and t-laminar set families: constructions, exact search and the
//! recursive LP upper bound.

pub mod bounds;
pub mod construct;
pub mod format;
pub mod geometry;
pub mod rat;
pub mod search;
pub mod setfam;

pub use rat::Rat;
pub use setfam::{Block, Family, FamilyError};
