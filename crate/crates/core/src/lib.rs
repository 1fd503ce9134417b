//! Construction and structural analysis of binary 1-perfect codes.

#![allow(clippy::needless_range_loop)]

pub mod canonical;
pub mod designs;
pub mod error;
pub mod exact;
pub mod io;
pub mod linalg;
pub mod mixed;
pub mod profiles;
pub mod report;
pub mod switching;
pub mod transforms;
pub mod word;

pub use error::{Error, Result};
pub use word::{distance, weight, BinaryCode, CoordPerm, DistanceDistribution, Word};
