//! Injective category of maps between finite spaces.

pub mod cohomology;
pub mod complex;
pub mod equivariant;
pub mod fixtures;
pub mod format;
pub mod ic;
pub mod pl;
pub mod random;
pub mod report;
pub mod space;
pub mod suites;
