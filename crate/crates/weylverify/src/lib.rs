//! Verification of weight-monoid rigidity for spherical systems of type A.

pub mod catalog;
pub mod engine;
pub mod intlattice;
pub mod rootdata;
