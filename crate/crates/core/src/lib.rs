//! Exact-arithmetic cluster ensembles on double Bruhat cells of symmetrizable
//! Kac-Moody groups.
//!
//! The crate builds seeds from double reduced words, runs mutation dynamics
//! over an exact rational-function field, assembles the modified ensemble map
//! `Btilde = B + M` and the chamber-ansatz factorization exponents, and
//! verifies the central identities numerically in an `SL_n` laboratory, all
//! over arbitrary-precision rationals.

pub mod cartan;
pub mod factor;
pub mod mutation;
pub mod poly;
pub mod rat;
pub mod reference;
pub mod report;
pub mod sample;
pub mod seed;
pub mod slnlab;
pub mod weyl;
