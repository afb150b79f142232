//! Construction of best-approximation sequences for systems of linear
//! forms, truncated estimation of homogeneous and inhomogeneous
//! approximation exponents, and certified checks of the transfer bounds
//! between the two sides.
//!
//! Everything decision-gating runs on certified interval arithmetic
//! ([`precision`]); every experiment is replayable from its manifest alone
//! ([`manifest`], [`runner`]).

pub mod adversarial;
pub mod bestapprox;
pub mod enumerate;
pub mod error;
pub mod exponents;
pub mod fastform;
pub mod lattice;
pub mod manifest;
pub mod numbers;
pub mod oracle;
pub mod precision;
pub mod report;
pub mod rng;
pub mod runner;
pub mod system;
pub mod transfer;

pub use error::{Error, Result};
pub use precision::{CertifiedReal, PrecisionContext};
pub use system::{LinearSystem, SystemSpec};
