//! Exact synchronization and consensus analysis for linear networks
//! `x(t+1) = A x(t)` over prime fields `F_p`.
//!
//! The algebraic verdicts in [`network`] are cross-checked against the
//! definitional oracles and trajectory simulation in [`dynamics`].

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod linalg;
pub mod network;
pub mod par;
pub mod poly;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use linalg::{Matrix, SubspaceBasis};
pub use network::{analyze, AnalysisReport, BasisChoice, NetworkSystem, SyncStructure};
pub use poly::Polynomial;
