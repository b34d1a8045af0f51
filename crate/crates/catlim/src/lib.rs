//! catlim — a finite category theory engine.
//!
//! The crate computes with explicit finite categories, finite-set-valued
//! diagrams and presheaves: projective and inductive limits, Yoneda
//! embeddings, representability search, and brute-force verifiers for the
//! standard hom/limit commutation and adjunction laws. On top of that
//! sits a concept layer: knowledge bases whose entries decompose into
//! limit expressions, with decomposition, verification and a discrete
//! expression-search learner.
//!
//! Start with the runnable examples (`cargo run --example limits_in_set`,
//! `cargo run --example decompose_concept`, …); each one exercises a major
//! capability end to end. The `catlim` binary exposes the same operations
//! over JSON documents.

pub mod caps;
pub mod cli;
pub mod concept;
pub mod doc;
pub mod error;
pub mod fincat;
pub mod finset;
pub mod fixtures;
pub mod gen;
pub mod laws;
pub mod presheaf;
mod search;

pub use caps::Caps;
pub use error::{Error, Result};
