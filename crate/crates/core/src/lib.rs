//! Deontic reasoning over a first-order KD-style logic with an ideality
//! modality, decided through a two-sorted first-order embedding.

pub mod annotation;
pub mod embedding;
pub mod logic;
pub mod prover;
pub mod services;
