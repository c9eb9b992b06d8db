//! Core algorithms for comparing regional case curves against social-media
//! signals.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function over in-memory values; file formats, the CLI and rendering live in
//! the `episense` crate.
//!
//! Modules:
//! - [`corpus`]: case series, tweet records and per-day bucketing.
//! - [`series`]: cumulative sums, scaling, normalization and divergence points.
//! - [`concepts`]: tokenization, phrase candidates, embeddings and cosine matching.
//! - [`sentiment`]: lexicon scoring and daily aggregation.
//! - [`regress`]: design matrices, OLS, Student-t tests and horizon evaluation.
//! - [`explain`]: causal sub-event graphs and trigger explanations.
//! - [`synth`]: seeded synthetic data for tests and demos.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod concepts;
pub mod corpus;
pub mod explain;
pub mod regress;
pub mod rng;
pub mod sentiment;
pub mod series;
pub mod synth;

pub use chrono::{DateTime, NaiveDate, Utc};
