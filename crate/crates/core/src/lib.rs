//! Translation-memory fuzzy matching and anchored single-word gap repair.
//!
//! The pipeline: parse a bilingual memory ([`corpus`]), index one side
//! ([`index`]), align a query against its closest fuzzy match and pull out
//! single-word gaps flanked by matching words ([`alignment`]), predict the
//! missing word ([`predictors`], [`cbow`]), and score the predictions per
//! fuzzy-match band ([`eval`]).

pub mod alignment;
pub mod cbow;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod fsutil;
pub mod index;
pub mod predictors;

pub use error::{Error, Result};
