//! Weighted Maker-Breaker games.
//!
//! Maker builds a structure one element per round while Breaker deletes `b`
//! elements per round, and every element carries a (usually random) cost.
//! This crate plays these games at scale and checks the resulting costs
//! against their closed-form bounds:
//!
//! - [`mapping`]: the mapping game `f: [n] -> N` (unbounded and box variants),
//!   the potential strategy, and the uniform order-statistic payment model.
//! - [`arborescence`]: the spanning-arborescence game on the complete digraph
//!   with random permutation costs and Maker's normal/emergency strategy.
//! - [`tree`]: undirected spanning-tree games, both through the split-cost
//!   reduction to the arborescence game and with mutually greedy players.
//! - [`constants`]: root finders, series and quadrature for every constant
//!   the bounds depend on.
//! - [`oracle`]: exact minimax values for tiny mapping games and a reference
//!   MST.
//! - [`harness`]: seeded, replicated experiments and transcript replay.
//! - [`cli`]: the `wtg` front end.
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example <name>`.

pub mod arborescence;
pub mod cli;
pub mod constants;
mod dsu;
pub mod error;
pub mod harness;
pub mod mapping;
pub mod oracle;
pub mod rng;
pub mod transcript;
pub mod tree;

pub use error::{Error, Result};
pub use transcript::{Transcript, TRANSCRIPT_SCHEMA_VERSION};
