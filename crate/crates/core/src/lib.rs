//! D numbers, fuzzy linguistic evaluation and bimatrix games.
//!
//! Linguistic assessments from several decision makers are turned into
//! D numbers over a scale of triangular fuzzy numbers, fused with the ECR
//! rule, defuzzified into crisp payoffs and analysed as a two-player game.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod dnumbers;
pub mod dst;
pub mod error;
pub mod fixtures;
pub mod fuzzy;
pub mod game;
pub mod pipeline;
pub mod reproduce;

pub use dnumbers::{DFocalSet, DFrame, DNumber, NonExclusivityMatrix};
pub use error::{Error, Result};
pub use fuzzy::TriangularFuzzyNumber;
pub use game::{BimatrixGame, Player};
