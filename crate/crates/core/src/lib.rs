//! Longest common abelian factor (LCAF) of two strings.
//!
//! Two factors are abelian-equal when they are permutations of each other,
//! i.e. have the same Parikh vector. This crate finds the longest length at
//! which the two strings share such a pair of factors and reports one
//! occurrence in each string.
//!
//! Solvers:
//! - [`lcaf_bruteforce`]: exhaustive reference.
//! - [`lcaf_quadratic`]: one sorted row pair per length, descending.
//! - [`lcaf_skip`]: jumps over lengths whose count ranges cannot meet.
//! - [`lcaf_first_vector`]: as `lcaf_skip`, seeding rows from shrunk prefix vectors.
//! - [`lcaf_binary`]: binary alphabets only, via min/max one-count profiles.
//!
//! ```
//! let r = lcaf::lcaf_skip("aab", "abb");
//! assert_eq!(r.length, 2);
//! assert!(r.validate("aab", "abb"));
//! ```

pub mod binary;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod parikh;
pub mod solvers;

pub use binary::{lcaf_binary, min_max_profile, MinMaxProfile};
pub use error::{LcafError, Result};
pub use parikh::{build_alphabet, Alphabet, ComponentExtrema, ParikhVector, Row, Text};
pub use solvers::{
    lcaf_bruteforce, lcaf_first_vector, lcaf_quadratic, lcaf_skip, Algorithm, LcafResult, RowStats,
};
