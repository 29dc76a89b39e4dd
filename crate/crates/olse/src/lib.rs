//! Solvers for the ordered list subgraph embedding problem family.
//!
//! Four variants are covered — subgraph vs. induced edge semantics, with
//! or without the order condition — via exact, approximate, and
//! parameterized algorithms, plus reductions and instance plumbing.

pub mod approx;
pub mod exact;
pub mod fpt_split;
pub mod fpt_vc;
pub mod instances;
pub mod model;
pub mod unordered;
