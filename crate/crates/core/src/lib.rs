//! A toolkit for Π, a typed language of reversible combinators over finite
//! types built from `0`, `1`, `+` and `*`.
//!
//! * [`syntax`]: types, values, combinator terms, parsing and type inference.
//! * [`semantics`]: forward and backward evaluation, value enumeration and
//!   ranking, brute-force observational equivalence.
//! * [`permutation`]: the untyped transposition language and the compiler
//!   from combinators to permutations, plus a gate library.
//! * [`normalize`]: type sizes, canonical types and normalizing isomorphisms.
//! * [`rewrite`]: the catalog of level-2 equivalences between combinators,
//!   the rewrite evaluator and a checker for equational proofs.
//! * [`generate`]: seeded random types, combinators and rule instances.
//! * [`cli`]: the `pi` command-line front end.

pub mod syntax;
pub mod normalize;
pub mod semantics;
pub mod permutation;
pub mod rewrite;
pub mod generate;
pub mod cli;

pub use syntax::{adjoint, check, comb_equal, infer, parse_comb, parse_type, parse_value};
pub use syntax::{Comb, ParseError, Prim, Ty, TypeError, Val};
