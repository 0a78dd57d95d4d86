//! Kauffman-states dg algebras over `F_2`.
//!
//! The crate builds the algebras `B0(n,k)`, `B(n,k,S)` and the truncations
//! `Br`, `Bl`, `B'` on canonical bases, presents them by quivers with
//! relations, computes homology by bit-packed Gaussian elimination, and
//! decides formality with Massey-product certificates.

pub mod algebra;
pub mod error;
pub mod f2;
pub mod formality;
pub mod homology;
pub mod istate;
pub mod quiver;
pub mod sample;
pub mod symmetry;
mod text;

pub use algebra::{AlgebraContext, BasisElement, Element, Flavor, GeneratorKind, GradingVector, Monomial};
pub use error::{Error, Result};
pub use istate::{IState, Interval, LineSet};
