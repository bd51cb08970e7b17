//! Constructions of even-order Dirichlet characters with large partial sums,
//! and certified numerical checks of the inequalities behind them.
//!
//! * [`arith`]: exact 64-bit modular arithmetic (CRT, Jacobi symbol,
//!   primality, factorization, primitive roots, discrete logs).
//! * [`character`]: Dirichlet characters on canonical generators, with exact
//!   values, sieved range evaluation, conductor and primitive inducing character.
//! * [`construct`]: the odd order-`g` character of prime conductor, the Paley
//!   quadratic character, and their primitive product.
//! * [`sums`]: partial sums `M(χ)`, Gauss sums, twisted exponential sums,
//!   and certificates for each inequality.
//! * [`cli`]: the `charsum` command-line front end.

pub mod arith;
pub mod character;
pub mod cli;
pub mod construct;
pub mod error;
pub mod numeric;
pub mod sums;

pub use character::{CharacterProfile, CharacterValue, DirichletCharacter, Parity};
pub use error::{Error, Result};
