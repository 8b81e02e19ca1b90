//! Exact mod-2 calculus of Dyer–Lashof and Steenrod operations on the
//! homology of `E_n` ring spectra.
//!
//! - [`gf2poly`]: graded polynomials and truncated series over GF(2).
//! - [`opcalc`]: operation words, Adem rewriting, suspension.
//! - [`freealg`]: free `E_n`/`E_∞` algebras and the Browder bracket.
//! - [`models`]: `A_*`, `H_*MO`, `H_*MU` with their operations.
//! - [`nishida`]: Steenrod operations and Nishida rewriting.
//! - [`parse`], [`commands`], [`verify`]: expression language and the
//!   command layer shared by the CLI and the C interface.

pub mod commands;
pub mod error;
pub mod freealg;
pub mod gf2poly;
pub mod models;
pub mod nishida;
pub mod opcalc;
pub mod parse;
pub mod verify;

pub use error::{Error, Result};
