//! Exact invariant theory of commuting matrices.
//!
//! Multilinear `GL(n)`-invariants of `m` commuting `n×n` matrices are
//! computed as trace expressions and compared, through restriction to
//! diagonal matrices, with `S_n`-invariants of `m` vector variables
//! (multisymmetric functions). Everything is exact over the rationals.
//!
//! - [`poly`]: sparse rational polynomials in three variable families
//! - [`combinat`]: permutations, set partitions, words `[m] -> [n]`
//! - [`rings`]: generic and diagonal matrix models, restriction, `S_n` action
//! - [`traceinv`]: trace expressions, the `S_{n+1}` trace identity, reduction,
//!   and the change of basis to `t_Λ`
//! - [`maps`]: the determinant map `D`, its polarization, and Aronhold
//!   polarization/restitution
//! - [`verify`]: the checks behind the `verify` subcommands
//! - [`cli`]: text grammar, command dispatch and JSON reports

pub mod cli;
pub mod combinat;
pub mod error;
pub mod maps;
pub mod parse;
pub mod poly;
pub mod rings;
pub mod rng;
pub mod traceinv;
pub mod verify;

pub use error::{Error, Result};
