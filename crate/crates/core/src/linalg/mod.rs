//! Exact linear algebra over GF(2) (bit-packed) and small prime fields.
//!
//! Pivoting is deterministic everywhere: lowest pivot column first, lowest
//! row index among the candidates, free variables set to zero.

mod gf2;
mod gfp;

pub use gf2::{gf2_basis_selection, solve_gf2, BitMatrix, BitVector, Gf2Outcome};
pub use gfp::{in_span_modp, rank_modp, PrimeFieldMatrix};
