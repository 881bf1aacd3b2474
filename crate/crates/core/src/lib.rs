//! Euclid–Mullin prime sequences and machine-checkable proofs that given
//! primes never occur in the second (largest-factor) sequence.

pub mod error;
pub mod ntheory;

pub mod certificate;
pub mod charsearch;
pub mod cvp_sieve;
pub mod density_lab;
pub mod gen_sieve;
pub mod linalg;
pub mod sequences;
pub mod terms;
pub mod verify;

pub use error::{Error, Result};
