//! Arbitrary-precision number theory kernel.
//!
//! Every integer quantity in the crate is a [`Natural`] (an arbitrary-precision
//! unsigned integer) or, where a sign is meaningful, a [`num_bigint::BigInt`].
//! Hot loops drop to `u64` arithmetic with `u128` intermediates whenever the
//! operands fit.

mod dlog;
pub(crate) mod factor;
mod kronecker;
mod modular;
mod primality;
pub mod sieve;

pub use dlog::{
    dlog_in_subgroup, fermat_quotient_log, primitive_root_mod_p2, FermatQuotientLog, SubgroupLog,
};
pub use factor::{
    factorize, largest_prime_factor, smallest_prime_factor, FactorBudget, FactorMap,
    SmallestFactor,
};
pub use kronecker::{jacobi_u64, kronecker, kronecker_i64};
pub use modular::{gcd_u64, mod_pow, mul_mod_u64, pow_mod_u64};
pub use primality::{is_prime, is_prime_u64, PrimalityPolicy};

/// Arbitrary-precision non-negative integer.
pub type Natural = num_bigint::BigUint;
