use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modular::{mul_mod_u64, pow_mod_u64};
use super::Natural;
use crate::error::{Error, Result};

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// The first thirteen primes are a complete Miller-Rabin witness set below
/// this bound.
pub const DETERMINISTIC_BOUND: &str = "3317044064679887385961981";

/// How `is_prime` answers above the machine-word range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalityPolicy {
    /// Below this value the fixed deterministic base set is used.
    pub deterministic_threshold: Natural,
    /// Random-base Miller-Rabin rounds at or above the threshold.
    pub rounds: u32,
    pub seed: u64,
}

impl PrimalityPolicy {
    pub fn new(deterministic_threshold: Natural, rounds: u32, seed: u64) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::domain("primality rounds must be positive"));
        }
        let cap = Natural::parse_bytes(DETERMINISTIC_BOUND.as_bytes(), 10).expect("constant");
        if deterministic_threshold > cap {
            return Err(Error::domain(format!(
                "deterministic threshold exceeds {DETERMINISTIC_BOUND}"
            )));
        }
        Ok(PrimalityPolicy { deterministic_threshold, rounds, seed })
    }

    pub fn with_seed(seed: u64) -> Self {
        PrimalityPolicy { seed, ..Self::default() }
    }
}

impl Default for PrimalityPolicy {
    fn default() -> Self {
        PrimalityPolicy {
            deterministic_threshold: Natural::parse_bytes(DETERMINISTIC_BOUND.as_bytes(), 10)
                .expect("constant"),
            rounds: 64,
            seed: 0,
        }
    }
}

/// Deterministic Miller-Rabin for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    SMALL_PRIMES[..12].iter().all(|&a| {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                return true;
            }
        }
        false
    })
}

fn strong_probable_prime(n: &Natural, n_minus_one: &Natural, d: &Natural, s: u64, a: &Natural) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || x == *n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == *n_minus_one {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Primality test: exact below `policy.deterministic_threshold`, a
/// Miller-Rabin probable-prime verdict with `policy.rounds` seeded random
/// bases above it.
pub fn is_prime(n: &Natural, policy: &PrimalityPolicy) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    if *n < policy.deterministic_threshold {
        return SMALL_PRIMES
            .iter()
            .all(|&a| strong_probable_prime(n, &n_minus_one, &d, s, &Natural::from(a)));
    }
    if !strong_probable_prime(n, &n_minus_one, &d, s, &Natural::from(2u32)) {
        return false;
    }
    // Bases depend on the seed and on n, so repeated calls agree exactly.
    let low = (n % (1u128 << 64)).to_u64().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed ^ low.rotate_left(17));
    let two = Natural::from(2u32);
    let upper = n - 2u32;
    (0..policy.rounds).all(|_| {
        let a = rng.gen_biguint_range(&two, &upper);
        strong_probable_prime(n, &n_minus_one, &d, s, &a)
    })
}

pub(crate) fn is_odd_prime(n: &Natural, policy: &PrimalityPolicy) -> bool {
    n.is_odd() && is_prime(n, policy)
}
