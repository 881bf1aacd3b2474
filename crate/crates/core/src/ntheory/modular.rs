use num_traits::Zero;

use super::Natural;
use crate::error::{Error, Result};

/// `base^exponent mod modulus` for `modulus >= 2`.
pub fn mod_pow(base: &Natural, exponent: &Natural, modulus: &Natural) -> Result<Natural> {
    if *modulus < Natural::from(2u32) {
        return Err(Error::domain(format!("modulus {modulus} < 2")));
    }
    if exponent.is_zero() {
        return Ok(Natural::from(1u32));
    }
    Ok(base.modpow(exponent, modulus))
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
