use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Natural;

/// Jacobi symbol `(a|n)` for odd `n`.
pub fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n & 1 == 1, "jacobi_u64 needs an odd modulus");
    a %= n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        // (2|n) = -1 iff n = 3, 5 (mod 8)
        if tz & 1 == 1 && matches!(n & 7, 3 | 5) {
            sign = -sign;
        }
        if a & 3 == 3 && n & 3 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

fn jacobi_big(a: Natural, n: Natural) -> i8 {
    let mut a = a % &n;
    let mut n = n;
    let mut sign = 1i8;
    loop {
        if let (Some(a64), Some(n64)) = (a.to_u64(), n.to_u64()) {
            return sign * jacobi_u64(a64, n64);
        }
        if a.is_zero() {
            return if n.is_one() { sign } else { 0 };
        }
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n8 = (&n % 8u32).to_u32().unwrap_or(0);
        if tz & 1 == 1 && matches!(n8, 3 | 5) {
            sign = -sign;
        }
        let a4 = (&a % 4u32).to_u32().unwrap_or(0);
        if a4 == 3 && n8 & 3 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
}

#[inline]
fn kronecker_two(a_mod8: u32) -> i8 {
    match a_mod8 {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

/// Kronecker symbol `(a|n)` for arbitrary integers.
///
/// Conventions: `(a|0) = 1` iff `a = ±1`; `(a|-1) = -1` iff `a < 0`;
/// `(a|2)` is determined by `a mod 8`.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut sign = 1i8;
    if n.sign() == Sign::Minus && a.sign() == Sign::Minus {
        sign = -1;
    }
    let mut m = n.magnitude().clone();
    let tz = m.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        if a.is_even() {
            return 0;
        }
        let a8 = a.mod_floor(&BigInt::from(8)).to_u32().unwrap_or(0);
        if tz & 1 == 1 {
            sign *= kronecker_two(a8);
        }
        m >>= tz;
    }
    if m.is_one() {
        return sign;
    }
    let residue = a
        .mod_floor(&BigInt::from_biguint(Sign::Plus, m.clone()))
        .magnitude()
        .clone();
    sign * jacobi_big(residue, m)
}

/// [`kronecker`] on machine integers.
pub fn kronecker_i64(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut sign = 1i8;
    if n < 0 && a < 0 {
        sign = -1;
    }
    let mut m = n.unsigned_abs();
    let tz = m.trailing_zeros();
    if tz > 0 {
        if a & 1 == 0 {
            return 0;
        }
        if tz & 1 == 1 {
            sign *= kronecker_two(a.rem_euclid(8) as u32);
        }
        m >>= tz;
    }
    if m == 1 {
        return sign;
    }
    let residue = (a as i128).rem_euclid(m as i128) as u64;
    sign * jacobi_u64(residue, m)
}
