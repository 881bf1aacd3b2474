//! Single-component discrete logarithms.
//!
//! Logs are never computed in full. [`SubgroupLog`] extracts the index of a
//! unit modulo `p` reduced mod a small prime `ell | p - 1`, and
//! [`FermatQuotientLog`] extracts the index modulo `p^2` reduced mod `p`,
//! working inside the order-`p` subgroup `{1 + p*a}`. Both are taken with
//! respect to the least primitive root modulo `p^2`.

use std::collections::HashMap;

use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use super::factor::{factorize, FactorBudget};
use super::primality::{is_odd_prime, is_prime, PrimalityPolicy};
use super::Natural;
use crate::error::{Error, Result};

/// Least `g >= 2` generating the unit group modulo `p^2`, for an odd prime `p`.
///
/// Checks `g^(p(p-1)/r) != 1 (mod p^2)` for every prime `r | p(p-1)`, which
/// needs the factorization of `p - 1`.
pub fn primitive_root_mod_p2(
    p: &Natural,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<Natural> {
    if !is_odd_prime(p, policy) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    let p_minus_one = p - 1u32;
    let modulus = p * p;
    let order = p * &p_minus_one;
    let mut radicals: Vec<Natural> = match factorize(&p_minus_one, budget, policy) {
        Ok(map) => map.primes().cloned().collect(),
        Err(Error::Domain(_)) => Vec::new(), // p - 1 = 1 cannot happen for odd p
        Err(e) => return Err(e),
    };
    radicals.push(p.clone());
    let exponents: Vec<Natural> = radicals.iter().map(|r| &order / r).collect();
    let mut g = Natural::from(2u32);
    loop {
        if !(&g % p).is_zero() && exponents.iter().all(|e| !g.modpow(e, &modulus).is_one()) {
            return Ok(g);
        }
        g += 1u32;
        if g >= modulus {
            return Err(Error::Internal(format!("no primitive root modulo {p}^2")));
        }
    }
}

const BRUTE_FORCE_LIMIT: u64 = 1 << 16;

/// Index modulo a small prime `ell` of units modulo `p`, where `ell | p - 1`.
#[derive(Debug, Clone)]
pub struct SubgroupLog {
    p: Natural,
    ell: u64,
    cofactor: Natural,
    // g^((p-1)/ell) for the least primitive root g mod p^2; None when ell = 2,
    // where the generator power is always -1.
    base: Option<Natural>,
}

impl SubgroupLog {
    pub fn new(p: &Natural, ell: u64, budget: &FactorBudget, policy: &PrimalityPolicy) -> Result<Self> {
        if !is_prime(&Natural::from(ell), policy) {
            return Err(Error::domain(format!("{ell} is not prime")));
        }
        if !is_odd_prime(p, policy) {
            return Err(Error::domain(format!("{p} is not an odd prime")));
        }
        let p_minus_one = p - 1u32;
        if !(&p_minus_one % ell).is_zero() {
            return Err(Error::domain(format!("{ell} does not divide {p} - 1")));
        }
        let cofactor = &p_minus_one / ell;
        let base = if ell == 2 {
            None
        } else {
            let g = primitive_root_mod_p2(p, budget, policy)?;
            Some(g.modpow(&cofactor, p))
        };
        Ok(SubgroupLog { p: p.clone(), ell, cofactor, base })
    }

    pub fn modulus(&self) -> &Natural {
        &self.p
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// `e` in `[0, ell)` with `q^((p-1)/ell) = (g^((p-1)/ell))^e (mod p)`.
    pub fn log(&self, q: &Natural) -> Result<u64> {
        if (q % &self.p).is_zero() {
            return Err(Error::domain(format!("{q} is not a unit modulo {}", self.p)));
        }
        let target = q.modpow(&self.cofactor, &self.p);
        let Some(base) = &self.base else {
            return if target.is_one() {
                Ok(0)
            } else if target == &self.p - 1u32 {
                Ok(1)
            } else {
                Err(Error::Internal(format!("Euler criterion failed for {q} mod {}", self.p)))
            };
        };
        if self.ell <= BRUTE_FORCE_LIMIT {
            let mut acc = Natural::one();
            for e in 0..self.ell {
                if acc == target {
                    return Ok(e);
                }
                acc = (acc * base) % &self.p;
            }
        } else if let Some(e) = self.baby_step_giant_step(base, &target) {
            return Ok(e);
        }
        Err(Error::Internal(format!(
            "no log of {q} in the order-{} subgroup modulo {}",
            self.ell, self.p
        )))
    }

    fn baby_step_giant_step(&self, base: &Natural, target: &Natural) -> Option<u64> {
        let m = self.ell.sqrt() + 1;
        let mut table = HashMap::with_capacity(m as usize);
        let mut acc = Natural::one();
        for j in 0..m {
            table.entry(acc.clone()).or_insert(j);
            acc = (acc * base) % &self.p;
        }
        // base^(-m) = base^(ell - m) since base has order ell
        let stride = base.modpow(&Natural::from(self.ell - m % self.ell), &self.p);
        let mut gamma = target.clone();
        for i in 0..m {
            if let Some(&j) = table.get(&gamma) {
                return Some((i * m + j) % self.ell);
            }
            gamma = (gamma * &stride) % &self.p;
        }
        None
    }
}

/// Index modulo `p` of units modulo `p^2` (the Fermat-quotient component).
#[derive(Debug, Clone)]
pub struct FermatQuotientLog {
    p: Natural,
    p_squared: Natural,
    p_minus_one: Natural,
    // inverse mod p of the Fermat quotient of the primitive root
    root_quotient_inverse: Natural,
}

impl FermatQuotientLog {
    pub fn new(p: &Natural, budget: &FactorBudget, policy: &PrimalityPolicy) -> Result<Self> {
        let g = primitive_root_mod_p2(p, budget, policy)?;
        let p_squared = p * p;
        let p_minus_one = p - 1u32;
        let quotient = fermat_quotient(&g, p, &p_squared, &p_minus_one);
        if quotient.is_zero() {
            return Err(Error::Internal(format!("{g} is not a primitive root modulo {p}^2")));
        }
        let root_quotient_inverse = quotient.modpow(&(p - 2u32), p);
        Ok(FermatQuotientLog { p: p.clone(), p_squared, p_minus_one, root_quotient_inverse })
    }

    pub fn modulus(&self) -> &Natural {
        &self.p
    }

    pub fn log(&self, q: &Natural) -> Result<Natural> {
        if (q % &self.p).is_zero() {
            return Err(Error::domain(format!("{q} is not a unit modulo {}", self.p)));
        }
        let quotient = fermat_quotient(q, &self.p, &self.p_squared, &self.p_minus_one);
        Ok((quotient * &self.root_quotient_inverse) % &self.p)
    }
}

// a with q^(p-1) = 1 + p*a (mod p^2)
fn fermat_quotient(q: &Natural, p: &Natural, p_squared: &Natural, p_minus_one: &Natural) -> Natural {
    let power = q.modpow(p_minus_one, p_squared);
    (power - 1u32) / p
}

/// Index of `q` (base the least primitive root mod `p^2`) reduced mod `ell`.
pub fn dlog_in_subgroup(
    q: &Natural,
    p: &Natural,
    ell: u64,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<u64> {
    SubgroupLog::new(p, ell, budget, policy)?.log(q)
}

/// Index of `q` modulo `p^2` (base the least primitive root mod `p^2`)
/// reduced mod `p`.
pub fn fermat_quotient_log(
    q: &Natural,
    p: &Natural,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<u64> {
    let log = FermatQuotientLog::new(p, budget, policy)?.log(q)?;
    log.to_u64()
        .ok_or_else(|| Error::domain(format!("modulus {p} exceeds the machine word")))
}
