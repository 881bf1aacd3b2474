use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::modular::{gcd_u64, mul_mod_u64};
use super::primality::{is_prime, is_prime_u64, PrimalityPolicy};
use super::sieve::primes_up_to;
use super::Natural;
use crate::error::{Error, Result};

/// Prime factorization as a map from prime to positive exponent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FactorMap(BTreeMap<Natural, u32>);

impl FactorMap {
    pub fn new() -> Self {
        FactorMap(BTreeMap::new())
    }

    pub fn insert(&mut self, prime: Natural, exponent: u32) {
        if exponent > 0 {
            *self.0.entry(prime).or_insert(0) += exponent;
        }
    }

    pub fn merge(&mut self, other: &FactorMap) {
        for (p, &e) in other.iter() {
            self.insert(p.clone(), e);
        }
    }

    pub fn exponent(&self, prime: &Natural) -> u32 {
        self.0.get(prime).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Natural, &u32)> {
        self.0.iter()
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> {
        self.0.keys()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn smallest(&self) -> Option<&Natural> {
        self.0.keys().next()
    }

    pub fn largest(&self) -> Option<&Natural> {
        self.0.keys().next_back()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.values().all(|&e| e == 1)
    }

    /// Product of `p^e` over all entries.
    pub fn product(&self) -> Natural {
        self.0
            .iter()
            .fold(Natural::one(), |acc, (p, &e)| acc * num_traits::pow(p.clone(), e as usize))
    }
}

impl FromIterator<(Natural, u32)> for FactorMap {
    fn from_iter<I: IntoIterator<Item = (Natural, u32)>>(iter: I) -> Self {
        let mut map = FactorMap::new();
        for (p, e) in iter {
            map.insert(p, e);
        }
        map
    }
}

impl fmt::Display for FactorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, &e) in &self.0 {
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Work limits for [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division covers every prime up to this bound.
    pub trial_bound: u64,
    /// Pollard-rho iterations allowed per polynomial.
    pub rho_iterations: u64,
    /// Number of polynomials `x^2 + c` tried per composite.
    pub rho_restarts: u32,
    pub seed: u64,
}

impl FactorBudget {
    pub fn new(trial_bound: u64, rho_iterations: u64, rho_restarts: u32, seed: u64) -> Result<Self> {
        if trial_bound == 0 || rho_iterations == 0 || rho_restarts == 0 {
            return Err(Error::domain("factor budget components must be positive"));
        }
        Ok(FactorBudget { trial_bound, rho_iterations, rho_restarts, seed })
    }

    pub fn with_seed(seed: u64) -> Self {
        FactorBudget { seed, ..Self::default() }
    }
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 100_000,
            rho_iterations: 1 << 23,
            rho_restarts: 4,
            seed: 0,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

const BATCH: u64 = 128;

/// Brent's variant of Pollard rho on `x^2 + c`, machine-word modulus.
fn brent_u64(n: u64, c: u64, max_iterations: u64) -> Option<u64> {
    let f = |x: u64| ((mul_mod_u64(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let mut y = 2 % n;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x;
    let mut ys = y;
    let mut spent = 0u64;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        spent += r;
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += steps;
        }
        spent += k;
        r <<= 1;
        if g != 1 || spent > max_iterations {
            break;
        }
    }
    if g == n || g == 0 {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != 1 && g != n).then_some(g)
}

/// Brent's variant of Pollard rho on `x^2 + c`, arbitrary precision.
fn brent_big(n: &Natural, c: &Natural, max_iterations: u64) -> Option<Natural> {
    let f = |x: &Natural| (x * x + c) % n;
    let diff = |a: &Natural, b: &Natural| if a >= b { a - b } else { b - a };
    let mut y = Natural::from(2u32) % n;
    let mut r = 1u64;
    let mut q = Natural::one();
    let mut g = Natural::one();
    let mut x;
    let mut ys = y.clone();
    let mut spent = 0u64;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        spent += r;
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                q = (q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += steps;
        }
        spent += k;
        r <<= 1;
        if !g.is_one() || spent > max_iterations {
            break;
        }
    }
    if g == *n || g.is_zero() {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (!g.is_one() && g != *n).then_some(g)
}

/// One nontrivial factor of the odd composite `n`, trying `rho_restarts`
/// polynomials whose constants start at a seed-derived value.
fn rho_split(n: &Natural, budget: &FactorBudget) -> Option<Natural> {
    let mix = splitmix64(budget.seed ^ (n % (1u128 << 64)).to_u64().unwrap_or(0));
    if let Some(small) = n.to_u64() {
        let mut c = 1 + mix % (small - 3);
        for _ in 0..budget.rho_restarts {
            if let Some(d) = brent_u64(small, c, budget.rho_iterations) {
                return Some(Natural::from(d));
            }
            c = c % (small - 3) + 1;
        }
        return None;
    }
    let span = n - 3u32;
    let mut c = Natural::from(mix) % &span + 1u32;
    for _ in 0..budget.rho_restarts {
        if let Some(d) = brent_big(n, &c, budget.rho_iterations) {
            return Some(d);
        }
        c = c % &span + 1u32;
    }
    None
}

/// Detects `n = root^k` with `k >= 2`, returning the largest such `k`.
fn perfect_power(n: &Natural) -> Option<(Natural, u32)> {
    let bits = n.bits() as u32;
    let mut found = None;
    for k in 2..=bits {
        if !is_prime_u64(k as u64) {
            continue;
        }
        let root = n.nth_root(k);
        if root <= Natural::one() {
            break;
        }
        if num_traits::pow(root.clone(), k as usize) == *n {
            found = Some((root, k));
            break;
        }
    }
    let (root, k) = found?;
    match perfect_power(&root) {
        Some((inner, j)) => Some((inner, k * j)),
        None => Some((root, k)),
    }
}

const CACHED_BOUND: u64 = 1 << 20;
static SMALL_PRIMES: OnceLock<Vec<u64>> = OnceLock::new();

/// Trial division by primes up to `bound`, removing each factor found.
/// Returns the primes found and the remaining cofactor. When `first_only`
/// is set, stops after the first prime divisor.
fn trial_divide(n: &Natural, bound: u64, first_only: bool) -> (FactorMap, Natural) {
    let mut found = FactorMap::new();
    let mut rest = n.clone();
    let owned;
    let primes: &[u64] = if bound <= CACHED_BOUND {
        let all = SMALL_PRIMES.get_or_init(|| primes_up_to(CACHED_BOUND));
        &all[..all.partition_point(|&p| p <= bound)]
    } else {
        owned = primes_up_to(bound);
        &owned
    };
    let mut idx = 0;
    while idx < primes.len() && rest.to_u64().is_none() {
        let p = primes[idx];
        idx += 1;
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            found.insert(Natural::from(p), e);
            if first_only {
                return (found, rest);
            }
        }
    }
    let Some(mut small) = rest.to_u64() else {
        return (found, rest);
    };
    for &p in &primes[idx..] {
        if small == 1 {
            break;
        }
        if p.saturating_mul(p) > small {
            found.insert(Natural::from(small), 1);
            small = 1;
            break;
        }
        let mut e = 0;
        while small % p == 0 {
            small /= p;
            e += 1;
        }
        if e > 0 {
            found.insert(Natural::from(p), e);
            if first_only {
                break;
            }
        }
    }
    (found, Natural::from(small))
}

/// Factors a cofactor with no prime divisor below the trial bound.
/// Returns the factored primes and the product of everything left unsplit.
fn factor_cofactor(
    n: Natural,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> (FactorMap, Natural) {
    let mut found = FactorMap::new();
    let mut stuck = Natural::one();
    let mut stack = vec![(n, 1u32)];
    while let Some((m, mult)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m, policy) {
            found.insert(m, mult);
            continue;
        }
        if let Some((root, k)) = perfect_power(&m) {
            stack.push((root, mult * k));
            continue;
        }
        if m.is_even() {
            // only reachable when the trial bound is below 2
            let tz = m.trailing_zeros().unwrap_or(0) as u32;
            found.insert(Natural::from(2u32), mult * tz);
            stack.push((m >> tz, mult));
            continue;
        }
        match rho_split(&m, budget) {
            Some(d) => {
                let other = &m / &d;
                stack.push((d, mult));
                stack.push((other, mult));
            }
            None => stuck *= num_traits::pow(m, mult as usize),
        }
    }
    (found, stuck)
}

/// Complete prime factorization of `n >= 2`: trial division, then perfect
/// power detection, then Brent rho on the remaining composites.
pub fn factorize(n: &Natural, budget: &FactorBudget, policy: &PrimalityPolicy) -> Result<FactorMap> {
    if *n < Natural::from(2u32) {
        return Err(Error::domain(format!("cannot factor {n}")));
    }
    let (mut found, rest) = trial_divide(n, budget.trial_bound, false);
    let (more, stuck) = factor_cofactor(rest, budget, policy);
    found.merge(&more);
    if stuck.is_one() {
        Ok(found)
    } else {
        Err(Error::BudgetExceeded { partial: found, cofactor: stuck })
    }
}

/// Outcome of a smallest-prime-factor search: the answer, the primes found on
/// the way, and whatever part of `n` was left unexamined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallestFactor {
    pub prime: Natural,
    pub partial: FactorMap,
    pub cofactor: Natural,
}

impl SmallestFactor {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }
}

pub(crate) fn smallest_prime_factor_detail(
    n: &Natural,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<SmallestFactor> {
    if *n < Natural::from(2u32) {
        return Err(Error::domain(format!("{n} has no prime factor")));
    }
    let (partial, rest) = trial_divide(n, budget.trial_bound, true);
    if let Some(p) = partial.smallest() {
        return Ok(SmallestFactor { prime: p.clone(), partial: partial.clone(), cofactor: rest });
    }
    if is_prime(&rest, policy) {
        let partial: FactorMap = [(rest.clone(), 1)].into_iter().collect();
        return Ok(SmallestFactor { prime: rest, partial, cofactor: Natural::one() });
    }
    // Every prime factor of `rest` exceeds the trial bound, so nothing is
    // certain until the cofactor splits completely.
    let (found, stuck) = factor_cofactor(rest, budget, policy);
    if !stuck.is_one() {
        return Err(Error::BudgetExceeded { partial: found, cofactor: stuck });
    }
    let prime = found.smallest().cloned().expect("cofactor above 1 has a prime factor");
    Ok(SmallestFactor { prime, partial: found, cofactor: stuck })
}

/// Smallest prime factor of `n >= 2`. Exits as soon as trial division finds a
/// divisor.
pub fn smallest_prime_factor(
    n: &Natural,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<Natural> {
    smallest_prime_factor_detail(n, budget, policy).map(|s| s.prime)
}

/// Largest prime factor of `n >= 2`; requires the complete factorization.
pub fn largest_prime_factor(
    n: &Natural,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<Natural> {
    let map = factorize(n, budget, policy)?;
    Ok(map.largest().cloned().expect("n >= 2 has a prime factor"))
}
