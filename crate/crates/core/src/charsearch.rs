//! Quadratic characters, least non-residues, and integers with prescribed
//! character signs.

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{gf2_basis_selection, solve_gf2, BitMatrix, BitVector, Gf2Outcome};
use crate::ntheory::sieve::primes_up_to;
use crate::ntheory::{gcd_u64, is_prime_u64, kronecker_i64, Natural};

/// Whether `d` is a fundamental discriminant (1 counts, as the principal one).
pub fn is_fundamental(d: i64) -> bool {
    let squarefree = |m: i64| {
        let m = m.unsigned_abs();
        m != 0 && (2..).take_while(|p| p * p <= m).all(|p| m % (p * p) != 0)
    };
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree(d / 4),
        _ => false,
    }
}

/// `n -> (D|n)`, zeroed on `n` sharing a factor with `extra_modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadraticCharacter {
    discriminant: i64,
    extra_modulus: u64,
}

impl QuadraticCharacter {
    pub fn new(discriminant: i64, extra_modulus: u64) -> Result<Self> {
        if !is_fundamental(discriminant) {
            return Err(Error::domain(format!("{discriminant} is not a fundamental discriminant")));
        }
        if extra_modulus == 0 {
            return Err(Error::domain("extra modulus must be positive"));
        }
        Ok(QuadraticCharacter { discriminant, extra_modulus })
    }

    pub fn primitive(discriminant: i64) -> Result<Self> {
        Self::new(discriminant, 1)
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn extra_modulus(&self) -> u64 {
        self.extra_modulus
    }

    pub fn conductor(&self) -> u64 {
        self.discriminant.unsigned_abs()
    }

    pub fn is_principal(&self) -> bool {
        self.discriminant == 1
    }

    pub fn eval_u64(&self, n: u64) -> i8 {
        if gcd_u64(n, self.extra_modulus) > 1 {
            return 0;
        }
        // |D| fits in i64, so reducing n mod 4|D| keeps the symbol intact
        let period = 4 * self.conductor();
        let reduced = (n % period) as i64 + if n >= period { period as i64 } else { 0 };
        kronecker_i64(self.discriminant, reduced)
    }
}

pub fn char_eval(chi: &QuadraticCharacter, n: &Natural) -> i8 {
    let period = Natural::from(4 * chi.conductor());
    let reduced = if *n >= period { n % &period + &period } else { n.clone() };
    chi.eval_u64(reduced.to_u64().expect("below 8|D|"))
}

/// Least `n >= 1` with `chi(n) = -1`; always prime.
pub fn least_negative_prime(chi: &QuadraticCharacter, cap: u64) -> Result<u64> {
    if chi.is_principal() {
        return Err(Error::domain("the principal character never takes the value -1"));
    }
    let n = (1..=cap).find(|&n| chi.eval_u64(n) == -1).ok_or(Error::NotFound(cap))?;
    if !is_prime_u64(n) {
        return Err(Error::Internal(format!("least non-residue {n} is not prime")));
    }
    Ok(n)
}

/// A prime on which the product of the characters in `subset` is `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetWitness {
    pub subset: Vec<usize>,
    pub n_s: u64,
    /// Bit `t` is set iff character `t` is `-1` at `n_s`.
    pub w_s: BitVector,
}

impl SubsetWitness {
    pub fn v_s(&self) -> BitVector {
        let mut v = BitVector::zeros(self.w_s.len());
        for &i in &self.subset {
            v.set(i, true);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSearch {
    pub n: Natural,
    /// The basis witnesses whose primes may appear in `n`.
    pub basis: Vec<SubsetWitness>,
    /// Prime factors of `n`, ascending.
    pub primes: Vec<u64>,
}

// Subsets of 0..r ordered by size, then lexicographically.
fn subsets_by_size(r: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=r).flat_map(move |k| Combinations::new(r, k))
}

struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, current: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let advanced = (0..k).rev().find(|&i| next[i] < self.n - k + i).map(|i| {
            next[i] += 1;
            for t in i + 1..k {
                next[t] = next[t - 1] + 1;
            }
        });
        self.current = advanced.map(|_| next);
        Some(out)
    }
}

/// Squarefree `n` with at most `r` prime factors and `chi_i(n) = targets[i]`.
///
/// For each subset `S` (by size, then lexicographically) the least prime
/// `n_S` coprime to every modulus with `chi_S(n_S) = -1` is found, until the
/// sign vectors `w_S` span GF(2)^r. The target sign vector is then a sum of
/// basis vectors and `n` is the product of their primes. Primes are searched
/// up to `prime_cap`.
pub fn sign_search(characters: &[QuadraticCharacter], targets: &[i8], prime_cap: u64) -> Result<SignSearch> {
    let r = characters.len();
    if targets.len() != r {
        return Err(Error::domain(format!("{} targets for {r} characters", targets.len())));
    }
    if targets.iter().any(|&t| t != 1 && t != -1) {
        return Err(Error::domain("targets must be +1 or -1"));
    }
    for (i, a) in characters.iter().enumerate() {
        if a.is_principal() {
            return Err(Error::domain(format!("character {i} is principal")));
        }
        for b in &characters[..i] {
            if a.conductor().gcd(&b.conductor()) > 1 {
                return Err(Error::domain(format!(
                    "conductors {} and {} are not coprime",
                    a.conductor(),
                    b.conductor()
                )));
            }
        }
    }
    let target_bits = BitVector::from_bools(&targets.iter().map(|&t| t == -1).collect::<Vec<_>>());
    if target_bits.is_zero() {
        return Ok(SignSearch { n: Natural::from(1u32), basis: Vec::new(), primes: Vec::new() });
    }

    let mut basis: Vec<SubsetWitness> = Vec::new();
    for subset in subsets_by_size(r) {
        let found = (2..=prime_cap).filter(|&p| is_prime_u64(p)).find_map(|p| {
            let values: Vec<i8> = characters.iter().map(|c| c.eval_u64(p)).collect();
            let product: i8 = subset.iter().map(|&i| values[i]).product();
            (product == -1 && values.iter().all(|&v| v != 0)).then_some((p, values))
        });
        let Some((n_s, values)) = found else {
            return Err(Error::NotFound(prime_cap));
        };
        let w_s = BitVector::from_bools(&values.iter().map(|&v| v == -1).collect::<Vec<_>>());
        let mut trial: Vec<BitVector> = basis.iter().map(|w| w.w_s.clone()).collect();
        trial.push(w_s.clone());
        if gf2_basis_selection(&trial).len() == trial.len() {
            basis.push(SubsetWitness { subset, n_s, w_s });
            if basis.len() == r {
                break;
            }
        }
    }
    if basis.len() < r {
        return Err(Error::Internal("subset witnesses do not span".into()));
    }

    // rows are characters, columns basis witnesses
    let rows: Vec<BitVector> = (0..r)
        .map(|t| BitVector::from_bools(&basis.iter().map(|w| w.w_s.get(t)).collect::<Vec<_>>()))
        .collect();
    let matrix = BitMatrix::from_rows(rows, r)?;
    let Gf2Outcome::Solved { solution, .. } = solve_gf2(&matrix, &target_bits)? else {
        return Err(Error::Internal("a basis failed to reach the target signs".into()));
    };
    let mut chosen: Vec<u64> = solution.ones().map(|k| basis[k].n_s).collect();
    chosen.sort_unstable();
    let n = chosen.iter().map(|&p| Natural::from(p)).product();
    Ok(SignSearch { n, basis, primes: chosen })
}

/// `1 / (4 sqrt(e) - 1)`.
pub fn theorem1_exponent() -> f64 {
    1.0 / (4.0 * std::f64::consts::E.sqrt() - 1.0)
}

/// `1 / (4 sqrt(e))`.
pub fn burgess_exponent() -> f64 {
    1.0 / (4.0 * std::f64::consts::E.sqrt())
}

/// Largest `log(n_min) / log(p)` over the characters `(p*|.)` of odd prime
/// conductor `p` in a range, where `n_min` is the least non-residue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub lo: u64,
    pub hi: u64,
    pub characters: usize,
    pub max_ratio: f64,
    pub argmax: u64,
    pub n_min_at_argmax: u64,
}

pub fn least_nonresidue_scaling(lo: u64, hi: u64) -> Result<ScalingReport> {
    let primes: Vec<u64> = primes_up_to(hi).into_iter().filter(|&p| p >= lo.max(3)).collect();
    let mut report = ScalingReport { lo, hi, characters: 0, max_ratio: 0.0, argmax: 0, n_min_at_argmax: 0 };
    for p in primes {
        let d = if p % 4 == 1 { p as i64 } else { -(p as i64) };
        let n = least_negative_prime(&QuadraticCharacter::primitive(d)?, p)?;
        let ratio = (n as f64).ln() / (p as f64).ln();
        report.characters += 1;
        if ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.argmax = p;
            report.n_min_at_argmax = n;
        }
    }
    Ok(report)
}
