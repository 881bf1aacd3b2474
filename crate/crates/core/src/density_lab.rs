//! Densities of primes modulo which a fixed integer is an `m`-th power.

use num_integer::{Integer, Roots};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory::sieve::SegmentedPrimes;
use crate::ntheory::{is_prime_u64, pow_mod_u64, Natural};

/// Largest sampling bound accepted by [`empirical_density`].
pub const MAX_SAMPLE_BOUND: u64 = 10_000_000;

fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn is_perfect_power(q: i64, p: u32) -> bool {
    if q < 0 && p == 2 {
        return false;
    }
    let a = q.unsigned_abs();
    let root = a.nth_root(p);
    [root.saturating_sub(1), root, root + 1].iter().any(|&r| r.checked_pow(p) == Some(a))
}

/// Sample primes `p <= y` coprime to `q m` and test whether `q` is an `m`-th
/// power residue modulo each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PowerResidueQuery {
    q: i64,
    m: u64,
    y: u64,
}

impl PowerResidueQuery {
    pub fn new(q: i64, m: u64, y: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("m must be positive"));
        }
        let primes = prime_divisors(m);
        if primes.iter().product::<u64>() != m {
            return Err(Error::domain(format!("m = {m} is not squarefree")));
        }
        if q.unsigned_abs().gcd(&m) != 1 {
            return Err(Error::domain(format!("gcd({q}, {m}) > 1")));
        }
        if let Some(p) = primes.iter().find(|&&p| is_perfect_power(q, p as u32)) {
            return Err(Error::domain(format!("{q} is a perfect {p}-th power")));
        }
        if !(2..=MAX_SAMPLE_BOUND).contains(&y) {
            return Err(Error::domain(format!("y must lie in 2..={MAX_SAMPLE_BOUND}")));
        }
        Ok(PowerResidueQuery { q, m, y })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    /// `phi(m) / m`.
    pub fn predicted(&self) -> f64 {
        prime_divisors(self.m).iter().map(|&p| 1.0 - 1.0 / p as f64).product()
    }
}

/// Whether `x^m = q (mod p)` is solvable: `q^((p-1)/g) = 1` with
/// `g = gcd(m, p - 1)`.
pub fn is_mth_power_residue(q: i64, m: u64, p: u64) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let r = q.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Err(Error::domain(format!("{p} divides {q}")));
    }
    if m == 0 {
        return Err(Error::domain("m must be positive"));
    }
    let g = m.gcd(&(p - 1));
    Ok(pow_mod_u64(r, (p - 1) / g, p) == 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub lo: u64,
    pub hi: u64,
    pub sample_count: u64,
    pub hits: u64,
    pub empirical: f64,
    pub predicted: f64,
    pub deviation: f64,
}

impl DensityReport {
    pub const CSV_HEADER: &'static str = "p-range,hits,samples,empirical,predicted";

    pub fn csv_row(&self) -> String {
        format!("{}-{},{},{},{:.6},{:.6}", self.lo, self.hi, self.hits, self.sample_count, self.empirical, self.predicted)
    }
}

fn count(query: &PowerResidueQuery, lo: u64, hi: u64) -> DensityReport {
    let qm = (query.q.unsigned_abs() as u128) * query.m as u128;
    let (mut samples, mut hits) = (0u64, 0u64);
    for p in SegmentedPrimes::new(lo, hi) {
        if qm % p as u128 == 0 {
            continue;
        }
        samples += 1;
        if is_mth_power_residue(query.q, query.m, p).expect("p prime and coprime to q") {
            hits += 1;
        }
    }
    let predicted = query.predicted();
    let empirical = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
    DensityReport { lo, hi, sample_count: samples, hits, empirical, predicted, deviation: (empirical - predicted).abs() }
}

/// Proportion of primes `p <= y` with `p` coprime to `q m` for which `q` is
/// an `m`-th power residue.
pub fn empirical_density(query: &PowerResidueQuery) -> DensityReport {
    count(query, 2, query.y)
}

/// The sampling range split into `segments` equal-width pieces, one report
/// per piece, followed by the cumulative report.
pub fn density_segments(query: &PowerResidueQuery, segments: u64) -> Result<Vec<DensityReport>> {
    if segments == 0 {
        return Err(Error::domain("segments must be positive"));
    }
    let width = (query.y - 1).div_ceil(segments);
    let mut out: Vec<DensityReport> = (0..segments)
        .map(|k| 2 + k * width)
        .take_while(|&lo| lo <= query.y)
        .map(|lo| count(query, lo, (lo + width - 1).min(query.y)))
        .collect();
    out.push(empirical_density(query));
    Ok(out)
}

pub fn density_csv(reports: &[DensityReport]) -> String {
    let mut s = String::from(DensityReport::CSV_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// `prod (1 - 1/P_i)`, multiplied in index order.
pub fn euler_product(terms: &[Natural]) -> Result<f64> {
    if terms.is_empty() {
        return Err(Error::domain("empty term list"));
    }
    Ok(terms
        .iter()
        .map(|p| 1.0 - 1.0 / p.to_f64().unwrap_or(f64::INFINITY))
        .fold(1.0, |acc, f| acc * f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::TABLE1_SECOND;

    #[test]
    fn residue_examples() {
        assert!(!is_mth_power_residue(2, 3, 7).unwrap());
        assert!(is_mth_power_residue(2, 3, 5).unwrap());
        for p in [3u64, 5, 7, 11, 101] {
            assert!(is_mth_power_residue(2, 1, p).unwrap());
        }
        assert!(is_mth_power_residue(14, 2, 7).is_err());
        assert!(is_mth_power_residue(2, 2, 9).is_err());
    }

    #[test]
    fn residue_matches_enumeration() {
        for p in crate::ntheory::sieve::primes_up_to(500) {
            for m in [1u64, 2, 3, 5, 6, 7, 10, 15, 30] {
                let powers: Vec<bool> = {
                    let mut seen = vec![false; p as usize];
                    for x in 1..p {
                        seen[pow_mod_u64(x, m, p) as usize] = true;
                    }
                    seen
                };
                for q in 2i64..=50 {
                    if q as u64 % p == 0 {
                        continue;
                    }
                    let expected = powers[(q as u64 % p) as usize];
                    assert_eq!(is_mth_power_residue(q, m, p).unwrap(), expected, "q={q} m={m} p={p}");
                }
            }
        }
    }

    #[test]
    fn query_validation() {
        assert!(PowerResidueQuery::new(2, 3, 1000).is_ok());
        assert!(PowerResidueQuery::new(2, 4, 1000).is_err());
        assert!(PowerResidueQuery::new(3, 3, 1000).is_err());
        assert!(PowerResidueQuery::new(8, 3, 1000).is_err());
        assert!(PowerResidueQuery::new(9, 2, 1000).is_err());
        assert!(PowerResidueQuery::new(8, 5, 1000).is_ok());
        assert!(PowerResidueQuery::new(32, 5, 1000).is_err());
        assert!(PowerResidueQuery::new(-8, 3, 1000).is_err());
        assert!(PowerResidueQuery::new(-9, 2, 1000).is_ok());
        assert!(PowerResidueQuery::new(2, 3, MAX_SAMPLE_BOUND + 1).is_err());
        assert!(PowerResidueQuery::new(2, 0, 1000).is_err());
    }

    #[test]
    fn trivial_exponent_has_full_density() {
        for q in [2i64, 3, 10] {
            let r = empirical_density(&PowerResidueQuery::new(q, 1, 10_000).unwrap());
            assert_eq!(r.empirical, 1.0);
            assert_eq!(r.hits, r.sample_count);
        }
    }

    #[test]
    fn densities_at_ten_thousand() {
        let r = empirical_density(&PowerResidueQuery::new(2, 3, 10_000).unwrap());
        assert!((r.predicted - 2.0 / 3.0).abs() < 1e-12);
        assert!(r.deviation < 0.03, "{r:?}");
        assert_eq!(r.sample_count, 1229 - 2);
        let r = empirical_density(&PowerResidueQuery::new(3, 2, 10_000).unwrap());
        assert!(r.deviation < 0.03, "{r:?}");
    }

    #[test]
    fn segments_add_up() {
        let q = PowerResidueQuery::new(2, 3, 10_000).unwrap();
        let reports = density_segments(&q, 4).unwrap();
        assert_eq!(reports.len(), 5);
        let total = reports.last().unwrap();
        assert_eq!(reports[..4].iter().map(|r| r.hits).sum::<u64>(), total.hits);
        assert_eq!(reports[..4].iter().map(|r| r.sample_count).sum::<u64>(), total.sample_count);
        let csv = density_csv(&reports);
        assert!(csv.starts_with("p-range,hits,samples,empirical,predicted\n2-"));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn euler_products() {
        let terms: Vec<Natural> = TABLE1_SECOND.iter().map(|&t| Natural::from(t)).collect();
        let full = euler_product(&terms).unwrap();
        assert!((full - 0.277056).abs() < 1e-6, "{full}");
        assert_eq!(euler_product(&terms[..1]).unwrap(), 0.5);
        assert!((euler_product(&terms[..2]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(euler_product(&[]).is_err());
        let prefixes: Vec<f64> = (1..=terms.len()).map(|k| euler_product(&terms[..k]).unwrap()).collect();
        assert!(prefixes.windows(2).all(|w| w[1] <= w[0]));
    }
}
