//! Omission proofs over GF(P_i) from discrete-log components.
//!
//! Fix a known term `P_i`. If `Q` were the next term after step `n`, the
//! relation `1 + P_1 ... P_n = q_1^k_1 ... q_r^k_r` gives two kinds of
//! congruence on the exponent vector `k`:
//!
//! * modulo `P_i^2` the left side is `1 + P_i * (unit)`, so its index reduced
//!   mod `P_i` is nonzero: `b_i . k != 0 (mod P_i)`;
//! * for `P_j = 1 (mod P_i)` the left side is `1 (mod P_j)`, so its index
//!   mod `P_j` reduced mod `P_i` vanishes: `v_ij . k = 0 (mod P_i)`.
//!
//! Writing `b_i` as a combination of the `v_ij` contradicts both at once.
//! For `P_i = 2` the first kind is the unit group mod 4 and this is the
//! GF(2) method of [`crate::cvp_sieve`] in other coordinates.

use num_traits::ToPrimitive;

use crate::cvp_sieve::{candidate_set, primes_outside, MAX_TARGET};
use crate::error::{Error, Result};
use crate::linalg::{in_span_modp, rank_modp, PrimeFieldMatrix};
use crate::ntheory::{is_prime, FactorBudget, FermatQuotientLog, Natural, PrimalityPolicy, SubgroupLog};
use crate::terms::KnownTerms;
use crate::verify::{Reason, Verification};

fn term(known: &[Natural], i: usize) -> Result<&Natural> {
    i.checked_sub(1)
        .and_then(|k| known.get(k))
        .ok_or_else(|| Error::domain(format!("term index {i} outside 1..={}", known.len())))
}

fn small_modulus(p: &Natural) -> Result<u64> {
    p.to_u64()
        .filter(|&p| p < 1 << 63)
        .ok_or_else(|| Error::domain(format!("modulus {p} exceeds 2^63")))
}

fn eligible_in(i: usize, terms: &[Natural]) -> Result<Vec<usize>> {
    let pi = term(terms, i)?;
    Ok((1..=terms.len())
        .filter(|&j| j != i && (&terms[j - 1] % pi) == Natural::from(1u32))
        .collect())
}

/// 1-based indices `j != i` with `P_j = 1 (mod P_i)`.
pub fn eligible_j(i: usize, known: &KnownTerms) -> Result<Vec<usize>> {
    eligible_in(i, known.terms())
}

fn b_vector(i: usize, columns: &[Natural], terms: &[Natural], budget: &FactorBudget, policy: &PrimalityPolicy) -> Result<Vec<u64>> {
    let pi = term(terms, i)?;
    if columns.contains(pi) {
        return Err(Error::domain(format!("column {pi} equals the modulus")));
    }
    if *pi == Natural::from(2u32) {
        return Ok(columns.iter().map(|q| u64::from((q % 4u32) == Natural::from(3u32))).collect());
    }
    let log = FermatQuotientLog::new(pi, budget, policy)?;
    columns
        .iter()
        .map(|q| Ok(log.log(q)?.to_u64().expect("reduced below a u64 modulus")))
        .collect()
}

fn v_vector(
    i: usize,
    j: usize,
    columns: &[Natural],
    terms: &[Natural],
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<Vec<u64>> {
    let pi = small_modulus(term(terms, i)?)?;
    let pj = term(terms, j)?;
    if j == i || !(pj % pi == Natural::from(1u32)) {
        return Err(Error::domain(format!("P_{j} = {pj} is not 1 mod {pi}")));
    }
    let log = SubgroupLog::new(pj, pi, budget, policy)?;
    columns.iter().map(|q| log.log(q)).collect()
}

/// `b_i` over the given prime columns: `[q = 3 (mod 4)]` when `P_i = 2`,
/// otherwise the index of `q` modulo `P_i^2` reduced mod `P_i`.
pub fn build_b(i: usize, columns: &[Natural], known: &KnownTerms, budget: &FactorBudget, policy: &PrimalityPolicy) -> Result<Vec<u64>> {
    small_modulus(term(known.terms(), i)?)?;
    b_vector(i, columns, known.terms(), budget, policy)
}

/// `v_ij` over the given prime columns: the index of `q` modulo `P_j`
/// reduced mod `P_i`.
pub fn build_v(
    i: usize,
    j: usize,
    columns: &[Natural],
    known: &KnownTerms,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<Vec<u64>> {
    v_vector(i, j, columns, known.terms(), budget, policy)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintVectors {
    pub i: usize,
    pub modulus: u64,
    pub b: Vec<u64>,
    pub vs: Vec<(usize, Vec<u64>)>,
    /// Eligible `j` whose vector could not be computed within budget.
    pub skipped: Vec<usize>,
}

pub fn constraint_vectors(
    i: usize,
    columns: &[Natural],
    known: &KnownTerms,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<ConstraintVectors> {
    let modulus = small_modulus(term(known.terms(), i)?)?;
    let b = b_vector(i, columns, known.terms(), budget, policy)?;
    let mut vs = Vec::new();
    let mut skipped = Vec::new();
    for j in eligible_j(i, known)? {
        match v_vector(i, j, columns, known.terms(), budget, policy) {
            Ok(v) => vs.push((j, v)),
            Err(Error::BudgetExceeded { .. }) => {
                log::warn!("skipping P_{j}: factoring P_{j} - 1 exceeded the budget");
                skipped.push(j);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ConstraintVectors { i, modulus, b, vs, skipped })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOmissionCertificate {
    pub target: Natural,
    pub i: usize,
    pub js: Vec<usize>,
    pub coefficients: Vec<u64>,
    pub candidates: Vec<Natural>,
    pub provenance: String,
    pub known_terms: Vec<Natural>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenOutcome {
    Omitted(GenOmissionCertificate),
    Undecided { rank: usize, skipped: Vec<usize> },
}

impl GenOutcome {
    pub fn is_omitted(&self) -> bool {
        matches!(self, GenOutcome::Omitted(_))
    }
}

/// Tries to write `b_i` as a GF(P_i) combination of the `v_ij`. Only the
/// `j` with nonzero coefficients are listed in the certificate.
pub fn prove_omitted_gen(
    i: usize,
    q: &Natural,
    known: &KnownTerms,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<GenOutcome> {
    let cands = candidate_set(q, known, policy)?;
    let cv = constraint_vectors(i, cands.candidates(), known, budget, policy)?;
    let rows = cv.vs.iter().map(|(_, v)| v.clone()).collect();
    let matrix = PrimeFieldMatrix::from_rows(cv.modulus, rows, cands.len())?;
    Ok(match in_span_modp(&matrix, &cv.b)? {
        Some(coefficients) => {
            let (js, coefficients) = cv
                .vs
                .iter()
                .zip(coefficients)
                .filter(|(_, c)| *c != 0)
                .map(|((j, _), c)| (*j, c))
                .unzip();
            GenOutcome::Omitted(GenOmissionCertificate {
                target: q.clone(),
                i,
                js,
                coefficients,
                candidates: cands.candidates().to_vec(),
                provenance: known.provenance().to_string(),
                known_terms: known.terms().to_vec(),
            })
        }
        None => GenOutcome::Undecided { rank: rank_modp(&matrix), skipped: cv.skipped },
    })
}

/// Recomputes every vector the certificate uses and checks the combination.
pub fn verify_gen_certificate(
    cert: &GenOmissionCertificate,
    known: &KnownTerms,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Verification {
    let mut v = Verification::default();
    let terms = &cert.known_terms;
    if !known.terms().starts_with(terms) || terms.is_empty() {
        v.reject(Reason::TermsMismatch);
    }
    if !is_prime(&cert.target, policy) {
        v.reject(Reason::TargetNotPrime);
    }
    if known.contains(&cert.target) || terms.contains(&cert.target) {
        v.reject(Reason::TargetOccurs);
    }
    match cert.target.to_u64().filter(|&q| q <= MAX_TARGET) {
        Some(limit) if primes_outside(limit, terms) == cert.candidates => {}
        _ => v.reject(Reason::CandidateMismatch),
    }
    let Ok(modulus) = term(terms, cert.i).and_then(small_modulus) else {
        v.reject(Reason::BadIndex);
        return v;
    };
    let distinct = cert.js.iter().enumerate().all(|(k, j)| !cert.js[..k].contains(j));
    if cert.js.len() != cert.coefficients.len() || !distinct || cert.coefficients.iter().any(|&c| c >= modulus) {
        v.reject(Reason::MalformedCombination);
        return v;
    }
    let pi = &terms[cert.i - 1];
    for &j in &cert.js {
        match term(terms, j) {
            Ok(_) if j == cert.i => v.reject(Reason::BadIndex),
            Ok(pj) if !(pj % pi == Natural::from(1u32)) => v.reject(Reason::IneligibleTerm),
            Ok(_) => {}
            Err(_) => v.reject(Reason::BadIndex),
        }
    }
    if !v.accepted() {
        return v;
    }

    let recomputed = b_vector(cert.i, &cert.candidates, terms, budget, policy).and_then(|b| {
        let vs = cert
            .js
            .iter()
            .map(|&j| v_vector(cert.i, j, &cert.candidates, terms, budget, policy))
            .collect::<Result<Vec<_>>>()?;
        Ok((b, vs))
    });
    let Ok((b, vs)) = recomputed else {
        v.reject(Reason::RecomputationFailed);
        return v;
    };
    let matrix = PrimeFieldMatrix::from_rows(modulus, vs, cert.candidates.len());
    if !matrix.is_ok_and(|m| m.combine(&cert.coefficients) == b) {
        v.reject(Reason::CombinationMismatch);
    }
    v
}
