//! Omission proofs over GF(2) from quadratic characters of known terms.
//!
//! Suppose `Q` were the term after `P_n`, with `n >= N` known terms. Then
//! `1 + P_1 ... P_n = q_1^k_1 ... q_r^k_r` with every `q_t` a prime `<= Q`
//! outside the known terms. The left side is `3 (mod 4)` and is a square
//! modulo every odd `P_i`, so for any `d` built from prime discriminants of
//! odd known terms, `(d|.)` and `(-4|.)` are both multiplicative functions
//! taking values `+1` and `-1` on it. If `(d|q) = (-4|q)` for every candidate
//! `q` the two values coincide, which is a contradiction. The steps `n < N` are
//! covered by `Q` not being among the known terms.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::linalg::{solve_gf2, BitMatrix, BitVector, Gf2Outcome};
use crate::ntheory::sieve::primes_up_to;
use crate::ntheory::{is_prime, kronecker, Natural, PrimalityPolicy};
use crate::terms::KnownTerms;
use crate::verify::{Reason, Verification};

/// Largest target the sieve enumerates candidates for.
pub const MAX_TARGET: u64 = 1 << 32;

/// The primes `q <= Q` that are not known terms, including `Q` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    target: Natural,
    candidates: Vec<Natural>,
}

impl CandidateSet {
    pub fn target(&self) -> &Natural {
        &self.target
    }

    pub fn candidates(&self) -> &[Natural] {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

fn target_u64(q: &Natural) -> Result<u64> {
    q.to_u64()
        .filter(|&q| q <= MAX_TARGET)
        .ok_or_else(|| Error::domain(format!("target {q} exceeds {MAX_TARGET}")))
}

pub(crate) fn primes_outside(limit: u64, terms: &[Natural]) -> Vec<Natural> {
    primes_up_to(limit)
        .into_iter()
        .map(Natural::from)
        .filter(|p| !terms.contains(p))
        .collect()
}

pub fn candidate_set(q: &Natural, known: &KnownTerms, policy: &PrimalityPolicy) -> Result<CandidateSet> {
    let limit = target_u64(q)?;
    if !is_prime(q, policy) {
        return Err(Error::domain(format!("target {q} is not prime")));
    }
    if known.contains(q) {
        return Err(Error::TargetAlreadyOccurs(q.clone()));
    }
    Ok(CandidateSet { target: q.clone(), candidates: primes_outside(limit, known.terms()) })
}

/// `p*`: `p` if `p = 1 (mod 4)`, else `-p`.
pub fn prime_discriminant(p: &Natural) -> Result<BigInt> {
    let r = (p % 4u32).to_u32().expect("below 4");
    match r {
        1 => Ok(BigInt::from(p.clone())),
        3 => Ok(-BigInt::from(p.clone())),
        _ => Err(Error::domain(format!("{p} has no odd prime discriminant"))),
    }
}

/// Product of prime discriminants over a set of odd known terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discriminant {
    pub support: Vec<Natural>,
    pub value: BigInt,
}

impl Discriminant {
    pub fn from_support(support: Vec<Natural>) -> Result<Self> {
        let mut value = BigInt::one();
        for p in &support {
            value *= prime_discriminant(p)?;
        }
        Ok(Discriminant { support, value })
    }

    pub fn is_trivial(&self) -> bool {
        self.support.is_empty()
    }
}

/// A proof that `target` never occurs in the second sequence, relative to the
/// listed prefix of terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmissionCertificate {
    pub target: Natural,
    pub provenance: String,
    pub known_terms: Vec<Natural>,
    pub candidates: Vec<Natural>,
    pub discriminant: Discriminant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CvpOutcome {
    Omitted(OmissionCertificate),
    /// No discriminant works. `witness` lists candidates whose equations sum
    /// to `0 = 1`.
    Undecided { rank: usize, witness: Vec<Natural> },
}

impl CvpOutcome {
    pub fn is_omitted(&self) -> bool {
        matches!(self, CvpOutcome::Omitted(_))
    }
}

fn odd_terms(terms: &[Natural]) -> impl Iterator<Item = &Natural> {
    terms.iter().filter(|t| t.bit(0))
}

fn signed(n: &Natural) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

fn system_row(q: &Natural, discriminants: &[BigInt]) -> (BitVector, bool) {
    let q = signed(q);
    let mut row = BitVector::zeros(discriminants.len());
    for (j, d) in discriminants.iter().enumerate() {
        row.set(j, kronecker(d, &q) == -1);
    }
    (row, kronecker(&BigInt::from(-4), &q) == -1)
}

/// Rows are candidates and columns odd known terms: entry 1 iff
/// `(P_j*|q) = -1`, right-hand side 1 iff `(-4|q) = -1`.
pub fn build_system(cands: &CandidateSet, known: &KnownTerms) -> Result<(BitMatrix, BitVector)> {
    let discriminants: Vec<BigInt> = odd_terms(known.terms()).map(prime_discriminant).collect::<Result<_>>()?;
    let mut matrix = BitMatrix::new(discriminants.len());
    let mut rhs = BitVector::zeros(cands.len());
    for (t, q) in cands.candidates.iter().enumerate() {
        let (row, bit) = system_row(q, &discriminants);
        matrix.push_row(row)?;
        rhs.set(t, bit);
    }
    Ok((matrix, rhs))
}

pub fn prove_omitted(q: &Natural, known: &KnownTerms, policy: &PrimalityPolicy) -> Result<CvpOutcome> {
    let cands = candidate_set(q, known, policy)?;
    let (matrix, rhs) = build_system(&cands, known)?;
    let columns: Vec<&Natural> = odd_terms(known.terms()).collect();
    Ok(match solve_gf2(&matrix, &rhs)? {
        Gf2Outcome::Solved { solution, .. } => {
            let support = solution.ones().map(|j| columns[j].clone()).collect();
            CvpOutcome::Omitted(OmissionCertificate {
                target: q.clone(),
                provenance: known.provenance().to_string(),
                known_terms: known.terms().to_vec(),
                candidates: cands.candidates,
                discriminant: Discriminant::from_support(support)?,
            })
        }
        Gf2Outcome::Inconsistent { witness, rank } => CvpOutcome::Undecided {
            rank,
            witness: witness.into_iter().map(|t| cands.candidates[t].clone()).collect(),
        },
    })
}

/// Checks a certificate against trusted terms without running the solver.
pub fn verify_certificate(cert: &OmissionCertificate, known: &KnownTerms, policy: &PrimalityPolicy) -> Verification {
    let mut v = Verification::default();
    if !known.terms().starts_with(&cert.known_terms) || cert.known_terms.is_empty() {
        v.reject(Reason::TermsMismatch);
    }
    if !is_prime(&cert.target, policy) {
        v.reject(Reason::TargetNotPrime);
    }
    if known.contains(&cert.target) || cert.known_terms.contains(&cert.target) {
        v.reject(Reason::TargetOccurs);
    }
    match target_u64(&cert.target) {
        Ok(limit) if primes_outside(limit, &cert.known_terms) == cert.candidates => {}
        _ => v.reject(Reason::CandidateMismatch),
    }

    let d = &cert.discriminant;
    let odd: Vec<&Natural> = odd_terms(&cert.known_terms).collect();
    if d.support.iter().any(|p| !odd.contains(&p)) {
        v.reject(Reason::SupportNotKnown);
    }
    let distinct = d.support.iter().enumerate().all(|(i, p)| !d.support[..i].contains(p));
    let assembled = Discriminant::from_support(d.support.clone()).ok().map(|x| x.value);
    let one_mod_four = d.value.mod_floor(&BigInt::from(4)).is_one();
    if !distinct || assembled.as_ref() != Some(&d.value) || !one_mod_four {
        v.reject(Reason::MalformedDiscriminant);
    }

    let minus_four = BigInt::from(-4);
    let mismatch = cert.candidates.iter().any(|q| {
        let q = signed(q);
        kronecker(&d.value, &q) != kronecker(&minus_four, &q)
    });
    if mismatch {
        v.reject(Reason::CharacterMismatch);
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepEntry {
    pub target: Natural,
    pub outcome: CvpOutcome,
}

/// Per-target outcomes in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub limit: Natural,
    pub provenance: String,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn omitted(&self) -> Vec<&Natural> {
        self.entries.iter().filter(|e| e.outcome.is_omitted()).map(|e| &e.target).collect()
    }

    pub fn undecided(&self) -> Vec<&Natural> {
        self.entries.iter().filter(|e| !e.outcome.is_omitted()).map(|e| &e.target).collect()
    }

    /// One line per target: `Q omitted d=...` or `Q undecided rank=...`.
    pub fn to_text(&self) -> String {
        let mut out = format!("# sweep limit={} terms={}\n", self.limit, self.provenance);
        for e in &self.entries {
            match &e.outcome {
                CvpOutcome::Omitted(cert) => {
                    out.push_str(&format!("{} omitted d={}\n", e.target, cert.discriminant.value));
                }
                CvpOutcome::Undecided { rank, .. } => {
                    out.push_str(&format!("{} undecided rank={rank}\n", e.target));
                }
            }
        }
        out
    }
}

/// Attempts every prime `Q <= limit` outside the known terms.
pub fn sweep(limit: &Natural, known: &KnownTerms, policy: &PrimalityPolicy) -> Result<SweepReport> {
    if *limit < Natural::from(2u32) {
        return Err(Error::domain("sweep limit must be at least 2"));
    }
    let bound = target_u64(limit)?;
    let entries = primes_outside(bound, known.terms())
        .into_iter()
        .map(|q| Ok(SweepEntry { outcome: prove_omitted(&q, known, policy)?, target: q }))
        .collect::<Result<_>>()?;
    Ok(SweepReport { limit: limit.clone(), provenance: known.provenance().to_string(), entries })
}
