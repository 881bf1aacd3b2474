//! Mullin's two sequences and three variants.
//!
//! For the first and second kinds every step records the relation
//! `1 + t_n = q_1^k_1 ... q_r^k_r`, where `t_n` is the product of the first
//! `n` terms. `relations[n]` is the relation at step `n` and yields
//! `terms[n]`, so the seed term 2 comes from the trivial relation `1 + 1 = 2`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::factor::smallest_prime_factor_detail;
use crate::ntheory::{factorize, is_prime, is_prime_u64, FactorBudget, FactorMap, Natural, PrimalityPolicy};

/// Upper bound on `count` for [`pomerance`].
pub const POMERANCE_MAX_COUNT: usize = 30;
/// Divisor enumeration stops once the running product has more than
/// `2^DIVISOR_CAP_LOG2` divisors.
pub const DIVISOR_CAP_LOG2: u32 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    /// Smallest prime factor of `1 + p_1 ... p_n`.
    First,
    /// Largest prime factor of `1 + P_1 ... P_n`.
    Second,
    Sylvester,
    Greedy,
    Pomerance,
}

impl SequenceKind {
    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::First => "first",
            SequenceKind::Second => "second",
            SequenceKind::Sylvester => "sylvester",
            SequenceKind::Greedy => "greedy",
            SequenceKind::Pomerance => "pomerance",
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(SequenceKind::First),
            "second" => Ok(SequenceKind::Second),
            "sylvester" => Ok(SequenceKind::Sylvester),
            "greedy" => Ok(SequenceKind::Greedy),
            "pomerance" => Ok(SequenceKind::Pomerance),
            other => Err(Error::domain(format!("unknown sequence kind {other:?}"))),
        }
    }
}

/// One step `1 + t_n = value`. `factors` times `cofactor` equals `value`;
/// the cofactor is 1 unless the smallest-factor rule certified the term
/// before the rest of `value` could be split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationRecord {
    pub n: usize,
    pub value: Natural,
    pub factors: FactorMap,
    pub cofactor: Natural,
}

impl RelationRecord {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceState {
    kind: SequenceKind,
    terms: Vec<Natural>,
    product: Natural,
    relations: Vec<RelationRecord>,
}

impl SequenceState {
    /// State holding only the seed term 2.
    pub fn seeded(kind: SequenceKind) -> Result<Self> {
        if !matches!(kind, SequenceKind::First | SequenceKind::Second) {
            return Err(Error::domain(format!("{kind} is not a Mullin sequence")));
        }
        let two = Natural::from(2u32);
        let relation = RelationRecord {
            n: 0,
            value: two.clone(),
            factors: [(two.clone(), 1)].into_iter().collect(),
            cofactor: Natural::one(),
        };
        Ok(SequenceState { kind, terms: vec![two.clone()], product: two, relations: vec![relation] })
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn terms(&self) -> &[Natural] {
        &self.terms
    }

    /// Product of all terms so far.
    pub fn product(&self) -> &Natural {
        &self.product
    }

    pub fn relations(&self) -> &[RelationRecord] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Extends a first- or second-kind state by one term.
///
/// For the second kind the relation value must factor completely, otherwise
/// the step fails with [`Error::StepBudgetExceeded`]. For the first kind a
/// trial-division hit settles the term; the rest of the value is then
/// factored as far as the budget allows.
pub fn mullin_next(
    state: &mut SequenceState,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<(Natural, RelationRecord)> {
    let n = state.terms.len();
    let value = &state.product + 1u32;
    let step_error = |e: Error| match e {
        Error::BudgetExceeded { partial, cofactor } => Error::StepBudgetExceeded { step: n, partial, cofactor },
        other => other,
    };
    let (term, factors, cofactor) = match state.kind {
        SequenceKind::Second => {
            let factors = factorize(&value, budget, policy).map_err(step_error)?;
            let term = factors.largest().cloned().expect("value >= 3");
            (term, factors, Natural::one())
        }
        SequenceKind::First => {
            let found = smallest_prime_factor_detail(&value, budget, policy).map_err(step_error)?;
            let mut factors = found.partial;
            let mut cofactor = found.cofactor;
            if !cofactor.is_one() {
                match factorize(&cofactor, budget, policy) {
                    Ok(rest) => {
                        factors.merge(&rest);
                        cofactor = Natural::one();
                    }
                    Err(Error::BudgetExceeded { partial, cofactor: stuck }) => {
                        factors.merge(&partial);
                        cofactor = stuck;
                    }
                    Err(e) => return Err(e),
                }
            }
            (found.prime, factors, cofactor)
        }
        kind => return Err(Error::domain(format!("{kind} is not a Mullin sequence"))),
    };
    let record = RelationRecord { n, value, factors, cofactor };
    state.product *= &term;
    state.terms.push(term.clone());
    state.relations.push(record.clone());
    Ok((term, record))
}

/// The first `count` terms of a Mullin sequence.
pub fn generate(
    kind: SequenceKind,
    count: usize,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<SequenceState> {
    if count == 0 {
        return Err(Error::domain("count must be positive"));
    }
    let mut state = SequenceState::seeded(kind)?;
    while state.len() < count {
        mullin_next(&mut state, budget, policy)?;
    }
    Ok(state)
}

/// `s_0 = 2`, `s_{n+1} = 1 + s_n (s_n - 1)`.
pub fn sylvester(count: usize) -> Vec<Natural> {
    std::iter::successors(Some(Natural::from(2u32)), |s| Some(s * (s - 1u32) + 1u32))
        .take(count)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Squarefree {
    Yes,
    No,
    Unknown,
}

/// Squarefreeness of `s_0 .. s_{count-1}`, decided by complete factorization.
pub fn sylvester_squarefree_check(
    count: usize,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Vec<Squarefree> {
    sylvester(count)
        .iter()
        .map(|s| match factorize(s, budget, policy) {
            Ok(f) if f.is_squarefree() => Squarefree::Yes,
            Ok(_) => Squarefree::No,
            Err(_) => Squarefree::Unknown,
        })
        .collect()
}

/// `S_0 .. S_count`, where `S_{n+1}` adds every prime factor of
/// `1 + prod(S_n)` to `S_n`.
pub fn greedy_sets(
    count: usize,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<Vec<BTreeSet<Natural>>> {
    let mut sets = vec![BTreeSet::new()];
    let mut product = Natural::one();
    for step in 0..count {
        let value = &product + 1u32;
        let factors = factorize(&value, budget, policy).map_err(|e| match e {
            Error::BudgetExceeded { partial, cofactor } => Error::StepBudgetExceeded { step, partial, cofactor },
            other => other,
        })?;
        let mut next: BTreeSet<Natural> = sets[step].clone();
        for p in factors.primes() {
            if next.insert(p.clone()) {
                product *= p;
            }
        }
        sets.push(next);
    }
    Ok(sets)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityCheck {
    Holds,
    Fails,
    /// Some `s_i` with `i < n` is not known to be squarefree, or `S_n` could
    /// not be computed.
    NotApplicable,
}

/// For each `n <= count`, whether `prod(S_n) = s_0 ... s_{n-1}`.
pub fn greedy_product_identity_check(
    count: usize,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Vec<IdentityCheck> {
    let squarefree = sylvester_squarefree_check(count, budget, policy);
    let sylv = sylvester(count);
    let sets = match greedy_sets(count, budget, policy) {
        Ok(sets) => sets,
        Err(Error::StepBudgetExceeded { step, .. }) => greedy_sets(step, budget, policy).unwrap_or_default(),
        Err(_) => Vec::new(),
    };
    let mut out = Vec::with_capacity(count + 1);
    let mut sylv_product = Natural::one();
    for n in 0..=count {
        if n > 0 {
            sylv_product *= &sylv[n - 1];
        }
        let verdict = match sets.get(n) {
            Some(set) if squarefree[..n].iter().all(|&v| v == Squarefree::Yes) => {
                let set_product: Natural = set.iter().product();
                if set_product == sylv_product {
                    IdentityCheck::Holds
                } else {
                    IdentityCheck::Fails
                }
            }
            _ => IdentityCheck::NotApplicable,
        };
        out.push(verdict);
    }
    out
}

/// `r_1 = 2`; `r_{n+1}` is the least prime outside `{r_1..r_n}` dividing
/// `d + 1` for some divisor `d` of `r_1 ... r_n`.
///
/// A prime `p` qualifies iff `-1` is a subset product of the terms mod `p`,
/// so each step tracks the reachable subset-product residues instead of
/// listing divisors.
pub fn pomerance(count: usize) -> Result<Vec<Natural>> {
    if count == 0 || count > POMERANCE_MAX_COUNT {
        return Err(Error::domain(format!("count must lie in 1..={POMERANCE_MAX_COUNT}")));
    }
    let mut terms: Vec<u64> = vec![2];
    while terms.len() < count {
        if terms.len() > DIVISOR_CAP_LOG2 as usize {
            return Err(Error::DivisorOverflow { primes: terms.len(), cap_log2: DIVISOR_CAP_LOG2 });
        }
        let next = (3u64..)
            .filter(|&p| is_prime_u64(p) && !terms.contains(&p))
            .find(|&p| minus_one_is_subset_product(&terms, p))
            .expect("some prime divides 1 + the full product");
        terms.push(next);
    }
    Ok(terms.into_iter().map(Natural::from).collect())
}

fn minus_one_is_subset_product(terms: &[u64], p: u64) -> bool {
    let p = p as usize;
    let mut reachable = vec![false; p];
    reachable[1] = true;
    let mut members = vec![1usize];
    for &t in terms {
        let t = (t % p as u64) as usize;
        let snapshot = members.len();
        for i in 0..snapshot {
            let r = members[i] * t % p;
            if !reachable[r] {
                reachable[r] = true;
                members.push(r);
            }
        }
        if reachable[p - 1] {
            return true;
        }
    }
    reachable[p - 1]
}

/// Residues `t_n mod p` for `n = 1..=count`.
pub fn shanks_trajectory(
    p: &Natural,
    kind: SequenceKind,
    count: usize,
    budget: &FactorBudget,
    policy: &PrimalityPolicy,
) -> Result<Vec<Natural>> {
    if !is_prime(p, policy) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let state = generate(kind, count, budget, policy)?;
    let mut t = Natural::one();
    Ok(state
        .terms()
        .iter()
        .map(|term| {
            t = (&t * term) % p;
            t.clone()
        })
        .collect())
}

/// Residue of `value` modulo 4, used by the relation invariants.
pub fn mod4(value: &Natural) -> u32 {
    (value % 4u32).to_u32().expect("below 4")
}
