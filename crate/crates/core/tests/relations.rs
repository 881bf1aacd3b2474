//! The character and discrete-log constraints checked against real relations
//! `1 + P_1 ... P_n = prod q^k` of the second sequence.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use mullin_core::cvp_sieve::{prime_discriminant, prove_omitted, sweep, CvpOutcome};
use mullin_core::gen_sieve::{build_b, build_v, eligible_j};
use mullin_core::ntheory::{kronecker, FactorBudget, Natural, PrimalityPolicy};
use mullin_core::sequences::{generate, RelationRecord, SequenceKind};
use mullin_core::terms::KnownTerms;

fn relations() -> Vec<RelationRecord> {
    let state = generate(SequenceKind::Second, 10, &FactorBudget::default(), &PrimalityPolicy::default()).unwrap();
    state.relations()[1..].to_vec()
}

fn columns(rel: &RelationRecord) -> (Vec<Natural>, Vec<u64>) {
    rel.factors.iter().map(|(q, &k)| (q.clone(), u64::from(k))).unzip()
}

fn character_product(d: &BigInt, rel: &RelationRecord) -> i8 {
    rel.factors
        .iter()
        .map(|(q, &k)| kronecker(d, &BigInt::from(q.clone())).pow(k))
        .product()
}

#[test]
fn every_discriminant_character_is_trivial_on_relations() {
    let terms = KnownTerms::table1();
    for rel in relations() {
        assert!(rel.is_complete());
        assert_eq!(character_product(&BigInt::from(-4), &rel), -1, "n = {}", rel.n);
        let odd: Vec<BigInt> = terms.terms()[1..rel.n].iter().map(|p| prime_discriminant(p).unwrap()).collect();
        for mask in 0u32..1 << odd.len() {
            let d: BigInt = odd.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, d)| d.clone()).product();
            assert_eq!(character_product(&d, &rel), 1, "n = {} d = {d}", rel.n);
        }
    }
}

#[test]
fn log_congruences_hold_on_relations() {
    let terms = KnownTerms::table1();
    let budget = FactorBudget::default();
    let policy = PrimalityPolicy::default();
    let mut checked = 0;
    for rel in relations() {
        let (cols, k) = columns(&rel);
        for i in 1..=rel.n.min(3) {
            let pi = terms.term(i).unwrap().to_u64().unwrap();
            let dot = |v: &[u64]| v.iter().zip(&k).map(|(a, b)| (*a as u128 * *b as u128) % pi as u128).sum::<u128>() % pi as u128;
            let b = build_b(i, &cols, &terms, &budget, &policy).unwrap();
            assert_ne!(dot(&b), 0, "b_{i} at n = {}", rel.n);
            for j in eligible_j(i, &terms).unwrap().into_iter().filter(|&j| j <= rel.n) {
                let v = build_v(i, j, &cols, &terms, &budget, &policy).unwrap();
                assert_eq!(dot(&v), 0, "v_{i}{j} at n = {}", rel.n);
                checked += 1;
            }
        }
    }
    assert!(checked > 20, "only {checked} v-congruences exercised");
}

#[test]
fn certified_targets_never_appear_as_largest_factors() {
    let terms = KnownTerms::table1();
    let policy = PrimalityPolicy::default();
    let report = sweep(&Natural::from(200u32), &terms, &policy).unwrap();
    let omitted = report.omitted();
    assert!(!omitted.is_empty());
    for rel in relations() {
        let largest = rel.factors.largest().unwrap();
        assert!(!omitted.contains(&largest), "n = {}", rel.n);
    }
    for q in omitted {
        let CvpOutcome::Omitted(cert) = prove_omitted(q, &terms, &policy).unwrap() else { panic!() };
        assert!(mullin_core::cvp_sieve::verify_certificate(&cert, &terms, &policy).accepted());
    }
}
