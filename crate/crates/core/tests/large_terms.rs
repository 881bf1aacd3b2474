//! Terms 11 and 12 of the second sequence, checked against the shipped
//! factorizations of `1 + P_1 ... P_n`.

use std::path::PathBuf;

use mullin_core::ntheory::{is_prime, Natural, PrimalityPolicy};
use mullin_core::terms::{parse_terms, KnownTerms};
use num_traits::One;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn shipped_factorizations_certify_terms_11_and_12() {
    let policy = PrimalityPolicy::default();
    let terms = parse_terms(&data("b000946.txt"), None, &policy).unwrap();
    assert_eq!(terms.len(), 12);
    assert_eq!(terms.prefix(10).terms(), KnownTerms::table1().terms());

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(data("relations_large.json")).unwrap()).unwrap();
    let relations = doc["relations"].as_array().unwrap();
    assert_eq!(relations.len(), 2);
    for rel in relations {
        let n = rel["n"].as_u64().unwrap() as usize;
        let factors: Vec<Natural> =
            rel["factors"].as_array().unwrap().iter().map(|f| f.as_str().unwrap().parse().unwrap()).collect();
        let value: Natural = terms.terms()[..n].iter().product::<Natural>() + Natural::one();
        assert_eq!(factors.iter().product::<Natural>(), value, "n = {n}");
        assert!(factors.iter().all(|p| is_prime(p, &policy)), "n = {n}");
        assert!(factors.windows(2).all(|w| w[0] < w[1]), "n = {n}");
        assert_eq!(factors.last(), terms.term(n + 1), "n = {n}");
    }
}
