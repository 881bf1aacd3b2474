//! Known prefixes of the second sequence and the files they are read from.
//!
//! Three text formats are accepted: one integer per line (`plain`), the OEIS
//! b-file convention of `index value` pairs with contiguous indices starting
//! at 1 (`bfile`), and a JSON document `{"provenance": ..., "terms": [...]}`
//! with decimal-string terms (`json`). Blank lines and lines starting with `#`
//! are ignored in the text formats.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ntheory::{is_prime, Natural, PrimalityPolicy};

/// The first ten terms of the largest-prime-factor sequence.
pub const TABLE1_SECOND: [u64; 10] = [
    2,
    3,
    7,
    43,
    139,
    50207,
    340999,
    2365347734339,
    4680225641471129,
    1368845206580129,
];

/// The first ten terms of the smallest-prime-factor sequence.
pub const TABLE1_FIRST: [u64; 10] = [2, 3, 7, 43, 13, 53, 5, 6221671, 38709183810571, 139];

/// Ordered list of distinct primes asserted to be a prefix of the second
/// sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownTerms {
    terms: Vec<Natural>,
    provenance: String,
}

impl KnownTerms {
    /// Validates that the list starts at 2 and holds distinct primes.
    pub fn new(terms: Vec<Natural>, provenance: impl Into<String>, policy: &PrimalityPolicy) -> Result<Self> {
        if terms.first() != Some(&Natural::from(2u32)) {
            return Err(Error::Validation("known terms must start with 2".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            if !is_prime(t, policy) {
                return Err(Error::Validation(format!("term {} ({t}) is not prime", i + 1)));
            }
            if terms[..i].contains(t) {
                return Err(Error::Validation(format!("term {} ({t}) repeats", i + 1)));
            }
        }
        Ok(KnownTerms { terms, provenance: provenance.into() })
    }

    pub fn table1() -> Self {
        KnownTerms {
            terms: TABLE1_SECOND.iter().map(|&t| Natural::from(t)).collect(),
            provenance: "table-1".into(),
        }
    }

    /// The first `len` terms, keeping the provenance tagged with the length.
    pub fn prefix(&self, len: usize) -> Self {
        let len = len.min(self.terms.len());
        KnownTerms {
            terms: self.terms[..len].to_vec(),
            provenance: format!("{}[..{len}]", self.provenance),
        }
    }

    pub fn terms(&self) -> &[Natural] {
        &self.terms
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term `P_i` for a 1-based index.
    pub fn term(&self, i: usize) -> Option<&Natural> {
        i.checked_sub(1).and_then(|k| self.terms.get(k))
    }

    pub fn contains(&self, p: &Natural) -> bool {
        self.terms.contains(p)
    }

    pub fn contains_u64(&self, p: u64) -> bool {
        self.terms.iter().any(|t| t.to_u64() == Some(p))
    }

    pub fn to_plain(&self) -> String {
        self.terms.iter().map(|t| format!("{t}\n")).collect()
    }

    pub fn to_bfile(&self) -> String {
        self.terms.iter().enumerate().map(|(i, t)| format!("{} {t}\n", i + 1)).collect()
    }

    pub fn to_json(&self) -> String {
        let doc = TermsJson {
            provenance: self.provenance.clone(),
            terms: self.terms.iter().map(|t| t.to_string()).collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("plain struct");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermsFormat {
    Plain,
    BFile,
    Json,
}

impl TermsFormat {
    /// Guesses the format from the content: a leading `{` means JSON, a first
    /// data line with two fields means b-file, anything else is plain.
    pub fn detect(text: &str) -> Self {
        let mut data = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        match data.next() {
            Some(l) if l.starts_with('{') => TermsFormat::Json,
            Some(l) if l.split_whitespace().count() == 2 => TermsFormat::BFile,
            _ => TermsFormat::Plain,
        }
    }
}

impl FromStr for TermsFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(TermsFormat::Plain),
            "bfile" => Ok(TermsFormat::BFile),
            "json" => Ok(TermsFormat::Json),
            other => Err(Error::domain(format!("unknown terms format {other:?}"))),
        }
    }
}

impl fmt::Display for TermsFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermsFormat::Plain => "plain",
            TermsFormat::BFile => "bfile",
            TermsFormat::Json => "json",
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermsJson {
    provenance: String,
    terms: Vec<String>,
}

fn parse_natural(s: &str, line: usize) -> Result<Natural> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse { line, message: format!("not a non-negative integer: {s:?}") });
    }
    Ok(Natural::parse_bytes(s.as_bytes(), 10).expect("digits only"))
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Content hash used in provenance strings.
pub fn content_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    hex::encode(&digest[..8])
}

/// Parses terms from text. JSON documents carry their own provenance;
/// the text formats use `default_provenance`.
pub fn parse_terms_str(
    text: &str,
    format: TermsFormat,
    default_provenance: &str,
    policy: &PrimalityPolicy,
) -> Result<KnownTerms> {
    let (terms, provenance) = match format {
        TermsFormat::Plain => {
            let mut terms = Vec::new();
            for (line, l) in data_lines(text) {
                terms.push(parse_natural(l, line)?);
            }
            (terms, default_provenance.to_string())
        }
        TermsFormat::BFile => {
            let mut terms = Vec::new();
            for (line, l) in data_lines(text) {
                let fields: Vec<&str> = l.split_whitespace().collect();
                let [index, value] = fields[..] else {
                    return Err(Error::Parse { line, message: "expected \"index value\"".into() });
                };
                let index = parse_natural(index, line)?;
                if index != Natural::from(terms.len() + 1) {
                    return Err(Error::Parse {
                        line,
                        message: format!("index {index} breaks the contiguous run from 1"),
                    });
                }
                terms.push(parse_natural(value, line)?);
            }
            (terms, default_provenance.to_string())
        }
        TermsFormat::Json => {
            let doc: TermsJson = serde_json::from_str(text).map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })?;
            let mut terms = Vec::new();
            for t in &doc.terms {
                terms.push(parse_natural(t, 0)?);
            }
            (terms, doc.provenance)
        }
    };
    KnownTerms::new(terms, provenance, policy)
}

/// Reads a terms file. The provenance of text formats is the file name plus
/// a content hash.
pub fn parse_terms(path: &Path, format: Option<TermsFormat>, policy: &PrimalityPolicy) -> Result<KnownTerms> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Parse { line: 0, message: "file is not UTF-8".into() })?;
    let format = format.unwrap_or_else(|| TermsFormat::detect(&text));
    let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    let provenance = format!("{name}@sha256:{}", content_hash(text.as_bytes()));
    parse_terms_str(&text, format, &provenance, policy)
}
