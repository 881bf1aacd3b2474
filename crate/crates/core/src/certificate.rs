//! JSON form of omission certificates.
//!
//! Every big integer is a canonical decimal string (no sign for naturals, no
//! leading zeros), so documents survive tools with 53-bit numbers and
//! serialize back to the same bytes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cvp_sieve::{Discriminant, OmissionCertificate};
use crate::error::{Error, Result};
use crate::gen_sieve::GenOmissionCertificate;
use crate::ntheory::Natural;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    #[serde(rename = "cvp-f2")]
    CvpF2,
    #[serde(rename = "gen-modp")]
    GenModp,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::CvpF2 => "cvp-f2",
            CertificateKind::GenModp => "gen-modp",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvpBody {
    pub support: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenBody {
    pub i: usize,
    pub js: Vec<usize>,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CertificateBody {
    Cvp(CvpBody),
    Gen(GenBody),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub schema_version: u32,
    pub kind: CertificateKind,
    pub target: String,
    pub provenance: String,
    pub known_terms: Vec<String>,
    pub candidates: Vec<String>,
    pub body: CertificateBody,
}

fn natural(s: &str, field: &str) -> Result<Natural> {
    let canonical = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return Err(Error::Validation(format!("{field}: {s:?} is not a canonical decimal natural")));
    }
    Ok(Natural::from_str(s).expect("digits only"))
}

fn integer(s: &str, field: &str) -> Result<BigInt> {
    match s.strip_prefix('-') {
        Some(rest) if rest != "0" => Ok(-BigInt::from(natural(rest, field)?)),
        Some(_) => Err(Error::Validation(format!("{field}: negative zero"))),
        None => Ok(BigInt::from(natural(s, field)?)),
    }
}

fn naturals(v: &[String], field: &str) -> Result<Vec<Natural>> {
    v.iter().map(|s| natural(s, field)).collect()
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

impl CertificateDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: CertificateDocument = serde_json::from_str(text)
            .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Validation(format!("unsupported schema version {}", doc.schema_version)));
        }
        match (&doc.kind, &doc.body) {
            (CertificateKind::CvpF2, CertificateBody::Cvp(_)) | (CertificateKind::GenModp, CertificateBody::Gen(_)) => {}
            _ => return Err(Error::Validation(format!("body does not match kind {}", doc.kind))),
        }
        Ok(doc)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn to_cvp(&self) -> Result<OmissionCertificate> {
        let CertificateBody::Cvp(body) = &self.body else {
            return Err(Error::Validation(format!("expected a cvp-f2 document, found {}", self.kind)));
        };
        Ok(OmissionCertificate {
            target: natural(&self.target, "target")?,
            provenance: self.provenance.clone(),
            known_terms: naturals(&self.known_terms, "known_terms")?,
            candidates: naturals(&self.candidates, "candidates")?,
            discriminant: Discriminant {
                support: naturals(&body.support, "support")?,
                value: integer(&body.value, "value")?,
            },
        })
    }

    pub fn to_gen(&self) -> Result<GenOmissionCertificate> {
        let CertificateBody::Gen(body) = &self.body else {
            return Err(Error::Validation(format!("expected a gen-modp document, found {}", self.kind)));
        };
        let coefficients = body
            .coefficients
            .iter()
            .map(|c| {
                let n = natural(c, "coefficients")?;
                u64::try_from(&n).map_err(|_| Error::Validation(format!("coefficient {n} exceeds 64 bits")))
            })
            .collect::<Result<_>>()?;
        Ok(GenOmissionCertificate {
            target: natural(&self.target, "target")?,
            i: body.i,
            js: body.js.clone(),
            coefficients,
            candidates: naturals(&self.candidates, "candidates")?,
            provenance: self.provenance.clone(),
            known_terms: naturals(&self.known_terms, "known_terms")?,
        })
    }
}

impl From<&OmissionCertificate> for CertificateDocument {
    fn from(c: &OmissionCertificate) -> Self {
        CertificateDocument {
            schema_version: SCHEMA_VERSION,
            kind: CertificateKind::CvpF2,
            target: c.target.to_string(),
            provenance: c.provenance.clone(),
            known_terms: strings(&c.known_terms),
            candidates: strings(&c.candidates),
            body: CertificateBody::Cvp(CvpBody {
                support: strings(&c.discriminant.support),
                value: c.discriminant.value.to_string(),
            }),
        }
    }
}

impl From<&GenOmissionCertificate> for CertificateDocument {
    fn from(c: &GenOmissionCertificate) -> Self {
        CertificateDocument {
            schema_version: SCHEMA_VERSION,
            kind: CertificateKind::GenModp,
            target: c.target.to_string(),
            provenance: c.provenance.clone(),
            known_terms: strings(&c.known_terms),
            candidates: strings(&c.candidates),
            body: CertificateBody::Gen(GenBody {
                i: c.i,
                js: c.js.clone(),
                coefficients: strings(&c.coefficients),
            }),
        }
    }
}
