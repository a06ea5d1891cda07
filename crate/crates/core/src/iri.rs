//! Identifiers for classes, properties, individuals and datatype tokens.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::IriError;

/// A normalized identifier.
///
/// Local references such as `#Car` are stored as `Car`; absolute IRIs and
/// prefixed tokens like `xs:string` are kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl Iri {
    pub fn new(raw: &str) -> Result<Self, IriError> {
        let value = normalize(raw);
        if value.is_empty() {
            return Err(IriError::Empty(raw.to_string()));
        }
        if value.chars().any(char::is_whitespace) {
            return Err(IriError::Whitespace(raw.to_string()));
        }
        Ok(Iri(value.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Strips every leading `#`, which makes the operation idempotent.
pub fn normalize(raw: &str) -> &str {
    raw.trim_start_matches('#')
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Iri {
    type Error = IriError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(&value)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> Self {
        iri.0
    }
}

impl std::str::FromStr for Iri {
    type Err = IriError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Iri::new(s)
    }
}
