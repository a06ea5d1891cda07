use thiserror::Error;

use crate::diagnostics::Diagnostic;
use crate::iri::Iri;
use crate::model::PropertyKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IriError {
    #[error("empty identifier {0:?}")]
    Empty(String),
    #[error("identifier {0:?} contains whitespace")]
    Whitespace(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeError {
    #[error("nothing to merge")]
    Empty,
    #[error("property {iri} declared as {first:?} and as {second:?}")]
    KindConflict {
        iri: Iri,
        first: PropertyKind,
        second: PropertyKind,
    },
}

/// Parsing failed with at least one error diagnostic.
#[derive(Debug, Clone, Error)]
#[error("{} error(s) while parsing {name}", self.errors().count())]
pub struct ParseError {
    pub name: String,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseError {
    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("unknown pattern {0:?}")]
    UnknownPattern(String),
    #[error("unknown category {0:?}")]
    UnknownCategory(String),
    #[error("rule {id}: {reason}")]
    Malformed { id: String, reason: String },
    #[error("structured document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("rule {0} is not executable")]
    NonExecutable(String),
    #[error("iteration cap must be at least 1")]
    ZeroCap,
    #[error("rule {rule}: unsupported atom {atom}")]
    UnsupportedAtom { rule: String, atom: String },
    #[error("contradiction on ({individual}, {class}): asserted by {positive}, denied by {negative}")]
    Contradiction {
        individual: Iri,
        class: Iri,
        positive: String,
        negative: String,
    },
}
