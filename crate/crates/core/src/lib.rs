//! Rule extraction from OWL ontologies.
//!
//! Ontology documents in an RDF/XML subset are parsed into an
//! [`OntologyModel`], scanned by fixed extraction patterns into [`Rule`]s,
//! classified, and optionally executed over instance data by a forward
//! chainer.

pub mod diagnostics;
pub mod engine;
pub mod error;
pub mod extract;
pub mod iri;
pub mod model;
pub mod parser;
pub mod rule;
pub mod structured;

pub use diagnostics::{Diagnostic, Location, Severity};
pub use engine::{analytic_cap, run_fixpoint, schema_closure, Fact, FactBase, InferenceResult, LinkObject};
pub use error::{EngineError, IriError, MergeError, ParseError, RuleError};
pub use extract::{extract, extract_all, ExtractionReport, PatternMatches};
pub use iri::Iri;
pub use model::{merge, Annotation, Axiom, Merged, OntologyModel, PropertyDecl, PropertyKind};
pub use parser::{parse_fact_base, parse_ontology, print_fact_base, to_rdf_xml, ParsedFacts, ParsedOntology};
pub use rule::{classify, render_text, Atom, Pattern, Provenance, Rule, RuleCategory, Term, Var};
pub use structured::{parse_structured, render_structured, StructuredRules};
