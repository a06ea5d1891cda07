//! Readers and writers for ontology documents and fact files.

mod facts;
mod owl;
mod printer;
mod xml;

pub use facts::{parse_fact_base, print_fact_base, ParsedFacts};
pub use owl::{parse_ontology, ParsedOntology};
pub use printer::to_rdf_xml;
