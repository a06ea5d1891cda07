//! RDF/XML OWL subset → [`OntologyModel`].
//!
//! Recognized constructs: `owl:Class`, the four property element kinds,
//! `rdfs:subClassOf`, `rdfs:domain`, `rdfs:range`, `rdfs:subPropertyOf`,
//! `owl:equivalentClass`, `owl:sameAs` between classes, `owl:inverseOf`,
//! `owl:Restriction` with `owl:onProperty` + `owl:allValuesFrom`, and
//! `owl:intersectionOf` collections. Any other element nested in a class
//! description is read as a link from that class to another class.
//!
//! Prefixes are matched literally; `xmlns` declarations are ignored.

use crate::diagnostics::{Diagnostic, Location};
use crate::error::ParseError;
use crate::iri::Iri;
use crate::model::{Annotation, Axiom, OntologyModel, PropertyKind};

use super::xml::{parse_tree, Element};

/// A successfully parsed ontology and its warnings.
#[derive(Debug, Clone)]
pub struct ParsedOntology {
    pub model: OntologyModel,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn parse_ontology(input: &str, name: &str) -> Result<ParsedOntology, ParseError> {
    let root = parse_tree(input).map_err(|d| ParseError {
        name: name.to_string(),
        diagnostics: vec![d],
    })?;
    let mut parser = OwlParser {
        model: OntologyModel::new(name),
        diagnostics: Vec::new(),
    };
    if root.name != "rdf:RDF" {
        parser.warn(root.location, format!("root element <{}> is not rdf:RDF", root.name));
    }
    for child in &root.children {
        parser.top_level(child);
    }
    let OwlParser { model, diagnostics } = parser;
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(ParseError {
            name: name.to_string(),
            diagnostics,
        });
    }
    Ok(ParsedOntology { model, diagnostics })
}

fn property_kind(name: &str) -> Option<PropertyKind> {
    match name {
        "owl:DatatypeProperty" => Some(PropertyKind::Datatype),
        "owl:ObjectProperty" => Some(PropertyKind::Object),
        "owl:SymmetricProperty" => Some(PropertyKind::Symmetric),
        "owl:TransitiveProperty" => Some(PropertyKind::Transitive),
        _ => None,
    }
}

/// Kind named by an `rdf:type` resource, either `owl:X` or `...owl#X`.
fn typed_kind(resource: &str) -> Option<PropertyKind> {
    let local = resource
        .rsplit_once('#')
        .map(|(_, l)| l)
        .or_else(|| resource.strip_prefix("owl:"))?;
    property_kind(&format!("owl:{local}"))
}

fn is_annotation(name: &str) -> bool {
    matches!(
        name,
        "rdfs:label" | "rdfs:comment" | "rdfs:seeAlso" | "rdfs:isDefinedBy" | "owl:versionInfo"
    )
}

fn is_vocabulary(name: &str) -> bool {
    name.starts_with("owl:") || name.starts_with("rdf:") || name.starts_with("rdfs:")
}

enum Target {
    Class(Iri),
    Restriction,
}

struct OwlParser {
    model: OntologyModel,
    diagnostics: Vec<Diagnostic>,
}

impl OwlParser {
    fn warn(&mut self, at: Location, msg: impl Into<String>) {
        self.diagnostics.push(Diagnostic::warning(at, msg));
    }

    fn error(&mut self, at: Location, msg: impl Into<String>) {
        self.diagnostics.push(Diagnostic::error(at, msg));
    }

    fn iri(&mut self, at: Location, raw: &str) -> Option<Iri> {
        match Iri::new(raw) {
            Ok(iri) => Some(iri),
            Err(e) => {
                self.error(at, e.to_string());
                None
            }
        }
    }

    /// `rdf:ID` or `rdf:about` of a described element.
    fn subject(&mut self, el: &Element) -> Option<Iri> {
        match el.attr("rdf:ID").or_else(|| el.attr("rdf:about")) {
            Some(raw) => self.iri(el.location, raw),
            None => {
                self.error(
                    el.location,
                    format!("<{}> has neither rdf:ID nor rdf:about", el.name),
                );
                None
            }
        }
    }

    fn top_level(&mut self, el: &Element) {
        match el.name.as_str() {
            "owl:Class" => {
                self.class_description(el);
            }
            "owl:Restriction" => self.restriction(el),
            "owl:Ontology" => {}
            name if property_kind(name).is_some() => {
                self.property_description(el, property_kind(name).unwrap())
            }
            name if is_annotation(name) => {}
            name if is_vocabulary(name) => {
                self.warn(el.location, format!("unknown element <{name}> skipped"))
            }
            name => self.warn(
                el.location,
                format!("individual or unsupported element <{name}> skipped"),
            ),
        }
    }

    fn class_description(&mut self, el: &Element) -> Option<Iri> {
        let class = self.subject(el)?;
        self.model.declare_class(class.clone());
        for child in &el.children {
            match child.name.as_str() {
                "rdfs:subClassOf" => {
                    if let Some(Target::Class(sup)) = self.target(child) {
                        self.axiom(child.location, Axiom::SubClassOf {
                            sub: class.clone(),
                            sup,
                        });
                    }
                }
                "owl:equivalentClass" | "owl:sameAs" => match self.target(child) {
                    Some(Target::Class(other)) => {
                        self.axiom(child.location, Axiom::equivalent(class.clone(), other))
                    }
                    Some(Target::Restriction) => self.warn(
                        child.location,
                        "equivalence with a restriction is not supported",
                    ),
                    None => {}
                },
                "owl:intersectionOf" => self.intersection(&class, child),
                "rdf:type" => {}
                name if is_annotation(name) => {}
                name if is_vocabulary(name) => {
                    self.warn(child.location, format!("unknown element <{name}> skipped"))
                }
                name => {
                    let Some(property) = self.iri(child.location, name) else {
                        continue;
                    };
                    match self.target(child) {
                        Some(Target::Class(object)) => self.axiom(
                            child.location,
                            Axiom::ClassLink {
                                subject: class.clone(),
                                property,
                                object,
                            },
                        ),
                        Some(Target::Restriction) => self.warn(
                            child.location,
                            format!("restriction as value of <{name}> is not supported"),
                        ),
                        None => {}
                    }
                }
            }
        }
        Some(class)
    }

    /// Object of a property element: `rdf:resource` or one nested description.
    fn target(&mut self, el: &Element) -> Option<Target> {
        if let Some(raw) = el.attr("rdf:resource") {
            return self.iri(el.location, raw).map(Target::Class);
        }
        match el.children.as_slice() {
            [nested] if nested.name == "owl:Class" => {
                self.class_description(nested).map(Target::Class)
            }
            [nested] if nested.name == "owl:Restriction" => {
                self.restriction(nested);
                Some(Target::Restriction)
            }
            [] => {
                self.warn(el.location, format!("<{}> has no object; skipped", el.name));
                None
            }
            _ => {
                self.warn(
                    el.location,
                    format!("<{}> has an unsupported object; skipped", el.name),
                );
                None
            }
        }
    }

    fn intersection(&mut self, class: &Iri, el: &Element) {
        if el.attr("rdf:parseType") != Some("Collection") {
            self.warn(
                el.location,
                "owl:intersectionOf without rdf:parseType=\"Collection\" skipped",
            );
            return;
        }
        let mut parts = Vec::new();
        for member in &el.children {
            if member.name == "owl:Class" {
                if let Some(part) = self.class_description(member) {
                    if !parts.contains(&part) {
                        parts.push(part);
                    }
                }
            } else {
                self.warn(
                    member.location,
                    format!("intersection member <{}> skipped", member.name),
                );
            }
        }
        if parts.len() < 2 {
            self.warn(el.location, "intersection needs at least two classes; skipped");
            return;
        }
        self.axiom(el.location, Axiom::IntersectionOf {
            defined: class.clone(),
            parts,
        });
    }

    fn property_description(&mut self, el: &Element, kind: PropertyKind) {
        let Some(property) = self.subject(el) else {
            return;
        };
        self.declare(el.location, &property, kind);
        for child in &el.children {
            match child.name.as_str() {
                "rdfs:domain" => {
                    if let Some(Target::Class(domain)) = self.target(child) {
                        if let Annotation::Kept(first) = self.model.set_domain(&property, domain.clone()) {
                            self.warn(
                                child.location,
                                format!("{property} already has domain {first}; ignoring {domain}"),
                            );
                        }
                    }
                }
                "rdfs:range" => {
                    if let Some(Target::Class(range)) = self.target(child) {
                        if let Annotation::Kept(first) = self.model.set_range(&property, range.clone()) {
                            self.warn(
                                child.location,
                                format!("{property} already has range {first}; ignoring {range}"),
                            );
                        }
                    }
                }
                "rdfs:subPropertyOf" => {
                    if let Some(sup) = self.property_ref(child) {
                        self.axiom(child.location, Axiom::SubPropertyOf {
                            sub: property.clone(),
                            sup,
                        });
                    }
                }
                "owl:inverseOf" => {
                    if let Some(inverse) = self.property_ref(child) {
                        self.axiom(child.location, Axiom::InverseOf {
                            property: property.clone(),
                            inverse,
                        });
                    }
                }
                "rdf:type" => match child.attr("rdf:resource").map(typed_kind) {
                    Some(Some(k)) => self.declare(child.location, &property, k),
                    _ => self.warn(child.location, format!("unsupported rdf:type on {property}")),
                },
                name if is_annotation(name) => {}
                name => self.warn(child.location, format!("unknown element <{name}> skipped")),
            }
        }
    }

    fn property_ref(&mut self, el: &Element) -> Option<Iri> {
        if let Some(raw) = el.attr("rdf:resource") {
            return self.iri(el.location, raw);
        }
        match el.children.as_slice() {
            [nested] if property_kind(&nested.name).is_some() => {
                let iri = self.subject(nested)?;
                self.property_description(nested, property_kind(&nested.name).unwrap());
                Some(iri)
            }
            _ => {
                self.warn(el.location, format!("<{}> needs a property reference", el.name));
                None
            }
        }
    }

    fn declare(&mut self, at: Location, property: &Iri, kind: PropertyKind) {
        if let Err((old, new)) = self.model.declare_property(property.clone(), kind) {
            self.error(
                at,
                format!("property {property} declared as both {old:?} and {new:?}"),
            );
        }
    }

    fn restriction(&mut self, el: &Element) {
        let mut on_property = None;
        let mut filler = None;
        for child in &el.children {
            match child.name.as_str() {
                "owl:onProperty" => on_property = self.property_ref(child),
                "owl:allValuesFrom" => match self.target(child) {
                    Some(Target::Class(c)) => filler = Some(c),
                    Some(Target::Restriction) => {
                        self.warn(child.location, "nested restriction filler not supported")
                    }
                    None => {}
                },
                name if is_annotation(name) => {}
                name => self.warn(
                    child.location,
                    format!("unsupported restriction element <{name}> skipped"),
                ),
            }
        }
        match (on_property, filler) {
            (Some(on_property), Some(filler)) => self.axiom(
                el.location,
                Axiom::AllValuesFrom {
                    on_property,
                    filler,
                },
            ),
            _ => self.warn(
                el.location,
                "restriction without owl:onProperty and owl:allValuesFrom skipped",
            ),
        }
    }

    fn axiom(&mut self, at: Location, ax: Axiom) {
        if ax.is_reflexive() {
            self.warn(at, format!("reflexive axiom {ax} ignored"));
            return;
        }
        self.model.add_axiom(ax);
    }
}
