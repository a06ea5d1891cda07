//! Debug printer: writes a model back out in the RDF/XML subset the parser reads.

use std::fmt::Write;

use crate::iri::Iri;
use crate::model::{Axiom, OntologyModel};

fn reference(iri: &Iri) -> String {
    let raw = iri.as_str();
    let r = if raw.contains(':') {
        raw.to_string()
    } else {
        format!("#{raw}")
    };
    escape(&r)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

pub fn to_rdf_xml(model: &OntologyModel) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\"?>\n<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\" \
         xmlns:rdfs=\"http://www.w3.org/2000/01/rdf-schema#\" \
         xmlns:owl=\"http://www.w3.org/2002/07/owl#\">\n",
    );
    let mut axioms: Vec<&Axiom> = model.axioms().iter().collect();
    axioms.sort();

    for class in model.classes() {
        let mut body = String::new();
        for ax in &axioms {
            match ax {
                Axiom::SubClassOf { sub, sup } if sub == class => {
                    let _ = writeln!(body, "    <rdfs:subClassOf rdf:resource=\"{}\"/>", reference(sup));
                }
                Axiom::EquivalentClass { a, b } if a == class => {
                    let _ = writeln!(body, "    <owl:equivalentClass rdf:resource=\"{}\"/>", reference(b));
                }
                Axiom::IntersectionOf { defined, parts } if defined == class => {
                    body.push_str("    <owl:intersectionOf rdf:parseType=\"Collection\">\n");
                    for p in parts {
                        let _ = writeln!(body, "      <owl:Class rdf:about=\"{}\"/>", reference(p));
                    }
                    body.push_str("    </owl:intersectionOf>\n");
                }
                Axiom::ClassLink {
                    subject,
                    property,
                    object,
                } if subject == class => {
                    let _ = writeln!(body, "    <{} rdf:resource=\"{}\"/>", property, reference(object));
                }
                _ => {}
            }
        }
        if body.is_empty() {
            let _ = writeln!(out, "  <owl:Class rdf:about=\"{}\"/>", reference(class));
        } else {
            let _ = writeln!(out, "  <owl:Class rdf:about=\"{}\">", reference(class));
            out.push_str(&body);
            out.push_str("  </owl:Class>\n");
        }
    }

    for decl in model.properties().filter(|d| d.explicit) {
        let tag = decl.kind.element_name();
        let _ = writeln!(out, "  <{tag} rdf:about=\"{}\">", reference(&decl.iri));
        if let Some(d) = &decl.domain {
            let _ = writeln!(out, "    <rdfs:domain rdf:resource=\"{}\"/>", reference(d));
        }
        if let Some(r) = &decl.range {
            let _ = writeln!(out, "    <rdfs:range rdf:resource=\"{}\"/>", reference(r));
        }
        for ax in &axioms {
            match ax {
                Axiom::SubPropertyOf { sub, sup } if *sub == decl.iri => {
                    let _ = writeln!(out, "    <rdfs:subPropertyOf rdf:resource=\"{}\"/>", reference(sup));
                }
                Axiom::InverseOf { property, inverse } if *property == decl.iri => {
                    let _ = writeln!(out, "    <owl:inverseOf rdf:resource=\"{}\"/>", reference(inverse));
                }
                _ => {}
            }
        }
        let _ = writeln!(out, "  </{tag}>");
    }

    for ax in &axioms {
        if let Axiom::AllValuesFrom {
            on_property,
            filler,
        } = ax
        {
            let _ = writeln!(
                out,
                "  <owl:Restriction>\n    <owl:onProperty rdf:resource=\"{}\"/>\n    <owl:allValuesFrom rdf:resource=\"{}\"/>\n  </owl:Restriction>",
                reference(on_property),
                reference(filler)
            );
        }
    }
    out.push_str("</rdf:RDF>\n");
    out
}
