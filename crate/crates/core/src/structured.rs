//! Machine-readable rule listing.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::RuleError;
use crate::iri::Iri;
use crate::rule::{Atom, Pattern, Provenance, Rule, Term, Var};

const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    source: Vec<String>,
    rules: Vec<RuleDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDoc {
    id: String,
    pattern: String,
    category: String,
    executable: bool,
    #[serde(rename = "if")]
    antecedent: Vec<AtomDoc>,
    #[serde(rename = "then")]
    consequent: Vec<AtomDoc>,
    provenance: ProvenanceDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceDoc {
    source: Vec<String>,
    trigger_axioms: Vec<String>,
    paper_form: String,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum AtomDoc {
    Isa { subject: TermDoc, class: TermDoc },
    Link { subject: TermDoc, property: TermDoc, object: TermDoc },
    Feature { subject: TermDoc, feature: TermDoc },
    Not { atom: Box<AtomDoc> },
    Subclass { sub: TermDoc, sup: TermDoc },
    Equivalent { a: TermDoc, b: TermDoc },
    SolePart { part: TermDoc, whole: TermDoc },
    MoreParts { whole: TermDoc },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum TermDoc {
    Var(String),
    Class(Iri),
    Prop(Iri),
    Individual(Iri),
    Literal(String),
}

impl From<&Term> for TermDoc {
    fn from(t: &Term) -> Self {
        match t {
            Term::Var(v) => TermDoc::Var(v.name().to_string()),
            Term::Class(i) => TermDoc::Class(i.clone()),
            Term::Prop(i) => TermDoc::Prop(i.clone()),
            Term::Individual(i) => TermDoc::Individual(i.clone()),
            Term::Literal(s) => TermDoc::Literal(s.clone()),
        }
    }
}

impl TryFrom<TermDoc> for Term {
    type Error = RuleError;

    fn try_from(t: TermDoc) -> Result<Self, Self::Error> {
        Ok(match t {
            TermDoc::Var(v) => Term::Var(v.parse::<Var>()?),
            TermDoc::Class(i) => Term::Class(i),
            TermDoc::Prop(i) => Term::Prop(i),
            TermDoc::Individual(i) => Term::Individual(i),
            TermDoc::Literal(s) => Term::Literal(s),
        })
    }
}

impl From<&Atom> for AtomDoc {
    fn from(a: &Atom) -> Self {
        let t = TermDoc::from;
        match a {
            Atom::IsA { subject, class } => AtomDoc::Isa {
                subject: t(subject),
                class: t(class),
            },
            Atom::Link {
                subject,
                property,
                object,
            } => AtomDoc::Link {
                subject: t(subject),
                property: t(property),
                object: t(object),
            },
            Atom::HasFeature { subject, feature } => AtomDoc::Feature {
                subject: t(subject),
                feature: TermDoc::Class(feature.clone()),
            },
            Atom::Not(inner) => AtomDoc::Not {
                atom: Box::new(AtomDoc::from(&**inner)),
            },
            Atom::SchemaSubClassOf { sub, sup } => AtomDoc::Subclass {
                sub: t(sub),
                sup: t(sup),
            },
            Atom::SchemaEquivalent { a, b } => AtomDoc::Equivalent { a: t(a), b: t(b) },
            Atom::SolePart { part, whole } => AtomDoc::SolePart {
                part: t(part),
                whole: t(whole),
            },
            Atom::MorePartsExpected { whole } => AtomDoc::MoreParts { whole: t(whole) },
        }
    }
}

impl TryFrom<AtomDoc> for Atom {
    type Error = RuleError;

    fn try_from(a: AtomDoc) -> Result<Self, Self::Error> {
        let t = Term::try_from;
        Ok(match a {
            AtomDoc::Isa { subject, class } => Atom::IsA {
                subject: t(subject)?,
                class: t(class)?,
            },
            AtomDoc::Link {
                subject,
                property,
                object,
            } => Atom::Link {
                subject: t(subject)?,
                property: t(property)?,
                object: t(object)?,
            },
            AtomDoc::Feature { subject, feature } => {
                let feature = match feature {
                    TermDoc::Class(i) => i,
                    _ => return Err(RuleError::Document("feature must be a class term".into())),
                };
                Atom::HasFeature {
                    subject: t(subject)?,
                    feature,
                }
            }
            AtomDoc::Not { atom } => Atom::Not(Box::new(Atom::try_from(*atom)?)),
            AtomDoc::Subclass { sub, sup } => Atom::SchemaSubClassOf {
                sub: t(sub)?,
                sup: t(sup)?,
            },
            AtomDoc::Equivalent { a, b } => Atom::SchemaEquivalent { a: t(a)?, b: t(b)? },
            AtomDoc::SolePart { part, whole } => Atom::SolePart {
                part: t(part)?,
                whole: t(whole)?,
            },
            AtomDoc::MoreParts { whole } => Atom::MorePartsExpected { whole: t(whole)? },
        })
    }
}

/// Pretty JSON listing of `rules`; `sources` names the input files.
/// Output is independent of the order of both arguments.
pub fn render_structured(rules: &[Rule], sources: &[String]) -> String {
    let mut sorted: Vec<&Rule> = rules.iter().collect();
    sorted.sort_by(|a, b| a.id().cmp(b.id()));
    let source: BTreeSet<&String> = sources.iter().collect();
    let doc = Document {
        version: VERSION,
        source: source.into_iter().cloned().collect(),
        rules: sorted
            .into_iter()
            .map(|r| RuleDoc {
                id: r.id().to_string(),
                pattern: r.pattern().name().to_string(),
                category: r.category().name().to_string(),
                executable: r.executable(),
                antecedent: r.antecedent().iter().map(AtomDoc::from).collect(),
                consequent: r.consequent().iter().map(AtomDoc::from).collect(),
                provenance: ProvenanceDoc {
                    source: r.provenance().sources.iter().cloned().collect(),
                    trigger_axioms: r.provenance().trigger_axioms.iter().cloned().collect(),
                    paper_form: r.provenance().paper_form.clone(),
                },
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.push('\n');
    out
}

/// A parsed structured document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredRules {
    pub sources: Vec<String>,
    pub rules: Vec<Rule>,
}

/// Reads a document written by [`render_structured`]. Ids, categories and
/// executable flags are checked against the rule bodies.
pub fn parse_structured(input: &str) -> Result<StructuredRules, RuleError> {
    let doc: Document = serde_json::from_str(input).map_err(|e| RuleError::Document(e.to_string()))?;
    if doc.version != VERSION {
        return Err(RuleError::Document(format!("unsupported version {}", doc.version)));
    }
    let mut rules = Vec::with_capacity(doc.rules.len());
    for r in doc.rules {
        let pattern: Pattern = r.pattern.parse()?;
        let antecedent = r.antecedent.into_iter().map(Atom::try_from).collect::<Result<_, _>>()?;
        let consequent = r.consequent.into_iter().map(Atom::try_from).collect::<Result<_, _>>()?;
        let provenance = Provenance {
            sources: r.provenance.source.into_iter().collect(),
            trigger_axioms: r.provenance.trigger_axioms.into_iter().collect(),
            paper_form: r.provenance.paper_form,
        };
        let rule = Rule::new(pattern, antecedent, consequent, provenance)?;
        let mismatch = |what: &str| RuleError::Malformed {
            id: r.id.clone(),
            reason: format!("{what} does not match the rule body"),
        };
        if rule.id() != r.id {
            return Err(mismatch("id"));
        }
        if rule.category().name() != r.category {
            return Err(mismatch("category"));
        }
        if rule.executable() != r.executable {
            return Err(mismatch("executable flag"));
        }
        rules.push(rule);
    }
    Ok(StructuredRules {
        sources: doc.source,
        rules,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::extract_all;
    use crate::model::{Axiom, OntologyModel, PropertyKind};

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn sample() -> Vec<Rule> {
        let mut m = OntologyModel::new("s.owl");
        m.add_axiom(Axiom::SubClassOf { sub: iri("House"), sup: iri("City") });
        m.add_axiom(Axiom::IntersectionOf {
            defined: iri("Man"),
            parts: vec![iri("Male"), iri("Human")],
        });
        m.declare_property(iri("hasPass"), PropertyKind::Object).unwrap();
        m.add_axiom(Axiom::AllValuesFrom { on_property: iri("hasPass"), filler: iri("Citizen") });
        m.add_axiom(Axiom::ClassLink { subject: iri("Car"), property: iri("hasPart"), object: iri("Engine") });
        extract_all(&m).rules
    }

    #[test]
    fn round_trip() {
        let rules = sample();
        assert!(!rules.is_empty());
        let text = render_structured(&rules, &["s.owl".to_string()]);
        let back = parse_structured(&text).unwrap();
        assert_eq!(back.rules, rules);
        assert_eq!(back.sources, vec!["s.owl".to_string()]);
    }

    #[test]
    fn order_independent() {
        let rules = sample();
        let mut reversed = rules.clone();
        reversed.reverse();
        let a = render_structured(&rules, &["a".into(), "b".into()]);
        let b = render_structured(&reversed, &["b".into(), "a".into()]);
        assert_eq!(a, b);
    }

    #[test]
    fn top_level_key_order() {
        let text = render_structured(&sample(), &[]);
        let v = text.find("\"version\"").unwrap();
        let s = text.find("\"source\"").unwrap();
        let r = text.find("\"rules\"").unwrap();
        assert!(v < s && s < r);
        assert!(text.contains("\"kind\": \"isa\""));
        assert!(text.contains("{\n              \"var\": \"?x\"\n            }") || text.contains("\"var\": \"?x\""));
    }

    #[test]
    fn tampered_id_is_rejected() {
        let text = render_structured(&sample(), &[]);
        let first_id = parse_structured(&text).unwrap().rules[0].id().to_string();
        let bad = text.replacen(&first_id, "class-feature-0000000000000000", 1);
        assert!(parse_structured(&bad).is_err());
    }

    #[test]
    fn wrong_version_is_rejected() {
        let text = render_structured(&sample(), &[]).replacen("\"version\": 1", "\"version\": 2", 1);
        assert!(parse_structured(&text).is_err());
    }
}
