//! Rule extraction: one scan per pattern over an [`OntologyModel`].
//!
//! Every pattern is a pure function of the model's declarations and axiom
//! set. Results are deduplicated by rule id and sorted by id, so the output
//! never depends on the order axioms were read in.

use std::collections::{BTreeMap, BTreeSet};

use crate::iri::Iri;
use crate::model::{Axiom, OntologyModel, PropertyDecl, PropertyKind};
use crate::rule::{Atom, Pattern, Provenance, Rule, Term, Var};

const X: Term = Term::Var(Var::X);
const Y: Term = Term::Var(Var::Y);
const Z: Term = Term::Var(Var::Z);

fn class(iri: &Iri) -> Term {
    Term::Class(iri.clone())
}

/// Rules and warnings produced by one pattern.
#[derive(Debug, Clone, Default)]
pub struct PatternMatches {
    pub rules: Vec<Rule>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct ExtractionReport {
    pub rules: Vec<Rule>,
    pub counts: BTreeMap<Pattern, usize>,
    pub warnings: Vec<String>,
}

impl ExtractionReport {
    pub fn count(&self, pattern: Pattern) -> usize {
        self.counts.get(&pattern).copied().unwrap_or(0)
    }
}

struct Scan<'m> {
    model: &'m OntologyModel,
    rules: Vec<Rule>,
    warnings: Vec<String>,
}

/// Collects trigger descriptions and their sources for one rule.
struct Trigger<'m> {
    model: &'m OntologyModel,
    prov: Provenance,
}

impl<'m> Trigger<'m> {
    fn new(model: &'m OntologyModel, paper_form: String) -> Self {
        Trigger {
            model,
            prov: Provenance {
                paper_form,
                ..Default::default()
            },
        }
    }

    fn axiom(mut self, ax: &Axiom) -> Self {
        self.prov.trigger_axioms.insert(ax.to_string());
        self.prov
            .sources
            .extend(self.model.axiom_sources(ax).cloned());
        self
    }

    fn property(mut self, decl: &PropertyDecl, what: &[&str]) -> Self {
        for w in what {
            let text = match *w {
                "domain" => decl.domain.as_ref().map(|d| format!("Domain({}, {d})", decl.iri)),
                "range" => decl.range.as_ref().map(|r| format!("Range({}, {r})", decl.iri)),
                _ => Some(format!("{}({})", &decl.kind.element_name()[4..], decl.iri)),
            };
            self.prov.trigger_axioms.extend(text);
        }
        self.prov
            .sources
            .extend(self.model.property_sources(&decl.iri).cloned());
        self
    }
}

impl<'m> Scan<'m> {
    fn new(model: &'m OntologyModel) -> Self {
        Scan {
            model,
            rules: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn emit(&mut self, pattern: Pattern, antecedent: Vec<Atom>, consequent: Vec<Atom>, trigger: Trigger<'_>) {
        let rule = Rule::new(pattern, antecedent, consequent, trigger.prov)
            .expect("pattern templates are well formed");
        self.rules.push(rule);
    }

    fn subclass_axioms(&self) -> impl Iterator<Item = (&'m Axiom, &'m Iri, &'m Iri)> {
        self.model.axioms().iter().filter_map(|ax| match ax {
            Axiom::SubClassOf { sub, sup } => Some((ax, sub, sup)),
            _ => None,
        })
    }

    /// Object-like properties with both domain and range.
    fn annotated_object_properties(&self) -> impl Iterator<Item = (&'m PropertyDecl, &'m Iri, &'m Iri)> {
        self.model.properties().filter_map(|p| match (&p.domain, &p.range) {
            (Some(d), Some(r)) if p.kind.is_object_like() => Some((p, d, r)),
            _ => None,
        })
    }

    fn finish(self) -> PatternMatches {
        let mut warnings = self.warnings;
        warnings.sort();
        warnings.dedup();
        PatternMatches {
            rules: canonical(self.rules),
            warnings,
        }
    }
}

/// Deduplicates by id, merging provenance, and sorts by id.
fn canonical(rules: Vec<Rule>) -> Vec<Rule> {
    let mut by_id: BTreeMap<String, Rule> = BTreeMap::new();
    for rule in rules {
        match by_id.get_mut(rule.id()) {
            Some(existing) => existing.provenance_mut().absorb(rule.provenance()),
            None => {
                by_id.insert(rule.id().to_string(), rule);
            }
        }
    }
    by_id.into_values().collect()
}

fn class_feature(s: &mut Scan<'_>) {
    let mut by_class: BTreeMap<&Iri, Vec<&PropertyDecl>> = BTreeMap::new();
    for p in s.model.properties() {
        if let (PropertyKind::Datatype, Some(d)) = (p.kind, &p.domain) {
            by_class.entry(d).or_default().push(p);
        }
    }
    for (c, mut props) in by_class {
        props.sort_by(|a, b| a.iri.cmp(&b.iri));
        let names: Vec<&str> = props.iter().map(|p| p.iri.as_str()).collect();
        let mut t = Trigger::new(s.model, format!("IF {c} THEN {}", names.join(" and ")));
        for p in &props {
            t = t.property(p, &["kind", "domain"]);
        }
        let consequent = props
            .iter()
            .map(|p| Atom::HasFeature {
                subject: X,
                feature: p.iri.clone(),
            })
            .collect();
        s.emit(Pattern::ClassFeature, vec![Atom::isa(X, c)], consequent, t);
    }
}

fn equivalence_inheritance(s: &mut Scan<'_>) {
    for eq in s.model.axioms() {
        let Axiom::EquivalentClass { a, b } = eq else {
            continue;
        };
        for (this, other) in [(a, b), (b, a)] {
            let supers: Vec<_> = s.subclass_axioms().filter(|(_, sub, _)| *sub == other).collect();
            for (sub_ax, _, sup) in supers {
                if sup == this {
                    continue;
                }
                let t = Trigger::new(
                    s.model,
                    format!("IF {other} equivalent {this} THEN (\"part of\" {sup}) \u{2208} {this}"),
                )
                .axiom(eq)
                .axiom(sub_ax);
                s.emit(
                    Pattern::EquivalenceInheritance,
                    vec![
                        Atom::SchemaEquivalent { a: class(this), b: class(other) },
                        Atom::SchemaSubClassOf { sub: class(other), sup: class(sup) },
                    ],
                    vec![Atom::SchemaSubClassOf { sub: class(this), sup: class(sup) }],
                    t,
                );
            }
        }
    }
}

fn domain_range_identification(s: &mut Scan<'_>) {
    let props: Vec<_> = s.annotated_object_properties().collect();
    for (p, d, r) in props {
        let t = Trigger::new(s.model, format!("IF ({} {r}) THEN {d}", p.iri))
            .property(p, &["kind", "domain", "range"]);
        s.emit(
            Pattern::DomainRangeIdentification,
            vec![Atom::link(X, &p.iri, Y), Atom::isa(Y, r)],
            vec![Atom::isa(X, d)],
            t,
        );
    }
}

fn subclass_transitivity(s: &mut Scan<'_>) {
    let edges: Vec<_> = s.subclass_axioms().collect();
    for &(ab, a, b) in &edges {
        for &(bc, b2, c) in &edges {
            if b2 != b || a == c {
                continue;
            }
            let t = Trigger::new(
                s.model,
                format!("IF ({a} \"part of\" {b}) and ({b} \"part of\" {c}) THEN ({a} \"part of\" {c})"),
            )
            .axiom(ab)
            .axiom(bc);
            s.emit(
                Pattern::SubclassTransitivity,
                vec![
                    Atom::SchemaSubClassOf { sub: class(a), sup: class(b) },
                    Atom::SchemaSubClassOf { sub: class(b), sup: class(c) },
                ],
                vec![Atom::SchemaSubClassOf { sub: class(a), sup: class(c) }],
                t,
            );
        }
    }
}

fn relation_propagation(s: &mut Scan<'_>) {
    let props: Vec<_> = s.annotated_object_properties().collect();
    let edges: Vec<_> = s.subclass_axioms().collect();
    for (p, d, r) in props {
        for &(ax, sub, w) in &edges {
            if sub != r {
                continue;
            }
            let t = Trigger::new(
                s.model,
                format!("IF ({d} \"{p}\" {r}) and ({r} \"part of\" {w}) THEN ({d} \"{p}\" {w})", p = p.iri),
            )
            .property(p, &["kind", "domain", "range"])
            .axiom(ax);
            s.emit(
                Pattern::RelationPropagation,
                vec![
                    Atom::link(X, &p.iri, Y),
                    Atom::isa(Y, r),
                    Atom::SchemaSubClassOf { sub: class(r), sup: class(w) },
                ],
                vec![Atom::link(X, &p.iri, class(w))],
                t,
            );
        }
    }
}

fn subproperty_lift(s: &mut Scan<'_>) {
    for ax in s.model.axioms() {
        if let Axiom::SubPropertyOf { sub, sup } = ax {
            let t = Trigger::new(s.model, format!("IF {sub} and \"subproperty of\" THEN {sup}")).axiom(ax);
            s.emit(
                Pattern::SubpropertyLift,
                vec![Atom::link(X, sub, Y)],
                vec![Atom::link(X, sup, Y)],
                t,
            );
        }
    }
}

fn symmetric(s: &mut Scan<'_>) {
    let props: Vec<_> = s
        .model
        .properties()
        .filter(|p| p.kind == PropertyKind::Symmetric)
        .collect();
    for p in props {
        let (Some(d), Some(r)) = (&p.domain, &p.range) else {
            s.warnings.push(format!(
                "symmetric property {} needs both domain and range; no rules generated",
                p.iri
            ));
            continue;
        };
        for (from, to) in [(d, r), (r, d)] {
            let t = Trigger::new(s.model, format!("IF {from} THEN ({} {to})", p.iri))
                .property(p, &["kind", "domain", "range"]);
            s.emit(
                Pattern::Symmetric,
                vec![Atom::isa(X, from)],
                vec![Atom::link(X, &p.iri, class(to))],
                t,
            );
        }
    }
}

fn transitive(s: &mut Scan<'_>) {
    let props: Vec<_> = s
        .model
        .properties()
        .filter(|p| p.kind == PropertyKind::Transitive)
        .collect();
    for p in props {
        let t = &p.iri;
        let trig = Trigger::new(
            s.model,
            format!("IF (?x \"{t}\" ?y) and (?y \"{t}\" ?z) THEN (?x \"{t}\" ?z)"),
        )
        .property(p, &["kind"]);
        s.emit(
            Pattern::TransitiveProperty,
            vec![Atom::link(X, t, Y), Atom::link(Y, t, Z)],
            vec![Atom::link(X, t, Z)],
            trig,
        );
        let links: Vec<(&Axiom, &Iri, &Iri)> = s
            .model
            .axioms()
            .iter()
            .filter_map(|ax| match ax {
                Axiom::ClassLink { subject, property, object } if property == t && subject != object => {
                    Some((ax, subject, object))
                }
                _ => None,
            })
            .collect();
        for &(ab, a, b) in &links {
            for &(bc, b2, c) in &links {
                if b2 != b || a == c {
                    continue;
                }
                let trig = Trigger::new(
                    s.model,
                    format!("IF ({a} \"{t}\" {b}) and ({b} \"{t}\" {c}) THEN ({a} \"{t}\" {c})"),
                )
                .property(p, &["kind"])
                .axiom(ab)
                .axiom(bc);
                s.emit(
                    Pattern::TransitiveProperty,
                    vec![
                        Atom::link(class(a), t, class(b)),
                        Atom::link(class(b), t, class(c)),
                    ],
                    vec![Atom::link(class(a), t, class(c))],
                    trig,
                );
            }
        }
    }
}

fn sole_partof(s: &mut Scan<'_>) {
    let mut parts: BTreeMap<&Iri, Vec<(&Axiom, &Iri)>> = BTreeMap::new();
    for (ax, sub, sup) in s.subclass_axioms() {
        parts.entry(sup).or_default().push((ax, sub));
    }
    for (whole, subs) in parts {
        let [(ax, part)] = subs.as_slice() else {
            continue;
        };
        let t = Trigger::new(
            s.model,
            format!("IF {whole} and only one \"part of\" THEN (more \"part of\" \u{2208} {whole})"),
        )
        .axiom(ax);
        s.emit(
            Pattern::SolePartOf,
            vec![Atom::SolePart { part: class(part), whole: class(whole) }],
            vec![Atom::MorePartsExpected { whole: class(whole) }],
            t,
        );
    }
}

fn cooccurrence(s: &mut Scan<'_>) {
    let props: Vec<_> = s.annotated_object_properties().collect();
    for (p, d, r) in props {
        let t = Trigger::new(s.model, format!("IF {d} and {r} THEN {}", p.iri))
            .property(p, &["kind", "domain", "range"]);
        s.emit(
            Pattern::Cooccurrence,
            vec![Atom::isa(X, d), Atom::isa(Y, r)],
            vec![Atom::link(X, &p.iri, Y)],
            t,
        );
    }
}

fn all_values_from(s: &mut Scan<'_>) {
    for ax in s.model.axioms() {
        if let Axiom::AllValuesFrom { on_property, filler } = ax {
            let t = Trigger::new(s.model, format!("IF not {filler} THEN not {on_property}")).axiom(ax);
            s.emit(
                Pattern::AllValuesFrom,
                vec![Atom::negate(Atom::isa(Y, filler))],
                vec![Atom::negate(Atom::link(X, on_property, Y))],
                t,
            );
        }
    }
}

fn intersection(s: &mut Scan<'_>) {
    for ax in s.model.axioms() {
        if let Axiom::IntersectionOf { defined, parts } = ax {
            let names: Vec<&str> = parts.iter().map(Iri::as_str).collect();
            let t = Trigger::new(s.model, format!("IF {defined} THEN {}", names.join(" and "))).axiom(ax);
            s.emit(
                Pattern::IntersectionDecomposition,
                vec![Atom::isa(X, defined)],
                parts.iter().map(|p| Atom::isa(X, p)).collect(),
                t,
            );
        }
    }
}

fn inverse(s: &mut Scan<'_>) {
    for ax in s.model.axioms() {
        let Axiom::InverseOf { property, inverse } = ax else {
            continue;
        };
        let decl = s.model.property(property);
        let Some((decl, d, r)) = decl.and_then(|p| Some((p, p.domain.as_ref()?, p.range.as_ref()?))) else {
            s.warnings.push(format!(
                "inverse pair {property}/{inverse} needs domain and range on {property}; no rules generated"
            ));
            continue;
        };
        for (p, from, to) in [(property, d, r), (inverse, r, d)] {
            let t = Trigger::new(s.model, format!("IF {from} THEN ({p} {to})"))
                .axiom(ax)
                .property(decl, &["domain", "range"]);
            s.emit(
                Pattern::Inverse,
                vec![Atom::isa(X, from)],
                vec![Atom::link(X, p, class(to))],
                t,
            );
        }
    }
}

/// All rules licensed by one pattern.
pub fn extract(model: &OntologyModel, pattern: Pattern) -> PatternMatches {
    let mut scan = Scan::new(model);
    match pattern {
        Pattern::ClassFeature => class_feature(&mut scan),
        Pattern::EquivalenceInheritance => equivalence_inheritance(&mut scan),
        Pattern::DomainRangeIdentification => domain_range_identification(&mut scan),
        Pattern::SubclassTransitivity => subclass_transitivity(&mut scan),
        Pattern::RelationPropagation => relation_propagation(&mut scan),
        Pattern::SubpropertyLift => subproperty_lift(&mut scan),
        Pattern::Symmetric => symmetric(&mut scan),
        Pattern::TransitiveProperty => transitive(&mut scan),
        Pattern::SolePartOf => sole_partof(&mut scan),
        Pattern::Cooccurrence => cooccurrence(&mut scan),
        Pattern::AllValuesFrom => all_values_from(&mut scan),
        Pattern::IntersectionDecomposition => intersection(&mut scan),
        Pattern::Inverse => inverse(&mut scan),
    }
    scan.finish()
}

pub fn extract_class_feature(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::ClassFeature).rules
}

pub fn extract_equivalence_inheritance(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::EquivalenceInheritance).rules
}

pub fn extract_domain_range_identification(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::DomainRangeIdentification).rules
}

pub fn extract_subclass_transitivity(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::SubclassTransitivity).rules
}

pub fn extract_relation_propagation(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::RelationPropagation).rules
}

pub fn extract_subproperty_lift(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::SubpropertyLift).rules
}

pub fn extract_symmetric(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::Symmetric).rules
}

pub fn extract_transitive(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::TransitiveProperty).rules
}

pub fn extract_sole_partof(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::SolePartOf).rules
}

pub fn extract_cooccurrence(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::Cooccurrence).rules
}

pub fn extract_allvaluesfrom(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::AllValuesFrom).rules
}

pub fn extract_intersection(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::IntersectionDecomposition).rules
}

pub fn extract_inverse(model: &OntologyModel) -> Vec<Rule> {
    extract(model, Pattern::Inverse).rules
}

/// Runs every pattern and merges the results.
pub fn extract_all(model: &OntologyModel) -> ExtractionReport {
    let mut rules = Vec::new();
    let mut warnings = BTreeSet::new();
    for pattern in Pattern::ALL {
        let m = extract(model, pattern);
        rules.extend(m.rules);
        warnings.extend(m.warnings);
    }
    let rules = canonical(rules);
    let mut counts = BTreeMap::new();
    for r in &rules {
        *counts.entry(r.pattern()).or_insert(0) += 1;
    }
    ExtractionReport {
        rules,
        counts,
        warnings: warnings.into_iter().collect(),
    }
}
