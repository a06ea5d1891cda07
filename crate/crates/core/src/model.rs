//! In-memory ontology: declared classes, properties and schema axioms.
//!
//! Identifiers referenced by an axiom but never declared are declared
//! implicitly (classes join the class set, properties become implicit object
//! properties) so that bare fragments stand on their own.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::MergeError;
use crate::iri::Iri;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PropertyKind {
    Datatype,
    Object,
    Symmetric,
    Transitive,
}

impl PropertyKind {
    /// Symmetric and transitive properties are object properties.
    pub fn is_object_like(self) -> bool {
        !matches!(self, PropertyKind::Datatype)
    }

    /// Refines two declarations of the same property into one kind.
    /// `Object` is refined by `Symmetric`/`Transitive`; anything else must match.
    pub fn refine(self, other: PropertyKind) -> Option<PropertyKind> {
        use PropertyKind::*;
        match (self, other) {
            (a, b) if a == b => Some(a),
            (Object, k @ (Symmetric | Transitive)) | (k @ (Symmetric | Transitive), Object) => Some(k),
            _ => None,
        }
    }

    pub fn element_name(self) -> &'static str {
        match self {
            PropertyKind::Datatype => "owl:DatatypeProperty",
            PropertyKind::Object => "owl:ObjectProperty",
            PropertyKind::Symmetric => "owl:SymmetricProperty",
            PropertyKind::Transitive => "owl:TransitiveProperty",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyDecl {
    pub iri: Iri,
    pub kind: PropertyKind,
    pub domain: Option<Iri>,
    /// Class for object-like kinds, opaque datatype token for `Datatype`.
    pub range: Option<Iri>,
    /// False when the property was only ever referenced, never declared.
    pub explicit: bool,
}

impl PropertyDecl {
    fn implicit(iri: Iri) -> Self {
        PropertyDecl {
            iri,
            kind: PropertyKind::Object,
            domain: None,
            range: None,
            explicit: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    SubClassOf { sub: Iri, sup: Iri },
    /// Stored with the lexicographically smaller class first.
    EquivalentClass { a: Iri, b: Iri },
    SubPropertyOf { sub: Iri, sup: Iri },
    InverseOf { property: Iri, inverse: Iri },
    AllValuesFrom { on_property: Iri, filler: Iri },
    IntersectionOf { defined: Iri, parts: Vec<Iri> },
    ClassLink { subject: Iri, property: Iri, object: Iri },
}

impl Axiom {
    pub fn equivalent(x: Iri, y: Iri) -> Axiom {
        if x <= y {
            Axiom::EquivalentClass { a: x, b: y }
        } else {
            Axiom::EquivalentClass { a: y, b: x }
        }
    }

    fn canonical(self) -> Axiom {
        match self {
            Axiom::EquivalentClass { a, b } => Axiom::equivalent(a, b),
            other => other,
        }
    }

    /// True for axioms that relate an identifier to itself. Class links are exempt.
    pub fn is_reflexive(&self) -> bool {
        match self {
            Axiom::SubClassOf { sub, sup } | Axiom::SubPropertyOf { sub, sup } => sub == sup,
            Axiom::EquivalentClass { a, b } => a == b,
            Axiom::InverseOf { property, inverse } => property == inverse,
            Axiom::AllValuesFrom { .. } | Axiom::ClassLink { .. } => false,
            Axiom::IntersectionOf { defined, parts } => parts.contains(defined),
        }
    }

    pub fn class_iris(&self) -> Vec<&Iri> {
        match self {
            Axiom::SubClassOf { sub, sup } => vec![sub, sup],
            Axiom::EquivalentClass { a, b } => vec![a, b],
            Axiom::SubPropertyOf { .. } | Axiom::InverseOf { .. } => vec![],
            Axiom::AllValuesFrom { filler, .. } => vec![filler],
            Axiom::IntersectionOf { defined, parts } => {
                std::iter::once(defined).chain(parts.iter()).collect()
            }
            Axiom::ClassLink { subject, object, .. } => vec![subject, object],
        }
    }

    pub fn property_iris(&self) -> Vec<&Iri> {
        match self {
            Axiom::SubPropertyOf { sub, sup } => vec![sub, sup],
            Axiom::InverseOf { property, inverse } => vec![property, inverse],
            Axiom::AllValuesFrom { on_property, .. } => vec![on_property],
            Axiom::ClassLink { property, .. } => vec![property],
            _ => vec![],
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf { sub, sup } => write!(f, "SubClassOf({sub}, {sup})"),
            Axiom::EquivalentClass { a, b } => write!(f, "EquivalentClass({a}, {b})"),
            Axiom::SubPropertyOf { sub, sup } => write!(f, "SubPropertyOf({sub}, {sup})"),
            Axiom::InverseOf { property, inverse } => write!(f, "InverseOf({property}, {inverse})"),
            Axiom::AllValuesFrom {
                on_property,
                filler,
            } => write!(f, "AllValuesFrom({on_property}, {filler})"),
            Axiom::IntersectionOf { defined, parts } => {
                write!(f, "IntersectionOf({defined}, [")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("])")
            }
            Axiom::ClassLink {
                subject,
                property,
                object,
            } => write!(f, "ClassLink({subject}, {property}, {object})"),
        }
    }
}

/// Result of recording a domain or range on a property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Annotation {
    Set,
    Unchanged,
    /// A different value was already stored and is kept.
    Kept(Iri),
}

#[derive(Debug, Clone, Default)]
pub struct OntologyModel {
    classes: BTreeSet<Iri>,
    properties: BTreeMap<Iri, PropertyDecl>,
    axioms: Vec<Axiom>,
    axiom_sources: BTreeMap<Axiom, BTreeSet<String>>,
    property_sources: BTreeMap<Iri, BTreeSet<String>>,
    source_names: Vec<String>,
}

impl OntologyModel {
    pub fn new(source_name: impl Into<String>) -> Self {
        OntologyModel {
            source_names: vec![source_name.into()],
            ..Default::default()
        }
    }

    pub fn classes(&self) -> &BTreeSet<Iri> {
        &self.classes
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertyDecl> {
        self.properties.values()
    }

    pub fn property(&self, iri: &Iri) -> Option<&PropertyDecl> {
        self.properties.get(iri)
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn source_names(&self) -> &[String] {
        &self.source_names
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.properties.is_empty() && self.axioms.is_empty()
    }

    pub fn contains_axiom(&self, ax: &Axiom) -> bool {
        self.axiom_sources.contains_key(ax)
    }

    pub fn axiom_sources(&self, ax: &Axiom) -> impl Iterator<Item = &String> {
        self.axiom_sources.get(ax).into_iter().flatten()
    }

    pub fn property_sources(&self, iri: &Iri) -> impl Iterator<Item = &String> {
        self.property_sources.get(iri).into_iter().flatten()
    }

    pub fn is_class(&self, iri: &Iri) -> bool {
        self.classes.contains(iri)
    }

    fn current_source(&self) -> Option<String> {
        self.source_names.last().cloned()
    }

    pub fn declare_class(&mut self, iri: Iri) -> bool {
        self.classes.insert(iri)
    }

    /// Declares a property explicitly. On a kind clash the stored declaration
    /// is left untouched and both kinds are returned.
    pub fn declare_property(
        &mut self,
        iri: Iri,
        kind: PropertyKind,
    ) -> Result<(), (PropertyKind, PropertyKind)> {
        let source = self.current_source();
        let decl = self
            .properties
            .entry(iri.clone())
            .or_insert_with(|| PropertyDecl::implicit(iri.clone()));
        if decl.explicit {
            decl.kind = decl.kind.refine(kind).ok_or((decl.kind, kind))?;
        } else {
            decl.kind = kind;
            decl.explicit = true;
        }
        if let Some(s) = source {
            self.property_sources.entry(iri).or_default().insert(s);
        }
        Ok(())
    }

    /// Makes sure `iri` names a property, declaring it implicitly if needed.
    pub fn reference_property(&mut self, iri: &Iri) {
        if !self.properties.contains_key(iri) {
            self.properties
                .insert(iri.clone(), PropertyDecl::implicit(iri.clone()));
        }
    }

    pub fn set_domain(&mut self, property: &Iri, domain: Iri) -> Annotation {
        self.reference_property(property);
        self.declare_class(domain.clone());
        let decl = self.properties.get_mut(property).expect("referenced above");
        annotate(&mut decl.domain, domain)
    }

    /// Range classes are declared for object-like properties only; datatype
    /// ranges stay opaque tokens.
    pub fn set_range(&mut self, property: &Iri, range: Iri) -> Annotation {
        self.reference_property(property);
        let decl = self.properties.get_mut(property).expect("referenced above");
        let object_like = decl.kind.is_object_like();
        let outcome = annotate(&mut decl.range, range.clone());
        if object_like && outcome == Annotation::Set {
            self.declare_class(range);
        }
        outcome
    }

    /// Inserts an axiom once, declaring every identifier it mentions.
    /// Returns false for duplicates and for reflexive axioms, which are dropped.
    pub fn add_axiom(&mut self, ax: Axiom) -> bool {
        let ax = ax.canonical();
        if ax.is_reflexive() {
            return false;
        }
        for c in ax.class_iris() {
            if !self.classes.contains(c) {
                self.classes.insert(c.clone());
            }
        }
        for p in ax.property_iris() {
            self.reference_property(p);
        }
        let source = self.current_source();
        let fresh = !self.axiom_sources.contains_key(&ax);
        let sources = self.axiom_sources.entry(ax.clone()).or_default();
        if let Some(s) = source {
            sources.insert(s);
        }
        if fresh {
            self.axioms.push(ax);
        }
        fresh
    }

    /// Compares declarations and axiom sets, ignoring axiom order and provenance.
    pub fn structurally_eq(&self, other: &OntologyModel) -> bool {
        self.classes == other.classes
            && self.properties == other.properties
            && self.axiom_sources.keys().eq(other.axiom_sources.keys())
    }
}

fn annotate(slot: &mut Option<Iri>, value: Iri) -> Annotation {
    match slot {
        None => {
            *slot = Some(value);
            Annotation::Set
        }
        Some(existing) if *existing == value => Annotation::Unchanged,
        Some(existing) => Annotation::Kept(existing.clone()),
    }
}

/// Union of several models plus the warnings raised while combining them.
#[derive(Debug, Clone)]
pub struct Merged {
    pub model: OntologyModel,
    pub warnings: Vec<String>,
}

/// Unions models. Conflicting domains or ranges across inputs resolve to the
/// lexicographically smallest value so the result does not depend on input
/// order; conflicting property kinds are an error.
pub fn merge(models: &[OntologyModel]) -> Result<Merged, MergeError> {
    if models.is_empty() {
        return Err(MergeError::Empty);
    }
    let mut out = OntologyModel::default();
    let mut warnings = Vec::new();
    for m in models {
        out.source_names.extend(m.source_names.iter().cloned());
        out.classes.extend(m.classes.iter().cloned());
        for decl in m.properties.values() {
            merge_property(&mut out, decl, &mut warnings)?;
        }
        for (iri, sources) in &m.property_sources {
            out.property_sources
                .entry(iri.clone())
                .or_default()
                .extend(sources.iter().cloned());
        }
        for ax in &m.axioms {
            let sources = m.axiom_sources.get(ax).cloned().unwrap_or_default();
            if !out.axiom_sources.contains_key(ax) {
                out.axioms.push(ax.clone());
            }
            out.axiom_sources.entry(ax.clone()).or_default().extend(sources);
        }
    }
    Ok(Merged {
        model: out,
        warnings,
    })
}

fn merge_property(
    out: &mut OntologyModel,
    incoming: &PropertyDecl,
    warnings: &mut Vec<String>,
) -> Result<(), MergeError> {
    let Some(existing) = out.properties.get_mut(&incoming.iri) else {
        out.properties.insert(incoming.iri.clone(), incoming.clone());
        return Ok(());
    };
    existing.kind = match (existing.explicit, incoming.explicit) {
        (true, true) => existing
            .kind
            .refine(incoming.kind)
            .ok_or_else(|| MergeError::KindConflict {
                iri: incoming.iri.clone(),
                first: existing.kind,
                second: incoming.kind,
            })?,
        (false, true) => incoming.kind,
        _ => existing.kind,
    };
    existing.explicit |= incoming.explicit;
    for (slot, value, what) in [
        (&mut existing.domain, &incoming.domain, "domain"),
        (&mut existing.range, &incoming.range, "range"),
    ] {
        match (slot.as_ref(), value) {
            (_, None) => {}
            (None, Some(v)) => *slot = Some(v.clone()),
            (Some(a), Some(b)) if a == b => {}
            (Some(a), Some(b)) => {
                let keep = a.min(b).clone();
                warnings.push(format!(
                    "property {} has {what} {a} and {b}; keeping {keep}",
                    incoming.iri
                ));
                *slot = Some(keep);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn sub(a: &str, b: &str) -> Axiom {
        Axiom::SubClassOf {
            sub: iri(a),
            sup: iri(b),
        }
    }

    #[test]
    fn duplicate_axiom_is_stored_once() {
        let mut m = OntologyModel::new("t");
        assert!(m.add_axiom(sub("House", "City")));
        assert!(!m.add_axiom(sub("House", "City")));
        assert_eq!(m.axioms().len(), 1);
    }

    #[test]
    fn equivalence_is_canonical() {
        let mut m = OntologyModel::new("t");
        m.add_axiom(Axiom::EquivalentClass {
            a: iri("Car"),
            b: iri("Auto"),
        });
        m.add_axiom(Axiom::EquivalentClass {
            a: iri("Auto"),
            b: iri("Car"),
        });
        assert_eq!(
            m.axioms(),
            &[Axiom::EquivalentClass {
                a: iri("Auto"),
                b: iri("Car")
            }]
        );
    }

    #[test]
    fn class_link_declares_everything_it_mentions() {
        let mut m = OntologyModel::new("t");
        let ax = Axiom::ClassLink {
            subject: iri("Latgale"),
            property: iri("subAreaOf"),
            object: iri("Latvia"),
        };
        m.add_axiom(ax.clone());
        // enumerate referenced identifiers and check each resolves
        for c in ax.class_iris() {
            assert!(m.is_class(c), "{c} not declared");
        }
        for p in ax.property_iris() {
            let decl = m.property(p).expect("property declared");
            assert!(!decl.explicit);
            assert_eq!(decl.kind, PropertyKind::Object);
        }
        assert_eq!(m.classes().len(), 2);
    }

    #[test]
    fn reflexive_axioms_are_dropped_but_self_links_kept() {
        let mut m = OntologyModel::new("t");
        assert!(!m.add_axiom(sub("A", "A")));
        assert!(m.add_axiom(Axiom::ClassLink {
            subject: iri("A"),
            property: iri("p"),
            object: iri("A"),
        }));
    }

    #[test]
    fn explicit_declaration_upgrades_implicit_property() {
        let mut m = OntologyModel::new("t");
        m.reference_property(&iri("subAreaOf"));
        m.declare_property(iri("subAreaOf"), PropertyKind::Transitive)
            .unwrap();
        m.declare_property(iri("subAreaOf"), PropertyKind::Object)
            .unwrap();
        let d = m.property(&iri("subAreaOf")).unwrap();
        assert_eq!(d.kind, PropertyKind::Transitive);
        assert!(d.explicit);
        assert_eq!(
            m.declare_property(iri("subAreaOf"), PropertyKind::Datatype),
            Err((PropertyKind::Transitive, PropertyKind::Datatype))
        );
    }

    #[test]
    fn second_domain_is_kept_out() {
        let mut m = OntologyModel::new("t");
        m.declare_property(iri("p"), PropertyKind::Object).unwrap();
        assert_eq!(m.set_domain(&iri("p"), iri("A")), Annotation::Set);
        assert_eq!(m.set_domain(&iri("p"), iri("A")), Annotation::Unchanged);
        assert_eq!(m.set_domain(&iri("p"), iri("B")), Annotation::Kept(iri("A")));
        assert_eq!(m.property(&iri("p")).unwrap().domain, Some(iri("A")));
    }

    #[test]
    fn datatype_range_is_not_a_class() {
        let mut m = OntologyModel::new("t");
        m.declare_property(iri("Wheel"), PropertyKind::Datatype)
            .unwrap();
        m.set_domain(&iri("Wheel"), iri("Car"));
        m.set_range(&iri("Wheel"), iri("xs:string"));
        assert!(m.is_class(&iri("Car")));
        assert!(!m.is_class(&iri("xs:string")));
    }

    #[test]
    fn merge_with_empty_is_identity() {
        let mut a = OntologyModel::new("a");
        a.declare_class(iri("Car"));
        a.add_axiom(sub("Car", "Vehicle"));
        let merged = merge(&[a.clone(), OntologyModel::new("empty")]).unwrap();
        assert!(merged.model.structurally_eq(&a));
        assert_eq!(merged.model.source_names(), &["a", "empty"]);
    }

    #[test]
    fn merge_unions_declarations() {
        let mut a = OntologyModel::new("a");
        a.declare_class(iri("Car"));
        let mut b = OntologyModel::new("b");
        b.declare_class(iri("Car"));
        let merged = merge(&[a, b]).unwrap().model;
        assert_eq!(merged.classes().len(), 1);
    }

    #[test]
    fn merge_of_two_subclass_files() {
        let mut a = OntologyModel::new("a");
        a.add_axiom(sub("House", "City"));
        let mut b = OntologyModel::new("b");
        b.add_axiom(sub("City", "Country"));
        let merged = merge(&[a, b]).unwrap().model;
        assert_eq!(merged.axioms().len(), 2);
        assert_eq!(merged.classes().len(), 3);
    }

    #[test]
    fn merge_reports_kind_conflict() {
        let mut a = OntologyModel::new("a");
        a.declare_property(iri("p"), PropertyKind::Datatype).unwrap();
        let mut b = OntologyModel::new("b");
        b.declare_property(iri("p"), PropertyKind::Symmetric).unwrap();
        let err = merge(&[a, b]).unwrap_err();
        assert_eq!(
            err,
            MergeError::KindConflict {
                iri: iri("p"),
                first: PropertyKind::Datatype,
                second: PropertyKind::Symmetric
            }
        );
        assert!(matches!(merge(&[]), Err(MergeError::Empty)));
    }

    #[test]
    fn merge_resolves_domain_clash_independent_of_order() {
        let mut a = OntologyModel::new("a");
        a.declare_property(iri("liveIn"), PropertyKind::Object).unwrap();
        a.set_domain(&iri("liveIn"), iri("Man"));
        let mut b = OntologyModel::new("b");
        b.declare_property(iri("liveIn"), PropertyKind::Object).unwrap();
        b.set_domain(&iri("liveIn"), iri("Fox"));
        let ab = merge(&[a.clone(), b.clone()]).unwrap();
        let ba = merge(&[b, a]).unwrap();
        assert!(ab.model.structurally_eq(&ba.model));
        assert_eq!(ab.model.property(&iri("liveIn")).unwrap().domain, Some(iri("Fox")));
        assert_eq!(ab.warnings.len(), 1);
    }

    #[test]
    fn implicit_reference_does_not_conflict_with_datatype() {
        let mut a = OntologyModel::new("a");
        a.reference_property(&iri("p"));
        let mut b = OntologyModel::new("b");
        b.declare_property(iri("p"), PropertyKind::Datatype).unwrap();
        let m = merge(&[a, b]).unwrap().model;
        assert_eq!(m.property(&iri("p")).unwrap().kind, PropertyKind::Datatype);
    }
}
