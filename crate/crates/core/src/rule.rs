//! The rule language generated rules are written in.
//!
//! Rules carry explicit variables (`?x`, `?y`, `?z`) so they can be executed;
//! the propositional phrasing used for display lives in the provenance.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::RuleError;
use crate::iri::Iri;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "?x",
            Var::Y => "?y",
            Var::Z => "?z",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl FromStr for Var {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "?x" => Ok(Var::X),
            "?y" => Ok(Var::Y),
            "?z" => Ok(Var::Z),
            other => Err(RuleError::Document(format!("unknown variable {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Class(Iri),
    Prop(Iri),
    Individual(Iri),
    Literal(String),
}

impl Term {
    pub fn iri(&self) -> Option<&Iri> {
        match self {
            Term::Class(i) | Term::Prop(i) | Term::Individual(i) => Some(i),
            Term::Var(_) | Term::Literal(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v.name()),
            Term::Class(i) | Term::Prop(i) | Term::Individual(i) => write!(f, "{i}"),
            Term::Literal(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    IsA { subject: Term, class: Term },
    Link { subject: Term, property: Term, object: Term },
    HasFeature { subject: Term, feature: Iri },
    Not(Box<Atom>),
    SchemaSubClassOf { sub: Term, sup: Term },
    SchemaEquivalent { a: Term, b: Term },
    SolePart { part: Term, whole: Term },
    MorePartsExpected { whole: Term },
}

impl Atom {
    pub fn isa(subject: Term, class: &Iri) -> Atom {
        Atom::IsA {
            subject,
            class: Term::Class(class.clone()),
        }
    }

    pub fn link(subject: Term, property: &Iri, object: Term) -> Atom {
        Atom::Link {
            subject,
            property: Term::Prop(property.clone()),
            object,
        }
    }

    /// Negation; negating a negation yields the inner atom.
    pub fn negate(inner: Atom) -> Atom {
        match inner {
            Atom::Not(a) => *a,
            other => Atom::Not(Box::new(other)),
        }
    }

    pub fn is_schema(&self) -> bool {
        matches!(
            self,
            Atom::SchemaSubClassOf { .. }
                | Atom::SchemaEquivalent { .. }
                | Atom::SolePart { .. }
                | Atom::MorePartsExpected { .. }
        )
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::IsA { subject, class } => vec![subject, class],
            Atom::Link {
                subject,
                property,
                object,
            } => vec![subject, property, object],
            Atom::HasFeature { subject, .. } => vec![subject],
            Atom::Not(inner) => inner.terms(),
            Atom::SchemaSubClassOf { sub, sup } => vec![sub, sup],
            Atom::SchemaEquivalent { a, b } => vec![a, b],
            Atom::SolePart { part, whole } => vec![part, whole],
            Atom::MorePartsExpected { whole } => vec![whole],
        }
    }

    fn iris(&self) -> Vec<&Iri> {
        let mut out: Vec<&Iri> = self.terms().into_iter().filter_map(Term::iri).collect();
        if let Atom::HasFeature { feature, .. } = self {
            out.push(feature);
        }
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::IsA { subject, class } => write!(f, "{class}({subject})"),
            Atom::Link {
                subject,
                property,
                object,
            } => write!(f, "({subject} {property} {object})"),
            Atom::HasFeature { subject, feature } => write!(f, "hasFeature({subject},{feature})"),
            Atom::Not(inner) => write!(f, "not {inner}"),
            Atom::SchemaSubClassOf { sub, sup } => write!(f, "subClassOf({sub},{sup})"),
            Atom::SchemaEquivalent { a, b } => write!(f, "equivalent({a},{b})"),
            Atom::SolePart { part, whole } => write!(f, "solePart({part},{whole})"),
            Atom::MorePartsExpected { whole } => write!(f, "morePartsExpected({whole})"),
        }
    }
}

/// The rule-generating patterns, one per kind of ontology fragment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    ClassFeature,
    EquivalenceInheritance,
    DomainRangeIdentification,
    SubclassTransitivity,
    RelationPropagation,
    SubpropertyLift,
    Symmetric,
    TransitiveProperty,
    SolePartOf,
    Cooccurrence,
    AllValuesFrom,
    IntersectionDecomposition,
    Inverse,
}

impl Pattern {
    pub const ALL: [Pattern; 13] = [
        Pattern::ClassFeature,
        Pattern::EquivalenceInheritance,
        Pattern::DomainRangeIdentification,
        Pattern::SubclassTransitivity,
        Pattern::RelationPropagation,
        Pattern::SubpropertyLift,
        Pattern::Symmetric,
        Pattern::TransitiveProperty,
        Pattern::SolePartOf,
        Pattern::Cooccurrence,
        Pattern::AllValuesFrom,
        Pattern::IntersectionDecomposition,
        Pattern::Inverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pattern::ClassFeature => "class-feature",
            Pattern::EquivalenceInheritance => "equivalence-inheritance",
            Pattern::DomainRangeIdentification => "domain-range-identification",
            Pattern::SubclassTransitivity => "subclass-transitivity",
            Pattern::RelationPropagation => "relation-propagation",
            Pattern::SubpropertyLift => "subproperty-lift",
            Pattern::Symmetric => "symmetric",
            Pattern::TransitiveProperty => "transitive-property",
            Pattern::SolePartOf => "sole-partof",
            Pattern::Cooccurrence => "cooccurrence",
            Pattern::AllValuesFrom => "allvaluesfrom",
            Pattern::IntersectionDecomposition => "intersection-decomposition",
            Pattern::Inverse => "inverse",
        }
    }

    pub fn category(self) -> RuleCategory {
        use Pattern::*;
        match self {
            DomainRangeIdentification | SubpropertyLift => RuleCategory::Identifying,
            ClassFeature | Cooccurrence | IntersectionDecomposition => RuleCategory::Specifying,
            EquivalenceInheritance | SubclassTransitivity | RelationPropagation
            | TransitiveProperty | SolePartOf => RuleCategory::Unobvious,
            Symmetric | AllValuesFrom | Inverse => RuleCategory::MeaningEnriching,
        }
    }

    /// Every pattern except the sole-part one yields rules with instance semantics.
    pub fn executable(self) -> bool {
        self != Pattern::SolePartOf
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pattern {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pattern::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| RuleError::UnknownPattern(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleCategory {
    Identifying,
    Specifying,
    Unobvious,
    MeaningEnriching,
}

impl RuleCategory {
    /// In reporting order.
    pub const ALL: [RuleCategory; 4] = [
        RuleCategory::Identifying,
        RuleCategory::Specifying,
        RuleCategory::Unobvious,
        RuleCategory::MeaningEnriching,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleCategory::Identifying => "identifying",
            RuleCategory::Specifying => "specifying",
            RuleCategory::Unobvious => "unobvious",
            RuleCategory::MeaningEnriching => "meaning-enriching",
        }
    }
}

impl fmt::Display for RuleCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleCategory {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleCategory::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| RuleError::UnknownCategory(s.to_string()))
    }
}

/// Category of the pattern called `pattern`.
pub fn classify(pattern: &str) -> Result<RuleCategory, RuleError> {
    pattern.parse::<Pattern>().map(Pattern::category)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub sources: BTreeSet<String>,
    /// Rendered triggering axioms and declarations, sorted.
    pub trigger_axioms: BTreeSet<String>,
    /// Propositional phrasing of the rule.
    pub paper_form: String,
}

impl Provenance {
    pub fn absorb(&mut self, other: &Provenance) {
        self.sources.extend(other.sources.iter().cloned());
        self.trigger_axioms
            .extend(other.trigger_axioms.iter().cloned());
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    id: String,
    pattern: Pattern,
    antecedent: Vec<Atom>,
    consequent: Vec<Atom>,
    provenance: Provenance,
}

impl Rule {
    pub fn new(
        pattern: Pattern,
        antecedent: Vec<Atom>,
        consequent: Vec<Atom>,
        provenance: Provenance,
    ) -> Result<Rule, RuleError> {
        let id = rule_id(pattern, &antecedent, &consequent);
        let fail = |reason: &str| RuleError::Malformed {
            id: id.clone(),
            reason: reason.to_string(),
        };
        if antecedent.is_empty() || consequent.is_empty() {
            return Err(fail("antecedent and consequent must be non-empty"));
        }
        let all = || antecedent.iter().chain(&consequent);
        if all().any(|a| matches!(a, Atom::Not(inner) if matches!(**inner, Atom::Not(_)))) {
            return Err(fail("double negation"));
        }
        let sole = all().any(|a| matches!(a, Atom::SolePart { .. } | Atom::MorePartsExpected { .. }));
        if sole && pattern != Pattern::SolePartOf {
            return Err(fail("sole-part atoms outside the sole-partof pattern"));
        }
        Ok(Rule {
            id,
            pattern,
            antecedent,
            consequent,
            provenance,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn pattern(&self) -> Pattern {
        self.pattern
    }

    pub fn category(&self) -> RuleCategory {
        self.pattern.category()
    }

    pub fn executable(&self) -> bool {
        self.pattern.executable()
    }

    pub fn antecedent(&self) -> &[Atom] {
        &self.antecedent
    }

    pub fn consequent(&self) -> &[Atom] {
        &self.consequent
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn provenance_mut(&mut self) -> &mut Provenance {
        &mut self.provenance
    }

    /// Identifiers mentioned by the rule, sorted and deduplicated.
    pub fn iris(&self) -> BTreeSet<&Iri> {
        self.antecedent
            .iter()
            .chain(&self.consequent)
            .flat_map(Atom::iris)
            .collect()
    }

    /// True if both rules have the same pattern and atoms.
    pub fn same_body(&self, other: &Rule) -> bool {
        self.pattern == other.pattern
            && self.antecedent == other.antecedent
            && self.consequent == other.consequent
    }
}

/// `<pattern>-<16 hex digits>`; the digest covers the pattern and the rendered
/// atoms in role order, so structurally identical rules share an id.
fn rule_id(pattern: Pattern, antecedent: &[Atom], consequent: &[Atom]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(pattern.name().as_bytes());
    hasher.update([0]);
    hasher.update(render_body(antecedent, consequent).as_bytes());
    let digest = hasher.finalize();
    let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    format!("{}-{}", pattern.name(), hex)
}

fn join(atoms: &[Atom]) -> String {
    atoms
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" and ")
}

fn render_body(antecedent: &[Atom], consequent: &[Atom]) -> String {
    format!("IF {} THEN {}", join(antecedent), join(consequent))
}

/// `IF <atoms joined by " and "> THEN <atoms joined by " and ">`
pub fn render_text(rule: &Rule) -> String {
    render_body(&rule.antecedent, &rule.consequent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn classification_table_is_exact() {
        let table = [
            ("class-feature", RuleCategory::Specifying),
            ("equivalence-inheritance", RuleCategory::Unobvious),
            ("domain-range-identification", RuleCategory::Identifying),
            ("subclass-transitivity", RuleCategory::Unobvious),
            ("relation-propagation", RuleCategory::Unobvious),
            ("subproperty-lift", RuleCategory::Identifying),
            ("symmetric", RuleCategory::MeaningEnriching),
            ("transitive-property", RuleCategory::Unobvious),
            ("sole-partof", RuleCategory::Unobvious),
            ("cooccurrence", RuleCategory::Specifying),
            ("allvaluesfrom", RuleCategory::MeaningEnriching),
            ("intersection-decomposition", RuleCategory::Specifying),
            ("inverse", RuleCategory::MeaningEnriching),
        ];
        assert_eq!(table.len(), Pattern::ALL.len());
        for (name, cat) in table {
            assert_eq!(classify(name), Ok(cat), "{name}");
        }
        assert_eq!(
            classify("union-split"),
            Err(RuleError::UnknownPattern("union-split".into()))
        );
    }

    #[test]
    fn names_round_trip() {
        for p in Pattern::ALL {
            assert_eq!(p.name().parse::<Pattern>(), Ok(p));
            assert_eq!(p.executable(), p != Pattern::SolePartOf);
        }
        for c in RuleCategory::ALL {
            assert_eq!(c.name().parse::<RuleCategory>(), Ok(c));
        }
    }

    #[test]
    fn negation_never_nests() {
        let a = Atom::isa(Term::Var(Var::Y), &iri("Citizen"));
        let n = Atom::negate(a.clone());
        assert_eq!(Atom::negate(n), a);
        let bad = Atom::Not(Box::new(Atom::Not(Box::new(a.clone()))));
        assert!(Rule::new(Pattern::AllValuesFrom, vec![bad], vec![a], Provenance::default()).is_err());
    }

    #[test]
    fn sole_part_atoms_are_confined() {
        let r = Rule::new(
            Pattern::SubclassTransitivity,
            vec![Atom::SolePart {
                part: Term::Class(iri("House")),
                whole: Term::Class(iri("City")),
            }],
            vec![Atom::MorePartsExpected {
                whole: Term::Class(iri("City")),
            }],
            Provenance::default(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn renders_variable_explicit_form() {
        let x = Term::Var(Var::X);
        let rule = Rule::new(
            Pattern::ClassFeature,
            vec![Atom::isa(x.clone(), &iri("Car"))],
            vec![
                Atom::HasFeature { subject: x.clone(), feature: iri("Engine") },
                Atom::HasFeature { subject: x, feature: iri("Wheel") },
            ],
            Provenance::default(),
        )
        .unwrap();
        assert_eq!(
            render_text(&rule),
            "IF Car(?x) THEN hasFeature(?x,Engine) and hasFeature(?x,Wheel)"
        );
        assert!(rule.id().starts_with("class-feature-"));
        assert_eq!(rule.id().len(), "class-feature-".len() + 16);
    }

    #[test]
    fn ids_ignore_provenance_but_not_atoms() {
        let mk = |class: &str, source: &str| {
            let mut prov = Provenance::default();
            prov.sources.insert(source.to_string());
            Rule::new(
                Pattern::IntersectionDecomposition,
                vec![Atom::isa(Term::Var(Var::X), &iri("Man"))],
                vec![Atom::isa(Term::Var(Var::X), &iri(class))],
                prov,
            )
            .unwrap()
        };
        assert_eq!(mk("Male", "a").id(), mk("Male", "b").id());
        assert_ne!(mk("Male", "a").id(), mk("Human", "a").id());
    }
}
