use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::iri::Iri;

/// Object of a link: an individual, or a class for class-level assertions
/// such as "every Programmer is a colleague of some Engineer".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkObject {
    Individual(Iri),
    Class(Iri),
}

impl LinkObject {
    pub fn iri(&self) -> &Iri {
        match self {
            LinkObject::Individual(i) | LinkObject::Class(i) => i,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    Membership { individual: Iri, class: Iri },
    Link { subject: Iri, property: Iri, object: LinkObject },
    FeatureExpected { individual: Iri, feature: Iri },
    NegMembership { individual: Iri, class: Iri },
}

impl Fact {
    pub fn isa(individual: Iri, class: Iri) -> Fact {
        Fact::Membership { individual, class }
    }

    pub fn link(subject: Iri, property: Iri, object: Iri) -> Fact {
        Fact::Link {
            subject,
            property,
            object: LinkObject::Individual(object),
        }
    }
}

/// Renders in the line-oriented fact format.
impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Membership { individual, class } => write!(f, "isa({individual}, {class})"),
            Fact::Link {
                subject,
                property,
                object: LinkObject::Individual(o),
            } => write!(f, "link({subject}, {property}, {o})"),
            Fact::Link {
                subject,
                property,
                object: LinkObject::Class(c),
            } => write!(f, "classlink({subject}, {property}, {c})"),
            Fact::FeatureExpected {
                individual,
                feature,
            } => write!(f, "feature({individual}, {feature})"),
            Fact::NegMembership { individual, class } => write!(f, "not isa({individual}, {class})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FactBase {
    facts: BTreeSet<Fact>,
    derived_marks: BTreeMap<Fact, String>,
}

impl FactBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, fact: Fact) -> bool {
        self.facts.insert(fact)
    }

    /// Records a derived fact; the first deriving rule wins.
    pub(crate) fn insert_derived(&mut self, fact: Fact, rule_id: &str) -> bool {
        if self.facts.contains(&fact) {
            return false;
        }
        self.derived_marks.insert(fact.clone(), rule_id.to_string());
        self.facts.insert(fact)
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.facts.contains(fact)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter()
    }

    pub fn derived_by(&self, fact: &Fact) -> Option<&str> {
        self.derived_marks.get(fact).map(String::as_str)
    }

    pub fn derived_marks(&self) -> &BTreeMap<Fact, String> {
        &self.derived_marks
    }

    pub fn individuals(&self) -> BTreeSet<&Iri> {
        let mut out = BTreeSet::new();
        for f in &self.facts {
            match f {
                Fact::Membership { individual, .. }
                | Fact::NegMembership { individual, .. }
                | Fact::FeatureExpected { individual, .. } => {
                    out.insert(individual);
                }
                Fact::Link {
                    subject, object, ..
                } => {
                    out.insert(subject);
                    if let LinkObject::Individual(o) = object {
                        out.insert(o);
                    }
                }
            }
        }
        out
    }
}

impl FromIterator<Fact> for FactBase {
    fn from_iter<T: IntoIterator<Item = Fact>>(iter: T) -> Self {
        FactBase {
            facts: iter.into_iter().collect(),
            derived_marks: BTreeMap::new(),
        }
    }
}

impl Extend<Fact> for FactBase {
    fn extend<T: IntoIterator<Item = Fact>>(&mut self, iter: T) {
        self.facts.extend(iter);
    }
}
