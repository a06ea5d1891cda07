//! Forward chaining of generated rules over instance data.
//!
//! Evaluation is semi-naive: in every round each rule is matched with at
//! least one body atom bound to a fact derived in the previous round. Rules
//! whose consequent is negated are integrity constraints; they never assert
//! and are checked against the saturated fact base under a closed world.

mod facts;
mod schema;

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub use facts::{Fact, FactBase, LinkObject};
pub use schema::schema_closure;

use crate::error::EngineError;
use crate::iri::Iri;
use crate::rule::{Atom, Rule, Term, Var};

#[derive(Debug, Clone)]
pub struct InferenceResult {
    pub final_facts: FactBase,
    pub iterations: usize,
    pub converged: bool,
    /// Derived facts with the id of the first rule deriving them, in derivation order.
    pub derived: Vec<(Fact, String)>,
    /// Facts contradicting a constraint rule.
    pub violations: Vec<(Fact, String)>,
}

/// Term in subject position.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Slot {
    Var(Var),
    Const(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ObjectSlot {
    Var(Var),
    Individual(Iri),
    Class(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Pat {
    IsA { subject: Slot, class: Iri },
    Link { subject: Slot, property: Iri, object: ObjectSlot },
    Feature { subject: Slot, feature: Iri },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    IsA(Iri),
    Link(Iri),
    Feature(Iri),
}

type Binding = [Option<Iri>; 3];

impl Pat {
    fn key(&self) -> Key {
        match self {
            Pat::IsA { class, .. } => Key::IsA(class.clone()),
            Pat::Link { property, .. } => Key::Link(property.clone()),
            Pat::Feature { feature, .. } => Key::Feature(feature.clone()),
        }
    }

    fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        match self {
            Pat::IsA { subject, .. } | Pat::Feature { subject, .. } => {
                if let Slot::Var(v) = subject {
                    out.push(*v);
                }
            }
            Pat::Link { subject, object, .. } => {
                if let Slot::Var(v) = subject {
                    out.push(*v);
                }
                if let ObjectSlot::Var(v) = object {
                    out.push(*v);
                }
            }
        }
        out
    }

    fn matches(&self, fact: &Fact, binding: &Binding) -> Option<Binding> {
        let mut b = binding.clone();
        match (self, fact) {
            (Pat::IsA { subject, class }, Fact::Membership { individual, class: c }) if class == c => {
                bind_slot(subject, individual, &mut b)?;
            }
            (Pat::Feature { subject, feature }, Fact::FeatureExpected { individual, feature: f }) if feature == f => {
                bind_slot(subject, individual, &mut b)?;
            }
            (
                Pat::Link { subject, property, object },
                Fact::Link { subject: s, property: p, object: o },
            ) if property == p => {
                bind_slot(subject, s, &mut b)?;
                match (object, o) {
                    (ObjectSlot::Var(v), LinkObject::Individual(i)) => bind(*v, i, &mut b)?,
                    (ObjectSlot::Individual(c), LinkObject::Individual(i))
                    | (ObjectSlot::Class(c), LinkObject::Class(i))
                        if c == i => {}
                    _ => return None,
                }
            }
            _ => return None,
        }
        Some(b)
    }

    fn instantiate(&self, b: &Binding) -> Fact {
        let subject = |s: &Slot| match s {
            Slot::Var(v) => b[v.index()].clone().expect("consequent variables are range restricted"),
            Slot::Const(c) => c.clone(),
        };
        match self {
            Pat::IsA { subject: s, class } => Fact::Membership {
                individual: subject(s),
                class: class.clone(),
            },
            Pat::Feature { subject: s, feature } => Fact::FeatureExpected {
                individual: subject(s),
                feature: feature.clone(),
            },
            Pat::Link { subject: s, property, object } => Fact::Link {
                subject: subject(s),
                property: property.clone(),
                object: match object {
                    ObjectSlot::Var(v) => LinkObject::Individual(
                        b[v.index()].clone().expect("consequent variables are range restricted"),
                    ),
                    ObjectSlot::Individual(i) => LinkObject::Individual(i.clone()),
                    ObjectSlot::Class(c) => LinkObject::Class(c.clone()),
                },
            },
        }
    }
}

fn bind(v: Var, value: &Iri, b: &mut Binding) -> Option<()> {
    match &b[v.index()] {
        Some(existing) if existing != value => None,
        Some(_) => Some(()),
        None => {
            b[v.index()] = Some(value.clone());
            Some(())
        }
    }
}

fn bind_slot(slot: &Slot, value: &Iri, b: &mut Binding) -> Option<()> {
    match slot {
        Slot::Var(v) => bind(*v, value, b),
        Slot::Const(c) if c == value => Some(()),
        Slot::Const(_) => None,
    }
}

fn compile_atom(rule: &Rule, atom: &Atom) -> Result<Pat, EngineError> {
    let unsupported = || EngineError::UnsupportedAtom {
        rule: rule.id().to_string(),
        atom: atom.to_string(),
    };
    let slot = |t: &Term| match t {
        Term::Var(v) => Ok(Slot::Var(*v)),
        Term::Individual(i) | Term::Class(i) => Ok(Slot::Const(i.clone())),
        _ => Err(unsupported()),
    };
    match atom {
        Atom::IsA {
            subject,
            class: Term::Class(c),
        } => Ok(Pat::IsA {
            subject: slot(subject)?,
            class: c.clone(),
        }),
        Atom::HasFeature { subject, feature } => Ok(Pat::Feature {
            subject: slot(subject)?,
            feature: feature.clone(),
        }),
        Atom::Link {
            subject,
            property: Term::Prop(p),
            object,
        } => {
            let subject = slot(subject)?;
            // a class object under a variable subject is a class-level target;
            // under a constant subject the whole atom is ground and names individuals
            let object = match (object, &subject) {
                (Term::Var(v), _) => ObjectSlot::Var(*v),
                (Term::Individual(i), _) => ObjectSlot::Individual(i.clone()),
                (Term::Class(c), Slot::Var(_)) => ObjectSlot::Class(c.clone()),
                (Term::Class(c), Slot::Const(_)) => ObjectSlot::Individual(c.clone()),
                _ => return Err(unsupported()),
            };
            Ok(Pat::Link {
                subject,
                property: p.clone(),
                object,
            })
        }
        _ => Err(unsupported()),
    }
}

#[derive(Debug)]
struct Production {
    id: String,
    body: Vec<Pat>,
    head: Vec<Pat>,
}

#[derive(Debug)]
struct Constraint {
    id: String,
    positive: Vec<Pat>,
    negative: Vec<Pat>,
    denied: Vec<Pat>,
}

enum Compiled {
    Production(Production),
    Constraint(Constraint),
    SchemaOnly,
}

fn compile(rule: &Rule) -> Result<Compiled, EngineError> {
    if !rule.executable() {
        return Err(EngineError::NonExecutable(rule.id().to_string()));
    }
    let id = rule.id().to_string();
    let head_atoms: Vec<&Atom> = rule.consequent().iter().filter(|a| !a.is_schema()).collect();
    if head_atoms.is_empty() {
        return Ok(Compiled::SchemaOnly);
    }
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for atom in rule.antecedent() {
        match atom {
            // ground schema preconditions were verified against the ontology at extraction
            a if a.is_schema() => {}
            Atom::Not(inner) => negative.push(compile_atom(rule, inner)?),
            a => positive.push(compile_atom(rule, a)?),
        }
    }
    let unsupported = |atom: &Atom| EngineError::UnsupportedAtom {
        rule: id.clone(),
        atom: atom.to_string(),
    };
    if head_atoms.iter().any(|a| matches!(a, Atom::Not(_))) {
        let mut denied = Vec::new();
        for atom in head_atoms {
            let Atom::Not(inner) = atom else {
                return Err(unsupported(atom));
            };
            denied.push(compile_atom(rule, inner)?);
        }
        return Ok(Compiled::Constraint(Constraint {
            id,
            positive,
            negative,
            denied,
        }));
    }
    if let Some(atom) = rule.antecedent().iter().find(|a| matches!(a, Atom::Not(_))) {
        return Err(unsupported(atom));
    }
    let head = head_atoms
        .into_iter()
        .map(|a| compile_atom(rule, a))
        .collect::<Result<Vec<_>, _>>()?;
    let bound: BTreeSet<Var> = positive.iter().flat_map(Pat::vars).collect();
    for (pat, atom) in head.iter().zip(rule.consequent().iter().filter(|a| !a.is_schema())) {
        if pat.vars().iter().any(|v| !bound.contains(v)) {
            return Err(unsupported(atom));
        }
    }
    Ok(Compiled::Production(Production {
        id,
        body: positive,
        head,
    }))
}

#[derive(Debug, Default, Clone)]
struct Index {
    by_key: HashMap<Key, Vec<Fact>>,
}

impl Index {
    fn key(fact: &Fact) -> Option<Key> {
        match fact {
            Fact::Membership { class, .. } => Some(Key::IsA(class.clone())),
            Fact::Link { property, .. } => Some(Key::Link(property.clone())),
            Fact::FeatureExpected { feature, .. } => Some(Key::Feature(feature.clone())),
            Fact::NegMembership { .. } => None,
        }
    }

    fn add(&mut self, fact: Fact) {
        if let Some(k) = Self::key(&fact) {
            self.by_key.entry(k).or_default().push(fact);
        }
    }

    fn get(&self, key: &Key) -> &[Fact] {
        self.by_key.get(key).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Extends `binding` over `pats` using facts from `index`.
fn join(pats: &[&Pat], index: &Index, binding: Binding, out: &mut Vec<Binding>) {
    let Some((first, rest)) = pats.split_first() else {
        out.push(binding);
        return;
    };
    for fact in index.get(&first.key()) {
        if let Some(b) = first.matches(fact, &binding) {
            join(rest, index, b, out);
        }
    }
}

fn contradiction(facts: &FactBase) -> Option<EngineError> {
    facts.iter().find_map(|f| match f {
        Fact::NegMembership { individual, class } => {
            let pos = Fact::isa(individual.clone(), class.clone());
            facts.contains(&pos).then(|| EngineError::Contradiction {
                individual: individual.clone(),
                class: class.clone(),
                positive: facts.derived_by(&pos).unwrap_or("asserted").to_string(),
                negative: "asserted".to_string(),
            })
        }
        _ => None,
    })
}

/// Iteration cap under which every run of positive rules terminates:
/// |individuals|² · |properties| + |individuals| · |classes| + 1.
pub fn analytic_cap(rules: &[Rule], facts: &FactBase) -> usize {
    let mut individuals: BTreeSet<&Iri> = facts.individuals();
    let mut properties = BTreeSet::new();
    let mut classes = BTreeSet::new();
    for f in facts.iter() {
        match f {
            Fact::Membership { class, .. } | Fact::NegMembership { class, .. } => {
                classes.insert(class);
            }
            Fact::Link { property, object, .. } => {
                properties.insert(property);
                if let LinkObject::Class(c) = object {
                    classes.insert(c);
                }
            }
            Fact::FeatureExpected { feature, .. } => {
                properties.insert(feature);
            }
        }
    }
    for atom in rules.iter().flat_map(|r| r.antecedent().iter().chain(r.consequent())) {
        collect_atom(atom, &mut individuals, &mut properties, &mut classes);
    }
    let i = individuals.len();
    i * i * properties.len() + i * classes.len() + 1
}

fn collect_atom<'a>(
    atom: &'a Atom,
    individuals: &mut BTreeSet<&'a Iri>,
    properties: &mut BTreeSet<&'a Iri>,
    classes: &mut BTreeSet<&'a Iri>,
) {
    match atom {
        Atom::IsA { class: Term::Class(c), subject } => {
            classes.insert(c);
            if let Some(s) = subject.iri() {
                individuals.insert(s);
            }
        }
        Atom::Link { subject, property, object } => {
            if let Some(p) = property.iri() {
                properties.insert(p);
            }
            if let Some(s) = subject.iri() {
                individuals.insert(s);
                if let Some(o) = object.iri() {
                    individuals.insert(o);
                }
            } else if let Term::Class(c) = object {
                classes.insert(c);
            }
        }
        Atom::HasFeature { feature, .. } => {
            properties.insert(feature);
        }
        Atom::Not(inner) => collect_atom(inner, individuals, properties, classes),
        _ => {}
    }
}

/// Runs executable rules over `initial` until no new fact appears or `cap`
/// rounds have been spent.
pub fn run_fixpoint(rules: &[Rule], initial: &FactBase, cap: usize) -> Result<InferenceResult, EngineError> {
    if cap == 0 {
        return Err(EngineError::ZeroCap);
    }
    let mut sorted: Vec<&Rule> = rules.iter().collect();
    sorted.sort_by(|a, b| a.id().cmp(b.id()));
    let mut productions = Vec::new();
    let mut constraints = Vec::new();
    for rule in sorted {
        match compile(rule)? {
            Compiled::Production(p) => productions.push(p),
            Compiled::Constraint(c) => constraints.push(c),
            Compiled::SchemaOnly => {}
        }
    }

    let mut facts = initial.clone();
    if let Some(err) = contradiction(&facts) {
        return Err(err);
    }
    let mut all = Index::default();
    for f in facts.iter() {
        all.add(f.clone());
    }
    let mut delta = all.clone();
    let mut derived = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cap {
        iterations += 1;
        let mut fresh: BTreeMap<Fact, &str> = BTreeMap::new();
        let mut order = Vec::new();
        for rule in &productions {
            let mut bindings = Vec::new();
            if rule.body.is_empty() {
                if iterations == 1 {
                    bindings.push(Binding::default());
                }
            } else {
                for (i, seed) in rule.body.iter().enumerate() {
                    let rest: Vec<&Pat> = rule
                        .body
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, p)| p)
                        .collect();
                    for fact in delta.get(&seed.key()) {
                        if let Some(b) = seed.matches(fact, &Binding::default()) {
                            join(&rest, &all, b, &mut bindings);
                        }
                    }
                }
            }
            for b in &bindings {
                for head in &rule.head {
                    let fact = head.instantiate(b);
                    if !facts.contains(&fact) && !fresh.contains_key(&fact) {
                        fresh.insert(fact.clone(), &rule.id);
                        order.push(fact);
                    }
                }
            }
        }
        if order.is_empty() {
            converged = true;
            break;
        }
        delta = Index::default();
        for fact in order {
            let rule_id = fresh[&fact];
            if let Fact::Membership { individual, class } = &fact {
                let neg = Fact::NegMembership {
                    individual: individual.clone(),
                    class: class.clone(),
                };
                if facts.contains(&neg) {
                    return Err(EngineError::Contradiction {
                        individual: individual.clone(),
                        class: class.clone(),
                        positive: rule_id.to_string(),
                        negative: "asserted".to_string(),
                    });
                }
            }
            facts.insert_derived(fact.clone(), rule_id);
            all.add(fact.clone());
            delta.add(fact.clone());
            derived.push((fact, rule_id.to_string()));
        }
    }

    let violations = check_constraints(&constraints, &facts, &all);
    Ok(InferenceResult {
        final_facts: facts,
        iterations,
        converged,
        derived,
        violations,
    })
}

fn check_constraints(constraints: &[Constraint], facts: &FactBase, all: &Index) -> Vec<(Fact, String)> {
    let mut out = Vec::new();
    for c in constraints {
        for denied in &c.denied {
            for fact in facts.iter() {
                let Some(b) = denied.matches(fact, &Binding::default()) else {
                    continue;
                };
                let mut support = Vec::new();
                join(&c.positive.iter().collect::<Vec<_>>(), all, b, &mut support);
                let violated = support.iter().any(|b| {
                    c.negative.iter().all(|neg| {
                        let mut hits = Vec::new();
                        join(&[neg], all, b.clone(), &mut hits);
                        hits.is_empty()
                    })
                });
                if violated {
                    out.push((fact.clone(), c.id.clone()));
                }
            }
        }
    }
    out
}
