//! Schema-level closure of subclass axioms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::iri::Iri;
use crate::model::{Axiom, OntologyModel};
use crate::rule::{Pattern, Rule};

/// Subclass axioms derivable under the subclass-transitivity and
/// equivalence-inheritance templates that are not already in `model`.
///
/// A template takes part when `rules` contains at least one rule of its
/// pattern; rules of other patterns are ignored.
pub fn schema_closure(model: &OntologyModel, rules: &[Rule]) -> Vec<Axiom> {
    let chain = rules.iter().any(|r| r.pattern() == Pattern::SubclassTransitivity);
    let lift = rules.iter().any(|r| r.pattern() == Pattern::EquivalenceInheritance);

    let mut equivalents: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    let mut edges: BTreeSet<(Iri, Iri)> = BTreeSet::new();
    for ax in model.axioms() {
        match ax {
            Axiom::SubClassOf { sub, sup } => {
                edges.insert((sub.clone(), sup.clone()));
            }
            Axiom::EquivalentClass { a, b } => {
                equivalents.entry(a).or_default().push(b);
                equivalents.entry(b).or_default().push(a);
            }
            _ => {}
        }
    }
    let asserted = edges.clone();

    let mut succ: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    let mut pred: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    let mut queue: VecDeque<(Iri, Iri)> = edges.iter().cloned().collect();
    for (a, b) in &edges {
        succ.entry(a.clone()).or_default().insert(b.clone());
        pred.entry(b.clone()).or_default().insert(a.clone());
    }

    while let Some((a, b)) = queue.pop_front() {
        let mut found = Vec::new();
        if chain {
            for c in succ.get(&b).into_iter().flatten() {
                found.push((a.clone(), c.clone()));
            }
            for z in pred.get(&a).into_iter().flatten() {
                found.push((z.clone(), b.clone()));
            }
        }
        if lift {
            for x in equivalents.get(&a).into_iter().flatten() {
                found.push(((*x).clone(), b.clone()));
            }
        }
        for (x, y) in found {
            if x != y && edges.insert((x.clone(), y.clone())) {
                succ.entry(x.clone()).or_default().insert(y.clone());
                pred.entry(y.clone()).or_default().insert(x.clone());
                queue.push_back((x, y));
            }
        }
    }

    edges
        .into_iter()
        .filter(|e| !asserted.contains(e))
        .map(|(sub, sup)| Axiom::SubClassOf { sub, sup })
        .collect()
}
