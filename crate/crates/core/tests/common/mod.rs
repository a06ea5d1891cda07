//! Oracles and generators shared by the integration tests. Everything here is
//! written against the public API only and avoids the library's own
//! evaluation code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;

use owlrules_core::{
    extract_all, merge, parse_ontology, Atom, Axiom, Fact, FactBase, Iri, LinkObject, OntologyModel,
    PropertyKind, Rule, Term,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/listings")
}

pub fn corpus_files() -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".owl"))
        .collect();
    names.sort();
    names
}

pub fn corpus_text(name: &str) -> String {
    fs::read_to_string(corpus_dir().join(name)).unwrap()
}

pub fn load(name: &str) -> OntologyModel {
    let parsed = parse_ontology(&corpus_text(name), name).unwrap_or_else(|e| panic!("{name}: {e:?}"));
    assert!(parsed.diagnostics.is_empty(), "{name}: {:?}", parsed.diagnostics);
    parsed.model
}

pub fn load_all() -> OntologyModel {
    let models: Vec<OntologyModel> = corpus_files().iter().map(|n| load(n)).collect();
    merge(&models).unwrap().model
}

/// Splits a bare fragment into its top-level elements; the corpus keeps
/// every top-level element flush left and indents children.
pub fn top_level_chunks(text: &str) -> Vec<String> {
    let mut chunks: Vec<String> = Vec::new();
    for line in text.lines() {
        let opens = !line.starts_with(char::is_whitespace) && !line.starts_with("</");
        if opens || chunks.is_empty() {
            chunks.push(String::new());
        }
        let last = chunks.last_mut().unwrap();
        last.push_str(line);
        last.push('\n');
    }
    chunks
}

/// Random DAG over `n` nodes: edge i -> j for i < j with probability `p`.
pub fn random_dag(rng: &mut impl Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Transitive closure by Warshall's algorithm over an adjacency matrix.
pub fn warshall(n: usize, edges: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k] {
                for (cell, &r) in row.iter_mut().zip(&via) {
                    *cell |= r;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, row) in reach.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r && i != j {
                out.insert((i, j));
            }
        }
    }
    out
}

pub const CLASSES: [&str; 5] = ["C0", "C1", "C2", "C3", "C4"];
pub const PROPS: [&str; 4] = ["p0", "p1", "p2", "p3"];

/// Random schema over a small fixed vocabulary, built through the public
/// model API.
pub fn random_model(rng: &mut impl Rng, max_axioms: usize) -> OntologyModel {
    let mut m = OntologyModel::new("random.owl");
    let kinds = [
        PropertyKind::Datatype,
        PropertyKind::Object,
        PropertyKind::Symmetric,
        PropertyKind::Transitive,
    ];
    for p in PROPS {
        let kind = *kinds.choose(rng).unwrap();
        m.declare_property(iri(p), kind).unwrap();
        if rng.gen_bool(0.7) {
            m.set_domain(&iri(p), iri(CLASSES.choose(rng).unwrap()));
        }
        if rng.gen_bool(0.7) {
            m.set_range(&iri(p), iri(CLASSES.choose(rng).unwrap()));
        }
    }
    let n = rng.gen_range(0..=max_axioms);
    for _ in 0..n {
        m.add_axiom(random_axiom(rng));
    }
    m
}

pub fn random_axiom(rng: &mut impl Rng) -> Axiom {
    let c = |rng: &mut dyn rand::RngCore| iri(CLASSES[rng.gen_range(0..CLASSES.len())]);
    let p = |rng: &mut dyn rand::RngCore| iri(PROPS[rng.gen_range(0..PROPS.len())]);
    match rng.gen_range(0..7) {
        0 | 1 => Axiom::SubClassOf { sub: c(rng), sup: c(rng) },
        2 => Axiom::equivalent(c(rng), c(rng)),
        3 => Axiom::SubPropertyOf { sub: p(rng), sup: p(rng) },
        4 => Axiom::InverseOf { property: p(rng), inverse: p(rng) },
        5 => Axiom::AllValuesFrom { on_property: p(rng), filler: c(rng) },
        _ => {
            if rng.gen_bool(0.5) {
                Axiom::IntersectionOf { defined: c(rng), parts: vec![c(rng), c(rng)] }
            } else {
                Axiom::ClassLink { subject: c(rng), property: p(rng), object: c(rng) }
            }
        }
    }
}

/// Rules that assert facts when run: executable, not a constraint, and with
/// at least one instance-level consequent.
pub fn is_productive(rule: &Rule) -> bool {
    rule.executable()
        && !rule.consequent().iter().any(|a| matches!(a, Atom::Not(_)))
        && rule.consequent().iter().any(|a| !a.is_schema())
}

pub fn random_facts(rng: &mut impl Rng, individuals: usize, count: usize) -> FactBase {
    let inds: Vec<String> = (0..individuals).map(|i| format!("i{i}")).collect();
    let mut facts = FactBase::new();
    for _ in 0..count {
        let a = iri(inds.choose(rng).unwrap());
        if rng.gen_bool(0.5) {
            facts.insert(Fact::isa(a, iri(CLASSES.choose(rng).unwrap())));
        } else {
            let b = iri(inds.choose(rng).unwrap());
            facts.insert(Fact::link(a, iri(PROPS.choose(rng).unwrap()), b));
        }
    }
    facts
}

/// A random inference problem: up to `max_rules` productive rules taken from
/// the extraction of a random schema, plus random instance data.
pub fn random_instance(rng: &mut impl Rng, max_rules: usize, max_individuals: usize) -> (Vec<Rule>, FactBase) {
    let mut rules = Vec::new();
    for _ in 0..50 {
        let model = random_model(rng, 12);
        rules = extract_all(&model).rules.into_iter().filter(is_productive).collect();
        if !rules.is_empty() {
            break;
        }
    }
    rules.shuffle(rng);
    rules.truncate(rng.gen_range(1..=max_rules));
    let individuals = rng.gen_range(1..=max_individuals);
    let count = rng.gen_range(1..=3 * individuals);
    (rules, random_facts(rng, individuals, count))
}

/// Saturates `initial` by trying every rule under every assignment of
/// individuals to ?x, ?y, ?z until nothing changes. Constraint rules are
/// ignored.
pub fn naive_saturate(rules: &[Rule], initial: &FactBase) -> BTreeSet<Fact> {
    let mut facts: BTreeSet<Fact> = initial.iter().cloned().collect();
    let mut domain: BTreeSet<Iri> = BTreeSet::new();
    for f in &facts {
        match f {
            Fact::Membership { individual, .. }
            | Fact::NegMembership { individual, .. }
            | Fact::FeatureExpected { individual, .. } => {
                domain.insert(individual.clone());
            }
            Fact::Link { subject, object, .. } => {
                domain.insert(subject.clone());
                if let LinkObject::Individual(o) = object {
                    domain.insert(o.clone());
                }
            }
        }
    }
    let domain: Vec<Iri> = domain.into_iter().collect();
    let productive: Vec<&Rule> = rules.iter().filter(|r| is_productive(r)).collect();
    loop {
        let mut fresh = Vec::new();
        for rule in &productive {
            for x in &domain {
                for y in &domain {
                    for z in &domain {
                        let env = [x, y, z];
                        if rule.antecedent().iter().all(|a| holds(a, &env, &facts)) {
                            for c in rule.consequent().iter().filter(|a| !a.is_schema()) {
                                fresh.push(ground(c, &env));
                            }
                        }
                    }
                }
            }
        }
        let before = facts.len();
        facts.extend(fresh);
        if facts.len() == before {
            return facts;
        }
    }
}

fn value<'a>(t: &'a Term, env: &[&'a Iri; 3]) -> &'a Iri {
    match t {
        Term::Var(v) => env[v.index()],
        other => other.iri().expect("constant term"),
    }
}

fn link_object(subject: &Term, object: &Term, env: &[&Iri; 3]) -> LinkObject {
    match (subject, object) {
        (Term::Var(_), Term::Class(c)) => LinkObject::Class(c.clone()),
        _ => LinkObject::Individual(value(object, env).clone()),
    }
}

fn ground(atom: &Atom, env: &[&Iri; 3]) -> Fact {
    match atom {
        Atom::IsA { subject, class } => Fact::isa(value(subject, env).clone(), value(class, env).clone()),
        Atom::Link { subject, property, object } => Fact::Link {
            subject: value(subject, env).clone(),
            property: value(property, env).clone(),
            object: link_object(subject, object, env),
        },
        Atom::HasFeature { subject, feature } => Fact::FeatureExpected {
            individual: value(subject, env).clone(),
            feature: feature.clone(),
        },
        other => panic!("cannot ground {other}"),
    }
}

fn holds(atom: &Atom, env: &[&Iri; 3], facts: &BTreeSet<Fact>) -> bool {
    match atom {
        Atom::Not(inner) => !holds(inner, env, facts),
        a if a.is_schema() => true,
        a => facts.contains(&ground(a, env)),
    }
}

/// Brute-force count of the rules each pattern should produce, checking
/// each template's guard over all tuples of the vocabulary.
pub fn brute_force_counts(m: &OntologyModel) -> BTreeMap<&'static str, usize> {
    let subs: BTreeSet<(Iri, Iri)> = m
        .axioms()
        .iter()
        .filter_map(|a| match a {
            Axiom::SubClassOf { sub, sup } => Some((sub.clone(), sup.clone())),
            _ => None,
        })
        .collect();
    let equivs: BTreeSet<(Iri, Iri)> = m
        .axioms()
        .iter()
        .filter_map(|a| match a {
            Axiom::EquivalentClass { a, b } => Some((a.clone(), b.clone())),
            _ => None,
        })
        .collect();
    let classes: Vec<&Iri> = m.classes().iter().collect();
    let props: Vec<_> = m.properties().collect();
    let mut counts = BTreeMap::new();

    counts.insert(
        "class-feature",
        classes
            .iter()
            .filter(|c| {
                props
                    .iter()
                    .any(|p| p.kind == PropertyKind::Datatype && p.domain.as_ref() == Some(**c))
            })
            .count(),
    );

    // both orientations of every equivalence, each with every superclass of
    // the far side other than the near side itself
    let mut inherit = BTreeSet::new();
    for (a, b) in &equivs {
        for (near, far) in [(a, b), (b, a)] {
            for (s, sup) in &subs {
                if s == far && sup != near {
                    inherit.insert((near.clone(), far.clone(), sup.clone()));
                }
            }
        }
    }
    counts.insert("equivalence-inheritance", inherit.len());

    let annotated: Vec<_> = props
        .iter()
        .filter(|p| p.kind != PropertyKind::Datatype && p.domain.is_some() && p.range.is_some())
        .collect();
    counts.insert("domain-range-identification", annotated.len());
    counts.insert("cooccurrence", annotated.len());

    let mut chains = 0;
    for a in &classes {
        for b in &classes {
            for c in &classes {
                let distinct = a != b && b != c && a != c;
                if distinct && subs.contains(&((*a).clone(), (*b).clone())) && subs.contains(&((*b).clone(), (*c).clone())) {
                    chains += 1;
                }
            }
        }
    }
    counts.insert("subclass-transitivity", chains);

    let mut propagation = 0;
    for p in &annotated {
        let range = p.range.as_ref().unwrap();
        propagation += subs.iter().filter(|(s, _)| s == range).count();
    }
    counts.insert("relation-propagation", propagation);

    counts.insert(
        "subproperty-lift",
        m.axioms().iter().filter(|a| matches!(a, Axiom::SubPropertyOf { .. })).count(),
    );

    // a property whose domain equals its range yields one rule, not two
    let mut symmetric = BTreeSet::new();
    for p in props.iter().filter(|p| p.kind == PropertyKind::Symmetric) {
        if let (Some(d), Some(r)) = (&p.domain, &p.range) {
            symmetric.insert((&p.iri, d, r));
            symmetric.insert((&p.iri, r, d));
        }
    }
    counts.insert("symmetric", symmetric.len());

    let mut transitive = 0;
    for t in props.iter().filter(|p| p.kind == PropertyKind::Transitive) {
        transitive += 1;
        let links: BTreeSet<(&Iri, &Iri)> = m
            .axioms()
            .iter()
            .filter_map(|a| match a {
                Axiom::ClassLink { subject, property, object } if property == &t.iri && subject != object => {
                    Some((subject, object))
                }
                _ => None,
            })
            .collect();
        let mut grounded = BTreeSet::new();
        for (a, b) in &links {
            for (b2, c) in &links {
                if b2 == b && c != a {
                    grounded.insert((*a, *b, *c));
                }
            }
        }
        transitive += grounded.len();
    }
    counts.insert("transitive-property", transitive);

    counts.insert(
        "sole-partof",
        classes
            .iter()
            .filter(|w| subs.iter().filter(|(_, sup)| sup == **w).count() == 1)
            .count(),
    );

    counts.insert(
        "allvaluesfrom",
        m.axioms().iter().filter(|a| matches!(a, Axiom::AllValuesFrom { .. })).count(),
    );
    counts.insert(
        "intersection-decomposition",
        m.axioms().iter().filter(|a| matches!(a, Axiom::IntersectionOf { .. })).count(),
    );

    // rules are keyed by (property, from, to), so axioms sharing a side collapse
    let mut inverse = BTreeSet::new();
    for a in m.axioms() {
        if let Axiom::InverseOf { property, inverse: q } = a {
            let p = m.property(property).unwrap();
            if let (Some(d), Some(r)) = (&p.domain, &p.range) {
                inverse.insert((property, d, r));
                inverse.insert((q, r, d));
            }
        }
    }
    counts.insert("inverse", inverse.len());
    counts
}

/// True if some assignment over `domain` satisfies the antecedent of `rule`
/// in `known` and instantiates one of its consequents to `fact`.
pub fn justifies(rule: &Rule, fact: &Fact, known: &BTreeSet<Fact>, domain: &[Iri]) -> bool {
    for x in domain {
        for y in domain {
            for z in domain {
                let env = [x, y, z];
                if rule.antecedent().iter().all(|a| holds(a, &env, known))
                    && rule
                        .consequent()
                        .iter()
                        .filter(|a| !a.is_schema())
                        .any(|c| &ground(c, &env) == fact)
                {
                    return true;
                }
            }
        }
    }
    false
}
