//! Line-oriented instance data.
//!
//! ```text
//! # comment
//! isa(fox1, Fox)
//! link(latgale, subAreaOf, latvia)
//! classlink(ann, colleagueOf, Engineer)
//! feature(car1, Engine)
//! not isa(john, Human)
//! ```

use crate::diagnostics::{Diagnostic, Location};
use crate::engine::{Fact, FactBase, LinkObject};
use crate::error::ParseError;
use crate::iri::Iri;

#[derive(Debug, Clone)]
pub struct ParsedFacts {
    pub facts: FactBase,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn parse_fact_base(input: &str, name: &str) -> Result<ParsedFacts, ParseError> {
    let mut facts = FactBase::new();
    let mut diagnostics = Vec::new();
    for (n, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let column = raw.len() - raw.trim_start().len() + 1;
        let location = Location::new(n + 1, column);
        match parse_line(line) {
            Ok(fact) => {
                if !facts.insert(fact.clone()) {
                    diagnostics.push(Diagnostic::warning(location, format!("duplicate fact {fact}")));
                }
            }
            Err(msg) => diagnostics.push(Diagnostic::error(location, msg)),
        }
    }
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(ParseError {
            name: name.to_string(),
            diagnostics,
        });
    }
    Ok(ParsedFacts { facts, diagnostics })
}

fn parse_line(line: &str) -> Result<Fact, String> {
    let (negated, body) = match line.strip_prefix("not ") {
        Some(rest) => (true, rest.trim_start()),
        None => (false, line),
    };
    let open = body.find('(').ok_or_else(|| format!("expected '(' in {line:?}"))?;
    let head = body[..open].trim();
    let rest = body[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| format!("expected ')' at end of {line:?}"))?;
    let args = rest
        .split(',')
        .map(|a| ident(a.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let found = args.len();
    let arity = |n: usize| {
        if found == n {
            Ok(())
        } else {
            Err(format!("{head} takes {n} arguments, found {found}"))
        }
    };
    let mut args = args.into_iter();
    let mut next = || args.next().expect("arity checked");
    match (negated, head) {
        (false, "isa") => {
            arity(2)?;
            Ok(Fact::isa(next(), next()))
        }
        (true, "isa") => {
            arity(2)?;
            Ok(Fact::NegMembership {
                individual: next(),
                class: next(),
            })
        }
        (false, "link") => {
            arity(3)?;
            Ok(Fact::link(next(), next(), next()))
        }
        (false, "classlink") => {
            arity(3)?;
            Ok(Fact::Link {
                subject: next(),
                property: next(),
                object: LinkObject::Class(next()),
            })
        }
        (false, "feature") => {
            arity(2)?;
            Ok(Fact::FeatureExpected {
                individual: next(),
                feature: next(),
            })
        }
        (true, other) => Err(format!("only isa facts can be negated, found {other:?}")),
        (false, other) => Err(format!("unknown fact kind {other:?}")),
    }
}

fn ident(s: &str) -> Result<Iri, String> {
    if s.contains(['(', ')']) {
        return Err(format!("identifier {s:?} contains a parenthesis"));
    }
    Iri::new(s).map_err(|e| e.to_string())
}

/// One fact per line, in sorted order.
pub fn print_fact_base(facts: &FactBase) -> String {
    facts.iter().map(|f| format!("{f}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn memberships() {
        let p = parse_fact_base("isa(fox1, Fox)\nisa(hole1, Hole)\n", "f").unwrap();
        assert_eq!(p.facts.len(), 2);
        assert!(p.facts.contains(&Fact::isa(iri("fox1"), iri("Fox"))));
    }

    #[test]
    fn empty_input() {
        assert!(parse_fact_base("", "f").unwrap().facts.is_empty());
        assert!(parse_fact_base("# only a comment\n\n", "f").unwrap().facts.is_empty());
    }

    #[test]
    fn link_round_trips() {
        let p = parse_fact_base("link(latgale, subAreaOf, latvia)", "f").unwrap();
        assert_eq!(p.facts.len(), 1);
        let again = parse_fact_base(&print_fact_base(&p.facts), "f").unwrap();
        assert_eq!(again.facts, p.facts);
    }

    #[test]
    fn extended_forms() {
        let p = parse_fact_base(
            "classlink(ann, colleagueOf, Engineer)\nfeature(c, Engine)\nnot isa(john, Human)\n",
            "f",
        )
        .unwrap();
        assert!(p.facts.contains(&Fact::Link {
            subject: iri("ann"),
            property: iri("colleagueOf"),
            object: LinkObject::Class(iri("Engineer")),
        }));
        assert!(p.facts.contains(&Fact::NegMembership {
            individual: iri("john"),
            class: iri("Human")
        }));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_fact_base("isa(a, A)\n\nisa(a)\nlink(a b, c)\n", "f").unwrap_err();
        let lines: Vec<usize> = err.errors().map(|d| d.location.line).collect();
        assert_eq!(lines, vec![3, 4]);
    }

    #[test]
    fn malformed_lines() {
        for bad in ["isa(a, )", "isa a, A", "isa(a, A", "frob(a, b)", "not link(a, p, b)", "isa(a, (b))"] {
            assert!(parse_fact_base(bad, "f").is_err(), "{bad}");
        }
    }

    #[test]
    fn duplicates_warn() {
        let p = parse_fact_base("isa(a, A)\nisa(a,A)\n", "f").unwrap();
        assert_eq!(p.facts.len(), 1);
        assert_eq!(p.diagnostics.len(), 1);
    }

    fn ident_strategy() -> impl Strategy<Value = Iri> {
        "[A-Za-z][A-Za-z0-9_:.#-]{0,8}".prop_map(|s| Iri::new(&s).unwrap())
    }

    fn fact_strategy() -> impl Strategy<Value = Fact> {
        let i = ident_strategy;
        prop_oneof![
            (i(), i()).prop_map(|(a, b)| Fact::isa(a, b)),
            (i(), i(), i()).prop_map(|(a, p, b)| Fact::link(a, p, b)),
            (i(), i(), i()).prop_map(|(a, p, c)| Fact::Link {
                subject: a,
                property: p,
                object: LinkObject::Class(c)
            }),
            (i(), i()).prop_map(|(a, f)| Fact::FeatureExpected { individual: a, feature: f }),
            (i(), i()).prop_map(|(a, c)| Fact::NegMembership { individual: a, class: c }),
        ]
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(facts in proptest::collection::vec(fact_strategy(), 0..20)) {
            let base: FactBase = facts.into_iter().collect();
            let parsed = parse_fact_base(&print_fact_base(&base), "f").unwrap();
            prop_assert_eq!(parsed.facts, base);
        }
    }
}
