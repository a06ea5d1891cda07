//! Located XML events on top of `quick-xml`, plus a small element tree.
//!
//! Inputs whose root element is not `rdf:RDF` are wrapped in a synthetic
//! root first; reported locations always refer to the original text.

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::diagnostics::{Diagnostic, LineIndex, Location};

const ROOT: &str = "rdf:RDF";
const OPEN_ROOT: &str = "<rdf:RDF>";
const CLOSE_ROOT: &str = "</rdf:RDF>";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    StartElement,
    EndElement,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseEvent {
    pub kind: EventKind,
    /// Qualified element name; the text content for `Text` events.
    pub name: String,
    pub attributes: Vec<(String, String)>,
    pub location: Location,
}

/// Source text, possibly wrapped, with the offset bookkeeping to map back.
struct Prepared<'a> {
    text: std::borrow::Cow<'a, str>,
    insert_at: usize,
    inserted: usize,
    original_len: usize,
}

impl Prepared<'_> {
    fn original_offset(&self, pos: usize) -> usize {
        if pos < self.insert_at {
            pos
        } else if pos < self.insert_at + self.inserted {
            self.insert_at
        } else {
            (pos - self.inserted).min(self.original_len)
        }
    }
}

fn prepare(input: &str) -> Prepared<'_> {
    let body = input.strip_prefix('\u{feff}').unwrap_or(input);
    let bom = input.len() - body.len();
    let (insert_at, root_offset) = scan_prolog(body);
    let has_root = body[root_offset..]
        .strip_prefix('<')
        .and_then(|rest| rest.strip_prefix(ROOT))
        .is_some_and(|rest| {
            rest.chars()
                .next()
                .is_some_and(|c| c == '>' || c == '/' || c.is_whitespace())
        });
    if has_root {
        return Prepared {
            text: input.into(),
            insert_at: input.len(),
            inserted: 0,
            original_len: input.len(),
        };
    }
    let insert_at = bom + insert_at;
    let mut text = String::with_capacity(input.len() + OPEN_ROOT.len() + CLOSE_ROOT.len());
    text.push_str(&input[..insert_at]);
    text.push_str(OPEN_ROOT);
    text.push_str(&input[insert_at..]);
    text.push_str(CLOSE_ROOT);
    Prepared {
        text: text.into(),
        insert_at,
        inserted: OPEN_ROOT.len(),
        original_len: input.len(),
    }
}

/// Returns (end of XML declaration, offset of the first element).
fn scan_prolog(text: &str) -> (usize, usize) {
    let mut pos = 0;
    let mut decl_end = 0;
    loop {
        let rest = &text[pos..];
        let trimmed = rest.trim_start();
        pos += rest.len() - trimmed.len();
        let skip_to = |open: &str, close: &str| {
            trimmed
                .strip_prefix(open)
                .map(|r| r.find(close).map_or(text.len(), |i| pos + open.len() + i + close.len()))
        };
        if let Some(end) = skip_to("<?", "?>") {
            if trimmed.starts_with("<?xml") && decl_end == 0 {
                decl_end = end;
            }
            pos = end;
        } else if let Some(end) = skip_to("<!--", "-->") {
            pos = end;
        } else if let Some(end) = skip_to("<!DOCTYPE", ">") {
            pos = end;
        } else {
            return (decl_end, pos);
        }
    }
}

/// Tokenizes `input` into well-nested located events.
pub fn events(input: &str) -> Result<Vec<ParseEvent>, Diagnostic> {
    let prepared = prepare(input);
    let lines = LineIndex::new(input);
    let locate = |pos: u64| lines.locate(prepared.original_offset(pos as usize));

    let mut reader = Reader::from_str(&prepared.text);
    reader.config_mut().check_end_names = true;
    let mut out = Vec::new();
    let mut open: Vec<(String, Location)> = Vec::new();
    loop {
        let start = reader.buffer_position();
        let event = reader
            .read_event()
            .map_err(|e| Diagnostic::error(locate(reader.error_position()), format!("malformed XML: {e}")))?;
        let location = locate(start);
        match event {
            Event::Start(e) => {
                let ev = start_event(&e, location)?;
                open.push((ev.name.clone(), location));
                out.push(ev);
            }
            Event::Empty(e) => {
                let ev = start_event(&e, location)?;
                let name = ev.name.clone();
                out.push(ev);
                out.push(ParseEvent {
                    kind: EventKind::EndElement,
                    name,
                    attributes: Vec::new(),
                    location,
                });
            }
            Event::End(e) => {
                let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
                open.pop();
                out.push(ParseEvent {
                    kind: EventKind::EndElement,
                    name,
                    attributes: Vec::new(),
                    location,
                });
            }
            Event::Text(t) => {
                let text = t
                    .unescape()
                    .map_err(|e| Diagnostic::error(location, format!("malformed text: {e}")))?;
                if !text.trim().is_empty() {
                    out.push(ParseEvent {
                        kind: EventKind::Text,
                        name: text.trim().to_string(),
                        attributes: Vec::new(),
                        location,
                    });
                }
            }
            Event::CData(t) => {
                let text = String::from_utf8_lossy(&t).into_owned();
                if !text.trim().is_empty() {
                    out.push(ParseEvent {
                        kind: EventKind::Text,
                        name: text,
                        attributes: Vec::new(),
                        location,
                    });
                }
            }
            Event::Eof => break,
            Event::Decl(_) | Event::PI(_) | Event::Comment(_) | Event::DocType(_) => {}
        }
    }
    if let Some((name, location)) = open.pop() {
        return Err(Diagnostic::error(
            location,
            format!("malformed XML: element <{name}> is never closed"),
        ));
    }
    Ok(out)
}

fn start_event(e: &BytesStart<'_>, location: Location) -> Result<ParseEvent, Diagnostic> {
    let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
    if !is_xml_name(&name) {
        return Err(Diagnostic::error(location, format!("malformed XML: invalid element name {name:?}")));
    }
    let mut attributes = Vec::new();
    for attr in e.attributes() {
        let attr = attr.map_err(|err| {
            Diagnostic::error(location, format!("malformed attribute on <{name}>: {err}"))
        })?;
        let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        let value = attr.unescape_value().map_err(|err| {
            Diagnostic::error(location, format!("malformed attribute {key} on <{name}>: {err}"))
        })?;
        attributes.push((key, value.into_owned()));
    }
    Ok(ParseEvent {
        kind: EventKind::StartElement,
        name,
        attributes,
        location,
    })
}

/// Approximates the XML `Name` production; enough to catch run-together
/// attributes such as `owl:Classrdf:ID="Car"`.
fn is_xml_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    let start = |c: char| c.is_alphabetic() || c == '_' || c == ':';
    start(first) && chars.all(|c| start(c) || c.is_alphanumeric() || matches!(c, '-' | '.'))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub attributes: Vec<(String, String)>,
    pub children: Vec<Element>,
    pub text: String,
    pub location: Location,
}

impl Element {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Builds the element tree rooted at the document element.
pub fn parse_tree(input: &str) -> Result<Element, Diagnostic> {
    let mut stack: Vec<Element> = Vec::new();
    let mut root = None;
    for ev in events(input)? {
        match ev.kind {
            EventKind::StartElement => stack.push(Element {
                name: ev.name,
                attributes: ev.attributes,
                children: Vec::new(),
                text: String::new(),
                location: ev.location,
            }),
            EventKind::EndElement => {
                let done = stack.pop().expect("events are well nested");
                match stack.last_mut() {
                    Some(parent) => parent.children.push(done),
                    None if root.is_none() => root = Some(done),
                    None => {
                        return Err(Diagnostic::error(
                            done.location,
                            "malformed XML: more than one root element",
                        ))
                    }
                }
            }
            EventKind::Text => {
                if let Some(top) = stack.last_mut() {
                    top.text.push_str(&ev.name);
                }
            }
        }
    }
    Ok(root.unwrap_or_else(|| Element {
        name: ROOT.to_string(),
        attributes: Vec::new(),
        children: Vec::new(),
        text: String::new(),
        location: Location::new(1, 1),
    }))
}
