//! A small, dependency-free reader for presentation/content MathML fragments.
//!
//! Only the subset needed for identifier extraction is supported: elements,
//! attributes (skipped), text, character references, comments, processing
//! instructions and CDATA. Namespace prefixes (`m:mi`) are stripped.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Element { name: String, children: Vec<Node> },
    Text(String),
}

impl Node {
    fn local_name(&self) -> Option<&str> {
        match self {
            Node::Element { name, .. } => Some(name.rsplit(':').next().unwrap_or(name)),
            Node::Text(_) => None,
        }
    }

    /// Concatenated text content of this node and all descendants.
    pub fn text_content(&self) -> String {
        let mut out = String::new();
        self.collect_text(&mut out);
        out
    }

    fn collect_text(&self, out: &mut String) {
        match self {
            Node::Text(t) => out.push_str(t),
            Node::Element { children, .. } => children.iter().for_each(|c| c.collect_text(out)),
        }
    }
}

/// Parse a markup fragment into a forest of top-level nodes.
pub fn parse(input: &str) -> Result<Vec<Node>> {
    let mut parser = Parser { src: input, pos: 0 };
    let mut stack: Vec<(String, Vec<Node>, usize)> = Vec::new();
    let mut roots = Vec::new();

    while parser.pos < input.len() {
        let event = parser.next_event()?;
        let sink = |stack: &mut Vec<(String, Vec<Node>, usize)>, roots: &mut Vec<Node>, node| match stack.last_mut() {
            Some((_, children, _)) => children.push(node),
            None => roots.push(node),
        };
        match event {
            Event::Open { name, self_closing, offset } => {
                if self_closing {
                    sink(&mut stack, &mut roots, Node::Element { name, children: Vec::new() });
                } else {
                    stack.push((name, Vec::new(), offset));
                }
            }
            Event::Close { name, offset } => match stack.pop() {
                Some((open, children, _)) if open == name => {
                    sink(&mut stack, &mut roots, Node::Element { name: open, children });
                }
                Some((open, _, _)) => {
                    return Err(Error::Markup {
                        offset,
                        message: format!("closing tag </{name}> does not match <{open}>"),
                    })
                }
                None => {
                    return Err(Error::Markup {
                        offset,
                        message: format!("closing tag </{name}> without opening tag"),
                    })
                }
            },
            Event::Text(t) => {
                if !t.is_empty() {
                    sink(&mut stack, &mut roots, Node::Text(t));
                }
            }
            Event::Skip => {}
        }
    }

    if let Some((name, _, offset)) = stack.pop() {
        return Err(Error::Markup {
            offset,
            message: format!("element <{name}> is never closed"),
        });
    }
    Ok(roots)
}

const SCRIPTED: &[&str] = &["msub", "msup", "msubsup", "munder", "mover", "munderover", "mmultiscripts"];
const IGNORED: &[&str] = &["annotation", "annotation-xml"];

/// Identifier element contents in document order, normalized.
///
/// For scripted constructs only the base (first child) is visited, so `t²`
/// and `t_i` both yield `t`.
pub fn identifiers(nodes: &[Node]) -> Vec<String> {
    let mut out = Vec::new();
    for node in nodes {
        walk(node, &mut out);
    }
    out
}

fn walk(node: &Node, out: &mut Vec<String>) {
    let Node::Element { children, .. } = node else {
        return;
    };
    let local = node.local_name().unwrap_or_default();
    if IGNORED.contains(&local) {
        return;
    }
    if local == "mi" || local == "ci" {
        if let Some(symbol) = normalize_identifier(&node.text_content()) {
            out.push(symbol);
        }
        return;
    }
    if SCRIPTED.contains(&local) {
        if let Some(base) = children.iter().find(|c| matches!(c, Node::Element { .. })) {
            walk(base, out);
        }
        return;
    }
    for child in children {
        walk(child, out);
    }
}

const GREEK: [(char, &str); 48] = [
    ('α', "alpha"), ('β', "beta"), ('γ', "gamma"), ('δ', "delta"),
    ('ε', "epsilon"), ('ζ', "zeta"), ('η', "eta"), ('θ', "theta"),
    ('ι', "iota"), ('κ', "kappa"), ('λ', "lambda"), ('μ', "mu"),
    ('ν', "nu"), ('ξ', "xi"), ('ο', "omicron"), ('π', "pi"),
    ('ρ', "rho"), ('σ', "sigma"), ('τ', "tau"), ('υ', "upsilon"),
    ('φ', "phi"), ('χ', "chi"), ('ψ', "psi"), ('ω', "omega"),
    ('Α', "Alpha"), ('Β', "Beta"), ('Γ', "Gamma"), ('Δ', "Delta"),
    ('Ε', "Epsilon"), ('Ζ', "Zeta"), ('Η', "Eta"), ('Θ', "Theta"),
    ('Ι', "Iota"), ('Κ', "Kappa"), ('Λ', "Lambda"), ('Μ', "Mu"),
    ('Ν', "Nu"), ('Ξ', "Xi"), ('Ο', "Omicron"), ('Π', "Pi"),
    ('Ρ', "Rho"), ('Σ', "Sigma"), ('Τ', "Tau"), ('Υ', "Upsilon"),
    ('Φ', "Phi"), ('Χ', "Chi"), ('Ψ', "Psi"), ('Ω', "Omega"),
];

/// Spelled-out name of a Greek letter, if `c` is one of the 48 basic forms.
pub fn greek_name(c: char) -> Option<&'static str> {
    GREEK.iter().find(|(g, _)| *g == c).map(|(_, n)| *n)
}

/// Inverse of [`greek_name`].
pub fn greek_char(name: &str) -> Option<char> {
    GREEK.iter().find(|(_, n)| *n == name).map(|(g, _)| *g)
}

/// Single code points are kept verbatim (Greek spelled out); longer
/// identifiers are lowercased. Whitespace-only content yields `None`.
pub fn normalize_identifier(raw: &str) -> Option<String> {
    let trimmed = raw.trim();
    let mut chars = trimmed.chars();
    let first = chars.next()?;
    if chars.next().is_none() {
        return Some(match greek_name(first) {
            Some(name) => name.to_string(),
            None => first.to_string(),
        });
    }
    Some(trimmed.to_lowercase())
}

enum Event {
    Open { name: String, self_closing: bool, offset: usize },
    Close { name: String, offset: usize },
    Text(String),
    Skip,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Markup { offset, message: message.into() })
    }

    fn skip_past(&mut self, terminator: &str, what: &str) -> Result<()> {
        match self.rest().find(terminator) {
            Some(i) => {
                self.pos += i + terminator.len();
                Ok(())
            }
            None => self.err(self.pos, format!("unterminated {what}")),
        }
    }

    fn next_event(&mut self) -> Result<Event> {
        let start = self.pos;
        let rest = self.rest();
        if rest.starts_with("<!--") {
            self.skip_past("-->", "comment")?;
            return Ok(Event::Skip);
        }
        if let Some(body) = rest.strip_prefix("<![CDATA[") {
            return match body.find("]]>") {
                Some(i) => {
                    let text = body[..i].to_string();
                    self.pos += "<![CDATA[".len() + i + 3;
                    Ok(Event::Text(text))
                }
                None => self.err(start, "unterminated CDATA section"),
            };
        }
        if rest.starts_with("<?") || rest.starts_with("<!") {
            self.skip_past(">", "declaration")?;
            return Ok(Event::Skip);
        }
        if let Some(body) = rest.strip_prefix("</") {
            let end = match body.find('>') {
                Some(i) => i,
                None => return self.err(start, "unterminated closing tag"),
            };
            let name = body[..end].trim();
            if !is_name(name) {
                return self.err(start, format!("invalid element name {name:?}"));
            }
            self.pos += 2 + end + 1;
            return Ok(Event::Close { name: name.to_string(), offset: start });
        }
        if let Some(body) = rest.strip_prefix('<') {
            let end = match find_tag_end(body) {
                Some(i) => i,
                None => return self.err(start, "unterminated start tag"),
            };
            let mut inner = &body[..end];
            let self_closing = inner.ends_with('/');
            if self_closing {
                inner = &inner[..inner.len() - 1];
            }
            let name = inner.split(|c: char| c.is_whitespace()).next().unwrap_or_default();
            if !is_name(name) {
                return self.err(start, format!("invalid element name {name:?}"));
            }
            self.pos += 1 + end + 1;
            return Ok(Event::Open { name: name.to_string(), self_closing, offset: start });
        }
        let end = rest.find('<').unwrap_or(rest.len());
        let raw = &rest[..end];
        self.pos += end;
        Ok(Event::Text(decode_entities(raw, start)?))
    }
}

fn find_tag_end(body: &str) -> Option<usize> {
    let mut quote = None;
    for (i, c) in body.char_indices() {
        match (quote, c) {
            (None, '"' | '\'') => quote = Some(c),
            (Some(q), c) if c == q => quote = None,
            (None, '>') => return Some(i),
            _ => {}
        }
    }
    None
}

fn is_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '-' | '_' | '.' | ':'))
}

fn decode_entities(raw: &str, offset: usize) -> Result<String> {
    if !raw.contains('&') {
        return Ok(raw.to_string());
    }
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let after = &rest[amp + 1..];
        let semi = after.find(';').ok_or_else(|| Error::Markup {
            offset: offset + (raw.len() - rest.len()) + amp,
            message: "unterminated character reference".into(),
        })?;
        let entity = &after[..semi];
        let decoded = match entity {
            "lt" => Some('<'),
            "gt" => Some('>'),
            "amp" => Some('&'),
            "quot" => Some('"'),
            "apos" => Some('\''),
            _ if entity.starts_with("#x") || entity.starts_with("#X") => {
                u32::from_str_radix(&entity[2..], 16).ok().and_then(char::from_u32)
            }
            _ if entity.starts_with('#') => entity[1..].parse().ok().and_then(char::from_u32),
            _ => None,
        };
        match decoded {
            Some(c) => out.push(c),
            None => {
                return Err(Error::Markup {
                    offset: offset + (raw.len() - rest.len()) + amp,
                    message: format!("unknown character reference &{entity};"),
                })
            }
        }
        rest = &after[semi + 1..];
    }
    out.push_str(rest);
    Ok(out)
}
