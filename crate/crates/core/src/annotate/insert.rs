//! Textual edits on the original document, so that everything outside the
//! inserted annotations stays byte-for-byte unchanged.

use std::collections::BTreeSet;
use std::ops::Range;

use roxmltree::{Document, ParsingOptions};

use super::{SAWSDL_NS, SUBST_NS};

pub(super) struct Prefixes {
    pub sawsdl: String,
    pub subst: String,
    declare_sawsdl: bool,
}

impl Prefixes {
    /// Reuses a root-level `sawsdl` binding when present; otherwise picks
    /// prefixes not bound anywhere in the document.
    pub fn choose(raw: &str) -> Result<Self, String> {
        let opts = ParsingOptions {
            allow_dtd: true,
            ..ParsingOptions::default()
        };
        let doc = Document::parse_with_options(raw, opts).map_err(|e| e.to_string())?;
        let mut used = BTreeSet::new();
        for node in doc.descendants().filter(|n| n.is_element()) {
            for ns in node.namespaces() {
                if let Some(p) = ns.name() {
                    used.insert(p.to_string());
                }
            }
        }
        let existing = doc
            .root_element()
            .namespaces()
            .find(|ns| ns.uri() == SAWSDL_NS)
            .and_then(|ns| ns.name().map(str::to_string));
        let fresh = |base: &str, used: &BTreeSet<String>| {
            std::iter::once(base.to_string())
                .chain((1..).map(|i| format!("{base}{i}")))
                .find(|p| !used.contains(p))
                .expect("unbounded candidates")
        };
        let (sawsdl, declare_sawsdl) = match existing {
            Some(p) => (p, false),
            None => {
                let p = fresh("sawsdl", &used);
                used.insert(p.clone());
                (p, true)
            }
        };
        let subst = fresh("subst", &used);
        Ok(Self {
            sawsdl,
            subst,
            declare_sawsdl,
        })
    }
}

pub(super) struct Edit {
    at: usize,
    remove: usize,
    text: String,
}

fn escape_attr(v: &str) -> String {
    let mut out = String::with_capacity(v.len());
    for c in v.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

fn render_attrs(attrs: &[(String, String)]) -> String {
    attrs
        .iter()
        .map(|(k, v)| format!(" {k}=\"{}\"", escape_attr(v)))
        .collect()
}

/// Position of the `>` closing the start tag beginning at `start`, and
/// whether the tag is self-closing.
fn start_tag_end(raw: &str, start: usize) -> (usize, bool) {
    let bytes = raw.as_bytes();
    let mut quote: Option<u8> = None;
    for (i, &b) in bytes.iter().enumerate().skip(start + 1) {
        match (quote, b) {
            (Some(q), c) if c == q => quote = None,
            (Some(_), _) => {}
            (None, b'"' | b'\'') => quote = Some(b),
            (None, b'>') => return (i, bytes[i - 1] == b'/'),
            _ => {}
        }
    }
    (raw.len(), false)
}

fn line_indent(raw: &str, at: usize) -> &str {
    let line_start = raw[..at].rfind('\n').map_or(0, |i| i + 1);
    let prefix = &raw[line_start..at];
    let trimmed = prefix.len() - prefix.trim_start().len();
    &prefix[..trimmed]
}

impl Edit {
    /// Extra attributes on the start tag at `start`.
    pub fn attributes(raw: &str, start: usize, attrs: &[(String, String)]) -> Self {
        let (end, self_closing) = start_tag_end(raw, start);
        Self {
            at: if self_closing { end - 1 } else { end },
            remove: 0,
            text: render_attrs(attrs),
        }
    }

    /// A `sawsdl:attrExtensions` child as the first child of the element at `span`.
    pub fn child(raw: &str, span: Range<usize>, prefixes: &Prefixes, attrs: &[(String, String)]) -> Self {
        let (end, self_closing) = start_tag_end(raw, span.start);
        let indent = line_indent(raw, span.start);
        let child = format!("<{}:attrExtensions{}/>", prefixes.sawsdl, render_attrs(attrs));
        if self_closing {
            let qname: String = raw[span.start + 1..]
                .chars()
                .take_while(|c| !c.is_whitespace() && *c != '/' && *c != '>')
                .collect();
            Self {
                at: end - 1,
                remove: 2,
                text: format!(">\n{indent}  {child}\n{indent}</{qname}>"),
            }
        } else {
            Self {
                at: end + 1,
                remove: 0,
                text: format!("\n{indent}  {child}"),
            }
        }
    }

    /// Namespace declarations on the root element.
    pub fn namespaces(raw: &str, prefixes: &Prefixes) -> Self {
        let opts = ParsingOptions {
            allow_dtd: true,
            ..ParsingOptions::default()
        };
        let root_start = Document::parse_with_options(raw, opts)
            .map(|d| d.root_element().range().start)
            .unwrap_or(0);
        let mut attrs = Vec::new();
        if prefixes.declare_sawsdl {
            attrs.push((format!("xmlns:{}", prefixes.sawsdl), SAWSDL_NS.to_string()));
        }
        attrs.push((format!("xmlns:{}", prefixes.subst), SUBST_NS.to_string()));
        Self::attributes(raw, root_start, &attrs)
    }
}

#[derive(Default)]
pub(super) struct Insertions {
    edits: Vec<Edit>,
}

impl Insertions {
    pub fn push(&mut self, edit: Edit) {
        self.edits.push(edit);
    }

    pub fn apply(mut self, raw: &str) -> String {
        self.edits.sort_by_key(|e| e.at);
        let mut out = String::with_capacity(raw.len() + self.edits.iter().map(|e| e.text.len()).sum::<usize>());
        let mut cursor = 0;
        for e in &self.edits {
            out.push_str(&raw[cursor..e.at]);
            out.push_str(&e.text);
            cursor = e.at + e.remove;
        }
        out.push_str(&raw[cursor..]);
        out
    }
}
