//! WSDL 1.1 service model: a service is a set of operations whose input and
//! output are flattened into one-level sets of root-to-leaf path sentences.

mod flatten;
mod loader;
mod parse;
mod schema;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::text::Sentence;

pub use flatten::{flatten_element, NodeKind, SchemaElementTree};
pub use loader::{resolve_uri, DocumentLoader, FileLoader, NoImports};
pub use parse::{parse_wsdl, parse_wsdl_with};

pub const WSDL_NS: &str = "http://schemas.xmlsoap.org/wsdl/";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema";
pub const SOAP_ENCODING_NS: &str = "http://schemas.xmlsoap.org/soap/encoding/";

/// Complex types are expanded at most this many levels below the root.
pub const MAX_TREE_DEPTH: usize = 8;
/// Nested `wsdl:import` / `xsd:import` / `xsd:include` chains stop here.
pub const MAX_IMPORT_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QName {
    pub namespace: String,
    pub local: String,
}

impl QName {
    pub fn new(namespace: impl Into<String>, local: impl Into<String>) -> Self {
        Self {
            namespace: namespace.into(),
            local: local.into(),
        }
    }
}

impl fmt::Display for QName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.namespace.is_empty() {
            f.write_str(&self.local)
        } else {
            write!(f, "{{{}}}{}", self.namespace, self.local)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum WsdlError {
    #[error("document is not well-formed XML: {0}")]
    Xml(String),
    #[error("not a WSDL document (root element is {0})")]
    NotWsdl(String),
    #[error("unresolved {kind} reference {name}")]
    Unresolved { kind: &'static str, name: QName },
    #[error("unsupported import {uri}: {reason}")]
    Import { uri: String, reason: String },
    #[error("import chain deeper than {MAX_IMPORT_DEPTH} at {0}")]
    ImportDepth(String),
    #[error("no operations found")]
    NoOperations,
    #[error("invalid WSDL: {0}")]
    Invalid(String),
}

/// A flattened leaf: one root-to-leaf path of a schema element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    /// Node names from the root element to the leaf, as declared.
    pub path: Vec<String>,
    pub sentence: Sentence,
    /// Built-in XML Schema type the leaf's value derives from, when known.
    pub xsd_type: Option<String>,
    /// Every node on the path is mandatory.
    pub required: bool,
    pub attribute: bool,
    /// Byte range of the declaring `xsd:element`/`xsd:attribute` in the main document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Range<usize>>,
}

impl Leaf {
    /// The canonical textual key of the leaf: its sentence words joined by spaces.
    pub fn key(&self) -> String {
        self.sentence.text()
    }

    /// `/`-joined declared names, used in IRIs.
    pub fn path_string(&self) -> String {
        self.path.join("/")
    }

    pub fn is_numeric(&self) -> Option<bool> {
        self.xsd_type.as_deref().map(is_numeric_xsd_type)
    }
}

pub fn is_numeric_xsd_type(local: &str) -> bool {
    matches!(
        local,
        "decimal"
            | "integer"
            | "int"
            | "long"
            | "short"
            | "byte"
            | "float"
            | "double"
            | "nonNegativeInteger"
            | "nonPositiveInteger"
            | "positiveInteger"
            | "negativeInteger"
            | "unsignedLong"
            | "unsignedInt"
            | "unsignedShort"
            | "unsignedByte"
    )
}

/// The flattened input or output of an operation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DataSet {
    /// Root element (or part) names the set was flattened from.
    pub source_element: String,
    pub leaves: Vec<Leaf>,
}

impl DataSet {
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.leaves.iter().map(|l| &l.sentence)
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn leaf(&self, key: &str) -> Option<&Leaf> {
        self.leaves.iter().find(|l| l.key() == key)
    }

    pub fn leaf_by_path(&self, path: &str) -> Option<&Leaf> {
        self.leaves.iter().find(|l| l.path_string() == path)
    }

    /// Adds `leaf` unless a leaf with the same sentence exists.
    pub fn push(&mut self, leaf: Leaf) -> bool {
        if leaf.sentence.is_empty() || self.leaves.iter().any(|l| l.sentence.words == leaf.sentence.words) {
            return false;
        }
        self.leaves.push(leaf);
        true
    }

    /// Builds a set directly from path strings; each string is tokenized.
    pub fn from_sentences<I, S>(source: &str, sentences: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = Self {
            source_element: source.to_string(),
            leaves: Vec::new(),
        };
        for s in sentences {
            let raw = s.as_ref();
            set.push(Leaf {
                path: raw.split_whitespace().map(str::to_string).collect(),
                sentence: Sentence::new(raw),
                xsd_type: None,
                required: true,
                attribute: false,
                span: None,
            });
        }
        set
    }

    fn without_spans(&self) -> Self {
        let mut copy = self.clone();
        for leaf in &mut copy.leaves {
            leaf.span = None;
        }
        copy
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operation {
    pub name: String,
    pub name_sentence: Sentence,
    pub input: DataSet,
    pub output: DataSet,
    /// Identifier unique within the service, used to target annotations.
    pub wsdl_id: String,
    pub port_type: String,
    /// Byte range of the `wsdl:operation` element inside its portType.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Range<usize>>,
}

impl Operation {
    /// Operation built directly from name and path sentences; handy for tests
    /// and for callers that do not start from a WSDL document.
    pub fn from_parts<I, O, S, T>(name: &str, inputs: I, outputs: O) -> Self
    where
        I: IntoIterator<Item = S>,
        O: IntoIterator<Item = T>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        Self {
            name: name.to_string(),
            name_sentence: Sentence::new(name),
            input: DataSet::from_sentences(name, inputs),
            output: DataSet::from_sentences(name, outputs),
            wsdl_id: name.to_string(),
            port_type: String::new(),
            span: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ServiceDescription {
    pub name: String,
    pub operations: Vec<Operation>,
    pub source_uri: String,
    pub target_namespace: String,
    /// The document exactly as read; annotation edits a copy of it.
    pub raw_document: String,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl ServiceDescription {
    /// Service assembled from in-memory operations with no backing document.
    pub fn from_operations(name: &str, target_namespace: &str, operations: Vec<Operation>) -> Self {
        Self {
            name: name.to_string(),
            operations,
            source_uri: String::new(),
            target_namespace: target_namespace.to_string(),
            raw_document: String::new(),
            warnings: Vec::new(),
        }
    }

    pub fn operation(&self, wsdl_id: &str) -> Option<&Operation> {
        self.operations.iter().find(|o| o.wsdl_id == wsdl_id)
    }

    pub fn operation_index(&self, wsdl_id: &str) -> Option<usize> {
        self.operations.iter().position(|o| o.wsdl_id == wsdl_id)
    }

    /// IRI naming an operation of this service: `targetNamespace#operation`.
    pub fn operation_iri(&self, op: &Operation) -> String {
        format!("{}#{}", self.target_namespace, op.name)
    }

    /// Equality of the abstract model, ignoring source positions, the raw
    /// document and its location.
    pub fn same_model(&self, other: &Self) -> bool {
        let strip = |ops: &[Operation]| -> Vec<Operation> {
            ops.iter()
                .map(|o| Operation {
                    span: None,
                    input: o.input.without_spans(),
                    output: o.output.without_spans(),
                    ..o.clone()
                })
                .collect()
        };
        self.name == other.name
            && self.target_namespace == other.target_namespace
            && strip(&self.operations) == strip(&other.operations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_collapses_duplicate_sentences() {
        let set = DataSet::from_sentences("x", ["city name", "CityName", "zip"]);
        assert_eq!(set.len(), 2);
        assert!(set.leaf("city name").is_some());
    }

    #[test]
    fn numeric_types() {
        assert!(is_numeric_xsd_type("double"));
        assert!(!is_numeric_xsd_type("string"));
    }
}
