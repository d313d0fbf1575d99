//! SAWSDL output: the confirmed plan written into both WSDL documents as
//! `sawsdl:modelReference` IRIs plus expression attributes, and read back.

mod extract;
mod insert;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::mapping::{parse_data_expr_syntax, parse_operation_expr_syntax, validate_plan, MatchingPlan, ValidationReport};
use crate::wsdl::{Leaf, Operation, ServiceDescription};

pub use extract::{check_references, extract_plan, extract_plan_from, ExtractError, ExtractedPlan, ReferenceCheck};
use insert::{Edit, Insertions, Prefixes};

pub const SAWSDL_NS: &str = "http://www.w3.org/ns/sawsdl";
/// Namespace of the `opExpr`, `inMap` and `outMap` extension attributes.
pub const SUBST_NS: &str = "urn:wsmatch:substitution:1.0";

#[derive(Debug, thiserror::Error)]
pub enum AnnotateError {
    #[error("nothing to annotate")]
    EmptyPlan,
    #[error("plan does not validate ({} errors)", .0.errors().count())]
    Invalid(ValidationReport),
    #[error("operation {operation} has no position in the {document} document")]
    MissingOperation { document: &'static str, operation: String },
    #[error("the {0} document already carries substitution annotations")]
    AlreadyAnnotated(&'static str),
    #[error("the {document} document cannot be re-read: {message}")]
    Document { document: &'static str, message: String },
}

/// One entry of an `inMap` / `outMap` attribute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    /// Substituted operation.
    pub operation: String,
    /// Substituent operation whose input is computed (`inMap` only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub leaf: String,
    pub expr: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Document {
    Substituted,
    Substituent,
}

impl Document {
    fn label(self) -> &'static str {
        match self {
            Document::Substituted => "substituted",
            Document::Substituent => "substituent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestEntry {
    pub document: Document,
    /// `operation <name>` or `element <declared name>`.
    pub target: String,
    pub model_reference: Vec<String>,
    /// Extension attributes written next to the model reference.
    pub attributes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotatedWsdlPair {
    pub substituted_doc: String,
    pub substituent_doc: String,
    pub manifest: Vec<ManifestEntry>,
    /// Locations of the originals, used to resolve imports when re-reading.
    #[serde(default)]
    pub substituted_uri: String,
    #[serde(default)]
    pub substituent_uri: String,
}

/// IRI of a flattened leaf: `tns#Operation/input/Root/.../Leaf`.
pub fn leaf_iri(service: &ServiceDescription, op: &Operation, direction: &str, leaf: &Leaf) -> String {
    format!("{}/{direction}/{}", service.operation_iri(op), leaf.path_string())
}

/// Annotations gathered for one element before rendering.
#[derive(Default)]
struct Pending {
    refs: BTreeSet<String>,
    op_expr: Option<String>,
    in_map: Vec<MapEntry>,
    out_map: Vec<MapEntry>,
    label: String,
}

/// Where an annotation lands: an operation (through `sawsdl:attrExtensions`)
/// or a schema declaration start tag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Site {
    Operation(String),
    Declaration(usize),
}

struct DocumentAnnotations<'s> {
    service: &'s ServiceDescription,
    which: Document,
    sites: BTreeMap<Site, Pending>,
}

impl<'s> DocumentAnnotations<'s> {
    fn new(service: &'s ServiceDescription, which: Document) -> Self {
        Self {
            service,
            which,
            sites: BTreeMap::new(),
        }
    }

    fn operation(&mut self, op: &Operation) -> &mut Pending {
        let p = self.sites.entry(Site::Operation(op.wsdl_id.clone())).or_default();
        p.label = format!("operation {}", op.name);
        p
    }

    /// The leaf's own declaration when it lives in this document, its
    /// operation otherwise.
    fn leaf(&mut self, op: &Operation, leaf: &Leaf) -> &mut Pending {
        match &leaf.span {
            Some(span) => {
                let p = self.sites.entry(Site::Declaration(span.start)).or_default();
                if p.label.is_empty() {
                    p.label = format!("element {}", leaf.path.last().map(String::as_str).unwrap_or_default());
                }
                p
            }
            None => self.operation(op),
        }
    }

    fn render(self) -> Result<(String, Vec<ManifestEntry>), AnnotateError> {
        let doc_label = self.which.label();
        let raw = &self.service.raw_document;
        if raw.contains(SUBST_NS) {
            return Err(AnnotateError::AlreadyAnnotated(doc_label));
        }
        let prefixes = Prefixes::choose(raw).map_err(|message| AnnotateError::Document {
            document: doc_label,
            message,
        })?;
        let mut edits = Insertions::default();
        let mut manifest = Vec::new();
        for (site, pending) in self.sites {
            let mut attrs: Vec<(String, String)> = Vec::new();
            if !pending.refs.is_empty() {
                attrs.push((
                    format!("{}:modelReference", prefixes.sawsdl),
                    pending.refs.iter().cloned().collect::<Vec<_>>().join(" "),
                ));
            }
            if let Some(e) = &pending.op_expr {
                attrs.push((format!("{}:opExpr", prefixes.subst), e.clone()));
            }
            for (name, entries) in [("inMap", &pending.in_map), ("outMap", &pending.out_map)] {
                if !entries.is_empty() {
                    attrs.push((
                        format!("{}:{name}", prefixes.subst),
                        serde_json::to_string(entries).expect("map entries serialize"),
                    ));
                }
            }
            if attrs.is_empty() {
                continue;
            }
            match &site {
                Site::Operation(id) => {
                    let op = self.service.operation(id).expect("site built from service");
                    let span = op.span.clone().ok_or_else(|| AnnotateError::MissingOperation {
                        document: doc_label,
                        operation: op.name.clone(),
                    })?;
                    edits.push(Edit::child(raw, span, &prefixes, &attrs));
                }
                Site::Declaration(start) => edits.push(Edit::attributes(raw, *start, &attrs)),
            }
            manifest.push(ManifestEntry {
                document: self.which,
                target: pending.label,
                model_reference: pending.refs.into_iter().collect(),
                attributes: attrs
                    .into_iter()
                    .filter(|(k, _)| !k.ends_with(":modelReference"))
                    .map(|(k, v)| (k.split_once(':').map_or(k.clone(), |(_, l)| l.to_string()), v))
                    .collect(),
            });
        }
        edits.push(Edit::namespaces(raw, &prefixes));
        Ok((edits.apply(raw), manifest))
    }
}

/// Writes `plan` into copies of both documents.
pub fn annotate_pair(
    substituted: &ServiceDescription,
    substituent: &ServiceDescription,
    plan: &MatchingPlan,
) -> Result<AnnotatedWsdlPair, AnnotateError> {
    if plan.is_empty() {
        return Err(AnnotateError::EmptyPlan);
    }
    let report = validate_plan(plan, substituted, substituent);
    if report.has_errors() {
        return Err(AnnotateError::Invalid(report));
    }

    let mut a = DocumentAnnotations::new(substituted, Document::Substituted);
    let mut b = DocumentAnnotations::new(substituent, Document::Substituent);

    for (name, op_plan) in &plan.operations {
        let x = substituted.operation(name).expect("validated");
        let expr = parse_operation_expr_syntax(&op_plan.expr).expect("validated");
        let targets: Vec<&Operation> = expr
            .operations()
            .iter()
            .map(|n| substituent.operation(n).expect("validated"))
            .collect();

        let site = a.operation(x);
        site.op_expr = Some(op_plan.expr.clone());
        site.refs.extend(targets.iter().map(|y| substituent.operation_iri(y)));
        for y in &targets {
            b.operation(y).refs.insert(substituted.operation_iri(x));
        }

        for (target, leaves) in &op_plan.inputs {
            let y = substituent.operation(target).expect("validated");
            for (key, text) in leaves {
                let leaf = y.input.leaf(key).expect("validated");
                let peers: Vec<String> = parse_data_expr_syntax(text)
                    .expect("validated")
                    .paths()
                    .iter()
                    .filter_map(|r| x.input.leaf(&r.key))
                    .map(|l| leaf_iri(substituted, x, "input", l))
                    .collect();
                let site = b.leaf(y, leaf);
                site.refs.extend(peers);
                site.in_map.push(MapEntry {
                    operation: x.name.clone(),
                    target: Some(y.name.clone()),
                    leaf: key.clone(),
                    expr: text.clone(),
                });
            }
        }

        for (key, text) in &op_plan.outputs {
            let leaf = x.output.leaf(key).expect("validated");
            let parsed = parse_data_expr_syntax(text).expect("validated");
            let mut peers = Vec::new();
            for r in parsed.paths() {
                let sources = targets
                    .iter()
                    .filter(|y| r.operation.as_deref().is_none_or(|q| q == y.name));
                for y in sources {
                    if let Some(l) = y.output.leaf(&r.key) {
                        peers.push(leaf_iri(substituent, y, "output", l));
                    }
                }
            }
            let site = a.leaf(x, leaf);
            site.refs.extend(peers);
            site.out_map.push(MapEntry {
                operation: x.name.clone(),
                target: None,
                leaf: key.clone(),
                expr: text.clone(),
            });
        }
    }

    let (substituted_doc, mut manifest) = a.render()?;
    let (substituent_doc, more) = b.render()?;
    manifest.extend(more);
    Ok(AnnotatedWsdlPair {
        substituted_doc,
        substituent_doc,
        manifest,
        substituted_uri: substituted.source_uri.clone(),
        substituent_uri: substituent.source_uri.clone(),
    })
}
