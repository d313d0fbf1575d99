use roxmltree::{Document as XmlDocument, Node, ParsingOptions};
use serde::{Deserialize, Serialize};

use super::{AnnotatedWsdlPair, MapEntry, SAWSDL_NS, SUBST_NS};
use crate::mapping::MatchingPlan;
use crate::wsdl::{parse_wsdl, ServiceDescription, WsdlError, WSDL_NS};

#[derive(Debug, thiserror::Error)]
pub enum ExtractError {
    #[error("the {document} document is not a usable WSDL: {source}")]
    Parse {
        document: &'static str,
        #[source]
        source: WsdlError,
    },
    #[error("garbled annotation in the {document} document: {message}")]
    Garbled { document: &'static str, message: String },
    #[error("dangling reference {0}")]
    Dangling(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractedPlan {
    pub plan: MatchingPlan,
    pub warnings: Vec<String>,
}

pub fn extract_plan(pair: &AnnotatedWsdlPair) -> Result<ExtractedPlan, ExtractError> {
    extract_plan_from(
        &pair.substituted_doc,
        &pair.substituted_uri,
        &pair.substituent_doc,
        &pair.substituent_uri,
    )
}

fn xml<'t>(text: &'t str, document: &'static str) -> Result<XmlDocument<'t>, ExtractError> {
    let opts = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    XmlDocument::parse_with_options(text, opts).map_err(|e| ExtractError::Garbled {
        document,
        message: e.to_string(),
    })
}

/// Checks that an IRI pointing into `peer` names an existing operation and,
/// when it carries a path, an existing leaf.
fn check_iri(iri: &str, peer: &ServiceDescription) -> Result<Option<String>, ExtractError> {
    let Some(fragment) = iri.strip_prefix(&format!("{}#", peer.target_namespace)) else {
        return Ok(None);
    };
    let mut parts = fragment.splitn(3, '/');
    let op_name = parts.next().unwrap_or_default();
    let dangling = || ExtractError::Dangling(iri.to_string());
    let op = peer.operations.iter().find(|o| o.name == op_name).ok_or_else(dangling)?;
    match (parts.next(), parts.next()) {
        (None, _) => {}
        (Some(direction), Some(path)) => {
            let set = match direction {
                "input" => &op.input,
                "output" => &op.output,
                _ => return Err(dangling()),
            };
            set.leaf_by_path(path).ok_or_else(dangling)?;
        }
        (Some(_), None) => return Err(dangling()),
    }
    Ok(Some(op_name.to_string()))
}

fn model_references<'a>(node: Node<'a, '_>) -> Vec<&'a str> {
    node.attribute((SAWSDL_NS, "modelReference"))
        .map(|v| v.split_whitespace().collect())
        .unwrap_or_default()
}

fn map_entries(node: Node, name: &str, document: &'static str) -> Result<Vec<MapEntry>, ExtractError> {
    match node.attribute((SUBST_NS, name)) {
        None => Ok(Vec::new()),
        Some(json) => serde_json::from_str(json).map_err(|e| ExtractError::Garbled {
            document,
            message: format!("{name}: {e}"),
        }),
    }
}

/// Model references of an annotated document, split by whether they point
/// into `peer`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    /// References into `peer`, all of which name an existing operation or leaf.
    pub resolved: Vec<String>,
    /// References into other models, left unchecked.
    pub foreign: Vec<String>,
}

/// Resolves every `sawsdl:modelReference` IRI of `doc` against `peer`.
/// Fails on the first IRI that claims `peer`'s namespace but names nothing.
pub fn check_references(doc: &str, peer: &ServiceDescription) -> Result<ReferenceCheck, ExtractError> {
    let x = xml(doc, "annotated")?;
    let mut out = ReferenceCheck::default();
    for node in x.descendants().filter(|n| n.is_element()) {
        for iri in model_references(node) {
            match check_iri(iri, peer)? {
                Some(_) => out.resolved.push(iri.to_string()),
                None => out.foreign.push(iri.to_string()),
            }
        }
    }
    Ok(out)
}

fn is_wsdl(node: &Node, local: &str) -> bool {
    node.is_element() && node.tag_name().namespace() == Some(WSDL_NS) && node.tag_name().name() == local
}

/// Rebuilds the plan written by [`super::annotate_pair`].
pub fn extract_plan_from(
    substituted_doc: &str,
    substituted_uri: &str,
    substituent_doc: &str,
    substituent_uri: &str,
) -> Result<ExtractedPlan, ExtractError> {
    let sa = parse_wsdl(substituted_doc.as_bytes(), substituted_uri).map_err(|source| ExtractError::Parse {
        document: "substituted",
        source,
    })?;
    let sb = parse_wsdl(substituent_doc.as_bytes(), substituent_uri).map_err(|source| ExtractError::Parse {
        document: "substituent",
        source,
    })?;
    let xa = xml(substituted_doc, "substituted")?;
    let xb = xml(substituent_doc, "substituent")?;

    // every IRI into the peer must resolve, wherever it was written
    for (doc, peer) in [(&xa, &sb), (&xb, &sa)] {
        for node in doc.descendants().filter(|n| n.is_element()) {
            for iri in model_references(node) {
                check_iri(iri, peer)?;
            }
        }
    }

    let mut plan = MatchingPlan::default();
    let mut warnings = Vec::new();

    for port_type in xa.root_element().children().filter(|n| is_wsdl(n, "portType")) {
        for op in port_type.children().filter(|n| is_wsdl(n, "operation")) {
            let name = op.attribute("name").unwrap_or_default();
            for ext in op
                .children()
                .filter(|n| n.is_element() && n.tag_name().namespace() == Some(SAWSDL_NS))
                .filter(|n| n.tag_name().name() == "attrExtensions")
            {
                let targets: Vec<String> = model_references(ext)
                    .into_iter()
                    .filter_map(|iri| check_iri(iri, &sb).ok().flatten())
                    .collect();
                let expr = match ext.attribute((SUBST_NS, "opExpr")) {
                    Some(e) => e.to_string(),
                    None if targets.is_empty() => continue,
                    None => {
                        let e = targets.join(" AND ");
                        warnings.push(format!(
                            "operation {name} has model references but no operation expression; read as {e}"
                        ));
                        e
                    }
                };
                plan.operations.entry(name.to_string()).or_default().expr = expr;
            }
        }
    }

    for node in xb.descendants().filter(|n| n.is_element()) {
        for entry in map_entries(node, "inMap", "substituent")? {
            let target = entry.target.ok_or_else(|| ExtractError::Garbled {
                document: "substituent",
                message: format!("inMap entry for {} lacks a target operation", entry.leaf),
            })?;
            plan.operations
                .entry(entry.operation)
                .or_default()
                .inputs
                .entry(target)
                .or_default()
                .insert(entry.leaf, entry.expr);
        }
    }
    for node in xa.descendants().filter(|n| n.is_element()) {
        for entry in map_entries(node, "outMap", "substituted")? {
            plan.operations
                .entry(entry.operation)
                .or_default()
                .outputs
                .insert(entry.leaf, entry.expr);
        }
    }

    Ok(ExtractedPlan { plan, warnings })
}
