use std::collections::{HashMap, HashSet};
use std::ops::Range;

use roxmltree::{Document, Node, ParsingOptions};

use super::flatten::flatten_into;
use super::loader::{resolve_uri, DocumentLoader, FileLoader};
use super::schema::{is_schema, resolve_qname, SchemaSet};
use super::{
    DataSet, Operation, QName, ServiceDescription, WsdlError, MAX_IMPORT_DEPTH, WSDL_NS, XSD_NS,
};
use crate::text::Sentence;

struct Part {
    name: String,
    element: Option<QName>,
    type_name: Option<QName>,
}

struct OperationDecl {
    name: String,
    port_type: String,
    input: Option<QName>,
    output: Option<QName>,
    span: Option<Range<usize>>,
}

#[derive(Default)]
struct Definitions {
    target_namespace: Option<String>,
    definitions_name: Option<String>,
    service_name: Option<String>,
    messages: HashMap<QName, Vec<Part>>,
    operations: Vec<OperationDecl>,
    schemas: SchemaSet,
    visited: HashSet<String>,
}

pub(super) fn parse_document(text: &str) -> Result<Document<'_>, WsdlError> {
    let opts = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    Document::parse_with_options(text, opts).map_err(|e| WsdlError::Xml(e.to_string()))
}

fn wsdl_children<'a, 'i>(node: Node<'a, 'i>, local: &'static str) -> impl Iterator<Item = Node<'a, 'i>> {
    node.children().filter(move |c| {
        c.is_element() && c.tag_name().namespace() == Some(WSDL_NS) && c.tag_name().name() == local
    })
}

/// Parses a WSDL 1.1 document, following imports through the filesystem.
pub fn parse_wsdl(document: &[u8], base_uri: &str) -> Result<ServiceDescription, WsdlError> {
    parse_wsdl_with(document, base_uri, &FileLoader)
}

pub fn parse_wsdl_with(
    document: &[u8],
    base_uri: &str,
    loader: &dyn DocumentLoader,
) -> Result<ServiceDescription, WsdlError> {
    let text = std::str::from_utf8(document)
        .map_err(|e| WsdlError::Xml(format!("document is not UTF-8: {e}")))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut defs = Definitions::default();
    defs.visited.insert(base_uri.to_string());
    let doc = parse_document(text)?;
    read_definitions(&doc, base_uri, true, 0, loader, &mut defs)?;

    let mut warnings = Vec::new();
    let mut operations: Vec<Operation> = Vec::new();
    for decl in &defs.operations {
        if operations.iter().any(|o| o.name == decl.name) {
            warnings.push(format!(
                "operation {} of portType {} duplicates an earlier portType and was skipped",
                decl.name, decl.port_type
            ));
            continue;
        }
        let input = message_data(&defs, decl.input.as_ref(), &mut warnings)?;
        let output = message_data(&defs, decl.output.as_ref(), &mut warnings)?;
        operations.push(Operation {
            name: decl.name.clone(),
            name_sentence: Sentence::new(&decl.name),
            input,
            output,
            wsdl_id: decl.name.clone(),
            port_type: decl.port_type.clone(),
            span: decl.span.clone(),
        });
    }
    if operations.is_empty() {
        return Err(WsdlError::NoOperations);
    }

    let name = defs
        .service_name
        .or(defs.definitions_name)
        .or_else(|| {
            std::path::Path::new(base_uri)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
        })
        .unwrap_or_else(|| "service".into());

    Ok(ServiceDescription {
        name,
        operations,
        source_uri: base_uri.to_string(),
        target_namespace: defs.target_namespace.unwrap_or_default(),
        raw_document: text.to_string(),
        warnings,
    })
}

fn message_data(
    defs: &Definitions,
    message: Option<&QName>,
    warnings: &mut Vec<String>,
) -> Result<DataSet, WsdlError> {
    let Some(message) = message else {
        return Ok(DataSet::default());
    };
    let parts = defs
        .messages
        .get(message)
        .or_else(|| {
            // unprefixed references in sloppy documents land in the default namespace
            let mut by_local = defs.messages.iter().filter(|(k, _)| k.local == message.local);
            match (by_local.next(), by_local.next()) {
                (Some((_, parts)), None) => Some(parts),
                _ => None,
            }
        })
        .ok_or_else(|| WsdlError::Unresolved {
            kind: "message",
            name: message.clone(),
        })?;
    let mut set = DataSet::default();
    let mut roots = Vec::new();
    for part in parts {
        let tree = match (&part.element, &part.type_name) {
            (Some(element), _) => defs.schemas.element_tree(element, warnings)?,
            (None, Some(t)) => defs.schemas.typed_part_tree(&part.name, t, warnings)?,
            (None, None) => {
                return Err(WsdlError::Invalid(format!(
                    "part {} of message {} has neither element nor type",
                    part.name, message.local
                )))
            }
        };
        roots.push(tree.name.clone());
        flatten_into(&tree, &mut set);
    }
    set.source_element = roots.join(" ");
    Ok(set)
}

fn read_definitions(
    doc: &Document,
    base_uri: &str,
    main: bool,
    depth: usize,
    loader: &dyn DocumentLoader,
    defs: &mut Definitions,
) -> Result<(), WsdlError> {
    let root = doc.root_element();
    if root.tag_name().namespace() != Some(WSDL_NS) || root.tag_name().name() != "definitions" {
        return Err(WsdlError::NotWsdl(format!("{:?}", root.tag_name().name())));
    }
    let tns = root.attribute("targetNamespace").unwrap_or_default().to_string();
    if main {
        defs.target_namespace = Some(tns.clone());
        defs.definitions_name = root.attribute("name").map(str::to_string);
    }

    for import in wsdl_children(root, "import") {
        if let Some(location) = import.attribute("location") {
            load_import(&resolve_uri(base_uri, location), depth + 1, loader, defs)?;
        }
    }

    for types in wsdl_children(root, "types") {
        for schema in types.children().filter(is_schema) {
            read_schema(schema, base_uri, None, main, depth, loader, defs)?;
        }
    }

    for message in wsdl_children(root, "message") {
        let name = QName::new(tns.clone(), message.attribute("name").unwrap_or_default());
        let parts = wsdl_children(message, "part")
            .map(|p| Part {
                name: p.attribute("name").unwrap_or_default().to_string(),
                element: p.attribute("element").map(|e| resolve_qname(p, e)),
                type_name: p.attribute("type").map(|t| resolve_qname(p, t)),
            })
            .collect();
        defs.messages.insert(name, parts);
    }

    for port_type in wsdl_children(root, "portType") {
        let pt_name = port_type.attribute("name").unwrap_or_default().to_string();
        for op in wsdl_children(port_type, "operation") {
            let message_of = |kind: &'static str| {
                wsdl_children(op, kind)
                    .next()
                    .and_then(|n| n.attribute("message").map(|m| resolve_qname(n, m)))
            };
            defs.operations.push(OperationDecl {
                name: op.attribute("name").unwrap_or_default().to_string(),
                port_type: pt_name.clone(),
                input: message_of("input"),
                output: message_of("output"),
                span: main.then(|| op.range()),
            });
        }
    }

    if defs.service_name.is_none() {
        defs.service_name = wsdl_children(root, "service")
            .next()
            .and_then(|s| s.attribute("name"))
            .map(str::to_string);
    }
    Ok(())
}

/// Registers an embedded or loaded schema and follows its imports/includes.
fn read_schema(
    schema: Node,
    base_uri: &str,
    inherited_tns: Option<&str>,
    main: bool,
    depth: usize,
    loader: &dyn DocumentLoader,
    defs: &mut Definitions,
) -> Result<(), WsdlError> {
    // includes without a targetNamespace adopt the includer's
    let tns = schema
        .attribute("targetNamespace")
        .or(inherited_tns)
        .unwrap_or_default()
        .to_string();
    defs.schemas.add_schema(schema, &tns, main);
    for child in schema.children().filter(|c| c.is_element() && c.tag_name().namespace() == Some(XSD_NS)) {
        let local = child.tag_name().name();
        if local != "import" && local != "include" && local != "redefine" {
            continue;
        }
        let Some(location) = child.attribute("schemaLocation") else {
            continue;
        };
        let inherit = (local != "import").then_some(tns.as_str());
        let uri = resolve_uri(base_uri, location);
        load_schema(&uri, inherit, depth + 1, loader, defs)?;
    }
    Ok(())
}

fn fetch(uri: &str, depth: usize, loader: &dyn DocumentLoader, defs: &mut Definitions) -> Result<Option<String>, WsdlError> {
    if depth > MAX_IMPORT_DEPTH {
        return Err(WsdlError::ImportDepth(uri.to_string()));
    }
    if !defs.visited.insert(uri.to_string()) {
        return Ok(None);
    }
    loader.load(uri).map(Some).map_err(|reason| WsdlError::Import {
        uri: uri.to_string(),
        reason,
    })
}

fn load_schema(
    uri: &str,
    inherited_tns: Option<&str>,
    depth: usize,
    loader: &dyn DocumentLoader,
    defs: &mut Definitions,
) -> Result<(), WsdlError> {
    let Some(text) = fetch(uri, depth, loader, defs)? else {
        return Ok(());
    };
    let doc = parse_document(&text).map_err(|e| WsdlError::Import {
        uri: uri.to_string(),
        reason: e.to_string(),
    })?;
    let root = doc.root_element();
    if !is_schema(&root) {
        return Err(WsdlError::Import {
            uri: uri.to_string(),
            reason: "not an XML Schema document".into(),
        });
    }
    read_schema(root, uri, inherited_tns, false, depth, loader, defs)
}

fn load_import(uri: &str, depth: usize, loader: &dyn DocumentLoader, defs: &mut Definitions) -> Result<(), WsdlError> {
    let Some(text) = fetch(uri, depth, loader, defs)? else {
        return Ok(());
    };
    let doc = parse_document(&text).map_err(|e| WsdlError::Import {
        uri: uri.to_string(),
        reason: e.to_string(),
    })?;
    let root = doc.root_element();
    if is_schema(&root) {
        read_schema(root, uri, None, false, depth, loader, defs)
    } else {
        read_definitions(&doc, uri, false, depth, loader, defs).map_err(|e| match e {
            WsdlError::NotWsdl(found) => WsdlError::Import {
                uri: uri.to_string(),
                reason: format!("neither WSDL nor XML Schema (root {found})"),
            },
            other => other,
        })
    }
}
