//! Owned representation of the XML Schema constructs that shape message
//! data, and expansion of element declarations into trees.

use std::collections::HashMap;
use std::ops::Range;

use roxmltree::Node;

use super::flatten::{NodeKind, SchemaElementTree};
use super::{QName, WsdlError, MAX_TREE_DEPTH, SOAP_ENCODING_NS, XSD_NS};

/// Resolves a prefixed name (`tns:Foo`) in the scope of `node`.
pub(super) fn resolve_qname(node: Node, value: &str) -> QName {
    let (prefix, local) = match value.split_once(':') {
        Some((p, l)) => (Some(p), l),
        None => (None, value),
    };
    let ns = node.lookup_namespace_uri(prefix).unwrap_or_default();
    QName::new(ns, local.trim())
}

fn is_xsd(node: &Node, local: &str) -> bool {
    node.is_element() && node.tag_name().namespace() == Some(XSD_NS) && node.tag_name().name() == local
}

fn xsd_children<'a, 'i>(node: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> {
    node.children()
        .filter(|c| c.is_element() && c.tag_name().namespace() == Some(XSD_NS))
}

fn builtin(name: &QName) -> bool {
    name.namespace == XSD_NS || name.namespace == SOAP_ENCODING_NS
}

#[derive(Debug, Clone)]
pub(super) struct ElementDecl {
    name: String,
    reference: Option<QName>,
    type_ref: Option<QName>,
    inline: Option<Box<TypeDef>>,
    optional: bool,
    span: Option<Range<usize>>,
}

#[derive(Debug, Clone)]
struct AttributeDecl {
    name: String,
    reference: Option<QName>,
    type_ref: Option<QName>,
    inline: Option<SimpleType>,
    required: bool,
    span: Option<Range<usize>>,
}

#[derive(Debug, Clone)]
enum Particle {
    Element(ElementDecl),
    Nested(Vec<Particle>),
    Group { name: QName, optional: bool },
}

#[derive(Debug, Clone)]
enum AttrItem {
    Attribute(AttributeDecl),
    Group(QName),
}

#[derive(Debug, Clone, Default)]
struct ComplexType {
    extends: Option<QName>,
    simple_content: Option<QName>,
    particles: Vec<Particle>,
    attributes: Vec<AttrItem>,
}

#[derive(Debug, Clone, Default)]
struct SimpleType {
    /// Restriction base; `None` for lists and unions, which are textual.
    base: Option<QName>,
}

#[derive(Debug, Clone)]
enum TypeDef {
    Complex(ComplexType),
    Simple(SimpleType),
}

#[derive(Debug, Default)]
pub(super) struct SchemaSet {
    elements: HashMap<QName, ElementDecl>,
    types: HashMap<QName, TypeDef>,
    groups: HashMap<QName, Vec<Particle>>,
    attribute_groups: HashMap<QName, Vec<AttrItem>>,
    attributes: HashMap<QName, AttributeDecl>,
}

struct Reader {
    main: bool,
}

impl Reader {
    fn span(&self, node: Node) -> Option<Range<usize>> {
        self.main.then(|| node.range())
    }

    fn element(&self, node: Node, optional: bool) -> ElementDecl {
        let min_zero = node.attribute("minOccurs").map(str::trim) == Some("0");
        let inline = xsd_children(node).find_map(|c| match c.tag_name().name() {
            "complexType" => Some(Box::new(TypeDef::Complex(self.complex(c)))),
            "simpleType" => Some(Box::new(TypeDef::Simple(self.simple(c)))),
            _ => None,
        });
        ElementDecl {
            name: node.attribute("name").unwrap_or_default().to_string(),
            reference: node.attribute("ref").map(|r| resolve_qname(node, r)),
            type_ref: node.attribute("type").map(|t| resolve_qname(node, t)),
            inline,
            optional: optional || min_zero,
            span: self.span(node),
        }
    }

    fn attribute(&self, node: Node) -> AttributeDecl {
        AttributeDecl {
            name: node.attribute("name").unwrap_or_default().to_string(),
            reference: node.attribute("ref").map(|r| resolve_qname(node, r)),
            type_ref: node.attribute("type").map(|t| resolve_qname(node, t)),
            inline: xsd_children(node)
                .find(|c| c.tag_name().name() == "simpleType")
                .map(|c| self.simple(c)),
            required: node.attribute("use") == Some("required"),
            span: self.span(node),
        }
    }

    fn simple(&self, node: Node) -> SimpleType {
        let base = xsd_children(node)
            .find(|c| c.tag_name().name() == "restriction")
            .and_then(|r| r.attribute("base").map(|b| resolve_qname(r, b)));
        SimpleType { base }
    }

    fn particles(&self, node: Node, optional: bool) -> Vec<Particle> {
        let mut out = Vec::new();
        for child in xsd_children(node) {
            let min_zero = child.attribute("minOccurs").map(str::trim) == Some("0");
            match child.tag_name().name() {
                "element" => out.push(Particle::Element(self.element(child, optional))),
                "sequence" | "all" => {
                    out.push(Particle::Nested(self.particles(child, optional || min_zero)))
                }
                "choice" => out.push(Particle::Nested(self.particles(child, true))),
                "group" => {
                    if let Some(r) = child.attribute("ref") {
                        out.push(Particle::Group {
                            name: resolve_qname(child, r),
                            optional: optional || min_zero,
                        });
                    }
                }
                _ => {}
            }
        }
        out
    }

    fn attr_items(&self, node: Node) -> Vec<AttrItem> {
        xsd_children(node)
            .filter_map(|c| match c.tag_name().name() {
                "attribute" => {
                    let decl = self.attribute(c);
                    // soapenc:arrayType and friends describe encoding, not data
                    let encoding = decl
                        .reference
                        .as_ref()
                        .is_some_and(|r| r.namespace == SOAP_ENCODING_NS);
                    (!encoding).then_some(AttrItem::Attribute(decl))
                }
                "attributeGroup" => c
                    .attribute("ref")
                    .map(|r| AttrItem::Group(resolve_qname(c, r))),
                _ => None,
            })
            .collect()
    }

    fn complex(&self, node: Node) -> ComplexType {
        let mut ct = ComplexType {
            particles: self.particles(node, false),
            attributes: self.attr_items(node),
            ..ComplexType::default()
        };
        for content in xsd_children(node) {
            let name = content.tag_name().name();
            if name != "complexContent" && name != "simpleContent" {
                continue;
            }
            for derivation in xsd_children(content) {
                let base = derivation.attribute("base").map(|b| resolve_qname(derivation, b));
                let kind = derivation.tag_name().name();
                if kind != "extension" && kind != "restriction" {
                    continue;
                }
                if name == "simpleContent" {
                    ct.simple_content = base;
                } else if kind == "extension" {
                    ct.extends = base;
                }
                ct.particles.extend(self.particles(derivation, false));
                ct.attributes.extend(self.attr_items(derivation));
            }
        }
        ct
    }
}

impl SchemaSet {
    /// Registers the global declarations of one `xsd:schema` element.
    pub(super) fn add_schema(&mut self, schema: Node, target_namespace: &str, main: bool) {
        let reader = Reader { main };
        let key = |n: Node| QName::new(target_namespace, n.attribute("name").unwrap_or_default());
        for child in xsd_children(schema) {
            match child.tag_name().name() {
                "element" => {
                    self.elements.insert(key(child), reader.element(child, false));
                }
                "complexType" => {
                    self.types.insert(key(child), TypeDef::Complex(reader.complex(child)));
                }
                "simpleType" => {
                    self.types.insert(key(child), TypeDef::Simple(reader.simple(child)));
                }
                "group" => {
                    self.groups.insert(key(child), reader.particles(child, false));
                }
                "attributeGroup" => {
                    self.attribute_groups.insert(key(child), reader.attr_items(child));
                }
                "attribute" => {
                    self.attributes.insert(key(child), reader.attribute(child));
                }
                _ => {}
            }
        }
    }

    /// Expands the global element `name` into a tree.
    pub(super) fn element_tree(
        &self,
        name: &QName,
        warnings: &mut Vec<String>,
    ) -> Result<SchemaElementTree, WsdlError> {
        let decl = self.elements.get(name).ok_or_else(|| WsdlError::Unresolved {
            kind: "element",
            name: name.clone(),
        })?;
        Expander { set: self, warnings }.element(decl, 1)
    }

    /// Tree rooted at a message part declared with `type=`.
    pub(super) fn typed_part_tree(
        &self,
        part_name: &str,
        type_name: &QName,
        warnings: &mut Vec<String>,
    ) -> Result<SchemaElementTree, WsdlError> {
        let decl = ElementDecl {
            name: part_name.to_string(),
            reference: None,
            type_ref: Some(type_name.clone()),
            inline: None,
            optional: false,
            span: None,
        };
        Expander { set: self, warnings }.element(&decl, 1)
    }
}

/// Guards against self-referencing groups and derivation chains.
const MAX_INDIRECTION: usize = 32;

struct Expander<'a> {
    set: &'a SchemaSet,
    warnings: &'a mut Vec<String>,
}

#[derive(Default)]
struct Content {
    children: Vec<SchemaElementTree>,
    has_value: bool,
    xsd_type: Option<String>,
    truncated: bool,
}

impl Content {
    fn simple(xsd_type: impl Into<String>) -> Self {
        Self {
            xsd_type: Some(xsd_type.into()),
            ..Self::default()
        }
    }
}

impl Expander<'_> {
    fn element(&mut self, decl: &ElementDecl, depth: usize) -> Result<SchemaElementTree, WsdlError> {
        let (target, optional) = match &decl.reference {
            Some(r) => {
                if builtin(r) {
                    // e.g. `ref="s:schema"` in dataset-returning services
                    let mut node = SchemaElementTree::simple(&r.local);
                    node.xsd_type = Some("anyType".into());
                    node.required = !decl.optional;
                    node.span = decl.span.clone();
                    return Ok(node);
                }
                let global = self.set.elements.get(r).ok_or_else(|| WsdlError::Unresolved {
                    kind: "element",
                    name: r.clone(),
                })?;
                (global, decl.optional)
            }
            None => (decl, decl.optional),
        };

        let (kind, content) = match (&target.inline, &target.type_ref) {
            (Some(def), _) => self.type_def(def, depth, 0)?,
            (None, Some(t)) => self.named_type(t, depth, 0)?,
            (None, None) => (NodeKind::Simple, Content::simple("anyType")),
        };
        if content.truncated {
            self.warnings.push(format!(
                "element {} truncated at depth {MAX_TREE_DEPTH}",
                target.name
            ));
        }
        Ok(SchemaElementTree {
            name: target.name.clone(),
            kind,
            has_value: content.has_value && !content.children.is_empty(),
            children: content.children,
            type_name: target.type_ref.clone(),
            xsd_type: content.xsd_type,
            required: !optional,
            attribute: false,
            span: target.span.clone(),
        })
    }

    fn named_type(
        &mut self,
        name: &QName,
        depth: usize,
        hops: usize,
    ) -> Result<(NodeKind, Content), WsdlError> {
        if builtin(name) {
            return Ok((NodeKind::Simple, Content::simple(name.local.clone())));
        }
        let def = self.set.types.get(name).ok_or_else(|| WsdlError::Unresolved {
            kind: "type",
            name: name.clone(),
        })?;
        self.type_def(def, depth, hops + 1)
    }

    fn type_def(
        &mut self,
        def: &TypeDef,
        depth: usize,
        hops: usize,
    ) -> Result<(NodeKind, Content), WsdlError> {
        match def {
            TypeDef::Simple(st) => Ok((NodeKind::Simple, Content::simple(self.simple_base(st, hops)))),
            TypeDef::Complex(ct) => Ok((NodeKind::Complex, self.complex(ct, depth, hops)?)),
        }
    }

    fn simple_base(&self, st: &SimpleType, hops: usize) -> String {
        let mut current = st.base.clone();
        for _ in hops..MAX_INDIRECTION {
            let Some(base) = current else {
                return "string".into();
            };
            if builtin(&base) {
                return base.local;
            }
            current = match self.set.types.get(&base) {
                Some(TypeDef::Simple(s)) => s.base.clone(),
                Some(TypeDef::Complex(c)) => c.simple_content.clone(),
                None => None,
            };
        }
        "string".into()
    }

    fn complex(&mut self, ct: &ComplexType, depth: usize, hops: usize) -> Result<Content, WsdlError> {
        if hops > MAX_INDIRECTION {
            return Err(WsdlError::Invalid("type derivation chain too long".into()));
        }
        let mut content = Content::default();
        if let Some(base) = &ct.extends {
            let (kind, inherited) = self.named_type(base, depth, hops + 1)?;
            content = inherited;
            content.has_value |= kind == NodeKind::Simple;
        }
        if let Some(base) = &ct.simple_content {
            let (_, base_content) = self.named_type(base, depth, hops + 1)?;
            content.has_value = true;
            content.xsd_type = Some(base_content.xsd_type.unwrap_or_else(|| "string".into()));
        }
        if depth >= MAX_TREE_DEPTH {
            content.truncated |= !ct.particles.is_empty() || !ct.attributes.is_empty();
            content.truncated |= !content.children.is_empty();
            content.children.clear();
            return Ok(content);
        }
        self.particles(&ct.particles, depth, false, 0, &mut content.children)?;
        self.attributes(&ct.attributes, 0, &mut content.children)?;
        Ok(content)
    }

    fn particles(
        &mut self,
        particles: &[Particle],
        depth: usize,
        optional: bool,
        hops: usize,
        out: &mut Vec<SchemaElementTree>,
    ) -> Result<(), WsdlError> {
        if hops > MAX_INDIRECTION {
            return Err(WsdlError::Invalid("model group nesting too deep".into()));
        }
        for p in particles {
            match p {
                Particle::Element(decl) => {
                    let mut child = self.element(decl, depth + 1)?;
                    child.required &= !optional;
                    out.push(child);
                }
                Particle::Nested(inner) => self.particles(inner, depth, optional, hops, out)?,
                Particle::Group {
                    name,
                    optional: group_optional,
                } => {
                    let group = self.set.groups.get(name).ok_or_else(|| WsdlError::Unresolved {
                        kind: "group",
                        name: name.clone(),
                    })?;
                    self.particles(group, depth, optional || *group_optional, hops + 1, out)?;
                }
            }
        }
        Ok(())
    }

    fn attributes(
        &mut self,
        items: &[AttrItem],
        hops: usize,
        out: &mut Vec<SchemaElementTree>,
    ) -> Result<(), WsdlError> {
        if hops > MAX_INDIRECTION {
            return Err(WsdlError::Invalid("attribute group nesting too deep".into()));
        }
        for item in items {
            match item {
                AttrItem::Attribute(decl) => out.push(self.attribute(decl)?),
                AttrItem::Group(name) => {
                    let group = self
                        .set
                        .attribute_groups
                        .get(name)
                        .ok_or_else(|| WsdlError::Unresolved {
                            kind: "attributeGroup",
                            name: name.clone(),
                        })?;
                    self.attributes(group, hops + 1, out)?;
                }
            }
        }
        Ok(())
    }

    fn attribute(&self, decl: &AttributeDecl) -> Result<SchemaElementTree, WsdlError> {
        let target = match &decl.reference {
            Some(r) if builtin(r) || r.namespace.starts_with("http://www.w3.org/XML/") => {
                return Ok(attribute_node(&r.local, Some("string".into()), decl));
            }
            Some(r) => self.set.attributes.get(r).ok_or_else(|| WsdlError::Unresolved {
                kind: "attribute",
                name: r.clone(),
            })?,
            None => decl,
        };
        let xsd_type = match (&target.inline, &target.type_ref) {
            (Some(st), _) => self.simple_base(st, 0),
            (None, Some(t)) if builtin(t) => t.local.clone(),
            (None, Some(t)) => match self.set.types.get(t) {
                Some(TypeDef::Simple(st)) => self.simple_base(st, 0),
                _ => {
                    return Err(WsdlError::Unresolved {
                        kind: "type",
                        name: t.clone(),
                    })
                }
            },
            (None, None) => "anySimpleType".into(),
        };
        let mut node = attribute_node(&target.name, Some(xsd_type), decl);
        node.span = target.span.clone();
        Ok(node)
    }
}

fn attribute_node(name: &str, xsd_type: Option<String>, site: &AttributeDecl) -> SchemaElementTree {
    SchemaElementTree {
        name: name.to_string(),
        kind: NodeKind::Simple,
        children: Vec::new(),
        type_name: site.type_ref.clone(),
        xsd_type,
        required: site.required,
        attribute: true,
        has_value: false,
        span: site.span.clone(),
    }
}

pub(super) fn is_schema(node: &Node) -> bool {
    is_xsd(node, "schema")
}
