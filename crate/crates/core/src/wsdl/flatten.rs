use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{DataSet, Leaf, QName};
use crate::text::Sentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Complex,
    Simple,
}

/// An element declaration expanded into its tree of nested elements and attributes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaElementTree {
    pub name: String,
    pub kind: NodeKind,
    pub children: Vec<SchemaElementTree>,
    pub type_name: Option<QName>,
    /// Built-in simple type the node's own value derives from.
    pub xsd_type: Option<String>,
    pub required: bool,
    pub attribute: bool,
    /// Complex node with simple content: it carries a value besides its attributes.
    pub has_value: bool,
    #[serde(default, skip)]
    pub span: Option<Range<usize>>,
}

impl SchemaElementTree {
    pub fn simple(name: &str) -> Self {
        Self {
            name: name.to_string(),
            kind: NodeKind::Simple,
            children: Vec::new(),
            type_name: None,
            xsd_type: Some("string".into()),
            required: true,
            attribute: false,
            has_value: false,
            span: None,
        }
    }

    pub fn complex(name: &str, children: Vec<SchemaElementTree>) -> Self {
        Self {
            name: name.to_string(),
            kind: NodeKind::Complex,
            children,
            type_name: None,
            xsd_type: None,
            required: true,
            attribute: false,
            has_value: false,
            span: None,
        }
    }

    pub fn leaf_count(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            usize::from(self.has_value) + self.children.iter().map(Self::leaf_count).sum::<usize>()
        }
    }
}

/// One sentence per leaf: the root-to-leaf node names, root first,
/// tokenized. Sentences that coincide are kept once.
pub fn flatten_element(tree: &SchemaElementTree) -> DataSet {
    let mut set = DataSet {
        source_element: tree.name.clone(),
        leaves: Vec::new(),
    };
    let mut path = Vec::new();
    collect(tree, &mut path, true, &mut set);
    set
}

pub(super) fn flatten_into(tree: &SchemaElementTree, set: &mut DataSet) {
    let mut path = Vec::new();
    collect(tree, &mut path, true, set);
}

fn collect(node: &SchemaElementTree, path: &mut Vec<String>, required: bool, set: &mut DataSet) {
    path.push(node.name.clone());
    let required = required && node.required;
    if node.children.is_empty() || node.has_value {
        set.push(Leaf {
            sentence: Sentence::new(path.join(" ")),
            path: path.clone(),
            xsd_type: node.xsd_type.clone(),
            required,
            attribute: node.attribute,
            span: node.span.clone(),
        });
    }
    for child in &node.children {
        collect(child, path, required, set);
    }
    path.pop();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentences(set: &DataSet) -> Vec<String> {
        set.sentences().map(Sentence::text).collect()
    }

    #[test]
    fn person_tree_flattens_to_paths() {
        let tree = SchemaElementTree::complex(
            "person",
            vec![
                SchemaElementTree::simple("name"),
                SchemaElementTree::complex(
                    "address",
                    vec![SchemaElementTree::simple("city"), SchemaElementTree::simple("zip")],
                ),
            ],
        );
        assert_eq!(
            sentences(&flatten_element(&tree)),
            ["person name", "person address city", "person address zip"]
        );
    }

    #[test]
    fn root_that_is_a_leaf() {
        let set = flatten_element(&SchemaElementTree::simple("zip"));
        assert_eq!(sentences(&set), ["zip"]);
    }

    #[test]
    fn duplicate_leaves_collapse() {
        let tree = SchemaElementTree::complex(
            "r",
            vec![SchemaElementTree::simple("city"), SchemaElementTree::simple("City")],
        );
        let set = flatten_element(&tree);
        assert_eq!(sentences(&set), ["r city"]);
        assert!(set.len() <= tree.leaf_count());
    }

    #[test]
    fn camel_case_names_are_tokenized() {
        let tree = SchemaElementTree::complex("GetWeather", vec![SchemaElementTree::simple("cityName")]);
        assert_eq!(sentences(&flatten_element(&tree)), ["get weather city name"]);
    }

    #[test]
    fn optional_ancestor_makes_leaf_optional() {
        let mut address = SchemaElementTree::complex("address", vec![SchemaElementTree::simple("city")]);
        address.required = false;
        let set = flatten_element(&SchemaElementTree::complex("p", vec![address]));
        assert!(!set.leaves[0].required);
    }

    #[test]
    fn simple_content_node_keeps_its_value() {
        let mut attr = SchemaElementTree::simple("unit");
        attr.attribute = true;
        let mut temp = SchemaElementTree::complex("temperature", vec![attr]);
        temp.has_value = true;
        assert_eq!(sentences(&flatten_element(&temp)), ["temperature", "temperature unit"]);
    }
}
