//! Candidate pools: a directory of WSDL files or a JSON manifest, local or
//! fetched over HTTP.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use wsmatch_core::similarity::RankingFailure;
use wsmatch_core::wsdl::{parse_wsdl_with, resolve_uri, DocumentLoader, ServiceDescription};

use crate::loader::is_remote;

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("registry {uri} is unreachable: {message}")]
    Unreachable { uri: String, message: String },
    #[error("malformed registry manifest {uri}: {message}")]
    Malformed { uri: String, message: String },
    #[error("registry lists {0} more than once")]
    DuplicateUri(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegistryEntry {
    pub name: String,
    pub wsdl_uri: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RegistryManifest {
    pub entries: Vec<RegistryEntry>,
}

impl RegistryManifest {
    /// Sorts by name and rejects repeated locations.
    pub fn new(mut entries: Vec<RegistryEntry>) -> Result<Self, RegistryError> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.wsdl_uri.as_str()) {
                return Err(RegistryError::DuplicateUri(e.wsdl_uri.clone()));
            }
        }
        entries.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.wsdl_uri.cmp(&b.wsdl_uri)));
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fetches and parses every entry. Entries that fail are reported, not fatal.
    pub fn fetch(&self, loader: &dyn DocumentLoader) -> (Vec<ServiceDescription>, Vec<RankingFailure>) {
        let mut services = Vec::new();
        let mut failures = Vec::new();
        for e in &self.entries {
            let parsed = loader
                .load(&e.wsdl_uri)
                .and_then(|text| parse_wsdl_with(text.as_bytes(), &e.wsdl_uri, loader).map_err(|err| err.to_string()));
            match parsed {
                Ok(s) => services.push(s),
                Err(error) => {
                    log::warn!("skipping registry entry {}: {error}", e.name);
                    failures.push(RankingFailure {
                        name: e.name.clone(),
                        source_uri: e.wsdl_uri.clone(),
                        error,
                    })
                }
            }
        }
        (services, failures)
    }
}

fn parse_manifest(text: &str, uri: &str) -> Result<RegistryManifest, RegistryError> {
    let raw: RegistryManifest = serde_json::from_str(text).map_err(|e| RegistryError::Malformed {
        uri: uri.to_string(),
        message: e.to_string(),
    })?;
    let entries = raw
        .entries
        .into_iter()
        .map(|mut e| {
            e.wsdl_uri = resolve_uri(uri, &e.wsdl_uri);
            e
        })
        .collect();
    RegistryManifest::new(entries)
}

fn scan_directory(dir: &Path) -> Result<RegistryManifest, RegistryError> {
    let unreachable = |e: std::io::Error| RegistryError::Unreachable {
        uri: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut entries = Vec::new();
    for item in std::fs::read_dir(dir).map_err(unreachable)? {
        let path = item.map_err(unreachable)?.path();
        let is_wsdl = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("wsdl"));
        if !is_wsdl || !path.is_file() {
            continue;
        }
        let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        entries.push(RegistryEntry {
            name,
            wsdl_uri: path.to_string_lossy().into_owned(),
            metadata: BTreeMap::new(),
        });
    }
    RegistryManifest::new(entries)
}

/// Reads a registry from a directory, a manifest file or an HTTP location.
pub fn load_registry(uri: &str, loader: &dyn DocumentLoader) -> Result<RegistryManifest, RegistryError> {
    if is_remote(uri) {
        let text = loader.load(uri).map_err(|message| RegistryError::Unreachable {
            uri: uri.to_string(),
            message,
        })?;
        return parse_manifest(&text, uri);
    }
    let path = Path::new(uri);
    if path.is_dir() {
        return scan_directory(path);
    }
    let text = std::fs::read_to_string(path).map_err(|e| RegistryError::Unreachable {
        uri: uri.to_string(),
        message: e.to_string(),
    })?;
    parse_manifest(&text, uri)
}
