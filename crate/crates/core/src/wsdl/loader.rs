use std::path::{Path, PathBuf};

/// Fetches documents referenced by imports.
pub trait DocumentLoader: Send + Sync {
    fn load(&self, uri: &str) -> Result<String, String>;
}

/// Reads local paths and `file:` URLs.
#[derive(Debug, Default, Clone, Copy)]
pub struct FileLoader;

impl DocumentLoader for FileLoader {
    fn load(&self, uri: &str) -> Result<String, String> {
        let path = to_path(uri).ok_or_else(|| "only local files are supported".to_string())?;
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Refuses every import; for self-contained documents.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoImports;

impl DocumentLoader for NoImports {
    fn load(&self, _uri: &str) -> Result<String, String> {
        Err("imports are disabled".into())
    }
}

#[cfg(any(unix, windows))]
fn file_url_path(url: &url::Url) -> Option<PathBuf> {
    url.to_file_path().ok()
}

#[cfg(not(any(unix, windows)))]
fn file_url_path(url: &url::Url) -> Option<PathBuf> {
    Some(PathBuf::from(url.path()))
}

fn to_path(uri: &str) -> Option<PathBuf> {
    if let Ok(url) = url::Url::parse(uri) {
        if url.scheme() == "file" {
            return file_url_path(&url);
        }
        // single-letter schemes are Windows drive letters
        if url.scheme().len() > 1 {
            return None;
        }
    }
    Some(PathBuf::from(uri))
}

/// Resolves `location` against `base`, which is either a URL or a file path.
pub fn resolve_uri(base: &str, location: &str) -> String {
    if let Ok(abs) = url::Url::parse(location) {
        if abs.scheme().len() > 1 {
            return location.to_string();
        }
    }
    if let Ok(base_url) = url::Url::parse(base) {
        if base_url.scheme().len() > 1 {
            if let Ok(joined) = base_url.join(location) {
                return joined.to_string();
            }
        }
    }
    let base_path = Path::new(base);
    let dir = if base.is_empty() {
        Path::new(".")
    } else {
        base_path.parent().unwrap_or(Path::new("."))
    };
    dir.join(location).to_string_lossy().into_owned()
}
