use std::time::Duration;

use wsmatch_core::wsdl::{DocumentLoader, FileLoader};

/// Loads `http(s)` locations over the network and everything else from disk.
#[derive(Debug, Clone)]
pub struct WebLoader {
    timeout: Duration,
}

impl Default for WebLoader {
    fn default() -> Self {
        Self {
            timeout: Duration::from_secs(20),
        }
    }
}

impl WebLoader {
    pub fn with_timeout(timeout: Duration) -> Self {
        Self { timeout }
    }
}

pub fn is_remote(uri: &str) -> bool {
    let lower = uri.to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://")
}

impl DocumentLoader for WebLoader {
    fn load(&self, uri: &str) -> Result<String, String> {
        if !is_remote(uri) {
            return FileLoader.load(uri);
        }
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .build()
            .into();
        let mut response = agent.get(uri).call().map_err(|e| format!("{uri}: {e}"))?;
        response
            .body_mut()
            .read_to_string()
            .map_err(|e| format!("{uri}: {e}"))
    }
}
