//! Orchestration around the matchmaker: candidate registries, persisted
//! matching sessions and the HTTP API used by the administration console.

pub mod api;
pub mod config;
pub mod loader;
pub mod registry;
pub mod session;
pub mod store;

pub use config::Config;
pub use loader::WebLoader;
pub use registry::{load_registry, RegistryEntry, RegistryError, RegistryManifest};
pub use session::{MatchingSession, SessionState, Workflow, WorkflowError};
pub use store::{SessionStore, StoreError};
