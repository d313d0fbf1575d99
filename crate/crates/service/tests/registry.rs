use std::path::PathBuf;

use wsmatch_service::{load_registry, RegistryError, WebLoader};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

#[test]
fn directory_lists_every_wsdl_by_name() {
    let reg = load_registry(fixtures().join("registry").to_str().unwrap(), &WebLoader::default()).unwrap();
    let names: Vec<&str> = reg.entries.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(
        names,
        ["bookstore", "global_weather", "global_weather_renamed", "weather_forecast"]
    );
}

#[test]
fn directory_with_three_files() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["c.wsdl", "a.wsdl", "b.WSDL", "notes.txt"] {
        std::fs::write(dir.path().join(n), "<x/>").unwrap();
    }
    let reg = load_registry(dir.path().to_str().unwrap(), &WebLoader::default()).unwrap();
    assert_eq!(reg.len(), 3);
    assert_eq!(reg.entries[0].name, "a");
}

#[test]
fn empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let reg = load_registry(dir.path().to_str().unwrap(), &WebLoader::default()).unwrap();
    assert!(reg.is_empty());
}

#[test]
fn manifest_resolves_relative_locations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("registry.json");
    std::fs::write(
        &path,
        r#"{"entries": [
            {"name": "z", "wsdlUri": "z.wsdl", "metadata": {"owner": "ops"}},
            {"name": "a", "wsdlUri": "http://example.org/a.wsdl"}
        ]}"#,
    )
    .unwrap();
    let reg = load_registry(path.to_str().unwrap(), &WebLoader::default()).unwrap();
    assert_eq!(reg.entries[0].wsdl_uri, "http://example.org/a.wsdl");
    assert_eq!(PathBuf::from(&reg.entries[1].wsdl_uri), dir.path().join("z.wsdl"));
    assert_eq!(reg.entries[1].metadata["owner"], "ops");
}

#[test]
fn duplicate_locations_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("registry.json");
    std::fs::write(
        &path,
        r#"{"entries": [{"name": "a", "wsdlUri": "x.wsdl"}, {"name": "b", "wsdlUri": "x.wsdl"}]}"#,
    )
    .unwrap();
    let err = load_registry(path.to_str().unwrap(), &WebLoader::default()).unwrap_err();
    assert!(matches!(err, RegistryError::DuplicateUri(_)), "{err}");
}

#[test]
fn malformed_and_missing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("registry.json");
    std::fs::write(&path, "[1, 2").unwrap();
    assert!(matches!(
        load_registry(path.to_str().unwrap(), &WebLoader::default()),
        Err(RegistryError::Malformed { .. })
    ));
    let missing = dir.path().join("nope.json");
    assert!(matches!(
        load_registry(missing.to_str().unwrap(), &WebLoader::default()),
        Err(RegistryError::Unreachable { .. })
    ));
}

#[test]
fn unparsable_entries_become_failures() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixtures().join("weather.wsdl"), dir.path().join("good.wsdl")).unwrap();
    std::fs::write(dir.path().join("bad.wsdl"), "<definitions/>").unwrap();
    let reg = load_registry(dir.path().to_str().unwrap(), &WebLoader::default()).unwrap();
    let (services, failures) = reg.fetch(&WebLoader::default());
    assert_eq!(services.len(), 1);
    assert_eq!(failures.len(), 1);
    assert_eq!(failures[0].name, "bad");
}
