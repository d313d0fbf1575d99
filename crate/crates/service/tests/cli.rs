use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn wsmatch(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_wsmatch")).args(args).output().unwrap()
}

#[test]
fn rank_lists_registry_in_order() {
    let out = wsmatch(&["rank", &fixture("weather.wsdl"), &fixture("registry")]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().skip(1).map(|l| l.split_whitespace().nth(2).unwrap()).collect();
    assert_eq!(names, ["GlobalWeather", "GlobalWeatherV2", "WeatherForecast", "Bookstore"]);
}

#[test]
fn rank_json() {
    let out = wsmatch(&["rank", "--json", &fixture("weather.wsdl"), &fixture("registry")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["candidates"].as_array().unwrap().len(), 4);
    assert_eq!(v["candidates"][0]["score"], 1.0);
}

#[test]
fn match_prints_table_and_suggestions() {
    let out = wsmatch(&["match", &fixture("weather.wsdl"), &fixture("weather_forecast.wsdl")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Equality(0.82)"), "{text}");
    assert!(text.contains("GetWeather: GetWeatherForecast Equality(0.82)"), "{text}");
}

#[test]
fn annotate_writes_two_documents() {
    let dir = tempfile::tempdir().unwrap();
    let out = wsmatch(&[
        "annotate",
        &fixture("weather.wsdl"),
        &fixture("weather_forecast.wsdl"),
        &fixture("weather_plan.json"),
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("weather.substituted.wsdl").is_file());
    assert!(dir.path().join("weather_forecast.substituent.wsdl").is_file());
}

#[test]
fn invalid_plan_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    std::fs::write(&plan, r#"{"operations": {"GetWeather": {"expr": "NoSuchOp"}}}"#).unwrap();
    let out = wsmatch(&[
        "annotate",
        &fixture("weather.wsdl"),
        &fixture("weather_forecast.wsdl"),
        plan.to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NoSuchOp"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("wsmatch.toml");
    std::fs::write(&config, "threshold = 1.5\n").unwrap();
    let out = wsmatch(&["--config", config.to_str().unwrap(), "match", &fixture("weather.wsdl"), &fixture("weather.wsdl")]);
    assert!(!out.status.success());
    let out = wsmatch(&[
        "--config",
        config.to_str().unwrap(),
        "--threshold",
        "0.5",
        "match",
        &fixture("weather.wsdl"),
        &fixture("weather.wsdl"),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fixture_lexicon_flag() {
    let out = wsmatch(&[
        "--lexicon",
        &fixture("taxonomy.txt"),
        "rank",
        &fixture("weather.wsdl"),
        &fixture("registry"),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = wsmatch(&["--lexicon", &fixture("missing.txt"), "rank", &fixture("weather.wsdl"), &fixture("registry")]);
    assert!(!out.status.success());
}
