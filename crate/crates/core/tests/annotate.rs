use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::SeedableRng;

use wsmatch_core::annotate::{annotate_pair, check_references, extract_plan, AnnotateError, ExtractError, SAWSDL_NS, SUBST_NS};
use wsmatch_core::mapping::{validate_plan, MatchingPlan, OperationPlan};
use wsmatch_core::wsdl::{parse_wsdl, ServiceDescription};

mod support;
use support::{random_plan, strip_annotations};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn load(name: &str) -> ServiceDescription {
    let path = fixture(name);
    parse_wsdl(&std::fs::read(&path).unwrap(), path.to_str().unwrap()).unwrap()
}

fn weather_plan() -> MatchingPlan {
    serde_json::from_str(&std::fs::read_to_string(fixture("weather_plan.json")).unwrap()).unwrap()
}

#[test]
fn fixture_plan_is_clean() {
    let report = validate_plan(&weather_plan(), &load("weather.wsdl"), &load("weather_forecast.wsdl"));
    assert!(report.is_empty(), "{report:#?}");
}

#[test]
fn weather_round_trip() {
    let a = load("weather.wsdl");
    let b = load("weather_forecast.wsdl");
    let plan = weather_plan();
    let pair = annotate_pair(&a, &b, &plan).unwrap();

    let extracted = extract_plan(&pair).unwrap();
    assert_eq!(extracted.plan, plan);
    assert!(extracted.warnings.is_empty());

    // annotation is additive
    let a2 = parse_wsdl(pair.substituted_doc.as_bytes(), &a.source_uri).unwrap();
    let b2 = parse_wsdl(pair.substituent_doc.as_bytes(), &b.source_uri).unwrap();
    assert!(a.same_model(&a2));
    assert!(b.same_model(&b2));

    for doc in [&pair.substituted_doc, &pair.substituent_doc] {
        assert!(doc.contains(&format!("xmlns:sawsdl=\"{SAWSDL_NS}\"")));
        assert!(doc.contains(&format!("xmlns:subst=\"{SUBST_NS}\"")));
    }
    assert!(pair.substituted_doc.contains(
        "<sawsdl:attrExtensions sawsdl:modelReference=\"http://example.org/forecast#GetWeatherForecast\" subst:opExpr=\"GetWeatherForecast\"/>"
    ));
    assert!(pair
        .substituent_doc
        .contains("sawsdl:modelReference=\"http://example.org/weather#GetWeather\""));
}

#[test]
fn original_bytes_survive_outside_insertions() {
    let a = load("weather.wsdl");
    let b = load("weather_forecast.wsdl");
    let pair = annotate_pair(&a, &b, &weather_plan()).unwrap();
    assert_eq!(strip_annotations(&pair.substituted_doc), a.raw_document);
    assert_eq!(strip_annotations(&pair.substituent_doc), b.raw_document);
}

#[test]
fn two_targets_give_two_iris() {
    let a = load("weather.wsdl");
    let b = load("weather_forecast.wsdl");
    let mut plan = weather_plan();
    let op = plan.operations.get_mut("GetWeather").unwrap();
    op.expr = "GetWeatherForecast AND getCity".into();
    op.inputs
        .entry("getCity".into())
        .or_default()
        .insert("get city country name".into(), "<get weather country name>".into());
    plan.operations.remove("GetCitiesByCountry");
    let pair = annotate_pair(&a, &b, &plan).unwrap();
    let entry = pair
        .manifest
        .iter()
        .find(|e| e.target == "operation GetWeather")
        .unwrap();
    assert_eq!(
        entry.model_reference,
        [
            "http://example.org/forecast#GetWeatherForecast",
            "http://example.org/forecast#getCity"
        ]
    );
    assert_eq!(extract_plan(&pair).unwrap().plan, plan);
}

#[test]
fn single_operation_equality_plan() {
    let a = load("relations_substituted.wsdl");
    let b = load("relations_substituent.wsdl");
    let plan = MatchingPlan::default().with("Lookup", OperationPlan::new("SameLookup"));
    // operation-only plans leave the required inputs uncovered
    assert!(matches!(annotate_pair(&a, &b, &plan), Err(AnnotateError::Invalid(_))));
    let plan = MatchingPlan::default().with(
        "Lookup",
        OperationPlan::new("SameLookup")
            .input("SameLookup", "city", "<city>")
            .input("SameLookup", "zip", "<zip>"),
    );
    let pair = annotate_pair(&a, &b, &plan).unwrap();
    assert_eq!(pair.substituted_doc.matches("sawsdl:modelReference=").count(), 1);
    // typed parts have no schema declaration: the mappings ride on the operation
    assert_eq!(pair.substituent_doc.matches("sawsdl:modelReference=").count(), 1);
    assert_eq!(extract_plan(&pair).unwrap().plan, plan);
}

#[test]
fn empty_plan() {
    let a = load("weather.wsdl");
    let err = annotate_pair(&a, &a, &MatchingPlan::default()).unwrap_err();
    assert_eq!(err.to_string(), "nothing to annotate");
}

#[test]
fn missing_expression_degrades_to_and() {
    let a = load("weather.wsdl");
    let b = load("weather_forecast.wsdl");
    let mut pair = annotate_pair(&a, &b, &weather_plan()).unwrap();
    pair.substituted_doc = pair.substituted_doc.replace(" subst:opExpr=\"GetWeatherForecast\"", "");
    let extracted = extract_plan(&pair).unwrap();
    assert_eq!(extracted.plan.operations["GetWeather"].expr, "GetWeatherForecast");
    assert_eq!(extracted.warnings.len(), 1);
    assert!(extracted.warnings[0].contains("GetWeather"));
}

#[test]
fn dangling_iri_is_named() {
    let a = load("weather.wsdl");
    let b = load("weather_forecast.wsdl");
    let mut pair = annotate_pair(&a, &b, &weather_plan()).unwrap();
    pair.substituted_doc = pair
        .substituted_doc
        .replace("forecast#GetWeatherForecast\"", "forecast#NoSuchOperation\"");
    match extract_plan(&pair).unwrap_err() {
        ExtractError::Dangling(iri) => assert_eq!(iri, "http://example.org/forecast#NoSuchOperation"),
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn already_annotated_documents_are_refused() {
    let a = load("weather.wsdl");
    let b = load("weather_forecast.wsdl");
    let pair = annotate_pair(&a, &b, &weather_plan()).unwrap();
    let a2 = parse_wsdl(pair.substituted_doc.as_bytes(), &a.source_uri).unwrap();
    assert!(matches!(
        annotate_pair(&a2, &b, &weather_plan()),
        Err(AnnotateError::AlreadyAnnotated("substituted"))
    ));
}

#[test]
fn manifest_serializes() {
    let a = load("weather.wsdl");
    let b = load("weather_forecast.wsdl");
    let pair = annotate_pair(&a, &b, &weather_plan()).unwrap();
    let json = serde_json::to_value(&pair.manifest).unwrap();
    let first = &json[0];
    assert!(first["document"].is_string());
    assert!(first["modelReference"].is_array());
}

#[test]
fn fifty_plans_round_trip() {
    let a = load("weather.wsdl");
    let b = load("weather_forecast.wsdl");
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..50 {
        let plan = random_plan(&mut rng, &a, &b);
        let report = validate_plan(&plan, &a, &b);
        assert!(!report.has_errors(), "{plan:#?}\n{report:#?}");
        let pair = annotate_pair(&a, &b, &plan).unwrap();
        let back = extract_plan(&pair).unwrap();
        assert_eq!(back.plan, plan);
        assert!(back.warnings.is_empty());
        assert_eq!(strip_annotations(&pair.substituted_doc), a.raw_document);
        assert_eq!(strip_annotations(&pair.substituent_doc), b.raw_document);
    }
}

#[test]
fn every_reference_resolves() {
    let a = load("weather.wsdl");
    let b = load("weather_forecast.wsdl");
    let pair = annotate_pair(&a, &b, &weather_plan()).unwrap();
    let into_b = check_references(&pair.substituted_doc, &b).unwrap();
    let into_a = check_references(&pair.substituent_doc, &a).unwrap();
    assert!(into_b.foreign.is_empty() && into_a.foreign.is_empty());
    // GetWeather + its three outputs, GetCitiesByCountry + its output
    assert_eq!(into_b.resolved.len(), 2 + 3 + 1);
    assert!(into_a.resolved.iter().any(|iri| iri == "http://example.org/weather#GetWeather/input/GetWeather/CityName"));
    let broken = pair.substituent_doc.replace("#GetWeather/input/GetWeather/CityName", "#GetWeather/input/GetWeather/Town");
    assert!(matches!(check_references(&broken, &a), Err(ExtractError::Dangling(_))));
}
