use std::path::PathBuf;
use std::sync::Arc;

use wsmatch_core::annotate::extract_plan;
use wsmatch_core::lexicon::Lexicon;
use wsmatch_core::mapping::{MatchingPlan, OperationPlan};
use wsmatch_core::similarity::Weights;
use wsmatch_service::{MatchingSession, SessionState, SessionStore, StoreError, WebLoader, Workflow, WorkflowError};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn workflow() -> Workflow {
    Workflow::new(Arc::new(Lexicon::builtin()), Weights::default(), 0.5, Arc::new(WebLoader::default()))
}

fn weather_plan() -> MatchingPlan {
    serde_json::from_str(&std::fs::read_to_string(fixture("weather_plan.json")).unwrap()).unwrap()
}

fn forecast_index(s: &MatchingSession) -> usize {
    s.ranking.iter().position(|c| c.name == "WeatherForecast").unwrap()
}

#[test]
fn happy_path_on_weather_pair() {
    let w = workflow();
    let store = SessionStore::open(tempfile::tempdir().unwrap().keep()).unwrap();
    let mut s = w
        .create(SessionStore::new_id(), &fixture("weather.wsdl"), &fixture("registry"))
        .unwrap();
    assert_eq!(s.state, SessionState::Created);
    let mut snapshots = vec![s.clone()];

    w.rank(&mut s).unwrap();
    assert_eq!(s.state, SessionState::Ranked);
    assert_eq!(s.ranking.len(), 4);
    snapshots.push(s.clone());

    let i = forecast_index(&s);
    w.select(&mut s, i).unwrap();
    assert_eq!(s.state, SessionState::CandidateSelected);
    assert_eq!(s.table.as_ref().unwrap().rows, ["GetWeather", "GetCitiesByCountry"]);
    snapshots.push(s.clone());

    w.draft(&mut s, &weather_plan()).unwrap();
    assert_eq!(s.state, SessionState::MatchingDrafted);
    assert!(s.report.is_empty(), "{:?}", s.report);
    snapshots.push(s.clone());

    w.confirm(&mut s).unwrap();
    assert_eq!(s.state, SessionState::Confirmed);
    let pair = s.artifacts.clone().unwrap();
    assert_eq!(extract_plan(&pair).unwrap().plan, weather_plan());
    snapshots.push(s.clone());

    for snap in snapshots {
        store.save(&snap).unwrap();
        assert_eq!(store.load(&snap.id).unwrap(), snap, "state {}", snap.state);
    }
}

#[test]
fn steps_out_of_order() {
    let w = workflow();
    let mut s = w
        .create(SessionStore::new_id(), &fixture("weather.wsdl"), &fixture("registry"))
        .unwrap();
    assert!(matches!(w.confirm(&mut s), Err(WorkflowError::WrongState { .. })));
    assert!(matches!(w.select(&mut s, 0), Err(WorkflowError::WrongState { .. })));
    assert!(matches!(
        w.draft(&mut s, &weather_plan()),
        Err(WorkflowError::WrongState { .. })
    ));
    w.rank(&mut s).unwrap();
    assert!(matches!(
        w.select(&mut s, 9),
        Err(WorkflowError::IndexOutOfRange { index: 9, len: 4 })
    ));
    assert_eq!(s.state, SessionState::Ranked);
    let i = forecast_index(&s);
    w.select(&mut s, i).unwrap();
    assert!(matches!(w.confirm(&mut s), Err(WorkflowError::WrongState { .. })));
    assert!(matches!(w.rank(&mut s), Err(WorkflowError::WrongState { .. })));
}

#[test]
fn confirmed_sessions_are_frozen() {
    let w = workflow();
    let mut s = w
        .create(SessionStore::new_id(), &fixture("weather.wsdl"), &fixture("registry"))
        .unwrap();
    w.rank(&mut s).unwrap();
    let i = forecast_index(&s);
    w.select(&mut s, i).unwrap();
    w.draft(&mut s, &weather_plan()).unwrap();
    w.confirm(&mut s).unwrap();
    let frozen = s.clone();
    assert!(w.rank(&mut s).is_err());
    assert!(w.select(&mut s, 0).is_err());
    assert!(w.draft(&mut s, &MatchingPlan::default()).is_err());
    assert!(w.confirm(&mut s).is_err());
    assert_eq!(s, frozen);
}

#[test]
fn drafts_accumulate_and_report() {
    let w = workflow();
    let mut s = w
        .create(SessionStore::new_id(), &fixture("weather.wsdl"), &fixture("registry"))
        .unwrap();
    w.rank(&mut s).unwrap();
    let i = forecast_index(&s);
    w.select(&mut s, i).unwrap();

    let first = MatchingPlan::default().with("GetWeather", OperationPlan::new("GetWeatherForecast"));
    w.draft(&mut s, &first).unwrap();
    assert!(s.report.has_errors(), "required inputs are still uncovered");
    assert!(matches!(w.confirm(&mut s), Err(WorkflowError::Invalid(_))));
    assert_eq!(s.state, SessionState::MatchingDrafted);

    w.draft(&mut s, &weather_plan()).unwrap();
    let once = s.clone();
    w.draft(&mut s, &weather_plan()).unwrap();
    assert_eq!(s, once);

    // an empty expression removes the entry
    let removal = MatchingPlan::default().with(
        "GetWeather",
        OperationPlan::new("").output("get weather response humidity", ""),
    );
    w.draft(&mut s, &removal).unwrap();
    assert!(!s.plan.operations["GetWeather"]
        .outputs
        .contains_key("get weather response humidity"));
    assert!(!s.report.has_errors());
}

#[test]
fn ranking_is_repeatable() {
    let w = workflow();
    let mut a = w
        .create(SessionStore::new_id(), &fixture("weather.wsdl"), &fixture("registry"))
        .unwrap();
    let mut b = a.clone();
    w.rank(&mut a).unwrap();
    w.rank(&mut b).unwrap();
    assert_eq!(a.ranking, b.ranking);
    w.rank(&mut a).unwrap();
    assert_eq!(a.ranking, b.ranking);
}

#[test]
fn creation_failures() {
    let w = workflow();
    assert!(matches!(
        w.create(SessionStore::new_id(), &fixture("missing.wsdl"), &fixture("registry")),
        Err(WorkflowError::Fetch { .. })
    ));
    assert!(matches!(
        w.create(SessionStore::new_id(), &fixture("taxonomy.txt"), &fixture("registry")),
        Err(WorkflowError::Parse { .. })
    ));
    assert!(matches!(
        w.create(SessionStore::new_id(), &fixture("weather.wsdl"), &fixture("no-such-dir")),
        Err(WorkflowError::Registry(_))
    ));
}

#[test]
fn store_rejects_foreign_ids() {
    let store = SessionStore::open(tempfile::tempdir().unwrap().keep()).unwrap();
    for id in ["../etc/passwd", "abc", "", &SessionStore::new_id()] {
        assert!(matches!(store.load(id), Err(StoreError::NotFound(_))), "{id}");
    }
}

#[test]
fn updates_are_serialized() {
    let w = Arc::new(workflow());
    let store = Arc::new(SessionStore::open(tempfile::tempdir().unwrap().keep()).unwrap());
    let s = w
        .create(SessionStore::new_id(), &fixture("weather.wsdl"), &fixture("registry"))
        .unwrap();
    store.save(&s).unwrap();
    let id = s.id.clone();
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let (w, store, id) = (w.clone(), store.clone(), id.clone());
            std::thread::spawn(move || {
                type Boxed = Box<dyn std::error::Error + Send + Sync>;
                store.update(&id, |s| w.rank(s).map_err(Boxed::from)).map_err(|e| e.to_string())
            })
        })
        .collect();
    let _ = handles.into_iter().map(|h| h.join().unwrap()).collect::<Vec<_>>();
    assert_eq!(store.load(&id).unwrap().state, SessionState::Ranked);
}
