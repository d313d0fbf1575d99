use std::error::Error;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use wsmatch_core::annotate::annotate_pair;
use wsmatch_core::mapping::{validate_plan, MatchingPlan, Severity};
use wsmatch_core::matcher::{match_services, suggest_matching, RowSuggestions};
use wsmatch_core::similarity::{SimilarityEngine, Weights};
use wsmatch_core::wsdl::{parse_wsdl_with, DocumentLoader, ServiceDescription};
use wsmatch_service::api::{router, AppState};
use wsmatch_service::{load_registry, Config, SessionStore, WebLoader, Workflow};

#[derive(Parser)]
#[command(name = "wsmatch", version, about = "Find and annotate substitutes for a failing web service")]
struct Cli {
    #[command(flatten)]
    settings: Settings,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Settings {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Lexicon fixture file or WordNet dictionary directory.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Input, output and name weights, e.g. `1,1,2`.
    #[arg(long, global = true, value_parser = parse_weights)]
    weights: Option<Weights>,
    /// Similarity above which two sentences are considered matched.
    #[arg(long, global = true)]
    threshold: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Rank every registry entry by similarity to the target.
    Rank {
        target: String,
        /// Directory of WSDL files, JSON manifest, or manifest URL.
        registry: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the operation correspondence table of two services.
    Match {
        target: String,
        candidate: String,
        #[arg(long)]
        json: bool,
    },
    /// Write a matching plan into both documents as SAWSDL annotations.
    Annotate {
        target: String,
        candidate: String,
        plan: PathBuf,
        /// Directory receiving the two annotated documents.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1")]
        bind: std::net::IpAddr,
    },
}

fn parse_weights(text: &str) -> Result<Weights, String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [p1, p2, p3] => Weights::new(p1, p2, p3).map_err(|e| e.to_string()),
        _ => Err("expected three comma-separated weights".into()),
    }
}

type AnyError = Box<dyn Error + Send + Sync>;

fn resolve_config(s: &Settings) -> Result<Config, AnyError> {
    let mut config = match &s.config {
        Some(path) => Config::from_file(path)?,
        None => Config::default(),
    };
    if let Some(l) = &s.lexicon {
        config.lexicon = Some(l.clone());
    }
    if let Some(w) = s.weights {
        config.weights = w;
    }
    if let Some(t) = s.threshold {
        config.threshold = t;
    }
    config.validate()?;
    Ok(config)
}

fn fetch(loader: &WebLoader, uri: &str) -> Result<ServiceDescription, AnyError> {
    let text = loader.load(uri).map_err(|m| format!("cannot read {uri}: {m}"))?;
    let service = parse_wsdl_with(text.as_bytes(), uri, loader).map_err(|e| format!("{uri}: {e}"))?;
    for w in &service.warnings {
        log::warn!("{uri}: {w}");
    }
    Ok(service)
}

fn rank(config: &Config, target: &str, registry: &str, json: bool) -> Result<ExitCode, AnyError> {
    let lexicon = config.load_lexicon()?;
    let loader = WebLoader::default();
    let engine = SimilarityEngine::new(&lexicon).with_weights(config.weights);
    let target = fetch(&loader, target)?;
    let manifest = load_registry(registry, &loader)?;
    let (pool, mut failures) = manifest.fetch(&loader);
    let ranking = engine.rank_candidates(&target, &pool)?;
    failures.extend(ranking.failures.iter().cloned());
    if json {
        let rows: Vec<_> = ranking
            .candidates
            .iter()
            .map(|c| serde_json::json!({"name": c.service.name, "wsdlUri": c.service.source_uri, "score": c.score}))
            .collect();
        println!("{}", serde_json::to_string_pretty(&serde_json::json!({"candidates": rows, "failures": failures}))?);
    } else {
        let width = ranking.candidates.iter().map(|c| c.service.name.len()).max().unwrap_or(0).max(7);
        println!("{:>4}  {:>6}  {:<width$}  wsdl", "rank", "score", "service");
        for (i, c) in ranking.candidates.iter().enumerate() {
            println!("{:>4}  {:>6.4}  {:<width$}  {}", i + 1, c.score, c.service.name, c.service.source_uri);
        }
        for f in &failures {
            eprintln!("skipped {} ({}): {}", f.name, f.source_uri, f.error);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn matching(config: &Config, target: &str, candidate: &str, json: bool) -> Result<ExitCode, AnyError> {
    let lexicon = config.load_lexicon()?;
    let loader = WebLoader::default();
    let engine = SimilarityEngine::new(&lexicon).with_weights(config.weights);
    let a = fetch(&loader, target)?;
    let b = fetch(&loader, candidate)?;
    let table = match_services(&engine, &a, &b, config.threshold)?;
    let suggestions = suggest_matching(&table);
    if json {
        let out = serde_json::json!({"table": table, "suggestions": suggestions});
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(ExitCode::SUCCESS);
    }
    println!("{table}");
    for row in &suggestions {
        match row {
            RowSuggestions::Ranked { operation, candidates } => {
                let list: Vec<String> = candidates
                    .iter()
                    .map(|s| format!("{} {}({:.2})", s.operation, s.relation, s.score))
                    .collect();
                println!("{operation}: {}", list.join(", "));
            }
            RowSuggestions::NoSuggestion { operation } => println!("{operation}: no suggestion"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn output_name(dir: &Path, uri: &str, role: &str) -> PathBuf {
    let stem = Path::new(uri.rsplit('/').next().unwrap_or(uri))
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "service".into());
    dir.join(format!("{stem}.{role}.wsdl"))
}

fn annotate(target: &str, candidate: &str, plan_path: &Path, out_dir: &Path) -> Result<ExitCode, AnyError> {
    let loader = WebLoader::default();
    let a = fetch(&loader, target)?;
    let b = fetch(&loader, candidate)?;
    let text = std::fs::read_to_string(plan_path).map_err(|e| format!("{}: {e}", plan_path.display()))?;
    let plan: MatchingPlan = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", plan_path.display()))?;
    let report = validate_plan(&plan, &a, &b);
    for issue in &report.issues {
        let label = match issue.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        eprintln!("{label}: {}: {}", issue.location, issue.message);
    }
    if report.has_errors() {
        return Ok(ExitCode::from(2));
    }
    let pair = annotate_pair(&a, &b, &plan)?;
    std::fs::create_dir_all(out_dir)?;
    let first = output_name(out_dir, target, "substituted");
    let second = output_name(out_dir, candidate, "substituent");
    std::fs::write(&first, &pair.substituted_doc)?;
    std::fs::write(&second, &pair.substituent_doc)?;
    println!("{}", first.display());
    println!("{}", second.display());
    Ok(ExitCode::SUCCESS)
}

fn serve(mut config: Config, port: Option<u16>, data_dir: Option<PathBuf>, bind: std::net::IpAddr) -> Result<ExitCode, AnyError> {
    if let Some(p) = port {
        config.port = p;
    }
    if let Some(d) = data_dir {
        config.data_dir = d;
    }
    let lexicon = Arc::new(config.load_lexicon()?);
    let workflow = Workflow::new(lexicon, config.weights, config.threshold, Arc::new(WebLoader::default()));
    let store = SessionStore::open(&config.data_dir)?;
    let state = AppState {
        workflow: Arc::new(workflow),
        store: Arc::new(store),
    };
    let addr = SocketAddr::new(bind, config.port);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(state))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok::<_, AnyError>(())
    })?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, AnyError> {
    let config = resolve_config(&cli.settings)?;
    match cli.command {
        Command::Rank { target, registry, json } => rank(&config, &target, &registry, json),
        Command::Match { target, candidate, json } => matching(&config, &target, &candidate, json),
        Command::Annotate {
            target,
            candidate,
            plan,
            out_dir,
        } => annotate(&target, &candidate, &plan, &out_dir),
        Command::Serve { port, data_dir, bind } => serve(config, port, data_dir, bind),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = e.source();
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
