use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sneakref::exec::{self, Execution};
use sneakref::extract::ReferenceService;
use sneakref::ingest::RecordCache;
use sneakref::report::{self, ConfigError, ConfigMap, DetectConfig, DupsConfig, PipelineError, ReportConfig};

#[derive(Parser, Debug)]
#[command(name = "sneakref", version, about = "Find references registered in metadata but absent from the document")]
struct Cli {
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Download registered metadata for a list of DOIs into the record cache.
    Fetch(FetchArgs),
    /// Extract reference lists and full text from the corpus PDFs.
    Extract(ExtractArgs),
    /// Run the detectors over a corpus.
    Detect(DetectArgs),
    /// Duplicate-reference analytics over a bulk metadata snapshot.
    Dups(DupsArgs),
    /// Rebuild reports from an earlier run's verdicts.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct FetchArgs {
    /// File with one DOI per line.
    doi_list: PathBuf,
    /// Corpus root whose record cache receives the records.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Record cache directory (overrides --corpus).
    #[arg(long)]
    records: Option<PathBuf>,
    /// Contact address sent to the registry.
    #[arg(long)]
    mailto: Option<String>,
    /// Refetch DOIs already in the cache.
    #[arg(long)]
    refresh: bool,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    corpus: PathBuf,
    /// Base URL of the reference-extraction service.
    #[arg(long)]
    service_url: Option<String>,
}

#[derive(Args, Debug)]
struct DetectArgs {
    corpus: PathBuf,
    /// m0, m1, m2, all, or a comma-separated list.
    #[arg(long)]
    method: Option<String>,
    /// Beneficiary DOI prefix (e.g. 10.38124), or `auto`.
    #[arg(long)]
    prefix: Option<String>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    theta_eq: Option<f64>,
    #[arg(long)]
    min_needle: Option<usize>,
    /// Record cache directory (default: the corpus cache).
    #[arg(long)]
    records: Option<PathBuf>,
    #[arg(long)]
    service_url: Option<String>,
}

#[derive(Args, Debug)]
struct DupsArgs {
    /// Snapshot directory or tar archive of gzip-compressed batch files.
    snapshot: PathBuf,
    #[arg(long)]
    min_dup_refs: Option<u64>,
    /// Leaderboard length.
    #[arg(long)]
    top: Option<usize>,
    /// Earlier aggregates directory to fold in.
    #[arg(long)]
    resume: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    verdicts_dir: PathBuf,
    /// Record cache, needed for the temporal analysis.
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Config(c) => c.into(),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn set_opt<T: ToString>(map: &mut ConfigMap, key: &str, value: &Option<T>) {
    if let Some(v) = value {
        map.set(key, v.to_string());
    }
}

fn set_path(map: &mut ConfigMap, key: &str, value: &Option<PathBuf>) {
    if let Some(v) = value {
        map.set(key, v.display().to_string());
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut map = match &cli.config {
        Some(path) => report::load_config(path)?,
        None => ConfigMap::default(),
    };
    set_path(&mut map, "out", &cli.out);
    set_opt(&mut map, "jobs", &cli.jobs);
    let jobs: usize = map.parsed("jobs")?.unwrap_or(0);
    exec::with_jobs(jobs, move || dispatch(cli.command, map))
}

fn out_dir(map: &ConfigMap) -> PathBuf {
    map.get("out").unwrap_or("out").into()
}

fn execution(map: &ConfigMap) -> Result<Execution, ConfigError> {
    Ok(if map.parsed::<bool>("sequential")?.unwrap_or(false) {
        Execution::Sequential
    } else {
        Execution::Parallel
    })
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn dispatch(command: Command, mut map: ConfigMap) -> Result<(), Failure> {
    match command {
        Command::Fetch(a) => {
            set_path(&mut map, "corpus", &a.corpus);
            set_path(&mut map, "records", &a.records);
            set_opt(&mut map, "mailto", &a.mailto);
            let cache = match (map.get("records"), map.get("corpus")) {
                (Some(r), _) => RecordCache::new(r),
                (None, Some(c)) => RecordCache::under(Path::new(c)),
                (None, None) => RecordCache::under(&out_dir(&map)),
            };
            let list = std::fs::read_to_string(&a.doi_list)
                .map_err(|e| Failure::Runtime(format!("{}: {e}", a.doi_list.display())))?;
            let stats = fetch(&list, &map, &cache, a.refresh)?;
            print_json(&stats);
            Ok(())
        }
        Command::Extract(a) => {
            set_opt(&mut map, "service_url", &a.service_url);
            let service = service(&map)?;
            let stats = report::run_extract(&a.corpus, service.as_deref(), execution(&map)?)?;
            print_json(&stats);
            Ok(())
        }
        Command::Detect(a) => {
            map.set("corpus", a.corpus.display().to_string());
            set_opt(&mut map, "method", &a.method);
            set_opt(&mut map, "prefix", &a.prefix);
            set_opt(&mut map, "theta", &a.theta);
            set_opt(&mut map, "theta_eq", &a.theta_eq);
            set_opt(&mut map, "min_needle", &a.min_needle);
            set_path(&mut map, "records", &a.records);
            set_opt(&mut map, "service_url", &a.service_url);
            let mut cfg = DetectConfig::from_map(&map)?;
            cfg.service = service(&map)?;
            let outcome = report::run_detect(&cfg)?;
            print_json(&outcome.summary);
            Ok(())
        }
        Command::Dups(a) => {
            set_opt(&mut map, "min_dup_refs", &a.min_dup_refs);
            set_opt(&mut map, "top", &a.top);
            set_path(&mut map, "resume", &a.resume);
            let cfg = DupsConfig::from_map(&map)?;
            let (_, summary) = report::run_dups(&a.snapshot, &cfg, &out_dir(&map), execution(&map)?)?;
            print_json(&summary);
            Ok(())
        }
        Command::Report(a) => {
            set_path(&mut map, "records", &a.records);
            let cfg = ReportConfig::from_map(&map)?;
            let out = map.get("out").map(PathBuf::from).unwrap_or_else(|| a.verdicts_dir.clone());
            let records = map.get("records").map(PathBuf::from);
            let summary = report::run_report(&a.verdicts_dir, records.as_deref(), &out, &cfg)?;
            print_json(&summary);
            Ok(())
        }
    }
}

#[cfg(feature = "http")]
fn service(map: &ConfigMap) -> Result<Option<Arc<dyn ReferenceService>>, Failure> {
    use sneakref::extract::{GrobidClient, ServiceConfig};
    let Some(url) = map.get("service_url") else {
        return Ok(None);
    };
    let mut cfg = ServiceConfig {
        base_url: url.to_string(),
        ..ServiceConfig::default()
    };
    if let Some(secs) = map.parsed::<u64>("service_timeout")? {
        cfg.timeout = Duration::from_secs(secs);
    }
    if let Some(c) = map.parsed::<bool>("consolidate")? {
        cfg.consolidate = c;
    }
    let client = GrobidClient::new(cfg).map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(Some(Arc::new(client)))
}

#[cfg(not(feature = "http"))]
fn service(map: &ConfigMap) -> Result<Option<Arc<dyn ReferenceService>>, Failure> {
    match map.get("service_url") {
        Some(_) => Err(Failure::Usage("built without HTTP support; only cached extractions are usable".into())),
        None => Ok(None),
    }
}

#[cfg(feature = "http")]
fn fetch(list: &str, map: &ConfigMap, cache: &RecordCache, refresh: bool) -> Result<report::FetchStats, Failure> {
    use sneakref::ingest::{CrossrefClient, EndpointConfig, ReqwestTransport};
    let mut endpoint = EndpointConfig::default();
    if let Some(base) = map.get("api_base") {
        endpoint.api_base = base.to_string();
    }
    endpoint.contact = map.get("mailto").map(String::from);
    if let Some(ms) = map.parsed::<u64>("politeness_ms")? {
        endpoint.politeness = Duration::from_millis(ms);
    }
    if let Some(n) = map.parsed::<u32>("max_retries")? {
        endpoint.max_retries = n;
    }
    let timeout = Duration::from_secs(map.parsed::<u64>("http_timeout")?.unwrap_or(30));
    let transport = ReqwestTransport::new(timeout).map_err(Failure::Runtime)?;
    let client = CrossrefClient::new(transport, endpoint);
    Ok(report::run_fetch(list, &client, cache, refresh))
}

#[cfg(not(feature = "http"))]
fn fetch(_: &str, _: &ConfigMap, _: &RecordCache, _: bool) -> Result<report::FetchStats, Failure> {
    Err(Failure::Usage("built without HTTP support".into()))
}
