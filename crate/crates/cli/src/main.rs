use std::collections::BTreeSet;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rdfval_core::checker::{check_with, violations_to_graph, CheckOptions, CheckOutcome, OutcomeStatus, DEFAULT_LIMIT};
use rdfval_core::model::{lint_catalog, load_catalog_str, Catalog, Severity};
use rdfval_core::packs::{load_pack, Vocabulary};
use rdfval_core::rdf::{read_graph_file, write_ntriples};
use rdfval_core::report::{aggregate, matrix_file_stem, render_matrix, summarize_counts, CountRow, OutcomeSet};
use rdfval_harvest::campaign::{DEFAULT_CONCURRENCY, SOURCES_FILE};
use rdfval_harvest::{
    default_classes, harvest_sources, load_campaign, load_sources, run_campaign, CampaignOptions, CampaignRecord,
    HarvestRunOptions, HarvestStatus, Source,
};

/// Catalog file stored next to campaign results so `report` can re-render them.
const CAMPAIGN_CATALOG: &str = "catalog.json";

#[derive(Parser)]
#[command(name = "rdfval", version, about = "Check RDF data against severity-classified constraint catalogs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check local RDF files against a catalog.
    Validate(ValidateArgs),
    /// Download data sets from SPARQL endpoints.
    Harvest(HarvestArgs),
    /// Harvest, check and report over a list of endpoints.
    Campaign(CampaignArgs),
    /// Re-render reports from a campaign directory.
    Report(ReportArgs),
    /// List or export the shipped constraint packs.
    Packs(PacksArgs),
    /// Static checks over a catalog.
    Lint(LintArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CatalogChoice {
    /// Catalog JSON file.
    #[arg(long, value_name = "PATH")]
    catalog: Option<PathBuf>,
    /// Shipped pack: DDI-RDF, QB or SKOS.
    #[arg(long, value_name = "NAME")]
    pack: Option<Vocabulary>,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct OptionalCatalogChoice {
    #[arg(long, value_name = "PATH")]
    catalog: Option<PathBuf>,
    #[arg(long, value_name = "NAME")]
    pack: Option<Vocabulary>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FailOn {
    Info,
    Warning,
    Error,
}

impl From<FailOn> for Severity {
    fn from(f: FailOn) -> Self {
        match f {
            FailOn::Info => Severity::Info,
            FailOn::Warning => Severity::Warning,
            FailOn::Error => Severity::Error,
        }
    }
}

#[derive(Args)]
struct CheckLimits {
    /// Stop collecting violations of one constraint after N.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_LIMIT, value_parser = clap::value_parser!(usize))]
    limit: usize,
    /// Wall-clock budget per constraint in seconds; `inf` for none.
    #[arg(long, value_name = "SECONDS", value_parser = parse_budget)]
    budget: Option<Budget>,
}

#[derive(Clone, Copy)]
struct Budget(Option<Duration>);

fn parse_budget(s: &str) -> Result<Budget, String> {
    let secs: f64 = s.parse().map_err(|_| format!("not a number of seconds: {s}"))?;
    if secs.is_nan() || secs < 0.0 {
        return Err(format!("budget must be a non-negative number of seconds: {s}"));
    }
    Ok(Budget(if secs.is_infinite() { None } else { Some(Duration::from_secs_f64(secs)) }))
}

impl CheckLimits {
    fn options(&self) -> Result<CheckOptions> {
        if self.limit == 0 {
            bail!("--limit must be at least 1");
        }
        Ok(CheckOptions { limit: Some(self.limit), budget: self.budget.and_then(|b| b.0), parallel: true })
    }
}

#[derive(Args)]
struct ValidateArgs {
    /// RDF files (N-Triples or Turtle, optionally gzipped); one matrix column each.
    #[arg(long, value_name = "PATH", num_args = 1.., required = true)]
    data: Vec<PathBuf>,
    #[command(flatten)]
    catalog: CatalogChoice,
    #[command(flatten)]
    limits: CheckLimits,
    /// Exit with 1 when a constraint of at least this severity is violated.
    #[arg(long, value_enum, default_value = "error")]
    fail_on: FailOn,
    /// Directory for the matrix, violation graphs and outcomes.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HarvestSettings {
    /// JSON array of sources.
    #[arg(long, value_name = "FILE")]
    sources: PathBuf,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Overrides every source's page size.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    page_size: Option<u64>,
    /// Overrides every source's request timeout, in seconds.
    #[arg(long, value_name = "S")]
    timeout: Option<f64>,
    /// Sources harvested at once.
    #[arg(long, value_name = "K", default_value_t = DEFAULT_CONCURRENCY as u64, value_parser = clap::value_parser!(u64).range(1..))]
    concurrency: u64,
}

impl HarvestSettings {
    fn load(&self) -> Result<Vec<Source>> {
        let mut sources = load_sources(&self.sources)?;
        if let Some(t) = self.timeout {
            if !(t.is_finite() && t > 0.0) {
                bail!("--timeout must be a positive number of seconds");
            }
        }
        for s in &mut sources {
            if let Some(n) = self.page_size {
                s.page_size = n as usize;
            }
            if let Some(t) = self.timeout {
                s.timeout = Duration::from_secs_f64(t);
            }
        }
        Ok(sources)
    }

    fn run_options(&self) -> HarvestRunOptions {
        let classes: Vec<String> = Vocabulary::ALL.iter().flat_map(|v| default_classes(*v)).collect::<BTreeSet<_>>().into_iter().collect();
        let mut opts = HarvestRunOptions::new(&self.out, classes);
        opts.concurrency = self.concurrency as usize;
        opts
    }
}

#[derive(Args)]
struct HarvestArgs {
    #[command(flatten)]
    settings: HarvestSettings,
}

#[derive(Args)]
struct CampaignArgs {
    #[command(flatten)]
    settings: HarvestSettings,
    #[command(flatten)]
    catalog: CatalogChoice,
    #[command(flatten)]
    limits: CheckLimits,
}

#[derive(Args)]
struct ReportArgs {
    /// Campaign directory.
    #[arg(long, value_name = "DIR")]
    from: PathBuf,
    /// Output directory; defaults to DIR/report.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Catalog to render against instead of the one stored in DIR.
    #[command(flatten)]
    catalog: OptionalCatalogChoice,
}

#[derive(Args)]
struct PacksArgs {
    /// Write this pack's catalog and fixtures.
    #[arg(long, value_name = "NAME")]
    export: Option<Vocabulary>,
    /// Target directory for --export.
    #[arg(long, value_name = "DIR", default_value = ".", requires = "export")]
    out: PathBuf,
}

#[derive(Args)]
struct LintArgs {
    #[command(flatten)]
    catalog: CatalogChoice,
}

struct Style {
    color: bool,
}

impl Style {
    fn detect() -> Self {
        Style { color: std::env::var_os("RDFVAL_NO_COLOR").is_none() && std::io::stdout().is_terminal() }
    }

    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn status(&self, s: &HarvestStatus) -> String {
        let code = match s {
            HarvestStatus::Complete => "32",
            HarvestStatus::Partial { .. } => "33",
            HarvestStatus::Unavailable { .. } => "31",
        };
        self.paint(code, &s.to_string())
    }
}

/// Catalog plus its source text, kept for persisting alongside results.
fn load_catalog_choice(catalog: Option<&Path>, pack: Option<Vocabulary>) -> Result<(Catalog, String)> {
    match (catalog, pack) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading catalog {}", path.display()))?;
            let cat = load_catalog_str(&text).with_context(|| format!("loading catalog {}", path.display()))?;
            Ok((cat, text))
        }
        (None, Some(v)) => {
            let pack = load_pack(v);
            Ok((pack.catalog, pack.catalog_source.to_string()))
        }
        (None, None) => bail!("one of --catalog or --pack is required"),
    }
}

fn vocabulary_label(cat: &Catalog) -> String {
    let v = cat.vocabularies();
    if v.is_empty() {
        "catalog".into()
    } else {
        v.join("+")
    }
}

/// Outcomes as JSON without wall times, so reruns give identical files.
fn outcomes_json(runs: &[(String, Vec<CheckOutcome>)]) -> Result<String> {
    let mut value = serde_json::Value::Array(Vec::new());
    for (source, outcomes) in runs {
        let mut list = serde_json::to_value(outcomes)?;
        for o in list.as_array_mut().into_iter().flatten() {
            if let Some(obj) = o.as_object_mut() {
                obj.remove("wall_time");
            }
        }
        value.as_array_mut().expect("array").push(serde_json::json!({"source": source, "outcomes": list}));
    }
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

fn source_names(paths: &[PathBuf]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    paths
        .iter()
        .map(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("data");
            let stem = [".gz", ".nt", ".ttl", ".turtle"].iter().fold(name.to_string(), |n, ext| {
                n.strip_suffix(ext).map(str::to_string).unwrap_or(n)
            });
            let mut candidate = stem.clone();
            let mut i = 2;
            while !seen.insert(candidate.clone()) {
                candidate = format!("{stem}-{i}");
                i += 1;
            }
            candidate
        })
        .collect()
}

fn summary_line(style: &Style, name: &str, outcomes: &[CheckOutcome]) -> String {
    let count = |f: &dyn Fn(&OutcomeStatus) -> bool| outcomes.iter().filter(|o| f(&o.status)).count();
    let violated = count(&|s| matches!(s, OutcomeStatus::Violated { .. } | OutcomeStatus::Truncated { .. }));
    let failed = count(&|s| matches!(s, OutcomeStatus::EngineFailure { .. }));
    let ok = count(&|s| matches!(s, OutcomeStatus::Ok));
    let ni = count(&|s| matches!(s, OutcomeStatus::NotImplemented));
    let total: usize = outcomes.iter().map(|o| o.count()).sum();
    let v = style.paint(if violated > 0 { "31" } else { "32" }, &format!("{violated} violated"));
    format!("{name}: {v} ({total} violations), {ok} ok, {failed} failed, {ni} not implemented")
}

fn validate(args: ValidateArgs, style: &Style) -> Result<ExitCode> {
    let (catalog, _) = load_catalog_choice(args.catalog.catalog.as_deref(), args.catalog.pack)?;
    let opts = args.limits.options()?;
    let names = source_names(&args.data);
    let mut runs = Vec::new();
    for (path, name) in args.data.iter().zip(names) {
        let g = read_graph_file(path).with_context(|| format!("parsing {}", path.display()))?;
        runs.push((name, check_with(&g, &catalog, &opts)));
    }
    let matrix = render_matrix(&runs, &catalog)?;
    for (name, outcomes) in &runs {
        println!("{}", summary_line(style, name, outcomes));
    }
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            matrix.write(dir, &matrix_file_stem(&vocabulary_label(&catalog)))?;
            for (name, outcomes) in &runs {
                let path = dir.join(format!("{name}.violations.nt"));
                let mut file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                write_ntriples(&violations_to_graph(outcomes), &mut file)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let path = dir.join("outcomes.json");
            std::fs::write(&path, outcomes_json(&runs)?).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{}", matrix.markdown),
    }
    let threshold = Severity::from(args.fail_on);
    let failing = runs.iter().flat_map(|(_, o)| o).any(|o| {
        o.is_violated() && catalog.get(&o.constraint_id).is_some_and(|c| c.severity >= threshold)
    });
    Ok(if failing { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn harvest(args: HarvestArgs, style: &Style) -> Result<ExitCode> {
    let sources = args.settings.load()?;
    let reports = harvest_sources(&sources, &args.settings.run_options());
    let mut persist_failed = false;
    for r in &reports {
        let skipped = if r.skipped { " (already harvested)" } else { "" };
        println!("{}\t{}\t{} triples{skipped}", r.record.abbreviation, style.status(&r.record.status), r.record.triples);
        if let Some(e) = &r.error {
            eprintln!("error: {}: {e}", r.record.abbreviation);
            persist_failed = true;
        }
    }
    Ok(if persist_failed { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn validated(records: &[CampaignRecord]) -> Vec<(String, Vec<CheckOutcome>)> {
    records
        .iter()
        .filter(|r| !r.source.record.status.is_unavailable())
        .map(|r| (r.source.record.abbreviation.clone(), r.outcomes.clone()))
        .collect()
}

/// Matrix, aggregate table and data-set counts for one campaign.
fn write_reports(records: &[CampaignRecord], catalog: &Catalog, out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let columns = validated(records);
    let label = vocabulary_label(catalog);
    render_matrix(&columns, catalog)?.write(out, &matrix_file_stem(&label))?;
    let runs: Vec<Vec<CheckOutcome>> = columns.iter().map(|(_, o)| o.clone()).collect();
    aggregate(&[OutcomeSet { catalog, runs: &runs }]).render().write(out, "aggregate")?;
    let counts = CountRow {
        vocabulary: label,
        datasets: columns.len() as u64,
        triples: records
            .iter()
            .filter(|r| !r.source.record.status.is_unavailable())
            .map(|r| r.source.record.triples as u64)
            .sum(),
    };
    summarize_counts(&[counts]).write(out, "data-sets")?;
    let unavailable: Vec<&str> = records
        .iter()
        .filter(|r| r.source.record.status.is_unavailable())
        .map(|r| r.source.record.abbreviation.as_str())
        .collect();
    let text: String = unavailable.iter().map(|a| format!("{a}\n")).collect();
    std::fs::write(out.join("unavailable.txt"), text).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn campaign(args: CampaignArgs, style: &Style) -> Result<ExitCode> {
    let (catalog, catalog_text) = load_catalog_choice(args.catalog.catalog.as_deref(), args.catalog.pack)?;
    let check = args.limits.options()?;
    let sources = args.settings.load()?;
    let out = &args.settings.out;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    std::fs::write(out.join(CAMPAIGN_CATALOG), &catalog_text).context("storing the campaign catalog")?;
    let mut opts = CampaignOptions { run: args.settings.run_options(), limit: check.limit, budget: check.budget };
    opts.run.out = out.clone();
    let result = run_campaign(&sources, &catalog, &opts);
    let mut persist_failed = false;
    for r in &result.records {
        println!(
            "{}\t{}\t{} triples\t{} violations",
            r.source.record.abbreviation,
            style.status(&r.source.record.status),
            r.source.record.triples,
            r.violations()
        );
        if let Some(e) = &r.source.error {
            eprintln!("error: {}: {e}", r.source.record.abbreviation);
            persist_failed = true;
        }
    }
    let s = result.summary;
    println!(
        "{} sources: {} validated ({} partial), {} unavailable; {} triples, {} violations",
        s.sources, s.validated, s.partial, s.unavailable, s.triples, s.violations
    );
    write_reports(&result.records, &catalog, &out.join("report"))?;
    Ok(if persist_failed { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn report(args: ReportArgs) -> Result<ExitCode> {
    let (catalog, _) = match (args.catalog.catalog.as_deref(), args.catalog.pack) {
        (None, None) => {
            let stored = args.from.join(CAMPAIGN_CATALOG);
            if !stored.is_file() {
                bail!("{} has no {CAMPAIGN_CATALOG}; pass --catalog or --pack", args.from.display());
            }
            load_catalog_choice(Some(&stored), None)?
        }
        (c, p) => load_catalog_choice(c, p)?,
    };
    if !args.from.join(SOURCES_FILE).is_file() && !args.from.is_dir() {
        bail!("{} is not a campaign directory", args.from.display());
    }
    let records = load_campaign(&args.from)?;
    let out = args.out.unwrap_or_else(|| args.from.join("report"));
    write_reports(&records, &catalog, &out)?;
    println!("{} sources rendered into {}", records.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn packs(args: PacksArgs) -> Result<ExitCode> {
    let Some(v) = args.export else {
        for v in Vocabulary::ALL {
            let p = load_pack(v);
            let implemented = p.catalog.iter().filter(|c| c.is_implemented()).count();
            let fixtures: Vec<&str> = p.fixtures.iter().map(|f| f.name).collect();
            println!(
                "{}\t{implemented} implemented\t{} catalogued only\tfixtures: {}",
                v.name(),
                p.catalog.len() - implemented,
                fixtures.join(", ")
            );
        }
        return Ok(ExitCode::SUCCESS);
    };
    let pack = load_pack(v);
    let dir = args.out.join(v.slug());
    let fixtures = dir.join("fixtures");
    std::fs::create_dir_all(&fixtures).with_context(|| format!("creating {}", fixtures.display()))?;
    std::fs::write(dir.join("catalog.json"), pack.catalog_source).context("writing catalog.json")?;
    for f in &pack.fixtures {
        std::fs::write(fixtures.join(format!("{}.nt", f.name)), f.ntriples)?;
        let mut expected = serde_json::to_string_pretty(&f.expected)?;
        expected.push('\n');
        std::fs::write(fixtures.join(format!("{}.expected.json", f.name)), expected)?;
    }
    let implemented = pack.catalog.iter().filter(|c| c.is_implemented()).count();
    println!(
        "{}: {implemented} implemented constraints ({} catalogued only), {} fixtures -> {}",
        v.name(),
        pack.catalog.len() - implemented,
        pack.fixtures.len(),
        dir.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn lint(args: LintArgs) -> Result<ExitCode> {
    let (catalog, _) = load_catalog_choice(args.catalog.catalog.as_deref(), args.catalog.pack)?;
    let findings = lint_catalog(&catalog);
    for f in &findings {
        println!("{f}");
    }
    println!("{} findings", findings.len());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::detect();
    let result = match cli.command {
        Command::Validate(a) => validate(a, &style),
        Command::Harvest(a) => harvest(a, &style),
        Command::Campaign(a) => campaign(a, &style),
        Command::Report(a) => report(a),
        Command::Packs(a) => packs(a),
        Command::Lint(a) => lint(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
