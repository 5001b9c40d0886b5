use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::Parser;
use devctx_core::ingest::issue_xml::adapt_issue_export;
use devctx_core::ingest::vcs_log::{adapt_vcs_log, AdapterReport};
use devctx_core::ingest::write_jsonl;
use devctx_core::query::context_for;
use devctx_core::store::snapshot::{load_snapshot, save_snapshot};
use devctx_core::{parse_revisions, parse_tasks, run_extraction, IdentityMap, MatchConfig, Store};
use devctx_server::{stats_json, ServeConfig};

mod args;
mod config;
mod render;

use args::{AdaptArgs, Cli, Command, ExtractArgs, Format, IngestArgs, QueryArgs, ServeArgs, StatsArgs};
use config::FileConfig;

struct Ctx {
    quiet: bool,
    file: FileConfig,
}

impl Ctx {
    fn match_config(&self, overrides: &args::MatchArgs) -> Result<MatchConfig> {
        let mut cfg = self.file.matching.clone();
        overrides.apply(&mut cfg);
        cfg.validate().context("invalid match configuration")?;
        Ok(cfg)
    }

    fn note(&self, text: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", text.as_ref());
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

fn load(path: &Path) -> Result<Store> {
    load_snapshot(path).with_context(|| format!("cannot load snapshot {}", path.display()))
}

fn print(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn adapt(ctx: &Ctx, args: AdaptArgs) -> Result<()> {
    let (count, report) = if let Some(path) = &args.vcs_log {
        let (records, report) = adapt_vcs_log(open(path)?).with_context(|| format!("{}", path.display()))?;
        write_output(&args.out, &records)?;
        (records.len(), report)
    } else if let Some(path) = &args.issue_xml {
        let (records, report) = adapt_issue_export(open(path)?).with_context(|| format!("{}", path.display()))?;
        write_output(&args.out, &records)?;
        (records.len(), report)
    } else {
        bail!("one of --vcs-log or --issue-xml is required");
    };
    report_adapter(ctx, count, &report, &args.out);
    Ok(())
}

fn write_output<T: serde::Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut out = BufWriter::new(file);
    write_jsonl(&mut out, records).with_context(|| format!("cannot write {}", path.display()))?;
    out.flush()?;
    Ok(())
}

fn report_adapter(ctx: &Ctx, count: usize, report: &AdapterReport, out: &Path) {
    ctx.note(format!("wrote {count} records to {}", out.display()));
    if report.dropped_empty > 0 {
        ctx.note(format!("dropped {} empty revisions", report.dropped_empty));
    }
    if report.skipped_paths > 0 {
        ctx.note(format!("skipped {} paths with unknown change status", report.skipped_paths));
    }
    for warning in &report.warnings {
        ctx.note(format!("warning: {warning}"));
    }
}

fn ingest(ctx: &Ctx, args: IngestArgs) -> Result<()> {
    let cfg = ctx.match_config(&args.matching)?;
    let revisions = parse_revisions(open(&args.revisions)?).with_context(|| format!("{}", args.revisions.display()))?;
    let tasks = parse_tasks(open(&args.tasks)?).with_context(|| format!("{}", args.tasks.display()))?;
    let identity = match &args.identity {
        Some(path) => IdentityMap::from_reader(open(path)?).with_context(|| format!("{}", path.display()))?,
        None => IdentityMap::default(),
    };
    let mut store = Store::new();
    let report = store.put_entities(&revisions, &tasks, &identity, &cfg)?;
    save_snapshot(&store, &args.out).with_context(|| format!("cannot write snapshot {}", args.out.display()))?;
    match args.format {
        Format::Json => print(&serde_json::to_string(&report)?)?,
        Format::Table if !ctx.quiet => print(&render::counts(&[
            ("developers", report.developers),
            ("resources", report.resources),
            ("revisions", report.revisions),
            ("tasks", report.tasks),
            ("relations", report.relations),
        ]))?,
        Format::Table => {}
    }
    Ok(())
}

fn extract(ctx: &Ctx, args: ExtractArgs) -> Result<()> {
    let cfg = ctx.match_config(&args.matching)?;
    let mut store = load(&args.snapshot)?;
    let report = run_extraction(&mut store, &cfg, &args.algorithms)?;
    save_snapshot(&store, &args.snapshot)
        .with_context(|| format!("cannot write snapshot {}", args.snapshot.display()))?;
    match args.format {
        Format::Json => print(&serde_json::to_string(&report)?),
        Format::Table if !ctx.quiet => print(&render::report(&report)),
        Format::Table => Ok(()),
    }
}

fn query(ctx: &Ctx, args: QueryArgs) -> Result<()> {
    let store = load(&args.snapshot)?;
    let view = context_for(&store, args.kind.into(), &args.id, args.k, &ctx.file.query)?;
    match args.format {
        Format::Json => print(&view.to_json()),
        Format::Table => print(&render::view(&view)),
    }
}

fn stats(args: StatsArgs) -> Result<()> {
    let store = load(&args.snapshot)?;
    let value = stats_json(&store);
    match args.format {
        Format::Json => print(&serde_json::to_string(&value)?),
        Format::Table => print(&render::stats(&value)),
    }
}

fn serve(ctx: &Ctx, args: ServeArgs) -> Result<()> {
    let defaults = ServeConfig::default();
    let table = &ctx.file.serve;
    let cfg = ServeConfig {
        snapshot: args.snapshot,
        bind: args.bind.or(table.bind).unwrap_or(defaults.bind),
        port: args.port.or(table.port).unwrap_or(defaults.port),
        cors: !args.no_cors && table.cors.unwrap_or(defaults.cors),
        query: ctx.file.query.clone(),
    };
    devctx_server::run(&cfg, |addr| {
        // the address line is the command's output, so --quiet keeps it
        let _ = print(&format!("listening on http://{addr}"));
    })?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx {
        quiet: cli.quiet,
        file: FileConfig::load(cli.config.as_deref())?,
    };
    match cli.command {
        Command::Adapt(args) => adapt(&ctx, args),
        Command::Ingest(args) => ingest(&ctx, args),
        Command::Extract(args) => extract(&ctx, args),
        Command::Query(args) => query(&ctx, args),
        Command::Serve(args) => serve(&ctx, args),
        Command::Stats(args) => stats(args),
    }
}

/// Joins the error chain, skipping causes whose text the previous message
/// already includes.
fn one_line(e: &anyhow::Error) -> String {
    let mut message = String::new();
    let mut last = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !last.contains(&text) {
            if !message.is_empty() {
                message.push_str(": ");
            }
            message.push_str(&text);
        }
        last = text;
    }
    message.replace('\n', " ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = one_line(&e);
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
