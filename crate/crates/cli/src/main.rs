use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use forge_core::balance::{balance, balance_report, BalanceConfig};
use forge_core::dataset::{compute_stats, read_dataset, read_jsonl, read_records, split_corpus, write_dataset, write_jsonl, write_records};
use forge_core::doc::corpus::{load, write_corpus};
use forge_core::eval::{evaluate, Averaging, EvalOptions, Prediction};
use forge_core::{atomic_write, generate_corpus, par, DocGraphs, Document, GenConfig, TaskId, TemplateRegistry};
use log::{info, warn};

#[derive(Parser)]
#[command(name = "forge", version, about = "Build and score document-structure VQA datasets")]
struct Cli {
    /// Worker threads; 0 picks one per core.
    #[arg(long, env = "FORGE_THREADS", default_value_t = 0, global = true)]
    threads: usize,
    /// Repeat for more log output.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate annotation files and store them as a preprocessed corpus.
    Ingest {
        /// Directory of annotation JSON files, or an existing corpus file.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate question-answer records from a corpus.
    Generate(GenerateArgs),
    /// Down-sample records to even out answers and slot values.
    Balance {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1.5)]
        answer_ratio: f64,
        #[arg(long, default_value_t = 2.0)]
        param_ratio: f64,
        /// Where to write the balance report JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Split records by document into train, valid and test files.
    Split {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output directory for train.jsonl, valid.jsonl and test.jsonl.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Train, valid and test shares, comma separated.
        #[arg(long, value_parser = parse_ratios, default_value = "0.8,0.1,0.1")]
        ratios: [f64; 3],
    },
    /// Descriptive statistics of a record file or split directory.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score predictions against gold records.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Reject unknown qids and missing predictions.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = AveragingArg::Macro)]
        averaging: AveragingArg,
        /// Write the JSON report here; the table still goes to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Show one document's elements and graphs.
    Inspect {
        /// Annotation directory or corpus file.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        doc: String,
        #[arg(long)]
        page: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Template registry utilities.
    Templates {
        #[command(subcommand)]
        action: TemplatesAction,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// Annotation directory or corpus file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "A,B,C")]
    tasks: Vec<TaskId>,
    /// Keep at most this many records per template on each page or document.
    #[arg(long)]
    template_cap: Option<usize>,
    /// Share of task B questions answered NA that are kept.
    #[arg(long, default_value_t = 0.1)]
    na_retention: f64,
    /// Manifest path; defaults to the output path with `.manifest.json`.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Also write per-question program traces as JSONL.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TemplatesAction {
    /// Print the registry as JSON.
    Dump {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AveragingArg {
    Macro,
    Micro,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_ratios(s: &str) -> Result<[f64; 3], String> {
    let parts = s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"))).collect::<Result<Vec<_>, _>>()?;
    parts.try_into().map_err(|v: Vec<f64>| format!("expected three ratios, got {}", v.len()))
}

fn check_input(path: &Path) -> Result<()> {
    if !path.exists() {
        bail!("input {} does not exist", path.display());
    }
    Ok(())
}

fn check_output(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            bail!("output directory {} does not exist", dir.display())
        }
        _ => Ok(()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => atomic_write(path, format!("{text}\n").as_bytes()).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn ingest(input: &Path, out: &Path) -> Result<()> {
    check_input(input)?;
    check_output(out)?;
    let docs = load(input)?;
    let pages: usize = docs.iter().map(|d| d.pages.len()).sum();
    write_corpus(&docs, out)?;
    info!("ingested {} documents, {pages} pages", docs.len());
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<()> {
    check_input(&args.input)?;
    check_output(&args.out)?;
    let manifest_path = args.manifest.clone().unwrap_or_else(|| args.out.with_extension("manifest.json"));
    let cfg = GenConfig {
        tasks: args.tasks.iter().copied().collect::<BTreeSet<_>>(),
        seed: args.seed,
        template_cap: args.template_cap,
        na_retention: args.na_retention,
        trace: args.trace.is_some(),
    };
    if let Err(msg) = cfg.validate() {
        bail!(msg);
    }
    let docs = load(&args.input)?;
    let result = generate_corpus(&docs, &cfg);
    write_records(&args.out, &result.records)?;
    if let Some(path) = &args.trace {
        write_jsonl(path, &result.traces)?;
    }
    let manifest = result.manifest(&args.out.to_string_lossy(), &cfg);
    emit(&serde_json::to_string_pretty(&manifest)?, Some(&manifest_path))?;
    info!("{} records from {} documents, {} excluded", result.records.len(), docs.len(), result.excluded.len());
    Ok(())
}

/// Records from a single JSONL file or the union of a split directory.
fn read_any(path: &Path) -> Result<Vec<forge_core::QARecord>> {
    check_input(path)?;
    if path.is_dir() {
        Ok(read_dataset(path)?.into_iter().flat_map(|s| s.records).collect())
    } else {
        Ok(read_records(path)?)
    }
}

fn find_doc<'a>(docs: &'a [Document], id: &str) -> Result<&'a Document> {
    docs.iter().find(|d| d.doc_id == id).with_context(|| format!("unknown document {id:?}"))
}

fn inspect_text(doc: &Document, graphs: &DocGraphs, page: Option<usize>) -> String {
    let mut out = format!("document {} ({} pages, {} elements)\n", doc.doc_id, doc.pages.len(), doc.element_count());
    for p in doc.pages.iter().filter(|p| page.is_none_or(|i| p.index == i)) {
        out.push_str(&format!("\npage {}\n", p.index));
        let mut els: Vec<_> = p.elements.iter().collect();
        els.sort_by_key(|e| e.page_reading_index);
        for e in els {
            let b = &e.bbox;
            let chain = graphs.logical.ancestors(&e.id).map(|a| a.join(" < ")).unwrap_or_default();
            out.push_str(&format!(
                "  {:>3} {:>4} {:<14} {:<14} [{:.3} {:.3} {:.3} {:.3}] {:?}\n       parents: {}\n",
                e.page_reading_index,
                e.doc_reading_index,
                e.id,
                e.category.as_str(),
                b.x0,
                b.y0,
                b.x1,
                b.y1,
                e.text,
                if chain.is_empty() { "-".to_string() } else { chain }
            ));
        }
        let g = &graphs.spatial[p.index];
        let mut edges = g.edges();
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out.push_str("  spatial edges (dst is rel of src):\n");
        for (s, d, r) in edges {
            out.push_str(&format!("    {s} -> {d}: {r}\n"));
        }
    }
    out
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest { input, out } => ingest(&input, &out),
        Command::Generate(args) => generate(args),
        Command::Balance { input, out, seed, answer_ratio, param_ratio, report } => {
            check_output(&out)?;
            let cfg = BalanceConfig { seed, answer_ratio, param_ratio };
            cfg.validate()?;
            let records = read_any(&input)?;
            let kept = balance(&records, &cfg);
            write_records(&out, &kept)?;
            if let Some(path) = report {
                emit(&serde_json::to_string_pretty(&balance_report(&records, &kept))?, Some(&path))?;
            }
            info!("kept {} of {} records", kept.len(), records.len());
            Ok(())
        }
        Command::Split { input, out, seed, ratios } => {
            let records = read_any(&input)?;
            let splits = split_corpus(&records, ratios, seed)?;
            write_dataset(&splits, &out)?;
            for s in &splits {
                info!("{}: {} documents, {} records", s.name, s.doc_ids.len(), s.records.len());
            }
            Ok(())
        }
        Command::Stats { input, out } => {
            if let Some(path) = &out {
                check_output(path)?;
            }
            let stats = compute_stats(&read_any(&input)?);
            emit(&serde_json::to_string_pretty(&stats)?, out.as_deref())
        }
        Command::Eval { gold, pred, strict, averaging, out } => {
            check_input(&gold)?;
            check_input(&pred)?;
            let gold = read_records(&gold)?;
            let preds: Vec<Prediction> = read_jsonl(&pred)?;
            let averaging = match averaging {
                AveragingArg::Macro => Averaging::Macro,
                AveragingArg::Micro => Averaging::Micro,
            };
            if !strict {
                let known: BTreeSet<&str> = gold.iter().map(|r| r.qid.as_str()).collect();
                let unknown = preds.iter().filter(|p| !known.contains(p.qid.as_str())).count();
                if unknown > 0 {
                    warn!("ignoring {unknown} predictions with unknown qids");
                }
            }
            let report = evaluate(&gold, &preds, EvalOptions { averaging, strict })?;
            print!("{}", report.breakdown());
            emit(&serde_json::to_string_pretty(&report)?, out.as_deref())
        }
        Command::Inspect { corpus, doc, page, format } => {
            check_input(&corpus)?;
            let docs = load(&corpus)?;
            let d = find_doc(&docs, &doc)?;
            if let Some(p) = page {
                if p >= d.pages.len() {
                    bail!("unknown page {p} of document {doc:?} ({} pages)", d.pages.len());
                }
            }
            let graphs = DocGraphs::build(d)?;
            match format {
                Format::Json => emit(&serde_json::to_string_pretty(&graphs.dump(page))?, None),
                Format::Text => {
                    print!("{}", inspect_text(d, &graphs, page));
                    Ok(())
                }
            }
        }
        Command::Templates { action: TemplatesAction::Dump { out } } => {
            emit(&TemplateRegistry::builtin().dump_json(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match par::with_threads(cli.threads, || run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
