//! The `anchorfill` command line.
//!
//! Every output is written to a temporary file and renamed into place.
//! Binary and TSV outputs get a `<file>.provenance.json` sidecar; NDJSON
//! outputs carry their provenance in the first line. Failures print one
//! line `error[<code>]: <message>` to stderr and exit nonzero.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufReader, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::{Deserialize, Serialize};

use crate::cbow::{build_vocab, load_model, train_cbow_with_report, write_model};
use crate::config::RunConfig;
use crate::corpus::{
    parse_bitext_tsv_with, parse_tmx_with, split_corpus, write_bitext_tsv, Lang, Side, Token, Tokenizer,
    TranslationMemory,
};
use crate::error::{Error, Result};
use crate::eval::{
    build_hole_dataset_with, evaluate, render_report, DatasetOptions, EvalReport, HoleDataset, RawDump, ReportFormat,
};
use crate::fsutil::write_atomic;
use crate::index::TmIndex;
use crate::predictors::echo::{self, EchoOptions};
use crate::predictors::{
    CbowPredictor, ExternalConfig, ExternalPredictor, Predictor, Transport, TrigramPredictor, UnigramPredictor,
};

pub const REPORT_FORMAT: &str = "anchorfill-report";

#[derive(Debug, Parser)]
#[command(name = "anchorfill", version, about = "Fuzzy-match gap extraction and center-word prediction")]
pub struct Cli {
    /// TOML configuration file; flags take precedence over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (1 keeps every step sequential).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct LangArgs {
    #[arg(long)]
    pub src_lang: Option<String>,
    #[arg(long)]
    pub tgt_lang: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct PredictorArgs {
    /// unigram, trigram, cbow or external.
    #[arg(long)]
    pub predictor: Option<String>,
    /// Training memory for the unigram and trigram predictors.
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Side of `--train` to count.
    #[arg(long)]
    pub side: Option<Side>,
    /// Embedding model for the cbow predictor.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Backend command line, split on whitespace.
    #[arg(long)]
    pub backend_cmd: Option<String>,
    /// Backend base URL; requests go to `<url>/predict`.
    #[arg(long)]
    pub backend_url: Option<String>,
    /// Environment variable holding a bearer token for the backend.
    #[arg(long)]
    pub auth_env: Option<String>,
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Backend batches in flight at once.
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Candidates requested per hole.
    #[arg(short, long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub langs: LangArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a TMX or TSV memory into canonical TSV.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        /// tmx or tsv; guessed from the extension when omitted.
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        langs: LangArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Shuffle a memory and cut it into train, dev and test.
    Split {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        ratios: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        langs: LangArgs,
        /// Receives train.tsv, dev.tsv and test.tsv.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Build an index over one side of a memory.
    Index {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        side: Option<Side>,
        #[arg(long)]
        ngram: Option<u8>,
        #[arg(long)]
        length_slack: Option<u32>,
        #[command(flatten)]
        langs: LangArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Align query segments with their best fuzzy match and collect anchored holes.
    Extract {
        /// The indexed memory.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        index: PathBuf,
        /// Memory whose segments are the queries.
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        min_fms: Option<f64>,
        #[command(flatten)]
        langs: LangArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train CBOW embeddings on one side of a memory.
    TrainCbow {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        side: Option<Side>,
        #[arg(long)]
        dims: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        lr: Option<f64>,
        #[arg(long)]
        negatives: Option<usize>,
        #[arg(long)]
        min_count: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        langs: LangArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer every hole of a dataset with one predictor.
    Predict {
        #[arg(long)]
        dataset: PathBuf,
        #[command(flatten)]
        predictor: PredictorArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a prediction dump, or predict and score a dataset in one go.
    Eval {
        #[arg(long, conflicts_with = "dataset")]
        raw: Option<PathBuf>,
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[command(flatten)]
        predictor: PredictorArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render reports or prediction dumps as csv, markdown or plot data.
    Report {
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "markdown")]
        format: String,
        /// Standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test backend that answers each hole with its left anchor.
    #[command(hide = true)]
    EchoBackend {
        #[arg(long = "drop-id")]
        drop_ids: Vec<u64>,
        #[arg(long)]
        shuffle_seed: Option<u64>,
        /// Serve HTTP on this address instead of stdin/stdout.
        #[arg(long)]
        http: Option<String>,
        #[arg(long)]
        max_requests: Option<usize>,
    },
}

/// Sidecar written next to TSV, index and model outputs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub src_lang: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tgt_lang: Option<String>,
    /// Fingerprints of the inputs, by role.
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
    #[serde(default)]
    pub details: BTreeMap<String, serde_json::Value>,
    pub config: serde_json::Value,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".provenance.json");
    PathBuf::from(s)
}

fn read_sidecar(path: &Path) -> Option<Sidecar> {
    let text = std::fs::read_to_string(sidecar_path(path)).ok()?;
    serde_json::from_str(&text).ok()
}

fn write_sidecar(path: &Path, sidecar: &Sidecar) -> Result<()> {
    write_atomic(&sidecar_path(path), |w| {
        serde_json::to_writer_pretty(&mut *w, sidecar)?;
        w.write_all(b"\n")?;
        Ok(())
    })
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// The configuration echoed into outputs. `jobs` is left out so results do
/// not depend on it.
fn echo_config(cfg: &RunConfig) -> serde_json::Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    if let Some(o) = v.as_object_mut() {
        o.remove("jobs");
    }
    v
}

struct Ctx {
    cfg: RunConfig,
    tokenizer: Tokenizer,
}

impl Ctx {
    fn langs(&self, path: Option<&Path>, flags: &LangArgs) -> (Lang, Lang) {
        let side = path.and_then(read_sidecar);
        let pick = |flag: &Option<String>, car: Option<String>, cfg: &str| {
            Lang::new(flag.as_deref().or(car.as_deref()).unwrap_or(cfg))
        };
        (
            pick(
                &flags.src_lang,
                side.as_ref().and_then(|s| s.src_lang.clone()),
                &self.cfg.corpus.src_lang,
            ),
            pick(
                &flags.tgt_lang,
                side.as_ref().and_then(|s| s.tgt_lang.clone()),
                &self.cfg.corpus.tgt_lang,
            ),
        )
    }

    fn load_tsv(&self, path: &Path, flags: &LangArgs) -> Result<TranslationMemory> {
        let (src, tgt) = self.langs(Some(path), flags);
        parse_bitext_tsv_with(open(path)?, &src, &tgt, &self.tokenizer)
    }

    fn sidecar(&self, command: &str) -> Sidecar {
        Sidecar {
            command: command.into(),
            config: echo_config(&self.cfg),
            ..Default::default()
        }
    }

    fn save_tsv(&self, tm: &TranslationMemory, path: &Path, mut sidecar: Sidecar) -> Result<()> {
        write_atomic(path, |w| write_bitext_tsv(tm, w))?;
        sidecar.src_lang = Some(tm.src_lang().as_str().to_string());
        sidecar.tgt_lang = Some(tm.tgt_lang().as_str().to_string());
        sidecar
            .details
            .insert("units".into(), serde_json::json!(tm.len()));
        sidecar
            .details
            .insert("fingerprint".into(), serde_json::json!(tm.fingerprint()));
        write_sidecar(path, &sidecar)
    }
}

fn side_corpus(tm: &TranslationMemory, side: Side) -> Vec<&[Token]> {
    tm.side_tokens(side).collect()
}

fn apply_predictor_flags(cfg: &mut RunConfig, p: &PredictorArgs) -> Result<()> {
    if let Some(k) = p.k {
        cfg.predictor.k = k;
    }
    if let Some(side) = p.side {
        cfg.index.side = side;
    }
    if let Some(kind) = &p.predictor {
        cfg.predictor.kind = Some(kind.clone());
    }
    let transport = match (&p.backend_cmd, &p.backend_url) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "--backend-cmd and --backend-url are mutually exclusive".into(),
            ))
        }
        (Some(cmd), None) => Some(Transport::Subprocess {
            command: cmd.split_whitespace().map(String::from).collect(),
        }),
        (None, Some(url)) => Some(Transport::Http {
            url: url.clone(),
            auth_env: None,
        }),
        (None, None) => None,
    };
    let touches_external =
        transport.is_some() || p.auth_env.is_some() || p.timeout.is_some() || p.parallelism.is_some();
    if !touches_external {
        return Ok(());
    }
    let mut ext = match (cfg.predictor.external.take(), transport) {
        (Some(mut e), Some(t)) => {
            e.transport = t;
            e
        }
        (Some(e), None) => e,
        (None, Some(Transport::Subprocess { command })) => ExternalConfig::subprocess(command),
        (None, Some(Transport::Http { url, .. })) => ExternalConfig::http(url),
        (None, None) => {
            return Err(Error::Config(
                "backend options need --backend-cmd, --backend-url or a [predictor.external] config".into(),
            ))
        }
    };
    if let Some(var) = &p.auth_env {
        match &mut ext.transport {
            Transport::Http { auth_env, .. } => *auth_env = Some(var.clone()),
            Transport::Subprocess { .. } => {
                return Err(Error::Config("--auth-env only applies to the http transport".into()))
            }
        }
    }
    if let Some(t) = p.timeout {
        ext.timeout_secs = t;
    }
    if let Some(n) = p.parallelism {
        ext.parallelism = n;
    }
    cfg.predictor.external = Some(ext);
    if cfg.predictor.kind.is_none() {
        cfg.predictor.kind = Some("external".into());
    }
    Ok(())
}

fn build_predictor(ctx: &Ctx, p: &PredictorArgs) -> Result<Box<dyn Predictor>> {
    let kind = ctx
        .cfg
        .predictor
        .kind
        .clone()
        .ok_or_else(|| Error::Config("no predictor selected (use --predictor)".into()))?;
    let train = || -> Result<TranslationMemory> {
        let path = p
            .train
            .as_deref()
            .ok_or_else(|| Error::Config(format!("the {kind} predictor needs --train")))?;
        ctx.load_tsv(path, &p.langs)
    };
    Ok(match kind.as_str() {
        "unigram" => Box::new(UnigramPredictor::from_corpus(&side_corpus(&train()?, ctx.cfg.index.side))),
        "trigram" => Box::new(TrigramPredictor::from_corpus(&side_corpus(&train()?, ctx.cfg.index.side))),
        "cbow" => {
            let path = p
                .model
                .as_deref()
                .ok_or_else(|| Error::Config("the cbow predictor needs --model".into()))?;
            Box::new(CbowPredictor::new(load_model(path)?))
        }
        "external" => {
            let ext = ctx.cfg.predictor.external.clone().ok_or_else(|| {
                Error::Config("the external predictor needs --backend-cmd, --backend-url or a config section".into())
            })?;
            Box::new(ExternalPredictor::new(ext)?)
        }
        other => return Err(Error::Config(format!("unknown predictor {other:?}"))),
    })
}

fn read_dataset(path: &Path) -> Result<HoleDataset> {
    HoleDataset::read(BufReader::new(open(path)?))
}

fn predict_dump(ctx: &Ctx, dataset: &HoleDataset, p: &PredictorArgs) -> Result<(EvalReport, RawDump)> {
    let predictor = build_predictor(ctx, p)?;
    let k = ctx.cfg.predictor.k;
    let (report, records) = evaluate(dataset, predictor.as_ref(), k, ctx.cfg.jobs)?;
    info!(
        "{}: {}/{} correct, {} errors",
        predictor.name(),
        report.overall.n_correct,
        report.overall.n_holes,
        report.overall.n_errors
    );
    let mut provenance = dataset.provenance.clone();
    provenance
        .config
        .insert("predictor".into(), serde_json::to_value(&ctx.cfg.predictor)?);
    provenance
        .config
        .insert("dataset".into(), serde_json::json!(dataset.fingerprint()));
    Ok((
        report,
        RawDump {
            predictor: predictor.name().to_string(),
            k,
            provenance,
            records,
        },
    ))
}

#[derive(Serialize, Deserialize)]
struct ReportFile {
    format: String,
    version: u32,
    provenance: crate::eval::Provenance,
    report: EvalReport,
}

fn read_reports(path: &Path) -> Result<EvalReport> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    if let Ok(file) = serde_json::from_str::<ReportFile>(&text) {
        if file.format == REPORT_FORMAT {
            return Ok(file.report);
        }
    }
    Ok(RawDump::read(text.as_bytes())?.report())
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    match &cli.command {
        Command::Split { ratios, seed, .. } => {
            if let Some(r) = ratios {
                cfg.split.ratios = r.clone();
            }
            if let Some(s) = seed {
                cfg.split.seed = *s;
            }
        }
        Command::Index {
            side,
            ngram,
            length_slack,
            ..
        } => {
            if let Some(s) = side {
                cfg.index.side = *s;
            }
            if let Some(n) = ngram {
                cfg.index.ngram = *n;
            }
            if let Some(l) = length_slack {
                cfg.index.length_slack = *l;
            }
        }
        Command::Extract { min_fms, .. } => {
            if let Some(m) = min_fms {
                cfg.extract.min_fms = *m;
            }
        }
        Command::TrainCbow {
            side,
            dims,
            window,
            epochs,
            lr,
            negatives,
            min_count,
            seed,
            ..
        } => {
            let h = &mut cfg.cbow.hyper;
            if let Some(s) = side {
                cfg.index.side = *s;
            }
            if let Some(v) = dims {
                h.dims = *v;
            }
            if let Some(v) = window {
                h.window = *v;
            }
            if let Some(v) = epochs {
                h.epochs = *v;
            }
            if let Some(v) = lr {
                h.learning_rate = *v;
            }
            if let Some(v) = negatives {
                h.negatives = *v;
            }
            if let Some(v) = seed {
                h.seed = *v;
            }
            if let Some(v) = min_count {
                cfg.cbow.min_count = *v;
            }
        }
        Command::Predict { predictor, .. } | Command::Eval { predictor, .. } => {
            apply_predictor_flags(&mut cfg, predictor)?;
        }
        _ => {}
    }
    cfg.validate()?;
    let tokenizer = Tokenizer::new(cfg.tokenizer.clone())?;
    let ctx = Ctx { cfg, tokenizer };

    match cli.command {
        Command::Ingest {
            input,
            format,
            langs,
            out,
        } => {
            let format = format.unwrap_or_else(|| {
                match input.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase) {
                    Some(e) if e == "tmx" || e == "xml" => "tmx".into(),
                    _ => "tsv".into(),
                }
            });
            let (src, tgt) = ctx.langs(None, &langs);
            let mut sidecar = ctx.sidecar("ingest");
            let tm = match format.as_str() {
                "tmx" => {
                    let (tm, report) = parse_tmx_with(open(&input)?, &src, &tgt, &ctx.tokenizer)?;
                    sidecar
                        .details
                        .insert("skipped_units".into(), serde_json::json!(report.skipped));
                    tm
                }
                "tsv" => parse_bitext_tsv_with(open(&input)?, &src, &tgt, &ctx.tokenizer)?,
                other => return Err(Error::Config(format!("unknown input format {other:?}"))),
            };
            info!("ingested {} units", tm.len());
            ctx.save_tsv(&tm, &out, sidecar)
        }
        Command::Split {
            corpus, langs, out_dir, ..
        } => {
            let tm = ctx.load_tsv(&corpus, &langs)?;
            let splits = split_corpus(&tm, &ctx.cfg.split.spec()?)?;
            std::fs::create_dir_all(&out_dir)?;
            for (name, part, ids) in [
                ("train", &splits.train, &splits.train_ids),
                ("dev", &splits.dev, &splits.dev_ids),
                ("test", &splits.test, &splits.test_ids),
            ] {
                let mut sidecar = ctx.sidecar("split");
                sidecar.inputs.insert("corpus".into(), tm.fingerprint());
                sidecar.details.insert("part".into(), serde_json::json!(name));
                sidecar.details.insert("source_ids".into(), serde_json::json!(ids));
                ctx.save_tsv(part, &out_dir.join(format!("{name}.tsv")), sidecar)?;
            }
            info!(
                "split {} units into {}/{}/{}",
                tm.len(),
                splits.train.len(),
                splits.dev.len(),
                splits.test.len()
            );
            Ok(())
        }
        Command::Index {
            corpus, langs, out, ..
        } => {
            let tm = ctx.load_tsv(&corpus, &langs)?;
            let index = TmIndex::build(&tm, ctx.cfg.index.side, ctx.cfg.index.index_config())?;
            write_atomic(&out, |w| index.write_snapshot(w))?;
            let mut sidecar = ctx.sidecar("index");
            sidecar.inputs.insert("corpus".into(), tm.fingerprint());
            sidecar
                .details
                .insert("keys".into(), serde_json::json!(index.postings().len()));
            write_sidecar(&out, &sidecar)
        }
        Command::Extract {
            corpus,
            index,
            queries,
            langs,
            out,
            ..
        } => {
            let tm = ctx.load_tsv(&corpus, &langs)?;
            let test = ctx.load_tsv(&queries, &langs)?;
            let index = TmIndex::read_snapshot(BufReader::new(open(&index)?))?;
            let mut ds = build_hole_dataset_with(
                &test,
                &index,
                &tm,
                &DatasetOptions {
                    min_fms: ctx.cfg.extract.min_fms,
                    jobs: ctx.cfg.jobs,
                },
            )?;
            if let serde_json::Value::Object(o) = echo_config(&ctx.cfg) {
                for key in ["tokenizer", "index", "extract"] {
                    if let Some(v) = o.get(key) {
                        ds.provenance.config.insert(key.into(), v.clone());
                    }
                }
            }
            info!("extracted {} holes", ds.holes.len());
            write_atomic(&out, |w| ds.write(w))
        }
        Command::TrainCbow {
            corpus, langs, out, ..
        } => {
            let tm = ctx.load_tsv(&corpus, &langs)?;
            let sentences = side_corpus(&tm, ctx.cfg.index.side);
            let vocab = build_vocab(&sentences, ctx.cfg.cbow.min_count)?;
            let (model, report) = train_cbow_with_report(&sentences, vocab, ctx.cfg.cbow.hyper.clone())?;
            for (i, loss) in report.epoch_losses.iter().enumerate() {
                info!("epoch {}: mean loss {loss:.5}", i + 1);
            }
            write_atomic(&out, |w| write_model(&model, w))?;
            let mut sidecar = ctx.sidecar("train-cbow");
            sidecar.inputs.insert("corpus".into(), tm.fingerprint());
            sidecar
                .details
                .insert("side".into(), serde_json::json!(ctx.cfg.index.side));
            sidecar
                .details
                .insert("vocab".into(), serde_json::json!(model.vocab.len()));
            sidecar
                .details
                .insert("epoch_losses".into(), serde_json::json!(report.epoch_losses));
            write_sidecar(&out, &sidecar)
        }
        Command::Predict {
            dataset,
            predictor,
            out,
        } => {
            let ds = read_dataset(&dataset)?;
            let (_, dump) = predict_dump(&ctx, &ds, &predictor)?;
            write_atomic(&out, |w| dump.write(w))
        }
        Command::Eval {
            raw,
            dataset,
            predictor,
            out,
        } => {
            let (report, provenance) = match (raw, dataset) {
                (Some(raw), _) => {
                    let dump = RawDump::read(BufReader::new(open(&raw)?))?;
                    (dump.report(), dump.provenance)
                }
                (None, Some(dataset)) => {
                    let ds = read_dataset(&dataset)?;
                    let (report, dump) = predict_dump(&ctx, &ds, &predictor)?;
                    (report, dump.provenance)
                }
                (None, None) => return Err(Error::Config("eval needs --raw or --dataset".into())),
            };
            let file = ReportFile {
                format: REPORT_FORMAT.into(),
                version: 1,
                provenance,
                report,
            };
            write_atomic(&out, |w| {
                serde_json::to_writer_pretty(&mut *w, &file)?;
                w.write_all(b"\n")?;
                Ok(())
            })
        }
        Command::Report { inputs, format, out } => {
            let format: ReportFormat = format.parse()?;
            let reports = inputs.iter().map(|p| read_reports(p)).collect::<Result<Vec<_>>>()?;
            let text = render_report(&reports, format);
            match out {
                Some(path) => write_atomic(&path, |w| Ok(w.write_all(text.as_bytes())?)),
                None => {
                    let mut stdout = std::io::stdout().lock();
                    stdout.write_all(text.as_bytes())?;
                    Ok(stdout.flush()?)
                }
            }
        }
        Command::EchoBackend {
            drop_ids,
            shuffle_seed,
            http,
            max_requests,
        } => {
            let opts = EchoOptions {
                drop_ids: drop_ids.into_iter().collect::<HashSet<_>>(),
                shuffle_seed,
            };
            match http {
                Some(addr) => {
                    let listener = TcpListener::bind(&addr)?;
                    // Announce the bound address so callers can pass port 0.
                    println!("listening on {}", listener.local_addr()?);
                    std::io::stdout().flush()?;
                    echo::serve_http(listener, &opts, max_requests)?;
                }
                None => echo::run_stdio(std::io::stdin().lock(), std::io::stdout().lock(), &opts)?,
            }
            Ok(())
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {}", one_line(first));
            return ExitCode::from(2);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), one_line(&e.to_string()));
            ExitCode::FAILURE
        }
    }
}
