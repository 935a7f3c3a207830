//! Command line front end.
//!
//! Exit status is 0 on success, 2 for usage errors (including inputs missing
//! from both the flags and the `--config` file) and 1 when an input file is
//! unreadable or malformed.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use entityrank_core::corpus::{StreamKind, TextConfig, Tokenization, DEFAULT_TERMINATORS};
use entityrank_core::embedding::{EmbeddingTable, DEFAULT_OOV_SEED};
use entityrank_core::eval::ApMode;
use entityrank_core::features::{FeatureLayout, FeatureParams};
use entityrank_core::lexical::{AbsDenominator, LexicalParams};
use entityrank_core::ranker::{ExtraTreesParams, FusionMode, HyperparameterGrid, DEFAULT_SEED};
use entityrank_core::semantic::SimMode;
use entityrank_core::synth::SynthSpec;

use crate::config::PipelineConfig;
use crate::io::{self, EmbeddingFormat};
use crate::pipeline::{self, ShapeChoice};
use crate::{Error, Result};

/// Width of the all-unknown table used when no embeddings file is given.
pub const DEFAULT_EMBEDDING_DIM: usize = 50;
pub const DEFAULT_FOLDS: usize = 10;
pub const DEFAULT_DRAWS: usize = 5;

#[derive(Debug, Parser)]
#[command(name = "entityrank", version, about = "Feature extraction, training and evaluation for entity search ranking")]
pub struct Cli {
    /// JSON file with default settings; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true, env = "ENTITYRANK_THREADS", value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate corpus, queries and pairs and print corpus statistics.
    Ingest(IngestArgs),
    /// Write a LETOR feature file for every judged pair.
    Featurize(FeaturizeArgs),
    /// Train an extra-trees model on a feature file.
    Train(TrainArgs),
    /// Cross-validate one setting or a grid of settings.
    Cv(CvArgs),
    /// Score and rank the pairs of a feature file.
    Predict(PredictArgs),
    /// Average precision per query plus MAP and MRR.
    Evaluate(EvaluateArgs),
    /// Generate a synthetic corpus, queries, pairs and embeddings.
    Synth(SynthArgs),
    /// Combine several prediction files into one ranking.
    Fuse(FuseArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SimModeArg {
    Max,
    InfNorm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ApModeArg {
    Standard,
    #[value(alias = "paper")]
    ReciprocalSum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FusionArg {
    Prob,
    Rank,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Text,
    Binary,
    Auto,
}

fn parse_tokenization(s: &str) -> std::result::Result<Tokenization, String> {
    Tokenization::parse(s).ok_or_else(|| format!("expected seg or twogram, found {s:?}"))
}

fn parse_stream(s: &str) -> std::result::Result<StreamKind, String> {
    StreamKind::parse(s).ok_or_else(|| format!("expected title, body or titlebody, found {s:?}"))
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Corpus JSON Lines file.
    #[arg(long, value_name = "PATH")]
    pub corpus: Option<PathBuf>,
    /// Queries JSON Lines file.
    #[arg(long, value_name = "PATH")]
    pub queries: Option<PathBuf>,
    /// Pairs TSV (query_id, entity_id, label).
    #[arg(long, value_name = "PATH")]
    pub pairs: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TextArgs {
    /// Tokenizations to emit, comma separated: twogram, seg.
    #[arg(long, value_delimiter = ',', value_parser = parse_tokenization)]
    pub layout: Option<Vec<Tokenization>>,
    /// Streams to emit, comma separated: title, body, titlebody.
    #[arg(long, value_delimiter = ',', value_parser = parse_stream)]
    pub streams: Option<Vec<StreamKind>>,
    /// Sentence end marks, given as one string of characters.
    #[arg(long, value_name = "CHARS")]
    pub terminators: Option<String>,
}

#[derive(Debug, Args)]
pub struct FeatureArgs {
    #[command(flatten)]
    pub text: TextArgs,
    /// word2vec embeddings file; without one every word gets a random vector.
    #[arg(long, value_name = "PATH")]
    pub embeddings: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub embeddings_format: Option<FormatArg>,
    /// Seed for unknown-word vectors.
    #[arg(long)]
    pub oov_seed: Option<u64>,
    /// BM25 k1.
    #[arg(long)]
    pub k1: Option<f64>,
    /// BM25 k3.
    #[arg(long)]
    pub k3: Option<f64>,
    /// BM25 length normalization b.
    #[arg(long)]
    pub b: Option<f64>,
    /// Jelinek-Mercer lambda.
    #[arg(long)]
    pub lambda_jm: Option<f64>,
    /// Dirichlet mu.
    #[arg(long)]
    pub mu_dir: Option<f64>,
    /// Absolute discounting delta.
    #[arg(long)]
    pub delta_abs: Option<f64>,
    /// Smallest probability fed to the logarithm.
    #[arg(long)]
    pub prob_floor: Option<f64>,
    /// Clamp negative IDF to zero.
    #[arg(long)]
    pub clamp_idf: bool,
    /// Absolute discounting divides by the matched query-term count instead
    /// of the document length.
    #[arg(long)]
    pub abs_literal: bool,
    /// How a query word is matched against a sentence.
    #[arg(long, value_enum)]
    pub sim_mode: Option<SimModeArg>,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    /// Master seed for trees, folds and grid draws.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_estimators: Option<usize>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Number of tree counts drawn from [100, 500] for the grid.
    #[arg(long, value_name = "N")]
    pub n_estimators_draws: Option<usize>,
    /// Cross-validation folds.
    #[arg(long)]
    pub folds: Option<usize>,
    /// Grid to search: "auto" (drawn tree counts x depths 4..12) or
    /// "N1,N2:D1,D2".
    #[arg(long, value_name = "GRID")]
    pub grid: Option<String>,
    #[arg(long, value_enum)]
    pub ap_mode: Option<ApModeArg>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub text: TextArgs,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub features: FeatureArgs,
    /// Output feature file; the layout goes to <out>.layout.json.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// LETOR feature file.
    #[arg(long, value_name = "PATH")]
    pub features: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub model_out: Option<PathBuf>,
    #[command(flatten)]
    pub trees: TreeArgs,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[arg(long, value_name = "PATH")]
    pub features: Option<PathBuf>,
    #[command(flatten)]
    pub trees: TreeArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub features: Option<PathBuf>,
    /// Predictions TSV (query_id, entity_id, score, rank).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, value_name = "PATH")]
    pub predictions: Option<PathBuf>,
    /// Pairs TSV with relevance labels.
    #[arg(long, value_name = "PATH")]
    pub qrels: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub ap_mode: Option<ApModeArg>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// JSON generator settings; omitted fields take their defaults.
    #[arg(long, value_name = "PATH")]
    pub spec: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Overrides the generator seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    /// Prediction files to combine.
    #[arg(long = "scores", value_name = "PATH", num_args = 1.., required = true)]
    pub scores: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "prob")]
    pub mode: FusionArg,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Fatal outcome of a run.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl From<entityrank_core::Error> for Failure {
    fn from(e: entityrank_core::Error) -> Self {
        Failure::Data(e.into())
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn required(flag: &str, cli: Option<PathBuf>, cfg: &Option<PathBuf>) -> Run<PathBuf> {
    cli.or_else(|| cfg.clone())
        .ok_or_else(|| Failure::Usage(format!("the following required argument was not provided: --{flag}")))
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

struct Ctx {
    cfg: PipelineConfig,
}

impl Ctx {
    fn text(&self, a: &TextArgs) -> TextConfig {
        match a.terminators.clone().or_else(|| self.cfg.terminators.clone()) {
            Some(t) => TextConfig::with_terminators(t.chars()),
            None => TextConfig::with_terminators(DEFAULT_TERMINATORS.iter().copied()),
        }
    }

    fn layout(&self, a: &TextArgs) -> Run<FeatureLayout> {
        let default = FeatureLayout::default();
        let toks = a.layout.clone().or_else(|| self.cfg.layout.clone()).unwrap_or(default.tokenizations);
        let streams = a.streams.clone().or_else(|| self.cfg.streams.clone()).unwrap_or(default.streams);
        FeatureLayout::new(toks, streams).map_err(|e| usage(e.to_string()))
    }

    fn feature_params(&self, a: &FeatureArgs) -> Run<FeatureParams> {
        let c = &self.cfg;
        let d = LexicalParams::default();
        let lexical = LexicalParams {
            k1: a.k1.or(c.k1).unwrap_or(d.k1),
            k3: a.k3.or(c.k3).unwrap_or(d.k3),
            b: a.b.or(c.b).unwrap_or(d.b),
            lambda_jm: a.lambda_jm.or(c.lambda_jm).unwrap_or(d.lambda_jm),
            mu_dir: a.mu_dir.or(c.mu_dir).unwrap_or(d.mu_dir),
            delta_abs: a.delta_abs.or(c.delta_abs).unwrap_or(d.delta_abs),
            prob_floor: a.prob_floor.or(c.prob_floor).unwrap_or(d.prob_floor),
            clamp_idf: a.clamp_idf || c.clamp_idf.unwrap_or(false),
            abs_denominator: if a.abs_literal || c.abs_literal.unwrap_or(false) {
                AbsDenominator::QueryTermCount
            } else {
                AbsDenominator::DocLength
            },
        };
        lexical.validate().map_err(|e| usage(e.to_string()))?;
        let sim_mode = match a.sim_mode {
            Some(SimModeArg::Max) => SimMode::Max,
            Some(SimModeArg::InfNorm) => SimMode::InfNorm,
            None => c.sim_mode.unwrap_or_default(),
        };
        Ok(FeatureParams { lexical, sim_mode })
    }

    fn table(&self, a: &FeatureArgs) -> Run<EmbeddingTable> {
        let seed = a.oov_seed.or(self.cfg.oov_seed).unwrap_or(DEFAULT_OOV_SEED);
        let format = match a.embeddings_format {
            Some(FormatArg::Text) => EmbeddingFormat::Text,
            Some(FormatArg::Binary) => EmbeddingFormat::Binary,
            Some(FormatArg::Auto) => EmbeddingFormat::Auto,
            None => self.cfg.embeddings_format.unwrap_or_default(),
        };
        match a.embeddings.clone().or_else(|| self.cfg.embeddings.clone()) {
            Some(p) => Ok(io::load_embeddings(&p, format, seed)?),
            None => Ok(EmbeddingTable::new(DEFAULT_EMBEDDING_DIM, seed)?),
        }
    }

    fn ap_mode(&self, a: Option<ApModeArg>) -> ApMode {
        match a {
            Some(ApModeArg::Standard) => ApMode::Standard,
            Some(ApModeArg::ReciprocalSum) => ApMode::ReciprocalSum,
            None => self.cfg.ap_mode.unwrap_or_default(),
        }
    }

    fn tree_params(&self, a: &TreeArgs) -> ExtraTreesParams {
        let d = ExtraTreesParams::default();
        ExtraTreesParams {
            n_estimators: a.n_estimators.or(self.cfg.n_estimators).unwrap_or(d.n_estimators),
            max_depth: a.max_depth.or(self.cfg.max_depth).unwrap_or(d.max_depth),
            seed: a.seed.or(self.cfg.seed).unwrap_or(DEFAULT_SEED),
            ..d
        }
    }

    fn folds(&self, a: &TreeArgs) -> usize {
        a.folds.or(self.cfg.folds).unwrap_or(DEFAULT_FOLDS)
    }

    /// The grid requested by `--grid`, by `--n-estimators-draws` alone, or
    /// none.
    fn grid(&self, a: &TreeArgs, seed: u64) -> Run<Option<HyperparameterGrid>> {
        let draws = a.n_estimators_draws.or(self.cfg.n_estimators_draws);
        let spec = match (&a.grid, draws) {
            (Some(g), _) => g.as_str(),
            (None, Some(_)) => "auto",
            (None, None) => return Ok(None),
        };
        let grid = if spec == "auto" {
            HyperparameterGrid::drawn(draws.unwrap_or(DEFAULT_DRAWS), seed)
        } else {
            let (n, d) = spec
                .split_once(':')
                .ok_or_else(|| usage(format!("--grid expects \"auto\" or \"N1,N2:D1,D2\", found {spec:?}")))?;
            let list = |s: &str| {
                s.split(',')
                    .map(|x| x.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| usage(format!("--grid: bad number list {s:?}")))
            };
            HyperparameterGrid::new(list(n)?, list(d)?)
        };
        grid.map(Some).map_err(|e| usage(e.to_string()))
    }
}

fn write_stdout(s: &str) -> Run<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(s.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Data(Error::Io { path: PathBuf::from("<stdout>"), source: e }))
}

fn load_corpus(ctx: &Ctx, a: &CorpusArgs) -> Run<(PathBuf, Vec<entityrank_core::corpus::Document>, Vec<entityrank_core::corpus::Query>, Vec<entityrank_core::corpus::LabeledPair>)> {
    let corpus = required("corpus", a.corpus.clone(), &ctx.cfg.corpus)?;
    let queries = required("queries", a.queries.clone(), &ctx.cfg.queries)?;
    let pairs = required("pairs", a.pairs.clone(), &ctx.cfg.pairs)?;
    let docs = io::read_documents(&corpus)?;
    let qs = io::read_queries(&queries)?;
    let ps = io::read_pairs(&pairs)?;
    pipeline::check_pairs(&pairs, &ps, &docs, &qs)?;
    Ok((pairs, docs, qs, ps))
}

fn cmd_ingest(ctx: &Ctx, a: &IngestArgs) -> Run<()> {
    let (_, docs, queries, pairs) = load_corpus(ctx, &a.corpus)?;
    let layout = ctx.layout(&a.text)?;
    let summary = pipeline::ingest(&docs, &layout, &ctx.text(&a.text))?;
    let text = ctx.text(&a.text);
    for q in &queries {
        for &t in &layout.tokenizations {
            text.query_tokens(q, t)?;
        }
    }
    let relevant = pairs.iter().filter(|p| p.label == 1).count();
    let mut s = format!(
        "documents\t{}\nqueries\t{}\npairs\t{}\nrelevant\t{}\n",
        docs.len(),
        queries.len(),
        pairs.len(),
        relevant
    );
    s += "tokenization\tstream\ttokens\tterms\tavg_len\n";
    for t in summary {
        for (stream, tokens, terms, avg) in t.streams {
            s += &format!("{}\t{stream}\t{tokens}\t{terms}\t{avg}\n", t.tokenization);
        }
    }
    write_stdout(&s)
}

fn cmd_featurize(ctx: &Ctx, a: &FeaturizeArgs) -> Run<()> {
    let out = required("out", a.out.clone(), &ctx.cfg.out)?;
    let (_, docs, queries, pairs) = load_corpus(ctx, &a.corpus)?;
    let layout = ctx.layout(&a.features.text)?;
    let params = ctx.feature_params(&a.features)?;
    let table = ctx.table(&a.features)?;
    let text = ctx.text(&a.features.text);
    let vectors = pipeline::featurize(&docs, &queries, &pairs, table, layout.clone(), params, text)?;
    io::write_letor(&out, &vectors, &layout)?;
    Ok(())
}

fn read_features(ctx: &Ctx, cli: &Option<PathBuf>) -> Run<(PathBuf, io::LetorFile)> {
    let path = required("features", cli.clone(), &ctx.cfg.features)?;
    let file = io::read_letor(&path)?;
    Ok((path, file))
}

fn cmd_train(ctx: &Ctx, a: &TrainArgs) -> Run<()> {
    let model_out = required("model-out", a.model_out.clone(), &ctx.cfg.model)?;
    let params = ctx.tree_params(&a.trees);
    let grid = ctx.grid(&a.trees, params.seed)?;
    let (_, file) = read_features(ctx, &a.features)?;
    let shape = match grid {
        Some(grid) => ShapeChoice::Search { grid, folds: ctx.folds(&a.trees) },
        None => ShapeChoice::Fixed,
    };
    let outcome = pipeline::train(&file, &params, &shape, ctx.ap_mode(a.trees.ap_mode))?;
    io::save_model(&model_out, &outcome.model)?;
    if let Some(r) = outcome.search {
        write_stdout(&format!("best\t{}\t{}\n", r.best_n_estimators, r.best_max_depth))?;
    }
    Ok(())
}

fn cmd_cv(ctx: &Ctx, a: &CvArgs) -> Run<()> {
    let params = ctx.tree_params(&a.trees);
    let grid = ctx.grid(&a.trees, params.seed)?;
    let (_, file) = read_features(ctx, &a.features)?;
    let folds = ctx.folds(&a.trees);
    let mode = ctx.ap_mode(a.trees.ap_mode);
    let mut s = String::from("n_estimators\tmax_depth\tmean_map\tfold_maps\n");
    let row = |r: &entityrank_core::ranker::CvReport| {
        let folds: Vec<String> = r.fold_maps.iter().map(|m| m.to_string()).collect();
        format!("{}\t{}\t{}\t{}\n", r.n_estimators, r.max_depth, r.mean_map, folds.join(","))
    };
    match grid {
        Some(grid) => {
            let r = pipeline::cv_grid(&file.vectors, &grid, &params, folds, mode)?;
            for c in &r.table {
                s += &row(c);
            }
            s += &format!("best\t{}\t{}\n", r.best_n_estimators, r.best_max_depth);
        }
        None => s += &row(&pipeline::cv(&file.vectors, &params, folds, mode)?),
    }
    write_stdout(&s)
}

fn cmd_predict(ctx: &Ctx, a: &PredictArgs) -> Run<()> {
    let model_path = required("model", a.model.clone(), &ctx.cfg.model)?;
    let out = required("out", a.out.clone(), &ctx.cfg.predictions.clone().or_else(|| ctx.cfg.out.clone()))?;
    let (path, file) = read_features(ctx, &a.features)?;
    let model = io::load_model(&model_path)?;
    let preds = pipeline::predict(&model, &path, &file)?;
    io::write_predictions(&out, &preds)?;
    Ok(())
}

fn cmd_evaluate(ctx: &Ctx, a: &EvaluateArgs) -> Run<()> {
    let preds_path = required("predictions", a.predictions.clone(), &ctx.cfg.predictions)?;
    let qrels_path = required("qrels", a.qrels.clone(), &ctx.cfg.qrels.clone().or_else(|| ctx.cfg.pairs.clone()))?;
    let preds = io::read_predictions(&preds_path)?;
    let qrels = io::read_pairs(&qrels_path)?;
    let report = pipeline::evaluate(&preds_path, &preds, &qrels, ctx.ap_mode(a.ap_mode))?;
    write_stdout(&report.to_tsv())
}

fn cmd_synth(ctx: &Ctx, a: &SynthArgs) -> Run<()> {
    let dir = required("out-dir", a.out_dir.clone(), &ctx.cfg.out_dir)?;
    let mut spec = match &a.spec {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            serde_json::from_str::<SynthSpec>(&text).map_err(|e| Error::Parse {
                path: p.clone(),
                line: e.line(),
                msg: e.to_string(),
            })?
        }
        None => ctx.cfg.synth.unwrap_or_default(),
    };
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    let data = pipeline::synth(&spec)?;
    pipeline::write_synth(&data, &dir)?;
    Ok(())
}

fn cmd_fuse(ctx: &Ctx, a: &FuseArgs) -> Run<()> {
    let out = required("out", a.out.clone(), &ctx.cfg.out)?;
    let inputs = a
        .scores
        .iter()
        .map(|p| Ok((p.clone(), io::read_predictions(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let mode = match a.mode {
        FusionArg::Prob => FusionMode::Prob,
        FusionArg::Rank => FusionMode::Rank,
    };
    io::write_predictions(&out, &pipeline::fuse_predictions(&inputs, mode)?)?;
    Ok(())
}

fn dispatch(ctx: &Ctx, command: &Command) -> Run<()> {
    match command {
        Command::Ingest(a) => cmd_ingest(ctx, a),
        Command::Featurize(a) => cmd_featurize(ctx, a),
        Command::Train(a) => cmd_train(ctx, a),
        Command::Cv(a) => cmd_cv(ctx, a),
        Command::Predict(a) => cmd_predict(ctx, a),
        Command::Evaluate(a) => cmd_evaluate(ctx, a),
        Command::Synth(a) => cmd_synth(ctx, a),
        Command::Fuse(a) => cmd_fuse(ctx, a),
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Run<()> {
    let cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    let threads = cli.threads.or(cfg.threads);
    let ctx = Ctx { cfg };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(usage("--threads must be positive"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::Data(Error::invalid(Path::new("<threads>"), e.to_string())))?;
    pool.install(|| dispatch(&ctx, &cli.command))
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => Cli::command().error(ErrorKind::MissingRequiredArgument, msg).exit(),
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
