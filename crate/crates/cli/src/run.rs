use std::fs;
use std::path::Path;
use std::sync::Arc;

use amreval::embeddings::EmbeddingStore;
use amreval::metrics::{MetricConfig, MetricId, Scorer};
use amreval::penman::{read_corpus, AmrEntry};
use amreval::report::{
    compare_report, correlation_report, dump_e2n, dump_kgrams, dump_triples, length_series,
    meta_eval_report, score_report, Aggregate, Provenance,
};
use amreval::stats::{
    derive_seed, parse_acceptability, parse_preferences, Alignment, EvalCorpus, HumanJudgments,
    ScoreTable, TiesMode,
};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::args::{AggregateArg, Cli, Command, Common, GraphCommand, Switch, Ties};
use crate::error::CliError;
use crate::output;

/// Seed tag for Smatch/S2match restarts.
pub const SMATCH_SEED_TAG: &str = "smatch";
/// Seed tag for bootstrap resampling.
pub const BOOTSTRAP_SEED_TAG: &str = "bootstrap";

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Score(args) => {
            let run = Session::open(&args.common, &[&args.a])?;
            let aggregate = aggregate(args.aggregate);
            let parser = run.parsers[0].clone();
            let table = run.table()?;
            let mut report = score_report(&table, &parser, aggregate, run.config.sembleu_smoothing)?;
            report.provenance = Some(run.provenance(json!({"command": "score", "aggregate": format!("{aggregate:?}")})));
            run.emit(&output::score(&report, args.common.format))
        }
        Command::Compare(args) => {
            let run = Session::open(&args.common, &[&args.a, &args.b])?;
            let aggregate = aggregate(args.aggregate);
            let ties = match args.ties {
                Ties::Split => TiesMode::Split,
                Ties::Exclude => TiesMode::Exclude,
            };
            let (a, b) = (run.parsers[0].clone(), run.parsers[1].clone());
            let table = run.table()?;
            let mut report = compare_report(&table, &a, &b, aggregate, ties, run.config.sembleu_smoothing)?;
            for row in &report.rows {
                if row.preference.a + row.preference.b != report.items as f64 {
                    return Err(CliError::Internal(format!(
                        "preference counts for {} do not sum to {}",
                        row.metric, report.items
                    )));
                }
            }
            report.provenance = Some(run.provenance(json!({
                "command": "compare",
                "aggregate": format!("{aggregate:?}"),
                "ties": format!("{ties:?}"),
            })));
            run.emit(&output::compare(&report, args.common.format))
        }
        Command::MetaEval(args) => {
            let mut run = Session::open(&args.common, &[&args.a, &args.b])?;
            let mut judgments = HumanJudgments::default();
            let prefs = run.read_input(&args.prefs)?;
            parse_preferences(&prefs, &mut judgments).map_err(|e| input_error(&args.prefs, e))?;
            let accept = run.read_input(&args.accept)?;
            parse_acceptability(&accept, &mut judgments).map_err(|e| input_error(&args.accept, e))?;
            let (a, b) = (run.parsers[0].clone(), run.parsers[1].clone());
            let table = run.table()?;
            let mut report = meta_eval_report(
                &run.corpus,
                &table,
                &a,
                &b,
                &judgments,
                args.bootstrap_b,
                derive_seed(args.common.seed, BOOTSTRAP_SEED_TAG),
            )?;
            report.provenance = Some(run.provenance(json!({
                "command": "meta-eval",
                "bootstrap_b": args.bootstrap_b,
            })));
            run.emit(&output::meta_eval(&report, args.common.format))
        }
        Command::Correlate(args) => {
            let files: Vec<&Path> = std::iter::once(args.a.as_path()).chain(args.b.as_deref()).collect();
            let run = Session::open(&args.common, &files)?;
            let table = run.table()?;
            let mut report = correlation_report(&table)?;
            report.provenance = Some(run.provenance(json!({"command": "correlate"})));
            run.emit(&output::correlation(&report, args.common.format))
        }
        Command::LengthBins(args) => {
            let files: Vec<&Path> = std::iter::once(args.a.as_path()).chain(args.b.as_deref()).collect();
            let mut run = Session::open(&args.common, &files)?;
            let judgments = match &args.accept {
                Some(path) => {
                    let mut h = HumanJudgments::default();
                    let text = run.read_input(path)?;
                    parse_acceptability(&text, &mut h).map_err(|e| input_error(path, e))?;
                    Some(h)
                }
                None => None,
            };
            let table = run.table()?;
            let series = length_series(&run.corpus, &table, judgments.as_ref())?;
            match &args.common.out {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(|source| CliError::Io {
                        path: dir.clone(),
                        source,
                    })?;
                    for s in &series {
                        let path = dir.join(format!("{}.csv", s.name.replace([':', '/'], "_")));
                        write_file(&path, &output::length_csv(std::slice::from_ref(s), false))?;
                    }
                    Ok(())
                }
                None => {
                    print!("{}", output::length_bins(&series, args.common.format));
                    Ok(())
                }
            }
        }
        Command::Graph(cmd) => {
            let (file, text) = match &cmd {
                GraphCommand::Triples { file } | GraphCommand::E2n { file } | GraphCommand::Kgrams { file, .. } => {
                    (file.clone(), read(file)?)
                }
            };
            let entries = parse_corpus_file(&file, &text)?;
            let out = match cmd {
                GraphCommand::Triples { .. } => dump_triples(&entries),
                GraphCommand::E2n { .. } => dump_e2n(&entries),
                GraphCommand::Kgrams { k, .. } => {
                    if k == 0 {
                        return Err(CliError::Usage("--k must be at least 1".into()));
                    }
                    dump_kgrams(&entries, k)
                }
            };
            print!("{out}");
            Ok(())
        }
    }
}

fn aggregate(a: AggregateArg) -> Aggregate {
    match a {
        AggregateArg::Micro => Aggregate::Micro,
        AggregateArg::Macro => Aggregate::Macro,
        AggregateArg::Both => Aggregate::Both,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn parse_corpus_file(path: &Path, text: &str) -> Result<Vec<AmrEntry>, CliError> {
    read_corpus(text).map_err(|e| input_error(path, e))
}

/// Parser ids from file stems, or `a`/`b` when stems collide.
pub fn parser_ids(files: &[&Path]) -> Vec<String> {
    let stems: Vec<String> = files
        .iter()
        .map(|f| {
            f.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default()
        })
        .collect();
    let distinct = stems.iter().all(|s| !s.is_empty())
        && (1..stems.len()).all(|i| !stems[..i].contains(&stems[i]));
    if distinct {
        stems
    } else {
        ["a", "b", "c", "d"].iter().take(files.len()).map(|s| s.to_string()).collect()
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn digest(text: &str) -> String {
    hex(&Sha256::digest(text.as_bytes()))
}

/// Loaded inputs and the scorer configured from the common flags.
struct Session<'a> {
    common: &'a Common,
    metrics: Vec<MetricId>,
    config: MetricConfig,
    embeddings: Arc<EmbeddingStore>,
    corpus: EvalCorpus,
    alignment: Alignment,
    parsers: Vec<String>,
    inputs: Vec<(String, String)>,
}

impl<'a> Session<'a> {
    fn open(common: &'a Common, candidates: &[&Path]) -> Result<Self, CliError> {
        let metrics = MetricId::parse_list(&common.metrics).map_err(|e| CliError::Usage(e.to_string()))?;
        if metrics.is_empty() {
            return Err(CliError::Usage("no metrics selected".into()));
        }
        if !(0.0..=1.0).contains(&common.s2match_threshold) {
            return Err(CliError::Usage("--s2match-threshold must lie in [0, 1]".into()));
        }
        let mut inputs = Vec::new();
        let gold_text = read(&common.gold)?;
        inputs.push(("gold".to_string(), digest(&gold_text)));
        let gold = parse_corpus_file(&common.gold, &gold_text)?;
        let parsers = parser_ids(candidates);
        let mut sets = Vec::new();
        for (path, id) in candidates.iter().zip(&parsers) {
            let text = read(path)?;
            inputs.push((id.clone(), digest(&text)));
            sets.push((id.clone(), parse_corpus_file(path, &text)?));
        }
        let embeddings = match &common.embeddings {
            Some(path) => {
                let text = read(path)?;
                inputs.push(("embeddings".to_string(), digest(&text)));
                EmbeddingStore::parse(&text, common.embeddings_limit).map_err(|e| input_error(path, e))?
            }
            None => EmbeddingStore::fallback(),
        };
        let (corpus, alignment) = EvalCorpus::align(gold, sets)?;
        if alignment == Alignment::Positional && !candidates.is_empty() {
            log::warn!("not every entry has ::id; aligning candidates to gold by position");
        }
        let config = MetricConfig {
            restarts: common.restarts as usize,
            seed: derive_seed(common.seed, SMATCH_SEED_TAG),
            s2match_threshold: common.s2match_threshold,
            sema_unary: common.sema_unary == Switch::On,
            sembleu_smoothing: common.sembleu_smoothing,
        };
        Ok(Session {
            common,
            metrics,
            config,
            embeddings: Arc::new(embeddings),
            corpus,
            alignment,
            parsers,
            inputs,
        })
    }

    fn read_input(&mut self, path: &Path) -> Result<String, CliError> {
        let text = read(path)?;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        self.inputs.push((name, digest(&text)));
        Ok(text)
    }

    fn table(&self) -> Result<ScoreTable, CliError> {
        let scorer = Scorer::new(self.config.clone(), Arc::clone(&self.embeddings));
        Ok(ScoreTable::build(&self.corpus, &scorer, &self.metrics, &self.parsers)?)
    }

    fn provenance(&self, extra: serde_json::Value) -> Provenance {
        let canonical = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "metrics": self.metrics,
            "config": self.config,
            "seed": self.common.seed,
            "parsers": self.parsers,
            "inputs": self.inputs,
            "command": extra,
        });
        Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: digest(&canonical.to_string()),
            alignment: match self.alignment {
                Alignment::ById => "id".into(),
                Alignment::Positional => "position".into(),
            },
            seed: self.common.seed,
        }
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.common.out {
            Some(path) => write_file(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
