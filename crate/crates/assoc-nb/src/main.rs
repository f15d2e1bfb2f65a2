//! Command-line front end: mine transaction files, train models on corpus
//! directories, classify single documents, and evaluate on labeled corpora.
//!
//! Exit codes: 0 success, 2 parse/corpus/flag errors, 3 empty database or a
//! category without features, 4 unclassifiable document, 5 document with no
//! frequent words.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use assoc_nb::apriori;
use assoc_nb::classify::{self, ScoreMode, Winner};
use assoc_nb::model::{Model, ModelError, PriorSource, TrainParams};
use assoc_nb::preprocess::{
    self, ExtractError, ExtractionMode, PreprocessConfig, RawDocument, Transaction,
};
use assoc_nb::store::{self, StoreError};

const EXIT_PARSE: u8 = 2;
const EXIT_EMPTY: u8 = 3;
const EXIT_UNCLASSIFIABLE: u8 = 4;
const EXIT_EMPTY_DOCUMENT: u8 = 5;

#[derive(Parser)]
#[command(
    name = "assoc-nb",
    version,
    about = "Mine associated word sets from labeled text and classify documents with a Naive Bayes model over those sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum ModeArg {
    #[default]
    Plain,
    Fractional,
}

impl From<ModeArg> for ScoreMode {
    fn from(mode: ModeArg) -> ScoreMode {
        match mode {
            ModeArg::Plain => ScoreMode::Plain,
            ModeArg::Fractional => ScoreMode::Fractional,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum PriorSourceArg {
    #[default]
    Wordsets,
    Documents,
}

impl From<PriorSourceArg> for PriorSource {
    fn from(source: PriorSourceArg) -> PriorSource {
        match source {
            PriorSourceArg::Wordsets => PriorSource::Wordsets,
            PriorSourceArg::Documents => PriorSource::Documents,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Mine frequent itemsets and strong rules from a transaction file
    /// (one transaction per line, items comma-separated).
    Mine {
        /// Transaction file.
        input: PathBuf,
        /// Minimum support fraction (default: 0.02).
        #[arg(long, default_value_t = 0.02)]
        min_sup: f64,
        /// Minimum rule confidence (default: 0.75).
        #[arg(long, default_value_t = 0.75)]
        min_conf: f64,
        /// Write the itemset levels here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train a model from a corpus directory (one subdirectory per category).
    Train {
        /// Corpus root directory.
        corpus: PathBuf,
        /// Model output path.
        #[arg(long)]
        out: PathBuf,
        /// Minimum support fraction (default: 0.02).
        #[arg(long, default_value_t = 0.02)]
        min_sup: f64,
        /// Minimum rule confidence, echoed into the model (default: 0.75).
        #[arg(long, default_value_t = 0.75)]
        min_conf: f64,
        /// Frequent words kept per training document (default: 13).
        #[arg(long, default_value_t = 13)]
        k: usize,
        /// Stop-word file overriding the bundled list.
        #[arg(long)]
        stopwords: Option<PathBuf>,
        /// Prior interpretation (default: wordsets).
        #[arg(long, value_enum, default_value_t)]
        prior_source: PriorSourceArg,
    },
    /// Classify one document against a trained model.
    Classify {
        /// Document file.
        doc: PathBuf,
        /// Model path.
        #[arg(long)]
        model: PathBuf,
        /// Scoring mode (default: plain).
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        /// Stop-word file overriding the bundled list.
        #[arg(long)]
        stopwords: Option<PathBuf>,
    },
    /// Classify every document of a labeled corpus and report accuracy.
    Eval {
        /// Corpus root directory.
        corpus: PathBuf,
        /// Model path.
        #[arg(long)]
        model: PathBuf,
        /// Scoring mode (default: plain).
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        /// Stop-word file overriding the bundled list.
        #[arg(long)]
        stopwords: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`assoc-nb mine ... | head`) instead of
    // panicking mid-print.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Mine {
            input,
            min_sup,
            min_conf,
            out,
        } => cmd_mine(&input, min_sup, min_conf, out.as_deref()),
        Command::Train {
            corpus,
            out,
            min_sup,
            min_conf,
            k,
            stopwords,
            prior_source,
        } => cmd_train(
            &corpus,
            &out,
            min_sup,
            min_conf,
            k,
            stopwords.as_deref(),
            prior_source.into(),
        ),
        Command::Classify {
            doc,
            model,
            mode,
            stopwords,
        } => cmd_classify(&doc, &model, mode.into(), stopwords.as_deref()),
        Command::Eval {
            corpus,
            model,
            mode,
            stopwords,
        } => cmd_eval(&corpus, &model, mode.into(), stopwords.as_deref()),
    }
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn store_error_code(err: &StoreError) -> u8 {
    match err {
        StoreError::Model(ModelError::NoFeatures(_)) => EXIT_EMPTY,
        _ => EXIT_PARSE,
    }
}

fn preprocess_config(stopwords: Option<&Path>, k: usize) -> Result<PreprocessConfig, ExitCode> {
    let mut config = PreprocessConfig {
        transaction_size_k: k,
        ..PreprocessConfig::default()
    };
    if let Some(path) = stopwords {
        config.stopwords = preprocess::load_stopwords(path)
            .map_err(|err| fail(EXIT_PARSE, format!("cannot read stop words: {err}")))?;
    }
    Ok(config)
}

fn cmd_mine(input: &Path, min_sup: f64, min_conf: f64, out: Option<&Path>) -> ExitCode {
    let db = match store::load_transactions(input) {
        Ok(db) => db,
        Err(err) => return fail(EXIT_PARSE, err),
    };
    let result = match apriori::mine(&db, min_sup) {
        Ok(result) => result,
        Err(err @ apriori::MiningError::EmptyDatabase) => return fail(EXIT_EMPTY, err),
        Err(err @ apriori::MiningError::InvalidSupport(_)) => return fail(EXIT_PARSE, err),
    };
    let listing = store::mining_to_string(&result);
    match out {
        Some(path) => {
            if let Err(err) = store::save_mining(&result, path) {
                return fail(EXIT_PARSE, err);
            }
        }
        None => print!("{listing}"),
    }
    let rules = apriori::generate_rules(&result, min_conf, &db);
    print!("{}", store::rules_to_string(&rules, min_conf));
    ExitCode::SUCCESS
}

fn cmd_train(
    corpus_root: &Path,
    out: &Path,
    min_sup: f64,
    min_conf: f64,
    k: usize,
    stopwords: Option<&Path>,
    prior_source: PriorSource,
) -> ExitCode {
    let config = match preprocess_config(stopwords, k) {
        Ok(config) => config,
        Err(code) => return code,
    };
    let documents = match store::load_corpus(corpus_root) {
        Ok(docs) => docs,
        Err(err) => return fail(EXIT_PARSE, err),
    };

    let mut transactions: Vec<Transaction> = Vec::new();
    let mut discarded = 0usize;
    for doc in &documents {
        match preprocess::extract_transaction(doc, &config, ExtractionMode::Training) {
            Ok(transaction) => transactions.push(transaction),
            Err(ExtractError::Discarded { .. }) | Err(ExtractError::EmptyDocument { .. }) => {
                discarded += 1;
            }
        }
    }

    // Fail loudly when a corpus category contributed nothing.
    let mut corpus_categories: Vec<&str> = documents
        .iter()
        .filter_map(|d| d.category.as_deref())
        .collect();
    corpus_categories.sort();
    corpus_categories.dedup();
    for category in &corpus_categories {
        if !transactions
            .iter()
            .any(|t| t.category.as_deref() == Some(category))
        {
            return fail(EXIT_EMPTY, ModelError::NoFeatures((*category).to_string()));
        }
    }

    let params = TrainParams {
        min_sup,
        min_conf,
        transaction_size_k: k,
        prior_source,
    };
    let model = match Model::train(&transactions, params) {
        Ok(model) => model,
        Err(err @ ModelError::NoFeatures(_)) => return fail(EXIT_EMPTY, err),
        Err(err) => return fail(EXIT_PARSE, err),
    };
    if let Err(err) = store::save_model(&model, out) {
        return fail(EXIT_PARSE, err);
    }
    print!(
        "{}",
        assoc_nb::model::training_summary(&model, transactions.len(), discarded)
    );
    ExitCode::SUCCESS
}

fn read_document(path: &Path) -> Result<RawDocument, ExitCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| fail(EXIT_PARSE, format!("cannot read {}: {err}", path.display())))?;
    Ok(RawDocument {
        id: path.display().to_string(),
        category: None,
        text,
    })
}

fn cmd_classify(
    doc_path: &Path,
    model_path: &Path,
    mode: ScoreMode,
    stopwords: Option<&Path>,
) -> ExitCode {
    let config = match preprocess_config(stopwords, 13) {
        Ok(config) => config,
        Err(code) => return code,
    };
    let model = match store::load_model(model_path) {
        Ok(model) => model,
        Err(err) => return fail(store_error_code(&err), err),
    };
    let doc = match read_document(doc_path) {
        Ok(doc) => doc,
        Err(code) => return code,
    };
    match classify::classify(&doc, &model, &config, mode) {
        Ok(result) => {
            print!("{}", result.report());
            match result.winner {
                Winner::Category(_) => ExitCode::SUCCESS,
                Winner::Unclassifiable => ExitCode::from(EXIT_UNCLASSIFIABLE),
            }
        }
        Err(classify::ClassifyError::Extract(err @ ExtractError::EmptyDocument { .. })) => {
            fail(EXIT_EMPTY_DOCUMENT, err)
        }
        Err(err) => fail(EXIT_PARSE, err),
    }
}

fn cmd_eval(
    corpus_root: &Path,
    model_path: &Path,
    mode: ScoreMode,
    stopwords: Option<&Path>,
) -> ExitCode {
    let config = match preprocess_config(stopwords, 13) {
        Ok(config) => config,
        Err(code) => return code,
    };
    let model = match store::load_model(model_path) {
        Ok(model) => model,
        Err(err) => return fail(store_error_code(&err), err),
    };
    let documents = match store::load_corpus(corpus_root) {
        Ok(docs) => docs,
        Err(err) => return fail(EXIT_PARSE, err),
    };

    let model_categories: Vec<String> = model
        .categories()
        .iter()
        .map(|s| s.name().to_string())
        .collect();

    let mut per_category: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut confusion: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut correct = 0usize;
    let mut unclassifiable = 0usize;
    let mut empty = 0usize;
    let mut unknown_category = 0usize;

    for doc in &documents {
        let truth = doc.category.clone().unwrap_or_default();
        if !model_categories.contains(&truth) {
            unknown_category += 1;
        }
        let entry = per_category.entry(truth.clone()).or_insert((0, 0));
        entry.0 += 1;

        let predicted = match classify::classify(doc, &model, &config, mode) {
            Ok(result) => match result.winner {
                Winner::Category(name) => name,
                Winner::Unclassifiable => {
                    unclassifiable += 1;
                    "UNCLASSIFIABLE".to_string()
                }
            },
            Err(classify::ClassifyError::Extract(ExtractError::EmptyDocument { .. })) => {
                empty += 1;
                unclassifiable += 1;
                "UNCLASSIFIABLE".to_string()
            }
            Err(err) => return fail(EXIT_PARSE, err),
        };
        if predicted == truth {
            correct += 1;
            entry.1 += 1;
        }
        *confusion.entry((truth, predicted)).or_insert(0) += 1;
    }

    let total = documents.len();
    let accuracy = if total == 0 {
        0.0
    } else {
        correct as f64 / total as f64
    };
    println!("documents {total}");
    println!("correct {correct}");
    println!("accuracy {accuracy:.4}");
    println!("unclassifiable {unclassifiable}");
    println!("empty-documents {empty}");
    println!("unknown-category {unknown_category}");
    for (category, (docs, right)) in &per_category {
        let acc = if *docs == 0 {
            0.0
        } else {
            *right as f64 / *docs as f64
        };
        println!("category {category} documents {docs} correct {right} accuracy {acc:.4}");
    }
    let mut predicted_labels: Vec<String> = model_categories.clone();
    predicted_labels.push("UNCLASSIFIABLE".to_string());
    for truth in per_category.keys() {
        let cells: Vec<String> = predicted_labels
            .iter()
            .map(|p| {
                let count = confusion
                    .get(&(truth.clone(), p.clone()))
                    .copied()
                    .unwrap_or(0);
                format!("{p}={count}")
            })
            .collect();
        println!("confusion {truth} {}", cells.join(" "));
    }
    ExitCode::SUCCESS
}
