//! Filesystem plumbing: corpus layout loading, transaction files, and the
//! text formats that persist models and mining results bit-exactly.
//!
//! All formats are line-oriented UTF-8 with `\n` endings so golden files
//! stay human-auditable. Serialization is canonical: equal values produce
//! identical bytes, and loading a saved file reproduces the value
//! field-for-field.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::apriori::{Itemset, MiningResult, Rule, TransactionDB};
use crate::model::{CategoryStats, Model, ModelError, PriorSource, TrainParams};
use crate::preprocess::{RawDocument, Transaction};

const MODEL_MAGIC: &str = "assoc-nb-model v1";
const MODEL_MAGIC_PREFIX: &str = "assoc-nb-model";
const MINING_MAGIC: &str = "# assoc-nb mining v1";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("corpus root {0} does not exist or is not a directory")]
    MissingRoot(PathBuf),
    #[error("cannot read {path}: {source}")]
    UnreadableFile {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("corpus root {0} contains no category directories")]
    NoCategories(PathBuf),
    #[error("not a model file (bad magic line {0:?})")]
    BadMagic(String),
    #[error("unsupported model version {0:?}")]
    VersionMismatch(String),
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

fn parse_error(line: usize, message: impl Into<String>) -> StoreError {
    StoreError::ParseError {
        line,
        message: message.into(),
    }
}

/// Load a corpus laid out as `root/<category>/<file>`. Every immediate
/// subdirectory is a category; every regular file inside becomes one
/// document with id `<category>/<filename>`. Hidden entries are ignored and
/// the result is sorted by id.
pub fn load_corpus(root: &Path) -> Result<Vec<RawDocument>, StoreError> {
    if !root.is_dir() {
        return Err(StoreError::MissingRoot(root.to_path_buf()));
    }
    let mut categories: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|source| StoreError::UnreadableFile {
            path: root.to_path_buf(),
            source,
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|path| path.is_dir())
        .filter(|path| !file_name_is_hidden(path))
        .collect();
    categories.sort();
    if categories.is_empty() {
        return Err(StoreError::NoCategories(root.to_path_buf()));
    }

    let mut documents = Vec::new();
    for category_dir in categories {
        let category = category_dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut files: Vec<PathBuf> = fs::read_dir(&category_dir)
            .map_err(|source| StoreError::UnreadableFile {
                path: category_dir.clone(),
                source,
            })?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|path| path.is_file())
            .filter(|path| !file_name_is_hidden(path))
            .collect();
        files.sort();
        for file in files {
            let text = fs::read_to_string(&file).map_err(|source| StoreError::UnreadableFile {
                path: file.clone(),
                source,
            })?;
            let name = file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            documents.push(RawDocument {
                id: format!("{category}/{name}"),
                category: Some(category.clone()),
                text,
            });
        }
    }
    documents.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(documents)
}

fn file_name_is_hidden(path: &Path) -> bool {
    path.file_name()
        .and_then(|n| n.to_str())
        .map(|n| n.starts_with('.'))
        .unwrap_or(true)
}

/// Read a transaction file: one transaction per line, items comma-separated,
/// whitespace trimmed, empty lines ignored.
pub fn load_transactions(path: &Path) -> Result<TransactionDB, StoreError> {
    let content = fs::read_to_string(path).map_err(|source| StoreError::UnreadableFile {
        path: path.to_path_buf(),
        source,
    })?;
    parse_transactions(&content)
}

pub fn parse_transactions(content: &str) -> Result<TransactionDB, StoreError> {
    let mut transactions = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut words = Vec::new();
        for item in line.split(',') {
            let item = item.trim();
            if item.is_empty() {
                return Err(parse_error(line_no, "empty item in transaction"));
            }
            words.push(item.to_string());
        }
        words.sort();
        words.dedup();
        transactions.push(Transaction {
            doc_id: format!("t{line_no}"),
            category: None,
            words,
            counts: BTreeMap::new(),
        });
    }
    Ok(TransactionDB::new(transactions))
}

/// Serialize a mining result: metadata as `#` lines, then one itemset per
/// line as `item1,item2,...<TAB>count`, levels ascending, lexicographic
/// within each level, with the maximal sets in a trailing section.
pub fn mining_to_string(result: &MiningResult) -> String {
    let mut out = String::new();
    out.push_str(MINING_MAGIC);
    out.push('\n');
    out.push_str(&format!("# min_sup {}\n", result.min_sup));
    out.push_str(&format!("# threshold {}\n", result.support_threshold_count));
    for (idx, level) in result.levels.iter().enumerate() {
        out.push_str(&format!("# level {}\n", idx + 1));
        for set in level {
            out.push_str(&format!("{}\t{}\n", set.label(), set.support_count));
        }
    }
    out.push_str("# maximal\n");
    for set in &result.maximal {
        out.push_str(&format!("{}\t{}\n", set.label(), set.support_count));
    }
    out
}

pub fn save_mining(result: &MiningResult, path: &Path) -> Result<(), StoreError> {
    let mut file = fs::File::create(path)?;
    file.write_all(mining_to_string(result).as_bytes())?;
    Ok(())
}

pub fn load_mining(path: &Path) -> Result<MiningResult, StoreError> {
    let content = fs::read_to_string(path).map_err(|source| StoreError::UnreadableFile {
        path: path.to_path_buf(),
        source,
    })?;
    parse_mining(&content)
}

pub fn parse_mining(content: &str) -> Result<MiningResult, StoreError> {
    let mut lines = content.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, magic) = lines
        .next()
        .ok_or_else(|| parse_error(1, "empty mining file"))?;
    if magic != MINING_MAGIC {
        return Err(StoreError::BadMagic(magic.to_string()));
    }

    let mut min_sup = None;
    let mut threshold = None;
    let mut levels: Vec<Vec<Itemset>> = Vec::new();
    let mut maximal: Vec<Itemset> = Vec::new();
    let mut in_maximal = false;

    for (line_no, line) in lines {
        if let Some(rest) = line.strip_prefix("# ") {
            let mut parts = rest.split_whitespace();
            match parts.next() {
                Some("min_sup") => {
                    let value = parts
                        .next()
                        .and_then(|v| v.parse::<f64>().ok())
                        .ok_or_else(|| parse_error(line_no, "bad min_sup"))?;
                    min_sup = Some(value);
                }
                Some("threshold") => {
                    let value = parts
                        .next()
                        .and_then(|v| v.parse::<usize>().ok())
                        .ok_or_else(|| parse_error(line_no, "bad threshold"))?;
                    threshold = Some(value);
                }
                Some("level") => {
                    let k: usize = parts
                        .next()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| parse_error(line_no, "bad level header"))?;
                    if k != levels.len() + 1 {
                        return Err(parse_error(line_no, "levels out of order"));
                    }
                    levels.push(Vec::new());
                }
                Some("maximal") => in_maximal = true,
                _ => return Err(parse_error(line_no, "unknown metadata line")),
            }
            continue;
        }
        let (label, count) = line
            .split_once('\t')
            .ok_or_else(|| parse_error(line_no, "expected <items>\\t<count>"))?;
        let count: usize = count
            .parse()
            .map_err(|_| parse_error(line_no, "bad support count"))?;
        let items: Vec<String> = label.split(',').map(str::to_string).collect();
        if items.iter().any(String::is_empty) {
            return Err(parse_error(line_no, "empty item"));
        }
        let set = Itemset {
            items,
            support_count: count,
        };
        if in_maximal {
            maximal.push(set);
        } else {
            if set.len() != levels.len() {
                return Err(parse_error(line_no, "itemset size does not match level"));
            }
            let level = levels
                .last_mut()
                .ok_or_else(|| parse_error(line_no, "itemset before level header"))?;
            level.push(set);
        }
    }

    Ok(MiningResult {
        levels,
        maximal,
        min_sup: min_sup.ok_or_else(|| parse_error(1, "missing min_sup"))?,
        support_threshold_count: threshold.ok_or_else(|| parse_error(1, "missing threshold"))?,
    })
}

/// Render the strong rules as one line each:
/// `ant1,ant2 => cons1,cons2<TAB>sup=<s> conf=<c>`.
pub fn rules_to_string(rules: &[Rule], min_conf: f64) -> String {
    let mut out = String::new();
    out.push_str(&format!("# rules min_conf {min_conf}\n"));
    for rule in rules {
        out.push_str(&format!(
            "{} => {}\tsup={:.4} conf={:.4}\n",
            rule.antecedent.label(),
            rule.consequent.label(),
            rule.support,
            rule.confidence,
        ));
    }
    out
}

/// Serialize a model. Layout:
///
/// ```text
/// assoc-nb-model v1
/// vocab <size>
/// params <min_sup> <min_conf> <k> <prior_source>
/// category <name> <word sets> <documents> <prior to 10 digits>
/// <item1,item2,...> <n_k>          (per itemset with n_k > 0, sorted)
/// ...
/// attribution
/// <item1,item2,...> <category>     (every vocabulary itemset, sorted)
/// ```
pub fn model_to_string(model: &Model) -> String {
    let mut out = String::new();
    out.push_str(MODEL_MAGIC);
    out.push('\n');
    out.push_str(&format!("vocab {}\n", model.vocab_size()));
    let params = model.params();
    out.push_str(&format!(
        "params {} {} {} {}\n",
        params.min_sup,
        params.min_conf,
        params.transaction_size_k,
        params.prior_source.as_str(),
    ));
    for stats in model.categories() {
        let prior = model
            .prior(stats.name())
            .expect("model category must have a prior");
        out.push_str(&format!(
            "category {} {} {} {:.10}\n",
            stats.name(),
            stats.n_wordsets(),
            stats.n_docs(),
            prior,
        ));
        for (items, n_k) in stats.occurrences() {
            out.push_str(&format!("{} {}\n", items.join(","), n_k));
        }
    }
    out.push_str("attribution\n");
    for (items, category) in model.attribution() {
        out.push_str(&format!("{} {}\n", items.join(","), category));
    }
    out
}

pub fn save_model(model: &Model, path: &Path) -> Result<(), StoreError> {
    let mut file = fs::File::create(path)?;
    file.write_all(model_to_string(model).as_bytes())?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<Model, StoreError> {
    let content = fs::read_to_string(path).map_err(|source| StoreError::UnreadableFile {
        path: path.to_path_buf(),
        source,
    })?;
    parse_model(&content)
}

pub fn parse_model(content: &str) -> Result<Model, StoreError> {
    let mut lines = content.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, magic) = lines
        .next()
        .ok_or_else(|| parse_error(1, "empty model file"))?;
    if magic != MODEL_MAGIC {
        if magic.starts_with(MODEL_MAGIC_PREFIX) {
            return Err(StoreError::VersionMismatch(magic.to_string()));
        }
        return Err(StoreError::BadMagic(magic.to_string()));
    }

    let (line_no, vocab_line) = lines
        .next()
        .ok_or_else(|| parse_error(2, "missing vocab line"))?;
    let declared_vocab: usize = vocab_line
        .strip_prefix("vocab ")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| parse_error(line_no, "expected `vocab <size>`"))?;

    let (line_no, params_line) = lines
        .next()
        .ok_or_else(|| parse_error(3, "missing params line"))?;
    let params = parse_params(params_line).ok_or_else(|| {
        parse_error(
            line_no,
            "expected `params <min_sup> <min_conf> <k> <prior_source>`",
        )
    })?;

    struct PendingCategory {
        name: String,
        n_wordsets: usize,
        n_docs: usize,
        prior: f64,
        line: usize,
        occurrence: BTreeMap<Vec<String>, u32>,
    }

    let mut pending: Vec<PendingCategory> = Vec::new();
    let mut attribution: BTreeMap<Vec<String>, String> = BTreeMap::new();
    let mut in_attribution = false;

    for (line_no, line) in lines {
        if line == "attribution" {
            if in_attribution {
                return Err(parse_error(line_no, "duplicate attribution block"));
            }
            in_attribution = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("category ") {
            if in_attribution {
                return Err(parse_error(line_no, "category block after attribution"));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(parse_error(
                    line_no,
                    "expected `category <name> <word sets> <documents> <prior>`",
                ));
            }
            let n_wordsets: usize = fields[1]
                .parse()
                .map_err(|_| parse_error(line_no, "bad word-set count"))?;
            let n_docs: usize = fields[2]
                .parse()
                .map_err(|_| parse_error(line_no, "bad document count"))?;
            let prior: f64 = fields[3]
                .parse()
                .map_err(|_| parse_error(line_no, "bad prior"))?;
            pending.push(PendingCategory {
                name: fields[0].to_string(),
                n_wordsets,
                n_docs,
                prior,
                line: line_no,
                occurrence: BTreeMap::new(),
            });
            continue;
        }

        let (label, value) = line
            .rsplit_once(' ')
            .ok_or_else(|| parse_error(line_no, "expected `<items> <value>`"))?;
        let items: Vec<String> = label.split(',').map(str::to_string).collect();
        if items.iter().any(String::is_empty) {
            return Err(parse_error(line_no, "empty item"));
        }
        let mut sorted = items.clone();
        sorted.sort();
        if sorted != items {
            return Err(parse_error(line_no, "itemset not sorted"));
        }
        if in_attribution {
            if attribution.insert(items, value.to_string()).is_some() {
                return Err(parse_error(line_no, "duplicate attribution entry"));
            }
        } else {
            let n_k: u32 = value
                .parse()
                .map_err(|_| parse_error(line_no, "bad occurrence count"))?;
            let category = pending
                .last_mut()
                .ok_or_else(|| parse_error(line_no, "itemset before any category"))?;
            if category.occurrence.insert(items, n_k).is_some() {
                return Err(parse_error(line_no, "duplicate itemset in category"));
            }
        }
    }

    if !in_attribution {
        return Err(parse_error(1, "missing attribution block"));
    }
    if attribution.len() != declared_vocab {
        return Err(parse_error(
            1,
            format!(
                "vocab line declares {declared_vocab} itemsets, attribution lists {}",
                attribution.len()
            ),
        ));
    }

    let declared: Vec<(String, usize, f64, usize)> = pending
        .iter()
        .map(|c| (c.name.clone(), c.n_wordsets, c.prior, c.line))
        .collect();
    let categories: Vec<CategoryStats> = pending
        .into_iter()
        .map(|c| CategoryStats::new(c.name, c.n_docs, c.occurrence))
        .collect();
    let model = Model::from_parts(categories, attribution, params)?;

    // Cross-check the declared redundant fields against the derived ones.
    for (name, n_wordsets, prior, line) in declared {
        let stats = model.category(&name).expect("category survived from_parts");
        if stats.n_wordsets() != n_wordsets {
            return Err(parse_error(
                line,
                format!(
                    "category {name} declares {n_wordsets} word sets, attribution yields {}",
                    stats.n_wordsets()
                ),
            ));
        }
        let derived = model.prior(&name).expect("prior for declared category");
        if (derived - prior).abs() > 1e-6 {
            return Err(parse_error(
                line,
                format!("category {name} declares prior {prior}, derived {derived:.10}"),
            ));
        }
    }
    Ok(model)
}

fn parse_params(line: &str) -> Option<TrainParams> {
    let fields: Vec<&str> = line.strip_prefix("params ")?.split_whitespace().collect();
    if fields.len() != 4 {
        return None;
    }
    Some(TrainParams {
        min_sup: fields[0].parse().ok()?,
        min_conf: fields[1].parse().ok()?,
        transaction_size_k: fields[2].parse().ok()?,
        prior_source: fields[3].parse::<PriorSource>().ok()?,
    })
}
