//! The word-set Naive Bayes model: per-category priors and m-estimate
//! conditionals over the mined vocabulary.
//!
//! Training mines each category's transactions separately; the category's
//! feature contribution is its maximal frequent itemsets of two or more
//! words. Every vocabulary itemset is attributed to exactly one category for
//! the prior bookkeeping, but keeps its true occurrence count in every
//! category for the conditional (n_k + 1) / (n + |vocabulary|).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::apriori::{self, contains_sorted, TransactionDB};
use crate::preprocess::Transaction;

/// Where priors come from: attributed word-set fractions (default) or
/// training-document fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriorSource {
    #[default]
    Wordsets,
    Documents,
}

impl PriorSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            PriorSource::Wordsets => "wordsets",
            PriorSource::Documents => "documents",
        }
    }
}

impl std::str::FromStr for PriorSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wordsets" => Ok(PriorSource::Wordsets),
            "documents" => Ok(PriorSource::Documents),
            other => Err(format!("unknown prior source `{other}`")),
        }
    }
}

/// Training parameters echoed into the model.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainParams {
    pub min_sup: f64,
    pub min_conf: f64,
    pub transaction_size_k: usize,
    pub prior_source: PriorSource,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            min_sup: 0.02,
            min_conf: 0.75,
            transaction_size_k: 13,
            prior_source: PriorSource::Wordsets,
        }
    }
}

/// Per-category bookkeeping: attributed word-set count (the `n` of the
/// conditional), training document count, and occurrence counts `n_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryStats {
    name: String,
    n_wordsets: usize,
    n_docs: usize,
    /// n_k per vocabulary itemset; absent means zero.
    occurrence: BTreeMap<Vec<String>, u32>,
}

impl CategoryStats {
    /// Stats with the attributed word-set count still unset; `Model::from_parts`
    /// derives it from the attribution map.
    pub fn new(name: String, n_docs: usize, occurrence: BTreeMap<Vec<String>, u32>) -> Self {
        CategoryStats {
            name,
            n_wordsets: 0,
            n_docs,
            occurrence,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_wordsets(&self) -> usize {
        self.n_wordsets
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn occurrence(&self, items: &[String]) -> u32 {
        self.occurrence.get(items).copied().unwrap_or(0)
    }

    pub fn occurrences(&self) -> impl Iterator<Item = (&Vec<String>, u32)> {
        self.occurrence.iter().map(|(items, &count)| (items, count))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    /// Sorted by category name.
    categories: Vec<CategoryStats>,
    /// Sorted, duplicate-free union of all attributed itemsets.
    vocabulary: Vec<Vec<String>>,
    /// Attributed category per vocabulary itemset.
    attribution: BTreeMap<Vec<String>, String>,
    params: TrainParams,
}

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("transaction {0} carries no category label")]
    UnlabeledTransaction(String),
    #[error("training needs at least 2 categories, found {0}")]
    TooFewCategories(usize),
    #[error("category {0} yields no word sets")]
    NoFeatures(String),
    #[error("unknown category {0}")]
    UnknownCategory(String),
    #[error("category name {0:?} contains whitespace")]
    BadCategoryName(String),
    #[error("inconsistent model: {0}")]
    Inconsistent(String),
}

impl Model {
    /// Train on labeled transactions. Each category is mined on its own; the
    /// maximal frequent itemsets of size >= 2 become that category's
    /// features. Itemsets mined by several categories are attributed to the
    /// one with the largest occurrence count (ties to the lexicographically
    /// smaller name).
    pub fn train(corpus: &[Transaction], params: TrainParams) -> Result<Model, ModelError> {
        if corpus.is_empty() {
            return Err(ModelError::EmptyCorpus);
        }
        let mut by_category: BTreeMap<&str, Vec<&Transaction>> = BTreeMap::new();
        for transaction in corpus {
            let category = transaction
                .category
                .as_deref()
                .ok_or_else(|| ModelError::UnlabeledTransaction(transaction.doc_id.clone()))?;
            if category.chars().any(char::is_whitespace) {
                return Err(ModelError::BadCategoryName(category.to_string()));
            }
            by_category.entry(category).or_default().push(transaction);
        }
        if by_category.len() < 2 {
            return Err(ModelError::TooFewCategories(by_category.len()));
        }

        // Mine each category separately; features are its maximal frequent
        // itemsets of two or more words.
        let mut features: BTreeMap<&str, BTreeSet<Vec<String>>> = BTreeMap::new();
        for (&category, transactions) in &by_category {
            let db = TransactionDB::new(transactions.iter().map(|&t| t.clone()).collect());
            let mined = apriori::mine(&db, params.min_sup)
                .map_err(|_| ModelError::NoFeatures(category.to_string()))?;
            let sets: BTreeSet<Vec<String>> = mined
                .maximal
                .into_iter()
                .filter(|set| set.len() >= 2)
                .map(|set| set.items)
                .collect();
            if sets.is_empty() {
                return Err(ModelError::NoFeatures(category.to_string()));
            }
            features.insert(category, sets);
        }

        let vocabulary: Vec<Vec<String>> = features
            .values()
            .flat_map(|sets| sets.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();

        // True occurrence counts of every vocabulary itemset in every
        // category's transactions.
        let mut occurrence: BTreeMap<&str, BTreeMap<Vec<String>, u32>> = BTreeMap::new();
        for (&category, transactions) in &by_category {
            let counts = occurrence.entry(category).or_default();
            for items in &vocabulary {
                let n_k = transactions
                    .iter()
                    .filter(|t| contains_sorted(&t.words, items))
                    .count() as u32;
                if n_k > 0 {
                    counts.insert(items.clone(), n_k);
                }
            }
        }

        // Attribute each itemset to one of the categories that mined it.
        let mut attribution: BTreeMap<Vec<String>, String> = BTreeMap::new();
        for items in &vocabulary {
            let winner = features
                .iter()
                .filter(|(_, sets)| sets.contains(items))
                .map(|(&category, _)| {
                    let n_k = occurrence[category].get(items).copied().unwrap_or(0);
                    (category, n_k)
                })
                // max_by_key keeps the last maximum; reverse name order so
                // ties land on the lexicographically smaller category.
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(a.0)))
                .map(|(category, _)| category)
                .expect("vocabulary itemset mined by no category");
            attribution.insert(items.clone(), winner.to_string());
        }

        let categories = by_category
            .iter()
            .map(|(&category, transactions)| {
                CategoryStats::new(
                    category.to_string(),
                    transactions.len(),
                    occurrence.remove(category).unwrap_or_default(),
                )
            })
            .collect();

        Model::from_parts(categories, attribution, params)
    }

    /// Assemble a model from already-computed parts, validating the
    /// invariants the rest of the crate relies on. The vocabulary is the
    /// attribution map's key set; attributed word-set counts are derived.
    pub fn from_parts(
        mut categories: Vec<CategoryStats>,
        attribution: BTreeMap<Vec<String>, String>,
        params: TrainParams,
    ) -> Result<Model, ModelError> {
        categories.sort_by(|a, b| a.name.cmp(&b.name));
        for pair in categories.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(ModelError::Inconsistent(format!(
                    "duplicate category {}",
                    pair[0].name
                )));
            }
        }
        for stats in &categories {
            if stats.name.is_empty() || stats.name.chars().any(char::is_whitespace) {
                return Err(ModelError::BadCategoryName(stats.name.clone()));
            }
        }

        for items in attribution.keys() {
            let sorted = items.windows(2).all(|pair| pair[0] < pair[1]);
            if items.is_empty() || !sorted {
                return Err(ModelError::Inconsistent(format!(
                    "itemset {} is not sorted and duplicate-free",
                    items.join(",")
                )));
            }
        }

        let vocabulary: Vec<Vec<String>> = attribution.keys().cloned().collect();
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for category in attribution.values() {
            *counts.entry(category).or_insert(0) += 1;
        }
        for category in counts.keys() {
            if !categories.iter().any(|s| s.name == **category) {
                return Err(ModelError::Inconsistent(format!(
                    "attribution references unknown category {category}"
                )));
            }
        }
        for stats in &mut categories {
            stats.n_wordsets = counts.get(stats.name.as_str()).copied().unwrap_or(0);
            if stats.n_wordsets == 0 {
                return Err(ModelError::NoFeatures(stats.name.clone()));
            }
            for items in stats.occurrence.keys() {
                if !attribution.contains_key(items) {
                    return Err(ModelError::Inconsistent(format!(
                        "occurrence entry {} is not in the vocabulary",
                        items.join(",")
                    )));
                }
            }
        }

        Ok(Model {
            categories,
            vocabulary,
            attribution,
            params,
        })
    }

    pub fn categories(&self) -> &[CategoryStats] {
        &self.categories
    }

    pub fn category(&self, name: &str) -> Option<&CategoryStats> {
        self.categories.iter().find(|s| s.name == name)
    }

    pub fn vocabulary(&self) -> &[Vec<String>] {
        &self.vocabulary
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn attribution(&self) -> &BTreeMap<Vec<String>, String> {
        &self.attribution
    }

    pub fn attributed_category(&self, items: &[String]) -> Option<&str> {
        self.attribution.get(items).map(String::as_str)
    }

    pub fn params(&self) -> &TrainParams {
        &self.params
    }

    /// Smoothed conditional (n_k + 1) / (n + |vocabulary|). Itemsets never
    /// seen in the category fall back to the positive floor.
    pub fn conditional(&self, items: &[String], category: &str) -> Result<f64, ModelError> {
        let stats = self
            .category(category)
            .ok_or_else(|| ModelError::UnknownCategory(category.to_string()))?;
        let n_k = stats.occurrence(items) as f64;
        Ok((n_k + 1.0) / (stats.n_wordsets as f64 + self.vocab_size() as f64))
    }

    pub fn prior(&self, category: &str) -> Result<f64, ModelError> {
        let stats = self
            .category(category)
            .ok_or_else(|| ModelError::UnknownCategory(category.to_string()))?;
        Ok(self.prior_of(stats, self.params.prior_source))
    }

    /// Prior under an explicit interpretation, regardless of the trained
    /// default.
    pub fn prior_with_source(
        &self,
        category: &str,
        source: PriorSource,
    ) -> Result<f64, ModelError> {
        let stats = self
            .category(category)
            .ok_or_else(|| ModelError::UnknownCategory(category.to_string()))?;
        Ok(self.prior_of(stats, source))
    }

    fn prior_of(&self, stats: &CategoryStats, source: PriorSource) -> f64 {
        match source {
            PriorSource::Wordsets => stats.n_wordsets as f64 / self.vocab_size() as f64,
            PriorSource::Documents => {
                let total: usize = self.categories.iter().map(|s| s.n_docs).sum();
                stats.n_docs as f64 / total as f64
            }
        }
    }

    pub fn priors(&self) -> BTreeMap<&str, f64> {
        self.categories
            .iter()
            .map(|s| (s.name.as_str(), self.prior_of(s, self.params.prior_source)))
            .collect()
    }
}

/// Human-readable training summary: documents used and discarded, word sets
/// per category, vocabulary size, and priors. When the word-set and
/// document-fraction priors disagree by more than 0.01 for any category,
/// both interpretations are printed.
pub fn training_summary(model: &Model, used: usize, discarded: usize) -> String {
    let mut out = String::new();
    out.push_str(&format!("documents used {used}\n"));
    out.push_str(&format!("documents discarded {discarded}\n"));
    for stats in model.categories() {
        out.push_str(&format!(
            "category {} documents {} word-sets {}\n",
            stats.name(),
            stats.n_docs(),
            stats.n_wordsets(),
        ));
    }
    out.push_str(&format!("vocabulary {}\n", model.vocab_size()));
    let prior_pair = |name: &str| {
        let w = model
            .prior_with_source(name, PriorSource::Wordsets)
            .unwrap_or(0.0);
        let d = model
            .prior_with_source(name, PriorSource::Documents)
            .unwrap_or(0.0);
        (w, d)
    };
    for stats in model.categories() {
        let (wordsets, _) = prior_pair(stats.name());
        out.push_str(&format!("prior {} {wordsets:.10}\n", stats.name()));
    }
    let disagrees = model.categories().iter().any(|stats| {
        let (w, d) = prior_pair(stats.name());
        (w - d).abs() > 0.01
    });
    if disagrees {
        for stats in model.categories() {
            let (_, documents) = prior_pair(stats.name());
            out.push_str(&format!(
                "prior-documents {} {documents:.10}\n",
                stats.name()
            ));
        }
    }
    out
}
