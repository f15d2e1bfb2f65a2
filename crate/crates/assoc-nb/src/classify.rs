//! Classification: match a document's frequent words against the model's
//! word sets, score every category in log space, and take the argmax.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::{Model, ModelError};
use crate::preprocess::{
    extract_transaction, ExtractError, ExtractionMode, PreprocessConfig, RawDocument,
};

/// How matched word sets contribute to the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreMode {
    /// Multiply the matched sets' conditionals as they are.
    #[default]
    Plain,
    /// Raise each conditional to the fraction of the word set that matched.
    Fractional,
    /// Multiply each conditional by the fraction instead of exponentiating;
    /// kept for comparison, not exposed on the command line.
    FractionalMultiplier,
}

impl ScoreMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScoreMode::Plain => "plain",
            ScoreMode::Fractional => "fractional",
            ScoreMode::FractionalMultiplier => "fractional-multiplier",
        }
    }
}

/// One deduplicated match: the vocabulary word set, the part of it found in
/// the document, and the matched fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchRecord {
    /// The winning vocabulary itemset for this matched subset.
    pub vocab_itemset: Vec<String>,
    /// Intersection of the itemset with the document words; at least 2 words.
    pub matched_subset: Vec<String>,
}

impl MatchRecord {
    /// |matched| / |vocab itemset| in (0, 1].
    pub fn fraction(&self) -> f64 {
        self.matched_subset.len() as f64 / self.vocab_itemset.len() as f64
    }

    /// The fraction as the literal ratio "p/q".
    pub fn fraction_label(&self) -> String {
        format!("{}/{}", self.matched_subset.len(), self.vocab_itemset.len())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Winner {
    Category(String),
    Unclassifiable,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Winner::Category(name) => f.write_str(name),
            Winner::Unclassifiable => f.write_str("UNCLASSIFIABLE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub doc_id: String,
    /// log10 of each category's score.
    pub log10_scores: BTreeMap<String, f64>,
    pub winner: Winner,
    pub matches: Vec<MatchRecord>,
    pub mode: ScoreMode,
}

impl ClassificationResult {
    /// Linear-scale scores, exponentiated from the log-space sums.
    pub fn scores(&self) -> BTreeMap<String, f64> {
        self.log10_scores
            .iter()
            .map(|(category, &log)| (category.clone(), 10f64.powf(log)))
            .collect()
    }

    /// Plain-text report: doc id, winner, one score line per category, one
    /// line per match.
    pub fn report(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("doc {}\n", self.doc_id));
        out.push_str(&format!("winner {}\n", self.winner));
        for (category, log) in &self.log10_scores {
            out.push_str(&format!("score {category} {log:.6}\n"));
        }
        for record in &self.matches {
            out.push_str(&format!(
                "match {} frac {} from {}\n",
                record.matched_subset.join(","),
                record.fraction_label(),
                record.vocab_itemset.join(","),
            ));
        }
        out
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Find every vocabulary itemset sharing at least two words with the
/// document. Candidates with the same matched subset are collapsed to the
/// one whose conditional in its attributed category is largest (ties: fewer
/// items, then lexicographic order).
pub fn find_matches(doc_words: &[String], model: &Model) -> Vec<MatchRecord> {
    debug_assert!(doc_words.windows(2).all(|w| w[0] < w[1]));
    let mut best: BTreeMap<Vec<String>, (Vec<String>, f64)> = BTreeMap::new();
    for itemset in model.vocabulary() {
        let matched: Vec<String> = itemset
            .iter()
            .filter(|item| doc_words.binary_search(item).is_ok())
            .cloned()
            .collect();
        if matched.len() < 2 {
            continue;
        }
        let category = model
            .attributed_category(itemset)
            .expect("vocabulary itemset without attribution");
        let conditional = model
            .conditional(itemset, category)
            .expect("attributed category missing from model");
        let better = match best.get(&matched) {
            None => true,
            Some((incumbent, incumbent_cond)) => {
                conditional > *incumbent_cond
                    || (conditional == *incumbent_cond
                        && (itemset.len() < incumbent.len()
                            || (itemset.len() == incumbent.len() && itemset < incumbent)))
            }
        };
        if better {
            best.insert(matched, (itemset.clone(), conditional));
        }
    }
    best.into_iter()
        .map(|(matched_subset, (vocab_itemset, _))| MatchRecord {
            vocab_itemset,
            matched_subset,
        })
        .collect()
}

/// Category score as log10(prior * product of match contributions).
pub fn log10_score(
    category: &str,
    matches: &[MatchRecord],
    model: &Model,
    mode: ScoreMode,
) -> Result<f64, ModelError> {
    let mut log_sum = model.prior(category)?.ln();
    for record in matches {
        let conditional = model.conditional(&record.vocab_itemset, category)?;
        log_sum += match mode {
            ScoreMode::Plain => conditional.ln(),
            ScoreMode::Fractional => record.fraction() * conditional.ln(),
            ScoreMode::FractionalMultiplier => (conditional * record.fraction()).ln(),
        };
    }
    Ok(log_sum / std::f64::consts::LN_10)
}

/// Linear-scale category score; the log-space sum exponentiated.
pub fn score(
    category: &str,
    matches: &[MatchRecord],
    model: &Model,
    mode: ScoreMode,
) -> Result<f64, ModelError> {
    Ok(10f64.powf(log10_score(category, matches, model, mode)?))
}

/// Preprocess a document, match it, and score every category. Returns
/// `Unclassifiable` (not an error) when no word set matches.
pub fn classify(
    doc: &RawDocument,
    model: &Model,
    config: &PreprocessConfig,
    mode: ScoreMode,
) -> Result<ClassificationResult, ClassifyError> {
    let transaction = extract_transaction(doc, config, ExtractionMode::Classification)?;
    let matches = find_matches(&transaction.words, model);

    let mut log10_scores = BTreeMap::new();
    for stats in model.categories() {
        let log = log10_score(stats.name(), &matches, model, mode)?;
        log10_scores.insert(stats.name().to_string(), log);
    }

    let winner = if matches.is_empty() {
        Winner::Unclassifiable
    } else {
        Winner::Category(pick_winner(&log10_scores, model))
    };

    Ok(ClassificationResult {
        doc_id: doc.id.clone(),
        log10_scores,
        winner,
        matches,
        mode,
    })
}

/// Argmax over log scores; ties go to the larger prior, then to the
/// lexicographically smaller category name.
fn pick_winner(log10_scores: &BTreeMap<String, f64>, model: &Model) -> String {
    log10_scores
        .iter()
        .map(|(category, &log)| {
            let prior = model.prior(category).unwrap_or(0.0);
            (category, log, prior)
        })
        .max_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.2.partial_cmp(&b.2).unwrap_or(std::cmp::Ordering::Equal))
                .then(b.0.cmp(a.0))
        })
        .map(|(category, _, _)| category.clone())
        .expect("no categories to score")
}
