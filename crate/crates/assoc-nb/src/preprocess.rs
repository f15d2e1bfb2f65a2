//! Document cleaning: turn raw text into the frequent-word transaction that
//! gets mined and matched.
//!
//! The pipeline is tokenize -> remove stop words -> merge plurals -> keep
//! words occurring at least twice. Training documents are reduced to exactly
//! `transaction_size_k` words (highest frequency first, earliest first
//! occurrence breaking ties); documents seen at classification time keep all
//! their frequent words.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// A document as loaded from disk, before any cleaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub id: String,
    /// Category label; `None` for documents of unknown class.
    pub category: Option<String>,
    pub text: String,
}

/// Ordered lowercase tokens plus the position each token occupied in the
/// tokenized stream. Positions survive stop-word removal so that
/// first-occurrence tie-breaking sees the original word order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenStream {
    tokens: Vec<String>,
    positions: Vec<usize>,
}

impl TokenStream {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.tokens
            .iter()
            .map(String::as_str)
            .zip(self.positions.iter().copied())
    }

    /// First-occurrence position of each distinct token.
    pub fn first_positions(&self) -> BTreeMap<&str, usize> {
        let mut first = BTreeMap::new();
        for (tok, pos) in self.iter() {
            first.entry(tok).or_insert(pos);
        }
        first
    }
}

/// A document reduced to its frequent words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub doc_id: String,
    pub category: Option<String>,
    /// Sorted, duplicate-free.
    pub words: Vec<String>,
    /// Occurrence frequency per word in the cleaned stream. Empty for
    /// transactions parsed from an item-list file, where no frequency
    /// information exists.
    pub counts: BTreeMap<String, u32>,
}

#[derive(Debug, Clone)]
pub struct PreprocessConfig {
    pub stopwords: HashSet<String>,
    /// Number of words kept per training transaction.
    pub transaction_size_k: usize,
    /// A word is frequent when it occurs at least this often (>= 2).
    pub min_word_frequency: u32,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            stopwords: default_stopwords().clone(),
            transaction_size_k: 13,
            min_word_frequency: 2,
        }
    }
}

/// Whether a document is being prepared for training or for classification.
/// Training transactions are capped at exactly `k` words and discarded when
/// fewer frequent words exist; classification keeps every frequent word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionMode {
    Training,
    Classification,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("document {doc_id} discarded: {found} frequent words, {required} required")]
    Discarded {
        doc_id: String,
        found: usize,
        required: usize,
    },
    #[error("document {doc_id} has no frequent words")]
    EmptyDocument { doc_id: String },
}

/// The bundled stop-word list.
pub fn default_stopwords() -> &'static HashSet<String> {
    static CELL: OnceLock<HashSet<String>> = OnceLock::new();
    CELL.get_or_init(|| parse_stopwords(DEFAULT_STOPWORDS))
}

/// Parse a stop-word list: one word per line, `#` lines ignored, lowercased.
pub fn parse_stopwords(content: &str) -> HashSet<String> {
    content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

/// Load a stop-word file (UTF-8, one word per line, `#` comments).
pub fn load_stopwords(path: &Path) -> std::io::Result<HashSet<String>> {
    let file = std::fs::File::open(path)?;
    let mut words = HashSet::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        let line = line.trim();
        if !line.is_empty() && !line.starts_with('#') {
            words.insert(line.to_lowercase());
        }
    }
    Ok(words)
}

/// Split text into lowercase tokens. A token is a maximal run of letters,
/// digits, and hyphens with leading/trailing hyphens stripped, so
/// "message-passing" survives as one token while punctuation separates.
pub fn tokenize(text: &str) -> TokenStream {
    let mut stream = TokenStream::default();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() || ch == '-' {
            // Lowercasing can expand one char into several ("İ" becomes an
            // "i" plus a combining mark); keep only what stays inside the
            // token alphabet.
            for lower in ch.to_lowercase() {
                if lower.is_alphanumeric() || lower == '-' {
                    current.push(lower);
                }
            }
        } else {
            flush_token(&mut current, &mut stream);
        }
    }
    flush_token(&mut current, &mut stream);
    stream
}

fn flush_token(current: &mut String, stream: &mut TokenStream) {
    if current.is_empty() {
        return;
    }
    let trimmed = current.trim_matches('-');
    if !trimmed.is_empty() {
        let pos = stream.tokens.len();
        stream.tokens.push(trimmed.to_string());
        stream.positions.push(pos);
    }
    current.clear();
}

/// Drop every token found in the stop-word list, keeping survivor positions.
pub fn remove_stopwords(stream: &TokenStream, config: &PreprocessConfig) -> TokenStream {
    let mut out = TokenStream::default();
    for (tok, pos) in stream.iter() {
        if !config.stopwords.contains(tok) {
            out.tokens.push(tok.to_string());
            out.positions.push(pos);
        }
    }
    out
}

/// Rewrite plural forms to the singular when both forms occur in the stream.
/// Only the "s"/"es" suffixes are considered and only when the stripped form
/// is itself present; this is deliberately not a stemmer. Chains resolve in
/// one pass ("catss" -> "cats" -> "cat"), which makes the operation
/// idempotent.
pub fn merge_plurals(stream: &TokenStream) -> TokenStream {
    let distinct: HashSet<&str> = stream.tokens.iter().map(String::as_str).collect();
    let mut out = TokenStream::default();
    for (tok, pos) in stream.iter() {
        out.tokens.push(singularize(tok, &distinct));
        out.positions.push(pos);
    }
    out
}

fn singularize(token: &str, distinct: &HashSet<&str>) -> String {
    let mut current = token;
    loop {
        let stripped = current
            .strip_suffix('s')
            .filter(|base| !base.is_empty() && distinct.contains(base))
            .or_else(|| {
                current
                    .strip_suffix("es")
                    .filter(|base| !base.is_empty() && distinct.contains(base))
            });
        match stripped {
            Some(base) => current = base,
            None => return current.to_string(),
        }
    }
}

/// Run the full cleaning pipeline and build the transaction for a document.
///
/// Returns `Discarded` for a training document with fewer than `k` frequent
/// words and `EmptyDocument` for a classification document with none.
pub fn extract_transaction(
    doc: &RawDocument,
    config: &PreprocessConfig,
    mode: ExtractionMode,
) -> Result<Transaction, ExtractError> {
    debug_assert!(config.transaction_size_k >= 1);
    debug_assert!(config.min_word_frequency >= 2);

    let stream = merge_plurals(&remove_stopwords(&tokenize(&doc.text), config));

    let mut counts: BTreeMap<&str, u32> = BTreeMap::new();
    let mut first_pos: BTreeMap<&str, usize> = BTreeMap::new();
    for (tok, pos) in stream.iter() {
        *counts.entry(tok).or_insert(0) += 1;
        first_pos.entry(tok).or_insert(pos);
    }

    let mut frequent: Vec<(&str, u32, usize)> = counts
        .iter()
        .filter(|(_, &count)| count >= config.min_word_frequency)
        .map(|(&word, &count)| (word, count, first_pos[word]))
        .collect();

    let selected: Vec<(&str, u32)> = match mode {
        ExtractionMode::Training => {
            let k = config.transaction_size_k;
            if frequent.len() < k {
                return Err(ExtractError::Discarded {
                    doc_id: doc.id.clone(),
                    found: frequent.len(),
                    required: k,
                });
            }
            // Highest frequency first; earlier first occurrence wins ties.
            frequent.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
            frequent.truncate(k);
            frequent.iter().map(|&(w, c, _)| (w, c)).collect()
        }
        ExtractionMode::Classification => {
            if frequent.is_empty() {
                return Err(ExtractError::EmptyDocument {
                    doc_id: doc.id.clone(),
                });
            }
            frequent.iter().map(|&(w, c, _)| (w, c)).collect()
        }
    };

    let mut words: Vec<String> = selected.iter().map(|&(w, _)| w.to_string()).collect();
    words.sort();
    let word_counts = selected.iter().map(|&(w, c)| (w.to_string(), c)).collect();

    Ok(Transaction {
        doc_id: doc.id.clone(),
        category: doc.category.clone(),
        words,
        counts: word_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn doc(text: &str) -> RawDocument {
        RawDocument {
            id: "test".to_string(),
            category: None,
            text: text.to_string(),
        }
    }

    fn stream_of(tokens: &[&str]) -> TokenStream {
        let mut s = TokenStream::default();
        for (i, t) in tokens.iter().enumerate() {
            s.tokens.push(t.to_string());
            s.positions.push(i);
        }
        s
    }

    #[test]
    fn tokenize_empty_text() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  ,.;!  ").is_empty());
    }

    #[test]
    fn tokenize_keeps_internal_hyphens() {
        let s = tokenize("a t-spanner (an approximate t-spanner) of G");
        assert_eq!(
            s.tokens(),
            [
                "a",
                "t-spanner",
                "an",
                "approximate",
                "t-spanner",
                "of",
                "g"
            ]
        );
        assert_eq!(s.first_positions()["t-spanner"], 1);
    }

    #[test]
    fn tokenize_hyphenated_compound() {
        let s = tokenize("message-passing, system");
        assert_eq!(s.tokens(), ["message-passing", "system"]);
    }

    #[test]
    fn tokenize_strips_edge_hyphens() {
        let s = tokenize("-leading trailing- --both-- ---");
        assert_eq!(s.tokens(), ["leading", "trailing", "both"]);
    }

    // Independent route for the tokenizer rule: lowercase, regex over the
    // token alphabet, trim hyphens. Restricted to ASCII inputs.
    fn regex_tokenize(text: &str) -> Vec<String> {
        let re = regex::Regex::new(r"[a-z0-9-]+").unwrap();
        re.find_iter(&text.to_lowercase())
            .map(|m| m.as_str().trim_matches('-').to_string())
            .filter(|t| !t.is_empty())
            .collect()
    }

    proptest! {
        #[test]
        fn tokenize_matches_regex_oracle(text in "[ a-zA-Z0-9.,;:!?()'\"-]{0,120}") {
            let walked = tokenize(&text);
            let regexed = regex_tokenize(&text);
            prop_assert_eq!(walked.tokens(), regexed.as_slice());
        }

        #[test]
        fn tokens_stay_inside_the_alphabet(text in "\\PC{0,80}") {
            for tok in tokenize(&text).tokens() {
                prop_assert!(!tok.starts_with('-') && !tok.ends_with('-'));
                prop_assert!(tok.chars().all(|c| c.is_alphanumeric() || c == '-'));
            }
        }

        #[test]
        fn merge_plurals_is_idempotent(words in proptest::collection::vec(
            proptest::sample::select(vec![
                "cat", "cats", "catss", "class", "classes", "bus", "buses",
                "graph", "graphs", "system", "systems", "its", "s", "ss",
            ]),
            0..20,
        )) {
            let stream = stream_of(&words);
            let once = merge_plurals(&stream);
            let twice = merge_plurals(&once);
            prop_assert_eq!(once, twice);
        }
    }

    #[test]
    fn stopword_removal_filters_and_keeps_positions() {
        let config = PreprocessConfig {
            stopwords: ["the", "is"].iter().map(|s| s.to_string()).collect(),
            ..PreprocessConfig::default()
        };
        let s = remove_stopwords(&stream_of(&["the", "graph", "is", "large"]), &config);
        assert_eq!(s.tokens(), ["graph", "large"]);
        assert_eq!(s.positions, vec![1, 3]);
    }

    #[test]
    fn stopword_removal_can_empty_a_stream() {
        let config = PreprocessConfig {
            stopwords: ["the", "is"].iter().map(|s| s.to_string()).collect(),
            ..PreprocessConfig::default()
        };
        let s = remove_stopwords(&stream_of(&["the", "is", "the"]), &config);
        assert!(s.is_empty());
    }

    #[test]
    fn plural_merges_when_both_forms_occur() {
        let s = merge_plurals(&stream_of(&["graph", "graphs", "graphs"]));
        assert_eq!(s.tokens(), ["graph", "graph", "graph"]);
    }

    #[test]
    fn plural_without_singular_is_left_alone() {
        let s = merge_plurals(&stream_of(&["systems"]));
        assert_eq!(s.tokens(), ["systems"]);
    }

    #[test]
    fn es_suffix_merges() {
        let s = merge_plurals(&stream_of(&["class", "classes"]));
        assert_eq!(s.tokens(), ["class", "class"]);
    }

    #[test]
    fn plural_chain_resolves_in_one_pass() {
        let s = merge_plurals(&stream_of(&["cat", "cats", "catss"]));
        assert_eq!(s.tokens(), ["cat", "cat", "cat"]);
    }

    #[test]
    fn plural_pair_and_solo_cases() {
        // Enumerates the pair/solo combinations the rule must honor.
        let cases: &[(&[&str], &[&str])] = &[
            (&["dog", "dogs"], &["dog", "dog"]),
            (&["dogs"], &["dogs"]),
            (&["dog"], &["dog"]),
            (&["box", "boxes"], &["box", "box"]),
            (&["boxes"], &["boxes"]),
            (&["its"], &["its"]),
        ];
        for (input, want) in cases {
            let got = merge_plurals(&stream_of(input));
            assert_eq!(got.tokens(), *want, "input {input:?}");
        }
    }

    #[test]
    fn extraction_keeps_only_frequent_words() {
        let config = PreprocessConfig::default();
        let t = extract_transaction(
            &doc("graph theory, graph coloring; theory wins once."),
            &config,
            ExtractionMode::Classification,
        )
        .unwrap();
        assert_eq!(t.words, ["graph", "theory"]);
        assert_eq!(t.counts["graph"], 2);
        assert_eq!(t.counts["theory"], 2);
        for count in t.counts.values() {
            assert!(*count >= 2);
        }
    }

    #[test]
    fn extraction_counts_merged_plurals_together() {
        let config = PreprocessConfig::default();
        let t = extract_transaction(
            &doc("one graph, many graphs."),
            &config,
            ExtractionMode::Classification,
        )
        .unwrap();
        assert_eq!(t.words, ["graph"]);
        assert_eq!(t.counts["graph"], 2);
    }

    #[test]
    fn stopword_only_document_is_empty() {
        let config = PreprocessConfig::default();
        let err = extract_transaction(
            &doc("the the of of is is"),
            &config,
            ExtractionMode::Classification,
        )
        .unwrap_err();
        assert!(matches!(err, ExtractError::EmptyDocument { .. }));
    }

    #[test]
    fn training_discards_documents_below_k() {
        let config = PreprocessConfig {
            transaction_size_k: 3,
            ..PreprocessConfig::default()
        };
        let err = extract_transaction(
            &doc("alpha alpha beta beta gamma"),
            &config,
            ExtractionMode::Training,
        )
        .unwrap_err();
        assert_eq!(
            err,
            ExtractError::Discarded {
                doc_id: "test".to_string(),
                found: 2,
                required: 3,
            }
        );
    }

    #[test]
    fn training_selects_by_frequency_then_first_position() {
        let config = PreprocessConfig {
            transaction_size_k: 2,
            stopwords: Default::default(),
            ..PreprocessConfig::default()
        };
        // zeta is most frequent; alpha and beta tie at 2 but alpha occurs
        // first, so the pair is {zeta, alpha}.
        let t = extract_transaction(
            &doc("alpha zeta beta zeta alpha beta zeta"),
            &config,
            ExtractionMode::Training,
        )
        .unwrap();
        assert_eq!(t.words, ["alpha", "zeta"]);
    }

    #[test]
    fn training_transaction_has_exactly_k_words() {
        let config = PreprocessConfig {
            transaction_size_k: 2,
            stopwords: Default::default(),
            ..PreprocessConfig::default()
        };
        let t = extract_transaction(&doc("a a b b c c d d"), &config, ExtractionMode::Training)
            .unwrap();
        assert_eq!(t.words.len(), 2);
        let mut sorted = t.words.clone();
        sorted.sort();
        assert_eq!(t.words, sorted);
    }

    #[test]
    fn feedback_abstract_frequent_words() {
        let text = include_str!("../tests/fixtures/abstract_feedback.txt");
        let config = PreprocessConfig::default();
        let t = extract_transaction(&doc(text), &config, ExtractionMode::Classification).unwrap();
        assert_eq!(
            t.words,
            [
                "affine",
                "algorithm",
                "based",
                "conditions",
                "dynamic",
                "feedback",
                "nonlinear",
                "problem",
                "regularization",
                "singular",
                "system",
                "using",
            ]
        );
        // 12 frequent words is below the default training size of 13, so the
        // same document is discarded as training data.
        let err = extract_transaction(&doc(text), &config, ExtractionMode::Training).unwrap_err();
        assert!(matches!(err, ExtractError::Discarded { found: 12, .. }));
    }

    #[test]
    fn spanner_abstract_frequent_words() {
        let text = include_str!("../tests/fixtures/abstract_spanner.txt");
        let config = PreprocessConfig::default();
        let t = extract_transaction(&doc(text), &config, ExtractionMode::Classification).unwrap();
        assert_eq!(
            t.words,
            [
                "algorithm",
                "approximate",
                "distance",
                "graph",
                "log",
                "processors",
                "requires",
                "t-spanner",
                "time",
                "unweighted",
                "vertices",
            ]
        );
    }

    #[test]
    fn extraction_is_order_insensitive_for_classification() {
        let config = PreprocessConfig::default();
        let a = extract_transaction(
            &doc("graph theory. graph theory. vector once."),
            &config,
            ExtractionMode::Classification,
        )
        .unwrap();
        let b = extract_transaction(
            &doc("vector once. theory graph. theory graph."),
            &config,
            ExtractionMode::Classification,
        )
        .unwrap();
        assert_eq!(a.words, b.words);
        assert_eq!(a.counts, b.counts);
    }

    #[test]
    fn default_stopword_list_loads() {
        let words = default_stopwords();
        assert!(words.contains("the"));
        assert!(words.contains("between"));
        // Words the pipeline must keep.
        for kept in ["using", "based", "system", "log", "time"] {
            assert!(!words.contains(kept), "{kept} must not be a stop word");
        }
    }

    #[test]
    fn stopword_files_skip_comments_and_lowercase() {
        let parsed = parse_stopwords("# comment\nThe\n\n  and  \n#more\nOf\n");
        assert_eq!(parsed.len(), 3);
        for word in ["the", "and", "of"] {
            assert!(parsed.contains(word));
        }
    }

    #[test]
    fn stopword_file_loads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stop.txt");
        std::fs::write(&path, "# list\nAlpha\nbeta\n").unwrap();
        let words = load_stopwords(&path).unwrap();
        assert!(words.contains("alpha"));
        assert!(words.contains("beta"));
        assert!(!words.contains("# list"));
    }
}
