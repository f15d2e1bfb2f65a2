//! Seeded synthetic corpus generator. The original abstracts behind the
//! trained models are not redistributable, so experiments run against a
//! reproducible stand-in: three themed categories whose documents carry
//! enough repeated topic words to survive frequent-word extraction.

use std::fs;
use std::io;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::preprocess::RawDocument;

pub const CATEGORIES: [&str; 3] = ["cs", "ee", "me"];

const CS_POOL: &[&str] = &[
    "algorithm",
    "compiler",
    "kernel",
    "thread",
    "cache",
    "memory",
    "processor",
    "network",
    "protocol",
    "packet",
    "routing",
    "scheduler",
    "queue",
    "stack",
    "parser",
    "token",
    "binary",
    "software",
    "hardware",
    "latency",
    "bandwidth",
    "cluster",
    "database",
    "query",
    "index",
    "graph",
    "vertex",
    "matrix",
    "pointer",
    "buffer",
];

const EE_POOL: &[&str] = &[
    "voltage",
    "current",
    "circuit",
    "resistor",
    "capacitor",
    "inductor",
    "transformer",
    "signal",
    "frequency",
    "amplifier",
    "oscillator",
    "transistor",
    "diode",
    "relay",
    "impedance",
    "waveform",
    "generator",
    "power",
    "load",
    "feeder",
    "grid",
    "phase",
    "harmonic",
    "insulation",
    "breaker",
    "winding",
    "rotor",
    "stator",
    "flux",
    "busbar",
];

const ME_POOL: &[&str] = &[
    "torque",
    "piston",
    "turbine",
    "bearing",
    "gear",
    "shaft",
    "valve",
    "pump",
    "thermal",
    "stress",
    "strain",
    "fatigue",
    "friction",
    "lubricant",
    "coolant",
    "cylinder",
    "combustion",
    "exhaust",
    "chassis",
    "welding",
    "casting",
    "alloy",
    "vibration",
    "damper",
    "nozzle",
    "compressor",
    "crankshaft",
    "flywheel",
    "gasket",
    "clutch",
];

const SHARED_POOL: &[&str] = &[
    "model",
    "design",
    "result",
    "method",
    "analysis",
    "test",
    "experiment",
    "parameter",
    "measurement",
    "simulation",
    "control",
    "performance",
    "efficiency",
    "temperature",
    "pressure",
];

const FILLERS: &[&str] = &[
    "the", "of", "a", "is", "in", "for", "with", "on", "and", "to", "this", "that", "are", "by",
];

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub total_docs: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            total_docs: 60,
            seed: 13,
        }
    }
}

pub fn theme_pool(category: &str) -> &'static [&'static str] {
    match category {
        "cs" => CS_POOL,
        "ee" => EE_POOL,
        "me" => ME_POOL,
        other => panic!("unknown category {other}"),
    }
}

/// Generate `total_docs` documents, cycling through the three categories.
/// Identical configs produce identical corpora.
pub fn generate(config: &GenConfig) -> Vec<RawDocument> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.total_docs)
        .map(|i| {
            let category = CATEGORIES[i % CATEGORIES.len()];
            let text = generate_text(category, &mut rng);
            RawDocument {
                id: format!("{category}/doc_{i:03}.txt"),
                category: Some(category.to_string()),
                text,
            }
        })
        .collect()
}

fn generate_text(category: &str, rng: &mut ChaCha8Rng) -> String {
    let theme = theme_pool(category);

    // 14..=17 distinct topic words, each repeated 2..=4 times, keeps every
    // document above the default 13-word transaction size.
    let n_topics = rng.gen_range(14..=17);
    let n_theme = n_topics - 3;
    let mut topics: Vec<&str> = theme
        .choose_multiple(rng, n_theme)
        .copied()
        .chain(SHARED_POOL.choose_multiple(rng, 3).copied())
        .collect();
    topics.sort();
    topics.dedup();

    let mut bag: Vec<&str> = Vec::new();
    for &word in &topics {
        let reps = rng.gen_range(2..=4);
        for _ in 0..reps {
            bag.push(word);
        }
    }
    // A few one-off words for texture; frequency 1 drops them later.
    let singles: Vec<&str> = theme
        .iter()
        .filter(|w| !topics.contains(w))
        .copied()
        .collect();
    for &word in singles.choose_multiple(rng, 3.min(singles.len())) {
        bag.push(word);
    }
    bag.shuffle(rng);

    let mut sentences = Vec::new();
    let mut sentence: Vec<&str> = Vec::new();
    let target = rng.gen_range(7..=11);
    let mut limit = target;
    for word in bag {
        if rng.gen_bool(0.35) {
            sentence.push(FILLERS[rng.gen_range(0..FILLERS.len())]);
        }
        sentence.push(word);
        if sentence.len() >= limit {
            sentences.push(sentence.join(" "));
            sentence = Vec::new();
            limit = rng.gen_range(7..=11);
        }
    }
    if !sentence.is_empty() {
        sentences.push(sentence.join(" "));
    }
    let mut text = sentences.join(". ");
    text.push('.');
    text
}

/// Write the generated corpus as `root/<category>/<doc>.txt`.
pub fn write_corpus(config: &GenConfig, root: &Path) -> io::Result<usize> {
    let docs = generate(config);
    for category in CATEGORIES {
        fs::create_dir_all(root.join(category))?;
    }
    for doc in &docs {
        fs::write(root.join(&doc.id), &doc.text)?;
    }
    Ok(docs.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::{
        default_stopwords, extract_transaction, ExtractionMode, PreprocessConfig,
    };

    #[test]
    fn generation_is_deterministic() {
        let config = GenConfig::default();
        assert_eq!(generate(&config), generate(&config));
        let other = GenConfig {
            seed: 14,
            ..GenConfig::default()
        };
        assert_ne!(generate(&config), generate(&other));
    }

    #[test]
    fn default_corpus_is_sixty_docs_over_three_categories() {
        let docs = generate(&GenConfig::default());
        assert_eq!(docs.len(), 60);
        for category in CATEGORIES {
            let count = docs
                .iter()
                .filter(|d| d.category.as_deref() == Some(category))
                .count();
            assert_eq!(count, 20);
        }
    }

    #[test]
    fn documents_survive_training_extraction() {
        let config = PreprocessConfig::default();
        let docs = generate(&GenConfig::default());
        let mut kept = 0;
        for doc in &docs {
            if extract_transaction(doc, &config, ExtractionMode::Training).is_ok() {
                kept += 1;
            }
        }
        // The generator aims every document above the 13-word bar.
        assert!(
            kept >= docs.len() * 9 / 10,
            "only {kept} of {} kept",
            docs.len()
        );
    }

    #[test]
    fn pool_words_avoid_stop_words_and_plural_collisions() {
        let stopwords = default_stopwords();
        let mut all: Vec<&str> = Vec::new();
        all.extend(CS_POOL);
        all.extend(EE_POOL);
        all.extend(ME_POOL);
        all.extend(SHARED_POOL);
        for word in &all {
            assert!(!stopwords.contains(*word), "{word} is a stop word");
        }
        for a in &all {
            for b in &all {
                assert!(
                    format!("{a}s") != **b && format!("{a}es") != **b,
                    "{a}/{b} would merge as plurals"
                );
            }
        }
    }

    #[test]
    fn corpus_writes_to_disk_in_layout() {
        let dir = tempfile::tempdir().unwrap();
        let written = write_corpus(&GenConfig::default(), dir.path()).unwrap();
        assert_eq!(written, 60);
        assert!(dir.path().join("cs/doc_000.txt").is_file());
        assert!(dir.path().join("ee/doc_001.txt").is_file());
        assert!(dir.path().join("me/doc_002.txt").is_file());
    }
}
