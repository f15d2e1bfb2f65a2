//! Level-wise frequent itemset mining (join + prune) and association rule
//! generation over word transactions.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::preprocess::Transaction;

/// A sorted, duplicate-free set of items with its support count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Itemset {
    pub items: Vec<String>,
    pub support_count: usize,
}

impl Itemset {
    /// Build an itemset from arbitrary items; sorts and deduplicates.
    pub fn new<I, S>(items: I, support_count: usize) -> Itemset
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut items: Vec<String> = items.into_iter().map(Into::into).collect();
        items.sort();
        items.dedup();
        Itemset {
            items,
            support_count,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// True when every item occurs in `words` (both sides sorted).
    pub fn contained_in(&self, words: &[String]) -> bool {
        contains_sorted(words, &self.items)
    }

    pub fn label(&self) -> String {
        self.items.join(",")
    }
}

/// Merge-walk containment test; both slices must be sorted.
pub(crate) fn contains_sorted(haystack: &[String], needles: &[String]) -> bool {
    let mut hay = haystack.iter();
    'next_needle: for needle in needles {
        for item in hay.by_ref() {
            match item.as_str().cmp(needle.as_str()) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'next_needle,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// The transaction database handed to the miner.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransactionDB {
    transactions: Vec<Transaction>,
}

impl TransactionDB {
    pub fn new(transactions: Vec<Transaction>) -> TransactionDB {
        TransactionDB { transactions }
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transaction> {
        self.transactions.iter()
    }
}

/// Everything mining produced: the frequent levels L1..Lmax, the maximal
/// frequent itemsets, and the threshold that was applied.
#[derive(Debug, Clone, PartialEq)]
pub struct MiningResult {
    /// `levels[k-1]` holds the frequent k-itemsets, lexicographically sorted.
    /// Empty levels are not recorded.
    pub levels: Vec<Vec<Itemset>>,
    /// Frequent itemsets with no frequent proper superset.
    pub maximal: Vec<Itemset>,
    pub min_sup: f64,
    pub support_threshold_count: usize,
}

impl MiningResult {
    /// All frequent itemsets in level order.
    pub fn all_frequent(&self) -> impl Iterator<Item = &Itemset> {
        self.levels.iter().flatten()
    }
}

/// An association rule antecedent => consequent with its support fraction
/// and confidence.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    pub support: f64,
    pub confidence: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum MiningError {
    #[error("minimum support {0} is outside (0, 1]")]
    InvalidSupport(f64),
    #[error("transaction database is empty")]
    EmptyDatabase,
}

/// Absolute support count an itemset must reach: floor(min_sup * db_size),
/// never below 2. An itemset occurring in a single transaction carries no
/// association information, so 2 is the floor of interest.
pub fn support_threshold(min_sup: f64, db_size: usize) -> Result<usize, MiningError> {
    if !(min_sup > 0.0 && min_sup <= 1.0) {
        return Err(MiningError::InvalidSupport(min_sup));
    }
    let raw = (min_sup * db_size as f64).floor() as usize;
    Ok(raw.max(2))
}

/// Join a frequent (k-1)-level with itself: pairs sharing their first k-2
/// items produce one k-candidate. Input must be sorted; output is sorted and
/// duplicate-free by construction.
pub fn join(prev_level: &[Itemset]) -> Vec<Itemset> {
    let mut candidates = Vec::new();
    for i in 0..prev_level.len() {
        let a = &prev_level[i].items;
        for b in prev_level[i + 1..].iter().map(|set| &set.items) {
            let prefix = a.len() - 1;
            if a[..prefix] != b[..prefix] {
                // Sorted input: once prefixes diverge, no later partner
                // shares them either.
                break;
            }
            debug_assert!(a[prefix] < b[prefix]);
            let mut items = a.clone();
            items.push(b[prefix].clone());
            candidates.push(Itemset {
                items,
                support_count: 0,
            });
        }
    }
    candidates
}

/// Drop every candidate that has a (k-1)-subset missing from the previous
/// frequent level.
pub fn prune(candidates: Vec<Itemset>, prev_level: &[Itemset]) -> Vec<Itemset> {
    let prev: HashSet<&[String]> = prev_level.iter().map(|s| s.items.as_slice()).collect();
    candidates
        .into_iter()
        .filter(|candidate| {
            let items = &candidate.items;
            (0..items.len()).all(|skip| {
                let subset: Vec<String> = items
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, item)| item.clone())
                    .collect();
                prev.contains(subset.as_slice())
            })
        })
        .collect()
}

/// Scan the database once and fill in each candidate's support count.
pub fn count_support(candidates: &[Itemset], db: &TransactionDB) -> Vec<Itemset> {
    candidates
        .iter()
        .map(|candidate| {
            let count = db
                .iter()
                .filter(|t| candidate.contained_in(&t.words))
                .count();
            Itemset {
                items: candidate.items.clone(),
                support_count: count,
            }
        })
        .collect()
}

/// Mine all frequent itemsets level by level until a level comes up empty.
pub fn mine(db: &TransactionDB, min_sup: f64) -> Result<MiningResult, MiningError> {
    if db.is_empty() {
        return Err(MiningError::EmptyDatabase);
    }
    let threshold = support_threshold(min_sup, db.len())?;

    let mut item_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for transaction in db.iter() {
        for word in &transaction.words {
            *item_counts.entry(word).or_insert(0) += 1;
        }
    }
    let level_one: Vec<Itemset> = item_counts
        .into_iter()
        .filter(|&(_, count)| count >= threshold)
        .map(|(item, count)| Itemset {
            items: vec![item.to_string()],
            support_count: count,
        })
        .collect();

    let mut levels = Vec::new();
    if !level_one.is_empty() {
        levels.push(level_one);
        loop {
            let prev = levels.last().unwrap();
            let candidates = prune(join(prev), prev);
            let next: Vec<Itemset> = count_support(&candidates, db)
                .into_iter()
                .filter(|set| set.support_count >= threshold)
                .collect();
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
    }

    let maximal = compute_maximal(&levels);
    Ok(MiningResult {
        levels,
        maximal,
        min_sup,
        support_threshold_count: threshold,
    })
}

/// A frequent itemset is maximal when the next level holds no superset of
/// it. Checking one level up suffices: any larger frequent superset implies
/// a frequent superset with exactly one more item.
fn compute_maximal(levels: &[Vec<Itemset>]) -> Vec<Itemset> {
    let mut maximal = Vec::new();
    for (idx, level) in levels.iter().enumerate() {
        match levels.get(idx + 1) {
            None => maximal.extend(level.iter().cloned()),
            Some(next) => {
                for set in level {
                    if !next
                        .iter()
                        .any(|sup| contains_sorted(&sup.items, &set.items))
                    {
                        maximal.push(set.clone());
                    }
                }
            }
        }
    }
    maximal
}

/// Emit every rule A => F\A with confidence >= `min_conf`, for each frequent
/// itemset F of two or more items and each nonempty proper subset A.
pub fn generate_rules(result: &MiningResult, min_conf: f64, db: &TransactionDB) -> Vec<Rule> {
    let support: HashMap<&[String], usize> = result
        .all_frequent()
        .map(|set| (set.items.as_slice(), set.support_count))
        .collect();
    let db_size = db.len();

    let mut rules = Vec::new();
    for set in result.all_frequent().filter(|set| set.len() >= 2) {
        let n = set.len();
        for mask in 1usize..(1 << n) - 1 {
            let mut antecedent = Vec::new();
            let mut consequent = Vec::new();
            for (i, item) in set.items.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    antecedent.push(item.clone());
                } else {
                    consequent.push(item.clone());
                }
            }
            // Subsets of a frequent itemset are frequent, so both lookups hit.
            let antecedent_count = support[antecedent.as_slice()];
            let confidence = set.support_count as f64 / antecedent_count as f64;
            if confidence >= min_conf {
                let consequent_count = support[consequent.as_slice()];
                rules.push(Rule {
                    antecedent: Itemset {
                        items: antecedent,
                        support_count: antecedent_count,
                    },
                    consequent: Itemset {
                        items: consequent,
                        support_count: consequent_count,
                    },
                    support: set.support_count as f64 / db_size as f64,
                    confidence,
                });
            }
        }
    }
    rules.sort_by(|a, b| {
        (&a.antecedent.items, &a.consequent.items).cmp(&(&b.antecedent.items, &b.consequent.items))
    });
    rules
}
