//! Text categorization over associated word sets.
//!
//! Labeled documents are cleaned down to their frequent words, each document
//! becomes a transaction, and the Apriori algorithm mines the frequent word
//! sets per category. Those word sets are the features of an m-estimate
//! Naive Bayes model; new documents are classified by matching their
//! frequent words against the mined sets and taking the argmax over
//! category scores.
//!
//! Modules follow the pipeline:
//!
//! - [`preprocess`] — tokenization, stop words, plural merging, transaction
//!   extraction
//! - [`apriori`] — level-wise frequent itemset mining and rule generation
//! - [`model`] — per-category priors and smoothed conditionals
//! - [`classify`] — word-set matching and scoring
//! - [`store`] — corpus loading and text-format persistence
//! - [`corpus_gen`] — seeded synthetic corpus generator for experiments

pub mod apriori;
pub mod classify;
pub mod corpus_gen;
pub mod model;
pub mod preprocess;
pub mod store;
