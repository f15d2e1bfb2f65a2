//! Shared fixtures for the integration and acceptance suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use assoc_nb::apriori::{Itemset, TransactionDB};
use assoc_nb::model::{CategoryStats, Model, TrainParams};
use assoc_nb::preprocess::Transaction;

pub const CS: &str = "computer-science";
pub const EE: &str = "electrical-electronics";
pub const ME: &str = "mechanical-engineering";

/// Named word sets with their occurrence counts, as published for the
/// three-category reference setup: 43 + 47 + 17 attributed sets over a
/// 107-set vocabulary. The sets not named in the published tables are
/// padded with never-matching filler pairs so the totals and therefore
/// every prior and conditional denominator come out exactly right.
const CS_NAMED: &[(&str, u32)] = &[
    ("algorithm,graph", 5),
    ("processor,system,technology", 4),
    ("design,system", 4),
    ("message-passing,system", 4),
    ("message-passing,multicast,system", 3),
    ("approach,destination,multicast", 3),
    ("algorithm,graph,problem", 3),
    ("communication,message,system", 3),
    ("message-passing,multidestination,system", 3),
    ("routing,virtual", 3),
    ("design,framework,pinout,processor,system,technology", 2),
    ("approach,destination,message-passing,multicast,system", 2),
    ("approach,broadcast,destination,message,multicast", 2),
    (
        "communication,message,message-passing,multidestination,system",
        2,
    ),
    ("algorithm,irregular,multicast,system", 2),
    ("algorithm,message-passing,multicast,system", 2),
    ("algorithm,message,multicast,network", 2),
    ("algorithm,conditions", 2),
    ("based,multicast,multidestination,system", 2),
    ("algorithm,bound,time", 2),
];

const EE_NAMED: &[(&str, u32)] = &[
    ("model,oscillation,power,system", 3),
    ("distribution,feeder,load,system", 3),
    ("model,result,system", 3),
    ("control,power,system", 3),
    ("power,stability,system", 3),
    ("customer,feeder", 3),
    ("device,power", 3),
    ("block,power", 3),
    ("power,voltage", 3),
    ("generator,test", 3),
    ("current,signal", 3),
    (
        "control,device,model,oscillation,power,stability,strategy,system",
        2,
    ),
    (
        "change,customer,distribution,feeder,load,system,temperature",
        2,
    ),
    ("distribution,feeder,load,power,system", 2),
    ("damping,model,oscillation,power,system", 2),
    ("effect,load,power,system", 2),
    ("circuit,generator,sequential,test", 2),
    ("dynamic,interaction,system", 2),
    ("parameter,system,using", 2),
];

const ME_NAMED: &[(&str, u32)] = &[
    ("experiment,instability", 3),
    ("shear,stress", 3),
    ("experiment,rate,shear,stress", 2),
];

const CS_FILLER: &[&str] = &[
    "allocator",
    "heap",
    "arena",
    "sorting",
    "compiler",
    "register",
    "pipeline",
    "fetch",
    "thread",
    "mutex",
    "socket",
    "handshake",
    "kernel",
    "module",
    "parser",
    "grammar",
    "encryption",
    "cipher",
    "checksum",
    "hashing",
    "compression",
    "codec",
    "scheduler",
    "interrupt",
    "hypervisor",
    "sandbox",
    "bytecode",
    "interpreter",
    "linker",
    "loader",
    "firmware",
    "bootloader",
    "debugger",
    "tracer",
    "profiler",
    "benchmark",
    "replication",
    "quorum",
    "consensus",
    "ledger",
    "stream",
    "batch",
    "shard",
    "partition",
    "cursor",
    "checkpoint",
];

const EE_FILLER: &[&str] = &[
    "armature",
    "brush",
    "commutator",
    "slip",
    "inverter",
    "rectifier",
    "thyristor",
    "snubber",
    "filter",
    "choke",
    "varistor",
    "surge",
    "battery",
    "electrolyte",
    "anode",
    "cathode",
    "dielectric",
    "permittivity",
    "conductor",
    "resistivity",
    "insulator",
    "grounding",
    "lightning",
    "arrester",
    "substation",
    "switchgear",
    "busway",
    "raceway",
    "conduit",
    "cabling",
    "magnet",
    "solenoid",
    "actuator",
    "servo",
    "encoder",
    "tachometer",
    "sensor",
    "thermistor",
    "photodiode",
    "optocoupler",
    "antenna",
    "waveguide",
    "modulator",
    "demodulator",
    "carrier",
    "sideband",
    "attenuator",
    "decibel",
    "oscillograph",
    "galvanometer",
    "wattmeter",
    "voltmeter",
    "ammeter",
    "ohmmeter",
    "shunt",
    "reactor",
];

const ME_FILLER: &[&str] = &[
    "camshaft",
    "tappet",
    "flange",
    "coupling",
    "sprocket",
    "chain",
    "pulley",
    "belt",
    "spindle",
    "chuck",
    "lathe",
    "milling",
    "grinding",
    "abrasive",
    "quenching",
    "annealing",
    "tempering",
    "forging",
    "extrusion",
    "rolling",
    "drawing",
    "stamping",
    "riveting",
    "brazing",
    "soldering",
    "machining",
    "boring",
    "honing",
];

pub fn items(label: &str) -> Vec<String> {
    label.split(',').map(str::to_string).collect()
}

fn category_sets(named: &[(&str, u32)], filler: &[&str], total: usize) -> Vec<(Vec<String>, u32)> {
    let mut sets: Vec<(Vec<String>, u32)> = named
        .iter()
        .map(|&(label, n_k)| {
            let mut words = items(label);
            words.sort();
            (words, n_k)
        })
        .collect();
    let missing = total - sets.len();
    assert!(
        filler.len() >= missing * 2,
        "need {} filler words, have {}",
        missing * 2,
        filler.len()
    );
    for pair in filler.chunks(2).take(missing) {
        let mut words = vec![pair[0].to_string(), pair[1].to_string()];
        words.sort();
        sets.push((words, 2));
    }
    sets
}

type CategoryFixture = (&'static str, usize, usize, Vec<(Vec<String>, u32)>);

/// The hand-built three-category model used by the worked classification
/// examples: 43 + 47 + 17 = 107 word sets, document counts 47/48/20.
pub fn reference_model() -> Model {
    let per_category: [CategoryFixture; 3] = [
        (CS, 43, 47, category_sets(CS_NAMED, CS_FILLER, 43)),
        (EE, 47, 48, category_sets(EE_NAMED, EE_FILLER, 47)),
        (ME, 17, 20, category_sets(ME_NAMED, ME_FILLER, 17)),
    ];

    let mut attribution: BTreeMap<Vec<String>, String> = BTreeMap::new();
    let mut categories = Vec::new();
    for (name, expected_sets, n_docs, sets) in per_category {
        assert_eq!(sets.len(), expected_sets, "{name} set count");
        let mut occurrence = BTreeMap::new();
        for (words, n_k) in sets {
            let clash = attribution.insert(words.clone(), name.to_string());
            assert!(clash.is_none(), "duplicate itemset {words:?}");
            occurrence.insert(words, n_k);
        }
        categories.push(CategoryStats::new(name.to_string(), n_docs, occurrence));
    }
    assert_eq!(attribution.len(), 107);

    Model::from_parts(categories, attribution, TrainParams::default())
        .expect("reference model must assemble")
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn transaction(id: &str, items: &[&str]) -> Transaction {
    let mut words: Vec<String> = items.iter().map(|s| s.to_string()).collect();
    words.sort();
    words.dedup();
    Transaction {
        doc_id: id.to_string(),
        category: None,
        words,
        counts: BTreeMap::new(),
    }
}

/// Brute-force reference miner: enumerate every nonempty subset of the item
/// universe, count containment per transaction, keep sets meeting the
/// threshold. Independent of the level-wise implementation.
pub fn brute_force_frequent(db: &TransactionDB, threshold: usize) -> BTreeMap<Vec<String>, usize> {
    let universe: BTreeSet<String> = db.iter().flat_map(|t| t.words.iter().cloned()).collect();
    let universe: Vec<String> = universe.into_iter().collect();
    let mut frequent = BTreeMap::new();
    for mask in 1usize..(1 << universe.len()) {
        let subset: Vec<String> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, w)| w.clone())
            .collect();
        let count = db
            .iter()
            .filter(|t| {
                let have: BTreeSet<&String> = t.words.iter().collect();
                subset.iter().all(|w| have.contains(w))
            })
            .count();
        if count >= threshold {
            frequent.insert(subset, count);
        }
    }
    frequent
}

pub fn flatten_levels(levels: &[Vec<Itemset>]) -> BTreeMap<Vec<String>, usize> {
    levels
        .iter()
        .flatten()
        .map(|set| (set.items.clone(), set.support_count))
        .collect()
}
