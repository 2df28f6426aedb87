#![allow(dead_code)]

use kdsp::generators::{random_corpus, Generated};
use kdsp::oracle::OracleBudget;

pub fn corpus(count: usize, seed: u64, max_nodes: usize) -> Vec<Generated> {
    random_corpus(count, seed, 3, max_nodes)
}

pub fn budget() -> OracleBudget {
    OracleBudget::default()
}
