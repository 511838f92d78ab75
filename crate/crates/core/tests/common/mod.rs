#![allow(dead_code)]

use std::path::PathBuf;

use lit_core::pipeline::Realizer;
use lit_core::realization::{Adapter, AdapterEndpoint, Connector, UnigramScorer};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn connector() -> Connector {
    Connector::new(AdapterEndpoint::fixture(fixture("adapter.txt"))).expect("fixture transcript loads")
}

pub fn adapter() -> Adapter {
    connector().connect().unwrap()
}

pub fn realizer() -> Realizer {
    Realizer::new(adapter(), Box::new(UnigramScorer::bundled()))
}

/// (original, stack tokens, expected surface)
pub fn rewrite_rows() -> Vec<(String, String, String)> {
    std::fs::read_to_string(fixture("rewrites.tsv"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            (cols[0].to_string(), cols[1].to_string(), cols[2].to_string())
        })
        .collect()
}
