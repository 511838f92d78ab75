//! Recorded backend transcripts.
//!
//! A fixture file is a sequence of protocol exchanges: a request line, its
//! reply lines and `END`. Lines starting with `#` and blank lines between
//! exchanges are ignored. Sentences missing from the file parse to nothing;
//! representations missing from it generate nothing.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::mrs::{alpha_equal, parse_simple_mrs, Mrs};

use super::protocol::{decode_reply, Request, END};
use super::AdapterError;

#[derive(Debug, Default)]
pub struct FixtureStore {
    parses: HashMap<String, Vec<String>>,
    generations: Vec<(Mrs, Vec<String>)>,
    generation_keys: HashMap<String, usize>,
    scores: HashMap<String, Vec<String>>,
}

impl FixtureStore {
    pub fn load(path: &Path) -> Result<FixtureStore, AdapterError> {
        let text = fs::read_to_string(path)
            .map_err(|e| AdapterError::Unavailable(format!("cannot read fixtures {}: {e}", path.display())))?;
        FixtureStore::from_transcript(&text).map_err(|e| AdapterError::Protocol(format!("{}: {e}", path.display())))
    }

    pub fn from_transcript(text: &str) -> Result<FixtureStore, String> {
        let mut store = FixtureStore::default();
        let mut lines = text.lines().enumerate().peekable();
        while let Some((n, line)) = lines.next() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let request = Request::decode(line).ok_or_else(|| format!("line {}: expected a request line", n + 1))?;
            let mut reply = Vec::new();
            loop {
                match lines.next() {
                    Some((_, END)) => break,
                    Some((_, l)) => reply.push(l.to_string()),
                    None => return Err(format!("line {}: exchange is missing END", n + 1)),
                }
            }
            if let Err(e) = decode_reply(&request, &reply) {
                if !matches!(e, AdapterError::Remote(_)) {
                    return Err(format!("line {}: {e}", n + 1));
                }
            }
            store
                .insert(request, reply)
                .map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        Ok(store)
    }

    fn insert(&mut self, request: Request, reply: Vec<String>) -> Result<(), String> {
        match request {
            Request::Parse(sentence) => {
                if self.parses.insert(sentence.clone(), reply).is_some() {
                    return Err(format!("duplicate PARSE for {sentence:?}"));
                }
            }
            Request::Generate(text) => {
                let m = parse_simple_mrs(&text).map_err(|e| format!("GENERATE key: {e}"))?;
                let key = m.to_string();
                if self.generation_keys.contains_key(&key) {
                    return Err("duplicate GENERATE record".into());
                }
                self.generation_keys.insert(key, self.generations.len());
                self.generations.push((m, reply));
            }
            Request::Score(sentence) => {
                self.scores.insert(sentence, reply);
            }
        }
        Ok(())
    }

    /// Reply lines for `request`, terminated by `END`.
    pub fn respond(&self, request: &Request) -> Vec<String> {
        let mut reply = match request {
            Request::Parse(sentence) => self.parses.get(sentence).cloned().unwrap_or_default(),
            Request::Generate(text) => match parse_simple_mrs(text) {
                Ok(m) => self.lookup_generation(&m).cloned().unwrap_or_default(),
                Err(e) => vec![format!("ERR\tunreadable MRS: {e}")],
            },
            Request::Score(sentence) => self
                .scores
                .get(sentence)
                .cloned()
                .unwrap_or_else(|| vec![format!("ERR\tno recorded score for {sentence:?}")]),
        };
        reply.push(END.to_string());
        reply
    }

    /// Exact canonical match first, then any alpha-equivalent record.
    fn lookup_generation(&self, m: &Mrs) -> Option<&Vec<String>> {
        if let Some(&i) = self.generation_keys.get(&m.to_string()) {
            return Some(&self.generations[i].1);
        }
        self.generations
            .iter()
            .find(|(key, _)| alpha_equal(key, m))
            .map(|(_, reply)| reply)
    }

    /// Every MRS that appears in the transcript, parse replies and
    /// generation keys alike, in file order without duplicates.
    pub fn all_mrs(&self) -> Vec<Mrs> {
        let mut sentences: Vec<&String> = self.parses.keys().collect();
        sentences.sort();
        let mut out: Vec<Mrs> = Vec::new();
        let mut push = |m: Mrs| {
            if !out.contains(&m) {
                out.push(m);
            }
        };
        for s in sentences {
            for line in &self.parses[s] {
                if let Some(text) = line.strip_prefix("MRS\t") {
                    push(parse_simple_mrs(text).expect("validated at load"));
                }
            }
        }
        for (m, _) in &self.generations {
            push(m.clone());
        }
        out
    }

    pub fn sentences(&self) -> impl Iterator<Item = &str> {
        self.parses.keys().map(String::as_str)
    }
}
