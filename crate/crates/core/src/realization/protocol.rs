//! Line protocol spoken with the parser/generator backend.
//!
//! ```text
//! request: PARSE<TAB>sentence | GENERATE<TAB>simple-mrs | SCORE<TAB>sentence
//! reply:   MRS<TAB>..., SENT<TAB>... or one VAL<TAB>decimal, then END
//! error:   ERR<TAB>message, then END
//! ```

use crate::mrs::{parse_simple_mrs, Mrs};

use super::AdapterError;

pub const END: &str = "END";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Request {
    Parse(String),
    Generate(String),
    Score(String),
}

impl Request {
    pub fn parse(sentence: &str) -> Result<Request, AdapterError> {
        check_payload(sentence)?;
        Ok(Request::Parse(sentence.to_string()))
    }

    pub fn generate(m: &Mrs) -> Request {
        Request::Generate(m.to_string())
    }

    pub fn score(sentence: &str) -> Result<Request, AdapterError> {
        if sentence.contains(['\n', '\r']) {
            return Err(AdapterError::InvalidRequest("sentence contains a line break".into()));
        }
        Ok(Request::Score(sentence.to_string()))
    }

    pub fn command(&self) -> &'static str {
        match self {
            Request::Parse(_) => "PARSE",
            Request::Generate(_) => "GENERATE",
            Request::Score(_) => "SCORE",
        }
    }

    pub fn payload(&self) -> &str {
        match self {
            Request::Parse(s) | Request::Generate(s) | Request::Score(s) => s,
        }
    }

    /// The request line without its trailing newline.
    pub fn encode(&self) -> String {
        format!("{}\t{}", self.command(), self.payload())
    }

    pub fn decode(line: &str) -> Option<Request> {
        let (command, payload) = line.split_once('\t')?;
        let payload = payload.to_string();
        match command {
            "PARSE" => Some(Request::Parse(payload)),
            "GENERATE" => Some(Request::Generate(payload)),
            "SCORE" => Some(Request::Score(payload)),
            _ => None,
        }
    }
}

fn check_payload(sentence: &str) -> Result<(), AdapterError> {
    if sentence.trim().is_empty() {
        return Err(AdapterError::InvalidRequest("empty sentence".into()));
    }
    if sentence.contains(['\n', '\r']) {
        return Err(AdapterError::InvalidRequest("sentence contains a line break".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reply {
    Parses(Vec<Mrs>),
    Sentences(Vec<String>),
    Value(f64),
}

fn protocol(msg: impl Into<String>) -> AdapterError {
    AdapterError::Protocol(msg.into())
}

/// Decodes the reply lines (END excluded) for `request`. Any line outside
/// the grammar, or of the wrong kind for the request, is an error.
pub fn decode_reply(request: &Request, lines: &[String]) -> Result<Reply, AdapterError> {
    if let Some(first) = lines.first() {
        if let Some(message) = first.strip_prefix("ERR\t") {
            if lines.len() != 1 {
                return Err(protocol("ERR must be the only line before END"));
            }
            return Err(AdapterError::Remote(message.to_string()));
        }
    }
    match request {
        Request::Parse(_) => {
            let mut parses = Vec::with_capacity(lines.len());
            for line in lines {
                let text = line
                    .strip_prefix("MRS\t")
                    .ok_or_else(|| protocol(format!("expected MRS line, got {line:?}")))?;
                let m = parse_simple_mrs(text).map_err(|e| protocol(format!("unreadable MRS: {e}")))?;
                parses.push(m);
            }
            Ok(Reply::Parses(parses))
        }
        Request::Generate(_) => lines
            .iter()
            .map(|line| {
                line.strip_prefix("SENT\t")
                    .map(str::to_string)
                    .ok_or_else(|| protocol(format!("expected SENT line, got {line:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Reply::Sentences),
        Request::Score(_) => match lines {
            [line] => {
                let text = line
                    .strip_prefix("VAL\t")
                    .ok_or_else(|| protocol(format!("expected VAL line, got {line:?}")))?;
                let value: f64 = text
                    .trim()
                    .parse()
                    .map_err(|_| protocol(format!("VAL is not a decimal: {text:?}")))?;
                if !value.is_finite() {
                    return Err(protocol(format!("VAL is not finite: {text:?}")));
                }
                Ok(Reply::Value(value))
            }
            _ => Err(protocol(format!(
                "SCORE expects exactly one VAL line, got {}",
                lines.len()
            ))),
        },
    }
}
