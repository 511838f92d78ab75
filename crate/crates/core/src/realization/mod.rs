//! Bridge to the external parser/generator, candidate filtering and
//! surface selection.

mod fixture;
mod process;
pub mod protocol;
mod scorer;
mod surface;

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use thiserror::Error;

use crate::mrs::Mrs;

pub use fixture::FixtureStore;
pub use process::ProcessChannel;
pub use protocol::{Reply, Request};
pub use scorer::{
    default_scorer, tokenize, AdapterScorer, ScoreError, Scorer, TableError, UnigramScorer, EMPTY_SURFACE_SCORE,
};
pub use surface::{filter_candidates, is_passive, select_surface, Candidate, ScorerFailure};

pub const DEFAULT_TIMEOUT_MS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transport {
    /// Shell command line of a backend speaking the line protocol.
    Subprocess(String),
    /// Recorded transcript file.
    Fixture(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdapterEndpoint {
    pub transport: Transport,
    pub timeout_ms: u64,
}

impl AdapterEndpoint {
    pub fn new(transport: Transport, timeout_ms: u64) -> Result<Self, AdapterError> {
        if timeout_ms == 0 {
            return Err(AdapterError::InvalidRequest("timeout must be positive".into()));
        }
        Ok(AdapterEndpoint { transport, timeout_ms })
    }

    pub fn subprocess(command: impl Into<String>) -> Self {
        AdapterEndpoint {
            transport: Transport::Subprocess(command.into()),
            timeout_ms: DEFAULT_TIMEOUT_MS,
        }
    }

    pub fn fixture(path: impl Into<PathBuf>) -> Self {
        AdapterEndpoint {
            transport: Transport::Fixture(path.into()),
            timeout_ms: DEFAULT_TIMEOUT_MS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdapterError {
    #[error("adapter unavailable: {0}")]
    Unavailable(String),
    #[error("adapter protocol error: {0}")]
    Protocol(String),
    #[error("adapter timed out after {ms} ms")]
    Timeout { ms: u64 },
    #[error("backend reported an error: {0}")]
    Remote(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

enum Link {
    Fixture(Arc<FixtureStore>),
    Process(ProcessChannel),
}

/// One connection to a backend. Requests are strictly sequential.
pub struct Adapter {
    link: Link,
}

impl Adapter {
    pub fn connect(endpoint: &AdapterEndpoint) -> Result<Adapter, AdapterError> {
        Connector::new(endpoint.clone())?.connect()
    }

    pub fn from_fixtures(store: Arc<FixtureStore>) -> Adapter {
        Adapter {
            link: Link::Fixture(store),
        }
    }

    /// Raw exchange: the reply lines, `END` included, exactly as received.
    pub fn exchange(&mut self, request: &Request) -> Result<Vec<String>, AdapterError> {
        match &mut self.link {
            Link::Fixture(store) => Ok(store.respond(request)),
            Link::Process(channel) => channel.exchange(&request.encode()),
        }
    }

    fn request(&mut self, request: &Request) -> Result<Reply, AdapterError> {
        let mut lines = self.exchange(request)?;
        if lines.pop().as_deref() != Some(protocol::END) {
            return Err(AdapterError::Protocol("reply not terminated by END".into()));
        }
        protocol::decode_reply(request, &lines)
    }

    /// Parses best-first; an empty result means the grammar found no analysis.
    pub fn parse(&mut self, sentence: &str) -> Result<Vec<Mrs>, AdapterError> {
        match self.request(&Request::parse(sentence)?)? {
            Reply::Parses(p) => Ok(p),
            other => Err(AdapterError::Protocol(format!("unexpected reply {other:?}"))),
        }
    }

    /// Realizes `m`; an empty result means the grammar rejects it.
    pub fn generate(&mut self, m: &Mrs) -> Result<Vec<String>, AdapterError> {
        m.validate().map_err(|e| AdapterError::InvalidRequest(e.to_string()))?;
        match self.request(&Request::generate(m))? {
            Reply::Sentences(s) => Ok(s),
            other => Err(AdapterError::Protocol(format!("unexpected reply {other:?}"))),
        }
    }

    pub fn score(&mut self, sentence: &str) -> Result<f64, AdapterError> {
        match self.request(&Request::score(sentence)?)? {
            Reply::Value(v) => Ok(v),
            other => Err(AdapterError::Protocol(format!("unexpected reply {other:?}"))),
        }
    }
}

/// Opens connections to one endpoint; fixture files are read once and
/// shared by every connection.
#[derive(Clone)]
pub struct Connector {
    endpoint: AdapterEndpoint,
    store: Option<Arc<FixtureStore>>,
}

impl Connector {
    pub fn new(endpoint: AdapterEndpoint) -> Result<Connector, AdapterError> {
        let store = match &endpoint.transport {
            Transport::Fixture(path) => Some(Arc::new(FixtureStore::load(path)?)),
            Transport::Subprocess(_) => None,
        };
        Ok(Connector { endpoint, store })
    }

    pub fn endpoint(&self) -> &AdapterEndpoint {
        &self.endpoint
    }

    pub fn connect(&self) -> Result<Adapter, AdapterError> {
        match (&self.endpoint.transport, &self.store) {
            (Transport::Fixture(_), Some(store)) => Ok(Adapter::from_fixtures(Arc::clone(store))),
            (Transport::Subprocess(command), _) => Ok(Adapter {
                link: Link::Process(ProcessChannel::spawn(
                    command,
                    Duration::from_millis(self.endpoint.timeout_ms),
                )?),
            }),
            (Transport::Fixture(_), None) => unreachable!("store loaded in Connector::new"),
        }
    }
}

/// Free-function form of [`Adapter::parse`] over a fresh connection.
pub fn adapter_parse(endpoint: &AdapterEndpoint, sentence: &str) -> Result<Vec<Mrs>, AdapterError> {
    Adapter::connect(endpoint)?.parse(sentence)
}

/// Free-function form of [`Adapter::generate`] over a fresh connection.
pub fn adapter_generate(endpoint: &AdapterEndpoint, m: &Mrs) -> Result<Vec<String>, AdapterError> {
    Adapter::connect(endpoint)?.generate(m)
}
