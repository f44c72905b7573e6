//! Out-of-process predictors over newline-delimited JSON.
//!
//! Each request and response is one JSON object on its own line:
//!
//! ```text
//! request:  {"id": 3, "left": "assess", "right": "the",
//!            "masked_segment": ["assess", "<hole>", "the"], "hole_index": 1,
//!            "tu_source": "...", "k": 1}
//! response: {"id": 3, "candidates": [{"token": "whether", "score": 0.9}]}
//!       or  {"id": 3, "error": "reason"}
//! ```
//!
//! The subprocess transport writes requests to the child's stdin and reads
//! responses from its stdout. The HTTP transport POSTs the request lines to
//! `<url>/predict` and reads response lines from a 200 response body.
//! Responses may arrive in any order and are matched to requests by id.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Stdio};
use std::sync::mpsc::{self, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use log::warn;
use serde::{Deserialize, Serialize};

use super::{normalize_candidates, HoleQuery, Prediction, PredictionCandidate, Predictor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireRequest {
    pub id: u64,
    pub left: String,
    pub right: String,
    pub masked_segment: Vec<String>,
    pub hole_index: usize,
    pub tu_source: String,
    pub k: usize,
}

impl WireRequest {
    pub fn new(q: &HoleQuery, k: usize) -> Self {
        WireRequest {
            id: q.id,
            left: q.left.clone(),
            right: q.right.clone(),
            masked_segment: q.masked_segment.clone(),
            hole_index: q.hole_index,
            tu_source: q.tu_source.clone(),
            k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireResponse {
    Candidates {
        id: u64,
        candidates: Vec<PredictionCandidate>,
    },
    Error {
        id: u64,
        error: String,
    },
}

impl WireResponse {
    pub fn id(&self) -> u64 {
        match self {
            WireResponse::Candidates { id, .. } | WireResponse::Error { id, .. } => *id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Transport {
    Subprocess {
        command: Vec<String>,
    },
    Http {
        url: String,
        /// Environment variable holding a bearer token, if any.
        #[serde(default)]
        auth_env: Option<String>,
    },
}

fn default_name() -> String {
    "external".into()
}

fn default_timeout() -> f64 {
    30.0
}

fn default_parallelism() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub transport: Transport,
    /// Seconds a query may wait for its response.
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    /// Batches in flight at once.
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
}

impl ExternalConfig {
    pub fn subprocess(command: Vec<String>) -> Self {
        ExternalConfig {
            name: default_name(),
            transport: Transport::Subprocess { command },
            timeout_secs: default_timeout(),
            parallelism: 1,
        }
    }

    pub fn http(url: impl Into<String>) -> Self {
        ExternalConfig {
            name: default_name(),
            transport: Transport::Http {
                url: url.into(),
                auth_env: None,
            },
            timeout_secs: default_timeout(),
            parallelism: 1,
        }
    }

    fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs.max(0.001))
    }
}

/// Matches response lines to outstanding requests.
struct Collector {
    slot: HashMap<u64, usize>,
    results: Vec<Option<Result<Prediction>>>,
    answered: HashSet<u64>,
    k: usize,
}

impl Collector {
    fn new(ids: &[u64], k: usize) -> Self {
        Collector {
            slot: ids.iter().enumerate().map(|(i, &id)| (id, i)).collect(),
            results: ids.iter().map(|_| None).collect(),
            answered: HashSet::new(),
            k,
        }
    }

    fn complete(&self) -> bool {
        self.answered.len() == self.slot.len()
    }

    fn record(&mut self, id: u64, outcome: Result<Prediction>) {
        let Some(&i) = self.slot.get(&id) else {
            warn!("ignoring response for unknown id {id}");
            return;
        };
        if !self.answered.insert(id) {
            self.results[i] = Some(Err(Error::Predictor(format!("duplicate response for id {id}"))));
            return;
        }
        self.results[i] = Some(outcome);
    }

    fn accept(&mut self, line: &str) {
        let line = line.trim();
        if line.is_empty() {
            return;
        }
        match serde_json::from_str::<WireResponse>(line) {
            Ok(WireResponse::Candidates { id, candidates }) => {
                let k = self.k;
                self.record(id, normalize_candidates(candidates, k));
            }
            Ok(WireResponse::Error { id, error }) => {
                self.record(id, Err(Error::Predictor(format!("backend error: {error}"))));
            }
            Err(e) => {
                let id = serde_json::from_str::<serde_json::Value>(line)
                    .ok()
                    .and_then(|v| v.get("id").and_then(serde_json::Value::as_u64));
                match id {
                    Some(id) => self.record(id, Err(Error::Predictor(format!("malformed response: {e}")))),
                    None => warn!("ignoring unparseable response line: {line}"),
                }
            }
        }
    }

    fn finish(self, missing: &str) -> Vec<Result<Prediction>> {
        self.results
            .into_iter()
            .map(|r| r.unwrap_or_else(|| Err(Error::Predictor(missing.to_string()))))
            .collect()
    }
}

/// A predictor served by another process or an HTTP endpoint.
#[derive(Debug, Clone)]
pub struct ExternalPredictor {
    config: ExternalConfig,
}

impl ExternalPredictor {
    pub fn new(config: ExternalConfig) -> Result<Self> {
        match &config.transport {
            Transport::Subprocess { command } if command.is_empty() => {
                return Err(Error::Config("subprocess transport needs a command".into()))
            }
            Transport::Http { url, .. } if url.is_empty() => {
                return Err(Error::Config("http transport needs a url".into()))
            }
            _ => {}
        }
        if config.parallelism == 0 {
            return Err(Error::Config("parallelism must be at least 1".into()));
        }
        Ok(ExternalPredictor { config })
    }

    pub fn config(&self) -> &ExternalConfig {
        &self.config
    }

    fn payload(queries: &[HoleQuery], k: usize) -> Result<String> {
        let mut out = String::new();
        for q in queries {
            out.push_str(&serde_json::to_string(&WireRequest::new(q, k))?);
            out.push('\n');
        }
        Ok(out)
    }

    fn run_chunk(&self, queries: &[HoleQuery], k: usize) -> Vec<Result<Prediction>> {
        let payload = match Self::payload(queries, k) {
            Ok(p) => p,
            Err(e) => return fail_all(queries.len(), &e.to_string()),
        };
        let ids: Vec<u64> = queries.iter().map(|q| q.id).collect();
        let collector = Collector::new(&ids, k);
        match &self.config.transport {
            Transport::Subprocess { command } => self.run_subprocess(command, payload, collector),
            Transport::Http { url, auth_env } => self.run_http(url, auth_env.as_deref(), payload, collector),
        }
    }

    fn run_subprocess(&self, command: &[String], payload: String, mut collector: Collector) -> Vec<Result<Prediction>> {
        let n = collector.results.len();
        let mut child = match Command::new(&command[0])
            .args(&command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
        {
            Ok(c) => c,
            Err(e) => return fail_all(n, &format!("cannot start {:?}: {e}", command[0])),
        };
        let mut stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        thread::spawn(move || {
            // A backend may exit before reading everything; its missing
            // answers surface as per-query errors.
            let _ = stdin.write_all(payload.as_bytes());
        });
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });

        let deadline = Instant::now() + self.config.timeout();
        let mut timed_out = false;
        loop {
            let now = Instant::now();
            if now >= deadline {
                timed_out = !collector.complete();
                break;
            }
            // Once every id is answered, only wait briefly for stray
            // duplicates before the child exits.
            let wait = if collector.complete() {
                (deadline - now).min(Duration::from_millis(200))
            } else {
                deadline - now
            };
            match rx.recv_timeout(wait) {
                Ok(Ok(line)) => collector.accept(&line),
                Ok(Err(e)) => {
                    warn!("reading backend output: {e}");
                    break;
                }
                Err(RecvTimeoutError::Timeout) => {
                    timed_out = !collector.complete();
                    break;
                }
                Err(RecvTimeoutError::Disconnected) => break,
            }
        }
        // The I/O threads are not joined: a grandchild of the backend can
        // keep the pipes open after the kill. They exit once the pipes close
        // or the channel is gone.
        let _ = child.kill();
        let _ = child.wait();
        let missing = if timed_out {
            format!("timed out after {}s", self.config.timeout_secs)
        } else {
            "no response from backend".to_string()
        };
        collector.finish(&missing)
    }

    fn run_http(
        &self,
        url: &str,
        auth_env: Option<&str>,
        payload: String,
        mut collector: Collector,
    ) -> Vec<Result<Prediction>> {
        let n = collector.results.len();
        let endpoint = format!("{}/predict", url.trim_end_matches('/'));
        let agent = ureq::AgentBuilder::new().timeout(self.config.timeout()).build();
        let mut req = agent.post(&endpoint).set("Content-Type", "application/x-ndjson");
        if let Some(var) = auth_env {
            match std::env::var(var) {
                Ok(token) => req = req.set("Authorization", &format!("Bearer {token}")),
                Err(_) => return fail_all(n, &format!("environment variable {var} is not set")),
            }
        }
        let body = match req.send_string(&payload) {
            Ok(resp) if resp.status() == 200 => match resp.into_string() {
                Ok(b) => b,
                Err(e) => return fail_all(n, &format!("reading response body: {e}")),
            },
            Ok(resp) => return fail_all(n, &format!("HTTP status {}", resp.status())),
            Err(ureq::Error::Status(code, _)) => return fail_all(n, &format!("HTTP status {code}")),
            Err(e) => return fail_all(n, &format!("request to {endpoint} failed: {e}")),
        };
        for line in body.lines() {
            collector.accept(line);
        }
        collector.finish("no response from backend")
    }
}

fn fail_all(n: usize, message: &str) -> Vec<Result<Prediction>> {
    (0..n).map(|_| Err(Error::Predictor(message.to_string()))).collect()
}

impl Predictor for ExternalPredictor {
    fn name(&self) -> &str {
        &self.config.name
    }

    fn predict(&self, query: &HoleQuery, k: usize) -> Result<Prediction> {
        self.predict_batch(std::slice::from_ref(query), k)
            .pop()
            .unwrap_or_else(|| Err(Error::Predictor("empty batch result".into())))
    }

    fn predict_batch(&self, queries: &[HoleQuery], k: usize) -> Vec<Result<Prediction>> {
        // Invalid or duplicate-id queries are answered locally with an
        // error and never sent.
        let mut results: Vec<Option<Result<Prediction>>> = queries.iter().map(|_| None).collect();
        let mut seen = HashSet::new();
        let mut sendable = Vec::new();
        for (i, q) in queries.iter().enumerate() {
            if let Err(e) = q.validate() {
                results[i] = Some(Err(e));
            } else if !seen.insert(q.id) {
                results[i] = Some(Err(Error::Predictor(format!("duplicate request id {}", q.id))));
            } else {
                sendable.push(i);
            }
        }
        if !sendable.is_empty() {
            let batch: Vec<HoleQuery> = sendable.iter().map(|&i| queries[i].clone()).collect();
            let chunk_size = batch.len().div_ceil(self.config.parallelism);
            let answers: Vec<Result<Prediction>> = thread::scope(|s| {
                let handles: Vec<_> = batch
                    .chunks(chunk_size)
                    .map(|chunk| s.spawn(move || self.run_chunk(chunk, k)))
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("backend worker panicked"))
                    .collect()
            });
            for (i, a) in sendable.into_iter().zip(answers) {
                results[i] = Some(a);
            }
        }
        results.into_iter().map(Option::unwrap).collect()
    }
}
