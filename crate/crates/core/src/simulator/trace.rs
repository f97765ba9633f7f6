use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Wakeup,
    Deliver,
    Send,
    Halt,
}

/// One trace record. Sends and halts carry the step of the event that caused them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub step: u64,
    pub kind: EventKind,
    pub vertex: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub port: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    events: Vec<TraceEvent>,
}

/// SHA-256 of the canonical JSON encoding of a payload, hex encoded.
pub fn digest_payload<T: Serialize>(msg: &T) -> Result<String> {
    let bytes = serde_json::to_vec(msg)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl Trace {
    pub fn new(events: Vec<TraceEvent>) -> Self {
        Trace { events }
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub(crate) fn push(&mut self, e: TraceEvent) {
        self.events.push(e);
    }

    /// The records of the first `steps` executed events.
    pub fn truncate_steps(&self, steps: u64) -> Trace {
        Trace { events: self.events.iter().take_while(|e| e.step < steps).cloned().collect() }
    }

    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for e in &self.events {
            s.push_str(&serde_json::to_string(e).expect("trace events serialize"));
            s.push('\n');
        }
        s
    }

    pub fn from_jsonl(text: &str) -> Result<Trace> {
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let e = serde_json::from_str(line).map_err(|err| Error::Parse(format!("trace line {}: {err}", i + 1)))?;
            events.push(e);
        }
        Ok(Trace { events })
    }

    /// Hash of the JSONL encoding; equal hashes mean identical runs.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_jsonl().as_bytes()))
    }
}
