//! Update traces: the line-oriented text format and a seeded generator.
//!
//! ```text
//! n 4
//! # comment
//! + 0 1
//! - 0 1
//! ```
//!
//! Serialization emits the header followed by one event per line, each
//! terminated by `\n`. Comments are accepted on input and never emitted.

use indexmap::IndexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{DynGraph, EventKind, GraphError, UpdateEvent, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateTrace {
    pub n: usize,
    pub events: Vec<UpdateEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected header `n <count>`")]
    Header,
    #[error("malformed event line: {0:?}")]
    Syntax(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("missing trailing newline")]
    MissingTrailingNewline,
    #[error("input is not valid UTF-8")]
    Encoding,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(line: usize, kind: impl Into<ParseErrorKind>) -> Self {
        Self {
            line,
            kind: kind.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("generator needs n >= 2, got {0}")]
    TooFewVertices(usize),
    #[error("p_delete must lie in [0, 1), got {0}")]
    BadDeleteProbability(f64),
}

fn parse_id(token: &str) -> Option<usize> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    token.parse().ok()
}

pub fn parse_trace(bytes: &[u8]) -> Result<UpdateTrace, ParseError> {
    let text =
        std::str::from_utf8(bytes).map_err(|_| ParseError::at(1, ParseErrorKind::Encoding))?;
    if text.is_empty() {
        return Err(ParseError::at(1, ParseErrorKind::Header));
    }
    let body = match text.strip_suffix('\n') {
        Some(body) => body,
        None => {
            let last = text.split('\n').count();
            return Err(ParseError::at(last, ParseErrorKind::MissingTrailingNewline));
        }
    };

    let mut header: Option<usize> = None;
    let mut graph = DynGraph::new(0);
    let mut events = Vec::new();
    for (idx, line) in body.split('\n').enumerate() {
        let lineno = idx + 1;
        if line.starts_with('#') {
            continue;
        }
        if header.is_none() {
            let n = line
                .strip_prefix("n ")
                .and_then(parse_id)
                .filter(|&n| n >= 1)
                .ok_or(ParseError::at(lineno, ParseErrorKind::Header))?;
            header = Some(n);
            graph = DynGraph::new(n);
            continue;
        }
        let syntax = || ParseError::at(lineno, ParseErrorKind::Syntax(line.to_string()));
        let mut parts = line.split(' ');
        let kind = match parts.next() {
            Some("+") => EventKind::Insert,
            Some("-") => EventKind::Delete,
            _ => return Err(syntax()),
        };
        let u = parts.next().and_then(parse_id).ok_or_else(syntax)?;
        let v = parts.next().and_then(parse_id).ok_or_else(syntax)?;
        if parts.next().is_some() {
            return Err(syntax());
        }
        let event = UpdateEvent { kind, u, v };
        graph.apply(&event).map_err(|e| ParseError::at(lineno, e))?;
        events.push(event);
    }
    let n = header.ok_or(ParseError::at(1, ParseErrorKind::Header))?;
    Ok(UpdateTrace { n, events })
}

pub fn serialize_trace(trace: &UpdateTrace) -> String {
    let mut out = format!("n {}\n", trace.n);
    for e in &trace.events {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

/// Seeded random trace over `n` vertices.
///
/// Each step deletes a uniformly random present edge with probability
/// `p_delete`, otherwise inserts a uniformly random absent edge. An empty
/// graph forces an insertion and a complete graph forces a deletion.
pub fn generate_trace(
    n: usize,
    steps: usize,
    p_delete: f64,
    seed: u64,
) -> Result<UpdateTrace, GenerateError> {
    if n < 2 {
        return Err(GenerateError::TooFewVertices(n));
    }
    if !(0.0..1.0).contains(&p_delete) {
        return Err(GenerateError::BadDeleteProbability(p_delete));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = n * (n - 1) / 2;
    let mut present: IndexSet<(VertexId, VertexId)> = IndexSet::new();
    let mut events = Vec::with_capacity(steps);

    for _ in 0..steps {
        let delete = if present.is_empty() {
            false
        } else if present.len() == total {
            true
        } else {
            rng.gen_bool(p_delete)
        };
        if delete {
            let idx = rng.gen_range(0..present.len());
            let (u, v) = present.swap_remove_index(idx).unwrap();
            events.push(UpdateEvent::delete(u, v));
        } else {
            let (u, v) = sample_absent(&mut rng, n, &present);
            present.insert((u, v));
            events.push(UpdateEvent::insert(u, v));
        }
    }
    Ok(UpdateTrace { n, events })
}

fn sample_absent(
    rng: &mut ChaCha8Rng,
    n: usize,
    present: &IndexSet<(VertexId, VertexId)>,
) -> (VertexId, VertexId) {
    let total = n * (n - 1) / 2;
    if present.len() * 2 <= total {
        loop {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if !present.contains(&key) {
                return key;
            }
        }
    }
    let absent: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|key| !present.contains(key))
        .collect();
    absent[rng.gen_range(0..absent.len())]
}

/// Insert-only trace that builds a random connected graph: a random spanning
/// tree plus `extra` random chords, in shuffled order.
pub fn generate_connected_trace(n: usize, extra: usize, seed: u64) -> UpdateTrace {
    use rand::seq::SliceRandom;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges: IndexSet<(VertexId, VertexId)> = IndexSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let child = order[i];
        edges.insert((parent.min(child), parent.max(child)));
    }
    let total = n * (n - 1) / 2;
    let target = (edges.len() + extra).min(total);
    while edges.len() < target {
        let key = sample_absent(&mut rng, n, &edges);
        edges.insert(key);
    }
    let mut list: Vec<_> = edges.into_iter().collect();
    list.shuffle(&mut rng);
    let events = list
        .into_iter()
        .map(|(u, v)| {
            if rng.gen_bool(0.5) {
                UpdateEvent::insert(u, v)
            } else {
                UpdateEvent::insert(v, u)
            }
        })
        .collect();
    UpdateTrace { n, events }
}
