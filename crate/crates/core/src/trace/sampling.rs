//! Seeded fragment sampling.
//!
//! Each draw picks a case uniformly (so a trace is drawn proportionally to its
//! multiplicity), then a length uniformly from `min_len..=min(max_len, |σ|)`,
//! then, for infixes, a start position uniformly. Draws use `u64` ranges so
//! results do not depend on the platform's pointer width.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{EventLog, Trace, TraceKind};
use crate::error::{Error, Result};

pub fn sample_infixes(log: &EventLog, n: usize, min_len: usize, max_len: usize, seed: u64) -> Result<Vec<Trace>> {
    sample(log, n, min_len, max_len, seed, TraceKind::Infix)
}

pub fn sample_postfixes(log: &EventLog, n: usize, min_len: usize, max_len: usize, seed: u64) -> Result<Vec<Trace>> {
    sample(log, n, min_len, max_len, seed, TraceKind::Postfix)
}

fn sample(log: &EventLog, n: usize, min_len: usize, max_len: usize, seed: u64, kind: TraceKind) -> Result<Vec<Trace>> {
    if min_len == 0 || max_len < min_len {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= min_len <= max_len, got {min_len}..{max_len}"
        )));
    }
    let eligible: Vec<&Trace> = log.traces().filter(|t| t.len() >= min_len).collect();
    if eligible.is_empty() {
        return Err(Error::EmptyLog);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let trace = eligible[rng.gen_range(0..eligible.len() as u64) as usize];
        let upper = max_len.min(trace.len()) as u64;
        let len = rng.gen_range(min_len as u64..=upper) as usize;
        let start = match kind {
            TraceKind::Postfix => trace.len() - len,
            _ => rng.gen_range(0..=(trace.len() - len) as u64) as usize,
        };
        out.push(Trace::new(trace.activities[start..start + len].to_vec(), kind));
    }
    Ok(out)
}
