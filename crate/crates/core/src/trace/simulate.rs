//! Random playout of a net into a synthetic log, with optional noise.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::EventLog;
use crate::error::{Error, Result};
use crate::label::ActivityLabel;
use crate::net::AcceptingPetriNet;

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub traces: usize,
    pub seed: u64,
    /// Per-event probability of a deletion, insertion or swap.
    pub noise: f64,
    /// Runs longer than this many firings are discarded and retried.
    pub max_steps: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            traces: 50,
            seed: 0,
            noise: 0.0,
            max_steps: 200,
        }
    }
}

/// Plays out the net from its initial marking, choosing uniformly among the
/// enabled transitions, until the final marking is reached.
pub fn simulate_log(net: &AcceptingPetriNet, config: &SimulationConfig) -> Result<EventLog> {
    if !(0.0..=1.0).contains(&config.noise) {
        return Err(Error::InvalidArgument(format!("noise {} not in [0, 1]", config.noise)));
    }
    let alphabet: Vec<ActivityLabel> = {
        let mut labels: Vec<ActivityLabel> = net
            .transitions()
            .iter()
            .filter_map(|t| t.label.as_activity().cloned())
            .collect();
        labels.sort();
        labels.dedup();
        labels
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut traces = Vec::with_capacity(config.traces);
    let mut failures = 0usize;
    while traces.len() < config.traces {
        match playout(net, &mut rng, config.max_steps) {
            Some(run) => traces.push(add_noise(run, &alphabet, config.noise, &mut rng)),
            None => {
                failures += 1;
                if failures > 100 * config.traces.max(1) {
                    return Err(Error::InvalidArgument(
                        "final marking is not reached within max_steps".to_string(),
                    ));
                }
            }
        }
    }
    let mut log = EventLog::from_traces(traces);
    log.attributes.insert("concept:name".into(), "synthetic".into());
    Ok(log)
}

fn playout(net: &AcceptingPetriNet, rng: &mut ChaCha8Rng, max_steps: usize) -> Option<Vec<ActivityLabel>> {
    let mut marking = net.initial_marking().clone();
    let mut run = Vec::new();
    for _ in 0..max_steps {
        if &marking == net.final_marking() {
            return Some(run);
        }
        let enabled = net.enabled_transitions(&marking);
        if enabled.is_empty() {
            return None;
        }
        let t = enabled[rng.gen_range(0..enabled.len() as u64) as usize];
        if let Some(a) = net.label(t).as_activity() {
            run.push(a.clone());
        }
        marking = net.fire(&marking, t).expect("enabled transition");
    }
    (&marking == net.final_marking()).then_some(run)
}

fn add_noise(
    run: Vec<ActivityLabel>,
    alphabet: &[ActivityLabel],
    noise: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<ActivityLabel> {
    if noise == 0.0 || alphabet.is_empty() {
        return run;
    }
    let mut out = Vec::with_capacity(run.len() + 2);
    let mut i = 0;
    while i < run.len() {
        if !rng.gen_bool(noise) {
            out.push(run[i].clone());
            i += 1;
            continue;
        }
        match rng.gen_range(0..3u64) {
            0 => i += 1,
            1 => {
                out.push(alphabet[rng.gen_range(0..alphabet.len() as u64) as usize].clone());
                out.push(run[i].clone());
                i += 1;
            }
            _ if i + 1 < run.len() => {
                out.push(run[i + 1].clone());
                out.push(run[i].clone());
                i += 2;
            }
            _ => {
                out.push(run[i].clone());
                i += 1;
            }
        }
    }
    out
}
