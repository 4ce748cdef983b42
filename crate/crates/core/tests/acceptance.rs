//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fragalign::alignment::{validate_alignment, MoveType};
use fragalign::auxiliary::{advanced_markings, baseline_markings, filtered_markings};
use fragalign::bench::{run_bench, BenchConfig, BenchReport};
use fragalign::net::DEFAULT_STATE_CAP;
use fragalign::oracle::{brute_force_cost, enumerate_model_fragments};
use fragalign::running_example;
use fragalign::trace::{load_jsonl, sample_infixes, sample_postfixes, simulate_log, EventLog, SimulationConfig};
use fragalign::tree::random::{random_tree, RandomTreeConfig};
use fragalign::tree::to_wfnet;
use fragalign::{
    align, AcceptingPetriNet, AlignConfig, Alignment, AlignmentKind, Marking, Method, Model, Trace, TraceKind,
};

const GOLDEN_TIME_LIMIT: Duration = Duration::from_secs(1);
const CROSS_METHOD_TIME_LIMIT: Duration = Duration::from_secs(300);
const SAMPLED_FRAGMENTS: usize = 200;
const RANDOM_TREES_CROSS: usize = 3;
const ORACLE_TREES: usize = 50;
const ORACLE_FRAGMENTS: usize = 10;
const ORACLE_STATE_CAP: usize = 2_000;
const RANDOM_TREE_NODES: usize = 15;
const ENUMERATED_FRAGMENT_LEN: usize = 3;

struct Suite {
    failures: usize,
    /// Validity violations seen by any criterion; reported under criterion 7.
    invalid: Vec<String>,
    /// Instances where infix <= postfix <= complete is broken.
    non_monotone: Vec<String>,
    checked_alignments: usize,
}

impl Suite {
    fn report(&mut self, id: u32, name: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("PASS [{id}] {name}: {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL [{id}] {name}: {detail}");
            }
        }
    }

    fn checked(
        &mut self,
        model: Model<'_>,
        trace: &Trace,
        kind: AlignmentKind,
        method: Method,
    ) -> Result<Alignment, String> {
        let a = align(model, trace, kind, method, &AlignConfig::default())
            .map_err(|e| format!("{kind} {method} on {trace}: {e}"))?;
        let report = validate_alignment(&a, model.net(), trace, DEFAULT_STATE_CAP);
        self.checked_alignments += 1;
        if !report.is_valid() {
            self.invalid.push(format!("{kind} {method} on {trace}: {report}"));
        }
        Ok(a)
    }
}

fn trace(text: &str, kind: TraceKind) -> Trace {
    Trace::parse_inline(text, kind).expect("static trace")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sync_labels(a: &Alignment) -> Vec<String> {
    a.moves
        .iter()
        .filter(|m| m.move_type == MoveType::Synchronous)
        .map(|m| m.log.as_ref().expect("sync has a log part").to_string())
        .collect()
}

fn names(net: &AcceptingPetriNet, set: &BTreeSet<Marking>) -> BTreeSet<String> {
    set.iter().map(|m| net.display_marking(m)).collect()
}

fn by_label(net: &AcceptingPetriNet, label: &str) -> fragalign::TransitionId {
    net.transition_ids()
        .find(|&t| net.label(t).as_activity().map(|a| a.as_str()) == Some(label))
        .expect("label occurs once")
}

/// {pre(b)+post(c), pre(d), pre(f)+post(e), final}: the start markings that
/// let ⟨b,d,f⟩ be replayed, expressed through the transitions of `net`.
fn bdf_markings(net: &AcceptingPetriNet) -> BTreeSet<Marking> {
    let pre = |l| net.preset_marking(by_label(net, l));
    let post = |l| net.postset_marking(by_label(net, l));
    BTreeSet::from([
        pre("b").union(&post("c")),
        pre("d"),
        pre("f").union(&post("e")),
        net.final_marking().clone(),
    ])
}

fn criterion_1(s: &mut Suite) -> Result<String, String> {
    let net = running_example::net();
    let t = trace("d,g", TraceKind::Infix);
    let started = Instant::now();
    let a = s.checked(Model::Net(&net), &t, AlignmentKind::Infix, Method::Filtered)?;
    let elapsed = started.elapsed();
    ensure(a.cost == 0, || format!("cost {}", a.cost))?;
    ensure(sync_labels(&a) == ["d", "g"], || {
        format!("sync moves {:?}", sync_labels(&a))
    })?;
    ensure(elapsed < GOLDEN_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("cost 0, sync d and g, {elapsed:?}"))
}

fn criterion_2(s: &mut Suite) -> Result<String, String> {
    let net = running_example::net();
    let binding = to_wfnet(&running_example::tree());
    let t = trace("b,d,f", TraceKind::Infix);
    for method in [Method::Baseline, Method::Filtered] {
        let a = s.checked(Model::Net(&net), &t, AlignmentKind::Infix, method)?;
        ensure(a.cost == 0 && sync_labels(&a) == ["b", "d", "f"], || {
            format!("net {method}: {a:?}")
        })?;
    }
    for method in Method::ALL {
        let a = s.checked(Model::Tree(&binding), &t, AlignmentKind::Infix, method)?;
        ensure(a.cost == 0 && sync_labels(&a) == ["b", "d", "f"], || {
            format!("tree {method}: {a:?}")
        })?;
    }
    let advanced = advanced_markings(&binding, &t).markings;
    ensure(advanced.len() == 4, || format!("{} advanced markings", advanced.len()))?;
    let expected_tree = bdf_markings(binding.net());
    ensure(advanced == expected_tree, || {
        format!(
            "advanced {:?}, expected {:?}",
            names(binding.net(), &advanced),
            names(binding.net(), &expected_tree)
        )
    })?;
    let counterpart = names(&net, &bdf_markings(&net));
    let listed: BTreeSet<String> = ["[p2,p5]", "[p4,p5]", "[p8,p9]", "[p12]"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    ensure(counterpart == listed, || format!("net counterpart {counterpart:?}"))?;
    Ok("cost 0 with sync b,d,f; 4 advanced markings matching [p2,p5],[p4,p5],[p8,p9],[p12]".into())
}

fn criterion_3(s: &mut Suite) -> Result<String, String> {
    let net = running_example::net();
    let binding = to_wfnet(&running_example::tree());
    for model in [Model::Net(&net), Model::Tree(&binding)] {
        let method = if matches!(model, Model::Net(_)) {
            Method::Filtered
        } else {
            Method::Advanced
        };
        for (text, want) in [("d,g", 1), ("a,d,g", 2)] {
            let a = s.checked(model, &trace(text, TraceKind::Postfix), AlignmentKind::Postfix, method)?;
            ensure(a.cost == want, || format!("postfix {text}: cost {}", a.cost))?;
        }
        let a = s.checked(
            model,
            &trace("d,a,e,h", TraceKind::Complete),
            AlignmentKind::Complete,
            method,
        )?;
        ensure(a.cost == 5, || format!("complete: cost {}", a.cost))?;
        if matches!(model, Model::Net(_)) {
            let counts = [
                a.count(MoveType::Log),
                a.count(MoveType::VisibleModel),
                a.count(MoveType::InvisibleModel),
                a.count(MoveType::Synchronous),
            ];
            ensure(counts == [1, 4, 2, 3], || format!("complete move counts {counts:?}"))?;
        }
    }
    Ok("postfix d,g = 1, postfix a,d,g = 2, complete d,a,e,h = 5 (1 log, 4 model, 2 silent, 3 sync)".into())
}

fn criterion_4(_: &mut Suite) -> Result<String, String> {
    let net = running_example::net();
    let t = trace("b,d,f", TraceKind::Infix);
    let filtered = filtered_markings(&net, &t, DEFAULT_STATE_CAP).map_err(|e| e.to_string())?;
    let expected: BTreeSet<String> = ["[p2,p3]", "[p2,p5]", "[p4,p5]", "[p7,p8]", "[p8,p9]", "[p12]"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let got = names(&net, &filtered.markings);
    ensure(got == expected, || format!("filtered {got:?}"))?;
    let baseline = baseline_markings(&net, DEFAULT_STATE_CAP).map_err(|e| e.to_string())?;
    ensure(baseline.len() == 12, || format!("baseline {} markings", baseline.len()))?;
    Ok("filtered = 6 markings as listed, baseline = 12".into())
}

fn simulated(net: &AcceptingPetriNet, traces: usize, seed: u64, noise: f64) -> Option<EventLog> {
    let config = SimulationConfig {
        traces,
        seed,
        noise,
        ..SimulationConfig::default()
    };
    simulate_log(net, &config)
        .ok()
        .filter(|log| log.traces().any(|t| t.len() >= 2))
}

fn bench_both_kinds(
    s: &mut Suite,
    model: Model<'_>,
    log: &EventLog,
    seed: u64,
    n: usize,
) -> Result<(usize, usize), String> {
    let mut instances = 0;
    let mut mismatches = 0;
    for kind in [AlignmentKind::Infix, AlignmentKind::Postfix] {
        let fragments = match kind {
            AlignmentKind::Infix => sample_infixes(log, n, 1, 6, seed),
            _ => sample_postfixes(log, n, 1, 6, seed),
        }
        .map_err(|e| e.to_string())?;
        let config = BenchConfig {
            methods: Method::ALL.to_vec(),
            kind,
            jobs: 0,
            align: AlignConfig::default(),
        };
        let report = run_bench(model, &fragments, &config).map_err(|e| format!("{kind}: {e}"))?;
        instances += fragments.len();
        mismatches += report.mismatches.len();
        for &i in report.mismatches.iter().take(3) {
            eprintln!("  mismatch {kind} {}", fragments[i]);
        }
        // validity of a slice of the produced alignments
        for f in fragments.iter().take(20) {
            s.checked(model, f, kind, Method::Advanced)?;
        }
    }
    Ok((instances, mismatches))
}

fn criterion_5(s: &mut Suite) -> Result<String, String> {
    let started = Instant::now();
    let log = load_jsonl(fixture("fig1_log.jsonl")).map_err(|e| e.to_string())?;
    let binding = to_wfnet(&running_example::tree());
    let (mut instances, mut mismatches) = bench_both_kinds(s, Model::Tree(&binding), &log, 5, SAMPLED_FRAGMENTS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let config = RandomTreeConfig {
        max_nodes: RANDOM_TREE_NODES,
        ..RandomTreeConfig::default()
    };
    let mut trees = 0;
    let mut seed = 0;
    while trees < RANDOM_TREES_CROSS {
        seed += 1;
        ensure(seed < 100, || "could not generate usable random trees".into())?;
        let binding = to_wfnet(&random_tree(&mut rng, &config));
        let Some(log) = simulated(binding.net(), 50, seed, 0.15) else {
            continue;
        };
        let (i, m) = bench_both_kinds(s, Model::Tree(&binding), &log, seed, SAMPLED_FRAGMENTS)?;
        instances += i;
        mismatches += m;
        trees += 1;
    }
    let elapsed = started.elapsed();
    ensure(mismatches == 0, || {
        format!("{mismatches} mismatches over {instances} instances")
    })?;
    ensure(elapsed < CROSS_METHOD_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{instances} instances (running example + {trees} random trees), 0 mismatches, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

/// Draws up to `ORACLE_FRAGMENTS` fragments from a noisy log of the tree:
/// whole traces, infixes and postfixes.
fn oracle_fragments(log: &EventLog, seed: u64) -> Vec<Vec<fragalign::ActivityLabel>> {
    let mut out: Vec<Vec<_>> = log.traces().take(2).map(|t| t.activities.clone()).collect();
    for t in sample_infixes(log, 4, 1, 4, seed).unwrap_or_default() {
        out.push(t.activities);
    }
    for t in sample_postfixes(log, 4, 1, 4, seed + 1).unwrap_or_default() {
        out.push(t.activities);
    }
    out.truncate(ORACLE_FRAGMENTS);
    out
}

fn criterion_6(s: &mut Suite) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let config = RandomTreeConfig {
        max_nodes: RANDOM_TREE_NODES,
        ..RandomTreeConfig::default()
    };
    let kinds = [AlignmentKind::Complete, AlignmentKind::Infix, AlignmentKind::Postfix];
    let mut trees = 0;
    let mut skipped = 0;
    let mut comparisons = 0;
    let mut mismatches = Vec::new();
    let mut attempt = 0u64;
    while trees < ORACLE_TREES {
        attempt += 1;
        ensure(attempt < 1_000, || {
            format!("only {trees} random trees fit the oracle cap")
        })?;
        let binding = to_wfnet(&random_tree(&mut rng, &config));
        let Some(log) = simulated(binding.net(), 20, attempt, 0.2) else {
            continue;
        };
        let fragments = oracle_fragments(&log, attempt);
        if fragments.len() < ORACLE_FRAGMENTS {
            continue;
        }
        // only nets whose product stays within the oracle cap count
        let mut oracle = Vec::new();
        let fits = fragments.iter().all(|f| {
            kinds.iter().all(|&kind| {
                let t = Trace::new(f.clone(), TraceKind::Infix);
                match brute_force_cost(binding.net(), &t, kind, ORACLE_STATE_CAP) {
                    Ok(c) => {
                        oracle.push(c);
                        true
                    }
                    Err(_) => false,
                }
            })
        });
        if !fits {
            skipped += 1;
            continue;
        }
        trees += 1;
        let mut expected = oracle.into_iter();
        for f in &fragments {
            let mut costs = Vec::new();
            for kind in kinds {
                let want = expected.next().expect("one oracle cost per kind");
                let t = Trace::new(f.clone(), TraceKind::Infix);
                let methods: &[Method] = if kind == AlignmentKind::Complete {
                    &[Method::Advanced]
                } else {
                    &Method::ALL
                };
                for &method in methods {
                    let got = s.checked(Model::Tree(&binding), &t, kind, method)?.cost;
                    comparisons += 1;
                    if got != want {
                        mismatches.push(format!(
                            "{} {kind} {method} on {t}: engine {got}, oracle {want}",
                            binding.tree()
                        ));
                    }
                }
                costs.push(want);
            }
            let [complete, infix, postfix] = costs[..] else {
                unreachable!()
            };
            if !(infix <= postfix && postfix <= complete) {
                s.non_monotone
                    .push(format!("{} on {:?}: {infix}/{postfix}/{complete}", binding.tree(), f));
            }
        }
    }
    for m in mismatches.iter().take(5) {
        eprintln!("  {m}");
    }
    ensure(mismatches.is_empty(), || {
        format!("{} of {comparisons} comparisons differ", mismatches.len())
    })?;
    Ok(format!(
        "{trees} trees x {ORACLE_FRAGMENTS} fragments x 3 kinds, {comparisons} comparisons, 0 mismatches ({skipped} trees over the cap skipped)"
    ))
}

fn no_timing_csv(report: &BenchReport) -> String {
    let mut buf = Vec::new();
    report.write_csv(&mut buf, false).expect("in-memory write");
    String::from_utf8(buf).expect("utf-8 csv")
}

fn criterion_7(s: &mut Suite) -> Result<String, String> {
    // every enumerated model fragment is a perfect infix
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let config = RandomTreeConfig {
        max_nodes: 10,
        ..RandomTreeConfig::default()
    };
    let mut models = vec![to_wfnet(&running_example::tree())];
    models.extend((0..5).map(|_| to_wfnet(&random_tree(&mut rng, &config))));
    let mut enumerated = 0;
    for binding in &models {
        let frags = enumerate_model_fragments(binding.net(), ENUMERATED_FRAGMENT_LEN, DEFAULT_STATE_CAP)
            .map_err(|e| e.to_string())?;
        for f in frags {
            let t = Trace::new(f, TraceKind::Infix);
            for method in Method::ALL {
                let a = s.checked(Model::Tree(binding), &t, AlignmentKind::Infix, method)?;
                ensure(a.cost == 0, || {
                    format!("{} infix {t} via {method}: cost {}", binding.tree(), a.cost)
                })?;
            }
            enumerated += 1;
        }
    }

    // monotonicity on the running example with sampled fragments
    let log = load_jsonl(fixture("fig1_log.jsonl")).map_err(|e| e.to_string())?;
    let binding = to_wfnet(&running_example::tree());
    let fragments = sample_infixes(&log, 100, 1, 6, 7).map_err(|e| e.to_string())?;
    for f in &fragments {
        let cost = |s: &mut Suite, kind| {
            s.checked(Model::Tree(&binding), f, kind, Method::Advanced)
                .map(|a| a.cost)
        };
        let (i, p, c) = (
            cost(s, AlignmentKind::Infix)?,
            cost(s, AlignmentKind::Postfix)?,
            cost(s, AlignmentKind::Complete)?,
        );
        if !(i <= p && p <= c) {
            s.non_monotone.push(format!("{f}: {i}/{p}/{c}"));
        }
    }

    // determinism of the benchmark CSV
    let run = |jobs| {
        let config = BenchConfig {
            methods: Method::ALL.to_vec(),
            kind: AlignmentKind::Infix,
            jobs,
            align: AlignConfig::default(),
        };
        let fragments = sample_infixes(&log, 100, 1, 6, 11).map_err(|e| e.to_string())?;
        run_bench(Model::Tree(&binding), &fragments, &config).map_err(|e| e.to_string())
    };
    let first = no_timing_csv(&run(1)?);
    let second = no_timing_csv(&run(4)?);
    ensure(first == second, || "benchmark CSV differs between runs".into())?;

    ensure(s.invalid.is_empty(), || {
        format!("{} invalid alignments, first: {}", s.invalid.len(), s.invalid[0])
    })?;
    ensure(s.non_monotone.is_empty(), || {
        format!(
            "{} non-monotone instances, first: {}",
            s.non_monotone.len(),
            s.non_monotone[0]
        )
    })?;
    Ok(format!(
        "{} alignments valid, {enumerated} enumerated fragments at cost 0, infix <= postfix <= complete holds, CSV identical",
        s.checked_alignments
    ))
}

fn criterion_8(_: &mut Suite) -> Result<String, String> {
    let log = load_jsonl(fixture("fig1_log.jsonl")).map_err(|e| e.to_string())?;
    let binding = to_wfnet(&running_example::tree());
    let fragments = sample_infixes(&log, SAMPLED_FRAGMENTS, 1, 6, 8).map_err(|e| e.to_string())?;
    let config = BenchConfig {
        methods: Method::ALL.to_vec(),
        kind: AlignmentKind::Infix,
        jobs: 1,
        align: AlignConfig::default(),
    };
    // warm-up run, then the measured one
    run_bench(Model::Tree(&binding), &fragments, &config).map_err(|e| e.to_string())?;
    let report = run_bench(Model::Tree(&binding), &fragments, &config).map_err(|e| e.to_string())?;
    let summary = report.summary();
    let get = |m: Method| summary.iter().find(|s| s.method == m).expect("method ran");
    let (b, f, a) = (get(Method::Baseline), get(Method::Filtered), get(Method::Advanced));
    let detail = format!(
        "expanded {:.2} <= {:.2} <= {:.2}, ms {:.3} (advanced) vs {:.3} (baseline)",
        a.mean_expanded, f.mean_expanded, b.mean_expanded, a.mean_total_ms, b.mean_total_ms
    );
    ensure(
        a.mean_expanded <= f.mean_expanded && f.mean_expanded <= b.mean_expanded,
        || detail.clone(),
    )?;
    ensure(a.mean_total_ms <= b.mean_total_ms, || detail.clone())?;
    Ok(detail)
}

fn main() -> ExitCode {
    let mut suite = Suite {
        failures: 0,
        invalid: Vec::new(),
        non_monotone: Vec::new(),
        checked_alignments: 0,
    };
    type Criterion = fn(&mut Suite) -> Result<String, String>;
    let criteria: [(&str, Criterion); 8] = [
        ("infix d,g golden", criterion_1),
        ("infix b,d,f golden and advanced markings", criterion_2),
        ("postfix and complete goldens", criterion_3),
        ("filtered and baseline markings", criterion_4),
        ("cross-method cost equality", criterion_5),
        ("oracle cost equality", criterion_6),
        ("property suite", criterion_7),
        ("performance directionality", criterion_8),
    ];
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let result = run(&mut suite);
        suite.report(i as u32 + 1, name, result);
    }
    println!("{} of 8 criteria passed", 8 - suite.failures);
    if suite.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
