//! Randomised properties of the alignment engine.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fragalign::alignment::validate_alignment;
use fragalign::bench::{run_bench, BenchConfig};
use fragalign::net::{parse_pnml, write_pnml, DEFAULT_STATE_CAP};
use fragalign::oracle::brute_force_cost;
use fragalign::running_example;
use fragalign::tree::random::{random_tree, RandomTreeConfig};
use fragalign::tree::{parse_tree_text, to_wfnet, TreeNetBinding};
use fragalign::{align, ActivityLabel, AlignConfig, AlignmentKind, Method, Model, Trace, TraceKind};

const ORACLE_CAP: usize = 5_000;

fn small_tree(seed: u64) -> TreeNetBinding {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = RandomTreeConfig {
        max_nodes: 9,
        ..RandomTreeConfig::default()
    };
    to_wfnet(&random_tree(&mut rng, &config))
}

fn fragment(alphabet: &'static [&'static str]) -> impl Strategy<Value = Vec<ActivityLabel>> {
    prop::collection::vec(prop::sample::select(alphabet), 0..5)
        .prop_map(|v| v.into_iter().map(|a| ActivityLabel::new(a).unwrap()).collect())
}

const LETTERS: &[&str] = &["a", "b", "c", "d", "e", "f", "g", "h", "z"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_trees_are_sound(seed in any::<u64>()) {
        let binding = small_tree(seed);
        let report = binding.net().validate_workflow_net(DEFAULT_STATE_CAP);
        prop_assert!(report.is_valid(), "{}: {}", binding.tree(), report);
    }

    #[test]
    fn tree_text_round_trips(seed in any::<u64>()) {
        let binding = small_tree(seed);
        let text = binding.tree().to_string();
        prop_assert_eq!(parse_tree_text(&text).unwrap().to_string(), text);
    }

    #[test]
    fn pnml_round_trip_preserves_costs(seed in any::<u64>(), f in fragment(LETTERS)) {
        let binding = small_tree(seed);
        let mut buf = Vec::new();
        write_pnml(binding.net(), &mut buf).unwrap();
        let back = parse_pnml(std::str::from_utf8(&buf).unwrap()).unwrap();
        let t = Trace::new(f, TraceKind::Infix);
        for kind in [AlignmentKind::Complete, AlignmentKind::Infix] {
            let a = align(Model::Net(binding.net()), &t, kind, Method::Filtered, &AlignConfig::default()).unwrap();
            let b = align(Model::Net(&back), &t, kind, Method::Filtered, &AlignConfig::default()).unwrap();
            prop_assert_eq!(a.cost, b.cost);
        }
    }

    #[test]
    fn engine_matches_oracle(seed in any::<u64>(), f in fragment(LETTERS)) {
        let binding = small_tree(seed);
        let t = Trace::new(f, TraceKind::Infix);
        for kind in AlignmentKind::ALL {
            let Ok(want) = brute_force_cost(binding.net(), &t, kind, ORACLE_CAP) else { continue };
            let methods: &[Method] = if kind.free_start() { &Method::ALL } else { &[Method::Advanced] };
            for &method in methods {
                let a = align(Model::Tree(&binding), &t, kind, method, &AlignConfig::default()).unwrap();
                prop_assert_eq!(a.cost, want, "{} {} {} {}", binding.tree(), t, kind, method);
                let report = validate_alignment(&a, binding.net(), &t, DEFAULT_STATE_CAP);
                prop_assert!(report.is_valid(), "{}", report);
            }
        }
    }

    #[test]
    fn kinds_are_ordered(f in fragment(LETTERS)) {
        let binding = to_wfnet(&running_example::tree());
        let t = Trace::new(f, TraceKind::Infix);
        let cost = |kind| align(Model::Tree(&binding), &t, kind, Method::Advanced, &AlignConfig::default()).unwrap().cost;
        let (infix, prefix, postfix, complete) = (
            cost(AlignmentKind::Infix),
            cost(AlignmentKind::Prefix),
            cost(AlignmentKind::Postfix),
            cost(AlignmentKind::Complete),
        );
        prop_assert!(infix <= postfix && postfix <= complete);
        prop_assert!(infix <= prefix && prefix <= complete);
        prop_assert!(complete as usize <= t.len() + 6);
        prop_assert!(infix as usize <= t.len());
    }

    #[test]
    fn appending_an_event_costs_at_most_one(f in fragment(LETTERS), extra in prop::sample::select(LETTERS)) {
        let net = running_example::net();
        let t = Trace::new(f.clone(), TraceKind::Infix);
        let mut longer = f;
        longer.push(ActivityLabel::new(extra).unwrap());
        let longer = Trace::new(longer, TraceKind::Infix);
        let cost = |t: &Trace| align(Model::Net(&net), t, AlignmentKind::Infix, Method::Filtered, &AlignConfig::default()).unwrap().cost;
        let (short, long) = (cost(&t), cost(&longer));
        prop_assert!(short <= long && long <= short + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bench_csv_is_deterministic(frags in prop::collection::vec(fragment(LETTERS), 1..12)) {
        let binding = to_wfnet(&running_example::tree());
        let traces: Vec<Trace> = frags.into_iter().map(|f| Trace::new(f, TraceKind::Infix)).collect();
        let csv = |jobs| {
            let config = BenchConfig {
                methods: Method::ALL.to_vec(),
                kind: AlignmentKind::Infix,
                jobs,
                align: AlignConfig::default(),
            };
            let report = run_bench(Model::Tree(&binding), &traces, &config).unwrap();
            prop_assert!(report.mismatches.is_empty());
            let mut buf = Vec::new();
            report.write_csv(&mut buf, false).unwrap();
            Ok(buf)
        };
        prop_assert_eq!(csv(1)?, csv(3)?);
    }
}
