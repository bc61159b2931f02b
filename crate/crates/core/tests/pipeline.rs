//! End-to-end flows through the public API.

use disjoint_paths::bench::{self, BenchConfig};
use disjoint_paths::exact::optimal_pair;
use disjoint_paths::fixtures::{forced_crossing_instance, pocket_instance, separable_instance};
use disjoint_paths::gadgets::corpus::corpus;
use disjoint_paths::gadgets::{convert_function2, convert_slpg, verify_visibility_iff_edge};
use disjoint_paths::generate::{gen_instance, GeneratorConfig};
use disjoint_paths::heuristic::{solve, solve_points, SolverConfig, TargetRule};
use disjoint_paths::io;
use disjoint_paths::svg::render_svg;
use proptest::prelude::*;

#[test]
fn generated_instance_survives_json_and_solves() {
    let inst = gen_instance(&GeneratorConfig::new(15, 42)).unwrap();
    let back = io::instance_from_json(&io::instance_to_json(&inst, None)).unwrap();
    assert_eq!(back, inst);
    let a = solve(&inst, &SolverConfig::new(1)).unwrap();
    let b = solve(&back, &SolverConfig::new(1)).unwrap();
    assert_eq!(a, b);
    assert!(inst.validates(&a.pair));
}

#[test]
fn lattice_and_rational_kernels_agree() {
    for seed in 0..10 {
        let inst = gen_instance(&GeneratorConfig::new(12, seed)).unwrap();
        let fast = solve(&inst, &SolverConfig::new(seed)).unwrap();
        let slow = solve_points(inst.red(), inst.blue(), &SolverConfig::new(seed)).unwrap();
        assert_eq!(fast, slow);
    }
}

#[test]
fn heuristic_never_beats_exact() {
    for seed in 0..15 {
        let inst = gen_instance(&GeneratorConfig::new(6, seed)).unwrap();
        let opt = optimal_pair(&inst, None).unwrap();
        for run in 0..20 {
            let res = solve(&inst, &SolverConfig::new(run)).unwrap();
            assert!(res.pair.crossings >= opt.optimum);
        }
    }
}

#[test]
fn fixtures_behave_as_documented() {
    assert_eq!(optimal_pair(&forced_crossing_instance(), None).unwrap().optimum, 1);
    for n in [3, 7, 20] {
        let inst = separable_instance(n);
        for seed in 0..5 {
            assert_eq!(solve(&inst, &SolverConfig::new(seed)).unwrap().pair.crossings, 0);
        }
    }
    let pocket = pocket_instance();
    let restarts: u32 = (0..300).map(|s| solve(&pocket, &SolverConfig::new(s)).unwrap().restarts_used).sum();
    assert!(restarts > 0);
}

#[test]
fn corpus_gadgets_round_trip_and_verify() {
    for c in corpus() {
        let g = io::graph_from_json(&io::graph_to_json(&c.graph)).unwrap();
        for gi in [convert_slpg(&g).unwrap(), convert_function2(&g).unwrap()] {
            let back = io::gadget_from_json(&io::gadget_to_json(&gi)).unwrap();
            assert!(verify_visibility_iff_edge(&g, &back).passed(), "{}", c.name);
            assert!(render_svg(None, None, Some(&back)).contains("<circle"));
        }
    }
}

#[test]
fn fewest_crossings_rule_is_not_worse_on_average() {
    let mut cfg = BenchConfig::new(vec![10], 10, 10, 5);
    let uniform = bench::bench_table1(&cfg).unwrap().rows[0].mean.unwrap();
    cfg.target_rule = TargetRule::FewestCrossings;
    let greedy = bench::bench_table1(&cfg).unwrap().rows[0].mean.unwrap();
    assert!(greedy <= uniform, "{greedy} > {uniform}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solutions_are_spanning_and_simple(n in 3usize..14, inst_seed in any::<u64>(), run_seed in any::<u64>()) {
        let inst = gen_instance(&GeneratorConfig::new(n, inst_seed)).unwrap();
        let res = solve(&inst, &SolverConfig::new(run_seed)).unwrap();
        prop_assert!(inst.validates(&res.pair));
    }

    #[test]
    fn color_swap_preserves_exact_optimum(n in 3usize..6, seed in any::<u64>()) {
        let inst = gen_instance(&GeneratorConfig::new(n, seed)).unwrap();
        let a = optimal_pair(&inst, None).unwrap().optimum;
        let b = optimal_pair(&inst.swapped(), None).unwrap().optimum;
        prop_assert_eq!(a, b);
    }
}
