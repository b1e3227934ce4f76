use lsmcpp::grid::DecomposedGraph;
use lsmcpp::init::{initial_solution, InitMethod};
use lsmcpp::io::generate::{random_instance, GeneratorConfig};
use lsmcpp::partition::{recount, Operator, OperatorKind, Partition};
use lsmcpp::pools::{enumerate_operators, OperatorPools};
use lsmcpp::search::{search, SearchParams, Solution};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, w: usize, h: usize, incomplete: f64, robots: usize) -> (DecomposedGraph, Vec<usize>) {
    let cfg = GeneratorConfig {
        width: w,
        height: h,
        obstacle_fraction: 0.1,
        incomplete_fraction: incomplete,
        robots,
        weighted: seed.is_multiple_of(2),
    };
    let inst = random_instance("p", &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    (inst.decomposed, inst.roots)
}

fn all_operators(d: &DecomposedGraph, p: &Partition, costs: &[f64]) -> Vec<Operator> {
    OperatorKind::ALL
        .iter()
        .flat_map(|&k| enumerate_operators(d, p, costs, k))
        .collect()
}

fn total_count(p: &Partition) -> u32 {
    p.counts().iter().sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operators_preserve_partition_invariants(
        seed in 0u64..10_000,
        w in 2usize..7,
        h in 2usize..7,
        incomplete in prop_oneof![Just(0.0), Just(0.3), Just(0.7)],
        robots in 1usize..4,
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..25),
    ) {
        let (d, roots) = instance(seed, w, h, incomplete, robots);
        let mut s = initial_solution(&d, &roots, InitMethod::Greedy).unwrap();
        for pick in picks {
            let costs = s.costs();
            let ops = all_operators(&d, &s.partition, &costs);
            if ops.is_empty() {
                break;
            }
            let op = *pick.get(&ops);
            let before = s.partition.clone();
            let m = s.partition.apply(&d, &op).unwrap();
            s.partition.validate(&d).unwrap();
            let (counts, dup) = recount(d.len(), s.partition.sets());
            prop_assert_eq!(counts.as_slice(), s.partition.counts());
            prop_assert_eq!(&dup, s.partition.duplicated());
            let diff = total_count(&s.partition) as i64 - total_count(&before) as i64;
            match op.kind() {
                OperatorKind::Grow => prop_assert_eq!(diff, 2),
                OperatorKind::Dedup => prop_assert_eq!(diff, -2),
                OperatorKind::Exchange => prop_assert_eq!(diff, 0),
            }
            let mut undone = s.partition.clone();
            undone.rollback(m);
            prop_assert_eq!(&undone, &before);
            s = Solution::from_partition(&d, s.partition).unwrap();
            s.validate(&d).unwrap();
        }
    }

    #[test]
    fn incremental_pools_match_rebuild(
        seed in 0u64..10_000,
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..15),
    ) {
        let (d, roots) = instance(seed, 5, 5, 0.3, 3);
        let mut s = initial_solution(&d, &roots, InitMethod::Voronoi).unwrap();
        let mut pools = OperatorPools::new(&d, &s.partition, &s.costs());
        for pick in picks {
            let ops = all_operators(&d, &s.partition, &s.costs());
            if ops.is_empty() {
                break;
            }
            let m = s.partition.apply(&d, pick.get(&ops)).unwrap();
            s = Solution::from_partition(&d, s.partition).unwrap();
            pools.refresh_after(&d, &s.partition, &m, &s.costs());
            let fresh = OperatorPools::new(&d, &s.partition, &s.costs());
            for kind in OperatorKind::ALL {
                let mut a = pools.pool(kind);
                let mut b = fresh.pool(kind);
                a.sort();
                b.sort();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn search_never_worsens_and_is_deterministic(seed in 0u64..10_000, k in 1usize..4) {
        let (d, roots) = instance(seed, 4, 4, 0.4, k);
        let init = initial_solution(&d, &roots, InitMethod::Greedy).unwrap();
        let params = SearchParams { max_iters: 120, dedup_period: 20, seed, ..SearchParams::default() };
        let a = search(&d, &init, &params, true).unwrap();
        let b = search(&d, &init, &params, true).unwrap();
        a.best.validate(&d).unwrap();
        prop_assert!(a.best.makespan <= init.makespan + 1e-9);
        prop_assert_eq!(&a.best.partition, &b.best.partition);
        prop_assert_eq!(a.trace, b.trace);
    }
}
