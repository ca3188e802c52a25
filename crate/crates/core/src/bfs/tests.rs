use proptest::prelude::{any, prop, prop_assert_eq, prop_oneof, proptest, ProptestConfig};
use proptest::strategy::Strategy as _;

use super::*;
use crate::graph::{build_graph, generate, generate_star, EdgeList, GeneratorSpec};

fn star(n: u64) -> Graph {
    build_graph(&generate_star(n).unwrap()).unwrap()
}

fn path(n: u64) -> Graph {
    build_graph(&EdgeList::new(n, (1..n).map(|v| (v - 1, v)).collect()).unwrap()).unwrap()
}

fn run(g: &Graph, p: usize, cfg: BfsConfig) -> BfsOutcome {
    let map = PartitionMap::new(g.vertex_count(), p).unwrap();
    bfs_distributed(g, &map, &cfg, &WorldConfig::in_process(p)).unwrap()
}

fn combos(source: VertexId) -> impl Iterator<Item = BfsConfig> {
    Strategy::ALL.into_iter().flat_map(move |s| {
        FrontierMode::ALL
            .into_iter()
            .map(move |m| BfsConfig::new(source, s, m))
    })
}

#[test]
fn serial_examples() {
    assert_eq!(bfs_serial(&star(5), 0).unwrap(), vec![0, 1, 1, 1, 1]);
    assert_eq!(bfs_serial(&star(5), 2).unwrap(), vec![1, 2, 0, 2, 2]);
    assert_eq!(bfs_serial(&path(4), 0).unwrap(), vec![0, 1, 2, 3]);
    assert!(matches!(
        bfs_serial(&star(5), 5),
        Err(Error::InvalidVertex { vertex: 5, n: 5 })
    ));
}

#[test]
fn star_from_hub_every_combination() {
    let g = star(5);
    for cfg in combos(0) {
        let out = run(&g, 2, cfg);
        assert_eq!(out.levels, vec![0, 1, 1, 1, 1], "{cfg:?}");
        assert_eq!(out.metrics.productive_levels(), 1);
        assert_eq!(out.metrics.levels.len(), 2);
        assert_eq!(out.levels_traversed(), 2);
    }
}

#[test]
fn erdos_renyi_matches_serial() {
    let g = build_graph(&generate(&GeneratorSpec::erdos_renyi(64, 0.05, 42)).unwrap()).unwrap();
    let cfg = BfsConfig::new(0, Strategy::Optimized, FrontierMode::Distributed);
    assert_eq!(run(&g, 4, cfg).levels, bfs_serial(&g, 0).unwrap());
}

#[test]
fn disconnected_component_stays_unvisited() {
    let edges = vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)];
    let g = build_graph(&EdgeList::new(6, edges).unwrap()).unwrap();
    for p in [1, 2, 3, 4] {
        for cfg in combos(1) {
            let out = run(&g, p, cfg);
            assert_eq!(out.levels, vec![1, 0, 1, UNVISITED, UNVISITED, UNVISITED]);
        }
    }
}

#[test]
fn shortcircuit_hits_count_owned_hub_neighbours() {
    // chunk = ceil(1001 / 4) = 251, so rank 0 owns the hub and leaves 1..=250
    let g = star(1001);
    let map = PartitionMap::new(1001, 4).unwrap();
    let report = compare_strategies(&g, &map, 0, &WorldConfig::in_process(4)).unwrap();
    for mode in FrontierMode::ALL {
        let opt = report
            .run(Strategy::Optimized, mode)
            .unwrap()
            .metrics
            .totals();
        assert_eq!(opt.local_shortcircuit_hits, 250);
        let base = report
            .run(Strategy::Baseline, mode)
            .unwrap()
            .metrics
            .totals();
        assert_eq!(base.local_shortcircuit_hits, 0);
    }
    assert!(report.to_string().contains("master_merge / distributed"));
}

#[test]
fn distributed_frontier_is_cheaper_on_the_wire() {
    let g = build_graph(&generate(&GeneratorSpec::small_world(300, 4, 0.05, 8)).unwrap()).unwrap();
    for p in [2, 3, 8] {
        let map = PartitionMap::new(300, p).unwrap();
        let report = compare_strategies(&g, &map, 17, &WorldConfig::in_process(p)).unwrap();
        for s in Strategy::ALL {
            assert!(report.frontier_byte_ratio(s).unwrap() > 1.0, "p = {p}, {s}");
        }
    }
}

#[test]
fn aggregation_counters_by_strategy() {
    let g = build_graph(&generate(&GeneratorSpec::erdos_renyi(200, 0.03, 5)).unwrap()).unwrap();
    for mode in FrontierMode::ALL {
        let opt = run(&g, 4, BfsConfig::new(3, Strategy::Optimized, mode)).metrics;
        assert!(opt
            .levels
            .iter()
            .all(|l| l.aggregation_copy_bytes == 0 && l.self_buffered == 0));
        let base = run(&g, 4, BfsConfig::new(3, Strategy::Baseline, mode)).metrics;
        assert!(base.totals().aggregation_copy_bytes > 0);
        assert!(base.totals().self_buffered > 0);
    }
}

#[test]
fn single_rank_sends_nothing() {
    let g = build_graph(&generate(&GeneratorSpec::erdos_renyi(100, 0.05, 1)).unwrap()).unwrap();
    let serial = bfs_serial(&g, 9).unwrap();
    for cfg in combos(9) {
        let out = run(&g, 1, cfg);
        assert_eq!(out.levels, serial);
        assert_eq!(out.metrics.totals().wire_bytes, 0);
        assert_eq!(out.metrics.totals().aggregation_copy_bytes, 0);
    }
}

#[test]
fn more_ranks_than_vertices() {
    let g = path(3);
    for cfg in combos(2) {
        assert_eq!(run(&g, 8, cfg).levels, vec![2, 1, 0]);
    }
    let g = star(1);
    for cfg in combos(0) {
        let out = run(&g, 4, cfg);
        assert_eq!(out.levels, vec![0]);
        assert_eq!(out.metrics.levels.len(), 1);
    }
}

#[test]
fn rejects_bad_inputs() {
    let g = star(5);
    let cfg = BfsConfig::new(5, Strategy::Baseline, FrontierMode::Distributed);
    let map = PartitionMap::new(5, 2).unwrap();
    let world = WorldConfig::in_process(2);
    assert!(matches!(
        bfs_distributed(&g, &map, &cfg, &world),
        Err(Error::InvalidVertex { .. })
    ));
    let cfg = BfsConfig::new(0, Strategy::Baseline, FrontierMode::Distributed);
    assert!(bfs_distributed(&g, &PartitionMap::new(6, 2).unwrap(), &cfg, &world).is_err());
    assert!(bfs_distributed(&g, &map, &cfg, &WorldConfig::in_process(3)).is_err());
}

#[test]
fn per_level_records_are_consistent() {
    let g = build_graph(&generate(&GeneratorSpec::small_world(120, 4, 0.1, 3)).unwrap()).unwrap();
    let serial = bfs_serial(&g, 0).unwrap();
    for cfg in combos(0) {
        let out = run(&g, 3, cfg);
        let m = &out.metrics;
        for (i, rec) in m.levels.iter().enumerate() {
            assert_eq!(rec.level, i as u64);
            let at_level = serial.iter().filter(|&&l| l == i as u64).count() as u64;
            let at_next = serial.iter().filter(|&&l| l == i as u64 + 1).count() as u64;
            assert_eq!(rec.frontier_size_global, at_level);
            assert_eq!(rec.discovered, at_next);
        }
        let sent: u64 = m.rank_counters.iter().map(|c| c.bytes_sent).sum();
        let recv: u64 = m.rank_counters.iter().map(|c| c.bytes_received).sum();
        assert_eq!(sent, m.totals().wire_bytes);
        assert_eq!(sent, recv);
    }
}

fn assert_level_validity(g: &Graph, source: VertexId, levels: &[Level]) {
    for u in 0..g.vertex_count() {
        let lu = levels[u as usize];
        if lu == UNVISITED {
            assert!(g
                .neighbors(u)
                .iter()
                .all(|&v| levels[v as usize] == UNVISITED));
            continue;
        }
        for &v in g.neighbors(u) {
            let lv = levels[v as usize];
            assert!(lv != UNVISITED && lu.abs_diff(lv) <= 1, "edge ({u}, {v})");
        }
        if u != source {
            assert!(
                g.neighbors(u).iter().any(|&v| levels[v as usize] + 1 == lu),
                "orphan {u}"
            );
        }
    }
}

fn arb_graph() -> impl proptest::strategy::Strategy<Value = Graph> {
    prop_oneof![
        (1u64..300).prop_map(GeneratorSpec::star),
        (1u64..300, 0.0f64..0.08, any::<u64>())
            .prop_map(|(n, p, s)| GeneratorSpec::erdos_renyi(n, p, s)),
        (5u64..300, 0.0f64..0.5, any::<u64>())
            .prop_map(|(n, b, s)| GeneratorSpec::small_world(n, 4, b, s)),
    ]
    .prop_map(|spec| build_graph(&generate(&spec).unwrap()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn distributed_equals_serial(
        g in arb_graph(),
        p in prop::sample::select(vec![1usize, 2, 3, 4, 8, 16]),
        src in any::<u64>(),
        strategy in prop::sample::select(Strategy::ALL.to_vec()),
        mode in prop::sample::select(FrontierMode::ALL.to_vec()),
    ) {
        let source = src % g.vertex_count();
        let serial = bfs_serial(&g, source).unwrap();
        assert_level_validity(&g, source, &serial);
        let out = run(&g, p, BfsConfig::new(source, strategy, mode));
        prop_assert_eq!(&out.levels, &serial);
        prop_assert_eq!(out.levels_traversed() as usize, out.metrics.levels.len());
    }
}
