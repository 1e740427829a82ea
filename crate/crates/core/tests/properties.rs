use petgraph::algo::min_spanning_tree;
use petgraph::data::Element;
use petgraph::graph::UnGraph;
use proptest::prelude::*;

use stackmst::follower::run_follower;
use stackmst::model::generate::{random_budgeted, random_tree, CostModel};
use stackmst::model::{format_instance, format_solution, parse_instance, parse_solution};
use stackmst::oracle::{solve_exact, solve_naive, DEFAULT_GUARD};
use stackmst::pricing::{optimal_prices, Pricer};
use stackmst::union_find::UnionFind;
use stackmst::{BlueCatalog, EdgeKey, GameInstance, PricedSolution, RedTree, Value};

fn tree_instance(n: usize, hi: i64, seed: u64) -> GameInstance {
    random_tree(n, CostModel::IntRange { lo: 0, hi }, seed).unwrap()
}

/// A forest of candidates picked by `mask` bits, cycle-closing picks skipped.
fn forest(instance: &GameInstance, mask: u64) -> Vec<EdgeKey> {
    let mut uf = UnionFind::new(instance.n());
    instance
        .candidates()
        .enumerate()
        .filter(|(i, b)| mask >> (i % 64) & 1 == 1 && uf.union(b.key.u, b.key.v))
        .map(|(_, b)| b.key)
        .collect()
}

/// Price of `e` by walking every simple path between its ends in the red
/// tree plus the other blue edges: the cheapest bottleneck red cost.
fn cycle_price(instance: &GameInstance, blues: &[EdgeKey], e: EdgeKey) -> Value {
    let n = instance.n();
    let mut adj: Vec<Vec<(usize, Option<Value>)>> = vec![Vec::new(); n];
    for r in instance.red_edges() {
        adj[r.key.u].push((r.key.v, Some(r.cost)));
        adj[r.key.v].push((r.key.u, Some(r.cost)));
    }
    for &b in blues.iter().filter(|&&b| b != e) {
        adj[b.u].push((b.v, None));
        adj[b.v].push((b.u, None));
    }
    fn walk(
        adj: &[Vec<(usize, Option<Value>)>],
        at: usize,
        goal: usize,
        seen: &mut Vec<bool>,
        worst: Option<Value>,
        best: &mut Option<Value>,
    ) {
        if at == goal {
            let w = worst.expect("a blue forest leaves a red edge on every cycle");
            if best.is_none_or(|b| w < b) {
                *best = Some(w);
            }
            return;
        }
        for &(y, c) in &adj[at] {
            if !seen[y] {
                seen[y] = true;
                let worst = match (worst, c) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    (a, b) => a.or(b),
                };
                walk(adj, y, goal, seen, worst, best);
                seen[y] = false;
            }
        }
    }
    let mut seen = vec![false; n];
    seen[e.u] = true;
    let mut best = None;
    walk(&adj, e.u, e.v, &mut seen, None, &mut best);
    best.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn follower_builds_a_minimum_spanning_tree(n in 2usize..9, seed: u64, mask: u64, bump in 0i64..4) {
        let inst = tree_instance(n, 6, seed);
        let blues = forest(&inst, mask);
        let sol = PricedSolution::new(blues.iter().enumerate().map(|(i, &e)| (e, Value::from((i as i64 + bump) % 7))));
        let res = run_follower(&inst, &sol).unwrap();

        let mut g = UnGraph::<(), Value>::new_undirected();
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for r in inst.red_edges() {
            g.add_edge(nodes[r.key.u], nodes[r.key.v], r.cost);
        }
        for p in &sol.entries {
            g.add_edge(nodes[p.edge.u], nodes[p.edge.v], p.price);
        }
        let weight: Value = min_spanning_tree(&g)
            .filter_map(|el| match el {
                Element::Edge { weight, .. } => Some(weight),
                _ => None,
            })
            .sum();
        prop_assert_eq!(res.total_weight, weight);
        prop_assert_eq!(res.chosen_edges.len(), n - 1);
    }

    #[test]
    fn prices_match_cycle_enumeration(n in 2usize..7, seed: u64, mask: u64) {
        let inst = tree_instance(n, 5, seed);
        let blues = forest(&inst, mask);
        let priced = optimal_prices(&inst, &blues).unwrap();
        for &(e, p) in &priced.prices {
            prop_assert_eq!(p, cycle_price(&inst, &blues, e));
        }
        let mut pricer = Pricer::new(&inst);
        prop_assert_eq!(pricer.prices(&blues).unwrap(), priced.prices.iter().map(|p| p.1).collect::<Vec<_>>());
        let f = run_follower(&inst, &priced.solution()).unwrap();
        prop_assert_eq!(f.revenue, priced.revenue);
        prop_assert!(priced.revenue <= inst.total_cost());
    }

    #[test]
    fn pruned_search_matches_plain_enumeration(n in 3usize..8, seed: u64) {
        let model = CostModel::IntRange { lo: 0, hi: 6 };
        let inst = random_budgeted(n, model, 12, 4, seed).unwrap();
        let fast = solve_exact(&inst, DEFAULT_GUARD).unwrap();
        let slow = solve_naive(&inst, 24).unwrap();
        prop_assert_eq!(fast.optimum, slow.optimum);
        prop_assert_eq!(&fast.best_set, &slow.best_set);
        prop_assert!(fast.optimum <= inst.total_cost());
    }

    #[test]
    fn oracle_matches_price_enumeration(n in 3usize..7, seed: u64) {
        // Some optimal price vector uses red costs only, so this covers the game.
        let inst = random_budgeted(n, CostModel::IntRange { lo: 0, hi: 4 }, 3, 2, seed).unwrap();
        let cands: Vec<(EdgeKey, Value)> = inst.candidates().map(|b| (b.key, b.activation)).collect();
        let levels = inst.tree().distinct_costs();
        let mut best = Value::ZERO;
        for mask in 0u32..(1 << cands.len()) {
            let chosen: Vec<&(EdgeKey, Value)> =
                cands.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c).collect();
            if !inst.budget().allows(chosen.iter().map(|c| c.1).sum()) {
                continue;
            }
            let combos = levels.len().pow(chosen.len() as u32);
            for code in 0..combos {
                let mut rest = code;
                let sol = PricedSolution::new(chosen.iter().map(|c| {
                    let p = levels[rest % levels.len()];
                    rest /= levels.len();
                    (c.0, p)
                }));
                best = best.max(run_follower(&inst, &sol).unwrap().revenue);
            }
        }
        prop_assert_eq!(solve_exact(&inst, DEFAULT_GUARD).unwrap().optimum, best);
    }

    #[test]
    fn optimum_ignores_vertex_names(n in 3usize..7, seed: u64, shift in 1usize..6) {
        let inst = tree_instance(n, 4, seed);
        let relabel = |x: usize| (x + shift) % n;
        let moved = GameInstance::complete(RedTree::new(
            n,
            inst.red_edges().iter().map(|r| (relabel(r.key.u), relabel(r.key.v), r.cost)),
        ))
        .unwrap();
        prop_assert_eq!(
            solve_exact(&inst, DEFAULT_GUARD).unwrap().optimum,
            solve_exact(&moved, DEFAULT_GUARD).unwrap().optimum
        );
    }

    #[test]
    fn formats_round_trip(n in 2usize..10, seed: u64, blues in 0usize..10, mask: u64) {
        let inst = random_budgeted(n, CostModel::UniformReal { lo: 0.0, hi: 3.0 }, blues, 5, seed).unwrap();
        let text = format_instance(inst.raw());
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, inst.raw());
        prop_assert_eq!(format_instance(&back), text);

        let sol = PricedSolution::new(forest(&inst, mask).into_iter().map(|e| (e, Value::frac(7, 3))));
        prop_assert_eq!(parse_solution(&format_solution(&sol)).unwrap(), sol);
    }
}

#[test]
fn complete_catalog_round_trips() {
    let inst = tree_instance(6, 3, 11);
    let text = format_instance(inst.raw());
    let raw = parse_instance(&text).unwrap();
    assert_eq!(raw.blues, BlueCatalog::complete());
    let again = GameInstance::new(raw.tree, raw.blues, raw.budget).unwrap();
    assert_eq!(again.candidate_count(), inst.candidate_count());
}
