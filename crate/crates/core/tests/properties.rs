use proptest::prelude::*;
use rand::Rng;
use upcover::generate::{generate, GenConfig, Generator, Shape};
use upcover::model::{distance, normalize_with_report};
use upcover::oracle::{solve_exact, GridSpec};
use upcover::path::{reach_costs, PathLayout, Side};
use upcover::star::{decompose_star, satellite_costs, solve_star_uniform_1};
use upcover::tree::{dp_solve, to_binary, BinaryTree};
use upcover::{coverage, normalize, shortest_distances, Instance, NodeId, UpgradePlan};

fn random_plan(inst: &Instance, seed: u64) -> UpgradePlan {
    let mut g = Generator::new(seed);
    let mut plan = UpgradePlan::for_instance(inst);
    let mut left = inst.budget;
    for (e, edge) in inst.edges.iter().enumerate() {
        let cap = edge.bound.min(left / edge.cost).floor();
        if cap >= 1.0 {
            let d = g.rng().gen_range(0..=cap as u64) as f64;
            plan.reductions[e] = d;
            left -= d * edge.cost;
        }
    }
    plan
}

/// Minimum of `sum(c * delta)` over integer reductions of `edges` that bring
/// their total length down to `radius`.
fn grid_min_cost(inst: &Instance, edges: &[usize]) -> Option<f64> {
    let mut best: Option<f64> = None;
    let mut deltas = vec![0u64; edges.len()];
    loop {
        let len: f64 = edges
            .iter()
            .zip(&deltas)
            .map(|(&e, &d)| inst.edges[e].length - d as f64)
            .sum();
        if len <= inst.radius {
            let cost: f64 = edges
                .iter()
                .zip(&deltas)
                .map(|(&e, &d)| inst.edges[e].cost * d as f64)
                .sum();
            best = Some(best.map_or(cost, |b: f64| b.min(cost)));
        }
        let mut i = 0;
        loop {
            if i == edges.len() {
                return best;
            }
            if deltas[i] < inst.edges[edges[i]].bound as u64 {
                deltas[i] += 1;
                break;
            }
            deltas[i] = 0;
            i += 1;
        }
    }
}

/// Exhaustive optimum for one facility placed anywhere in a binary tree,
/// walking the links directly.
fn binary_tree_optimum(bt: &BinaryTree, budget: u64, radius: f64) -> f64 {
    let mut links = Vec::new();
    for &v in &bt.postorder {
        if let Some(kids) = bt.children[v] {
            for k in kids {
                links.push((v, k.node, k.link));
            }
        }
    }
    let slots = bt.weights.len();
    let mut deltas = vec![0u64; links.len()];
    let mut best = 0.0f64;
    loop {
        let spent: u64 = links
            .iter()
            .zip(&deltas)
            .map(|(l, &d)| l.2.cost as u64 * d)
            .sum();
        if spent <= budget {
            let mut adj = vec![Vec::new(); slots];
            for ((a, b, link), &d) in links.iter().zip(&deltas) {
                let w = link.length - d as f64;
                adj[*a].push((*b, w));
                adj[*b].push((*a, w));
            }
            for &src in &bt.postorder {
                let mut dist = vec![f64::INFINITY; slots];
                dist[src] = 0.0;
                let mut stack = vec![src];
                while let Some(v) = stack.pop() {
                    for &(w, len) in &adj[v] {
                        if dist[w].is_infinite() {
                            dist[w] = dist[v] + len;
                            stack.push(w);
                        }
                    }
                }
                let value: f64 = bt
                    .postorder
                    .iter()
                    .filter(|&&v| dist[v] <= radius)
                    .map(|&v| bt.weights[v])
                    .sum();
                best = best.max(value);
            }
        }
        let mut i = 0;
        loop {
            if i == links.len() {
                return best;
            }
            if deltas[i] < links[i].2.bound as u64 {
                deltas[i] += 1;
                break;
            }
            deltas[i] = 0;
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn upgrades_never_lengthen_distances(seed in any::<u64>(), n in 1usize..=8) {
        let inst = generate(&GenConfig::new(Shape::Graph { extra_edges: 3 }, n), seed).unwrap();
        let plan = random_plan(&inst, seed ^ 1);
        prop_assert!(plan.is_feasible(&inst));
        let zero = UpgradePlan::for_instance(&inst);
        for i in inst.nodes() {
            let before = shortest_distances(&inst, &zero, &[i]);
            let after = shortest_distances(&inst, &plan, &[i]);
            for j in inst.nodes() {
                prop_assert!(after[j.0] <= before[j.0]);
                prop_assert_eq!(distance(&inst, &zero, i, j), before[j.0]);
            }
        }
    }

    #[test]
    fn coverage_monotone_in_plan(seed in any::<u64>(), n in 1usize..=8) {
        let inst = generate(&GenConfig::new(Shape::Graph { extra_edges: 2 }, n), seed).unwrap();
        let big = random_plan(&inst, seed);
        let mut small = big.clone();
        for (e, d) in small.reductions.iter_mut().enumerate() {
            if e % 2 == seed as usize % 2 {
                *d = 0.0;
            }
        }
        let x = [NodeId(seed as usize % n)];
        let cs = coverage(&inst, &x, &small).unwrap();
        let cb = coverage(&inst, &x, &big).unwrap();
        prop_assert!(cs.covered.iter().all(|v| cb.covered.contains(v)));
        prop_assert!(cs.value <= cb.value);
    }

    #[test]
    fn reach_tables_increase_and_match_grid(seed in any::<u64>(), n in 1usize..=9) {
        let inst = generate(&GenConfig::new(Shape::Path, n), seed).unwrap();
        let layout = PathLayout::from_instance(&inst).unwrap();
        for center in 0..n {
            for side in [Side::Left, Side::Right] {
                let table = reach_costs(&inst, &layout, center, side);
                prop_assert_eq!(table.costs[0], 0.0);
                for q in 1..=table.reach() {
                    if table.costs[q] > 0.0 {
                        prop_assert!(table.costs[q] > table.costs[q - 1]);
                    }
                    prop_assert!(table.costs[q] <= inst.budget);
                    let mut plan = UpgradePlan::for_instance(&inst);
                    for (e, d) in table.plan(&inst, q) {
                        plan.reductions[e] = d;
                    }
                    prop_assert_eq!(plan.cost(&inst), table.costs[q]);
                    let dist = shortest_distances(&inst, &plan, &[layout.order[center]]);
                    prop_assert!(table.nodes[..q].iter().all(|v| dist[v.0] <= inst.radius));
                }
                let outward = layout.side(center, side);
                for q in 1..=outward.len().min(4) {
                    let edges: Vec<usize> = outward[..q].iter().map(|&(_, e)| e).collect();
                    let grid = grid_min_cost(&inst, &edges).filter(|&c| c <= inst.budget);
                    if q <= table.reach() {
                        prop_assert_eq!(grid, Some(table.costs[q]));
                    } else {
                        prop_assert_eq!(grid, None);
                    }
                }
            }
        }
    }

    #[test]
    fn dp_table_monotone(seed in any::<u64>(), n in 1usize..=9) {
        let inst = generate(&GenConfig::new(Shape::Tree, n), seed).unwrap();
        let bt = to_binary(&inst, NodeId(seed as usize % n)).unwrap();
        let table = dp_solve(&bt, &inst).unwrap();
        let (r, b) = (table.radius(), table.budget());
        for &v in &bt.postorder {
            for d in 0..=r as i64 {
                for x in 0..=b {
                    if x > 0 {
                        prop_assert!(table.value(v, d, x) >= table.value(v, d, x - 1));
                    }
                    prop_assert!(table.value(v, d + 1, x) <= table.value(v, d, x));
                }
            }
        }
    }

    #[test]
    fn star_greedy_exchange(seed in any::<u64>(), n in 2usize..=9) {
        let mut cfg = GenConfig::new(Shape::Star, n);
        cfg.uniform_weights = true;
        cfg.budget = (0, 8);
        let inst = generate(&cfg, seed).unwrap();
        let sol = solve_star_uniform_1(&inst).unwrap();
        let star = decompose_star(&inst).unwrap();
        prop_assert_eq!(&sol.facilities, &vec![star.center]);
        let costs = satellite_costs(&inst, &star);
        let (covered, uncovered): (Vec<&upcover::star::SatelliteCost>, Vec<_>) =
            costs.iter().partition(|s| sol.covered.contains(&s.node));
        for k in &uncovered {
            for i in &covered {
                prop_assert!(k.min_cost >= i.min_cost);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn finer_grids_do_not_help(seed in any::<u64>(), n in 1usize..=4) {
        let mut cfg = GenConfig::new(Shape::Graph { extra_edges: 1 }, n);
        cfg.bound = (0, 2);
        cfg.budget = (0, 3);
        let inst = generate(&cfg, seed).unwrap();
        let unit = solve_exact(&inst, 1, GridSpec::UNIT).unwrap().value;
        prop_assert_eq!(solve_exact(&inst, 1, GridSpec::fraction(2).unwrap()).unwrap().value, unit);
        prop_assert_eq!(solve_exact(&inst, 1, GridSpec::fraction(4).unwrap()).unwrap().value, unit);
    }

    #[test]
    fn normalize_is_idempotent_and_keeps_optimum(seed in any::<u64>(), n in 1usize..=6) {
        let mut inst = generate(&GenConfig::new(Shape::Graph { extra_edges: 2 }, n), seed).unwrap();
        for e in &mut inst.edges {
            e.bound = e.length - 1.0;
        }
        let (once, _) = normalize_with_report(&inst).unwrap();
        prop_assert_eq!(&normalize(&once).unwrap(), &once);
        prop_assert_eq!(
            solve_exact(&inst, 1, GridSpec::UNIT).unwrap().value,
            solve_exact(&once, 1, GridSpec::UNIT).unwrap().value
        );
    }

    #[test]
    fn binary_conversion_keeps_optimum(seed in any::<u64>(), n in 1usize..=6) {
        let mut cfg = GenConfig::new(Shape::Tree, n);
        cfg.bound = (0, 2);
        cfg.budget = (0, 3);
        let inst = generate(&cfg, seed).unwrap();
        let bt = to_binary(&inst, NodeId(seed as usize % n)).unwrap();
        prop_assert!(bt.node_count() < 2 * n);
        let expected = solve_exact(&inst, 1, GridSpec::UNIT).unwrap().value;
        prop_assert_eq!(binary_tree_optimum(&bt, inst.budget as u64, inst.radius), expected);
    }
}
