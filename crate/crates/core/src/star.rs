//! Uniform-weight solvers on star networks.
//!
//! With equal weights the center dominates every satellite as a facility
//! site, so the single-facility problem reduces to buying as many
//! satellites as possible, cheapest full upgrade first. Extra facilities go
//! on satellites the budget could not reach.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{ensure_valid, Instance, NodeId, Solution, UpgradePlan};

#[derive(Debug, Clone, PartialEq)]
pub struct StarDecomposition {
    pub center: NodeId,
    /// `(satellite, edge index)` in node order.
    pub satellites: Vec<(NodeId, usize)>,
}

/// A satellite that needs a positive upgrade and can get it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteCost {
    pub node: NodeId,
    pub edge: usize,
    /// `length - R`: how much the edge must shrink.
    pub deficit: f64,
    /// Cost of shrinking by exactly `deficit`.
    pub min_cost: f64,
}

/// Finds the center of a star. A two-node network takes the lower id as
/// center; a single node is a star without satellites.
pub fn decompose_star(instance: &Instance) -> Result<StarDecomposition> {
    let n = instance.n();
    if !instance.is_tree() {
        return Err(Error::NotAStar);
    }
    let adj = instance.adjacency();
    let center = match n {
        1 | 2 => 0,
        _ => adj
            .iter()
            .position(|a| a.len() == n - 1)
            .ok_or(Error::NotAStar)?,
    };
    let satellites = adj[center].clone();
    Ok(StarDecomposition {
        center: NodeId(center),
        satellites,
    })
}

/// Satellites with `0 < deficit <= bound`, sorted by minimal upgrade cost
/// and then node id.
pub fn satellite_costs(instance: &Instance, star: &StarDecomposition) -> Vec<SatelliteCost> {
    let mut costs: Vec<SatelliteCost> = star
        .satellites
        .iter()
        .filter_map(|&(node, edge)| {
            let e = &instance.edges[edge];
            let deficit = e.length - instance.radius;
            (deficit > 0.0 && deficit <= e.bound).then_some(SatelliteCost {
                node,
                edge,
                deficit,
                min_cost: e.cost * deficit,
            })
        })
        .collect();
    costs.sort_by(|a, b| {
        a.min_cost
            .partial_cmp(&b.min_cost)
            .unwrap_or(Ordering::Equal)
            .then(a.node.cmp(&b.node))
    });
    costs
}

fn prepare(instance: &Instance) -> Result<StarDecomposition> {
    ensure_valid(instance)?;
    let star = decompose_star(instance)?;
    if !instance.has_uniform_weights() {
        return Err(Error::NonUniformWeights);
    }
    Ok(star)
}

/// Greedy upgrade plan for a facility at the center.
fn greedy_plan(instance: &Instance, star: &StarDecomposition) -> UpgradePlan {
    let mut plan = UpgradePlan::for_instance(instance);
    let mut remaining = instance.budget;
    for sat in satellite_costs(instance, star) {
        if remaining <= 0.0 {
            break;
        }
        let cost = instance.edges[sat.edge].cost;
        // The last purchase may fall short of the deficit; it is recorded
        // anyway and covers nothing extra.
        let delta = (remaining / cost).min(sat.deficit);
        plan.reductions[sat.edge] = delta;
        remaining -= cost * delta;
    }
    plan
}

/// Single facility on a uniform-weight star, always placed at the center.
pub fn solve_star_uniform_1(instance: &Instance) -> Result<Solution> {
    let star = prepare(instance)?;
    Solution::evaluate(instance, vec![star.center], greedy_plan(instance, &star))
}

/// `p` facilities on a uniform-weight star: the single-facility plan, plus
/// facilities on the lowest-id nodes it leaves uncovered.
pub fn solve_star_uniform_p(instance: &Instance, p: usize) -> Result<Solution> {
    let star = prepare(instance)?;
    if p == 0 || p > instance.n() {
        return Err(Error::FacilityCount {
            p,
            reason: "need 1 <= p <= n",
        });
    }
    let base = Solution::evaluate(instance, vec![star.center], greedy_plan(instance, &star))?;
    if p == 1 {
        return Ok(base);
    }

    let mut facilities = vec![star.center];
    let uncovered = instance.nodes().filter(|v| !base.covered.contains(v));
    facilities.extend(uncovered.take(p - 1));
    // Fewer uncovered nodes than spare facilities: everything is covered
    // already, so the rest go anywhere.
    let mut spare = instance.nodes().filter(|v| *v != star.center);
    while facilities.len() < p {
        let next = spare.next().expect("p <= n");
        if !facilities.contains(&next) {
            facilities.push(next);
        }
    }
    Solution::evaluate(instance, facilities, base.plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Edge;

    /// Center 0 with satellites 1..=3, w=1, R=2, l=(3,4,3), u=2, c=(1,2,3), B=3.
    fn example() -> Instance {
        Instance {
            weights: vec![1.0; 4],
            edges: vec![
                Edge::new(0, 1, 3.0, 2.0, 1.0),
                Edge::new(0, 2, 4.0, 2.0, 2.0),
                Edge::new(0, 3, 3.0, 2.0, 3.0),
            ],
            radius: 2.0,
            budget: 3.0,
            facilities: 1,
            integer: true,
        }
    }

    fn path(n: usize) -> Instance {
        Instance {
            weights: vec![1.0; n],
            edges: (1..n).map(|i| Edge::new(i - 1, i, 2.0, 1.0, 1.0)).collect(),
            radius: 1.0,
            budget: 1.0,
            facilities: 1,
            integer: true,
        }
    }

    #[test]
    fn decompose_shapes() {
        let s = decompose_star(&example()).unwrap();
        assert_eq!(s.center, NodeId(0));
        assert_eq!(s.satellites.len(), 3);

        let s = decompose_star(&path(3)).unwrap();
        assert_eq!(s.center, NodeId(1));
        assert_eq!(decompose_star(&path(2)).unwrap().center, NodeId(0));
        assert_eq!(decompose_star(&path(4)), Err(Error::NotAStar));
    }

    #[test]
    fn sorted_minimal_costs() {
        let inst = example();
        let costs = satellite_costs(&inst, &decompose_star(&inst).unwrap());
        let order: Vec<_> = costs.iter().map(|c| (c.node.0, c.min_cost)).collect();
        assert_eq!(order, vec![(1, 1.0), (3, 3.0), (2, 4.0)]);
    }

    #[test]
    fn single_facility_example() {
        let sol = solve_star_uniform_1(&example()).unwrap();
        assert_eq!(sol.value, 2.0);
        assert_eq!(sol.facilities, vec![NodeId(0)]);
        assert_eq!(sol.covered, vec![NodeId(0), NodeId(1)]);
        // leftover 2 units go to satellite 3 (c=3): 2/3 of its deficit of 1
        assert_eq!(sol.plan.reductions[0], 1.0);
        assert!((sol.plan.reductions[2] - 2.0 / 3.0).abs() < 1e-12);
        assert!(sol.plan.is_feasible(&example()));
    }

    #[test]
    fn budget_non_binding_covers_all_reachable() {
        let mut inst = example();
        inst.budget = 100.0;
        assert_eq!(solve_star_uniform_1(&inst).unwrap().value, 4.0);
        // an unreachable satellite stays uncovered
        inst.edges[1].length = 5.0;
        assert_eq!(solve_star_uniform_1(&inst).unwrap().value, 3.0);
    }

    #[test]
    fn everything_within_radius() {
        let mut inst = example();
        for e in &mut inst.edges {
            e.length = 2.0;
            e.bound = 1.0;
        }
        let sol = solve_star_uniform_1(&inst).unwrap();
        assert_eq!(sol.value, 4.0);
        assert!(sol.plan.reductions.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn p_facilities() {
        let inst = example();
        let sol = solve_star_uniform_p(&inst, 2).unwrap();
        assert_eq!(sol.value, 3.0);
        assert_eq!(sol.facilities, vec![NodeId(0), NodeId(2)]);
        assert_eq!(
            solve_star_uniform_p(&inst, 1).unwrap(),
            solve_star_uniform_1(&inst).unwrap()
        );
        let mut broke = inst.clone();
        broke.budget = 0.0;
        assert_eq!(solve_star_uniform_p(&broke, 4).unwrap().value, 4.0);
        assert!(matches!(
            solve_star_uniform_p(&inst, 5),
            Err(Error::FacilityCount { .. })
        ));
    }

    #[test]
    fn rejects_weighted_and_non_stars() {
        let mut inst = example();
        inst.weights[2] = 2.0;
        assert_eq!(solve_star_uniform_1(&inst), Err(Error::NonUniformWeights));
        assert_eq!(solve_star_uniform_1(&path(5)), Err(Error::NotAStar));
    }
}
