//! Single-facility solver on path networks.
//!
//! For a fixed facility node the two sides of the path are independent
//! except for the shared budget. On each side, covering the q-th node costs
//! a minimal amount `B_q`, a fractional knapsack over the first q edges
//! that is solved greedily by cheapest unit cost. Those costs grow strictly
//! with q, so a two-pointer sweep over left allocations finds the best
//! split.

use crate::error::{Error, Result};
use crate::model::{ensure_valid, Instance, NodeId, Solution, UpgradePlan};

/// Nodes of a path from one endpoint to the other.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLayout {
    pub order: Vec<NodeId>,
    /// `edges[i]` joins `order[i]` and `order[i + 1]`.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl PathLayout {
    /// Orders the path starting at the endpoint with the lower id.
    pub fn from_instance(instance: &Instance) -> Result<Self> {
        if !instance.is_tree() {
            return Err(Error::NotAPath);
        }
        let adj = instance.adjacency();
        if adj.iter().any(|a| a.len() > 2) {
            return Err(Error::NotAPath);
        }
        let start = adj
            .iter()
            .position(|a| a.len() <= 1)
            .ok_or(Error::NotAPath)?;
        let mut order = vec![NodeId(start)];
        let mut edges = Vec::with_capacity(instance.m());
        let mut prev = None;
        let mut cur = start;
        while let Some(&(next, e)) = adj[cur].iter().find(|(w, _)| Some(w.0) != prev) {
            order.push(next);
            edges.push(e);
            prev = Some(cur);
            cur = next.0;
        }
        Ok(PathLayout { order, edges })
    }

    pub fn position_of(&self, node: NodeId) -> Option<usize> {
        self.order.iter().position(|&v| v == node)
    }

    /// Nodes on one side of `order[center]`, outward, each with the edge
    /// leading to it from the facility's direction.
    pub fn side(&self, center: usize, side: Side) -> Vec<(NodeId, usize)> {
        match side {
            Side::Left => (0..center)
                .rev()
                .map(|i| (self.order[i], self.edges[i]))
                .collect(),
            Side::Right => (center + 1..self.order.len())
                .map(|i| (self.order[i], self.edges[i - 1]))
                .collect(),
        }
    }
}

/// Minimal budgets to cover the first q nodes on one side of the facility.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachCostTable {
    pub side: Side,
    /// `nodes[q - 1]` is the q-th node outward.
    pub nodes: Vec<NodeId>,
    /// `edges[q - 1]` joins the (q-1)-th and q-th node.
    pub edges: Vec<usize>,
    /// `costs[0] = 0`; `costs[q]` for every q that is reachable within the
    /// budget. Entries stop at the first node that is not.
    pub costs: Vec<f64>,
}

impl ReachCostTable {
    /// Number of coverable nodes on this side.
    pub fn reach(&self) -> usize {
        self.costs.len() - 1
    }

    /// The greedy reductions achieving `costs[q]`, as `(edge, delta)`.
    pub fn plan(&self, instance: &Instance, q: usize) -> Vec<(usize, f64)> {
        let edges = &self.edges[..q];
        let length: f64 = edges.iter().map(|&e| instance.edges[e].length).sum();
        let mut deficit = length - instance.radius;
        let mut sorted = edges.to_vec();
        sorted.sort_by(|&a, &b| instance.edges[a].cost.total_cmp(&instance.edges[b].cost));
        let mut out = Vec::new();
        for e in sorted {
            if deficit <= 0.0 {
                break;
            }
            let take = deficit.min(instance.edges[e].bound);
            if take > 0.0 {
                out.push((e, take));
            }
            deficit -= take;
        }
        out
    }
}

/// Builds the reach-cost table for one side of the facility at
/// `order[center]`, inserting each new edge into a cost-sorted list and
/// rerunning the greedy over it.
pub fn reach_costs(
    instance: &Instance,
    layout: &PathLayout,
    center: usize,
    side: Side,
) -> ReachCostTable {
    let outward = layout.side(center, side);
    let slack = instance.budget_slack();
    let mut table = ReachCostTable {
        side,
        nodes: Vec::new(),
        edges: Vec::new(),
        costs: vec![0.0],
    };
    // (unit cost, bound), kept sorted by cost; ties keep edge order
    let mut sorted: Vec<(f64, f64)> = Vec::with_capacity(outward.len());
    let mut length = 0.0;
    for (node, e) in outward {
        let edge = &instance.edges[e];
        length += edge.length;
        let at = sorted.partition_point(|&(c, _)| c <= edge.cost);
        sorted.insert(at, (edge.cost, edge.bound));

        let deficit = length - instance.radius;
        let cost = if deficit <= 0.0 {
            0.0
        } else {
            let mut remaining = deficit;
            let mut cost = 0.0;
            for &(c, u) in &sorted {
                if remaining <= 0.0 {
                    break;
                }
                let take = remaining.min(u);
                cost += c * take;
                remaining -= take;
            }
            if remaining > 0.0 {
                // farther nodes are unreachable too: each edge is longer
                // than its bound
                break;
            }
            cost
        };
        if cost > instance.budget + slack {
            break;
        }
        table.nodes.push(node);
        table.edges.push(e);
        table.costs.push(cost);
    }
    table
}

/// Best value for a facility at `order[center]`, with the chosen left and
/// right prefix lengths.
fn best_split(
    instance: &Instance,
    left: &ReachCostTable,
    right: &ReachCostTable,
    center_weight: f64,
) -> (f64, usize, usize) {
    let slack = instance.budget_slack();
    let prefix = |t: &ReachCostTable| -> Vec<f64> {
        std::iter::once(0.0)
            .chain(t.nodes.iter().scan(0.0, |acc, &v| {
                *acc += instance.weight(v);
                Some(*acc)
            }))
            .collect()
    };
    let wl = prefix(left);
    let wr = prefix(right);

    let mut best = (f64::NEG_INFINITY, 0, 0);
    let mut k = 0;
    for q in (0..=left.reach()).rev() {
        let rest = instance.budget - left.costs[q];
        while k < right.reach() && right.costs[k + 1] <= rest + slack {
            k += 1;
        }
        let value = center_weight + wl[q] + wr[k];
        if value > best.0 {
            best = (value, q, k);
        }
    }
    best
}

/// Exact single-facility solver on paths. Ties go to the lowest node id.
pub fn solve_path_1(instance: &Instance) -> Result<Solution> {
    ensure_valid(instance)?;
    let layout = PathLayout::from_instance(instance)?;
    if instance.facilities != 1 {
        return Err(Error::FacilityCount {
            p: instance.facilities,
            reason: "path solver handles p = 1 only",
        });
    }

    let mut best: Option<(f64, usize, usize, usize)> = None;
    for v in instance.nodes() {
        let center = layout.position_of(v).expect("every node is on the path");
        let left = reach_costs(instance, &layout, center, Side::Left);
        let right = reach_costs(instance, &layout, center, Side::Right);
        let (value, q, k) = best_split(instance, &left, &right, instance.weight(v));
        if best.is_none_or(|b| value > b.0) {
            best = Some((value, center, q, k));
        }
    }
    let (value, center, q, k) = best.expect("at least one node");

    let mut plan = UpgradePlan::for_instance(instance);
    for side in [Side::Left, Side::Right] {
        let table = reach_costs(instance, &layout, center, side);
        let take = if side == Side::Left { q } else { k };
        for (e, delta) in table.plan(instance, take) {
            plan.reductions[e] = delta;
        }
    }
    let solution = Solution::evaluate(instance, vec![layout.order[center]], plan)?;
    debug_assert!((solution.value - value).abs() <= 1e-6 * value.abs().max(1.0));
    Ok(solution)
}
