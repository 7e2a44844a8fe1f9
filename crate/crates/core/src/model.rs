//! Instances, upgrade plans and coverage evaluation.
//!
//! Every number is stored as `f64`. Instances flagged as integer carry
//! integral values only, so sums and comparisons on them are exact; the
//! integer solvers convert to `i64` after checking the flag.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Absolute slack used when comparing distances on non-integer instances.
pub const COVER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected edge with its upgrade parameters `(length, bound, cost)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub length: f64,
    /// Maximal length reduction, `0 <= bound < length`.
    pub bound: f64,
    /// Budget units per unit of reduction.
    pub cost: f64,
}

impl Edge {
    pub fn new(a: usize, b: usize, length: f64, bound: f64, cost: f64) -> Self {
        Edge {
            a: NodeId(a),
            b: NodeId(b),
            length,
            bound,
            cost,
        }
    }

    pub fn other(&self, node: NodeId) -> NodeId {
        if self.a == node {
            self.b
        } else {
            self.a
        }
    }

    /// Shortest length this edge can reach under any feasible upgrade.
    pub fn min_length(&self) -> f64 {
        self.length - self.bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub weights: Vec<f64>,
    pub edges: Vec<Edge>,
    pub radius: f64,
    pub budget: f64,
    pub facilities: usize,
    pub integer: bool,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n()).map(NodeId)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn weight(&self, node: NodeId) -> f64 {
        self.weights[node.0]
    }

    /// Adjacency lists of `(neighbour, edge index)`, sorted by neighbour.
    /// Edges with out-of-range endpoints are skipped.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, usize)>> {
        let n = self.n();
        let mut adj = vec![Vec::new(); n];
        for (idx, e) in self.edges.iter().enumerate() {
            if e.a.0 < n && e.b.0 < n && e.a != e.b {
                adj[e.a.0].push((e.b, idx));
                adj[e.b.0].push((e.a, idx));
            }
        }
        for list in &mut adj {
            list.sort();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(Vec::len).collect()
    }

    /// Index of the edge joining `a` and `b`, in either orientation.
    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w.0] {
                    seen[w.0] = true;
                    count += 1;
                    stack.push(w.0);
                }
            }
        }
        count == n
    }

    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.m() + 1 == self.n() && self.is_connected()
    }

    pub fn has_uniform_weights(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1])
    }

    /// Whether all parameters are integral (and costs, radius positive),
    /// independently of the stored flag.
    pub fn has_integer_values(&self) -> bool {
        let int = |x: f64| x.is_finite() && x.fract() == 0.0;
        int(self.radius)
            && int(self.budget)
            && self.weights.iter().all(|&w| int(w))
            && self
                .edges
                .iter()
                .all(|e| int(e.length) && int(e.bound) && int(e.cost))
    }

    /// An edge whose shortest reachable length still exceeds the radius can
    /// never be crossed by a covering path.
    pub fn is_uncrossable(&self, edge: usize) -> bool {
        self.edges[edge].min_length() > self.radius
    }

    pub fn uncrossable_edges(&self) -> Vec<usize> {
        (0..self.m()).filter(|&e| self.is_uncrossable(e)).collect()
    }

    /// Coverage test `d <= R`, exact on integer instances.
    pub fn within_radius(&self, distance: f64) -> bool {
        if self.integer {
            distance <= self.radius
        } else {
            distance <= self.radius + COVER_TOLERANCE
        }
    }

    pub(crate) fn budget_slack(&self) -> f64 {
        if self.integer {
            0.0
        } else {
            COVER_TOLERANCE * self.budget.max(1.0)
        }
    }
}

/// A single invariant violation reported by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoNodes,
    NegativeWeight { node: usize },
    NonFinite { field: &'static str },
    EndpointOutOfRange { edge: usize },
    SelfLoop { edge: usize },
    ParallelEdge { edge: usize, first: usize },
    NegativeBound { edge: usize },
    BoundNotLessThanLength { edge: usize },
    NonPositiveCost { edge: usize },
    NonPositiveRadius,
    NegativeBudget,
    FacilityCount { p: usize, n: usize },
    NotIntegral { field: &'static str },
    Disconnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoNodes => write!(f, "nodes: instance has no nodes"),
            Violation::NegativeWeight { node } => write!(f, "weight of node {node}: negative"),
            Violation::NonFinite { field } => write!(f, "{field}: not a finite number"),
            Violation::EndpointOutOfRange { edge } => {
                write!(f, "edge {edge}: endpoint out of range")
            }
            Violation::SelfLoop { edge } => write!(f, "edge {edge}: endpoints not distinct"),
            Violation::ParallelEdge { edge, first } => {
                write!(f, "edge {edge}: duplicates edge {first}")
            }
            Violation::NegativeBound { edge } => write!(f, "edge {edge}: bound negative"),
            Violation::BoundNotLessThanLength { edge } => {
                write!(f, "edge {edge}: bound not < length")
            }
            Violation::NonPositiveCost { edge } => write!(f, "edge {edge}: cost not positive"),
            Violation::NonPositiveRadius => write!(f, "radius: not positive"),
            Violation::NegativeBudget => write!(f, "budget: negative"),
            Violation::FacilityCount { p, n } => {
                write!(f, "facilities: p = {p} outside [1, {n}]")
            }
            Violation::NotIntegral { field } => {
                write!(f, "{field}: integer flag set but value not integral")
            }
            Violation::Disconnected => write!(f, "graph: disconnected"),
        }
    }
}

/// Checks every structural and numeric invariant; an empty list means valid.
pub fn validate(instance: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = instance.n();
    if n == 0 {
        out.push(Violation::NoNodes);
        return out;
    }
    for (node, &w) in instance.weights.iter().enumerate() {
        if !w.is_finite() {
            out.push(Violation::NonFinite { field: "weight" });
        } else if w < 0.0 {
            out.push(Violation::NegativeWeight { node });
        }
    }
    if !instance.radius.is_finite() {
        out.push(Violation::NonFinite { field: "radius" });
    } else if instance.radius <= 0.0 {
        out.push(Violation::NonPositiveRadius);
    }
    if !instance.budget.is_finite() {
        out.push(Violation::NonFinite { field: "budget" });
    } else if instance.budget < 0.0 {
        out.push(Violation::NegativeBudget);
    }
    if instance.facilities == 0 || instance.facilities > n {
        out.push(Violation::FacilityCount {
            p: instance.facilities,
            n,
        });
    }

    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (idx, e) in instance.edges.iter().enumerate() {
        if e.a.0 >= n || e.b.0 >= n {
            out.push(Violation::EndpointOutOfRange { edge: idx });
            continue;
        }
        if e.a == e.b {
            out.push(Violation::SelfLoop { edge: idx });
            continue;
        }
        let key = (e.a.0.min(e.b.0), e.a.0.max(e.b.0));
        if let Some(&first) = seen.get(&key) {
            out.push(Violation::ParallelEdge { edge: idx, first });
        } else {
            seen.insert(key, idx);
        }
        if !(e.length.is_finite() && e.bound.is_finite() && e.cost.is_finite()) {
            out.push(Violation::NonFinite { field: "edge" });
            continue;
        }
        if e.bound < 0.0 {
            out.push(Violation::NegativeBound { edge: idx });
        }
        if e.bound >= e.length {
            out.push(Violation::BoundNotLessThanLength { edge: idx });
        }
        if e.cost <= 0.0 {
            out.push(Violation::NonPositiveCost { edge: idx });
        }
    }

    if instance.integer {
        let int = |x: f64| x.fract() == 0.0;
        if !instance.weights.iter().all(|&w| int(w)) {
            out.push(Violation::NotIntegral { field: "weight" });
        }
        if !int(instance.radius) {
            out.push(Violation::NotIntegral { field: "radius" });
        }
        if !int(instance.budget) {
            out.push(Violation::NotIntegral { field: "budget" });
        }
        if !instance.edges.iter().all(|e| int(e.length) && int(e.bound)) {
            out.push(Violation::NotIntegral {
                field: "edge length/bound",
            });
        }
        if !instance.edges.iter().all(|e| int(e.cost)) {
            out.push(Violation::NotIntegral { field: "edge cost" });
        }
    }

    if !instance.is_connected() {
        out.push(Violation::Disconnected);
    }
    out
}

pub(crate) fn ensure_valid(instance: &Instance) -> Result<()> {
    let violations = validate(instance);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidInstance(violations))
    }
}

/// What [`normalize_with_report`] changed or tagged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormalizeReport {
    /// `(edge, old bound, new bound)` for every capped bound.
    pub capped: Vec<(usize, f64, f64)>,
    pub uncrossable: Vec<usize>,
}

/// Caps every bound at what the budget can pay for. Edges that stay longer
/// than the radius after full reduction are kept and reported as
/// uncrossable.
pub fn normalize(instance: &Instance) -> Result<Instance> {
    normalize_with_report(instance).map(|(inst, _)| inst)
}

pub fn normalize_with_report(instance: &Instance) -> Result<(Instance, NormalizeReport)> {
    ensure_valid(instance)?;
    let mut out = instance.clone();
    let mut report = NormalizeReport::default();
    for (idx, e) in out.edges.iter_mut().enumerate() {
        let mut affordable = instance.budget / e.cost;
        if instance.integer {
            affordable = affordable.floor();
        }
        if e.bound > affordable {
            report.capped.push((idx, e.bound, affordable));
            e.bound = affordable;
        }
    }
    report.uncrossable = out.uncrossable_edges();
    Ok((out, report))
}

/// Per-edge length reductions, indexed like `Instance::edges`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpgradePlan {
    pub reductions: Vec<f64>,
}

impl UpgradePlan {
    pub fn zero(m: usize) -> Self {
        UpgradePlan {
            reductions: vec![0.0; m],
        }
    }

    pub fn for_instance(instance: &Instance) -> Self {
        Self::zero(instance.m())
    }

    pub fn cost(&self, instance: &Instance) -> f64 {
        self.reductions
            .iter()
            .zip(&instance.edges)
            .map(|(d, e)| d * e.cost)
            .sum()
    }

    pub fn is_feasible(&self, instance: &Instance) -> bool {
        self.reductions.len() == instance.m()
            && self
                .reductions
                .iter()
                .zip(&instance.edges)
                .all(|(&d, e)| d >= 0.0 && d <= e.bound + instance.budget_slack())
            && self.cost(instance) <= instance.budget + instance.budget_slack()
    }

    /// Edges with a nonzero reduction, in edge order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.reductions
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, d)| d != 0.0)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source shortest distances under the reduced lengths `length - delta`.
/// Unreachable nodes get `f64::INFINITY`.
pub fn shortest_distances(instance: &Instance, plan: &UpgradePlan, sources: &[NodeId]) -> Vec<f64> {
    let adj = instance.adjacency();
    let mut dist = vec![f64::INFINITY; instance.n()];
    let mut heap = BinaryHeap::new();
    for s in sources {
        dist[s.0] = 0.0;
        heap.push(HeapItem(0.0, s.0));
    }
    while let Some(HeapItem(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(w, e) in &adj[v] {
            let len = instance.edges[e].length - plan.reductions[e];
            let nd = d + len;
            if nd < dist[w.0] {
                dist[w.0] = nd;
                heap.push(HeapItem(nd, w.0));
            }
        }
    }
    dist
}

/// Shortest-path length between `i` and `j` after applying `plan`.
pub fn distance(instance: &Instance, plan: &UpgradePlan, i: NodeId, j: NodeId) -> f64 {
    shortest_distances(instance, plan, &[i])[j.0]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coverage {
    pub covered: Vec<NodeId>,
    pub value: f64,
}

/// Nodes within the radius of some facility after `plan`, and their weight.
pub fn coverage(
    instance: &Instance,
    facilities: &[NodeId],
    plan: &UpgradePlan,
) -> Result<Coverage> {
    if facilities.is_empty() {
        return Err(Error::EmptyFacilitySet);
    }
    if let Some(bad) = facilities.iter().find(|x| x.0 >= instance.n()) {
        return Err(Error::UnknownNode(bad.0));
    }
    let dist = shortest_distances(instance, plan, facilities);
    let covered: Vec<NodeId> = instance
        .nodes()
        .filter(|v| instance.within_radius(dist[v.0]))
        .collect();
    let value = covered.iter().map(|&v| instance.weight(v)).sum();
    Ok(Coverage { covered, value })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub facilities: Vec<NodeId>,
    pub plan: UpgradePlan,
    pub covered: Vec<NodeId>,
    pub value: f64,
}

impl Solution {
    /// Builds a solution whose covered set and value come from [`coverage`].
    pub fn evaluate(
        instance: &Instance,
        mut facilities: Vec<NodeId>,
        plan: UpgradePlan,
    ) -> Result<Self> {
        facilities.sort();
        facilities.dedup();
        let cov = coverage(instance, &facilities, &plan)?;
        Ok(Solution {
            facilities,
            plan,
            covered: cov.covered,
            value: cov.value,
        })
    }

    /// Re-evaluates the stored facilities and plan and compares exactly.
    pub fn is_consistent(&self, instance: &Instance) -> bool {
        self.plan.is_feasible(instance)
            && coverage(instance, &self.facilities, &self.plan)
                .map(|c| c.covered == self.covered && c.value == self.value)
                .unwrap_or(false)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn single_node() -> Instance {
        Instance {
            weights: vec![3.0],
            edges: vec![],
            radius: 1.0,
            budget: 1.0,
            facilities: 1,
            integer: true,
        }
    }

    #[test]
    fn single_node_is_valid() {
        assert!(validate(&single_node()).is_empty());
    }

    #[test]
    fn bound_equal_to_length_is_rejected() {
        let mut inst = seven_node_tree();
        inst.edges[2].bound = 2.0;
        let v = validate(&inst);
        assert_eq!(v, vec![Violation::BoundNotLessThanLength { edge: 2 }]);
        assert_eq!(v[0].to_string(), "edge 2: bound not < length");
    }

    #[test]
    fn two_components_are_rejected() {
        let inst = Instance {
            weights: vec![1.0; 4],
            edges: vec![
                Edge::new(0, 1, 2.0, 1.0, 1.0),
                Edge::new(2, 3, 2.0, 1.0, 1.0),
            ],
            radius: 1.0,
            budget: 1.0,
            facilities: 1,
            integer: true,
        };
        assert_eq!(validate(&inst), vec![Violation::Disconnected]);
    }

    #[test]
    fn structural_violations() {
        let mut inst = seven_node_tree();
        inst.edges.push(Edge::new(1, 0, 3.0, 1.0, 1.0));
        inst.edges.push(Edge::new(4, 4, 3.0, 1.0, 1.0));
        inst.edges.push(Edge::new(4, 9, 3.0, 1.0, 1.0));
        inst.edges[0].cost = 0.0;
        inst.radius = 1.5;
        let v = validate(&inst);
        assert!(v.contains(&Violation::ParallelEdge { edge: 6, first: 0 }));
        assert!(v.contains(&Violation::SelfLoop { edge: 7 }));
        assert!(v.contains(&Violation::EndpointOutOfRange { edge: 8 }));
        assert!(v.contains(&Violation::NonPositiveCost { edge: 0 }));
        assert!(v.contains(&Violation::NotIntegral { field: "radius" }));
    }

    fn one_edge(length: f64, bound: f64, cost: f64, radius: f64, budget: f64) -> Instance {
        Instance {
            weights: vec![1.0, 1.0],
            edges: vec![Edge::new(0, 1, length, bound, cost)],
            radius,
            budget,
            facilities: 1,
            integer: true,
        }
    }

    #[test]
    fn normalize_caps_bound_by_budget() {
        let n = normalize(&one_edge(5.0, 3.0, 2.0, 10.0, 4.0)).unwrap();
        assert_eq!(n.edges[0].bound, 2.0);
        let n = normalize(&one_edge(5.0, 3.0, 1.0, 10.0, 4.0)).unwrap();
        assert_eq!(n.edges[0].bound, 3.0);
        // integer instances take the floor
        let n = normalize(&one_edge(5.0, 3.0, 3.0, 10.0, 4.0)).unwrap();
        assert_eq!(n.edges[0].bound, 1.0);
    }

    #[test]
    fn normalize_tags_uncrossable_edges() {
        let (n, report) = normalize_with_report(&one_edge(9.0, 3.0, 1.0, 4.0, 10.0)).unwrap();
        assert!(n.is_uncrossable(0));
        assert_eq!(report.uncrossable, vec![0]);
        assert_eq!(n.m(), 1);
    }

    #[test]
    fn normalize_is_idempotent() {
        let inst = one_edge(5.0, 3.0, 2.0, 1.0, 4.0);
        let once = normalize(&inst).unwrap();
        assert_eq!(normalize(&once).unwrap(), once);
    }

    #[test]
    fn normalize_rejects_invalid() {
        assert!(matches!(
            normalize(&one_edge(3.0, 3.0, 1.0, 1.0, 1.0)),
            Err(Error::InvalidInstance(_))
        ));
    }

    #[test]
    fn seven_node_tree_distances() {
        let inst = seven_node_tree();
        let zero = UpgradePlan::for_instance(&inst);
        assert_eq!(distance(&inst, &zero, NodeId(0), NodeId(3)), 4.0);
        for v in inst.nodes() {
            assert_eq!(distance(&inst, &zero, v, v), 0.0);
        }
        let plan = left_branch_plan(&inst);
        assert_eq!(distance(&inst, &plan, NodeId(0), NodeId(3)), 2.0);
        assert_eq!(distance(&inst, &plan, NodeId(3), NodeId(0)), 2.0);
    }

    #[test]
    fn seven_node_tree_coverage() {
        let inst = seven_node_tree();
        let plan = left_branch_plan(&inst);
        assert!(plan.is_feasible(&inst));
        let c = coverage(&inst, &[NodeId(0)], &plan).unwrap();
        assert_eq!(c.covered, (0..5).map(NodeId).collect::<Vec<_>>());
        assert_eq!(c.value, 7.0);

        let c = coverage(&inst, &[NodeId(0)], &UpgradePlan::for_instance(&inst)).unwrap();
        assert_eq!(c.covered, vec![NodeId(0), NodeId(1), NodeId(2)]);
        assert_eq!(c.value, 4.0);
    }

    #[test]
    fn coverage_single_node_and_errors() {
        let inst = single_node();
        let c = coverage(&inst, &[NodeId(0)], &UpgradePlan::zero(0)).unwrap();
        assert_eq!((c.covered, c.value), (vec![NodeId(0)], 3.0));
        assert_eq!(
            coverage(&inst, &[], &UpgradePlan::zero(0)),
            Err(Error::EmptyFacilitySet)
        );
    }

    #[test]
    fn plan_feasibility() {
        let inst = seven_node_tree();
        let mut plan = left_branch_plan(&inst);
        assert_eq!(plan.cost(&inst), 3.0);
        plan.reductions[5] = 1.0;
        assert!(!plan.is_feasible(&inst));
        plan.reductions[5] = 0.0;
        plan.reductions[0] = 1.5;
        assert!(!plan.is_feasible(&inst));
    }
}
