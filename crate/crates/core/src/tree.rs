//! Pseudo-polynomial single-facility solver on trees with integer data.
//!
//! The tree is rooted at the candidate facility and padded into a binary
//! tree with weight-0 auxiliary nodes joined by zero-length, zero-bound
//! spacer links, which leaves every original distance unchanged. A
//! leaves-to-root table `f(v, d, b)` then holds the best weight coverable
//! in the subtree of `v` when `v` sits at distance `d` from the facility
//! and `b` budget units are available below it.
//!
//! Moving the root to another node only touches a constant number of
//! auxiliaries, so the binary tree can be updated in place between roots
//! ([`RootingMode::Incremental`]) instead of rebuilt
//! ([`RootingMode::Fresh`]).

use crate::error::{Error, Result};
use crate::model::{ensure_valid, Instance, NodeId, Solution, UpgradePlan};

/// Attributes of a parent-child link in the binary tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub length: f64,
    pub bound: f64,
    pub cost: f64,
    /// Original edge this link carries, `None` for spacers.
    pub original: Option<usize>,
}

impl Link {
    pub const SPACER: Link = Link {
        length: 0.0,
        bound: 0.0,
        cost: 1.0,
        original: None,
    };

    fn from_edge(instance: &Instance, edge: usize) -> Link {
        let e = &instance.edges[edge];
        Link {
            length: e.length,
            bound: e.bound,
            cost: e.cost,
            original: Some(edge),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChildLink {
    pub node: usize,
    pub link: Link,
}

/// A rooted binary tree over node slots. Slots `0..n` are the original
/// nodes; higher slots are auxiliaries (weight 0) or unused.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryTree {
    pub root: usize,
    pub weights: Vec<f64>,
    /// `Some([left, right])` for internal nodes, `None` for leaves and
    /// unused slots.
    pub children: Vec<Option<[ChildLink; 2]>>,
    /// Live nodes, children before parents.
    pub postorder: Vec<usize>,
    /// Number of original nodes.
    pub original_nodes: usize,
    /// Number of original edges, for plan reconstruction.
    pub original_edges: usize,
}

impl BinaryTree {
    pub fn node_count(&self) -> usize {
        self.postorder.len()
    }

    pub fn is_auxiliary(&self, node: usize) -> bool {
        node >= self.original_nodes
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.children[node].is_none()
    }
}

/// Unrooted form of the binary tree, kept so that the root can be moved.
/// Every non-root node has degree 1 or 3 and the root has degree 2
/// (or 0 for a single node).
#[derive(Debug, Clone)]
pub struct Rerooter {
    root: usize,
    weights: Vec<f64>,
    adj: Vec<Vec<(usize, Link)>>,
    alive: Vec<bool>,
    free: Vec<usize>,
    original_nodes: usize,
    original_edges: usize,
    /// Auxiliary added when the current root was made binary.
    root_aux: Option<usize>,
}

impl Rerooter {
    /// Pads the tree rooted at `root`: a single child gets a weight-0
    /// sibling; children `b1..br` with `r >= 3` keep `b1` and hang `b2..br`
    /// off a chain of auxiliaries `a2..a(r-1)`.
    pub fn new(instance: &Instance, root: NodeId) -> Result<Self> {
        if !instance.is_tree() {
            return Err(Error::NotATree);
        }
        let n = instance.n();
        if root.0 >= n {
            return Err(Error::UnknownNode(root.0));
        }
        let adj_in = instance.adjacency();
        let mut this = Rerooter {
            root: root.0,
            weights: instance.weights.clone(),
            adj: vec![Vec::new(); n],
            alive: vec![true; n],
            free: Vec::new(),
            original_nodes: n,
            original_edges: instance.m(),
            root_aux: None,
        };

        let mut stack = vec![(root.0, usize::MAX)];
        while let Some((v, parent)) = stack.pop() {
            let kids: Vec<(usize, Link)> = adj_in[v]
                .iter()
                .filter(|(w, _)| w.0 != parent)
                .map(|&(w, e)| (w.0, Link::from_edge(instance, e)))
                .collect();
            for &(w, _) in &kids {
                stack.push((w, v));
            }
            match kids.len() {
                0 => {}
                1 => {
                    this.connect(v, kids[0].0, kids[0].1);
                    let pad = this.alloc();
                    this.connect(v, pad, Link::SPACER);
                }
                2 => {
                    for (w, link) in kids {
                        this.connect(v, w, link);
                    }
                }
                r => {
                    this.connect(v, kids[0].0, kids[0].1);
                    let mut hub = this.alloc();
                    this.connect(v, hub, Link::SPACER);
                    for &(w, link) in &kids[1..r - 2] {
                        this.connect(hub, w, link);
                        let next = this.alloc();
                        this.connect(hub, next, Link::SPACER);
                        hub = next;
                    }
                    for &(w, link) in &kids[r - 2..] {
                        this.connect(hub, w, link);
                    }
                }
            }
        }
        Ok(this)
    }

    fn alloc(&mut self) -> usize {
        if let Some(slot) = self.free.pop() {
            self.alive[slot] = true;
            self.weights[slot] = 0.0;
            slot
        } else {
            self.weights.push(0.0);
            self.adj.push(Vec::new());
            self.alive.push(true);
            self.weights.len() - 1
        }
    }

    fn release(&mut self, slot: usize) {
        debug_assert!(self.adj[slot].is_empty());
        self.alive[slot] = false;
        self.free.push(slot);
    }

    fn connect(&mut self, a: usize, b: usize, link: Link) {
        self.adj[a].push((b, link));
        self.adj[b].push((a, link));
    }

    fn disconnect(&mut self, a: usize, b: usize) -> Link {
        let i = self.adj[a]
            .iter()
            .position(|&(w, _)| w == b)
            .expect("linked");
        let (_, link) = self.adj[a].remove(i);
        let j = self.adj[b]
            .iter()
            .position(|&(w, _)| w == a)
            .expect("linked");
        self.adj[b].remove(j);
        link
    }

    fn is_pad_leaf(&self, v: usize) -> bool {
        v >= self.original_nodes && self.adj[v].len() == 1
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Moves the root to `new_root`, touching at most two auxiliaries.
    pub fn reroot(&mut self, new_root: NodeId) -> Result<()> {
        let target = new_root.0;
        if target >= self.original_nodes {
            return Err(Error::UnknownNode(target));
        }
        if target == self.root {
            return Ok(());
        }

        // The old root becomes an ordinary node of degree 1 or 3.
        let old = self.root;
        match self.root_aux.take() {
            Some(aux) if self.adj[aux].len() == 3 => {
                // undo the split: reattach the two grouped neighbours
                self.disconnect(old, aux);
                let moved: Vec<(usize, Link)> = self.adj[aux].clone();
                for (w, _) in &moved {
                    self.disconnect(aux, *w);
                }
                for (w, link) in moved {
                    self.connect(old, w, link);
                }
                self.release(aux);
            }
            Some(aux) => {
                self.disconnect(old, aux);
                self.release(aux);
            }
            None if self.adj[old].len() == 2 => {
                if let Some(&(pad, _)) = self.adj[old].iter().find(|(w, _)| self.is_pad_leaf(*w)) {
                    self.disconnect(old, pad);
                    self.release(pad);
                } else {
                    let pad = self.alloc();
                    self.connect(old, pad, Link::SPACER);
                }
            }
            None => {}
        }

        // The new root needs exactly two neighbours.
        self.root = target;
        match self.adj[target].len() {
            1 => {
                let pad = self.alloc();
                self.connect(target, pad, Link::SPACER);
                self.root_aux = Some(pad);
            }
            3 => {
                let hub = self.alloc();
                let grouped: Vec<usize> = self.adj[target][1..].iter().map(|&(w, _)| w).collect();
                for w in grouped {
                    let link = self.disconnect(target, w);
                    self.connect(hub, w, link);
                }
                self.connect(target, hub, Link::SPACER);
                self.root_aux = Some(hub);
            }
            _ => {}
        }
        Ok(())
    }

    /// The binary tree hanging from the current root.
    pub fn rooted(&self) -> BinaryTree {
        let slots = self.weights.len();
        let mut children = vec![None; slots];
        let mut preorder = Vec::new();
        let mut stack = vec![(self.root, usize::MAX)];
        while let Some((v, parent)) = stack.pop() {
            preorder.push(v);
            let kids: Vec<ChildLink> = self.adj[v]
                .iter()
                .filter(|(w, _)| *w != parent)
                .map(|&(node, link)| ChildLink { node, link })
                .collect();
            assert!(
                kids.is_empty() || kids.len() == 2,
                "node {v} has {} children",
                kids.len()
            );
            for c in kids.iter().rev() {
                stack.push((c.node, v));
            }
            if kids.len() == 2 {
                children[v] = Some([kids[0], kids[1]]);
            }
        }
        preorder.reverse();
        BinaryTree {
            root: self.root,
            weights: self.weights.clone(),
            children,
            postorder: preorder,
            original_nodes: self.original_nodes,
            original_edges: self.original_edges,
        }
    }

    pub fn live_nodes(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }
}

/// Binary conversion of a tree rooted at `root`.
pub fn to_binary(instance: &Instance, root: NodeId) -> Result<BinaryTree> {
    Ok(Rerooter::new(instance, root)?.rooted())
}

/// Decision recorded for an internal `(node, d, b)` entry.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Choice {
    pub delta_left: u32,
    pub delta_right: u32,
    /// Budget passed down into the left subtree, after paying for the link.
    pub budget_left: u32,
    pub budget_right: u32,
}

/// `f(v, d, b)` for every live node, `d in 0..=R`, `b in 0..=B`; larger
/// distances are implicitly zero.
#[derive(Debug, Clone)]
pub struct DpTable {
    radius: usize,
    budget: usize,
    values: Vec<Vec<i64>>,
    choices: Vec<Vec<Choice>>,
}

impl DpTable {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn slot(&self, d: usize, b: usize) -> usize {
        d * (self.budget + 1) + b
    }

    /// `f(node, d, b)`; zero beyond the radius.
    pub fn value(&self, node: usize, d: i64, b: usize) -> i64 {
        assert!(b <= self.budget, "budget {b} out of range");
        if d < 0 || d as usize > self.radius {
            return 0;
        }
        self.values[node][self.slot(d as usize, b)]
    }

    pub fn choice(&self, node: usize, d: usize, b: usize) -> Option<Choice> {
        self.choices[node].get(self.slot(d, b)).copied()
    }
}

struct IntLink {
    length: i64,
    bound: i64,
    cost: i64,
}

fn int_link(link: &Link) -> IntLink {
    IntLink {
        length: link.length as i64,
        bound: link.bound as i64,
        cost: link.cost as i64,
    }
}

fn check_integer(instance: &Instance) -> Result<()> {
    if !instance.integer || !instance.has_integer_values() {
        return Err(Error::NonIntegerInstance);
    }
    Ok(())
}

/// Best `f(child, d + length - delta, budget - cost * delta)` over the
/// link's reductions affordable with `budget`; smallest delta on ties.
fn best_through(
    child: &[i64],
    link: &IntLink,
    d: usize,
    budget: usize,
    radius: usize,
    width: usize,
) -> (i64, usize) {
    let max_delta = (link.bound as usize).min(budget / link.cost as usize);
    let mut best = (0, 0);
    for delta in 0..=max_delta {
        let nd = d as i64 + link.length - delta as i64;
        if nd > radius as i64 {
            continue;
        }
        let rest = budget - delta * link.cost as usize;
        let v = child[nd as usize * width + rest];
        if v > best.0 {
            best = (v, delta);
        }
    }
    best
}

/// Fills the table leaves to root.
pub fn dp_solve(btree: &BinaryTree, instance: &Instance) -> Result<DpTable> {
    check_integer(instance)?;
    let radius = instance.radius as usize;
    let budget = instance.budget as usize;
    let width = budget + 1;
    let size = (radius + 1) * width;
    let slots = btree.weights.len();
    let mut values: Vec<Vec<i64>> = vec![Vec::new(); slots];
    let mut choices: Vec<Vec<Choice>> = vec![Vec::new(); slots];

    for &v in &btree.postorder {
        let w = btree.weights[v] as i64;
        let Some([left, right]) = btree.children[v] else {
            values[v] = vec![w; size];
            continue;
        };
        let (ll, rl) = (int_link(&left.link), int_link(&right.link));
        let mut vals = vec![0i64; size];
        let mut chs = vec![Choice::default(); size];
        {
            let fl = &values[left.node];
            let fr = &values[right.node];
            for d in 0..=radius {
                for b in 0..=budget {
                    let mut best = -1i64;
                    let mut choice = Choice::default();
                    // x: total budget sent towards the left child, largest first
                    for x in (0..=b).rev() {
                        let (lv, ld) = best_through(fl, &ll, d, x, radius, width);
                        let (rv, rd) = best_through(fr, &rl, d, b - x, radius, width);
                        if lv + rv > best {
                            best = lv + rv;
                            choice = Choice {
                                delta_left: ld as u32,
                                delta_right: rd as u32,
                                budget_left: (x - ld * ll.cost as usize) as u32,
                                budget_right: (b - x - rd * rl.cost as usize) as u32,
                            };
                        }
                    }
                    vals[d * width + b] = w + best;
                    chs[d * width + b] = choice;
                }
            }
        }
        values[v] = vals;
        choices[v] = chs;
    }

    Ok(DpTable {
        radius,
        budget,
        values,
        choices,
    })
}

/// Walks the recorded choices from `(root, 0, B)` and maps link reductions
/// back to original edges.
pub fn reconstruct(table: &DpTable, btree: &BinaryTree) -> UpgradePlan {
    let mut plan = UpgradePlan::zero(btree.original_edges);
    let mut stack = vec![(btree.root, 0i64, table.budget)];
    while let Some((v, d, b)) = stack.pop() {
        if d as usize > table.radius {
            continue;
        }
        let Some([left, right]) = btree.children[v] else {
            continue;
        };
        let c = table
            .choice(v, d as usize, b)
            .expect("internal node has choices");
        for (child, delta, budget) in [
            (left, c.delta_left, c.budget_left),
            (right, c.delta_right, c.budget_right),
        ] {
            let nd = d + child.link.length as i64 - delta as i64;
            if nd as usize > table.radius {
                continue;
            }
            if let Some(e) = child.link.original {
                plan.reductions[e] = delta as f64;
            }
            stack.push((child.node, nd, budget as usize));
        }
    }
    plan
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootingMode {
    /// Convert the tree from scratch for every root.
    Fresh,
    /// Update one binary tree in place while moving the root.
    #[default]
    Incremental,
}

/// Exact single-facility solver on integer trees.
pub fn solve_tree_1(instance: &Instance) -> Result<Solution> {
    solve_tree_1_with(instance, RootingMode::default())
}

pub fn solve_tree_1_with(instance: &Instance, mode: RootingMode) -> Result<Solution> {
    ensure_valid(instance)?;
    if !instance.is_tree() {
        return Err(Error::NotATree);
    }
    check_integer(instance)?;
    if instance.facilities != 1 {
        return Err(Error::FacilityCount {
            p: instance.facilities,
            reason: "tree solver handles p = 1 only",
        });
    }

    let mut rerooter = Rerooter::new(instance, NodeId(0))?;
    let mut best: Option<(i64, NodeId, UpgradePlan)> = None;
    for v in instance.nodes() {
        let btree = match mode {
            RootingMode::Fresh => to_binary(instance, v)?,
            RootingMode::Incremental => {
                rerooter.reroot(v)?;
                rerooter.rooted()
            }
        };
        let table = dp_solve(&btree, instance)?;
        let value = table.value(btree.root, 0, table.budget());
        if best.as_ref().is_none_or(|b| value > b.0) {
            best = Some((value, v, reconstruct(&table, &btree)));
        }
    }
    let (value, facility, plan) = best.expect("at least one node");
    let solution = Solution::evaluate(instance, vec![facility], plan)?;
    debug_assert_eq!(solution.value, value as f64);
    Ok(solution)
}
