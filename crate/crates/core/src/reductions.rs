//! KNAPSACK gadgets for the star and path hardness constructions.
//!
//! Both gadgets use unit costs, a common bound `u = max g_i`, radius
//! `R = u + 1` and budget `B = K`. A heavy node of weight `W > sum b_i`
//! must be covered by every facility, and the light node of item `i` is
//! covered exactly when its edge is shortened by at least `g_i`, which
//! turns the budget into the knapsack capacity.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::{content_lines, field, format_number};
use crate::model::{coverage, Edge, Instance, NodeId, Solution};

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    /// `(weight g_i, value b_i)`
    pub items: Vec<(u64, u64)>,
    pub capacity: u64,
    pub target: f64,
}

impl KnapsackInstance {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidKnapsack(msg));
        if self.capacity == 0 {
            return bad("capacity must be positive".into());
        }
        if !(self.target.is_finite() && self.target > 0.0) {
            return bad("target must be positive".into());
        }
        for (i, &(g, b)) in self.items.iter().enumerate() {
            if g == 0 || b == 0 {
                return bad(format!("item {i}: weight and value must be positive"));
            }
            if g > self.capacity {
                return bad(format!("item {i}: weight {g} exceeds capacity"));
            }
        }
        Ok(())
    }

    pub fn total_value(&self) -> u64 {
        self.items.iter().map(|&(_, b)| b).sum()
    }

    /// Weight of the heavy nodes, the smallest integer above the total value.
    pub fn heavy_weight(&self) -> u64 {
        self.total_value() + 1
    }

    fn max_item_weight(&self) -> u64 {
        self.items.iter().map(|&(g, _)| g).max().unwrap_or(0)
    }

    pub fn is_solution(&self, chosen: &BTreeSet<usize>) -> bool {
        let (g, b) = chosen.iter().fold((0, 0), |(g, b), &i| {
            (g + self.items[i].0, b + self.items[i].1)
        });
        g <= self.capacity && b as f64 >= self.target
    }
}

/// Text form: `n K U`, then `g_i b_i` per item.
pub fn parse_knapsack(text: &str) -> Result<KnapsackInstance> {
    let mut lines = content_lines(text);
    let (ln, head) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty knapsack file"))?;
    if head.len() != 3 {
        return Err(Error::parse(ln, "expected 'n K U'"));
    }
    let n: usize = field(ln, head[0], "n")?;
    let capacity = field(ln, head[1], "K")?;
    let target = field(ln, head[2], "U")?;
    let mut items = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, t) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "missing item line"))?;
        if t.len() != 2 {
            return Err(Error::parse(ln, "expected 'g b'"));
        }
        items.push((field(ln, t[0], "g")?, field(ln, t[1], "b")?));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "trailing content"));
    }
    let ks = KnapsackInstance {
        items,
        capacity,
        target,
    };
    ks.validate()?;
    Ok(ks)
}

pub fn write_knapsack(ks: &KnapsackInstance) -> String {
    let mut out = format!(
        "{} {} {}\n",
        ks.items.len(),
        ks.capacity,
        format_number(ks.target)
    );
    for &(g, b) in &ks.items {
        writeln!(out, "{g} {b}").unwrap();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gadget {
    Star,
    Path,
}

/// A gadget instance with its decision threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetInstance {
    pub kind: Gadget,
    pub instance: Instance,
    pub threshold: f64,
}

impl GadgetInstance {
    pub fn facilities(&self) -> usize {
        self.instance.facilities
    }
}

/// Star with center 0 of weight `W` and satellite `i + 1` of weight `b_i`
/// on an edge of length `R + g_i`. Threshold `W + U`.
pub fn knapsack_to_star(ks: &KnapsackInstance) -> Result<GadgetInstance> {
    ks.validate()?;
    let u = ks.max_item_weight() as f64;
    let radius = u + 1.0;
    let heavy = ks.heavy_weight() as f64;
    let mut weights = vec![heavy];
    weights.extend(ks.items.iter().map(|&(_, b)| b as f64));
    let edges = ks
        .items
        .iter()
        .enumerate()
        .map(|(i, &(g, _))| Edge::new(0, i + 1, radius + g as f64, u, 1.0))
        .collect();
    Ok(GadgetInstance {
        kind: Gadget::Star,
        instance: Instance {
            weights,
            edges,
            radius,
            budget: ks.capacity as f64,
            facilities: 1,
            integer: true,
        },
        threshold: heavy + ks.target,
    })
}

/// Path of `2n` nodes alternating heavy (even index here) and item nodes;
/// item edges have length `R + g_k`, connectors `2R`. `p = n`, threshold
/// `nW + U`.
pub fn knapsack_to_path(ks: &KnapsackInstance) -> Result<GadgetInstance> {
    ks.validate()?;
    let n = ks.items.len();
    if n == 0 {
        return Err(Error::InvalidKnapsack(
            "path gadget needs at least one item".into(),
        ));
    }
    let u = ks.max_item_weight() as f64;
    let radius = u + 1.0;
    let heavy = ks.heavy_weight() as f64;
    let mut weights = Vec::with_capacity(2 * n);
    let mut edges = Vec::with_capacity(2 * n - 1);
    for (k, &(g, b)) in ks.items.iter().enumerate() {
        weights.push(heavy);
        weights.push(b as f64);
        edges.push(Edge::new(2 * k, 2 * k + 1, radius + g as f64, u, 1.0));
        if k + 1 < n {
            edges.push(Edge::new(2 * k + 1, 2 * k + 2, 2.0 * radius, u, 1.0));
        }
    }
    Ok(GadgetInstance {
        kind: Gadget::Path,
        instance: Instance {
            weights,
            edges,
            radius,
            budget: ks.capacity as f64,
            facilities: n,
            integer: true,
        },
        threshold: n as f64 * heavy + ks.target,
    })
}

/// Maps a gadget node to the knapsack item it stands for.
type ItemOf = fn(NodeId) -> Option<usize>;

/// Reads the chosen items off a gadget solution that meets the threshold.
///
/// Facilities are first moved to the heavy nodes (the center, or every
/// heavy node of the path), keeping the plan; coverage never drops under
/// that move. Items whose light node is then covered form the answer.
pub fn extract_items(
    gadget: &GadgetInstance,
    solution: &Solution,
    ks: &KnapsackInstance,
) -> Result<BTreeSet<usize>> {
    if solution.value < gadget.threshold {
        return Err(Error::SolutionBelowThreshold {
            value: solution.value,
            threshold: gadget.threshold,
        });
    }
    let inst = &gadget.instance;
    let (facilities, item_of): (Vec<NodeId>, ItemOf) = match gadget.kind {
        Gadget::Star => (vec![NodeId(0)], |v| v.0.checked_sub(1)),
        Gadget::Path => ((0..ks.items.len()).map(|k| NodeId(2 * k)).collect(), |v| {
            (v.0 % 2 == 1).then_some(v.0 / 2)
        }),
    };
    let canonical = coverage(inst, &facilities, &solution.plan)?;
    let chosen: BTreeSet<usize> = canonical
        .covered
        .iter()
        .filter_map(|&v| item_of(v))
        .collect();
    if canonical.value < gadget.threshold || !ks.is_solution(&chosen) {
        return Err(Error::SolutionBelowThreshold {
            value: canonical.value,
            threshold: gadget.threshold,
        });
    }
    Ok(chosen)
}

/// Classical 0/1 knapsack optimum by capacity-indexed dynamic programming.
pub fn knapsack_dp(ks: &KnapsackInstance) -> u64 {
    let cap = ks.capacity as usize;
    let mut best = vec![0u64; cap + 1];
    for &(g, b) in &ks.items {
        let g = g as usize;
        if g > cap {
            continue;
        }
        for c in (g..=cap).rev() {
            best[c] = best[c].max(best[c - g] + b);
        }
    }
    best[cap]
}
