//! Seeded random instances.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, a portable
//! generator, so equal seeds and configs give byte-identical instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{normalize, Edge, Instance};
use crate::reductions::KnapsackInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Star,
    Path,
    /// Random recursive tree.
    Tree,
    /// A random tree plus up to `extra_edges` additional edges.
    Graph {
        extra_edges: usize,
    },
}

/// Inclusive integer range.
pub type Range = (u64, u64);

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub shape: Shape,
    pub n: usize,
    pub length: Range,
    pub bound: Range,
    pub cost: Range,
    pub weight: Range,
    pub radius: Range,
    pub budget: Range,
    pub facilities: usize,
    pub uniform_weights: bool,
}

impl GenConfig {
    pub fn new(shape: Shape, n: usize) -> Self {
        GenConfig {
            shape,
            n,
            length: (1, 5),
            bound: (0, 4),
            cost: (1, 3),
            weight: (1, 5),
            radius: (1, 4),
            budget: (0, 5),
            facilities: 1,
            uniform_weights: false,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidRanges(msg.to_string()));
        let ranges = [
            ("length", self.length),
            ("bound", self.bound),
            ("cost", self.cost),
            ("weight", self.weight),
            ("radius", self.radius),
            ("budget", self.budget),
        ];
        for (name, (lo, hi)) in ranges {
            if lo > hi {
                return Err(Error::InvalidRanges(format!(
                    "{name}: empty range {lo}..={hi}"
                )));
            }
        }
        if self.n == 0 {
            return bad("n must be positive");
        }
        if self.length.0 == 0 && self.n > 1 {
            return bad("lengths must be positive");
        }
        if self.bound.0 >= self.length.1 {
            return bad("every bound would reach the edge length (need bound < length)");
        }
        if self.cost.0 == 0 {
            return bad("costs must be positive");
        }
        if self.radius.0 == 0 {
            return bad("radius must be positive");
        }
        if self.facilities == 0 || self.facilities > self.n {
            return bad("facilities must be in 1..=n");
        }
        Ok(())
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn draw(&mut self, (lo, hi): Range) -> u64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A valid integer instance, with bounds already capped by the budget.
    pub fn instance(&mut self, cfg: &GenConfig) -> Result<Instance> {
        cfg.check()?;
        let n = cfg.n;
        let mut pairs: Vec<(usize, usize)> = match cfg.shape {
            Shape::Star => (1..n).map(|i| (0, i)).collect(),
            Shape::Path => (1..n).map(|i| (i - 1, i)).collect(),
            Shape::Tree | Shape::Graph { .. } => {
                (1..n).map(|i| (self.rng.gen_range(0..i), i)).collect()
            }
        };
        if let Shape::Graph { extra_edges } = cfg.shape {
            for _ in 0..extra_edges {
                if n < 3 {
                    break;
                }
                let a = self.rng.gen_range(0..n);
                let b = self.rng.gen_range(0..n);
                let key = (a.min(b), a.max(b));
                if a != b && !pairs.iter().any(|&(x, y)| (x.min(y), x.max(y)) == key) {
                    pairs.push(key);
                }
            }
        }

        let mut label: Vec<usize> = (0..n).collect();
        label.shuffle(&mut self.rng);

        let mut edges = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let length = self.draw((cfg.length.0.max(cfg.bound.0 + 1), cfg.length.1));
            let bound = self.draw((cfg.bound.0, cfg.bound.1.min(length - 1)));
            let cost = self.draw(cfg.cost);
            let (a, b) = (label[a].min(label[b]), label[a].max(label[b]));
            edges.push(Edge::new(a, b, length as f64, bound as f64, cost as f64));
        }
        edges.sort_by_key(|e| (e.a, e.b));

        let weights = if cfg.uniform_weights {
            vec![self.draw(cfg.weight) as f64; n]
        } else {
            (0..n).map(|_| self.draw(cfg.weight) as f64).collect()
        };
        let radius = self.draw(cfg.radius) as f64;
        let budget = self.draw(cfg.budget) as f64;

        normalize(&Instance {
            weights,
            edges,
            radius,
            budget,
            facilities: cfg.facilities,
            integer: true,
        })
    }

    /// Knapsack with `1..=max_items` items and capacity `1..=max_capacity`;
    /// item weights stay within the capacity and the target is in
    /// `1..=sum of values`.
    pub fn knapsack(
        &mut self,
        max_items: usize,
        max_capacity: u64,
        max_value: u64,
    ) -> KnapsackInstance {
        let n = self.rng.gen_range(1..=max_items);
        let capacity = self.rng.gen_range(1..=max_capacity);
        let items: Vec<(u64, u64)> = (0..n)
            .map(|_| {
                (
                    self.rng.gen_range(1..=capacity),
                    self.rng.gen_range(1..=max_value),
                )
            })
            .collect();
        let total: u64 = items.iter().map(|&(_, b)| b).sum();
        let target = self.rng.gen_range(1..=total) as f64;
        KnapsackInstance {
            items,
            capacity,
            target,
        }
    }
}

/// One-shot helper: the instance for `cfg` under `seed`.
pub fn generate(cfg: &GenConfig, seed: u64) -> Result<Instance> {
    Generator::new(seed).instance(cfg)
}
