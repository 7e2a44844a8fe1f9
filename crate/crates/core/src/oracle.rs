//! Exhaustive solver for small integer instances on any connected graph.
//!
//! Enumerates every facility set of size p and every reduction vector on a
//! grid of step `num/den`. On integer instances some optimal plan is
//! integral, so step 1 already gives the continuous optimum; finer grids
//! are only used to check that claim. Arithmetic is done in exact integers
//! after scaling all lengths by `den`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{ensure_valid, Instance, NodeId, Solution, UpgradePlan};

pub const DEFAULT_WORK_BOUND: u128 = 100_000_000;

/// Grid spacing `num / den` for enumerated reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    num: u64,
    den: u64,
}

impl GridSpec {
    pub const UNIT: GridSpec = GridSpec { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidStep(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        Ok(GridSpec {
            num: num / g,
            den: den / g,
        })
    }

    /// Step `1 / den`.
    pub fn fraction(den: u64) -> Result<Self> {
        Self::new(1, den)
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Accepts `2`, `1/4` or a terminating decimal such as `0.25`.
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidStep(s.to_string());
        if let Some((a, b)) = s.split_once('/') {
            return GridSpec::new(
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            );
        }
        match s.split_once('.') {
            None => GridSpec::new(s.parse().map_err(|_| bad())?, 1),
            Some((int, frac)) => {
                if frac.len() > 9 || !frac.chars().all(|c| c.is_ascii_digit()) {
                    return Err(bad());
                }
                let den = 10u64.pow(frac.len() as u32);
                let int: u64 = if int.is_empty() {
                    0
                } else {
                    int.parse().map_err(|_| bad())?
                };
                let frac: u64 = if frac.is_empty() {
                    0
                } else {
                    frac.parse().map_err(|_| bad())?
                };
                GridSpec::new(int * den + frac, den)
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The instance scaled so that one grid step is one unit.
struct Scaled {
    n: usize,
    /// `(a, b, length * den, max steps, cost per step * num)`
    edges: Vec<(usize, usize, i64, i64, i64)>,
    adj: Vec<Vec<(usize, usize)>>,
    radius: i64,
    /// Budget times `den`.
    budget: i64,
    step: i64,
}

impl Scaled {
    fn new(instance: &Instance, grid: GridSpec) -> Self {
        let den = grid.den as i64;
        let num = grid.num as i64;
        let budget = instance.budget as i64 * den;
        let edges = instance
            .edges
            .iter()
            .map(|e| {
                let cost_per_step = e.cost as i64 * num;
                // steps k with k*num <= bound*den and affordable alone
                let steps = (e.bound as i64 * den / num).min(budget / cost_per_step);
                (e.a.0, e.b.0, e.length as i64 * den, steps, cost_per_step)
            })
            .collect();
        let adj = instance
            .adjacency()
            .into_iter()
            .map(|list| list.into_iter().map(|(w, e)| (w.0, e)).collect())
            .collect();
        Scaled {
            n: instance.n(),
            edges,
            adj,
            radius: instance.radius as i64 * den,
            budget,
            step: num,
        }
    }

    /// Plan evaluations for `sets` facility sets: the number of step
    /// vectors within budget, or the plain product of step ranges when the
    /// budget is too large to count over.
    fn work(&self, sets: u128) -> u128 {
        let product = self
            .edges
            .iter()
            .fold(1u128, |acc, e| acc.saturating_mul(e.3 as u128 + 1));
        let plans = if self.budget <= 1_000_000 {
            self.plan_count()
        } else {
            product
        };
        plans.saturating_mul(sets)
    }

    /// Number of step vectors within budget.
    fn plan_count(&self) -> u128 {
        let cap = self.budget as usize;
        let mut ways = vec![0u128; cap + 1];
        ways[0] = 1;
        for &(_, _, _, steps, cost) in &self.edges {
            let mut next = vec![0u128; cap + 1];
            for (spent, &w) in ways.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for k in 0..=steps as usize {
                    let total = spent + k * cost as usize;
                    if total > cap {
                        break;
                    }
                    next[total] = next[total].saturating_add(w);
                }
            }
            ways = next;
        }
        ways.iter().fold(0u128, |a, &b| a.saturating_add(b))
    }

    fn covered_weight(
        &self,
        weights: &[i64],
        facilities: &[usize],
        steps: &[i64],
        dist: &mut [i64],
        done: &mut [bool],
    ) -> i64 {
        dist.fill(i64::MAX);
        done.fill(false);
        for &x in facilities {
            dist[x] = 0;
        }
        // dense Dijkstra; n is tiny here
        for _ in 0..self.n {
            let mut u = usize::MAX;
            for v in 0..self.n {
                if !done[v] && dist[v] != i64::MAX && (u == usize::MAX || dist[v] < dist[u]) {
                    u = v;
                }
            }
            if u == usize::MAX || dist[u] > self.radius {
                break;
            }
            done[u] = true;
            for &(w, e) in &self.adj[u] {
                let len = self.edges[e].2 - steps[e] * self.step;
                let nd = dist[u] + len;
                if nd < dist[w] {
                    dist[w] = nd;
                }
            }
        }
        (0..self.n)
            .filter(|&v| dist[v] <= self.radius)
            .map(|v| weights[v])
            .sum()
    }
}

/// Plan evaluations [`solve_exact`] would perform.
pub fn required_work(instance: &Instance, p: usize, grid: GridSpec) -> Result<u128> {
    ensure_valid(instance)?;
    if !instance.integer || !instance.has_integer_values() {
        return Err(Error::NonIntegerInstance);
    }
    Ok(Scaled::new(instance, grid).work(binomial(instance.n(), p)))
}

pub fn solve_exact(instance: &Instance, p: usize, grid: GridSpec) -> Result<Solution> {
    solve_exact_bounded(instance, p, grid, DEFAULT_WORK_BOUND)
}

/// Exhaustive search, refusing instances that need more than `work_bound`
/// plan evaluations. Ties keep the lexicographically smallest facility set,
/// then the smallest plan.
pub fn solve_exact_bounded(
    instance: &Instance,
    p: usize,
    grid: GridSpec,
    work_bound: u128,
) -> Result<Solution> {
    ensure_valid(instance)?;
    if !instance.integer || !instance.has_integer_values() {
        return Err(Error::NonIntegerInstance);
    }
    let n = instance.n();
    if p == 0 || p > n {
        return Err(Error::FacilityCount {
            p,
            reason: "need 1 <= p <= n",
        });
    }
    let scaled = Scaled::new(instance, grid);
    let required = scaled.work(binomial(n, p));
    if required > work_bound {
        return Err(Error::WorkBoundExceeded {
            required,
            bound: work_bound,
        });
    }

    let weights: Vec<i64> = instance.weights.iter().map(|&w| w as i64).collect();
    let m = instance.m();
    let mut best: Option<(i64, Vec<usize>, Vec<i64>)> = None;
    let mut dist = vec![0i64; n];
    let mut done = vec![false; n];
    let mut steps = vec![0i64; m];

    let mut combo: Vec<usize> = (0..p).collect();
    loop {
        // odometer over step vectors, first edge most significant, with
        // prefix-cost pruning
        let mut spent = 0i64;
        steps.fill(0);
        'plans: loop {
            let value = scaled.covered_weight(&weights, &combo, &steps, &mut dist, &mut done);
            if best.as_ref().is_none_or(|b| value > b.0) {
                best = Some((value, combo.clone(), steps.clone()));
            }
            // advance the last edge that can still grow
            let mut i = m;
            loop {
                if i == 0 {
                    break 'plans;
                }
                i -= 1;
                let (_, _, _, max_steps, cost) = scaled.edges[i];
                if steps[i] < max_steps && spent + cost <= scaled.budget {
                    steps[i] += 1;
                    spent += cost;
                    break;
                }
                spent -= steps[i] * cost;
                steps[i] = 0;
            }
        }
        if !next_combination(&mut combo, n) {
            break;
        }
    }

    let (_, facilities, steps) = best.expect("at least one facility set");
    let step = grid.value();
    let plan = UpgradePlan {
        reductions: steps.iter().map(|&k| k as f64 * step).collect(),
    };
    Solution::evaluate(instance, facilities.into_iter().map(NodeId).collect(), plan)
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let p = combo.len();
    let mut i = p;
    while i > 0 {
        i -= 1;
        if combo[i] < n - p + i {
            combo[i] += 1;
            for j in i + 1..p {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Decision version: can `p` facilities cover weight at least `threshold`?
pub fn decide(instance: &Instance, p: usize, threshold: f64) -> Result<bool> {
    decide_bounded(instance, p, threshold, DEFAULT_WORK_BOUND)
}

pub fn decide_bounded(
    instance: &Instance,
    p: usize,
    threshold: f64,
    work_bound: u128,
) -> Result<bool> {
    Ok(solve_exact_bounded(instance, p, GridSpec::UNIT, work_bound)?.value >= threshold)
}
