//! Line-oriented text formats for instances and solutions.
//!
//! Instance:
//!
//! ```text
//! upmclp 1
//! n m p R B I
//! id weight          (n lines)
//! i j length bound cost   (m lines)
//! ```
//!
//! Solution: the value, a `facilities: id...` line, then one
//! `upgrade i j delta` line per edge with a nonzero reduction.
//! `#` starts a comment anywhere on a line.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{coverage, Edge, Instance, NodeId, Solution, UpgradePlan};

pub const MAGIC: &str = "upmclp";
pub const VERSION: u32 = 1;

/// Formats a number so that parsing it back yields the same `f64`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

pub(crate) fn field<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what} '{token}'")))
}

fn expect_len(line: usize, tokens: &[&str], n: usize, what: &str) -> Result<()> {
    if tokens.len() == n {
        Ok(())
    } else {
        Err(Error::parse(
            line,
            format!("{what}: expected {n} fields, found {}", tokens.len()),
        ))
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text);
    let eof = || Error::parse(0, "unexpected end of input");

    let (ln, header) = lines.next().ok_or_else(eof)?;
    expect_len(ln, &header, 2, "header")?;
    if header[0] != MAGIC {
        return Err(Error::parse(
            ln,
            format!("expected '{MAGIC}', found '{}'", header[0]),
        ));
    }
    let version: u32 = field(ln, header[1], "version")?;
    if version != VERSION {
        return Err(Error::parse(ln, format!("unsupported version {version}")));
    }

    let (ln, sizes) = lines.next().ok_or_else(eof)?;
    expect_len(ln, &sizes, 6, "size line")?;
    let n: usize = field(ln, sizes[0], "n")?;
    let m: usize = field(ln, sizes[1], "m")?;
    let p: usize = field(ln, sizes[2], "p")?;
    let radius: f64 = field(ln, sizes[3], "R")?;
    let budget: f64 = field(ln, sizes[4], "B")?;
    let integer = match sizes[5] {
        "0" => false,
        "1" => true,
        other => {
            return Err(Error::parse(
                ln,
                format!("integer flag must be 0 or 1, found '{other}'"),
            ))
        }
    };

    let mut weights = vec![None; n];
    for _ in 0..n {
        let (ln, t) = lines.next().ok_or_else(eof)?;
        expect_len(ln, &t, 2, "node line")?;
        let id: usize = field(ln, t[0], "node id")?;
        let w: f64 = field(ln, t[1], "weight")?;
        let slot = weights
            .get_mut(id)
            .ok_or_else(|| Error::parse(ln, format!("node id {id} out of range")))?;
        if slot.replace(w).is_some() {
            return Err(Error::parse(ln, format!("node id {id} listed twice")));
        }
    }
    let weights = weights.into_iter().map(|w| w.unwrap_or(0.0)).collect();

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, t) = lines.next().ok_or_else(eof)?;
        expect_len(ln, &t, 5, "edge line")?;
        edges.push(Edge::new(
            field(ln, t[0], "endpoint")?,
            field(ln, t[1], "endpoint")?,
            field(ln, t[2], "length")?,
            field(ln, t[3], "bound")?,
            field(ln, t[4], "cost")?,
        ));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "trailing content"));
    }

    Ok(Instance {
        weights,
        edges,
        radius,
        budget,
        facilities: p,
        integer,
    })
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let f = format_number;
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(
        out,
        "{} {} {} {} {} {}",
        instance.n(),
        instance.m(),
        instance.facilities,
        f(instance.radius),
        f(instance.budget),
        u8::from(instance.integer)
    )
    .unwrap();
    for (id, &w) in instance.weights.iter().enumerate() {
        writeln!(out, "{id} {}", f(w)).unwrap();
    }
    for e in &instance.edges {
        writeln!(
            out,
            "{} {} {} {} {}",
            e.a,
            e.b,
            f(e.length),
            f(e.bound),
            f(e.cost)
        )
        .unwrap();
    }
    out
}

pub fn write_solution(solution: &Solution, instance: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{}", format_number(solution.value)).unwrap();
    out.push_str("facilities:");
    for x in &solution.facilities {
        write!(out, " {x}").unwrap();
    }
    out.push('\n');
    for (e, delta) in solution.plan.nonzero() {
        let edge = &instance.edges[e];
        writeln!(
            out,
            "upgrade {} {} {}",
            edge.a,
            edge.b,
            format_number(delta)
        )
        .unwrap();
    }
    out
}

/// A solution as read from disk, before re-evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredSolution {
    pub value: f64,
    pub facilities: Vec<NodeId>,
    pub plan: UpgradePlan,
}

impl StoredSolution {
    /// Recomputes coverage for the stored facilities and plan.
    pub fn reevaluate(&self, instance: &Instance) -> Result<Solution> {
        Solution::evaluate(instance, self.facilities.clone(), self.plan.clone())
    }

    /// True when the plan is feasible and re-evaluation reproduces the
    /// stored value exactly.
    pub fn verify(&self, instance: &Instance) -> bool {
        self.plan.is_feasible(instance)
            && coverage(instance, &self.facilities, &self.plan)
                .map(|c| c.value == self.value)
                .unwrap_or(false)
    }
}

pub fn parse_solution(text: &str, instance: &Instance) -> Result<StoredSolution> {
    let mut lines = content_lines(text);
    let (ln, t) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty solution"))?;
    expect_len(ln, &t, 1, "value line")?;
    let value: f64 = field(ln, t[0], "value")?;

    let (ln, t) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing facilities line"))?;
    if t[0] != "facilities:" {
        return Err(Error::parse(ln, "expected 'facilities:'"));
    }
    let facilities = t[1..]
        .iter()
        .map(|tok| field(ln, tok, "facility").map(NodeId))
        .collect::<Result<Vec<_>>>()?;

    let mut plan = UpgradePlan::for_instance(instance);
    for (ln, t) in lines {
        expect_len(ln, &t, 4, "upgrade line")?;
        if t[0] != "upgrade" {
            return Err(Error::parse(ln, format!("unexpected '{}'", t[0])));
        }
        let a = NodeId(field(ln, t[1], "endpoint")?);
        let b = NodeId(field(ln, t[2], "endpoint")?);
        let delta: f64 = field(ln, t[3], "delta")?;
        let e = instance
            .edge_between(a, b)
            .ok_or_else(|| Error::parse(ln, format!("no edge between {a} and {b}")))?;
        plan.reductions[e] = delta;
    }
    Ok(StoredSolution {
        value,
        facilities,
        plan,
    })
}
