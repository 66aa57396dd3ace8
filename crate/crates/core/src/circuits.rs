//! Labeled directed multigraphs as decorations: open circuits.
//!
//! An [`LGraph`] on a node set `N` is a list of edges, each with a source, a
//! target and a [`Label`]. Edges are kept sorted by `(src, tgt, label)`, so two
//! graphs are equal exactly when their edge multisets are. Transport along
//! `f: N -> N'` moves every endpoint by `f`; combining two graphs places them
//! side by side on `N + N'`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cospan::Cospan;
use crate::decoration::{DecoratedCospan, Decoration, DecorationError};
use crate::finset::{FinFunction, FinSet};

/// An edge label. Decimal labels are stored exactly; any other text is a symbol.
/// Decimals order before symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Decimal(BigRational),
    Symbol(String),
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let well_formed = !int.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit())
        && (frac.is_empty() == !digits.contains('.'));
    if !well_formed {
        return None;
    }
    let mantissa: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    let value = BigRational::new(mantissa, scale);
    Some(if negative { -value } else { value })
}

/// Writes a terminating rational in decimal notation with at least one
/// fractional digit (`2.0`, `0.25`).
fn write_decimal(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut den = q.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if den != BigInt::from(1u32) {
        // only reachable for rationals built outside the parser
        return write!(f, "{q}");
    }
    let scale = twos.max(fives).max(1);
    let scaled = q.numer().abs() * BigInt::from(10u32).pow(scale) / q.denom();
    let digits = format!(
        "{:0>width$}",
        scaled.to_string(),
        width = scale as usize + 1
    );
    let (int, frac) = digits.split_at(digits.len() - scale as usize);
    let frac = frac.trim_end_matches('0');
    let frac = if frac.is_empty() { "0" } else { frac };
    let sign = if q.is_negative() { "-" } else { "" };
    write!(f, "{sign}{int}.{frac}")
}

impl FromStr for Label {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match parse_decimal(s) {
            Some(q) => Label::Decimal(q),
            None => Label::Symbol(s.to_owned()),
        })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Decimal(q) => write_decimal(f, q),
            Label::Symbol(s) => f.write_str(s),
        }
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        s.parse().expect("infallible")
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(Label::from(s.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub tgt: usize,
    pub label: Label,
}

impl Edge {
    pub fn new(src: usize, tgt: usize, label: impl Into<Label>) -> Self {
        Edge {
            src,
            tgt,
            label: label.into(),
        }
    }
}

/// A labeled directed multigraph in canonical (sorted) form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LGraph {
    nodes: FinSet,
    edges: Vec<Edge>,
}

impl LGraph {
    pub fn new(nodes: FinSet, mut edges: Vec<Edge>) -> Result<Self, DecorationError> {
        if let Some(e) = edges
            .iter()
            .find(|e| e.src >= nodes.size() || e.tgt >= nodes.size())
        {
            return Err(DecorationError::Invalid(format!(
                "edge {} -> {} leaves a graph with {} nodes",
                e.src,
                e.tgt,
                nodes.size()
            )));
        }
        edges.sort();
        Ok(LGraph { nodes, edges })
    }

    /// The edgeless graph on `nodes`.
    pub fn discrete(nodes: FinSet) -> Self {
        LGraph {
            nodes,
            edges: Vec::new(),
        }
    }

    pub fn nodes(&self) -> FinSet {
        self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_set(&self) -> FinSet {
        FinSet::new(self.edges.len())
    }

    pub fn src(&self) -> FinFunction {
        FinFunction::from_table_unchecked(self.nodes, self.edges.iter().map(|e| e.src).collect())
    }

    pub fn tgt(&self) -> FinFunction {
        FinFunction::from_table_unchecked(self.nodes, self.edges.iter().map(|e| e.tgt).collect())
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.edges.iter().map(|e| &e.label)
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.size()];
        for e in &self.edges {
            deg[e.src] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.size()];
        for e in &self.edges {
            deg[e.tgt] += 1;
        }
        deg
    }
}

pub fn lgraph_transport(f: &FinFunction, g: &LGraph) -> Result<LGraph, DecorationError> {
    if f.dom() != g.nodes {
        return Err(DecorationError::DomainMismatch {
            expected: f.dom().size(),
            found: g.nodes.size(),
        });
    }
    let mut edges: Vec<Edge> = g
        .edges
        .iter()
        .map(|e| Edge {
            src: f.apply(e.src),
            tgt: f.apply(e.tgt),
            label: e.label.clone(),
        })
        .collect();
    edges.sort();
    Ok(LGraph {
        nodes: f.cod(),
        edges,
    })
}

pub fn lgraph_combine(a: &LGraph, b: &LGraph) -> LGraph {
    let shift = a.nodes.size();
    let shifted = b.edges.iter().map(|e| Edge {
        src: e.src + shift,
        tgt: e.tgt + shift,
        label: e.label.clone(),
    });
    // every shifted edge sorts after every edge of `a`
    let edges = a.edges.iter().cloned().chain(shifted).collect();
    LGraph {
        nodes: FinSet::new(shift + b.nodes.size()),
        edges,
    }
}

pub fn lgraph_unit() -> LGraph {
    LGraph::discrete(FinSet::EMPTY)
}

/// The circuit decoration backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct Circuits;

#[derive(Serialize, Deserialize)]
struct GraphPayload {
    edges: Vec<Edge>,
}

impl Decoration for Circuits {
    type Value = LGraph;

    fn name(&self) -> &'static str {
        "circuit"
    }

    fn carrier(&self, d: &LGraph) -> FinSet {
        d.nodes
    }

    fn transport(&self, f: &FinFunction, d: &LGraph) -> Result<LGraph, DecorationError> {
        lgraph_transport(f, d)
    }

    fn combine(&self, a: &LGraph, b: &LGraph) -> LGraph {
        lgraph_combine(a, b)
    }

    fn unit(&self) -> LGraph {
        lgraph_unit()
    }

    fn to_json(&self, d: &LGraph) -> serde_json::Value {
        serde_json::to_value(GraphPayload {
            edges: d.edges.clone(),
        })
        .expect("plain data")
    }

    fn from_json(&self, v: &serde_json::Value, carrier: FinSet) -> Result<LGraph, DecorationError> {
        let payload: GraphPayload = serde_json::from_value(v.clone())
            .map_err(|e| DecorationError::Invalid(e.to_string()))?;
        LGraph::new(carrier, payload.edges)
    }
}

pub type Circuit = DecoratedCospan<LGraph>;

/// Nodes hit by the input leg.
pub fn inputs(c: &Cospan) -> Vec<usize> {
    c.in_leg().image()
}

/// Nodes hit by the output leg.
pub fn outputs(c: &Cospan) -> Vec<usize> {
    c.out_leg().image()
}

/// Inputs and outputs together.
pub fn terminals(c: &Cospan) -> Vec<usize> {
    let mut t = inputs(c);
    t.extend(outputs(c));
    t.sort_unstable();
    t.dedup();
    t
}

/// Graphviz rendering. Internal nodes are black dots; each foot element is a
/// gray point with a gray arrow into the node it is attached to.
pub fn dot_export(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("digraph circuit {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle, style=filled, fillcolor=black, label=\"\", width=0.15];\n");
    let cospan = c.cospan();
    for k in cospan.apex().elements() {
        let _ = writeln!(out, "  n{k};");
    }
    for k in cospan.left_foot().elements() {
        let _ = writeln!(out, "  x{k} [fillcolor=gray, color=gray, xlabel=\"x{k}\"];");
    }
    for k in cospan.right_foot().elements() {
        let _ = writeln!(out, "  y{k} [fillcolor=gray, color=gray, xlabel=\"y{k}\"];");
    }
    for e in c.decoration().edges() {
        let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.src, e.tgt, e.label);
    }
    for (k, &node) in cospan.in_leg().table().iter().enumerate() {
        let _ = writeln!(out, "  x{k} -> n{node} [color=gray, penwidth=2];");
    }
    for (k, &node) in cospan.out_leg().table().iter().enumerate() {
        let _ = writeln!(out, "  y{k} -> n{node} [color=gray, penwidth=2];");
    }
    out.push_str("}\n");
    out
}

/// Edge list as CSV: `src,tgt,label`.
pub fn csv_export(c: &Circuit) -> String {
    let mut out = String::from("src,tgt,label\n");
    for e in c.decoration().edges() {
        let _ = writeln!(out, "{},{},{}", e.src, e.tgt, e.label);
    }
    out
}
