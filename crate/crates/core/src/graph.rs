//! Directed and undirected graphs over positionally indexed nodes, the
//! DAG-to-skeleton projection, canonical edge indexing and the skeleton
//! archive text format.
//!
//! Node identity is the position in the label list; labels are metadata.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Bijection between unordered node pairs `{a, b}` and `0..k`, with
/// `k = v(v-1)/2`, in lexicographic order of `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeIndexer {
    v: usize,
    k: usize,
}

impl EdgeIndexer {
    pub fn new(v: usize) -> Self {
        EdgeIndexer { v, k: v * v.saturating_sub(1) / 2 }
    }

    pub fn node_count(&self) -> usize {
        self.v
    }

    /// Number of candidate edges.
    pub fn edge_count(&self) -> usize {
        self.k
    }

    /// Index of the unordered pair `{a, b}`.
    pub fn index(&self, a: usize, b: usize) -> Result<usize> {
        if a == b {
            return Err(Error::invalid(format!("self-pair ({a},{a}) has no edge index")));
        }
        if a >= self.v || b >= self.v {
            return Err(Error::invalid(format!(
                "node pair ({a},{b}) out of range for {} nodes",
                self.v
            )));
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Ok(self.index_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, a: usize, b: usize) -> usize {
        a * (2 * self.v - a - 1) / 2 + (b - a - 1)
    }

    /// Inverse of [`EdgeIndexer::index`]; returns `(a, b)` with `a < b`.
    pub fn pair(&self, idx: usize) -> Result<(usize, usize)> {
        if idx >= self.k {
            return Err(Error::invalid(format!(
                "edge index {idx} out of range (k = {})",
                self.k
            )));
        }
        let mut rest = idx;
        for a in 0..self.v {
            let row = self.v - a - 1;
            if rest < row {
                return Ok((a, a + 1 + rest));
            }
            rest -= row;
        }
        unreachable!("index checked against k")
    }
}

/// A directed acyclic graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    labels: Vec<String>,
    parents: Vec<BTreeSet<usize>>,
}

impl Dag {
    /// Empty graph on the given labels.
    pub fn empty(labels: Vec<String>) -> Result<Self> {
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::InvalidGraph("node labels are not distinct".into()));
        }
        let parents = vec![BTreeSet::new(); labels.len()];
        Ok(Dag { labels, parents })
    }

    /// Empty graph with labels `X0, X1, ...`.
    pub fn with_nodes(v: usize) -> Self {
        Dag {
            labels: (0..v).map(|i| format!("X{i}")).collect(),
            parents: vec![BTreeSet::new(); v],
        }
    }

    /// Builds a DAG from `(tail, head)` arcs, validating every invariant.
    pub fn from_arcs(labels: Vec<String>, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut dag = Dag::empty(labels)?;
        for &(t, h) in arcs {
            dag.add_arc(t, h)?;
        }
        Ok(dag)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn parents(&self, node: usize) -> &BTreeSet<usize> {
        &self.parents[node]
    }

    pub fn has_arc(&self, tail: usize, head: usize) -> bool {
        self.parents[head].contains(&tail)
    }

    pub fn arc_count(&self) -> usize {
        self.parents.iter().map(BTreeSet::len).sum()
    }

    /// Arcs as `(tail, head)` pairs, sorted.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs: Vec<(usize, usize)> = self
            .parents
            .iter()
            .enumerate()
            .flat_map(|(h, ps)| ps.iter().map(move |&t| (t, h)))
            .collect();
        arcs.sort_unstable();
        arcs
    }

    /// Adds `tail -> head`, rejecting self-loops, duplicates, two-cycles and
    /// longer cycles.
    pub fn add_arc(&mut self, tail: usize, head: usize) -> Result<()> {
        let v = self.node_count();
        if tail >= v || head >= v {
            return Err(Error::InvalidGraph(format!("arc ({tail},{head}) out of range")));
        }
        if tail == head {
            return Err(Error::InvalidGraph(format!("self-loop at node {tail}")));
        }
        if self.has_arc(tail, head) || self.has_arc(head, tail) {
            return Err(Error::InvalidGraph(format!(
                "arc between {tail} and {head} already present"
            )));
        }
        if self.has_path(head, tail) {
            return Err(Error::InvalidGraph(format!(
                "arc ({tail},{head}) would create a cycle"
            )));
        }
        self.parents[head].insert(tail);
        Ok(())
    }

    pub fn remove_arc(&mut self, tail: usize, head: usize) -> bool {
        self.parents[head].remove(&tail)
    }

    /// Whether a directed path `from ~> to` exists (a node reaches itself).
    pub fn has_path(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        // walk parents backwards from `to`
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![to];
        seen[to] = true;
        while let Some(n) = stack.pop() {
            for &p in &self.parents[n] {
                if p == from {
                    return true;
                }
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        false
    }

    /// A topological order (parents before children), smallest index first
    /// among ready nodes.
    pub fn topological_order(&self) -> Vec<usize> {
        let v = self.node_count();
        let mut indegree: Vec<usize> = self.parents.iter().map(BTreeSet::len).collect();
        let mut children = vec![Vec::new(); v];
        for (h, ps) in self.parents.iter().enumerate() {
            for &p in ps {
                children[p].push(h);
            }
        }
        let mut ready: BTreeSet<usize> = (0..v).filter(|&n| indegree[n] == 0).collect();
        let mut order = Vec::with_capacity(v);
        while let Some(n) = ready.pop_first() {
            order.push(n);
            for &c in &children[n] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        debug_assert_eq!(order.len(), v, "Dag invariant: acyclic");
        order
    }

    /// Checks acyclicity from scratch.
    pub fn is_acyclic(&self) -> bool {
        let v = self.node_count();
        let mut indegree: Vec<usize> = self.parents.iter().map(BTreeSet::len).collect();
        let mut stack: Vec<usize> = (0..v).filter(|&n| indegree[n] == 0).collect();
        let mut visited = 0;
        while let Some(n) = stack.pop() {
            visited += 1;
            for (h, ps) in self.parents.iter().enumerate() {
                if ps.contains(&n) {
                    indegree[h] -= 1;
                    if indegree[h] == 0 {
                        stack.push(h);
                    }
                }
            }
        }
        visited == v
    }
}

/// Undirected graph on `node_count` nodes; edges stored as `(a, b)`, `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Skeleton {
    node_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Skeleton {
    pub fn empty(node_count: usize) -> Self {
        Skeleton { node_count, edges: BTreeSet::new() }
    }

    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut s = Skeleton::empty(node_count);
        for &(a, b) in edges {
            if !s.insert(a, b)? {
                return Err(Error::InvalidGraph(format!("duplicate edge {a}-{b}")));
            }
        }
        Ok(s)
    }

    /// Inserts `{a, b}`; returns false when already present.
    pub fn insert(&mut self, a: usize, b: usize) -> Result<bool> {
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
        }
        if a >= self.node_count || b >= self.node_count {
            return Err(Error::InvalidGraph(format!(
                "edge {a}-{b} out of range for {} nodes",
                self.node_count
            )));
        }
        Ok(self.edges.insert((a.min(b), a.max(b))))
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Sorted canonical edge indices.
    pub fn edge_indices(&self) -> Vec<usize> {
        let idx = EdgeIndexer::new(self.node_count);
        self.edges.iter().map(|&(a, b)| idx.index_unchecked(a, b)).collect()
    }

    /// Builds a skeleton from canonical edge indices.
    pub fn from_edge_indices(node_count: usize, indices: &[usize]) -> Result<Self> {
        let idx = EdgeIndexer::new(node_count);
        let mut s = Skeleton::empty(node_count);
        for &i in indices {
            let (a, b) = idx.pair(i)?;
            s.edges.insert((a, b));
        }
        Ok(s)
    }
}

/// Drops arc directions: `{a, b}` is an edge iff `a -> b` or `b -> a`.
pub fn skeleton_of(dag: &Dag) -> Skeleton {
    let mut s = Skeleton::empty(dag.node_count());
    for (t, h) in dag.arcs() {
        s.edges.insert((t.min(h), t.max(h)));
    }
    s
}

/// Skeleton samples sharing one node count, plus optional labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonArchive {
    pub node_count: usize,
    pub labels: Option<Vec<String>>,
    pub samples: Vec<Skeleton>,
}

impl SkeletonArchive {
    pub fn new(node_count: usize, samples: Vec<Skeleton>) -> Result<Self> {
        if let Some(bad) = samples.iter().position(|s| s.node_count() != node_count) {
            return Err(Error::Inconsistent(format!(
                "sample {bad} has {} nodes, archive has {node_count}",
                samples[bad].node_count()
            )));
        }
        Ok(SkeletonArchive { node_count, labels: None, samples })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count {
            return Err(Error::invalid(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.node_count
            )));
        }
        if labels.iter().any(|l| l.contains(',') || l.contains('\n')) {
            return Err(Error::invalid("labels may not contain ',' or newlines"));
        }
        self.labels = Some(labels);
        Ok(self)
    }
}

fn format_record(s: &Skeleton) -> String {
    if s.edge_count() == 0 {
        return "-".to_string();
    }
    let mut line = String::new();
    for (i, (a, b)) in s.edges().enumerate() {
        if i > 0 {
            line.push(',');
        }
        write!(line, "{a}-{b}").unwrap();
    }
    line
}

pub fn write_skeleton_archive<W: Write>(archive: &SkeletonArchive, mut out: W) -> std::io::Result<()> {
    writeln!(out, "nodes={}", archive.node_count)?;
    if let Some(labels) = &archive.labels {
        writeln!(out, "labels={}", labels.join(","))?;
    }
    for s in &archive.samples {
        writeln!(out, "{}", format_record(s))?;
    }
    Ok(())
}

pub fn read_skeleton_archive<R: BufRead>(input: R) -> Result<SkeletonArchive> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty archive, expected `nodes=<v>`"))?;
    let header = header.map_err(|e| Error::parse(1, e.to_string()))?;
    let node_count: usize = header
        .strip_prefix("nodes=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(1, format!("expected `nodes=<v>`, found {header:?}")))?;

    let mut labels = None;
    let mut samples = Vec::new();
    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if lineno == 2 {
            if let Some(rest) = line.strip_prefix("labels=") {
                let ls: Vec<String> = rest.split(',').map(str::to_string).collect();
                if ls.len() != node_count {
                    return Err(Error::parse(
                        lineno,
                        format!("{} labels for {node_count} nodes", ls.len()),
                    ));
                }
                labels = Some(ls);
                continue;
            }
        }
        samples.push(parse_record(&line, node_count, lineno)?);
    }
    Ok(SkeletonArchive { node_count, labels, samples })
}

fn parse_record(line: &str, v: usize, lineno: usize) -> Result<Skeleton> {
    let mut s = Skeleton::empty(v);
    if line == "-" {
        return Ok(s);
    }
    if line.is_empty() {
        return Err(Error::parse(lineno, "empty record (use `-` for no edges)"));
    }
    for tok in line.split(',') {
        let (a, b) = tok
            .split_once('-')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .ok_or_else(|| Error::parse(lineno, format!("malformed edge token {tok:?}")))?;
        if a == b {
            return Err(Error::parse(lineno, format!("self-loop at line {lineno}")));
        }
        if a >= v || b >= v {
            return Err(Error::parse(
                lineno,
                format!("node index in {tok:?} out of range for {v} nodes"),
            ));
        }
        if !s.edges.insert((a.min(b), a.max(b))) {
            return Err(Error::parse(lineno, format!("duplicate edge {tok:?}")));
        }
    }
    Ok(s)
}
