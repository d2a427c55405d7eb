//! Finite weighted multigraphs and the slot indexing shared by every module.
//!
//! A slot is an edge endpoint `(e, end)`. The slots at a vertex `v` are the
//! coordinates of the maximal vertex space at `v`; a self-loop contributes
//! two distinct slots. Slots at a vertex are ordered by ascending edge index,
//! minus end before plus end.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Which end of an edge a slot refers to: `Minus` is the tail (coordinate
/// 0), `Plus` is the head (coordinate `length`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Minus,
    Plus,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Minus => End::Plus,
            End::Plus => End::Minus,
        }
    }

    /// Sign used by oriented evaluations: `-1` on the tail, `+1` on the head.
    pub fn sign(self) -> f64 {
        match self {
            End::Minus => -1.0,
            End::Plus => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub edge: usize,
    pub end: End,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = match self.end {
            End::Minus => "minus",
            End::Plus => "plus",
        };
        write!(f, "(e{}, {})", self.edge, end)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub name: String,
    pub tail: usize,
    pub head: usize,
    pub length: f64,
}

impl Edge {
    pub fn endpoint(&self, end: End) -> usize {
        match end {
            End::Minus => self.tail,
            End::Plus => self.head,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Structural facts about a valid graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Smallest edge length; every length satisfies `length >= min_length`.
    pub min_length: f64,
    pub max_length: f64,
    pub degrees: Vec<usize>,
    pub connected: bool,
    pub components: usize,
    pub has_self_loops: bool,
    pub has_double_edges: bool,
    pub equilateral: bool,
}

impl ValidationReport {
    pub fn is_simple(&self) -> bool {
        !self.has_self_loops && !self.has_double_edges
    }
}

/// Finite multigraph with oriented edges of positive length. Immutable after
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    slots: Vec<Vec<Slot>>,
    slot_offset: Vec<usize>,
}

impl WeightedGraph {
    /// Builds and validates a graph from vertex names and `(name, tail, head,
    /// length)` edges given by vertex index.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidGraph("empty edge set".into()));
        }
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.as_str(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
        }
        let mut edge_names = BTreeSet::new();
        for e in &edges {
            if !edge_names.insert(e.name.as_str()) {
                return Err(Error::InvalidGraph(format!("duplicate edge `{}`", e.name)));
            }
            if e.tail >= vertices.len() || e.head >= vertices.len() {
                return Err(Error::InvalidGraph(format!(
                    "edge `{}` references a missing vertex",
                    e.name
                )));
            }
            if !(e.length > 0.0) || !e.length.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "non-positive length {} on edge `{}`",
                    e.length, e.name
                )));
            }
        }
        let mut slots = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            slots[e.tail].push(Slot {
                edge: i,
                end: End::Minus,
            });
            slots[e.head].push(Slot {
                edge: i,
                end: End::Plus,
            });
        }
        for (v, s) in slots.iter_mut().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidGraph(format!(
                    "isolated vertex `{}`",
                    vertices[v]
                )));
            }
            s.sort();
        }
        let mut slot_offset = Vec::with_capacity(vertices.len());
        let mut acc = 0;
        for s in &slots {
            slot_offset.push(acc);
            acc += s.len();
        }
        Ok(WeightedGraph {
            vertices,
            edges,
            slots,
            slot_offset,
        })
    }

    /// Convenience constructor from vertex names and edges given by vertex
    /// names; edges are named `e1, e2, ...`.
    pub fn from_edge_list(vertices: &[&str], edges: &[(&str, &str, f64)]) -> Result<Self> {
        let index: HashMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut es = Vec::with_capacity(edges.len());
        for (k, (t, h, l)) in edges.iter().enumerate() {
            let tail = *index.get(t).ok_or_else(|| Error::UnknownVertex(t.to_string()))?;
            let head = *index.get(h).ok_or_else(|| Error::UnknownVertex(h.to_string()))?;
            es.push(Edge {
                name: format!("e{}", k + 1),
                tail,
                head,
                length: *l,
            });
        }
        WeightedGraph::new(vertices.iter().map(|s| s.to_string()).collect(), es)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.slots[v].len()
    }

    /// Slots at `v` in canonical order.
    pub fn slots(&self, v: usize) -> &[Slot] {
        &self.slots[v]
    }

    /// Total number of slots, `2|E|`.
    pub fn slot_count(&self) -> usize {
        2 * self.edges.len()
    }

    /// Offset of the first slot of `v` in the global slot numbering.
    pub fn slot_offset(&self, v: usize) -> usize {
        self.slot_offset[v]
    }

    /// Vertex carrying the slot and its position in that vertex's slot list.
    pub fn locate_slot(&self, slot: Slot) -> (usize, usize) {
        let v = self.edges[slot.edge].endpoint(slot.end);
        let pos = self.slots[v]
            .binary_search(&slot)
            .expect("slot belongs to its endpoint vertex");
        (v, pos)
    }

    /// Global index of the slot in the maximal vertex space.
    pub fn global_slot(&self, slot: Slot) -> usize {
        let (v, pos) = self.locate_slot(slot);
        self.slot_offset[v] + pos
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn min_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min)
    }

    pub fn max_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    pub fn is_equilateral(&self) -> bool {
        let l = self.edges[0].length;
        self.edges.iter().all(|e| e.length == l)
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    pub fn has_double_edges(&self) -> bool {
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if !pairs.insert(key) {
                return true;
            }
        }
        false
    }

    /// Connected components of the underlying graph, as a vertex labelling.
    pub fn component_labels(&self) -> (usize, Vec<usize>) {
        let n = self.vertices.len();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = count;
            while let Some(v) = stack.pop() {
                for s in &self.slots[v] {
                    let w = self.edges[s.edge].endpoint(s.end.opposite());
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    pub fn validate(&self) -> ValidationReport {
        let (components, _) = self.component_labels();
        ValidationReport {
            min_length: self.min_length(),
            max_length: self.max_length(),
            degrees: (0..self.vertex_count()).map(|v| self.degree(v)).collect(),
            connected: components == 1,
            components,
            has_self_loops: self.has_self_loops(),
            has_double_edges: self.has_double_edges(),
            equilateral: self.is_equilateral(),
        }
    }

    /// Slots at the named vertex in canonical order.
    pub fn incident_slots(&self, vertex: &str) -> Result<Vec<Slot>> {
        let v = self.vertex_index(vertex)?;
        Ok(self.slots[v].clone())
    }

    /// All-pairs shortest path distances (Dijkstra from every vertex).
    pub fn vertex_distances(&self) -> Vec<Vec<f64>> {
        let n = self.vertex_count();
        (0..n).map(|s| self.dijkstra(s)).collect()
    }

    fn dijkstra(&self, source: usize) -> Vec<f64> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;

        #[derive(PartialEq)]
        struct Key(f64);
        impl Eq for Key {}
        impl PartialOrd for Key {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Key {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                self.0.total_cmp(&other.0)
            }
        }

        let mut dist = vec![f64::INFINITY; self.vertex_count()];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((Key(0.0), source)));
        while let Some(Reverse((Key(d), v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for s in &self.slots[v] {
                let e = &self.edges[s.edge];
                let w = e.endpoint(s.end.opposite());
                let nd = d + e.length;
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(Reverse((Key(nd), w)));
                }
            }
        }
        dist
    }
}

/// Position of a node of a subdivided graph on the original metric graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeCoordinate {
    /// An original vertex.
    Vertex(usize),
    /// Interior point of an original edge at coordinate `x` in `(0, length)`.
    Interior { edge: usize, x: f64 },
}

/// Result of `subdivide`: the refined graph and where its nodes sit.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub graph: WeightedGraph,
    pub nodes: Vec<NodeCoordinate>,
    /// For every original edge, the refined vertex indices from tail to head.
    pub edge_nodes: Vec<Vec<usize>>,
}

/// Replaces every edge `e` by `ceil(n_per_unit * length)` equal sub-edges.
/// Original vertices keep their indices and names; interior nodes are
/// appended and named `<edge>:<k>`.
pub fn subdivide(g: &WeightedGraph, n_per_unit: usize) -> Result<Subdivision> {
    if n_per_unit == 0 {
        return Err(Error::InvalidArgument("n_per_unit must be positive".into()));
    }
    let mut names: Vec<String> = g.vertex_names().to_vec();
    let mut nodes: Vec<NodeCoordinate> = (0..g.vertex_count()).map(NodeCoordinate::Vertex).collect();
    let mut edges = Vec::new();
    let mut edge_nodes = Vec::with_capacity(g.edge_count());
    for (ei, e) in g.edges().iter().enumerate() {
        let pieces = pieces_for(e.length, n_per_unit);
        let h = e.length / pieces as f64;
        let mut chain = vec![e.tail];
        for k in 1..pieces {
            names.push(format!("{}:{}", e.name, k));
            nodes.push(NodeCoordinate::Interior {
                edge: ei,
                x: h * k as f64,
            });
            chain.push(names.len() - 1);
        }
        chain.push(e.head);
        for k in 0..pieces {
            edges.push(Edge {
                name: format!("{}/{}", e.name, k + 1),
                tail: chain[k],
                head: chain[k + 1],
                length: h,
            });
        }
        edge_nodes.push(chain);
    }
    Ok(Subdivision {
        graph: WeightedGraph::new(names, edges)?,
        nodes,
        edge_nodes,
    })
}

/// Number of equal pieces an edge of the given length is cut into.
pub fn pieces_for(length: f64, n_per_unit: usize) -> usize {
    // guard against 1.5 * 2 = 3.0000000000000004
    let raw = n_per_unit as f64 * length;
    let rounded = raw.round();
    let p = if (raw - rounded).abs() < 1e-9 * raw.max(1.0) {
        rounded
    } else {
        raw.ceil()
    };
    (p as usize).max(1)
}
