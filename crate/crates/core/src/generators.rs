//! Seeded random graphs and vertex spaces, and a fixed suite of small
//! graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::{Edge, WeightedGraph};
use crate::linalg::{c, orthonormalize, CVector};
use crate::space::{make_space, SpaceKind, TotalVertexSpace, VertexSpace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct GraphShape {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Edges added on top of a spanning tree.
    pub max_extra_edges: usize,
    pub equilateral: bool,
    /// No double edges.
    pub simple: bool,
    pub min_length: f64,
    pub max_length: f64,
}

impl Default for GraphShape {
    fn default() -> Self {
        GraphShape {
            min_vertices: 2,
            max_vertices: 6,
            max_extra_edges: 4,
            equilateral: false,
            simple: false,
            min_length: 0.5,
            max_length: 2.0,
        }
    }
}

/// A connected graph without self-loops: a random spanning tree plus extra
/// edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, shape: GraphShape) -> WeightedGraph {
    let n = rng.random_range(shape.min_vertices.max(2)..=shape.max_vertices.max(2));
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    let extra = rng.random_range(0..=shape.max_extra_edges);
    let mut attempts = 0;
    while pairs.len() < n - 1 + extra && attempts < 100 {
        attempts += 1;
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let (a, b) = (a.min(b), a.max(b));
        if shape.simple && pairs.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (a, b)) {
            continue;
        }
        pairs.push((a, b));
    }
    let edges = pairs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let length = if shape.equilateral {
                1.0
            } else {
                let x: f64 = rng.random_range(shape.min_length..shape.max_length);
                // two decimals keep lengths readable in files
                (x * 100.0).round() / 100.0
            };
            let (tail, head) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
            Edge { name: format!("e{}", i + 1), tail, head, length }
        })
        .collect();
    WeightedGraph::new(names, edges).expect("generated graph is valid")
}

fn random_complex_vector<R: Rng>(rng: &mut R, n: usize, complex: bool) -> CVector {
    CVector::from_fn(n, |_, _| {
        let re: f64 = rng.random_range(-1.0..1.0);
        let im: f64 = if complex { rng.random_range(-1.0..1.0) } else { 0.0 };
        c(re, im)
    })
}

/// A generic subspace of `ℂ^deg` with random dimension.
pub fn random_vertex_space<R: Rng>(rng: &mut R, vertex: usize, degree: usize, complex: bool) -> VertexSpace {
    let dim = rng.random_range(0..=degree);
    random_vertex_space_of_dim(rng, vertex, degree, dim, complex)
}

pub fn random_vertex_space_of_dim<R: Rng>(
    rng: &mut R,
    vertex: usize,
    degree: usize,
    dim: usize,
    complex: bool,
) -> VertexSpace {
    loop {
        let vs: Vec<CVector> = (0..dim).map(|_| random_complex_vector(rng, degree, complex)).collect();
        if let Ok(s) = VertexSpace::from_vectors(vertex, degree, &vs) {
            return s;
        }
    }
}

/// Every vertex gets either a named space or a generic one.
pub fn random_total_space<R: Rng>(rng: &mut R, g: &WeightedGraph) -> TotalVertexSpace {
    let spaces = (0..g.vertex_count())
        .map(|v| {
            let d = g.degree(v);
            let kind = match rng.random_range(0..7) {
                0 => Some(SpaceKind::Standard),
                1 => Some(SpaceKind::Minimal),
                2 => Some(SpaceKind::Maximal),
                3 => Some(SpaceKind::DualStandard),
                4 if d >= 2 => Some(SpaceKind::Magnetic(rng.random_range(1..d))),
                _ => None,
            };
            match kind {
                Some(k) => make_space(k, g, v).expect("named space"),
                None => {
                    let complex = rng.random_bool(0.5);
                    random_vertex_space(rng, v, d, complex)
                }
            }
        })
        .collect();
    TotalVertexSpace::new(g, spaces).expect("spaces match degrees")
}

/// `(𝒢₁, 𝒢₂)` with `𝒢₁,v ⊆ 𝒢₂,v` at every vertex.
pub fn random_nested_pair<R: Rng>(rng: &mut R, g: &WeightedGraph) -> (TotalVertexSpace, TotalVertexSpace) {
    let mut small = Vec::new();
    let mut large = Vec::new();
    for v in 0..g.vertex_count() {
        let d = g.degree(v);
        let complex = rng.random_bool(0.5);
        let outer = random_vertex_space(rng, v, d, complex);
        let k = outer.dim();
        let sub = rng.random_range(0..=k);
        let b = outer.basis().clone();
        let inner_vectors: Vec<CVector> = loop {
            let coeffs: Vec<CVector> = (0..sub).map(|_| random_complex_vector(rng, k, complex)).collect();
            let vs: Vec<CVector> = coeffs.iter().map(|x| &b * x).collect();
            if orthonormalize(&vs, d).ncols() == sub {
                break vs;
            }
        };
        small.push(VertexSpace::from_vectors(v, d, &inner_vectors).expect("independent vectors"));
        large.push(outer);
    }
    (
        TotalVertexSpace::new(g, small).expect("spaces match degrees"),
        TotalVertexSpace::new(g, large).expect("spaces match degrees"),
    )
}

fn build(vertices: &[&str], edges: &[(&str, &str, f64)]) -> WeightedGraph {
    WeightedGraph::from_edge_list(vertices, edges).expect("suite graph is valid")
}

pub fn interval() -> WeightedGraph {
    build(&["a", "b"], &[("a", "b", 1.0)])
}

pub fn triangle() -> WeightedGraph {
    build(&["v1", "v2", "v3"], &[("v1", "v2", 1.0), ("v2", "v3", 1.0), ("v3", "v1", 1.0)])
}

pub fn theta() -> WeightedGraph {
    build(&["u", "w"], &[("u", "w", 1.0), ("u", "w", 1.0), ("u", "w", 1.0)])
}

pub fn cycle(n: usize) -> WeightedGraph {
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<(&str, &str, f64)> = (0..n).map(|i| (refs[i], refs[(i + 1) % n], 1.0)).collect();
    build(&refs, &edges)
}

pub fn complete(n: usize) -> WeightedGraph {
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((refs[i], refs[j], 1.0));
        }
    }
    build(&refs, &edges)
}

pub fn star() -> WeightedGraph {
    build(&["c", "a", "b", "d"], &[("c", "a", 1.0), ("c", "b", std::f64::consts::SQRT_2), ("c", "d", 1.7)])
}

pub fn lollipop() -> WeightedGraph {
    build(
        &["v1", "v2", "v3", "t"],
        &[("v1", "v2", 1.0), ("v2", "v3", 1.0), ("v3", "v1", 1.0), ("v1", "t", 1.0)],
    )
}

/// The named test graphs.
pub fn suite() -> Vec<(&'static str, WeightedGraph)> {
    vec![
        ("interval", interval()),
        ("triangle", triangle()),
        ("theta", theta()),
        ("c4", cycle(4)),
        ("k4", complete(4)),
        ("star", star()),
        ("lollipop", lollipop()),
    ]
}

/// Magnetic, standard and maximal spaces plus seeded generic ones on a graph.
pub fn space_family(g: &WeightedGraph, seed: u64, random: usize) -> Result<Vec<(String, TotalVertexSpace)>> {
    let mut out = vec![
        ("standard".to_string(), TotalVertexSpace::standard(g)),
        ("maximal".to_string(), TotalVertexSpace::uniform(g, SpaceKind::Maximal)?),
        ("minimal".to_string(), TotalVertexSpace::uniform(g, SpaceKind::Minimal)?),
        ("dual-standard".to_string(), TotalVertexSpace::uniform(g, SpaceKind::DualStandard)?),
    ];
    let mut r = rng(seed);
    for i in 0..random {
        out.push((format!("random-{i}"), random_total_space(&mut r, g)));
    }
    Ok(out)
}
