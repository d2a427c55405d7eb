//! Line-based graph description format.
//!
//! ```text
//! graphspec v1
//! vertex <name>
//! edge <name> <tail> <head> <length>
//! space <vertex> standard | minimal | maximal | dualstandard | magnetic <p> | basis <k>
//! <k lines of deg(v) complex entries>
//! ```
//!
//! A token starting with `#` begins a comment that runs to the end of the
//! line. Vertices without a `space` line get the standard space.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::linalg::{c, CVector, C64};
use crate::space::{make_space, SpaceKind, TotalVertexSpace, VertexSpace};

const HEADER: &str = "graphspec v1";

enum SpaceDecl {
    Named(SpaceKind),
    Basis(Vec<(usize, Vec<C64>)>),
}

fn tokens(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for t in line.split_whitespace() {
        if t.starts_with('#') {
            break;
        }
        out.push(t);
    }
    out
}

/// Reads a graph and its vertex space.
pub fn parse_graph(text: &str) -> Result<(WeightedGraph, TotalVertexSpace)> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let mut it = lines.into_iter().peekable();
    match it.next() {
        Some((_, t)) if t.join(" ") == HEADER => {}
        Some((n, _)) => return Err(Error::parse(n, format!("expected `{HEADER}`"))),
        None => return Err(Error::parse(1, "empty input")),
    }

    let mut vertices: Vec<String> = Vec::new();
    let mut vindex: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut decls: Vec<(usize, usize, SpaceDecl)> = Vec::new();

    while let Some((n, t)) = it.next() {
        match t[0] {
            "vertex" => {
                if t.len() != 2 {
                    return Err(Error::parse(n, "usage: vertex <name>"));
                }
                if vindex.contains_key(t[1]) {
                    return Err(Error::parse(n, format!("duplicate vertex `{}`", t[1])));
                }
                vindex.insert(t[1].to_string(), vertices.len());
                vertices.push(t[1].to_string());
            }
            "edge" => {
                if t.len() != 5 {
                    return Err(Error::parse(n, "usage: edge <name> <tail> <head> <length>"));
                }
                let lookup = |name: &str| {
                    vindex
                        .get(name)
                        .copied()
                        .ok_or_else(|| Error::parse(n, format!("undeclared vertex `{name}`")))
                };
                let tail = lookup(t[2])?;
                let head = lookup(t[3])?;
                let length: f64 = t[4]
                    .parse()
                    .map_err(|_| Error::parse(n, format!("bad length `{}`", t[4])))?;
                if edges.iter().any(|e| e.name == t[1]) {
                    return Err(Error::parse(n, format!("duplicate edge `{}`", t[1])));
                }
                if !(length > 0.0) || !length.is_finite() {
                    return Err(Error::parse(n, format!("non-positive length {length}")));
                }
                edges.push(Edge {
                    name: t[1].to_string(),
                    tail,
                    head,
                    length,
                });
            }
            "space" => {
                if t.len() < 3 {
                    return Err(Error::parse(n, "usage: space <vertex> <kind>"));
                }
                let v = *vindex
                    .get(t[1])
                    .ok_or_else(|| Error::parse(n, format!("undeclared vertex `{}`", t[1])))?;
                if decls.iter().any(|(_, w, _)| *w == v) {
                    return Err(Error::parse(n, format!("second space for `{}`", t[1])));
                }
                let arg = |k: usize| -> Result<usize> {
                    if t.len() != 4 {
                        return Err(Error::parse(n, format!("`{}` takes one integer", t[2])));
                    }
                    t[3].parse::<usize>()
                        .map_err(|_| Error::parse(n, format!("bad integer `{}`", t[3])))
                        .map(|x| x + k)
                };
                let named = |kind| {
                    if t.len() != 3 {
                        Err(Error::parse(n, format!("`{}` takes no arguments", t[2])))
                    } else {
                        Ok(SpaceDecl::Named(kind))
                    }
                };
                let decl = match t[2] {
                    "standard" => named(SpaceKind::Standard)?,
                    "minimal" => named(SpaceKind::Minimal)?,
                    "maximal" => named(SpaceKind::Maximal)?,
                    "dualstandard" => named(SpaceKind::DualStandard)?,
                    "magnetic" => SpaceDecl::Named(SpaceKind::Magnetic(arg(0)?)),
                    "basis" => {
                        let k = arg(0)?;
                        let mut rows = Vec::with_capacity(k);
                        for _ in 0..k {
                            let (m, row) = it
                                .next()
                                .ok_or_else(|| Error::parse(n, "missing basis rows"))?;
                            let entries = row
                                .iter()
                                .map(|s| parse_complex(s).map_err(|e| Error::parse(m, e)))
                                .collect::<Result<Vec<_>>>()?;
                            rows.push((m, entries));
                        }
                        SpaceDecl::Basis(rows)
                    }
                    other => return Err(Error::parse(n, format!("unknown space kind `{other}`"))),
                };
                decls.push((n, v, decl));
            }
            other => return Err(Error::parse(n, format!("unknown directive `{other}`"))),
        }
    }

    let g = WeightedGraph::new(vertices, edges)?;
    let mut spaces: Vec<Option<VertexSpace>> = vec![None; g.vertex_count()];
    for (n, v, decl) in decls {
        let d = g.degree(v);
        let s = match decl {
            SpaceDecl::Named(kind) => make_space(kind, &g, v).map_err(|e| Error::parse(n, e.to_string()))?,
            SpaceDecl::Basis(rows) => {
                let mut vectors = Vec::with_capacity(rows.len());
                for (m, row) in rows {
                    if row.len() != d {
                        return Err(Error::parse(
                            m,
                            format!("basis vector has {} entries, deg `{}` = {d}", row.len(), g.vertex_name(v)),
                        ));
                    }
                    vectors.push(CVector::from_vec(row));
                }
                VertexSpace::from_vectors(v, d, &vectors)
                    .map_err(|_| Error::parse(n, "basis is rank-deficient"))?
            }
        };
        spaces[v] = Some(s);
    }
    let spaces = spaces
        .into_iter()
        .enumerate()
        .map(|(v, s)| match s {
            Some(s) => Ok(s),
            None => make_space(SpaceKind::Standard, &g, v),
        })
        .collect::<Result<Vec<_>>>()?;
    let total = TotalVertexSpace::new(&g, spaces)?;
    Ok((g, total))
}

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i`.
pub fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let bad = || format!("bad complex number `{s}`");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|x| c(x, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().map_err(|_| bad())?,
    };
    Ok(c(re, im))
}

pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Writes a graph and its vertex space so that `parse_graph` reads them back.
pub fn print_graph(g: &WeightedGraph, total: &TotalVertexSpace) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    for v in g.vertex_names() {
        writeln!(out, "vertex {v}").unwrap();
    }
    for e in g.edges() {
        writeln!(
            out,
            "edge {} {} {} {}",
            e.name,
            g.vertex_name(e.tail),
            g.vertex_name(e.head),
            e.length
        )
        .unwrap();
    }
    for (v, s) in total.spaces().iter().enumerate() {
        let name = g.vertex_name(v);
        match s.kind {
            SpaceKind::Standard => continue,
            SpaceKind::Custom => {
                writeln!(out, "space {name} basis {}", s.dim()).unwrap();
                for j in 0..s.dim() {
                    let row: Vec<String> = s.basis().column(j).iter().map(|z| format_complex(*z)).collect();
                    writeln!(out, "{}", row.join(" ")).unwrap();
                }
            }
            kind => writeln!(out, "space {name} {}", kind.name()).unwrap(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    const TRIANGLE: &str = "graphspec v1
# triangle
vertex v1
vertex v2
vertex v3
edge e1 v1 v2 1.0
edge e2 v2 v3 1.0
edge e3 v3 v1 1.0
";

    #[test]
    fn triangle_defaults_to_standard() {
        let (g, total) = parse_graph(TRIANGLE).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(total.spaces().iter().all(|s| s.kind == SpaceKind::Standard));
    }

    #[test]
    fn magnetic_at_degree_three() {
        let text = "graphspec v1
vertex v1
vertex a
vertex b
vertex c
edge e1 v1 a 1
edge e2 v1 b 1
edge e3 v1 c 1
space v1 magnetic 1
";
        let (_, total) = parse_graph(text).unwrap();
        let b = total.space(0).basis();
        let theta = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let s = 1.0 / 3f64.sqrt();
        assert!((b[(0, 0)] - c(s, 0.0)).norm() < 1e-15);
        assert!((b[(1, 0)] - theta * s).norm() < 1e-15);
        assert!((b[(2, 0)] - theta * theta * s).norm() < 1e-15);
    }

    #[test]
    fn undeclared_vertex_is_a_parse_error() {
        let text = "graphspec v1\nvertex a\nedge e a b 1\n";
        assert_eq!(parse_graph(text).unwrap_err(), Error::parse(3, "undeclared vertex `b`"));
    }

    #[test]
    fn basis_arity_and_rank_are_checked() {
        let base = "graphspec v1\nvertex a\nvertex b\nvertex c\nedge e1 a b 1\nedge e2 a c 1\n";
        let text = format!("{base}space a basis 1\n1 1 1\n");
        assert!(matches!(parse_graph(&text), Err(Error::Parse { line: 8, .. })));
        let text = format!("{base}space a basis 2\n1 1\n2 2\n");
        assert!(matches!(parse_graph(&text), Err(Error::Parse { line: 7, .. })));
    }

    #[test]
    fn complex_tokens() {
        assert_eq!(parse_complex("1.5").unwrap(), c(1.5, 0.0));
        assert_eq!(parse_complex("1-2i").unwrap(), c(1.0, -2.0));
        assert_eq!(parse_complex("-0.5+0.25i").unwrap(), c(-0.5, 0.25));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2e-3+1e+2i").unwrap(), c(2e-3, 1e2));
        assert!(parse_complex("1+").is_err());
    }

    #[test]
    fn print_round_trips() {
        let text = "graphspec v1
vertex c
vertex a
vertex b
vertex d
edge e1 c a 1
edge e2 c b 2.5
edge e3 c d 1
space c basis 2
1 i 1
1 0 -1
space a minimal
space d maximal
";
        let (g, total) = parse_graph(text).unwrap();
        let (g2, total2) = parse_graph(&print_graph(&g, &total)).unwrap();
        assert_eq!(g, g2);
        for v in 0..g.vertex_count() {
            assert_eq!(total.space(v).kind, total2.space(v).kind);
            assert!(max_abs(&(total.space(v).projection() - total2.space(v).projection())) < 1e-12);
        }
    }

    #[test]
    fn hash_inside_a_name_is_not_a_comment() {
        let text = "graphspec v1\nvertex v#1\nvertex w # trailing\nedge e v#1 w 1\n";
        let (g, _) = parse_graph(text).unwrap();
        assert_eq!(g.vertex_name(0), "v#1");
    }
}
