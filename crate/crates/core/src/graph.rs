//! Simple undirected graphs used by the influence and cut objectives and
//! by the synthetic-network generators.

use crate::error::{Error, Result};

/// An undirected simple graph: no self-loops, no parallel edges.
/// Edges are stored normalized as `(min, max)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    vertices: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
}

impl SimpleGraph {
    pub fn new(vertices: usize, edges: &[(u32, u32)]) -> Result<SimpleGraph> {
        let mut normalized: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u as usize >= vertices || v as usize >= vertices {
                return Err(Error::InvalidSpec(format!(
                    "edge ({u},{v}) out of range for {vertices} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidSpec(format!("self-loop at vertex {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidSpec(format!(
                    "duplicate edge ({},{})",
                    w[0].0, w[0].1
                )));
            }
        }
        let mut adj = vec![Vec::new(); vertices];
        for &(u, v) in &normalized {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Ok(SimpleGraph {
            vertices,
            edges: normalized,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edge_count() as f64 / self.vertex_count() as f64
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertices).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Whitespace-separated edge list, one `u v` pair per line, 0-indexed.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list format written by [`SimpleGraph::to_edge_list`].
    /// The vertex count is one past the largest endpoint mentioned.
    pub fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
        let mut edges = Vec::new();
        let mut max_v = 0u32;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<u32> {
                tok.and_then(|t| t.parse().ok()).ok_or_else(|| {
                    Error::Parse(format!("bad edge list line {}: {line:?}", lineno + 1))
                })
            };
            let u = parse(parts.next())?;
            let v = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::Parse(format!(
                    "bad edge list line {}: {line:?}",
                    lineno + 1
                )));
            }
            max_v = max_v.max(u).max(v);
            edges.push((u, v));
        }
        SimpleGraph::new(max_v as usize + 1, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(SimpleGraph::new(3, &[(0, 0)]).is_err());
        assert!(SimpleGraph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::new(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = SimpleGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.mean_degree(), 1.5);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = SimpleGraph::new(4, &[(2, 3), (0, 1)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "0 1\n2 3\n");
        assert_eq!(SimpleGraph::parse_edge_list(&text).unwrap(), g);
    }
}
