use std::collections::{BTreeSet, HashMap, HashSet};

use super::digits::Digit;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: Digit,
}

/// Directed multigraph with digit-labelled edges presenting a sofic shift.
///
/// Construction checks that every vertex has an outgoing edge, so every
/// finite path extends to an infinite one. Right-resolving labelling is
/// checked separately by [`LabeledGraph::check_right_resolving`]; word
/// counting goes through the follower automaton and does not rely on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl LabeledGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        for e in &edges {
            for &v in &[e.source, e.target] {
                if v >= vertices.len() {
                    return Err(Error::UnknownVertex(format!("#{v}")));
                }
            }
        }
        let g = Self { vertices, edges };
        g.check_out_degree()?;
        Ok(g)
    }

    /// Builds a graph from `(source, target, label)` triples naming vertices.
    pub fn from_named<S: AsRef<str>>(
        vertices: Vec<String>,
        edges: impl IntoIterator<Item = (S, S, Digit)>,
    ) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        let edges = edges
            .into_iter()
            .map(|(s, t, label)| {
                Ok(Edge {
                    source: lookup(s.as_ref())?,
                    target: lookup(t.as_ref())?,
                    label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices, edges)
    }

    /// One vertex with a loop per digit: the full shift over `digits`.
    pub fn single_vertex(digits: &[Digit]) -> Self {
        let edges = digits
            .iter()
            .map(|d| Edge {
                source: 0,
                target: 0,
                label: d.clone(),
            })
            .collect();
        Self {
            vertices: vec!["0".to_string()],
            edges,
        }
    }

    /// Graph whose edges are the paths of length `m`, labelled by merging the
    /// `m` labels digit-wise over `bases` (first edge most significant).
    pub fn power(&self, bases: &[u32], m: u32) -> Self {
        assert!(m >= 1, "power of a graph needs m >= 1");
        let mut paths: Vec<Edge> = (0..self.vertices.len())
            .map(|v| Edge {
                source: v,
                target: v,
                label: vec![0; bases.len()],
            })
            .collect();
        for _ in 0..m {
            paths = paths
                .iter()
                .flat_map(|p| {
                    self.edges.iter().filter(move |e| e.source == p.target).map(move |e| Edge {
                        source: p.source,
                        target: e.target,
                        label: p
                            .label
                            .iter()
                            .zip(&e.label)
                            .zip(bases)
                            .map(|((&a, &c), &b)| a * b + c)
                            .collect(),
                    })
                })
                .collect();
        }
        Self {
            vertices: self.vertices.clone(),
            edges: paths,
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Distinct edge labels, sorted.
    pub fn labels(&self) -> Vec<Digit> {
        let set: BTreeSet<&Digit> = self.edges.iter().map(|e| &e.label).collect();
        set.into_iter().cloned().collect()
    }

    fn check_out_degree(&self) -> Result<()> {
        let mut out = vec![0usize; self.vertices.len()];
        for e in &self.edges {
            out[e.source] += 1;
        }
        match out.iter().position(|&d| d == 0) {
            Some(v) => Err(Error::DeadVertex {
                vertex: self.vertices[v].clone(),
            }),
            None => Ok(()),
        }
    }

    /// Succeeds iff no two edges leaving a vertex share a label and every
    /// vertex has an outgoing edge.
    pub fn check_right_resolving(&self) -> Result<()> {
        let mut seen: HashSet<(usize, &Digit)> = HashSet::new();
        for e in &self.edges {
            if !seen.insert((e.source, &e.label)) {
                return Err(Error::DuplicateLabelAtVertex {
                    vertex: self.vertices[e.source].clone(),
                    label: e.label.clone(),
                });
            }
        }
        self.check_out_degree()
    }

    pub fn is_right_resolving(&self) -> bool {
        self.check_right_resolving().is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn single_loop_is_right_resolving() {
        let g = LabeledGraph::from_named(names(1), [("1", "1", vec![0, 0])]).unwrap();
        assert!(g.check_right_resolving().is_ok());
    }

    #[test]
    fn duplicate_label_is_reported() {
        let g = LabeledGraph::from_named(
            names(2),
            [
                ("1", "1", vec![0, 1]),
                ("1", "2", vec![0, 1]),
                ("2", "1", vec![0, 0]),
            ],
        )
        .unwrap();
        assert_eq!(
            g.check_right_resolving().unwrap_err(),
            Error::DuplicateLabelAtVertex {
                vertex: "1".into(),
                label: vec![0, 1]
            }
        );
    }

    #[test]
    fn dead_vertex_rejected() {
        let err = LabeledGraph::from_named(names(2), [("1", "2", vec![0, 0])]).unwrap_err();
        assert_eq!(err, Error::DeadVertex { vertex: "2".into() });
    }

    #[test]
    fn unknown_vertex_rejected() {
        let err = LabeledGraph::from_named(names(1), [("1", "9", vec![0, 0])]).unwrap_err();
        assert_eq!(err, Error::UnknownVertex("9".into()));
    }
}
