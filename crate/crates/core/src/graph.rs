//! Weighted graphs `(b, c)` over a discrete measure space `(X, m)`.
//!
//! Vertices are the contiguous indices `0..N`, each carrying a string label
//! used for reporting and file I/O. Edge weights live in a pair-keyed table
//! that stores every unordered pair exactly once, so `b(x, y) = b(y, x)` holds
//! by construction.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    measure: Vec<f64>,
    potential: Vec<f64>,
    edges: BTreeMap<(usize, usize), f64>,
}

fn pair(x: usize, y: usize) -> (usize, usize) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

impl Graph {
    /// Graph without edges and with zero potential, labelled `0..N`.
    pub fn new(measure: Vec<f64>) -> Self {
        let labels = (0..measure.len()).map(|i| i.to_string()).collect();
        Self::with_labels(labels, measure)
    }

    pub fn with_labels(labels: Vec<String>, measure: Vec<f64>) -> Self {
        assert_eq!(labels.len(), measure.len(), "one label per vertex");
        let potential = vec![0.0; measure.len()];
        Self {
            labels,
            measure,
            potential,
            edges: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.measure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measure.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// Sets `b(x, y) = b(y, x) = weight`, replacing any previous weight.
    /// Loops are stored so that [`Graph::validate`] can report them.
    pub fn set_edge(&mut self, x: usize, y: usize, weight: f64) -> Result<()> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        self.edges.insert(pair(x, y), weight);
        Ok(())
    }

    pub fn with_edge(mut self, x: usize, y: usize, weight: f64) -> Result<Self> {
        self.set_edge(x, y, weight)?;
        Ok(self)
    }

    pub fn set_potential(&mut self, potential: Vec<f64>) -> Result<()> {
        check_len(self.len(), potential.len())?;
        self.potential = potential;
        Ok(())
    }

    pub fn with_potential(mut self, potential: Vec<f64>) -> Result<Self> {
        self.set_potential(potential)?;
        Ok(self)
    }

    /// Copy of the graph whose potential is `self.potential + extra`.
    pub fn add_potential(&self, extra: &[f64]) -> Result<Self> {
        check_len(self.len(), extra.len())?;
        let mut out = self.clone();
        for (c, e) in out.potential.iter_mut().zip(extra) {
            *c += e;
        }
        Ok(out)
    }

    pub fn edge_weight(&self, x: usize, y: usize) -> f64 {
        self.edges.get(&pair(x, y)).copied().unwrap_or(0.0)
    }

    /// Stored edges as `(x, y, b)` with `x <= y`, each unordered pair once.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(x, y), &b)| (x, y, b))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbour lists `x -> [(y, b(x, y))]`, loops excluded.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (x, y, b) in self.edges() {
            if x != y {
                adj[x].push((y, b));
                adj[y].push((x, b));
            }
        }
        adj
    }

    /// Weighted degree `Σ_y b(x, y)`.
    pub fn degree(&self, x: usize) -> Result<f64> {
        self.check_vertex(x)?;
        Ok(self
            .edges()
            .filter(|&(u, v, _)| u == x || v == x)
            .map(|(_, _, b)| b)
            .sum())
    }

    /// All weighted degrees at once, summed in edge-table order.
    pub fn degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.len()];
        for (x, y, b) in self.edges() {
            deg[x] += b;
            if x != y {
                deg[y] += b;
            }
        }
        deg
    }

    /// Inner product of `ℓ²(X, m)`: `Σ_x f(x) g(x) m(x)`.
    pub fn weighted_inner_product(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        check_len(self.len(), f.len())?;
        check_len(self.len(), g.len())?;
        Ok(f.iter()
            .zip(g)
            .zip(&self.measure)
            .map(|((a, b), m)| a * b * m)
            .sum())
    }

    /// Reports every violated invariant. Never aborts.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (x, &m) in self.measure.iter().enumerate() {
            if !m.is_finite() {
                violations.push(Violation::NonFiniteMeasure(self.labels[x].clone()));
            } else if m <= 0.0 {
                violations.push(Violation::NonPositiveMeasure(self.labels[x].clone()));
            }
        }
        for (x, &c) in self.potential.iter().enumerate() {
            if !c.is_finite() {
                violations.push(Violation::NonFinitePotential(self.labels[x].clone()));
            } else if c < 0.0 {
                violations.push(Violation::NegativePotential(self.labels[x].clone()));
            }
        }
        for (x, y, b) in self.edges() {
            if x == y {
                violations.push(Violation::Loop(self.labels[x].clone()));
            }
            if !b.is_finite() {
                violations.push(Violation::NonFiniteEdgeWeight(
                    self.labels[x].clone(),
                    self.labels[y].clone(),
                ));
            } else if b < 0.0 {
                violations.push(Violation::NegativeEdgeWeight(
                    self.labels[x].clone(),
                    self.labels[y].clone(),
                ));
            }
        }
        for (x, d) in self.degrees().into_iter().enumerate() {
            // only reachable through overflow of finite weights
            if d.is_infinite() {
                violations.push(Violation::InfiniteDegree(self.labels[x].clone()));
            }
        }
        ValidationReport(violations)
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(report))
        }
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex {
                index: x,
                len: self.len(),
            })
        }
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

/// `c_M`: keeps `c` on the first `m` vertices and zeroes the rest.
pub fn truncate_potential(c: &[f64], m: usize) -> Result<Vec<f64>> {
    if m > c.len() {
        return Err(Error::TruncationOutOfRange { m, len: c.len() });
    }
    Ok(c.iter()
        .enumerate()
        .map(|(i, &v)| if i < m { v } else { 0.0 })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonPositiveMeasure(String),
    NonFiniteMeasure(String),
    NegativePotential(String),
    NonFinitePotential(String),
    Loop(String),
    NegativeEdgeWeight(String, String),
    NonFiniteEdgeWeight(String, String),
    InfiniteDegree(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveMeasure(x) => write!(f, "nonpositive measure at vertex {x}"),
            Violation::NonFiniteMeasure(x) => write!(f, "non-finite measure at vertex {x}"),
            Violation::NegativePotential(x) => write!(f, "negative potential at vertex {x}"),
            Violation::NonFinitePotential(x) => write!(f, "non-finite potential at vertex {x}"),
            Violation::Loop(x) => write!(f, "loop at vertex {x}"),
            Violation::NegativeEdgeWeight(x, y) => {
                write!(f, "negative edge weight between vertices {x} and {y}")
            }
            Violation::NonFiniteEdgeWeight(x, y) => {
                write!(f, "non-finite edge weight between vertices {x} and {y}")
            }
            Violation::InfiniteDegree(x) => write!(f, "infinite degree at vertex {x}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport(pub Vec<Violation>);

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.0.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.0
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vertex() -> Graph {
        Graph::new(vec![1.0, 1.0]).with_edge(0, 1, 1.0).unwrap()
    }

    #[test]
    fn valid_graph_has_empty_report() {
        assert!(two_vertex().validate().is_valid());
    }

    #[test]
    fn loop_is_reported() {
        let g = Graph::new(vec![1.0, 1.0]).with_edge(0, 0, 1.0).unwrap();
        let report = g.validate();
        assert!(report.to_string().contains("loop at vertex 0"));
    }

    #[test]
    fn nonpositive_measure_is_reported() {
        let g = Graph::new(vec![1.0, 0.0]);
        assert!(g
            .validate()
            .to_string()
            .contains("nonpositive measure at vertex 1"));
    }

    #[test]
    fn every_violation_is_listed() {
        let g = Graph::new(vec![-1.0, 1.0, 1.0])
            .with_edge(1, 1, 2.0)
            .unwrap()
            .with_edge(0, 2, -3.0)
            .unwrap()
            .with_potential(vec![0.0, -1.0, f64::NAN])
            .unwrap();
        assert_eq!(g.validate().violations().len(), 5);
    }

    #[test]
    fn edges_are_symmetric_by_construction() {
        let mut g = Graph::new(vec![1.0; 3]);
        g.set_edge(2, 0, 4.0).unwrap();
        assert_eq!(g.edge_weight(0, 2), 4.0);
        assert_eq!(g.edge_weight(2, 0), 4.0);
        g.set_edge(0, 2, 5.0).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge_weight(2, 0), 5.0);
    }

    #[test]
    fn degree_of_path_vertex() {
        let g = Graph::new(vec![1.0; 3])
            .with_edge(0, 1, 1.0)
            .unwrap()
            .with_edge(1, 2, 4.0)
            .unwrap();
        assert_eq!(g.degree(1).unwrap(), 5.0);
        assert_eq!(g.degrees(), vec![1.0, 5.0, 4.0]);
    }

    #[test]
    fn isolated_vertex_has_zero_degree() {
        let g = Graph::new(vec![1.0; 2]);
        assert_eq!(g.degree(0).unwrap(), 0.0);
    }

    #[test]
    fn degree_of_unknown_vertex_fails() {
        assert!(matches!(
            two_vertex().degree(7),
            Err(Error::UnknownVertex { index: 7, len: 2 })
        ));
    }

    #[test]
    fn inner_product_examples() {
        let g = Graph::new(vec![2.0]);
        assert_eq!(g.weighted_inner_product(&[1.0], &[1.0]).unwrap(), 2.0);
        let g = Graph::new(vec![1.0, 4.0]);
        assert_eq!(
            g.weighted_inner_product(&[1.0, 1.0], &[2.0, -1.0]).unwrap(),
            -2.0
        );
        assert_eq!(
            g.weighted_inner_product(&[3.0, -7.0], &[0.0, 0.0]).unwrap(),
            0.0
        );
        assert!(matches!(
            g.weighted_inner_product(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn potential_truncation() {
        assert_eq!(
            truncate_potential(&[1.0, 2.0, 3.0], 2).unwrap(),
            vec![1.0, 2.0, 0.0]
        );
        assert_eq!(
            truncate_potential(&[1.0, 2.0, 3.0], 3).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        assert_eq!(
            truncate_potential(&[5.0, 0.0, 7.0], 1).unwrap(),
            vec![5.0, 0.0, 0.0]
        );
        assert_eq!(truncate_potential(&[5.0, 1.0], 0).unwrap(), vec![0.0, 0.0]);
        assert!(truncate_potential(&[5.0], 2).is_err());
    }
}
