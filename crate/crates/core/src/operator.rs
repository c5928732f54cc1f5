//! The operator `L_{b,c}` and its quadratic form `Q_{b,c}`.
//!
//! `L` is self-adjoint in `ℓ²(X, m)`, not in the unweighted space. The solver
//! works with the unitarily equivalent symmetric matrix
//! `A = M^{1/2} L M^{-1/2}`:
//!
//! ```text
//! A(x, x) = (deg(x) + c(x)) / m(x)
//! A(x, y) = -b(x, y) / sqrt(m(x) m(y))      x != y
//! ```

use nalgebra::DMatrix;

use crate::error::Result;
use crate::family::TruncationFlavor;
use crate::graph::{check_len, Graph};

#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    matrix: DMatrix<f64>,
    graph: Graph,
    flavor: Option<TruncationFlavor>,
}

impl OperatorMatrix {
    pub fn assemble(graph: &Graph) -> Result<Self> {
        graph.ensure_valid()?;
        let n = graph.len();
        let m = graph.measure();
        let c = graph.potential();
        let deg = graph.degrees();
        let mut a = DMatrix::zeros(n, n);
        for x in 0..n {
            a[(x, x)] = deg[x] / m[x] + c[x] / m[x];
        }
        for (x, y, b) in graph.edges() {
            let v = -b / (m[x] * m[y]).sqrt();
            a[(x, y)] = v;
            a[(y, x)] = v;
        }
        Ok(Self {
            matrix: a,
            graph: graph.clone(),
            flavor: None,
        })
    }

    pub fn with_flavor(mut self, flavor: TruncationFlavor) -> Self {
        self.flavor = Some(flavor);
        self
    }

    pub fn flavor(&self) -> Option<TruncationFlavor> {
        self.flavor
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Maximum absolute row sum `‖A‖_∞`.
    pub fn inf_norm(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `max_x c(x)/m(x)`; large values signal that the bounded-potential
    /// hypothesis behind the Hadamard formula is degrading.
    pub fn max_potential_ratio(&self) -> f64 {
        max_potential_ratio(self.graph.potential(), self.graph.measure())
    }

    /// `(L f)(x)` straight from the defining sum, without touching `A`.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        apply(&self.graph, f)
    }

    /// `M^{-1/2} A M^{1/2} f`, which equals `L f`.
    pub fn apply_via_matrix(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), f.len())?;
        let m = self.graph.measure();
        let scaled = nalgebra::DVector::from_iterator(
            f.len(),
            f.iter().zip(m).map(|(v, w)| v * w.sqrt()),
        );
        let out = &self.matrix * scaled;
        Ok(out.iter().zip(m).map(|(v, w)| v / w.sqrt()).collect())
    }
}

pub fn max_potential_ratio(c: &[f64], m: &[f64]) -> f64 {
    c.iter().zip(m).map(|(c, m)| c / m).fold(0.0, f64::max)
}

/// `(L f)(x) = (1/m(x)) Σ_y b(x,y)(f(x) - f(y)) + (c(x)/m(x)) f(x)`.
pub fn apply(graph: &Graph, f: &[f64]) -> Result<Vec<f64>> {
    check_len(graph.len(), f.len())?;
    let m = graph.measure();
    let c = graph.potential();
    let mut flux = vec![0.0; graph.len()];
    for (x, y, b) in graph.edges() {
        let d = b * (f[x] - f[y]);
        flux[x] += d;
        flux[y] -= d;
    }
    Ok((0..graph.len())
        .map(|x| flux[x] / m[x] + c[x] / m[x] * f[x])
        .collect())
}

/// `Q(f, g) = ½ Σ_{x,y} b(x,y)(f(x)-f(y))(g(x)-g(y)) + Σ_x c(x) f(x) g(x)`.
///
/// Each unordered pair is stored once, so the half cancels against the
/// double count of the symmetric sum.
pub fn quadratic_form(graph: &Graph, f: &[f64], g: &[f64]) -> Result<f64> {
    check_len(graph.len(), f.len())?;
    check_len(graph.len(), g.len())?;
    let edge: f64 = graph
        .edges()
        .map(|(x, y, b)| b * (f[x] - f[y]) * (g[x] - g[y]))
        .sum();
    let pot: f64 = graph
        .potential()
        .iter()
        .zip(f.iter().zip(g))
        .map(|(c, (a, b))| c * a * b)
        .sum();
    Ok(edge + pot)
}
