use crate::eigensolve::{eigendecompose, Spectrum};
use crate::error::{Error, Result};
use crate::graph::{check_len, Graph};
use crate::operator::OperatorMatrix;

/// Eigenvalue shifts `λ_n(c) − λ_n(0)` caused by adding a potential,
/// paired by sorted index, against the target `Σ_x c(x)/m(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub baseline: Vec<f64>,
    pub perturbed: Vec<f64>,
    pub diffs: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub target: f64,
    pub discrepancy: f64,
    /// Largest residual over both solves.
    pub residual: f64,
    pub max_potential_ratio: f64,
}

impl ComparisonReport {
    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    /// `discrepancy ≤ tol · (1 + |target|)`.
    pub fn passes(&self, tol: f64) -> bool {
        self.discrepancy <= tol * (1.0 + self.target.abs())
    }

    /// Most negative shift; min-max keeps this at or above zero.
    pub fn min_diff(&self) -> f64 {
        self.diffs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self) -> f64 {
        self.diffs.iter().fold(0.0, |a, d| a.max(d.abs()))
    }
}

pub(crate) fn check_potential(len: usize, c: &[f64]) -> Result<()> {
    check_len(len, c.len())?;
    for (vertex, &value) in c.iter().enumerate() {
        if value.is_nan() || value < 0.0 {
            return Err(Error::NegativePotential { vertex, value });
        }
    }
    Ok(())
}

pub(crate) fn solve(graph: &Graph) -> Result<Spectrum> {
    eigendecompose(&OperatorMatrix::assemble(graph)?)
}

/// `Σ_x c(x)/m(x)`.
pub fn potential_mass(c: &[f64], m: &[f64]) -> f64 {
    c.iter().zip(m).map(|(c, m)| c / m).sum()
}

/// Compares `graph` as given (its own potential is the baseline) with the
/// same graph carrying the additional potential `c`.
pub fn spectral_comparison(graph: &Graph, c: &[f64]) -> Result<ComparisonReport> {
    check_potential(graph.len(), c)?;
    let base = solve(graph)?;
    let perturbed_graph = graph.add_potential(c)?;
    let pert = solve(&perturbed_graph)?;
    Ok(build_report(&base, &pert, c, graph.measure()))
}

pub(crate) fn build_report(base: &Spectrum, pert: &Spectrum, c: &[f64], m: &[f64]) -> ComparisonReport {
    let diffs: Vec<f64> = pert
        .eigenvalues()
        .iter()
        .zip(base.eigenvalues())
        .map(|(a, b)| a - b)
        .collect();
    let partial_sums: Vec<f64> = diffs
        .iter()
        .scan(0.0, |acc, d| {
            *acc += d;
            Some(*acc)
        })
        .collect();
    let target = potential_mass(c, m);
    let total = partial_sums.last().copied().unwrap_or(0.0);
    ComparisonReport {
        baseline: base.eigenvalues().to_vec(),
        perturbed: pert.eigenvalues().to_vec(),
        diffs,
        partial_sums,
        target,
        discrepancy: (total - target).abs(),
        residual: base.residual_bound().max(pert.residual_bound()),
        max_potential_ratio: crate::operator::max_potential_ratio(c, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vertex() -> Graph {
        Graph::new(vec![1.0, 1.0]).with_edge(0, 1, 1.0).unwrap()
    }

    #[test]
    fn zero_potential_changes_nothing() {
        let r = spectral_comparison(&two_vertex(), &[0.0, 0.0]).unwrap();
        assert_eq!(r.diffs, vec![0.0, 0.0]);
        assert_eq!(r.target, 0.0);
    }

    #[test]
    fn two_vertex_example() {
        let r = spectral_comparison(&two_vertex(), &[0.0, 1.0]).unwrap();
        let s5 = 5f64.sqrt();
        assert!((r.perturbed[0] - (3.0 - s5) / 2.0).abs() < 1e-14);
        assert!((r.perturbed[1] - (3.0 + s5) / 2.0).abs() < 1e-14);
        assert_eq!(r.target, 1.0);
        assert!(r.discrepancy < 1e-14);
        assert!(r.passes(1e-9));
    }

    #[test]
    fn negative_potential_is_rejected() {
        assert!(matches!(
            spectral_comparison(&two_vertex(), &[0.0, -1.0]),
            Err(Error::NegativePotential { vertex: 1, .. })
        ));
        assert!(matches!(
            spectral_comparison(&two_vertex(), &[0.0, f64::NAN]),
            Err(Error::NegativePotential { .. })
        ));
    }
}
