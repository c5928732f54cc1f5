//! Derivative of `λ_n(τc)` along the potential path `τ ↦ τc`: the analytic
//! formula `Σ_x c(x) |f_n^{τc}(x)|²` and a finite-difference oracle.

use super::comparison::{check_potential, solve};
use super::compensated::TwoF64;
use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::operator::OperatorMatrix;

fn scaled(c: &[f64], tau: f64) -> Vec<f64> {
    c.iter().map(|v| tau * v).collect()
}

fn check_index(n: usize, len: usize) -> Result<()> {
    if n < len {
        Ok(())
    } else {
        Err(Error::UnknownEigenvalue { index: n, len })
    }
}

fn require_simple(spectrum: &Spectrum, n: usize) -> Result<()> {
    if spectrum.is_simple(n) {
        Ok(())
    } else {
        Err(Error::DegenerateEigenvalue {
            index: n,
            gap: spectrum.gap(n),
        })
    }
}

/// `d/dτ λ_n(τc) = Σ_x c(x) |f_n^{τc}(x)|²` for a simple eigenvalue
/// (`n` is 0-based). The baseline is the graph's own potential.
pub fn hadamard_derivative(graph: &Graph, c: &[f64], tau: f64, n: usize) -> Result<f64> {
    check_potential(graph.len(), c)?;
    check_index(n, graph.len())?;
    let spectrum = solve(&graph.add_potential(&scaled(c, tau))?)?;
    require_simple(&spectrum, n)?;
    Ok(derivative_from(&spectrum, c, n))
}

/// The formula for every `n` at once. No simplicity check: the sum over a
/// degenerate cluster is basis independent.
pub fn hadamard_derivatives(graph: &Graph, c: &[f64], tau: f64) -> Result<Vec<f64>> {
    check_potential(graph.len(), c)?;
    let spectrum = solve(&graph.add_potential(&scaled(c, tau))?)?;
    Ok((0..spectrum.len())
        .map(|n| derivative_from(&spectrum, c, n))
        .collect())
}

fn derivative_from(spectrum: &Spectrum, c: &[f64], n: usize) -> f64 {
    spectrum
        .eigenfunctions()
        .column(n)
        .iter()
        .zip(c)
        .map(|(f, c)| c * f * f)
        .sum()
}

/// Difference stencil for `d/dτ`, all second order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stencil {
    /// `(λ(τ+h) − λ(τ−h)) / 2h`
    Central,
    /// `(−3λ(τ) + 4λ(τ+h) − λ(τ+2h)) / 2h`
    Forward,
    /// `(λ(τ−2h) − 4λ(τ−h) + 3λ(τ)) / 2h`
    Backward,
}

impl Stencil {
    fn offsets(self) -> &'static [(f64, f64)] {
        match self {
            Stencil::Central => &[(-1.0, -1.0), (1.0, 1.0)],
            Stencil::Forward => &[(0.0, -3.0), (1.0, 4.0), (2.0, -1.0)],
            Stencil::Backward => &[(-2.0, 1.0), (-1.0, -4.0), (0.0, 3.0)],
        }
    }

    /// Central where it fits in `[0, 1]`, one-sided at the ends.
    pub fn fitting(tau: f64, h: f64) -> Self {
        if tau - h < 0.0 {
            Stencil::Forward
        } else if tau + h > 1.0 {
            Stencil::Backward
        } else {
            Stencil::Central
        }
    }
}

/// Central difference `(λ_n((τ+h)c) − λ_n((τ−h)c)) / 2h`; the stencil must
/// stay inside `[0, 1]`.
pub fn hadamard_fd_oracle(graph: &Graph, c: &[f64], tau: f64, n: usize, h: f64) -> Result<f64> {
    fd_derivative(graph, c, tau, n, h, Stencil::Central)
}

/// Finite-difference derivative of `λ_n(τc)`.
///
/// Each stencil eigenvalue is re-evaluated as a Rayleigh quotient of
/// `A(0) + τ·diag(c/m)` in double-double arithmetic, which removes the
/// `ε‖A‖/h` rounding floor of a plain difference. A branch change inside
/// the stencil (loss of simplicity, or the n-th eigenvector rotating away
/// from the one at `τ`) is an error.
pub fn fd_derivative(
    graph: &Graph,
    c: &[f64],
    tau: f64,
    n: usize,
    h: f64,
    stencil: Stencil,
) -> Result<f64> {
    check_potential(graph.len(), c)?;
    check_index(n, graph.len())?;
    let run = StencilRun::new(graph, c, tau, h, stencil)?;
    require_simple(&run.center, n)?;
    run.derivative(n)
}

/// [`fd_derivative`] for every index, sharing the stencil solves. Entries
/// fail individually for degenerate eigenvalues or crossings.
pub fn fd_derivatives(
    graph: &Graph,
    c: &[f64],
    tau: f64,
    h: f64,
    stencil: Stencil,
) -> Result<Vec<Result<f64>>> {
    check_potential(graph.len(), c)?;
    let run = StencilRun::new(graph, c, tau, h, stencil)?;
    Ok((0..graph.len())
        .map(|n| {
            require_simple(&run.center, n)?;
            run.derivative(n)
        })
        .collect())
}

struct StencilRun {
    base: OperatorMatrix,
    ratio: Vec<f64>,
    center: Spectrum,
    points: Vec<(f64, f64, Spectrum)>,
    width: TwoF64,
}

impl StencilRun {
    fn new(graph: &Graph, c: &[f64], tau: f64, h: f64, stencil: Stencil) -> Result<Self> {
        let nodes: Vec<(f64, f64)> = stencil
            .offsets()
            .iter()
            .map(|&(k, w)| (tau + k * h, w))
            .collect();
        let lo = nodes.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = nodes.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        if lo < 0.0 || hi > 1.0 {
            return Err(Error::StencilOutOfRange { lo, hi });
        }
        let base = OperatorMatrix::assemble(graph)?;
        let ratio = c.iter().zip(graph.measure()).map(|(c, m)| c / m).collect();
        let center = solve(&graph.add_potential(&scaled(c, tau))?)?;
        let points = nodes
            .iter()
            .map(|&(p, w)| Ok((p, w, solve(&graph.add_potential(&scaled(c, p))?)?)))
            .collect::<Result<Vec<_>>>()?;
        let width = match stencil {
            Stencil::Central => TwoF64::from_f64(nodes[1].0) - TwoF64::from_f64(nodes[0].0),
            _ => TwoF64::from_f64(2.0 * h),
        };
        Ok(Self {
            base,
            ratio,
            center,
            points,
            width,
        })
    }

    fn derivative(&self, n: usize) -> Result<f64> {
        let reference = self.center.unweighted_vector(n);
        let mut acc = TwoF64::default();
        for (point, weight, spectrum) in &self.points {
            let v = spectrum.unweighted_vector(n);
            let overlap: f64 = v.iter().zip(&reference).map(|(a, b)| a * b).sum();
            if !spectrum.is_simple(n) || overlap.abs() < std::f64::consts::FRAC_1_SQRT_2 {
                return Err(Error::EigenvalueCrossing { index: n });
            }
            let lambda = rayleigh_quotient(&self.base, &self.ratio, *point, &v);
            acc = acc + lambda.mul_f64(*weight);
        }
        Ok((acc / self.width).to_f64())
    }
}

/// `vᵀ(A₀ + τP)v / vᵀv` with `P = diag(ratio)`, accumulated exactly enough
/// that the only error left is the eigenvector's (second order).
fn rayleigh_quotient(base: &OperatorMatrix, ratio: &[f64], tau: f64, v: &[f64]) -> TwoF64 {
    let a = base.matrix();
    let n = v.len();
    let mut quad = TwoF64::default();
    let mut pot = TwoF64::default();
    let mut norm = TwoF64::default();
    for x in 0..n {
        let mut row = TwoF64::default();
        for y in 0..n {
            let axy = a[(x, y)];
            if axy != 0.0 {
                row = row + TwoF64::product(axy, v[y]);
            }
        }
        quad = quad + row.mul_f64(v[x]);
        let sq = TwoF64::product(v[x], v[x]);
        pot = pot + sq.mul_f64(ratio[x]);
        norm = norm + sq;
    }
    (quad + pot.mul_f64(tau)) / norm
}
