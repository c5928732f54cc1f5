//! Heat kernel `p_t(x, y)` of `L` through the Mercer expansion
//! `Σ_n e^{-tλ_n} f_n(x) f_n(y)`.

use nalgebra::{DMatrix, DVector};

use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};
use crate::graph::check_len;
use crate::operator::OperatorMatrix;

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}

fn check_vertex(x: usize, len: usize) -> Result<()> {
    if x < len {
        Ok(())
    } else {
        Err(Error::UnknownVertex { index: x, len })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HeatKernel<'a> {
    spectrum: &'a Spectrum,
}

impl<'a> HeatKernel<'a> {
    pub fn new(spectrum: &'a Spectrum) -> Self {
        Self { spectrum }
    }

    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum
    }

    /// `p_t(x, y)`. At `t = 0` this is `δ_xy / m(x)`.
    pub fn kernel(&self, t: f64, x: usize, y: usize) -> Result<f64> {
        check_time(t)?;
        let s = self.spectrum;
        check_vertex(x, s.dim())?;
        check_vertex(y, s.dim())?;
        if t == 0.0 {
            return Ok(if x == y { 1.0 / s.measure()[x] } else { 0.0 });
        }
        let f = s.eigenfunctions();
        Ok(s.eigenvalues()
            .iter()
            .enumerate()
            .map(|(n, l)| (-t * l).exp() * (f[(x, n)] * f[(y, n)]))
            .sum())
    }

    /// All kernel values at time `t`, entry `(x, y)` = `p_t(x, y)`.
    pub fn kernel_matrix(&self, t: f64) -> Result<DMatrix<f64>> {
        check_time(t)?;
        let s = self.spectrum;
        let n = s.dim();
        if t == 0.0 {
            return Ok(DMatrix::from_fn(n, n, |x, y| {
                if x == y {
                    1.0 / s.measure()[x]
                } else {
                    0.0
                }
            }));
        }
        let f = s.eigenfunctions();
        let damped = DMatrix::from_fn(n, s.len(), |x, k| f[(x, k)] * (-t * s.eigenvalue(k)).exp());
        let mut p = damped * f.transpose();
        // make symmetry exact
        for x in 0..n {
            for y in (x + 1)..n {
                let v = 0.5 * (p[(x, y)] + p[(y, x)]);
                p[(x, y)] = v;
                p[(y, x)] = v;
            }
        }
        Ok(p)
    }

    /// `(e^{-tL} f)(x) = Σ_y p_t(x, y) f(y) m(y)`.
    pub fn semigroup_apply(&self, t: f64, f: &[f64]) -> Result<Vec<f64>> {
        check_time(t)?;
        check_len(self.spectrum.dim(), f.len())?;
        if t == 0.0 {
            return Ok(f.to_vec());
        }
        let p = self.kernel_matrix(t)?;
        let fm = DVector::from_iterator(
            f.len(),
            f.iter().zip(self.spectrum.measure()).map(|(v, m)| v * m),
        );
        Ok((p * fm).iter().copied().collect())
    }
}

/// `p_t(x, y) = ⟨1_x, e^{-tL} 1_y⟩ / (m(x) m(y))`, with the semigroup taken
/// as the matrix exponential `M^{-1/2} e^{-tA} M^{1/2}`. Shares nothing with
/// the eigensolver, so it cross-checks [`HeatKernel::kernel`].
pub fn kernel_via_indicators(op: &OperatorMatrix, t: f64, x: usize, y: usize) -> Result<f64> {
    check_time(t)?;
    let n = op.dim();
    check_vertex(x, n)?;
    check_vertex(y, n)?;
    let graph = op.graph();
    let m = graph.measure();

    let mut indicator_y = vec![0.0; n];
    indicator_y[y] = 1.0;
    let evolved: Vec<f64> = if t == 0.0 {
        indicator_y
    } else {
        let e = (op.matrix() * -t).exp();
        let scaled = DVector::from_iterator(n, indicator_y.iter().zip(m).map(|(v, w)| v * w.sqrt()));
        (e * scaled)
            .iter()
            .zip(m)
            .map(|(v, w)| v / w.sqrt())
            .collect()
    };
    let mut indicator_x = vec![0.0; n];
    indicator_x[x] = 1.0;
    Ok(graph.weighted_inner_product(&indicator_x, &evolved)? / (m[x] * m[y]))
}
