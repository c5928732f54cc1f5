use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};

/// Per-vertex defect `|m(x) Σ_n |f_n(x)|² − 1|` of the local Weyl law.
/// Requires the full spectrum.
pub fn local_weyl_check(spectrum: &Spectrum, measure: &[f64]) -> Result<Vec<f64>> {
    let n = measure.len();
    if spectrum.len() != n || spectrum.dim() != n {
        return Err(Error::IncompleteSpectrum {
            expected: n,
            found: spectrum.len(),
        });
    }
    let f = spectrum.eigenfunctions();
    Ok(f.row_iter()
        .zip(measure)
        .map(|(row, m)| (m * row.iter().map(|v| v * v).sum::<f64>() - 1.0).abs())
        .collect())
}
