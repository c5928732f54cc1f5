use super::comparison::potential_mass;
use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};
use crate::graph::check_len;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AmbarzumianVerdict {
    /// Spectra agree within tolerance and `Σ c/m` is negligible.
    ConsistentWithZero,
    /// Spectra differ by `max_gap` somewhere, so `c ≠ 0` is allowed.
    SpectraDiffer { max_gap: f64 },
    /// Spectra agree within tolerance although `Σ c/m` exceeds `N·tol`,
    /// which the spectral comparison identity rules out.
    Contradiction { max_gap: f64, mass: f64 },
}

/// Checks the inverse-spectral statement "equal spectra force `c = 0`"
/// against a pair of computed spectra.
pub fn ambarzumian_check(
    perturbed: &Spectrum,
    baseline: &Spectrum,
    measure: &[f64],
    c: &[f64],
    tol: f64,
) -> Result<AmbarzumianVerdict> {
    let n = baseline.len();
    check_len(n, perturbed.len())?;
    check_len(n, measure.len())?;
    check_len(n, c.len())?;
    if baseline.dim() != perturbed.dim() {
        return Err(Error::LengthMismatch {
            expected: baseline.dim(),
            found: perturbed.dim(),
        });
    }
    let max_gap = perturbed
        .eigenvalues()
        .iter()
        .zip(baseline.eigenvalues())
        .fold(0.0, |acc: f64, (a, b)| acc.max((a - b).abs()));
    let mass = potential_mass(c, measure);
    Ok(if max_gap > tol {
        AmbarzumianVerdict::SpectraDiffer { max_gap }
    } else if mass > n as f64 * tol {
        AmbarzumianVerdict::Contradiction { max_gap, mass }
    } else {
        AmbarzumianVerdict::ConsistentWithZero
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::eigendecompose;
    use crate::graph::Graph;
    use crate::operator::OperatorMatrix;

    fn solve(g: &Graph) -> Spectrum {
        eigendecompose(&OperatorMatrix::assemble(g).unwrap()).unwrap()
    }

    fn two_vertex() -> Graph {
        Graph::new(vec![1.0, 1.0]).with_edge(0, 1, 1.0).unwrap()
    }

    #[test]
    fn zero_potential_is_consistent() {
        let g = two_vertex();
        let s = solve(&g);
        assert_eq!(
            ambarzumian_check(&s, &s, g.measure(), &[0.0, 0.0], 1e-9).unwrap(),
            AmbarzumianVerdict::ConsistentWithZero
        );
    }

    #[test]
    fn honest_spectra_differ() {
        let g = two_vertex();
        let c = [0.0, 1.0];
        let s0 = solve(&g);
        let sc = solve(&g.add_potential(&c).unwrap());
        match ambarzumian_check(&sc, &s0, g.measure(), &c, 1e-9).unwrap() {
            AmbarzumianVerdict::SpectraDiffer { max_gap } => {
                let expected = ((3.0 + 5f64.sqrt()) / 2.0 - 2.0).max((3.0 - 5f64.sqrt()) / 2.0);
                assert!((max_gap - expected).abs() < 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equalized_spectra_with_potential_contradict() {
        let g = two_vertex();
        let s0 = solve(&g);
        assert!(matches!(
            ambarzumian_check(&s0, &s0, g.measure(), &[0.0, 1.0], 1e-9).unwrap(),
            AmbarzumianVerdict::Contradiction { .. }
        ));
    }

    #[test]
    fn dimension_mismatch_fails() {
        let s2 = solve(&two_vertex());
        let s1 = solve(&Graph::new(vec![1.0]));
        assert!(ambarzumian_check(&s2, &s1, &[1.0, 1.0], &[0.0, 0.0], 1e-9).is_err());
    }
}
