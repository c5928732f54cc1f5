//! Truncation study for rule-based infinite families.

use rayon::prelude::*;

use super::comparison::{spectral_comparison, ComparisonReport};
use crate::error::{Error, Result};
use crate::family::{ClosedForm, GraphFamily, TailEstimate, TruncationFlavor};

#[derive(Clone, Debug)]
pub struct SizeResult {
    pub size: usize,
    pub flavor: TruncationFlavor,
    pub report: ComparisonReport,
    /// `λ_n(c) − λ_n(0)` for the first `K` indices (fewer if `N < K`).
    pub gaps: Vec<f64>,
}

/// Value of the infinite series `Σ_n c(n)/m(n)`.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesTarget {
    /// The series converges; its value lies in `[lower, upper]`.
    Bounded { lower: f64, upper: f64 },
    /// The series is `+∞`; only its (growing) partial sums are kept.
    Divergent { partial_sums: Vec<(usize, f64)> },
    /// No closed-form tail for these rules.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub sizes: Vec<usize>,
    /// Ordered by size, then Dirichlet before Neumann.
    pub per_size: Vec<SizeResult>,
    /// Closed-form remainder `Σ_{n>N} c(n)/m(n)` per size, when available.
    pub tail_estimate: Vec<(usize, TailEstimate)>,
    pub series: SeriesTarget,
}

impl ConvergenceStudy {
    pub fn results(&self, flavor: TruncationFlavor) -> impl Iterator<Item = &SizeResult> {
        self.per_size.iter().filter(move |r| r.flavor == flavor)
    }
}

/// Runs the spectral comparison on both truncation flavors of `family` at
/// every size, adding the potential `c_rule` on vertices `1..=N`. Sizes are
/// solved concurrently and merged in size order.
pub fn convergence_study(
    family: &GraphFamily,
    c_rule: &ClosedForm,
    sizes: &[usize],
    k: usize,
) -> Result<ConvergenceStudy> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.first() == Some(&0) {
        return Err(Error::EmptySize);
    }

    let jobs: Vec<(usize, TruncationFlavor)> = sizes
        .iter()
        .flat_map(|&n| TruncationFlavor::BOTH.map(|f| (n, f)))
        .collect();
    let per_size = jobs
        .par_iter()
        .map(|&(size, flavor)| {
            let run = || -> Result<SizeResult> {
                let graph = family.truncate(size, flavor)?;
                let report = spectral_comparison(&graph, &c_rule.sample(size))?;
                let gaps = report.diffs.iter().take(k).copied().collect();
                Ok(SizeResult {
                    size,
                    flavor,
                    report,
                    gaps,
                })
            };
            run().map_err(|e| Error::AtSize {
                size,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let tail_estimate: Vec<(usize, TailEstimate)> = sizes
        .iter()
        .filter_map(|&n| family.tail_estimate(c_rule, n).map(|t| (n, t)))
        .collect();

    let partial = |n: usize| {
        per_size
            .iter()
            .find(|r| r.size == n)
            .map(|r| r.report.target)
            .unwrap_or(0.0)
    };
    let series = match tail_estimate.last() {
        Some(&(_, TailEstimate::Divergent)) => SeriesTarget::Divergent {
            partial_sums: sizes.iter().map(|&n| (n, partial(n))).collect(),
        },
        Some(&(n, TailEstimate::Bounded { lower, upper })) => SeriesTarget::Bounded {
            lower: partial(n) + lower,
            upper: partial(n) + upper,
        },
        None => SeriesTarget::Unknown,
    };

    Ok(ConvergenceStudy {
        sizes,
        per_size,
        tail_estimate,
        series,
    })
}
