//! Spectral checks for `L_{b,c}`: the local Weyl law, the comparison
//! identity `Σ_n (λ_n(c) − λ_n(0)) = Σ_x c(x)/m(x)`, the Hadamard-type
//! derivative formula, Ambarzumian-type uniqueness, and truncation studies
//! for infinite families.
//!
//! Eigenvalues are paired across spectra by sorted index.

mod ambarzumian;
mod comparison;
pub mod compensated;
mod convergence;
mod hadamard;
mod weyl;

pub use ambarzumian::{ambarzumian_check, AmbarzumianVerdict};
pub use comparison::{potential_mass, spectral_comparison, ComparisonReport};
pub use convergence::{convergence_study, ConvergenceStudy, SeriesTarget, SizeResult};
pub use hadamard::{
    fd_derivative, fd_derivatives, hadamard_derivative, hadamard_derivatives, hadamard_fd_oracle, Stencil,
};
pub use weyl::local_weyl_check;
