//! Computational workbench for the noncommutative spectral theory of the
//! contractive quantum plane.
//!
//! A finite-dimensional left q-module is a pair of square matrices `(T, S)`
//! with `TS = q⁻¹ST`. This crate decides transversality of the trivial
//! modules `ℂ(λ)` against such a pair through a parametrized Koszul complex,
//! assembles Taylor and Putinar spectra on the axes `ℂ_x ∪ ℂ_y`, evaluates the
//! normally ordered functional calculus `f(T, S) = Σ f_n(T) Sⁿ`, and realizes
//! the lattice-category / presheaf / Čech-complex combinatorics on finite
//! instances.
//!
//! Module map:
//!
//! * [`qpair`]: q-parameters, tolerances, validated pairs and generators.
//! * [`qseries`]: truncated series in `ℂ_q[[x, y]]` with the twisted product.
//! * [`homology`]: cochain complexes of matrices and their numerical homology,
//!   with an exact rational oracle in [`homology::exact`].
//! * [`koszul`]: the Koszul complex at an axis point and the Taylor spectrum.
//! * [`qtopology`]: spiral and disk topologies, closures, Putinar spectra.
//! * [`funcalc`]: functional calculus and its homomorphism check.
//! * [`cechcat`]: finite posets, presheaves, Čech complexes, category spectra.
//! * [`suites`]: the runnable verification suites.

pub mod cechcat;
pub mod error;
pub mod funcalc;
pub mod homology;
pub mod json;
pub mod koszul;
pub mod linalg;
pub mod qpair;
pub mod qseries;
pub mod qtopology;
pub mod random;
pub mod suites;

pub use error::{Error, Result};
pub use funcalc::{calculus_admissible, evaluate, homomorphism_check, Admissibility, CalculusResult};
pub use homology::{check_complex, homology_dims, is_exact, CochainComplex, HomologyReport};
pub use koszul::{build_koszul, is_transversal, taylor_spectrum, AxisPoint, KoszulComplex, TaylorSpectrum};
pub use linalg::CMatrix;
pub use num_complex::Complex64;
pub use qpair::{jordan_q_pair, nilpotent_q_pair, operator_spectrum, validate_qpair, QPair, QParameter, ToleranceConfig};
pub use qseries::QSeries;
pub use qtopology::{putinar_spectrum, Geometry, QClosedSet, QOpenSet};
