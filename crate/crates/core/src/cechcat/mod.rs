//! Finite poset categories, presheaves on finite spaces, Čech complexes of
//! a basis, and category spectra.

pub mod cech;
pub mod poset;
pub mod presheaf;
pub mod spectrum;

pub use cech::{build_augmented, cech_complex, cech_report, is_cech_category, Basis, CechComplex, CechInput, CechReport, SingleBasis};
pub use poset::{natural_posets, FiniteCategory};
pub use presheaf::{presheaf_roundtrip, OpenSet, Presheaf};
pub use spectrum::{
    category_spectrum, category_spectrum_in, point_object, putinar_restriction_check, spectral_mapping_check, CategorySpectrumResult,
    SpectralMappingReport, TransversalityOracle,
};
