//! Structural analyses of the order-6 family: rank relation, PSD threshold
//! α*, borrowing capacity, compatibility with D1, truncation error and
//! spectra.

mod alpha_star;
mod borrowing;
pub mod compatibility;
mod rank;
mod spectrum;
mod truncation;

pub use alpha_star::{
    alpha_derivative_of_a, alpha_star, alpha_star_spectral, free_direction_columns,
    interior_min_eigenvalue, AlphaStarResult,
};
pub use borrowing::{borrowed_matrix, borrowing_capacity, borrowing_min_eigenvalue, BorrowingResult};
pub use compatibility::{
    compatibility, compatibility_matrix, compatibility_min_alpha, compatibility_min_alpha_with,
    min_alpha_for_t, CompatibilityReport, ALPHA_SEARCH_MAX,
};
pub use rank::{check_rank_relation, sylvester_matrix, sylvester_transform, RankRelation};
pub use spectrum::{argmin_spectral_radius, spectrum_sweep, SpectrumFamily, SpectrumPoint};
pub use truncation::{
    truncation_boundary_entry, truncation_line, truncation_optimal_alpha, truncation_vector,
    TruncationNorm, TRUNCATION_DENOMINATORS, TRUNCATION_NUMERATORS,
};
