//! Exceptional-set geometry: dyadic families `𝐈_j`, combs `J_k^ω`, dyadic approximation
//! exponents, gauges and box-counting dimension.

mod approx;
mod boxdim;
mod comb;
mod dyadic;
mod gauge;
mod intervals;
mod lattice;

pub use approx::{
    approx_exponent_profile, dyadic_approx_exponent, dyadic_approx_exponent_bits, window_exponents,
    BinaryExpansion,
};
pub use boxdim::{
    box_count, box_counts, box_dimension, cantor_set, fit_counts, least_squares, limsup_cover_counts,
    limsup_cover_dimension, BoxDimEstimate, MAX_SCALE, MIN_SCALE,
};
pub use comb::{comb_membership, CombParams};
pub use dyadic::{
    coarse_level, dalpha_test_points, dyadic_family, dyadic_limsup_hits, j_alpha, limsup_membership,
    DoubledFamily, DyadicFamily, DyadicFamilyParams,
};
pub use gauge::{gauge_eval, GaugeSpec};
pub use intervals::{wrap, GridSet, IntervalSet, PointSet, PredicateSet};
