//! Gazeau-Klauder coherent states: statistics, autocorrelation and
//! position-space densities.

mod coherent;
mod packet;
mod stats;

pub use coherent::{CoherentState, DEFAULT_N_MAX};
pub use packet::WavePacket;
pub use stats::{
    bessel_arg, check_sigma, classify_region, ln_norm_const_sq, ln_rho, ln_weight, mandel, mandel_asymptote,
    mandel_asymptote_truncated, mean_n, mean_n2, norm_const, norm_const_series, rho, rho_product, timescales,
    weights, Region, Timescales,
};
