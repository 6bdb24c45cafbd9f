//! Double-precision special functions: Riemann zeta and its derivative on the
//! real line and in the complex plane, complex Gamma, exact Bernoulli numbers
//! and the nontrivial zeros of zeta.

mod bernoulli;
mod gamma;
mod zeros;
mod zeta;

pub use bernoulli::{bernoulli, BERNOULLI_LIMIT};
pub use gamma::{digamma_int, gamma_complex, EULER_GAMMA};
pub use zeros::{first_zero, load_zeros_file, parse_zeros, ZetaZero};
pub use zeta::{
    zeta_complex, zeta_deriv_complex, zeta_deriv_neg_int, zeta_deriv_real, zeta_neg_int, zeta_real,
    MAX_IMAG, MIN_REAL,
};
