//! Integer arithmetic: primes, factorization, power classes, the modulus
//! decomposition and rational approximation.

mod factor;
mod power;
mod primes;
mod rational;

pub use factor::{factorize, Factorization};
pub use power::{
    classify_power, decompose_modulus, enumerate_power_full, gauss_bound_ratio, ModulusDecomposition, PowerClass,
};
pub use primes::{is_prime, primes_in, primes_up_to};
pub use rational::{dirichlet_approx, gcd, Rational};
