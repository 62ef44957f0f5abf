//! Numerical laboratory for maximal estimates of higher-order Weyl sums
//!
//! ```text
//! ω_{N,k}(x,t) = Σ_{n=1}^N e(nx + n^k t),     e(θ) = exp(2πiθ)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`phase`]: error-free reduction of `n^k·t mod 1` and the unit circle map.
//! * [`sums`]: incomplete Weyl sums, polynomial sums, complete Gauss sums,
//!   FFT grid evaluators and the major-arc decomposition.
//! * [`quadrature`]: the oscillatory integral `I(ξ) = ∫₀^N e(ξ₁z + … + ξ_k z^k) dz`.
//! * [`nt`]: primes, factorization, power-full/power-free classes, the
//!   modulus decomposition and Dirichlet approximation.
//! * [`maximal`]: sup over `t`, `L^p` norms of the maximal function,
//!   super-level sets, layer-cake integrals, arc location, exponent fits
//!   and the conjectural-bound scan.
//! * [`counterexample`]: the prime-modulus lower-bound certificate.
//!
//! Batch work (x-sweeps, per-prime census, Monte Carlo scans) is spread over
//! rayon when the `parallel` feature is on; every reduction is fixed-order so
//! results are identical in both modes.

pub mod counterexample;
pub mod error;
pub mod maximal;
pub mod nt;
pub mod par;
pub mod phase;
pub mod quadrature;
pub mod sums;

pub use error::{Error, Result};
pub use nt::Rational;
pub use par::Exec;
pub use sums::{ComplexValue, PhasePoint, WeylParams};
