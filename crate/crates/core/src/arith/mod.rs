//! Integer and prime-field arithmetic, primality, and seeded randomness.

pub mod primality;
pub mod prime;
pub mod rng;

pub use prime::{Fp64, FpBig, PrimeField};
pub use rng::RngHandle;
