//! Locally nilpotent derivations on finitely presented affine domains:
//! exact coefficient towers, Gröbner bases, exponential automorphisms,
//! local slices, and the embedding homomorphisms built from sequences of
//! derivations together with their injectivity tests and open-locus
//! certificates.

pub mod field;
pub mod poly;
pub mod ideal;
pub mod derivation;
pub mod embedding;
pub mod fml;
pub mod conic;

/// Version of the core library, printed in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
