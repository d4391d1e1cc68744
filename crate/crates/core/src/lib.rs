//! Numerical toolkit for entropic correlation measures of bipartite quantum
//! states: squashed-entanglement upper bounds, entanglement of purification,
//! Holevo and accessible information, and property sweeps verifying the
//! channel uncertainty inequality and its locking consequences.
//!
//! All logarithms are base 2; every reported quantity is in bits. Matrices
//! are dense, row-major, with 0-based tensor-factor indexing. The numeric
//! kernel is generic over the real scalar (`f32`/`f64`) via [`Scalar`]; the
//! aliases below pin `f64`, which the harness and CLI use throughout.

pub mod channels;
pub mod entropy;
pub mod error;
pub mod group;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod opt;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// f64 aliases used by the harness, the I/O layer, and the CLI.
pub type Matrix = linalg::CMatrix<f64>;
pub type Complex64 = num_complex::Complex<f64>;
pub type Density = states::DensityOperator<f64>;
pub type Pure = states::PureState<f64>;
pub type EnsembleF64 = states::Ensemble<f64>;
pub type Channel = channels::KrausChannel<f64>;
pub type BitsF64 = entropy::Bits<f64>;
