//! Exact Fourier analysis of Boolean functions on the hypercube and the
//! mutual information they retain through a binary symmetric channel.
//!
//! ```
//! use boolinfo::channel::{mutual_information, NoiseParameter};
//! use boolinfo::hypercube::{named_family, Family};
//!
//! let dictator = named_family(&Family::Dictator(1), 3).unwrap();
//! let alpha = NoiseParameter::new(0.25).unwrap();
//! let mi = mutual_information(&dictator, alpha);
//! let bound = boolinfo::bounds::conjectured_bound(0.25).unwrap();
//! assert!((mi - bound).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod channel;
pub mod cli;
pub mod hypercube;
pub mod search;

pub use bounds::BoundReport;
pub use channel::{MomentReport, NoiseParameter, PosteriorTable};
pub use hypercube::{BooleanFunction, Family, FourierSpectrum, RealHypercubeFunction};
pub use search::{FunctionClass, Scope, SearchReport};
