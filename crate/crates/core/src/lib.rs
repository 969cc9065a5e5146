//! Deterministic multi-user identification over thermal bosonic channels
//! with coherent-state signatures.
//!
//! Each user owns a coherent product state `|α^k⟩` inside the energy ball
//! `‖α^k‖² ≤ k·E`; the receiver for user `m` displaces by `−α_m^k` and
//! accepts iff the total photon count is at most `k·(N+δ)`. The crate covers
//! code construction by ball packing ([`geometry`], [`scheme`]), the photon
//! statistics and tail exponents behind the error bounds ([`photonstats`]),
//! a truncated Fock-space oracle ([`fockspace`]) and Monte Carlo verification
//! including a heterodyne baseline ([`montecarlo`]).
//!
//! The numerical kernels are generic over the scalar; the aliases below fix
//! `f64`, which is what the simulations and the CLI use.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fockspace;
pub mod geometry;
pub mod montecarlo;
pub mod optimize;
pub mod photonstats;
pub mod scalar;
pub mod scheme;

pub use error::{Error, Result};
pub use scalar::{RandomScalar, Real};

pub type Channel = photonstats::ChannelModel<f64>;
pub type Detector = photonstats::DetectorSpec<f64>;
pub type Exponents = photonstats::ExponentPair<f64>;
pub type Tail = photonstats::TailResult<f64>;
pub type Packing = geometry::PackingSpec<f64>;
pub type Points = geometry::PointSet<f64>;
pub type Amplitudes = scheme::AmplitudeVector<f64>;
pub type Code = scheme::SignatureSet<f64>;
pub type ErrorBounds = scheme::ErrorBoundReport<f64>;
pub type Density = fockspace::FockMatrix<f64>;
pub type Complex64 = num_complex::Complex<f64>;
