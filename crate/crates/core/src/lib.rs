//! Second-order fading statistics for mobile channels whose scatterers
//! follow a von Mises–Fisher distribution.
//!
//! The crate provides three independent routes to the same numbers:
//!
//! * closed forms for the mean Doppler shift, Doppler spread, level-crossing
//!   rate and average fade duration ([`doppler`], [`secondorder`]),
//! * composite Gauss–Legendre integration of the Doppler density
//!   ([`oracle`]),
//! * a Monte-Carlo sum-of-sinusoids channel with vMF-drawn directions of
//!   arrival and empirical crossing/fade estimators ([`simulator`]).
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below fix the scalar to double precision.

pub mod doppler;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod secondorder;
pub mod simulator;
pub mod specfun;
pub mod vmf;

pub use doppler::{DopplerGeometry, DopplerMoments, IStarParams, MotionConfig};
pub use error::{Error, Result};
pub use quadrature::QuadratureSpec;
pub use scalar::Real;
pub use secondorder::{LcrAfdCurve, NormalizedLevel};
pub use simulator::{ChannelConfig, ChannelRealization, EmpiricalSecondOrder, EnvelopeSeries};
pub use vmf::{AnglePair, Direction3, VmfScattering};

pub type VmfScatteringF64 = VmfScattering<f64>;
pub type Direction3F64 = Direction3<f64>;
pub type AnglePairF64 = AnglePair<f64>;
pub type MotionConfigF64 = MotionConfig<f64>;
pub type DopplerGeometryF64 = DopplerGeometry<f64>;
pub type DopplerMomentsF64 = DopplerMoments<f64>;
pub type IStarParamsF64 = IStarParams<f64>;
pub type QuadratureSpecF64 = QuadratureSpec<f64>;
pub type NormalizedLevelF64 = NormalizedLevel<f64>;
pub type LcrAfdCurveF64 = LcrAfdCurve<f64>;
pub type ChannelConfigF64 = ChannelConfig<f64>;
pub type ChannelRealizationF64 = ChannelRealization<f64>;
pub type EnvelopeSeriesF64 = EnvelopeSeries<f64>;
pub type EmpiricalSecondOrderF64 = EmpiricalSecondOrder<f64>;

pub type VmfScatteringF32 = VmfScattering<f32>;
pub type MotionConfigF32 = MotionConfig<f32>;
pub type DopplerGeometryF32 = DopplerGeometry<f32>;
pub type DopplerMomentsF32 = DopplerMoments<f32>;
