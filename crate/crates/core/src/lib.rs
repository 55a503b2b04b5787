//! PAC learning and PAC stabilization of hedonic games.
//!
//! Everything is generic over the value type through [`Scalar`]; `f64` is
//! the fast path and [`Exact`] (arbitrary-precision rationals) is used
//! wherever results must be exact.

pub mod core_model;
pub mod distributions;
pub mod error;
pub mod game_classes;
pub mod hcn;
pub mod learners;
pub mod scalar;
pub mod stabilizers;

pub use error::{Error, Result};
pub use scalar::{Extended, Scalar};

pub type Exact = num_rational::BigRational;

pub type Game = game_classes::Game<f64>;
pub type ExactGame = game_classes::Game<Exact>;
pub type Sample = core_model::LabeledSample<f64>;
pub type ExactSample = core_model::LabeledSample<Exact>;
pub type Pairs = game_classes::PairValues<f64>;
pub type ExactPairs = game_classes::PairValues<Exact>;
pub type Net = hcn::HedonicNet<f64>;
pub type ExactNet = hcn::HedonicNet<Exact>;
