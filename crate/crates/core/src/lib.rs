//! Equilibria of vertical contracting in a media market: subscriber
//! competition between two platforms, Nash-bargained lump-sum fees for
//! premium content, and the content-provision games under separation, one
//! integration and two integrations.

pub mod analysis;
pub mod bargain;
pub mod cli;
pub mod contracting;
pub mod error;
pub mod game;
pub mod hotelling;
pub mod model;
pub mod one_vi;
pub mod sampling;
pub mod separation;
pub mod two_vi;
pub mod verify;

pub use error::{Error, Result};
pub use model::ModelParams;
