//! Comparisons across vertical structures: welfare, merger incentives and
//! parameter sweeps.

pub mod merger;
pub mod sweep;
pub mod welfare;
