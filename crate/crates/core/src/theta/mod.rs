//! Theta operators on formal local models.

pub mod model;
pub mod operator;
pub mod section;
pub mod truncated;

pub use model::{FormalModel, DEFAULT_TRUNCATION};
pub use operator::{
    frobenius_kill_check, hasse_as_section, leibniz_check, theta, unit_root_projection, FrobeniusKillReport,
    Projection, ProjectionRoute,
};
pub use section::{Monomial, Section};
pub use truncated::{TPoly, TruncatedRing};
