//! Achievable sum rates of bursty interference channels where transmitters
//! pay a processing energy cost while on.

pub mod cgzic;
pub mod error;
pub mod hk_two_user;
pub mod numerics;
pub mod schemes_two_user;
pub mod single_user;
pub mod sweep;
pub mod very_strong;

pub use cgzic::{BurstProfile3, CgzicChannel};
pub use error::{Error, Result};
pub use hk_two_user::{hk_sum_rate, PowerSplit, TwoUserChannel};
pub use numerics::{capacity, lambert_w0, GridSettings, Rate, SearchConfig};
pub use schemes_two_user::{BurstProfile2, Profile, SchemeResult, SchemeTag};
pub use single_user::{optimal_burstiness, BurstPoint, UserBudget};
