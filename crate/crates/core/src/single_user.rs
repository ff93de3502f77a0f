//! Optimal burstiness of a single user with processing energy cost.
//!
//! A user with average power `P` that pays `eps` per channel use while on
//! maximizes `theta * C(P/theta - eps)` over its on-fraction `theta`. The
//! maximizer has a closed form in terms of the principal Lambert W branch.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::numerics::{cap, lambert_w0, Rate};

/// Width of the band around `eps = 1` where the closed form is replaced by its limit.
const UNIT_COST_BAND: f64 = 1e-9;

/// Average power budget and per-use processing cost of one transmitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserBudget {
    power: f64,
    eps: f64,
}

impl UserBudget {
    pub fn new(power: f64, eps: f64) -> Result<Self> {
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "average power must be positive, got {power}"
            )));
        }
        if !(eps.is_finite() && eps >= 0.0 && eps <= power) {
            return Err(Error::InvalidParameter(format!(
                "processing cost must satisfy 0 <= eps <= P (P={power}, eps={eps})"
            )));
        }
        Ok(UserBudget { power, eps })
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// On-fraction and on-state signaling power of a single user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurstPoint {
    pub theta: f64,
    pub nu: f64,
}

impl BurstPoint {
    /// Rate `theta * C(nu)` obtained by bursting at this point.
    pub fn rate(&self) -> Rate {
        Rate::from_bits(self.theta * cap(self.nu))
    }
}

/// Rate-maximizing on-fraction `theta*` and signaling power `nu* = P/theta* - eps`.
pub fn optimal_burstiness(budget: UserBudget) -> BurstPoint {
    let UserBudget { power, eps } = budget;
    let theta = if eps == 0.0 {
        1.0
    } else if (eps - 1.0).abs() <= UNIT_COST_BAND {
        // numerator and denominator of the closed form both vanish at eps = 1
        (power / E).min(1.0)
    } else {
        let arg = (eps - 1.0) / E;
        // arg >= -1/e whenever eps >= 0
        let w = lambert_w0(arg.max(-1.0 / E)).expect("argument clamped into the W0 domain");
        (power * w / ((eps - 1.0) * (w + 1.0))).min(1.0)
    };
    BurstPoint {
        theta,
        nu: power / theta - eps,
    }
}

/// `theta* C(nu*)`, the best rate the user can reach without interference.
pub fn interference_free_rate(budget: UserBudget) -> Rate {
    optimal_burstiness(budget).rate()
}

/// On-fraction in the vanishing power/cost limit with `P / sqrt(2 eps)` held at `lambda`.
pub fn asymptotic_fraction(lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    Ok(lambda.min(1.0))
}

/// Best rate when the user may only be on during `available` of the time.
///
/// Returns the fraction actually used and the rate.
pub(crate) fn best_burst_within(budget: UserBudget, star: BurstPoint, available: f64) -> (f64, f64) {
    if available <= 0.0 {
        (0.0, 0.0)
    } else if available >= star.theta {
        (star.theta, star.theta * cap(star.nu))
    } else {
        let nu = (budget.power / available - budget.eps).max(0.0);
        (available, available * cap(nu))
    }
}
