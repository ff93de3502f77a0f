//! Very strong interference with processing cost.
//!
//! Both users reach their interference-free rates under Scheme IV at the
//! single-user profile `(theta1*, theta2*)` when
//!
//! ```text
//! 1 + nu2* <= (1 + a nu2*)^rho1 * (1 + a nu2* / (1 + nu1*))^(1 - rho1)
//! 1 + nu1* <= (1 + b nu1*)^rho2 * (1 + b nu1* / (1 + nu2*))^(1 - rho2)
//! ```
//!
//! with `rho1 = (1 - theta1*)/theta2*` and `rho2 = (1 - theta2*)/theta1*`.
//! Without cost both `rho` vanish and the conditions become `a >= 1 + P1`,
//! `b >= 1 + P2`.

use crate::error::{Error, Result};
use crate::hk_two_user::TwoUserChannel;
use crate::single_user::{asymptotic_fraction, optimal_burstiness, BurstPoint};

const BISECTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoPair {
    pub rho1: f64,
    pub rho2: f64,
}

impl RhoPair {
    pub fn of(ch: &TwoUserChannel) -> Self {
        let s1 = optimal_burstiness(ch.user1());
        let s2 = optimal_burstiness(ch.user2());
        Self::from_points(s1, s2)
    }

    fn from_points(s1: BurstPoint, s2: BurstPoint) -> Self {
        RhoPair {
            rho1: (1.0 - s1.theta) / s2.theta,
            rho2: (1.0 - s2.theta) / s1.theta,
        }
    }
}

/// `rho ln(1 + g nu_int) + (1 - rho) ln(1 + g nu_int/(1 + nu_own)) - ln(1 + nu_int)`;
/// non-negative exactly when the condition at this receiver holds.
fn margin(gain: f64, rho: f64, nu_int: f64, nu_own: f64) -> f64 {
    rho * (gain * nu_int).ln_1p() + (1.0 - rho) * (gain * nu_int / (1.0 + nu_own)).ln_1p()
        - nu_int.ln_1p()
}

fn contends(s1: BurstPoint, s2: BurstPoint) -> bool {
    s1.theta + s2.theta > 1.0
}

/// Whether the channel's gains `(a, b)` satisfy both very-strong conditions.
///
/// Without contention (`theta1* + theta2* <= 1`) the users time-share
/// losslessly and any gains qualify.
pub fn is_very_strong(ch: &TwoUserChannel) -> bool {
    let s1 = optimal_burstiness(ch.user1());
    let s2 = optimal_burstiness(ch.user2());
    if !contends(s1, s2) {
        return true;
    }
    let rho = RhoPair::from_points(s1, s2);
    margin(ch.a(), rho.rho1, s2.nu, s1.nu) >= 0.0 && margin(ch.b(), rho.rho2, s1.nu, s2.nu) >= 0.0
}

/// Smallest gain meeting one condition; the margin is increasing in the gain.
fn solve_threshold(rho: f64, nu_int: f64, nu_own: f64, upper: f64) -> f64 {
    if rho == 0.0 {
        return 1.0 + nu_own;
    }
    let f = |g: f64| margin(g, rho, nu_int, nu_own);
    let mut lo = 1.0;
    if f(lo) >= 0.0 {
        return lo;
    }
    let mut hi = upper.max(2.0 + nu_own);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `(a_min, b_min)`: the channel is very strong iff `a >= a_min` and `b >= b_min`.
///
/// The gains stored in `ch` are ignored.
pub fn very_strong_thresholds(ch: &TwoUserChannel) -> (f64, f64) {
    let s1 = optimal_burstiness(ch.user1());
    let s2 = optimal_burstiness(ch.user2());
    if !contends(s1, s2) {
        return (0.0, 0.0);
    }
    let rho = RhoPair::from_points(s1, s2);
    let upper = 2.0 + ch.p1().max(ch.p2());
    (
        solve_threshold(rho.rho1, s2.nu, s1.nu, upper),
        solve_threshold(rho.rho2, s1.nu, s2.nu, upper),
    )
}

/// Powers and costs in the joint small limit with `lambda_i = P_i / sqrt(2 eps_i)` fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticBudget {
    lambda1: f64,
    lambda2: f64,
    p1: f64,
    p2: f64,
    eps1: f64,
    eps2: f64,
}

impl AsymptoticBudget {
    pub fn from_powers(p1: f64, p2: f64, eps1: f64, eps2: f64) -> Result<Self> {
        for (name, v) in [("P1", p1), ("P2", p2), ("eps1", eps1), ("eps2", eps2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive for the asymptotic regime, got {v}"
                )));
            }
        }
        Ok(AsymptoticBudget {
            lambda1: p1 / (2.0 * eps1).sqrt(),
            lambda2: p2 / (2.0 * eps2).sqrt(),
            p1,
            p2,
            eps1,
            eps2,
        })
    }

    /// Budget with `P_i = lambda_i sqrt(2 eps_i)`.
    pub fn from_lambdas(lambda1: f64, lambda2: f64, eps1: f64, eps2: f64) -> Result<Self> {
        Self::from_powers(
            lambda1 * (2.0 * eps1).sqrt(),
            lambda2 * (2.0 * eps2).sqrt(),
            eps1,
            eps2,
        )
    }

    pub fn lambdas(&self) -> (f64, f64) {
        (self.lambda1, self.lambda2)
    }
}

/// Closed-form very-strong thresholds `(a_bar, b_bar)` of the small-power limit.
pub fn asymptotic_thresholds(budget: &AsymptoticBudget) -> Result<(f64, f64)> {
    let AsymptoticBudget {
        lambda1,
        lambda2,
        p1,
        p2,
        eps1,
        eps2,
    } = *budget;
    let r1 = (2.0 * eps1).sqrt();
    let r2 = (2.0 * eps2).sqrt();
    let f1 = asymptotic_fraction(lambda1)?;
    let f2 = asymptotic_fraction(lambda2)?;
    let small1 = f1 < 1.0;
    let small2 = f2 < 1.0;
    Ok(match (small1, small2) {
        (true, true) => {
            if lambda1 + lambda2 <= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "both-bursty case needs lambda1 + lambda2 > 1, got {}",
                    lambda1 + lambda2
                )));
            }
            (
                (p2 + r1 * p2) / (p2 + r2 * (r1 - p1)),
                (p1 + r2 * p1) / (p1 + r1 * (r2 - p2)),
            )
        }
        (true, false) => ((1.0 + r1) / (1.0 + r1 - p1), 1.0 + p2 - eps2),
        (false, true) => (1.0 + p1 - eps1, (1.0 + r2) / (1.0 + r2 - p2)),
        (false, false) => (1.0 + p1, 1.0 + p2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ch(a: f64, b: f64, p1: f64, p2: f64, e1: f64, e2: f64) -> TwoUserChannel {
        TwoUserChannel::new(a, b, p1, p2, e1, e2).unwrap()
    }

    #[test]
    fn reported_threshold() {
        let (a, b) = very_strong_thresholds(&ch(1.0, 1.0, 3.5, 3.5, 2.0, 2.0));
        assert_abs_diff_eq!(a, 2.3, epsilon = 0.05);
        assert_abs_diff_eq!(b, 2.3, epsilon = 0.05);
        assert!(is_very_strong(&ch(2.5, 2.5, 3.5, 3.5, 2.0, 2.0)));
        assert!(!is_very_strong(&ch(2.0, 2.0, 3.5, 3.5, 2.0, 2.0)));
    }

    #[test]
    fn zero_cost_is_classical() {
        let (a, b) = very_strong_thresholds(&ch(1.0, 1.0, 2.0, 5.0, 0.0, 0.0));
        assert_eq!((a, b), (3.0, 6.0));
        assert!(is_very_strong(&ch(3.0, 6.0, 2.0, 5.0, 0.0, 0.0)));
        assert!(!is_very_strong(&ch(2.999, 6.0, 2.0, 5.0, 0.0, 0.0)));
        assert!(!is_very_strong(&ch(3.0, 5.99, 2.0, 5.0, 0.0, 0.0)));
    }

    #[test]
    fn asymmetric_threshold_matches_grid_scan() {
        let base = ch(1.0, 1.0, 4.0, 3.5, 2.0, 2.0);
        let (a_min, b_min) = very_strong_thresholds(&base);
        // scan a at b = b_min + 1e-6, and b at a = a_min + 1e-6
        let first_a = (0..6000)
            .map(|k| 1.0 + k as f64 * 1e-3)
            .find(|&a| is_very_strong(&ch(a, b_min + 1e-6, 4.0, 3.5, 2.0, 2.0)))
            .unwrap();
        let first_b = (0..6000)
            .map(|k| 1.0 + k as f64 * 1e-3)
            .find(|&b| is_very_strong(&ch(a_min + 1e-6, b, 4.0, 3.5, 2.0, 2.0)))
            .unwrap();
        assert!(first_a >= a_min && first_a - a_min <= 1e-3 + 1e-9);
        assert!(first_b >= b_min && first_b - b_min <= 1e-3 + 1e-9);
    }

    #[test]
    fn thresholds_shrink_under_cost() {
        let base = ch(1.0, 1.0, 4.0, 3.5, 2.0, 2.0);
        let (a, b) = very_strong_thresholds(&base);
        assert!(a > 1.0 && a < 1.0 + 4.0);
        assert!(b > 1.0 && b < 1.0 + 3.5);
    }

    #[test]
    fn no_contention_is_vacuous() {
        let c = ch(0.0, 0.0, 3.5, 3.5, 3.45, 3.45);
        assert!(is_very_strong(&c));
        assert_eq!(very_strong_thresholds(&c), (0.0, 0.0));
    }

    #[test]
    fn rho_pair_zero_iff_always_on() {
        let r = RhoPair::of(&ch(1.0, 1.0, 3.5, 5.0, 2.0, 0.0));
        assert!(r.rho1 > 0.0);
        assert_eq!(r.rho2, 0.0);
    }

    #[test]
    fn asymptotic_cases() {
        let big = AsymptoticBudget::from_lambdas(1.5, 2.0, 1e-4, 2e-4).unwrap();
        let (a, b) = asymptotic_thresholds(&big).unwrap();
        assert_abs_diff_eq!(a, 1.0 + 1.5 * (2e-4f64).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0 + 2.0 * (4e-4f64).sqrt(), epsilon = 1e-15);

        let both = AsymptoticBudget::from_lambdas(0.7, 0.6, 1e-4, 1e-4).unwrap();
        let (a, b) = asymptotic_thresholds(&both).unwrap();
        let p = 0.7 * (2e-4f64).sqrt();
        let q = 0.6 * (2e-4f64).sqrt();
        assert!(a > 1.0 && a < 1.0 + p, "a_bar={a}");
        assert!(b > 1.0 && b < 1.0 + q, "b_bar={b}");

        let mixed = AsymptoticBudget::from_lambdas(0.5, 1.2, 1e-4, 3e-4).unwrap();
        let (a, b) = asymptotic_thresholds(&mixed).unwrap();
        let r1 = (2e-4f64).sqrt();
        let p1 = 0.5 * r1;
        let p2 = 1.2 * (6e-4f64).sqrt();
        assert_abs_diff_eq!(a, (1.0 + r1) / (1.0 + r1 - p1), epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0 + p2 - 3e-4, epsilon = 1e-15);

        let mirrored = AsymptoticBudget::from_lambdas(1.2, 0.5, 3e-4, 1e-4).unwrap();
        let (a2, b2) = asymptotic_thresholds(&mirrored).unwrap();
        assert_abs_diff_eq!(a2, b, epsilon = 1e-15);
        assert_abs_diff_eq!(b2, a, epsilon = 1e-15);

        let sparse = AsymptoticBudget::from_lambdas(0.3, 0.4, 1e-4, 1e-4).unwrap();
        assert!(asymptotic_thresholds(&sparse).is_err());
    }

    #[test]
    fn asymptotic_approaches_exact_in_the_limit() {
        // lambda1 = lambda2 = 0.8 at shrinking eps
        for &eps in &[1e-6, 1e-8] {
            let budget = AsymptoticBudget::from_lambdas(0.8, 0.8, eps, eps).unwrap();
            let (a_bar, _) = asymptotic_thresholds(&budget).unwrap();
            let p = 0.8 * (2.0 * eps).sqrt();
            let (a_min, _) = very_strong_thresholds(&ch(1.0, 1.0, p, p, eps, eps));
            let excess_bar = a_bar - 1.0;
            let excess = a_min - 1.0;
            assert!((excess_bar - excess).abs() <= 0.05 * excess.max(1e-12) + 1e-6);
        }
    }
}
