//! Simple Han-Kobayashi schemes for the two-user Gaussian interference channel.
//!
//! Receiver 1 sees `Y1 = X1 + sqrt(a) X2 + Z1` and receiver 2 sees
//! `Y2 = sqrt(b) X1 + X2 + Z2`. Under `HK(tau1, tau2)` user `i` puts a
//! `tau_i` share of its power into a common message that both receivers
//! decode; the private remainder is treated as noise at the other receiver.

use crate::error::{Error, Result};
use crate::numerics::{cap, maximize_on_grid, GridSettings, GridSpec, Rate};
use crate::single_user::UserBudget;

/// Gains, powers and processing costs of a two-user Gaussian interference channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoUserChannel {
    a: f64,
    b: f64,
    user1: UserBudget,
    user2: UserBudget,
}

impl TwoUserChannel {
    /// `a` scales user 2 at receiver 1, `b` scales user 1 at receiver 2.
    pub fn new(a: f64, b: f64, p1: f64, p2: f64, eps1: f64, eps2: f64) -> Result<Self> {
        for (name, g) in [("a", a), ("b", b)] {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "gain {name} must be non-negative, got {g}"
                )));
            }
        }
        Ok(TwoUserChannel {
            a,
            b,
            user1: UserBudget::new(p1, eps1)?,
            user2: UserBudget::new(p2, eps2)?,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn user1(&self) -> UserBudget {
        self.user1
    }

    pub fn user2(&self) -> UserBudget {
        self.user2
    }

    pub fn p1(&self) -> f64 {
        self.user1.power()
    }

    pub fn p2(&self) -> f64 {
        self.user2.power()
    }

    pub fn eps1(&self) -> f64 {
        self.user1.eps()
    }

    pub fn eps2(&self) -> f64 {
        self.user2.eps()
    }

    /// Both cross gains at least one.
    pub fn is_strong(&self) -> bool {
        self.a >= 1.0 && self.b >= 1.0
    }
}

/// Common-message power fractions of the two users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    pub tau1: f64,
    pub tau2: f64,
}

impl PowerSplit {
    pub const PRIVATE_ONLY: PowerSplit = PowerSplit { tau1: 0.0, tau2: 0.0 };
    pub const COMMON_ONLY: PowerSplit = PowerSplit { tau1: 1.0, tau2: 1.0 };

    pub fn new(tau1: f64, tau2: f64) -> Result<Self> {
        for t in [tau1, tau2] {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidParameter(format!(
                    "power split must lie in [0, 1], got {t}"
                )));
            }
        }
        Ok(PowerSplit { tau1, tau2 })
    }
}

/// The four sum-rate constraints of `HK(tau1, tau2)` at signaling powers `p1`, `p2`.
pub(crate) fn psi_bits(p1: f64, p2: f64, a: f64, b: f64, tau1: f64, tau2: f64) -> [f64; 4] {
    let n1 = 1.0 + a * (1.0 - tau2) * p2;
    let n2 = 1.0 + b * (1.0 - tau1) * p1;
    [
        cap(p1 / n1) + cap(p2 / n2),
        cap((p1 + a * tau2 * p2) / n1) + cap((1.0 - tau2) * p2 / n2),
        cap((1.0 - tau1) * p1 / n1) + cap((p2 + b * tau1 * p1) / n2),
        cap(((1.0 - tau1) * p1 + a * tau2 * p2) / n1) + cap(((1.0 - tau2) * p2 + b * tau1 * p1) / n2),
    ]
}

#[inline]
fn psi_min(p1: f64, p2: f64, a: f64, b: f64, tau1: f64, tau2: f64) -> f64 {
    psi_bits(p1, p2, a, b, tau1, tau2)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// `[psi1, psi2, psi3, psi4]`; the powers are on-state signaling powers.
pub fn hk_psi(p1: f64, p2: f64, a: f64, b: f64, split: PowerSplit) -> [Rate; 4] {
    psi_bits(p1, p2, a, b, split.tau1, split.tau2).map(Rate::from_bits)
}

/// Sum rate of a fixed `HK(tau1, tau2)`: the smallest of the four constraints.
pub fn hk_sum_rate_fixed_split(p1: f64, p2: f64, a: f64, b: f64, split: PowerSplit) -> Rate {
    Rate::from_bits(psi_min(p1, p2, a, b, split.tau1, split.tau2))
}

/// `sqrt(a)(b p1 + 1) + sqrt(b)(a p2 + 1) <= 1`, under which private-only
/// signaling is sum-rate optimal.
pub fn noisy_interference_test(a: f64, b: f64, p1: f64, p2: f64) -> bool {
    a.sqrt() * (b * p1 + 1.0) + b.sqrt() * (a * p2 + 1.0) <= 1.0
}

/// Which split search [`hk_sum_rate`] uses for a set of gains and powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HkRegime {
    /// `a, b >= 1`: common messages only.
    Strong,
    /// Noisy-interference inequality holds: private messages only.
    Noisy,
    /// No known optimal split; searched on a grid.
    General,
}

pub fn hk_regime(p1: f64, p2: f64, a: f64, b: f64) -> HkRegime {
    if a >= 1.0 && b >= 1.0 {
        HkRegime::Strong
    } else if noisy_interference_test(a, b, p1, p2) {
        HkRegime::Noisy
    } else {
        HkRegime::General
    }
}

/// Best simple Han-Kobayashi sum rate over all power splits, with the default grid.
pub fn hk_sum_rate(p1: f64, p2: f64, a: f64, b: f64) -> (Rate, PowerSplit) {
    hk_sum_rate_with(p1, p2, a, b, GridSettings::default())
}

/// [`hk_sum_rate`] with an explicit split-grid schedule for the general regime.
pub fn hk_sum_rate_with(
    p1: f64,
    p2: f64,
    a: f64,
    b: f64,
    grid: GridSettings,
) -> (Rate, PowerSplit) {
    let (bits, split) = hk_sum_rate_bits(p1, p2, a, b, grid);
    (Rate::from_bits(bits), split)
}

pub(crate) fn hk_sum_rate_bits(
    p1: f64,
    p2: f64,
    a: f64,
    b: f64,
    grid: GridSettings,
) -> (f64, PowerSplit) {
    let split = match hk_regime(p1, p2, a, b) {
        HkRegime::Strong => PowerSplit::COMMON_ONLY,
        HkRegime::Noisy => PowerSplit::PRIVATE_ONLY,
        HkRegime::General => {
            let spec = GridSpec::new(vec![(0.0, 1.0), (0.0, 1.0)], grid)
                .expect("unit square with validated settings");
            let opt = maximize_on_grid(|t| psi_min(p1, p2, a, b, t[0], t[1]), &spec)
                .expect("every split is feasible");
            return (
                opt.value,
                PowerSplit {
                    tau1: opt.point[0],
                    tau2: opt.point[1],
                },
            );
        }
    };
    (psi_min(p1, p2, a, b, split.tau1, split.tau2), split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(x: f64) -> f64 {
        0.5 * (1.0 + x).log2()
    }

    #[test]
    fn psi_without_cross_links() {
        for r in hk_psi(3.0, 3.0, 0.0, 0.0, PowerSplit::PRIVATE_ONLY) {
            assert_abs_diff_eq!(r.bits(), 2.0, epsilon = 1e-15);
        }
        for r in hk_psi(0.0, 0.0, 2.0, 0.3, PowerSplit::new(0.4, 0.9).unwrap()) {
            assert_eq!(r.bits(), 0.0);
        }
    }

    #[test]
    fn psi_common_only_hand_values() {
        let psi = hk_psi(1.5, 1.5, 3.0, 3.0, PowerSplit::COMMON_ONLY);
        assert_abs_diff_eq!(psi[0].bits(), 2.0 * c(1.5), epsilon = 1e-14);
        assert_abs_diff_eq!(psi[1].bits(), c(6.0), epsilon = 1e-14);
        assert_abs_diff_eq!(psi[2].bits(), c(6.0), epsilon = 1e-14);
        assert_abs_diff_eq!(psi[3].bits(), 2.0 * c(4.5), epsilon = 1e-14);
        let sum = hk_sum_rate_fixed_split(1.5, 1.5, 3.0, 3.0, PowerSplit::COMMON_ONLY);
        // min(2 C(1.5), C(6), C(6), 2 C(4.5)) = 2 C(1.5)
        assert_abs_diff_eq!(sum.bits(), 2.0 * c(1.5), epsilon = 1e-14);
    }

    #[test]
    fn fixed_split_is_min_of_psi() {
        let psi = hk_psi(2.0, 1.0, 0.4, 0.7, PowerSplit::PRIVATE_ONLY);
        let sum = hk_sum_rate_fixed_split(2.0, 1.0, 0.4, 0.7, PowerSplit::PRIVATE_ONLY);
        assert!(psi.iter().all(|p| sum <= *p));
        assert_abs_diff_eq!(
            sum.bits(),
            c(2.0 / (1.0 + 0.4)) + c(1.0 / (1.0 + 0.7 * 2.0)),
            epsilon = 1e-14
        );
        assert_eq!(hk_sum_rate_fixed_split(3.0, 3.0, 0.0, 0.0, PowerSplit::PRIVATE_ONLY).bits(), 2.0);
    }

    #[test]
    fn noisy_test_cases() {
        assert!(noisy_interference_test(0.0, 0.0, 7.0, 9.0));
        assert!(!noisy_interference_test(1.0, 1.0, 1.0, 1.0));
        // 0.1 * 1.01 * 2 = 0.202
        assert!(noisy_interference_test(0.01, 0.01, 1.0, 1.0));
    }

    #[test]
    fn shortcuts() {
        let (r, s) = hk_sum_rate(3.0, 3.0, 0.0, 0.0);
        assert_abs_diff_eq!(r.bits(), 2.0, epsilon = 1e-15);
        assert_eq!(s, PowerSplit::PRIVATE_ONLY);

        let (r, s) = hk_sum_rate(2.59, 2.59, 2.3, 2.3);
        assert_eq!(s, PowerSplit::COMMON_ONLY);
        // joint decoding binds: C(p1 + a p2) < 2 C(p) for a < 1 + p
        assert_abs_diff_eq!(r.bits(), c(2.59 + 2.3 * 2.59), epsilon = 1e-14);
        assert!(r.bits() < 2.0 * c(2.59));
        let (r, _) = hk_sum_rate(2.59, 2.59, 3.6, 3.6);
        assert_abs_diff_eq!(r.bits(), 2.0 * c(2.59), epsilon = 1e-14);
    }

    #[test]
    fn general_regime_matches_fine_grid() {
        let (r, split) = hk_sum_rate(1.5, 1.5, 0.2, 0.2);
        assert_eq!(hk_regime(1.5, 1.5, 0.2, 0.2), HkRegime::General);
        let mut oracle = f64::NEG_INFINITY;
        for i in 0..=1000 {
            for j in 0..=1000 {
                let v = psi_min(1.5, 1.5, 0.2, 0.2, i as f64 * 1e-3, j as f64 * 1e-3);
                oracle = oracle.max(v);
            }
        }
        assert_abs_diff_eq!(r.bits(), oracle, epsilon = 1e-3);
        assert!((0.0..=1.0).contains(&split.tau1) && (0.0..=1.0).contains(&split.tau2));
    }

    #[test]
    fn channel_validation() {
        assert!(TwoUserChannel::new(-1.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(TwoUserChannel::new(1.0, 1.0, 1.0, 1.0, 2.0, 0.0).is_err());
        assert!(PowerSplit::new(1.1, 0.0).is_err());
    }
}
