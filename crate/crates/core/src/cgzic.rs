//! Three-user cascade Gaussian Z interference channel.
//!
//! ```text
//! Y1 = X1 + Z1
//! Y2 = sqrt(a1) X1 + X2 + Z2
//! Y3 = sqrt(a2) X2 + X3 + Z3
//! ```
//!
//! Users 1 and 3 are on during the first `theta1` and `theta3` of the block,
//! user 2 during the last `theta2`. The bursting schemes target the mixed
//! regime `a1 >= 1`, `0 < a2 < 1`.
//!
//! Only Scheme IV is regime-restricted. For `a1 >= 1, a2 >= 1` receiver 3
//! would also overhear user 2 and bound `R2` the way receiver 2 bounds `R1`;
//! for `a1 < 1, a2 >= 1` only receiver 3 overhears; for `a1, a2 <= 1` there
//! is nothing to overhear. None of these variants is implemented.

use crate::error::{Error, Result};
use crate::numerics::{cap, maximize_on_grid, signal_power, weighted, GridSpec, Rate, SearchConfig};
use crate::schemes_two_user::{Profile, SchemeResult, SchemeTag, PROFILE_SLACK};
use crate::single_user::{best_burst_within, interference_free_rate, optimal_burstiness, BurstPoint, UserBudget};

/// Gains, powers and processing costs of the three-user cascade channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgzicChannel {
    a1: f64,
    a2: f64,
    users: [UserBudget; 3],
}

impl CgzicChannel {
    /// `a1` scales user 1 at receiver 2, `a2` scales user 2 at receiver 3.
    pub fn new(a1: f64, a2: f64, powers: [f64; 3], eps: [f64; 3]) -> Result<Self> {
        for (name, g) in [("a1", a1), ("a2", a2)] {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "gain {name} must be non-negative, got {g}"
                )));
            }
        }
        Ok(CgzicChannel {
            a1,
            a2,
            users: [
                UserBudget::new(powers[0], eps[0])?,
                UserBudget::new(powers[1], eps[1])?,
                UserBudget::new(powers[2], eps[2])?,
            ],
        })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    /// Budget of user `i` in `0..3`.
    pub fn user(&self, i: usize) -> UserBudget {
        self.users[i]
    }

    pub fn powers(&self) -> [f64; 3] {
        self.users.map(|u| u.power())
    }

    pub fn eps(&self) -> [f64; 3] {
        self.users.map(|u| u.eps())
    }

    pub fn optimal_fractions(&self) -> [BurstPoint; 3] {
        self.users.map(optimal_burstiness)
    }

    /// `a1 >= 1` and `0 < a2 < 1`.
    pub fn is_mixed_regime(&self) -> bool {
        self.a1 >= 1.0 && self.a2 > 0.0 && self.a2 < 1.0
    }

    /// Whether user 2 contends with both neighbours: `theta1* + theta2* >= 1`
    /// and `theta2* + theta3* >= 1`.
    pub fn contends(&self) -> bool {
        let [s1, s2, s3] = self.optimal_fractions();
        s1.theta + s2.theta >= 1.0 && s2.theta + s3.theta >= 1.0
    }
}

/// On-fractions of the three users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurstProfile3 {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl BurstProfile3 {
    pub fn new(theta1: f64, theta2: f64, theta3: f64) -> Self {
        BurstProfile3 {
            theta1,
            theta2,
            theta3,
        }
    }

    /// Checks `1 - theta2* <= theta1, theta3 <= 1`,
    /// `1 - max(theta1*, theta3*) <= theta2 <= 1` and `theta2 + min(theta1, theta3) >= 1`.
    pub fn check(&self, ch: &CgzicChannel) -> Result<()> {
        let [s1, s2, s3] = ch.optimal_fractions();
        let BurstProfile3 {
            theta1,
            theta2,
            theta3,
        } = *self;
        let outer_lo = 1.0 - s2.theta - PROFILE_SLACK;
        let mid_lo = 1.0 - s1.theta.max(s3.theta) - PROFILE_SLACK;
        let ok = (outer_lo..=1.0).contains(&theta1)
            && (outer_lo..=1.0).contains(&theta3)
            && (mid_lo..=1.0).contains(&theta2)
            && theta2 + theta1.min(theta3) >= 1.0 - PROFILE_SLACK;
        if ok {
            Ok(())
        } else {
            Err(Error::InfeasibleProfile(format!(
                "({theta1}, {theta2}, {theta3}) violates the cascade profile constraints"
            )))
        }
    }
}

fn next_gamma(gain: f64, gamma_prev: f64, p_prev: f64, p: f64) -> f64 {
    if gain <= gamma_prev {
        1.0 / (1.0 + gain * p_prev)
    } else if p == 0.0 {
        1.0
    } else {
        (((gain - gamma_prev) * p_prev + p) / (p + gamma_prev * p_prev * p)).min(1.0)
    }
}

/// Effective SNR discounts `(gamma1, gamma2, gamma3)` with `gamma1 = 1`.
pub fn gamma_chain(a1: f64, a2: f64, p1: f64, p2: f64, p3: f64) -> [f64; 3] {
    let g2 = next_gamma(a1, 1.0, p1, p2);
    let g3 = next_gamma(a2, g2, p2, p3);
    [1.0, g2, g3]
}

fn cgzic_sum_bits(p: [f64; 3], a1: f64, a2: f64) -> f64 {
    let g = gamma_chain(a1, a2, p[0], p[1], p[2]);
    cap(g[0] * p[0]) + cap(g[1] * p[1]) + cap(g[2] * p[2])
}

/// Three-user sum rate `sum C(gamma_i p_i)` at signaling powers `p`.
pub fn cgzic_sum_rate(p1: f64, p2: f64, p3: f64, a1: f64, a2: f64) -> Rate {
    Rate::from_bits(cgzic_sum_bits([p1, p2, p3], a1, a2))
}

/// Sum rate of a two-user Z channel where `first` interferes with `second`
/// through `gain`, from the chain recursion restricted to the pair.
///
/// For `gain >= 1` this is `min{C(first) + C(second), C(gain first + second)}`;
/// for `gain < 1` it treats interference as noise.
fn z_pair_bits(first: f64, second: f64, gain: f64) -> f64 {
    cap(first) + cap(next_gamma(gain, 1.0, first, second) * second)
}

fn require_contention(ch: &CgzicChannel, scheme: &'static str) -> Result<()> {
    if ch.contends() {
        Ok(())
    } else {
        Err(Error::Regime {
            scheme,
            reason: "user 2 must contend with both neighbours (theta1* + theta2* >= 1, theta2* + theta3* >= 1)"
                .into(),
        })
    }
}

fn require_mixed(ch: &CgzicChannel) -> Result<()> {
    if ch.is_mixed_regime() {
        Ok(())
    } else {
        Err(Error::Regime {
            scheme: "cascade Scheme IV",
            reason: format!(
                "requires a1 >= 1 and 0 < a2 < 1, got a1={}, a2={}",
                ch.a1, ch.a2
            ),
        })
    }
}

fn powers_at(ch: &CgzicChannel, t: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| signal_power(t[i], ch.users[i].power(), ch.users[i].eps()))
}

/// Scheme I: everyone always on.
pub fn cgzic_scheme_i(ch: &CgzicChannel) -> SchemeResult {
    let p = ch.powers();
    let e = ch.eps();
    SchemeResult {
        scheme: SchemeTag::I,
        sum_rate: Rate::from_bits(cgzic_sum_bits(
            [p[0] - e[0], p[1] - e[1], p[2] - e[2]],
            ch.a1,
            ch.a2,
        )),
        profile: None,
        split: None,
    }
}

fn tdm_bits(ch: &CgzicChannel, s2: BurstPoint, theta1: f64, theta3: f64) -> f64 {
    let [nu1, _, nu3] = powers_at(ch, [theta1, 0.0, theta3]);
    let (_, middle) = best_burst_within(ch.users[1], s2, 1.0 - theta1.max(theta3));
    weighted(theta1, cap(nu1)) + weighted(theta3, cap(nu3)) + middle
}

/// Time-division sum rate: users 1 and 3 overlap freely, user 2 takes the rest.
pub fn cgzic_tdm_rate(ch: &CgzicChannel, theta1: f64, theta3: f64) -> Result<Rate> {
    for t in [theta1, theta3] {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InfeasibleProfile(format!("fraction {t} outside [0, 1]")));
        }
    }
    let s2 = optimal_burstiness(ch.users[1]);
    Ok(Rate::from_bits(tdm_bits(ch, s2, theta1, theta3)))
}

/// Scheme II: time division between user 2 and users {1, 3}.
pub fn cgzic_scheme_ii_tdm(ch: &CgzicChannel) -> SchemeResult {
    cgzic_scheme_ii_tdm_with(ch, &SearchConfig::default())
}

pub fn cgzic_scheme_ii_tdm_with(ch: &CgzicChannel, cfg: &SearchConfig) -> SchemeResult {
    let [s1, s2, s3] = ch.optimal_fractions();
    let range = |s: BurstPoint| ((1.0 - s2.theta).min(s.theta), s.theta);
    let spec = GridSpec::new(vec![range(s1), range(s3)], cfg.fraction).expect("validated settings");
    let opt = maximize_on_grid(|t| tdm_bits(ch, s2, t[0], t[1]), &spec)
        .expect("every time division is feasible");
    let (theta1, theta3) = (opt.point[0], opt.point[1]);
    SchemeResult {
        scheme: SchemeTag::II,
        sum_rate: Rate::from_bits(opt.value),
        profile: Some(Profile::Cascade(BurstProfile3::new(
            theta1,
            1.0 - theta1.max(theta3),
            theta3,
        ))),
        split: None,
    }
}

fn profile_box(ch: &CgzicChannel) -> Vec<(f64, f64)> {
    let [s1, s2, s3] = ch.optimal_fractions();
    vec![
        (1.0 - s2.theta, 1.0),
        (1.0 - s1.theta.max(s3.theta), 1.0),
        (1.0 - s2.theta, 1.0),
    ]
}

fn overlaps_ok(t: [f64; 3]) -> bool {
    t[1] + t[0].min(t[2]) >= 1.0 - PROFILE_SLACK
}

fn scheme_iii_bits(ch: &CgzicChannel, t: [f64; 3]) -> f64 {
    if !overlaps_ok(t) {
        return f64::NEG_INFINITY;
    }
    let [theta1, theta2, theta3] = t;
    let nu = powers_at(ch, t);
    let [c1, c2, c3] = nu.map(cap);
    let outer = weighted(1.0 - theta2, c1 + c3);
    if theta1 >= theta3 {
        weighted(1.0 - theta1, c2)
            + outer
            + weighted(theta2 + theta3 - 1.0, cgzic_sum_bits(nu, ch.a1, ch.a2))
            + weighted(theta1 - theta3, z_pair_bits(nu[0], nu[1], ch.a1))
    } else {
        weighted(1.0 - theta3, c2)
            + outer
            + weighted(theta1 + theta2 - 1.0, cgzic_sum_bits(nu, ch.a1, ch.a2))
            + weighted(theta3 - theta1, z_pair_bits(nu[1], nu[2], ch.a2))
    }
}

/// Scheme III sum rate at a fixed profile.
pub fn cgzic_scheme_iii_profile(ch: &CgzicChannel, profile: BurstProfile3) -> Result<Rate> {
    profile.check(ch)?;
    Ok(Rate::from_bits(scheme_iii_bits(
        ch,
        [profile.theta1, profile.theta2, profile.theta3],
    )))
}

/// Scheme III: overlapping bursts, independent messages per fraction.
pub fn cgzic_scheme_iii(ch: &CgzicChannel) -> Result<SchemeResult> {
    cgzic_scheme_iii_with(ch, &SearchConfig::default())
}

pub fn cgzic_scheme_iii_with(ch: &CgzicChannel, cfg: &SearchConfig) -> Result<SchemeResult> {
    require_contention(ch, "cascade Scheme III")?;
    let spec = GridSpec::new(profile_box(ch), cfg.profile3)?;
    let opt = maximize_on_grid(|t| scheme_iii_bits(ch, [t[0], t[1], t[2]]), &spec)?;
    let (value, point) = with_tdm_candidate(ch, cfg, opt.value, opt.point, |t| scheme_iii_bits(ch, t));
    Ok(profile_result(SchemeTag::III, value, &point))
}

fn scheme_iv_bits(ch: &CgzicChannel, t: [f64; 3]) -> f64 {
    if !overlaps_ok(t) {
        return f64::NEG_INFINITY;
    }
    let [theta1, theta2, theta3] = t;
    let [nu1, nu2, nu3] = powers_at(ch, t);
    let a1 = ch.a1;
    let r1 = weighted(theta1, cap(nu1)).min(
        weighted(1.0 - theta2, cap(a1 * nu1))
            + weighted(theta1 + theta2 - 1.0, cap(a1 * nu1 / (1.0 + nu2))),
    );
    let r23 = weighted(theta2, cap(nu2))
        + weighted(1.0 - theta2, cap(nu3))
        + weighted(theta2 + theta3 - 1.0, cap(nu3 / (1.0 + ch.a2 * nu2)));
    r1 + r23
}

/// Scheme IV sum rate at a fixed profile: receiver 2 decodes and removes user 1.
pub fn cgzic_scheme_iv_profile(ch: &CgzicChannel, profile: BurstProfile3) -> Result<Rate> {
    require_mixed(ch)?;
    profile.check(ch)?;
    Ok(Rate::from_bits(scheme_iv_bits(
        ch,
        [profile.theta1, profile.theta2, profile.theta3],
    )))
}

/// Scheme IV: overhearing and interference cancellation at receiver 2.
pub fn cgzic_scheme_iv(ch: &CgzicChannel) -> Result<SchemeResult> {
    cgzic_scheme_iv_with(ch, &SearchConfig::default())
}

pub fn cgzic_scheme_iv_with(ch: &CgzicChannel, cfg: &SearchConfig) -> Result<SchemeResult> {
    require_mixed(ch)?;
    require_contention(ch, "cascade Scheme IV")?;
    let spec = GridSpec::new(profile_box(ch), cfg.profile3)?;
    let opt = maximize_on_grid(|t| scheme_iv_bits(ch, [t[0], t[1], t[2]]), &spec)?;
    let (value, point) = with_tdm_candidate(ch, cfg, opt.value, opt.point, |t| scheme_iv_bits(ch, t));
    Ok(profile_result(SchemeTag::IV, value, &point))
}

/// Scores the time-division optimum as an extra candidate when it is a
/// feasible overlap profile, i.e. when users 1 and 3 share the same fraction.
fn with_tdm_candidate<F>(
    ch: &CgzicChannel,
    cfg: &SearchConfig,
    value: f64,
    point: Vec<f64>,
    objective: F,
) -> (f64, Vec<f64>)
where
    F: Fn([f64; 3]) -> f64,
{
    if let Some(Profile::Cascade(p)) = cgzic_scheme_ii_tdm_with(ch, cfg).profile {
        if p.check(ch).is_ok() {
            let v = objective([p.theta1, p.theta2, p.theta3]);
            if v > value {
                return (v, vec![p.theta1, p.theta2, p.theta3]);
            }
        }
    }
    (value, point)
}

fn profile_result(scheme: SchemeTag, value: f64, point: &[f64]) -> SchemeResult {
    SchemeResult {
        scheme,
        sum_rate: Rate::from_bits(value),
        profile: Some(Profile::Cascade(BurstProfile3::new(point[0], point[1], point[2]))),
        split: None,
    }
}

/// Sum of the three interference-free rates.
pub fn upper_bound_cgzic(ch: &CgzicChannel) -> Rate {
    Rate::from_bits(ch.users.iter().map(|&u| interference_free_rate(u).bits()).sum())
}

/// Scheme IV sum rate over the interference-free upper bound.
pub fn normalized_cgzic_sum_rate_with(ch: &CgzicChannel, cfg: &SearchConfig) -> Result<f64> {
    let r = cgzic_scheme_iv_with(ch, cfg)?.sum_rate.bits();
    Ok((r / upper_bound_cgzic(ch).bits()).min(1.0))
}

pub fn run_cgzic_scheme(ch: &CgzicChannel, tag: SchemeTag, cfg: &SearchConfig) -> Result<SchemeResult> {
    match tag {
        SchemeTag::I => Ok(cgzic_scheme_i(ch)),
        SchemeTag::II => Ok(cgzic_scheme_ii_tdm_with(ch, cfg)),
        SchemeTag::III => cgzic_scheme_iii_with(ch, cfg),
        SchemeTag::IV => cgzic_scheme_iv_with(ch, cfg),
    }
}
