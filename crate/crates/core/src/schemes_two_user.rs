//! Transmission schemes for the two-user interference channel with processing cost.
//!
//! * Scheme I: both users always on, best simple Han-Kobayashi split.
//! * Scheme II: time division, no overlap.
//! * Scheme III: bursts overlapping for `theta1 + theta2 - 1` of the time,
//!   independent messages per fraction, simple Han-Kobayashi on the overlap.
//! * Scheme IV: common messages coded across the whole block and jointly
//!   decoded at both receivers (strong interference only).
//!
//! Users 1 and 2 are on during the first `theta1` and the last `theta2`
//! of the block, each at constant power `P/theta - eps`.

use crate::cgzic::BurstProfile3;
use crate::error::{Error, Result};
use crate::hk_two_user::{hk_sum_rate_bits, hk_sum_rate_with, PowerSplit, TwoUserChannel};
use crate::numerics::{
    cap, maximize_on_grid, signal_power, weighted, GridSpec, Rate, SearchConfig,
};
use crate::single_user::{best_burst_within, interference_free_rate, optimal_burstiness, BurstPoint};

/// Slack allowed on `theta1 + theta2 >= 1` for lattice points built by repeated addition.
pub(crate) const PROFILE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeTag {
    I,
    II,
    III,
    IV,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 4] = [SchemeTag::I, SchemeTag::II, SchemeTag::III, SchemeTag::IV];

    pub fn numeral(self) -> &'static str {
        match self {
            SchemeTag::I => "I",
            SchemeTag::II => "II",
            SchemeTag::III => "III",
            SchemeTag::IV => "IV",
        }
    }
}

impl std::fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Scheme {}", self.numeral())
    }
}

impl std::str::FromStr for SchemeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(SchemeTag::I),
            "II" | "2" | "TDM" => Ok(SchemeTag::II),
            "III" | "3" => Ok(SchemeTag::III),
            "IV" | "4" => Ok(SchemeTag::IV),
            other => Err(Error::InvalidParameter(format!("unknown scheme {other:?}"))),
        }
    }
}

/// On-fractions of the two users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurstProfile2 {
    pub theta1: f64,
    pub theta2: f64,
}

impl BurstProfile2 {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        BurstProfile2 { theta1, theta2 }
    }

    /// Overlapped fraction, `max(theta1 + theta2 - 1, 0)`.
    pub fn overlap(&self) -> f64 {
        (self.theta1 + self.theta2 - 1.0).max(0.0)
    }

    /// Checks `1 - theta_j* <= theta_i <= 1` and `theta1 + theta2 >= 1`.
    ///
    /// Without contention (`theta1* + theta2* < 1`) the lower bounds drop to
    /// `theta_i*` and non-overlapping profiles are allowed.
    pub fn check(&self, ch: &TwoUserChannel) -> Result<()> {
        let s1 = optimal_burstiness(ch.user1());
        let s2 = optimal_burstiness(ch.user2());
        check_profile(self.theta1, self.theta2, s1, s2)
    }
}

fn contends(s1: BurstPoint, s2: BurstPoint) -> bool {
    s1.theta + s2.theta >= 1.0
}

fn check_profile(theta1: f64, theta2: f64, s1: BurstPoint, s2: BurstPoint) -> Result<()> {
    let [(lo1, _), (lo2, _)] = profile_box(s1, s2);
    let in_box = |t: f64, lo: f64| t >= lo - PROFILE_SLACK && t <= 1.0;
    if !in_box(theta1, lo1) || !in_box(theta2, lo2) {
        return Err(Error::InfeasibleProfile(format!(
            "({theta1}, {theta2}) outside [{lo1}, 1] x [{lo2}, 1]"
        )));
    }
    if contends(s1, s2) && theta1 + theta2 < 1.0 - PROFILE_SLACK {
        return Err(Error::InfeasibleProfile(format!(
            "({theta1}, {theta2}) does not overlap"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    TwoUser(BurstProfile2),
    Cascade(BurstProfile3),
}

impl Profile {
    pub fn thetas(&self) -> Vec<f64> {
        match self {
            Profile::TwoUser(p) => vec![p.theta1, p.theta2],
            Profile::Cascade(p) => vec![p.theta1, p.theta2, p.theta3],
        }
    }
}

/// Maximized sum rate of a scheme together with its maximizing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeResult {
    pub scheme: SchemeTag,
    pub sum_rate: Rate,
    pub profile: Option<Profile>,
    pub split: Option<PowerSplit>,
}

/// Scheme I: no burstiness, signaling powers `P_i - eps_i`.
pub fn scheme_i(ch: &TwoUserChannel) -> SchemeResult {
    scheme_i_with(ch, &SearchConfig::default())
}

pub fn scheme_i_with(ch: &TwoUserChannel, cfg: &SearchConfig) -> SchemeResult {
    let (rate, split) = hk_sum_rate_with(
        ch.p1() - ch.eps1(),
        ch.p2() - ch.eps2(),
        ch.a(),
        ch.b(),
        cfg.split,
    );
    SchemeResult {
        scheme: SchemeTag::I,
        sum_rate: rate,
        profile: None,
        split: Some(split),
    }
}

fn tdm_bits(ch: &TwoUserChannel, s2: BurstPoint, theta1: f64) -> f64 {
    let own = weighted(theta1, cap(signal_power(theta1, ch.p1(), ch.eps1())));
    let (_, other) = best_burst_within(ch.user2(), s2, 1.0 - theta1);
    own + other
}

/// Time-division sum rate with user 1 on for `theta1` and user 2 for the rest.
///
/// User 2 never bursts longer than its own optimum, so slack time is left idle.
pub fn tdm_rate(ch: &TwoUserChannel, theta1: f64) -> Result<Rate> {
    if !(0.0..=1.0).contains(&theta1) {
        return Err(Error::InfeasibleProfile(format!("theta1={theta1} outside [0, 1]")));
    }
    Ok(Rate::from_bits(tdm_bits(ch, optimal_burstiness(ch.user2()), theta1)))
}

/// Scheme II: time division over `theta1` in `[1 - theta2*, theta1*]`.
pub fn scheme_ii_tdm(ch: &TwoUserChannel) -> SchemeResult {
    scheme_ii_tdm_with(ch, &SearchConfig::default())
}

pub fn scheme_ii_tdm_with(ch: &TwoUserChannel, cfg: &SearchConfig) -> SchemeResult {
    let s1 = optimal_burstiness(ch.user1());
    let s2 = optimal_burstiness(ch.user2());
    let hi = s1.theta;
    // without contention the range collapses onto theta1*
    let lo = (1.0 - s2.theta).min(hi);
    let spec = GridSpec::new(vec![(lo, hi)], cfg.fraction).expect("validated settings");
    let opt = maximize_on_grid(|t| tdm_bits(ch, s2, t[0]), &spec).expect("every split is feasible");
    let theta1 = opt.point[0];
    SchemeResult {
        scheme: SchemeTag::II,
        sum_rate: Rate::from_bits(opt.value),
        profile: Some(Profile::TwoUser(BurstProfile2::new(theta1, 1.0 - theta1))),
        split: None,
    }
}

/// `theta1 in [1 - theta2*, 1]`, `theta2 in [1 - theta1*, 1]`, widened to reach
/// `theta_i*` when the users do not contend.
fn profile_box(s1: BurstPoint, s2: BurstPoint) -> [(f64, f64); 2] {
    [
        ((1.0 - s2.theta).min(s1.theta), 1.0),
        ((1.0 - s1.theta).min(s2.theta), 1.0),
    ]
}

/// Overlap and the two solo fractions, or `None` for a forbidden gap.
fn fractions(ch: &TwoUserChannel, theta1: f64, theta2: f64) -> Option<(f64, f64, f64)> {
    let gap = 1.0 - theta1 - theta2;
    if gap > PROFILE_SLACK && ch_contends(ch) {
        return None;
    }
    let overlap = (-gap).max(0.0);
    Some((overlap, theta1 - overlap, theta2 - overlap))
}

fn ch_contends(ch: &TwoUserChannel) -> bool {
    contends(optimal_burstiness(ch.user1()), optimal_burstiness(ch.user2()))
}

fn scheme_iii_bits(ch: &TwoUserChannel, cfg: &SearchConfig, theta1: f64, theta2: f64) -> f64 {
    let Some((overlap, solo1, solo2)) = fractions(ch, theta1, theta2) else {
        return f64::NEG_INFINITY;
    };
    let nu1 = signal_power(theta1, ch.p1(), ch.eps1());
    let nu2 = signal_power(theta2, ch.p2(), ch.eps2());
    let shared = if overlap > 0.0 {
        overlap * hk_sum_rate_bits(nu1, nu2, ch.a(), ch.b(), cfg.split).0
    } else {
        0.0
    };
    weighted(solo1, cap(nu1)) + weighted(solo2, cap(nu2)) + shared
}

/// The lattice rarely lands on `theta1 + theta2 = 1`, so the time-division
/// optimum is scored separately and kept if it beats the grid.
fn with_tdm_candidate<F>(
    ch: &TwoUserChannel,
    cfg: &SearchConfig,
    point: &[f64],
    value: f64,
    objective: F,
) -> (f64, f64, f64)
where
    F: Fn(f64, f64) -> f64,
{
    let tdm = scheme_ii_tdm_with(ch, cfg);
    let Some(Profile::TwoUser(p)) = tdm.profile else {
        unreachable!("time division always reports a two-user profile")
    };
    let v = objective(p.theta1, p.theta2);
    if v > value {
        (v, p.theta1, p.theta2)
    } else {
        (value, point[0], point[1])
    }
}

/// Scheme III sum rate at a fixed profile.
pub fn scheme_iii_profile(
    ch: &TwoUserChannel,
    profile: BurstProfile2,
    cfg: &SearchConfig,
) -> Result<Rate> {
    profile.check(ch)?;
    Ok(Rate::from_bits(scheme_iii_bits(
        ch,
        cfg,
        profile.theta1,
        profile.theta2,
    )))
}

/// Scheme III: overlap profile and split maximized jointly.
pub fn scheme_iii(ch: &TwoUserChannel) -> SchemeResult {
    scheme_iii_with(ch, &SearchConfig::default())
}

pub fn scheme_iii_with(ch: &TwoUserChannel, cfg: &SearchConfig) -> SchemeResult {
    let s1 = optimal_burstiness(ch.user1());
    let s2 = optimal_burstiness(ch.user2());
    let spec = GridSpec::new(profile_box(s1, s2).to_vec(), cfg.fraction).expect("validated settings");
    let opt = maximize_on_grid(|t| scheme_iii_bits(ch, cfg, t[0], t[1]), &spec)
        .expect("the full-overlap profile is always feasible");
    let (value, theta1, theta2) = with_tdm_candidate(ch, cfg, &opt.point, opt.value, |t1, t2| {
        scheme_iii_bits(ch, cfg, t1, t2)
    });
    let split = if theta1 + theta2 > 1.0 {
        let nu1 = signal_power(theta1, ch.p1(), ch.eps1());
        let nu2 = signal_power(theta2, ch.p2(), ch.eps2());
        Some(hk_sum_rate_bits(nu1, nu2, ch.a(), ch.b(), cfg.split).1)
    } else {
        None
    };
    SchemeResult {
        scheme: SchemeTag::III,
        sum_rate: Rate::from_bits(value),
        profile: Some(Profile::TwoUser(BurstProfile2::new(theta1, theta2))),
        split,
    }
}

fn scheme_iv_bits(ch: &TwoUserChannel, theta1: f64, theta2: f64) -> f64 {
    let Some((overlap, solo1, solo2)) = fractions(ch, theta1, theta2) else {
        return f64::NEG_INFINITY;
    };
    let (a, b) = (ch.a(), ch.b());
    let nu1 = signal_power(theta1, ch.p1(), ch.eps1());
    let nu2 = signal_power(theta2, ch.p2(), ch.eps2());
    let own = weighted(theta1, cap(nu1)) + weighted(theta2, cap(nu2));
    let at_rx1 = weighted(overlap, cap(nu1 + a * nu2))
        + weighted(solo1, cap(nu1))
        + weighted(solo2, cap(a * nu2));
    let at_rx2 = weighted(overlap, cap(b * nu1 + nu2))
        + weighted(solo1, cap(b * nu1))
        + weighted(solo2, cap(nu2));
    own.min(at_rx1).min(at_rx2)
}

fn require_strong(ch: &TwoUserChannel) -> Result<()> {
    if ch.is_strong() {
        Ok(())
    } else {
        Err(Error::Regime {
            scheme: "two-user Scheme IV",
            reason: format!("requires a >= 1 and b >= 1, got a={}, b={}", ch.a(), ch.b()),
        })
    }
}

/// Scheme IV sum rate at a fixed profile.
pub fn scheme_iv_profile(ch: &TwoUserChannel, profile: BurstProfile2) -> Result<Rate> {
    require_strong(ch)?;
    profile.check(ch)?;
    Ok(Rate::from_bits(scheme_iv_bits(ch, profile.theta1, profile.theta2)))
}

/// Scheme IV: joint decoding of common messages over the whole block.
pub fn scheme_iv(ch: &TwoUserChannel) -> Result<SchemeResult> {
    scheme_iv_with(ch, &SearchConfig::default())
}

pub fn scheme_iv_with(ch: &TwoUserChannel, cfg: &SearchConfig) -> Result<SchemeResult> {
    require_strong(ch)?;
    let s1 = optimal_burstiness(ch.user1());
    let s2 = optimal_burstiness(ch.user2());
    let spec = GridSpec::new(profile_box(s1, s2).to_vec(), cfg.fraction)?;
    let opt = maximize_on_grid(|t| scheme_iv_bits(ch, t[0], t[1]), &spec)?;
    let (value, theta1, theta2) =
        with_tdm_candidate(ch, cfg, &opt.point, opt.value, |t1, t2| scheme_iv_bits(ch, t1, t2));
    Ok(SchemeResult {
        scheme: SchemeTag::IV,
        sum_rate: Rate::from_bits(value),
        profile: Some(Profile::TwoUser(BurstProfile2::new(theta1, theta2))),
        split: Some(PowerSplit::COMMON_ONLY),
    })
}

/// Sum of the two users' interference-free rates.
pub fn upper_bound_two_user(ch: &TwoUserChannel) -> Rate {
    Rate::from_bits(interference_free_rate(ch.user1()).bits() + interference_free_rate(ch.user2()).bits())
}

/// Scheme IV sum rate divided by the interference-free upper bound.
pub fn normalized_sum_rate(ch: &TwoUserChannel) -> Result<f64> {
    normalized_sum_rate_with(ch, &SearchConfig::default())
}

pub fn normalized_sum_rate_with(ch: &TwoUserChannel, cfg: &SearchConfig) -> Result<f64> {
    let r = scheme_iv_with(ch, cfg)?.sum_rate.bits();
    Ok((r / upper_bound_two_user(ch).bits()).min(1.0))
}

/// Runs one scheme by tag.
pub fn run_scheme(ch: &TwoUserChannel, tag: SchemeTag, cfg: &SearchConfig) -> Result<SchemeResult> {
    match tag {
        SchemeTag::I => Ok(scheme_i_with(ch, cfg)),
        SchemeTag::II => Ok(scheme_ii_tdm_with(ch, cfg)),
        SchemeTag::III => Ok(scheme_iii_with(ch, cfg)),
        SchemeTag::IV => scheme_iv_with(ch, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(x: f64) -> f64 {
        0.5 * (1.0 + x).log2()
    }

    fn ch(a: f64, b: f64, p: f64, e: f64) -> TwoUserChannel {
        TwoUserChannel::new(a, b, p, p, e, e).unwrap()
    }

    #[test]
    fn scheme_i_without_interference() {
        for e in [0.0, 0.7, 2.0] {
            let r = scheme_i(&ch(0.0, 0.0, 3.0 + e, e));
            assert_abs_diff_eq!(r.sum_rate.bits(), 2.0, epsilon = 1e-14);
        }
        let r = scheme_i(&ch(3.0, 3.0, 3.5, 0.0));
        assert_eq!(r.split, Some(PowerSplit::COMMON_ONLY));
        assert_abs_diff_eq!(r.sum_rate.bits(), c(3.5 + 3.0 * 3.5), epsilon = 1e-14);
    }

    #[test]
    fn scheme_ii_symmetric_optimum() {
        let r = scheme_ii_tdm(&ch(1.0, 3.0, 3.5, 2.0));
        let Some(Profile::TwoUser(p)) = r.profile else { panic!() };
        assert_abs_diff_eq!(p.theta1, 0.5, epsilon = 0.005);
        assert_abs_diff_eq!(r.sum_rate.bits(), c(5.0), epsilon = 1e-6);
        // 1e-4 brute force over [1 - theta2*, theta1*]
        let c2 = ch(1.0, 3.0, 3.5, 2.0);
        let s = optimal_burstiness(c2.user1());
        let mut best = (0.0, f64::NEG_INFINITY);
        let mut t = 1.0 - s.theta;
        while t <= s.theta {
            let v = tdm_rate(&c2, t).unwrap().bits();
            if v > best.1 {
                best = (t, v);
            }
            t += 1e-4;
        }
        assert_abs_diff_eq!(r.sum_rate.bits(), best.1, epsilon = 1e-7);
        assert_abs_diff_eq!(p.theta1, best.0, epsilon = 0.005);
    }

    #[test]
    fn tdm_loses_to_always_on_only_without_cost() {
        let c0 = ch(0.0, 0.0, 3.5, 0.0);
        assert!(scheme_ii_tdm(&c0).sum_rate.bits() < scheme_i(&c0).sum_rate.bits());
        // a large cost makes bursting worthwhile even without interference
        let c3 = ch(0.0, 0.0, 3.5, 3.0);
        assert!(scheme_ii_tdm(&c3).sum_rate.bits() > scheme_i(&c3).sum_rate.bits());
    }

    #[test]
    fn no_contention_reaches_bound() {
        let c0 = ch(2.0, 2.0, 3.5, 3.45);
        let s = optimal_burstiness(c0.user1());
        assert!(2.0 * s.theta < 1.0);
        let ub = upper_bound_two_user(&c0).bits();
        assert_abs_diff_eq!(scheme_ii_tdm(&c0).sum_rate.bits(), ub, epsilon = 1e-12);
        assert_abs_diff_eq!(scheme_iii(&c0).sum_rate.bits(), ub, epsilon = 1e-12);
        assert_abs_diff_eq!(scheme_iv(&c0).unwrap().sum_rate.bits(), ub, epsilon = 1e-12);
        // a gap between the bursts is allowed, the solo fractions are the bursts themselves
        let gap = BurstProfile2::new(s.theta, s.theta);
        assert!(gap.check(&c0).is_ok());
        assert_eq!(gap.overlap(), 0.0);
        assert!(BurstProfile2::new(s.theta - 0.01, 1.0).check(&c0).is_err());
        let contending = ch(2.0, 2.0, 3.5, 2.0);
        assert!(BurstProfile2::new(0.45, 0.5).check(&contending).is_err());
    }

    #[test]
    fn scheme_iii_degenerate_profiles() {
        let c0 = ch(0.6, 1.4, 3.5, 2.0);
        let cfg = SearchConfig::default();
        let full = scheme_iii_profile(&c0, BurstProfile2::new(1.0, 1.0), &cfg).unwrap();
        assert_abs_diff_eq!(full.bits(), scheme_i(&c0).sum_rate.bits(), epsilon = 1e-12);
        for t in [0.3, 0.45, 0.6, 0.7] {
            let v = scheme_iii_profile(&c0, BurstProfile2::new(t, 1.0 - t), &cfg).unwrap();
            assert_abs_diff_eq!(v.bits(), tdm_rate(&c0, t).unwrap().bits(), epsilon = 1e-12);
        }
        assert!(scheme_iii_profile(&c0, BurstProfile2::new(0.4, 0.4), &cfg).is_err());
        assert!(scheme_iii_profile(&c0, BurstProfile2::new(0.1, 1.0), &cfg).is_err());
    }

    #[test]
    fn scheme_iii_beats_tdm_under_weak_one_sided_interference() {
        let c0 = TwoUserChannel::new(0.2, 0.0, 3.5, 3.5, 2.0, 2.0).unwrap();
        let iii = scheme_iii(&c0).sum_rate.bits();
        let ii = scheme_ii_tdm(&c0).sum_rate.bits();
        assert!(iii > ii + 1e-3, "III={iii} II={ii}");
    }

    #[test]
    fn scheme_iv_regime_and_anchors() {
        assert!(matches!(
            scheme_iv(&ch(0.9, 3.0, 3.5, 2.0)),
            Err(Error::Regime { .. })
        ));
        let c1 = TwoUserChannel::new(1.0, 3.0, 3.5, 3.5, 2.0, 2.0).unwrap();
        let iv = scheme_iv(&c1).unwrap().sum_rate.bits();
        assert_abs_diff_eq!(iv, scheme_ii_tdm(&c1).sum_rate.bits(), epsilon = 0.005);

        let c2 = TwoUserChannel::new(2.5, 3.0, 3.5, 3.5, 2.0, 2.0).unwrap();
        let iv = scheme_iv(&c2).unwrap().sum_rate.bits();
        assert_abs_diff_eq!(iv, upper_bound_two_user(&c2).bits(), epsilon = 0.005);

        let c3 = ch(3.0, 3.0, 3.5, 1.6);
        let iv = scheme_iv(&c3).unwrap().sum_rate.bits();
        assert_abs_diff_eq!(iv, upper_bound_two_user(&c3).bits(), epsilon = 0.005);
    }

    #[test]
    fn scheme_iv_zero_overlap_dominates_tdm() {
        let c0 = ch(1.7, 2.2, 3.5, 2.0);
        for t in [0.3, 0.5, 0.7] {
            let iv = scheme_iv_profile(&c0, BurstProfile2::new(t, 1.0 - t)).unwrap();
            assert!(iv.bits() >= tdm_rate(&c0, t).unwrap().bits() - 1e-12);
        }
    }

    #[test]
    fn upper_bound_values() {
        let u = upper_bound_two_user(&ch(3.0, 3.0, 3.5, 2.0)).bits();
        assert_abs_diff_eq!(u, 1.4096, epsilon = 0.02);
        assert_abs_diff_eq!(upper_bound_two_user(&ch(1.0, 1.0, 3.0, 0.0)).bits(), 2.0, epsilon = 1e-14);
        let mixed = TwoUserChannel::new(1.0, 1.0, 4.0, 3.5, 2.0, 2.0).unwrap();
        let s1 = optimal_burstiness(mixed.user1());
        let expect = s1.theta * c(4.0 / s1.theta - 2.0)
            + interference_free_rate(mixed.user2()).bits();
        assert_abs_diff_eq!(upper_bound_two_user(&mixed).bits(), expect, epsilon = 1e-14);
    }

    #[test]
    fn normalized_rate_without_cost() {
        let c0 = ch(1.0, 1.0, 3.5, 0.0);
        let ratio = normalized_sum_rate(&c0).unwrap();
        let hk = scheme_i(&c0).sum_rate.bits();
        assert_abs_diff_eq!(ratio, hk / (2.0 * c(3.5)), epsilon = 1e-3);
        assert!(normalized_sum_rate(&ch(0.5, 1.0, 3.5, 0.0)).is_err());
    }

    #[test]
    fn scheme_tags_parse() {
        assert_eq!("iii".parse::<SchemeTag>().unwrap(), SchemeTag::III);
        assert_eq!("TDM".parse::<SchemeTag>().unwrap(), SchemeTag::II);
        assert!("V".parse::<SchemeTag>().is_err());
    }
}
