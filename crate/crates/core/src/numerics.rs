//! Special functions, the Gaussian capacity map and a box-constrained grid maximizer.
//!
//! Every rate in this crate is measured in bits per channel use, using
//! `C(x) = log2(1 + x) / 2`.

use std::f64::consts::E;

use crate::error::{Error, Result};

/// Achievable rate in bits per channel use.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Rate(f64);

impl Rate {
    pub const ZERO: Rate = Rate(0.0);

    pub fn new(bits: f64) -> Result<Self> {
        if bits.is_finite() && bits >= 0.0 {
            Ok(Rate(bits))
        } else {
            Err(Error::Domain {
                function: "Rate::new",
                value: bits,
                expected: "finite and non-negative",
            })
        }
    }

    /// Wraps a value produced by one of the internal rate formulas.
    ///
    /// Rounding can leave `-0.0` or values a few ulps below zero; those are
    /// clamped.
    pub(crate) fn from_bits(bits: f64) -> Self {
        debug_assert!(bits.is_finite(), "non-finite rate {bits}");
        Rate(bits.max(0.0))
    }

    pub fn bits(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Rate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

const BRANCH_POINT: f64 = -1.0 / E;

/// Principal branch of the Lambert W function, `w` with `w * exp(w) = x`.
///
/// Halley iteration from a regime-dependent starting point, stopped when
/// the relative step drops below 1e-14.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < BRANCH_POINT {
        return Err(Error::Domain {
            function: "lambert_w0",
            value: x,
            expected: "x >= -1/e",
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == BRANCH_POINT {
        return Ok(-1.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }

    let mut w = initial_guess(x);
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        // stay on the principal branch
        let next = (w - step).max(-1.0);
        let delta = (next - w).abs();
        w = next;
        if delta <= 1e-14 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

fn initial_guess(x: f64) -> f64 {
    if x < -0.25 {
        // series around the branch point
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        x.ln_1p()
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}

/// `C(x) = log2(1 + x) / 2` without domain checks; callers guarantee `x >= 0`.
#[inline]
pub(crate) fn cap(snr: f64) -> f64 {
    0.5 * snr.ln_1p() / std::f64::consts::LN_2
}

/// Gaussian channel capacity `log2(1 + snr) / 2`.
pub fn capacity(snr: f64) -> Result<Rate> {
    if snr.is_nan() || snr < 0.0 {
        return Err(Error::Domain {
            function: "capacity",
            value: snr,
            expected: "snr >= 0",
        });
    }
    Ok(Rate::from_bits(cap(snr)))
}

/// Signaling power left when a budget `power` is concentrated into a `theta`
/// fraction of the time and each on-slot costs `eps`.
///
/// A user that is never on has no signaling power.
#[inline]
pub(crate) fn signal_power(theta: f64, power: f64, eps: f64) -> f64 {
    if theta <= 0.0 {
        0.0
    } else {
        (power / theta - eps).max(0.0)
    }
}

/// `theta * C(power/theta - eps)`, the rate of a user bursting for a
/// `theta` fraction of the time. Zero at `theta = 0` by continuity.
pub fn burst_rate(theta: f64, power: f64, eps: f64) -> Result<Rate> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Domain {
            function: "burst_rate",
            value: theta,
            expected: "theta in [0, 1]",
        });
    }
    if theta == 0.0 {
        return Ok(Rate::ZERO);
    }
    let snr = power / theta - eps;
    if snr.is_nan() || snr < 0.0 {
        return Err(Error::InfeasibleBurst { theta, power, eps });
    }
    Ok(Rate::from_bits(theta * cap(snr)))
}

/// `weight * value`, treating a non-positive weight as an absent time fraction.
#[inline]
pub(crate) fn weighted(weight: f64, value: f64) -> f64 {
    if weight <= 0.0 {
        0.0
    } else {
        weight * value
    }
}

/// Resolution schedule for [`maximize_on_grid`], independent of the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSettings {
    pub resolution: f64,
    pub refinements: usize,
    pub shrink: f64,
}

impl GridSettings {
    pub const fn new(resolution: f64, refinements: usize, shrink: f64) -> Self {
        GridSettings {
            resolution,
            refinements,
            shrink,
        }
    }

    /// Spacing of the last refinement round.
    pub fn final_resolution(&self) -> f64 {
        self.resolution * self.shrink.powi(self.refinements as i32)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resolution.is_finite() && self.resolution > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "resolution must be positive, got {}",
                self.resolution
            )));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidGrid(format!(
                "shrink factor must lie in (0, 1), got {}",
                self.shrink
            )));
        }
        Ok(())
    }
}

impl Default for GridSettings {
    fn default() -> Self {
        GridSettings::new(0.01, 2, 0.1)
    }
}

/// Grid schedules used by the scheme optimizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// On-fraction searches in one or two dimensions.
    pub fraction: GridSettings,
    /// Han-Kobayashi power-split searches.
    pub split: GridSettings,
    /// Three-user transmission profiles.
    pub profile3: GridSettings,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            fraction: GridSettings::default(),
            split: GridSettings::default(),
            profile3: GridSettings::new(0.02, 2, 0.1),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        self.fraction.validate()?;
        self.split.validate()?;
        self.profile3.validate()
    }
}

/// A box plus the resolution schedule used to search it.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    bounds: Vec<(f64, f64)>,
    settings: GridSettings,
}

impl GridSpec {
    pub fn new(bounds: Vec<(f64, f64)>, settings: GridSettings) -> Result<Self> {
        settings.validate()?;
        if bounds.is_empty() {
            return Err(Error::InvalidGrid("no dimensions".into()));
        }
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(Error::InvalidGrid(format!(
                    "dimension {i}: bounds [{lo}, {hi}] are not an interval"
                )));
            }
        }
        Ok(GridSpec { bounds, settings })
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn settings(&self) -> GridSettings {
        self.settings
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Points `lo, lo + step, ...` up to `hi`, always including `hi`.
///
/// A dimension narrower than `step` collapses to its lower bound.
fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let width = hi - lo;
    if width < step {
        return vec![lo];
    }
    let n = (width / step + 1e-9).floor() as usize;
    let mut pts: Vec<f64> = (0..=n).map(|k| (lo + k as f64 * step).min(hi)).collect();
    if let Some(&last) = pts.last() {
        if hi - last > step * 1e-6 {
            pts.push(hi);
        }
    }
    pts
}

/// Scans the product of `axes` in lexicographic order (first axis slowest),
/// replacing `best` only on strict improvement.
fn scan<F>(axes: &[Vec<f64>], objective: &mut F, best: &mut Option<(Vec<f64>, f64)>) -> usize
where
    F: FnMut(&[f64]) -> f64,
{
    if axes.iter().any(|a| a.is_empty()) {
        return 0;
    }
    let dims = axes.len();
    let mut idx = vec![0usize; dims];
    let mut point: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    let mut count = 0;
    loop {
        let v = objective(&point);
        count += 1;
        if !v.is_nan() && v > f64::NEG_INFINITY {
            let better = match best {
                Some((_, b)) => v > *b,
                None => true,
            };
            if better {
                *best = Some((point.clone(), v));
            }
        }
        // odometer increment, last axis fastest
        let mut d = dims;
        loop {
            if d == 0 {
                return count;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                point[d] = axes[d][idx[d]];
                break;
            }
            idx[d] = 0;
            point[d] = axes[d][0];
        }
    }
}

/// Maximizes `objective` over the box in `spec`.
///
/// A coarse lattice scan is followed by `refinements` rounds, each scanning a
/// box of half-width equal to the previous spacing around the incumbent with
/// the spacing multiplied by the shrink factor. Infeasible points should
/// return `-inf` (NaN is treated the same way). Ties keep the first point
/// in scan order.
pub fn maximize_on_grid<F>(mut objective: F, spec: &GridSpec) -> Result<GridOptimum>
where
    F: FnMut(&[f64]) -> f64,
{
    let settings = spec.settings;
    let mut step = settings.resolution;
    let axes: Vec<Vec<f64>> = spec
        .bounds
        .iter()
        .map(|&(lo, hi)| axis(lo, hi, step))
        .collect();
    let mut best = None;
    let mut evaluations = scan(&axes, &mut objective, &mut best);
    if best.is_none() {
        return Err(Error::NoFeasiblePoint);
    }

    for _ in 0..settings.refinements {
        let center = best.as_ref().map(|(p, _)| p.clone()).unwrap_or_default();
        let fine = step * settings.shrink;
        let axes: Vec<Vec<f64>> = spec
            .bounds
            .iter()
            .zip(&center)
            .map(|(&(lo, hi), &c)| axis((c - step).max(lo), (c + step).min(hi), fine))
            .collect();
        evaluations += scan(&axes, &mut objective, &mut best);
        step = fine;
    }

    let (point, value) = best.ok_or(Error::NoFeasiblePoint)?;
    Ok(GridOptimum {
        point,
        value,
        evaluations,
    })
}
