//! Parameter sweeps, figure presets and CSV output.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::cgzic::{
    normalized_cgzic_sum_rate_with, run_cgzic_scheme, upper_bound_cgzic, CgzicChannel,
};
use crate::error::{Error, Result};
use crate::hk_two_user::TwoUserChannel;
use crate::numerics::SearchConfig;
use crate::schemes_two_user::{
    normalized_sum_rate_with, run_scheme, upper_bound_two_user, SchemeResult, SchemeTag,
};
use crate::very_strong::{asymptotic_thresholds, very_strong_thresholds, AsymptoticBudget};

/// Sentinel written for cells a scheme does not define.
pub const MISSING: &str = "NA";

/// Slack on `rate <= upper bound` for emitted rows.
pub const SANDWICH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    TwoUser,
    Cascade,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "two-user" | "twouser" | "ic" => Ok(Model::TwoUser),
            "cgzic" | "cascade" => Ok(Model::Cascade),
            other => Err(Error::InvalidParameter(format!("unknown model {other:?}"))),
        }
    }
}

/// Channel field a sweep can vary. `Eps` and `P` move all users together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    A,
    B,
    A1,
    A2,
    P,
    P1,
    P2,
    P3,
    Eps,
    Eps1,
    Eps2,
    Eps3,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::A => "a",
            SweepParam::B => "b",
            SweepParam::A1 => "a1",
            SweepParam::A2 => "a2",
            SweepParam::P => "p",
            SweepParam::P1 => "p1",
            SweepParam::P2 => "p2",
            SweepParam::P3 => "p3",
            SweepParam::Eps => "eps",
            SweepParam::Eps1 => "eps1",
            SweepParam::Eps2 => "eps2",
            SweepParam::Eps3 => "eps3",
        }
    }

    fn applies_to(self, model: Model) -> bool {
        match self {
            SweepParam::A | SweepParam::B => model == Model::TwoUser,
            SweepParam::A1 | SweepParam::A2 | SweepParam::P3 | SweepParam::Eps3 => {
                model == Model::Cascade
            }
            _ => true,
        }
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let p = match s.trim().to_ascii_lowercase().as_str() {
            "a" => SweepParam::A,
            "b" => SweepParam::B,
            "a1" => SweepParam::A1,
            "a2" => SweepParam::A2,
            "p" => SweepParam::P,
            "p1" => SweepParam::P1,
            "p2" => SweepParam::P2,
            "p3" => SweepParam::P3,
            "eps" | "epsilon" => SweepParam::Eps,
            "eps1" => SweepParam::Eps1,
            "eps2" => SweepParam::Eps2,
            "eps3" => SweepParam::Eps3,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown sweep parameter {other:?}"
                )))
            }
        };
        Ok(p)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive range `start, start + step, ..., stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidParameter("sweep range must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::InvalidParameter(format!("sweep step must be positive, got {step}")));
        }
        if start > stop {
            return Err(Error::InvalidParameter(format!(
                "sweep start {start} exceeds stop {stop}"
            )));
        }
        Ok(SweepRange { start, stop, step })
    }

    /// Sweep values, computed as `start + k * step` so they do not drift.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for SweepRange {
    type Err = Error;

    /// Parses `start:stop:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParameter(format!(
                "range must be start:stop:step, got {s:?}"
            )));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad number {t:?} in range")))
        };
        SweepRange::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

/// Values of every channel field; each model reads the ones it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub a: f64,
    pub b: f64,
    pub a1: f64,
    pub a2: f64,
    pub p: [f64; 3],
    pub eps: [f64; 3],
}

impl Default for ChannelParams {
    fn default() -> Self {
        ChannelParams {
            a: 3.0,
            b: 3.0,
            a1: 2.0,
            a2: 0.5,
            p: [3.5, 3.5, 3.0],
            eps: [2.0; 3],
        }
    }
}

impl ChannelParams {
    pub fn with(mut self, param: SweepParam, value: f64) -> Self {
        match param {
            SweepParam::A => self.a = value,
            SweepParam::B => self.b = value,
            SweepParam::A1 => self.a1 = value,
            SweepParam::A2 => self.a2 = value,
            SweepParam::P => self.p = [value; 3],
            SweepParam::P1 => self.p[0] = value,
            SweepParam::P2 => self.p[1] = value,
            SweepParam::P3 => self.p[2] = value,
            SweepParam::Eps => self.eps = [value; 3],
            SweepParam::Eps1 => self.eps[0] = value,
            SweepParam::Eps2 => self.eps[1] = value,
            SweepParam::Eps3 => self.eps[2] = value,
        }
        self
    }

    pub fn two_user(&self) -> Result<TwoUserChannel> {
        TwoUserChannel::new(self.a, self.b, self.p[0], self.p[1], self.eps[0], self.eps[1])
    }

    pub fn cascade(&self) -> Result<CgzicChannel> {
        CgzicChannel::new(self.a1, self.a2, self.p, self.eps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub model: Model,
    pub param: SweepParam,
    pub range: SweepRange,
    pub base: ChannelParams,
    /// Rate columns, emitted in I..IV order whatever the order given here.
    pub schemes: Vec<SchemeTag>,
    pub upper_bound: bool,
    /// Scheme whose maximizing profile (and split) is emitted.
    pub argmax: Option<SchemeTag>,
    pub search: SearchConfig,
}

impl SweepSpec {
    pub fn new(model: Model, param: SweepParam, range: SweepRange, base: ChannelParams) -> Self {
        SweepSpec {
            model,
            param,
            range,
            base,
            schemes: SchemeTag::ALL.to_vec(),
            upper_bound: true,
            argmax: None,
            search: SearchConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.param.applies_to(self.model) {
            return Err(Error::InvalidParameter(format!(
                "parameter {} is not a field of the {:?} model",
                self.param, self.model
            )));
        }
        self.search.validate()?;
        for v in self.range.values() {
            let ch = self.base.with(self.param, v);
            match self.model {
                Model::TwoUser => ch.two_user().map(|_| ())?,
                Model::Cascade => ch.cascade().map(|_| ())?,
            }
        }
        Ok(())
    }

    fn ordered_schemes(&self) -> Vec<SchemeTag> {
        let mut s = self.schemes.clone();
        s.sort();
        s.dedup();
        s
    }

    fn argmax_names(&self) -> &'static [&'static str] {
        match (self.argmax, self.model) {
            (None, _) => &[],
            (Some(_), Model::TwoUser) => &["theta1", "theta2", "tau1", "tau2"],
            (Some(_), Model::Cascade) => &["theta1", "theta2", "theta3"],
        }
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec![self.param.name().to_string()];
        h.extend(self.ordered_schemes().iter().map(|s| format!("R_{}", s.numeral())));
        if self.upper_bound {
            h.push("R_ub".into());
        }
        h.extend(self.argmax_names().iter().map(|s| s.to_string()));
        h
    }
}

/// One sweep point: the swept value followed by the data cells, `None` for "NA".
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub cells: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Values of the named column, `None` where the cell is missing.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| if idx == 0 { Some(r.value) } else { r.cells[idx - 1] })
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Output(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            let mut rec = vec![format_g6(row.value)];
            rec.extend(row.cells.iter().map(|c| match c {
                Some(v) => format_g6(*v),
                None => MISSING.to_string(),
            }));
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Output(e.to_string()))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Output(e.to_string()))
    }
}

/// Six significant digits, trailing zeros dropped, exponent form outside `[1e-4, 1e6)`.
pub fn format_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn evaluate(spec: &SweepSpec, params: &ChannelParams, tag: SchemeTag) -> Result<Option<SchemeResult>> {
    let r = match spec.model {
        Model::TwoUser => run_scheme(&params.two_user()?, tag, &spec.search),
        Model::Cascade => run_cgzic_scheme(&params.cascade()?, tag, &spec.search),
    };
    match r {
        Ok(res) => Ok(Some(res)),
        Err(Error::Regime { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn argmax_cells(spec: &SweepSpec, res: Option<&SchemeResult>) -> Vec<Option<f64>> {
    let width = spec.argmax_names().len();
    let Some(res) = res else {
        return vec![None; width];
    };
    let mut cells: Vec<Option<f64>> = match res.profile {
        Some(p) => p.thetas().into_iter().map(Some).collect(),
        None => vec![Some(1.0); if spec.model == Model::Cascade { 3 } else { 2 }],
    };
    if spec.model == Model::TwoUser {
        match res.split {
            Some(s) => cells.extend([Some(s.tau1), Some(s.tau2)]),
            None => cells.extend([None, None]),
        }
    }
    cells
}

/// Evaluates one row per sweep value, in sweep order.
///
/// Regime errors become missing cells. A rate above the upper bound aborts
/// the sweep with [`Error::Invariant`].
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    run_sweep_each(spec, |_| Ok(()))
}

/// Like [`run_sweep`], handing each row to `emit` as soon as it is computed.
pub fn run_sweep_each<F>(spec: &SweepSpec, mut emit: F) -> Result<SweepTable>
where
    F: FnMut(&SweepRow) -> Result<()>,
{
    spec.validate()?;
    let schemes = spec.ordered_schemes();
    let mut rows = Vec::new();
    for value in spec.range.values() {
        let params = spec.base.with(spec.param, value);
        let ub = match spec.model {
            Model::TwoUser => upper_bound_two_user(&params.two_user()?).bits(),
            Model::Cascade => upper_bound_cgzic(&params.cascade()?).bits(),
        };
        let mut cells = Vec::new();
        let mut argmax_result = None;
        for &tag in &schemes {
            let res = evaluate(spec, &params, tag)?;
            let rate = res.as_ref().map(|r| r.sum_rate.bits());
            if let Some(r) = rate {
                if r > ub + SANDWICH_TOLERANCE {
                    return Err(Error::Invariant(format!(
                        "{tag} rate {r} exceeds upper bound {ub} at {}={value}",
                        spec.param
                    )));
                }
            }
            cells.push(rate);
            if spec.argmax == Some(tag) {
                argmax_result = Some(res);
            }
        }
        if spec.upper_bound {
            cells.push(Some(ub));
        }
        if let Some(tag) = spec.argmax {
            let res = match argmax_result {
                Some(r) => r,
                None => evaluate(spec, &params, tag)?,
            };
            cells.extend(argmax_cells(spec, res.as_ref()));
        }
        let row = SweepRow { value, cells };
        emit(&row)?;
        rows.push(row);
    }
    Ok(SweepTable {
        header: spec.header(),
        rows,
    })
}

/// Normalized Scheme IV rate `R_IV / R_ub` against `param`, one column per cost in `costs`.
pub fn ratio_sweep(
    model: Model,
    param: SweepParam,
    range: SweepRange,
    base: ChannelParams,
    costs: &[f64],
    search: &SearchConfig,
) -> Result<SweepTable> {
    let mut header = vec![param.name().to_string()];
    header.extend(costs.iter().map(|e| format!("ratio_eps{}", format_g6(*e))));
    let mut rows = Vec::new();
    for value in range.values() {
        let mut cells = Vec::new();
        for &e in costs {
            let params = base.with(SweepParam::Eps, e).with(param, value);
            let r = match model {
                Model::TwoUser => normalized_sum_rate_with(&params.two_user()?, search),
                Model::Cascade => normalized_cgzic_sum_rate_with(&params.cascade()?, search),
            };
            cells.push(match r {
                Ok(v) => Some(v),
                Err(Error::Regime { .. }) => None,
                Err(e) => return Err(e),
            });
        }
        rows.push(SweepRow { value, cells });
    }
    Ok(SweepTable { header, rows })
}

/// Figure presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Two-user rates against `a`, `b = 3`, `P = 3.5`, `eps = 2`.
    Fig4,
    /// Two-user rates against `eps`, `a = b = 3`, `P = 3.5`.
    Fig5,
    /// One-sided channel, `b = 0`, rates against `0 < a < 1`.
    Fig6,
    /// Two-user normalized Scheme IV rate against `a` at `eps = 2` and `eps = 0`.
    Fig7,
    /// Cascade rates against `a1`, `a2 = 0.5`, `P = (4, 3.5, 3)`, `eps = 2`.
    Fig8,
    /// Scheme IV on-fractions for the Fig8 channel.
    Fig9,
    /// Cascade normalized Scheme IV rate at `eps = 2` and `eps = 0`.
    Fig10,
}

impl Figure {
    pub const ALL: [Figure; 7] = [
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::Fig8,
        Figure::Fig9,
        Figure::Fig10,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
            Figure::Fig9 => "fig9",
            Figure::Fig10 => "fig10",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        Figure::ALL
            .into_iter()
            .find(|f| f.tag() == t || f.tag().trim_start_matches("fig") == t)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown figure tag {s:?}")))
    }
}

fn two_user_base(a: f64, b: f64, eps: f64) -> ChannelParams {
    ChannelParams {
        a,
        b,
        p: [3.5, 3.5, 3.5],
        eps: [eps; 3],
        ..ChannelParams::default()
    }
}

fn cascade_base(a1: f64) -> ChannelParams {
    ChannelParams {
        a1,
        a2: 0.5,
        p: [4.0, 3.5, 3.0],
        eps: [2.0; 3],
        ..ChannelParams::default()
    }
}

/// Sweep specification behind a figure. `None` for the ratio figures.
pub fn figure_spec(fig: Figure) -> Option<SweepSpec> {
    let r = |a, b, c| SweepRange::new(a, b, c).expect("preset ranges are valid");
    let spec = match fig {
        Figure::Fig4 => SweepSpec::new(Model::TwoUser, SweepParam::A, r(1.0, 6.0, 0.05), two_user_base(1.0, 3.0, 2.0)),
        Figure::Fig5 => SweepSpec::new(Model::TwoUser, SweepParam::Eps, r(0.0, 3.5, 0.05), two_user_base(3.0, 3.0, 0.0)),
        Figure::Fig6 => SweepSpec {
            schemes: vec![SchemeTag::I, SchemeTag::II, SchemeTag::III],
            ..SweepSpec::new(Model::TwoUser, SweepParam::A, r(0.01, 0.99, 0.01), two_user_base(0.01, 0.0, 2.0))
        },
        Figure::Fig8 => SweepSpec::new(Model::Cascade, SweepParam::A1, r(1.0, 6.0, 0.05), cascade_base(1.0)),
        Figure::Fig9 => SweepSpec {
            schemes: Vec::new(),
            upper_bound: false,
            argmax: Some(SchemeTag::IV),
            ..SweepSpec::new(Model::Cascade, SweepParam::A1, r(1.0, 6.0, 0.05), cascade_base(1.0))
        },
        Figure::Fig7 | Figure::Fig10 => return None,
    };
    Some(spec)
}

/// Computes the dataset behind a figure.
pub fn reproduce_figure(fig: Figure, search: &SearchConfig) -> Result<SweepTable> {
    match fig {
        Figure::Fig7 => ratio_sweep(
            Model::TwoUser,
            SweepParam::A,
            SweepRange::new(1.0, 6.0, 0.05)?,
            two_user_base(1.0, 3.0, 2.0),
            &[2.0, 0.0],
            search,
        ),
        Figure::Fig10 => ratio_sweep(
            Model::Cascade,
            SweepParam::A1,
            SweepRange::new(1.0, 6.0, 0.05)?,
            cascade_base(1.0),
            &[2.0, 0.0],
            search,
        ),
        _ => {
            let spec = SweepSpec {
                search: *search,
                ..figure_spec(fig).expect("rate figures have a sweep spec")
            };
            run_sweep(&spec)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    Exact,
    Asymptotic,
}

impl FromStr for ThresholdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(ThresholdMode::Exact),
            "asymptotic" | "asym" => Ok(ThresholdMode::Asymptotic),
            other => Err(Error::InvalidParameter(format!("unknown threshold mode {other:?}"))),
        }
    }
}

/// Very-strong interference thresholds next to the cost-free `1 + P` values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    pub a_min: f64,
    pub b_min: f64,
    pub classical: (f64, f64),
}

pub fn query_thresholds(ch: &TwoUserChannel, mode: ThresholdMode) -> Result<ThresholdReport> {
    let (a_min, b_min) = match mode {
        ThresholdMode::Exact => very_strong_thresholds(ch),
        ThresholdMode::Asymptotic => {
            let budget = AsymptoticBudget::from_powers(ch.p1(), ch.p2(), ch.eps1(), ch.eps2())?;
            asymptotic_thresholds(&budget)?
        }
    };
    Ok(ThresholdReport {
        a_min,
        b_min,
        classical: (1.0 + ch.p1(), 1.0 + ch.p2()),
    })
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("config line {}: expected key=value, got {raw:?}", n + 1))
        })?;
        let key = k.trim().trim_start_matches("--").to_ascii_lowercase();
        if key.is_empty() {
            return Err(Error::InvalidParameter(format!("config line {}: empty key", n + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

/// Parses a comma-separated scheme list such as `I,II,IV` or `all`.
pub fn parse_schemes(s: &str) -> Result<Vec<SchemeTag>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(SchemeTag::ALL.to_vec());
    }
    let tags = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(SchemeTag::from_str)
        .collect::<Result<Vec<_>>>()?;
    if tags.is_empty() {
        return Err(Error::InvalidParameter("empty scheme list".into()));
    }
    Ok(tags)
}
