//! List decoding and list recovery pipelines, plus closed-form radius bounds.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::frs::{FrsParams, RecoverySets, Variant, Word};
use crate::galois::{FieldElem, PrimeField};
use crate::interp::{check_y_degree, choose_degree, interpolate, InterpolationProblem};
use crate::poly::UniPoly;
use crate::rootfind::{candidates_from_q, strip_e_power, RootStrategy};

/// Which weighted-degree bound drives interpolation and the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeMode {
    /// Smallest `D` with more monomials than conditions.
    Refined,
    /// `floor((k^s n0 r(r+1)...(r+s))^{1/(s+1)}) + 1`.
    Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodeOptions {
    pub seed: u64,
    pub strategy: RootStrategy,
    pub degree: DegreeMode,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        Self { seed: 0, strategy: RootStrategy::Auto, degree: DegreeMode::Refined }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeStats {
    /// Interpolation points after deduplication.
    pub points: usize,
    pub d_formula: u64,
    /// Degree bound actually used.
    pub d: u64,
    pub equations: usize,
    pub unknowns: usize,
    /// Power of `E` removed from `Q`.
    pub e_power: u32,
    pub strategy: RootStrategy,
    /// Roots reported before the degree and identity checks.
    pub raw_candidates: usize,
    /// Candidates satisfying `Q0(X, f(X), ...) = 0`.
    pub candidates: usize,
    /// Closed-form sufficient agreement, for comparison with `t`.
    pub closed_form_threshold: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    /// Messages whose encoding agrees on at least `t` positions.
    pub messages: Vec<UniPoly<PrimeField>>,
    pub t: usize,
    pub stats: DecodeStats,
}

/// Smallest integer strictly above `D / ((m - s + 1) r)`.
pub fn agreement_threshold(d: u64, m: usize, s: usize, r: usize) -> usize {
    assert!(1 <= s && s <= m, "need 1 <= s <= m");
    (d / ((m - s + 1) * r) as u64) as usize + 1
}

/// Folded agreement guaranteeing success for the shifted variant.
///
/// Each folded error spoils at most `m + 1` of the `n0` windows, and the
/// surviving windows must exceed `D / r`.
pub fn shifted_agreement_threshold(d: u64, r: usize, n0: usize, m: usize, big_n: usize) -> usize {
    let windows = (d / r as u64) as usize + 1;
    if n0 < windows {
        return big_n + 1;
    }
    big_n - ((n0 - windows) / (m + 1)).min(big_n)
}

/// `(N (k/(m-s+1))^s l prod_j (1 + j/r))^{1/(s+1)} + 2`.
pub fn closed_form_threshold(params: &FrsParams, l: usize) -> f64 {
    let (m, s, r) = (params.m as f64, params.s as f64, params.r as f64);
    let prod: f64 = (1..=params.s).map(|j| 1.0 + j as f64 / r).product();
    let inner = params.big_n as f64 * l as f64 * (params.k as f64 / (m - s + 1.0)).powf(s) * prod;
    inner.powf(1.0 / (s + 1.0)) + 2.0
}

/// Degree bound and agreement threshold `list_decode` uses for `params`.
pub fn decoding_threshold(params: &FrsParams, degree: DegreeMode) -> (u64, usize) {
    let n0 = params.interpolation_indices().len();
    let choice = choose_degree(params.k, n0, params.r, params.s);
    let d = match degree {
        DegreeMode::Refined => choice.refined,
        DegreeMode::Formula => choice.formula,
    };
    let t = match params.variant {
        Variant::Standard => agreement_threshold(d, params.m, params.s, params.r),
        Variant::Shifted => shifted_agreement_threshold(d, params.r, n0, params.m, params.big_n),
    };
    (d, t)
}

pub fn list_decode(params: &FrsParams, received: &Word) -> Result<DecodeResult> {
    list_decode_with(params, received, &DecodeOptions::default())
}

pub fn list_decode_with(params: &FrsParams, received: &Word, opts: &DecodeOptions) -> Result<DecodeResult> {
    let y = params.unfold(received)?;
    let points = params.interpolation_points(&y)?;
    let n0 = points.len();
    let threshold = |d: u64| match params.variant {
        Variant::Standard => agreement_threshold(d, params.m, params.s, params.r),
        Variant::Shifted => shifted_agreement_threshold(d, params.r, n0, params.m, params.big_n),
    };
    let agreement = |c: &Word| params.agreement(c, received);
    run(params, points, opts, threshold, agreement, closed_form_threshold(params, 1))
}

pub fn list_recover(params: &FrsParams, sets: &RecoverySets) -> Result<DecodeResult> {
    list_recover_with(params, sets, &DecodeOptions::default())
}

pub fn list_recover_with(params: &FrsParams, sets: &RecoverySets, opts: &DecodeOptions) -> Result<DecodeResult> {
    if params.variant != Variant::Standard {
        return Err(Error::UnsupportedVariant("list recovery uses the standard interpolation set".into()));
    }
    if sets.sets.len() != params.big_n {
        return Err(Error::ShapeMismatch(format!("expected {} sets, got {}", params.big_n, sets.sets.len())));
    }
    let xs = params.evaluation_points();
    let mut points = BTreeSet::new();
    for (j, set) in sets.sets.iter().enumerate() {
        for tuple in set {
            for w in 0..=params.m - params.s {
                let mut p = Vec::with_capacity(params.s + 1);
                p.push(xs[j * params.m + w]);
                p.extend_from_slice(&tuple[w..w + params.s]);
                points.insert(p);
            }
        }
    }
    let threshold = |d: u64| agreement_threshold(d, params.m, params.s, params.r);
    let agreement = |c: &Word| membership_count(c, sets);
    let closed = closed_form_threshold(params, sets.l.max(1));
    run(params, points.into_iter().collect(), opts, threshold, agreement, closed)
}

/// Positions `j` where symbol `j` of `c` lies in `S_j`.
pub fn membership_count(c: &Word, sets: &RecoverySets) -> usize {
    c.symbols.iter().zip(&sets.sets).filter(|(sym, set)| set.contains(sym)).count()
}

fn run(
    params: &FrsParams,
    points: Vec<Vec<FieldElem>>,
    opts: &DecodeOptions,
    threshold: impl Fn(u64) -> usize,
    agreement: impl Fn(&Word) -> usize,
    closed_form_threshold: f64,
) -> Result<DecodeResult> {
    let mut stats = DecodeStats {
        points: points.len(),
        d_formula: 0,
        d: 0,
        equations: 0,
        unknowns: 0,
        e_power: 0,
        strategy: opts.strategy,
        raw_candidates: 0,
        candidates: 0,
        closed_form_threshold,
    };
    if points.is_empty() {
        // Q = 1 satisfies every (absent) condition and has no roots
        return Ok(DecodeResult { messages: Vec::new(), t: threshold(0), stats });
    }
    let choice = choose_degree(params.k, points.len(), params.r, params.s);
    let d = match opts.degree {
        DegreeMode::Refined => choice.refined,
        DegreeMode::Formula => choice.formula,
    };
    check_y_degree(d, params.k, params.q())?;
    stats.d_formula = choice.formula;
    stats.d = d;

    let problem = InterpolationProblem { field: *params.field(), points, r: params.r, k: params.k, s: params.s, d };
    let interpolant = interpolate(&problem)?;
    stats.equations = interpolant.equations;
    stats.unknowns = interpolant.unknowns;

    let (q0, b) = strip_e_power(&interpolant.q, &params.ext_field().modulus())?;
    stats.e_power = b;
    let list = candidates_from_q(&q0, params, opts.strategy, opts.seed)?;
    stats.strategy = list.strategy;
    stats.raw_candidates = list.raw_count;
    stats.candidates = list.candidates.len();

    let t = threshold(d);
    let mut messages = Vec::new();
    for f in list.candidates {
        if agreement(&params.encode(&f)?) >= t {
            messages.push(f);
        }
    }
    Ok(DecodeResult { messages, t, stats })
}

/// Closed-form decoding radii at one rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundsRow {
    pub rate: f64,
    pub m: usize,
    pub s: usize,
    pub rho_gs: f64,
    pub rho_a: f64,
    pub rho_b: f64,
    pub rho_max: f64,
    pub rho_svar: f64,
    /// `1 - R^{2/3}`, the large-`m` limit of the trivariate bounds.
    pub limit_23: f64,
    pub capacity: f64,
    /// Some value was negative (or undefined) and clamped to 0.
    pub vacuous: bool,
}

pub fn decoding_bounds(rate: f64, m: usize, s: usize, r: usize) -> BoundsRow {
    assert!(rate > 0.0 && rate < 1.0, "rate must lie in (0, 1)");
    let mut vacuous = false;
    let mut clamp = |v: f64| {
        if v.is_finite() && v >= 0.0 {
            v
        } else {
            vacuous = true;
            0.0
        }
    };
    let (mf, sf, rf) = (m as f64, s as f64, r as f64);
    let rho_gs = clamp(1.0 - rate.sqrt());
    let rho_a = if m >= 2 { clamp(1.0 - (mf * rate / (mf - 1.0)).powf(2.0 / 3.0)) } else { clamp(f64::NAN) };
    let rho_b = clamp(mf / (mf + 1.0) * (1.0 - rate.powf(2.0 / 3.0)));
    let rho_svar = if s >= 1 && s <= m {
        let prod: f64 = (1..=s).map(|j| 1.0 + j as f64 / rf).product();
        clamp(1.0 - ((mf * rate / (mf - sf + 1.0)).powf(sf) * prod).powf(1.0 / (sf + 1.0)))
    } else {
        clamp(f64::NAN)
    };
    BoundsRow {
        rate,
        m,
        s,
        rho_gs,
        rho_a,
        rho_b,
        rho_max: rho_a.max(rho_b),
        rho_svar,
        limit_23: 1.0 - rate.powf(2.0 / 3.0),
        capacity: 1.0 - rate,
        vacuous,
    }
}

/// Parameters reaching radius `1 - R - eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuggestedParams {
    pub s: usize,
    pub delta: f64,
    pub m: usize,
    pub r: usize,
    /// `1 - (1 + delta) R^{s/(s+1)}`.
    pub radius: f64,
}

fn ceil_tolerant(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

pub fn suggest_params(rate: f64, eps: f64) -> SuggestedParams {
    assert!(rate > 0.0 && rate < 1.0 && eps > 0.0, "need 0 < R < 1 and eps > 0");
    let s = ceil_tolerant((1.0 / rate).ln() / (1.0 + eps).ln()).max(1);
    let delta = eps * (1.0 - rate) / (rate * (1.0 + eps));
    let r = ceil_tolerant(3.0 * s as f64 / delta).max(1);
    let m = ceil_tolerant((s as f64 - 1.0) * (3.0 + delta) / delta).max(s);
    let radius = 1.0 - (1.0 + delta) * rate.powf(s as f64 / (s as f64 + 1.0));
    SuggestedParams { s, delta, m, r, radius }
}

/// Strict upper bound on errors for the shifted variant:
/// `floor(m/(m+1) N (1 - ((k/n)^2 (1+1/r)(1+2/r))^{1/3})) - 1`.
pub fn shifted_error_limit(params: &FrsParams) -> i64 {
    let (m, r) = (params.m as f64, params.r as f64);
    let ratio = params.k as f64 / params.n as f64;
    let inner = (ratio * ratio * (1.0 + 1.0 / r) * (1.0 + 2.0 / r)).cbrt();
    (m / (m + 1.0) * params.big_n as f64 * (1.0 - inner)).floor() as i64 - 1
}
