//! Channel simulation, a brute-force reference decoder and CSV emitters.

mod cli;

use std::io::Write;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use cli::run_cli;

use crate::decoder::{decoding_bounds, list_decode_with, membership_count, DecodeOptions};
use crate::error::{Error, Result};
use crate::frs::{FrsParams, RecoverySets, Word};
use crate::galois::{Field, FieldElem, PrimeField};
use crate::poly::UniPoly;
use crate::rootfind::{all_messages, EXHAUSTIVE_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    /// `e` distinct positions chosen uniformly.
    Uniform,
    /// `e` cyclically contiguous positions from a uniform start.
    Burst,
    /// Exactly the listed positions.
    Fixed(Vec<usize>),
}

impl ChannelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelKind::Uniform => "uniform",
            ChannelKind::Burst => "burst",
            ChannelKind::Fixed(_) => "fixed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    /// Number of corrupted folded symbols.
    pub e: usize,
}

fn different_tuple<R: Rng + ?Sized>(field: &PrimeField, old: &[FieldElem], rng: &mut R) -> Vec<FieldElem> {
    loop {
        let t: Vec<FieldElem> = old.iter().map(|_| field.random_element(rng)).collect();
        if t != old {
            return t;
        }
    }
}

/// Replaces exactly `spec.e` folded symbols with different tuples.
pub fn apply_channel<R: Rng + ?Sized>(params: &FrsParams, cw: &Word, spec: &ChannelSpec, rng: &mut R) -> Result<Word> {
    params.check_shape(cw)?;
    let big_n = params.big_n;
    if spec.e > big_n {
        return Err(Error::InvalidParams(format!("cannot corrupt {} of {big_n} symbols", spec.e)));
    }
    let positions: Vec<usize> = match &spec.kind {
        ChannelKind::Uniform => sample(rng, big_n, spec.e).into_vec(),
        ChannelKind::Burst => {
            let start = rng.gen_range(0..big_n);
            (0..spec.e).map(|i| (start + i) % big_n).collect()
        }
        ChannelKind::Fixed(list) => {
            let mut sorted = list.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != list.len() || list.len() != spec.e {
                return Err(Error::InvalidParams("fixed positions must be e distinct indices".into()));
            }
            if let Some(&bad) = sorted.iter().find(|&&j| j >= big_n) {
                return Err(Error::InvalidParams(format!("position {bad} out of range 0..{big_n}")));
            }
            list.clone()
        }
    };
    let mut out = cw.clone();
    for j in positions {
        out.symbols[j] = different_tuple(params.field(), &cw.symbols[j], rng);
    }
    Ok(out)
}

fn check_enumerable(params: &FrsParams) -> Result<()> {
    let total = (params.q() as u128).checked_pow(params.k as u32 + 1);
    if total.is_none_or(|t| t > EXHAUSTIVE_LIMIT) {
        return Err(Error::InstanceTooLarge(format!(
            "q^(k+1) = {}^{} exceeds {EXHAUSTIVE_LIMIT}",
            params.q(),
            params.k + 1
        )));
    }
    Ok(())
}

/// Every message whose encoding agrees with `received` on at least `t` positions.
pub fn oracle_decode(params: &FrsParams, received: &Word, t: usize) -> Result<Vec<UniPoly<PrimeField>>> {
    check_enumerable(params)?;
    params.check_shape(received)?;
    let mut out = Vec::new();
    for f in all_messages(params.field(), params.k) {
        if params.agreement(&params.encode(&f)?, received) >= t {
            out.push(f);
        }
    }
    Ok(out)
}

/// Every message whose symbol lies in `S_j` for at least `t` positions `j`.
pub fn oracle_recover(params: &FrsParams, sets: &RecoverySets, t: usize) -> Result<Vec<UniPoly<PrimeField>>> {
    check_enumerable(params)?;
    let mut out = Vec::new();
    for f in all_messages(params.field(), params.k) {
        if membership_count(&params.encode(&f)?, sets) >= t {
            out.push(f);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub q: u64,
    pub m: usize,
    pub k: usize,
    pub s: usize,
    pub r: usize,
    pub variant: String,
    pub channel: String,
    pub e: usize,
    pub trial: u64,
    pub success: bool,
    pub list_size: usize,
    pub ms: f64,
}

pub const TRIAL_HEADER: &str = "q,m,k,s,r,variant,channel,e,trial,success,list_size,ms";

impl TrialRecord {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{:.6}",
            self.q,
            self.m,
            self.k,
            self.s,
            self.r,
            self.variant,
            self.channel,
            self.e,
            self.trial,
            self.success as u8,
            self.list_size,
            self.ms
        )
    }
}

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub params: FrsParams,
    pub channel: ChannelSpec,
    pub trials: u64,
    pub seed: u64,
    pub options: DecodeOptions,
}

/// Stream of trial `i`, independent of how many trials run or in which order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Plants a random message, corrupts its encoding and decodes.
pub fn run_trial(config: &SimulationConfig, trial: u64) -> Result<TrialRecord> {
    let p = &config.params;
    let mut rng = trial_rng(config.seed, trial);
    let field = p.field();
    let f = UniPoly::new(field, (0..=p.k).map(|_| field.random_element(&mut rng)).collect());
    let received = apply_channel(p, &p.encode(&f)?, &config.channel, &mut rng)?;
    let opts = DecodeOptions { seed: rng.gen(), ..config.options };
    let start = Instant::now();
    let res = list_decode_with(p, &received, &opts)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(TrialRecord {
        q: p.q(),
        m: p.m,
        k: p.k,
        s: p.s,
        r: p.r,
        variant: p.variant.to_string(),
        channel: config.channel.kind.name().to_string(),
        e: config.channel.e,
        trial,
        success: res.messages.contains(&f),
        list_size: res.messages.len(),
        ms,
    })
}

pub fn simulate(config: &SimulationConfig) -> Result<Vec<TrialRecord>> {
    (0..config.trials).map(|i| run_trial(config, i)).collect()
}

pub fn write_trials<W: Write>(records: &[TrialRecord], out: &mut W) -> Result<()> {
    writeln!(out, "{TRIAL_HEADER}")?;
    for rec in records {
        writeln!(out, "{}", rec.to_csv())?;
    }
    Ok(())
}

pub const BOUNDS_HEADER: &str = "R,m,s,rho_gs,rho_a,rho_b,rho_max,rho_svar,limit_23,capacity,vacuous";

/// Bound curves for every `(m, s)` pair with `s <= m`, at rates
/// `step, 2 step, ...` below 1.
pub fn emit_bound_curves<W: Write>(m_list: &[usize], s_list: &[usize], r: usize, step: f64, out: &mut W) -> Result<()> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::InvalidParams(format!("grid step {step} must lie in (0, 1)")));
    }
    writeln!(out, "{BOUNDS_HEADER}")?;
    for &m in m_list {
        for &s in s_list.iter().filter(|&&s| s >= 1 && s <= m) {
            let mut i = 1u64;
            loop {
                let rate = i as f64 * step;
                if rate >= 1.0 - 1e-9 {
                    break;
                }
                let b = decoding_bounds(rate, m, s, r);
                writeln!(
                    out,
                    "{:.6},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
                    b.rate,
                    m,
                    s,
                    b.rho_gs,
                    b.rho_a,
                    b.rho_b,
                    b.rho_max,
                    b.rho_svar,
                    b.limit_23,
                    b.capacity,
                    b.vacuous as u8
                )?;
                i += 1;
            }
        }
    }
    Ok(())
}
