//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::time::Instant;

use folded_rs::decoder::{
    closed_form_threshold, decoding_bounds, decoding_threshold, list_decode_with, list_recover, membership_count,
    shifted_error_limit, suggest_params, DecodeOptions, DegreeMode,
};
use folded_rs::frs::{FrsParams, RecoverySets, Variant, Word};
use folded_rs::galois::{find_primitive_element, is_irreducible, ExtField, Field, PrimeField};
use folded_rs::harness::{
    apply_channel, oracle_decode, oracle_recover, run_trial, trial_rng, ChannelKind, ChannelSpec, SimulationConfig,
};
use folded_rs::interp::{check_y_degree, choose_degree, conditions_per_point, interpolate, InterpolationProblem};
use folded_rs::poly::{
    count_weighted_monomials, enumerate_weighted_monomials, frobenius_pow_mod, hasse_coefficient, low_order_monomials,
    scale_compose, UniPoly,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binom(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn keys(list: &[UniPoly<PrimeField>]) -> BTreeSet<Vec<u32>> {
    list.iter().map(|f| f.coeffs().iter().map(|c| c.value()).collect()).collect()
}

fn random_poly(field: &PrimeField, len: usize, rng: &mut ChaCha8Rng) -> UniPoly<PrimeField> {
    UniPoly::new(field, (0..len).map(|_| field.random_element(rng)).collect())
}

fn random_word(p: &FrsParams, rng: &mut ChaCha8Rng) -> Word {
    let f = p.field();
    Word::new(p.m, (0..p.big_n).map(|_| (0..p.m).map(|_| f.random_element(rng)).collect()).collect())
}

fn frobenius_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for q in [5u64, 7, 13, 31] {
        let field = PrimeField::new(q).unwrap();
        let gamma = find_primitive_element(&field);
        let e = ExtField::new(field, gamma).unwrap().modulus();
        for i in 0..200 {
            let f = random_poly(&field, q as usize - 1, &mut rng);
            let lhs = frobenius_pow_mod(&f, 1, &e).map_err(|err| err.to_string())?;
            ensure(lhs == scale_compose(&f, gamma), || format!("q = {q}, sample {i}"))?;
        }
    }
    Ok("800 samples over q in {5, 7, 13, 31}".into())
}

fn irreducibility() -> Outcome {
    for q in [5u64, 7, 11, 13, 31] {
        let field = PrimeField::new(q).unwrap();
        let e = ExtField::new(field, find_primitive_element(&field)).unwrap().modulus();
        ensure(is_irreducible(&e).map_err(|err| err.to_string())?, || format!("X^{} - gamma reducible", q - 1))?;
    }
    Ok("q in {5, 7, 11, 13, 31}".into())
}

fn monomial_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let k: u64 = rng.gen_range(1..=10);
        let d: u64 = rng.gen_range(0..=200);
        let a = d / k;
        let closed = k as u128 * binom(a + 2, 3) + (d - a * k + 1) as u128 * binom(a + 2, 2);
        let listed = enumerate_weighted_monomials(k as u32, d, 2).len() as u128;
        ensure(listed == closed, || format!("k = {k}, D = {d}: {listed} != {closed}"))?;
    }
    for _ in 0..100 {
        let (k, n0, r, s) = (rng.gen_range(1..=10), rng.gen_range(1..=40), rng.gen_range(1..=4), rng.gen_range(1..=3));
        let d = choose_degree(k, n0, r, s).refined;
        let need = n0 as u128 * conditions_per_point(r, s);
        let listed = enumerate_weighted_monomials(k as u32, d, s).len() as u128;
        ensure(listed > need, || format!("(k, n0, r, s) = {:?}: D = {d} infeasible", (k, n0, r, s)))?;
        ensure(d == 1 || count_weighted_monomials(k as u32, d - 1, s) <= need, || format!("D = {d} not minimal"))?;
    }
    Ok("100 closed-form checks, 100 degree choices".into())
}

fn interpolation_postconditions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..50 {
        let s = 1 + i % 3;
        let q = [13u64, 31][i % 2];
        let field = PrimeField::new(q).unwrap();
        let (k, r) = (rng.gen_range(1..=4usize), rng.gen_range(1..=3usize));
        let n0 = rng.gen_range(1..=10usize);
        let points: Vec<_> = (0..n0).map(|_| (0..=s).map(|_| field.random_element(&mut rng)).collect()).collect();
        let d = choose_degree(k, n0, r, s).refined;
        let problem = InterpolationProblem { field, points: points.clone(), r, k, s, d };
        let q_poly = interpolate(&problem).map_err(|e| format!("instance {i}: {e}"))?.q;
        ensure(!q_poly.is_zero(), || format!("instance {i}: Q = 0"))?;
        ensure(q_poly.weighted_degree().unwrap() <= d, || format!("instance {i}: weighted degree above D"))?;
        for p in &points {
            for mono in low_order_monomials(s + 1, r as u32) {
                let h = hasse_coefficient(&q_poly, p, &mono).map_err(|e| e.to_string())?;
                ensure(h.is_zero(), || format!("instance {i}: Hasse coefficient {mono:?} nonzero"))?;
            }
        }
    }
    Ok("50 instances, s in {1, 2, 3}".into())
}

fn largest_k(q: u64, m: usize, s: usize, r: usize) -> Option<(FrsParams, usize)> {
    let n = (q as usize - 1) / m * m;
    (1..n).rev().find_map(|k| {
        let p = FrsParams::new(q, m, k, s, r, Variant::Standard).ok()?;
        let (d, t) = decoding_threshold(&p, DegreeMode::Refined);
        (check_y_degree(d, k, q).is_ok() && p.big_n > t).then(|| (p.clone(), p.big_n - t))
    })
}

fn planted_completeness() -> Outcome {
    let mut configs = 0;
    let mut trials = 0;
    for q in [13u64, 31] {
        for m in 2..=4usize {
            for s in 1..=m.min(3) {
                for r in 1..=3usize {
                    let (p, e) = largest_k(q, m, s, r).ok_or_else(|| format!("no k for {:?}", (q, m, s, r)))?;
                    configs += 1;
                    for (offset, kind) in [(0u64, ChannelKind::Uniform), (1, ChannelKind::Burst)] {
                        let config = SimulationConfig {
                            params: p.clone(),
                            channel: ChannelSpec { kind, e },
                            trials: 25,
                            seed: (q << 16) ^ ((m as u64) << 8) ^ ((s as u64) << 4) ^ (r as u64) ^ (offset << 20),
                            options: DecodeOptions::default(),
                        };
                        for t in 0..config.trials {
                            let rec = run_trial(&config, t).map_err(|err| format!("{:?}: {err}", (q, m, s, r)))?;
                            trials += 1;
                            ensure(rec.success, || {
                                format!(
                                    "(q, m, k, s, r) = {:?}, {} trial {t}: planted message missing",
                                    (q, m, p.k, s, r),
                                    rec.channel
                                )
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{configs} configurations, {trials} trials at e* errors"))
}

fn oracle_equivalence() -> Outcome {
    let p = FrsParams::new(13, 3, 2, 2, 3, Variant::Standard).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut listed = 0;
    for (mode, expect_t) in [(DegreeMode::Formula, 3), (DegreeMode::Refined, 2)] {
        let opts = DecodeOptions { degree: mode, ..Default::default() };
        for i in 0..50 {
            // the first 25 words are uniform, the rest lie 1 or 2 errors from a codeword
            let y = if i < 25 {
                random_word(&p, &mut rng)
            } else {
                let cw = p.encode(&random_poly(p.field(), p.k + 1, &mut rng)).unwrap();
                let spec = ChannelSpec { kind: ChannelKind::Uniform, e: 1 + i % 2 };
                apply_channel(&p, &cw, &spec, &mut rng).unwrap()
            };
            let res = list_decode_with(&p, &y, &opts).map_err(|e| e.to_string())?;
            ensure(res.t == expect_t, || format!("{mode:?}: t = {}", res.t))?;
            let oracle = oracle_decode(&p, &y, res.t).map_err(|e| e.to_string())?;
            listed += oracle.len();
            ensure(keys(&res.messages) == keys(&oracle), || format!("{mode:?} word {i}: decoder and oracle differ"))?;
        }
    }
    Ok(format!("25 random and 25 near-codeword words each at t = 3 and t = 2, {listed} oracle messages in total"))
}

fn shifted_variant() -> Outcome {
    let (q, m, s, r) = (31u64, 4usize, 2usize, 3usize);
    let p = (1..28)
        .rev()
        .filter_map(|k| FrsParams::new(q, m, k, s, r, Variant::Shifted).ok())
        .find(|p| shifted_error_limit(p) >= 2)
        .ok_or("no k with a positive error bound")?;
    let e = (shifted_error_limit(&p) - 1) as usize;
    let mut trials = 0;
    for (offset, kind) in [(0u64, ChannelKind::Uniform), (1, ChannelKind::Burst)] {
        let config = SimulationConfig {
            params: p.clone(),
            channel: ChannelSpec { kind, e },
            trials: 25,
            seed: 7 + offset,
            options: DecodeOptions::default(),
        };
        for t in 0..config.trials {
            let rec = run_trial(&config, t).map_err(|err| err.to_string())?;
            trials += 1;
            ensure(rec.success, || format!("k = {}, {} trial {t}: planted message missing", p.k, rec.channel))?;
        }
    }
    Ok(format!("k = {}, {trials} trials with {e} errors", p.k))
}

fn list_recovery() -> Outcome {
    let p = FrsParams::new(13, 3, 1, 2, 3, Variant::Standard).unwrap();
    let l = 2;
    let closed = closed_form_threshold(&p, l);
    ensure(closed <= p.big_n as f64, || format!("agreement condition fails: {closed} > N"))?;
    let field = *p.field();
    let mut found = 0;
    for i in 0..25u64 {
        let mut rng = trial_rng(8, i);
        let f = random_poly(&field, p.k + 1, &mut rng);
        let cf = p.encode(&f).unwrap();
        let other = p.encode(&random_poly(&field, p.k + 1, &mut rng)).unwrap();
        let sets: Vec<_> = (0..p.big_n)
            .map(|j| {
                let extra = if i % 2 == 0 {
                    other.symbols[j].clone()
                } else {
                    (0..p.m).map(|_| field.random_element(&mut rng)).collect()
                };
                vec![cf.symbols[j].clone(), extra]
            })
            .collect();
        let sets = RecoverySets::new(&p, sets, l).map_err(|e| e.to_string())?;
        let res = list_recover(&p, &sets).map_err(|e| e.to_string())?;
        let oracle = oracle_recover(&p, &sets, res.t).map_err(|e| e.to_string())?;
        ensure(keys(&res.messages) == keys(&oracle), || format!("instance {i}: recovery and oracle differ"))?;
        let full = oracle_recover(&p, &sets, p.big_n).map_err(|e| e.to_string())?;
        ensure(keys(&full).is_subset(&keys(&res.messages)), || {
            format!("instance {i}: full-agreement message missing")
        })?;
        ensure(res.messages.iter().all(|g| membership_count(&p.encode(g).unwrap(), &sets) >= res.t), || {
            format!("instance {i}: output below threshold")
        })?;
        found += res.messages.len();
    }
    Ok(format!("25 instances, l = 2, closed-form agreement {closed:.3} <= N = {}, {found} messages", p.big_n))
}

fn bound_claims() -> Outcome {
    for i in 44..=99 {
        let row = decoding_bounds(i as f64 / 100.0, 4, 2, 1);
        ensure(row.rho_b > row.rho_gs, || format!("m = 4, R = {}: rho_b <= rho_gs", row.rate))?;
    }
    for i in 1..=99 {
        let row = decoding_bounds(i as f64 / 100.0, 5, 2, 1);
        ensure(row.rho_max > row.rho_gs, || format!("m = 5, R = {}: max(rho_a, rho_b) <= rho_gs", row.rate))?;
    }
    for (rate, eps) in [(0.5, 0.25), (0.25, 1.0), (0.9, 0.05)] {
        let sp = suggest_params(rate, eps);
        ensure(sp.radius >= 1.0 - rate - eps - 1e-9, || format!("(R, eps) = ({rate}, {eps}): radius {}", sp.radius))?;
    }
    Ok("rho_b(4,2) > rho_GS on [0.44, 0.99]; max(rho_a, rho_b)(5,2) > rho_GS on [0.01, 0.99]; 3 parameter suggestions"
        .into())
}

fn mds_distance() -> Outcome {
    let p = FrsParams::new(13, 2, 2, 1, 1, Variant::Standard).unwrap();
    let words: Vec<Vec<u32>> = folded_rs::rootfind::all_messages(p.field(), p.k)
        .map(|f| p.unfold(&p.encode(&f).unwrap()).unwrap().iter().map(|x| x.value()).collect())
        .collect();
    let bound = p.n - p.k;
    let mut min = usize::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            min = min.min(a.iter().zip(b).filter(|(x, y)| x != y).count());
        }
    }
    ensure(min >= bound, || format!("minimum distance {min} < n - k = {bound}"))?;
    Ok(format!("{} codewords, minimum unfolded distance {min} (n - k = {bound})", words.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Frobenius identity", frobenius_identity),
        ("irreducibility of X^(q-1) - gamma", irreducibility),
        ("monomial counts and degree feasibility", monomial_counts),
        ("interpolation postconditions", interpolation_postconditions),
        ("planted-codeword completeness", planted_completeness),
        ("oracle equivalence", oracle_equivalence),
        ("shifted variant", shifted_variant),
        ("list recovery", list_recovery),
        ("bound claims", bound_claims),
        ("MDS distance", mds_distance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
