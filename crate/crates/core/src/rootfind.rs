//! Recovering message polynomials from an interpolated `Q`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frs::FrsParams;
use crate::galois::{ExtField, ExtFieldElem, Field, FieldElem, PrimeField};
use crate::poly::{roots_in_field, Binomials, MultiPoly, UniPoly};

/// Default bound on the number of candidates before giving up.
pub const CANDIDATE_CAP: usize = 1 << 16;

/// Above this degree of `R`, the automatic strategy switches from root
/// finding over the extension field to the coefficient search.
pub const EXTENSION_DEGREE_LIMIT: u64 = 600;

/// Upper bound on `q^{k+1}` for the exhaustive strategy.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootStrategy {
    /// Extension-field roots when `deg R` is moderate, else coefficient search.
    Auto,
    /// Roots of `R(Y) = T(Y, Y^q, ..., Y^{q^{s-1}})` over `F_q[X]/(E)`.
    ExtensionField,
    /// Coefficient-by-coefficient search for `f` with `Q(X, f(X), ...) = 0`.
    CoefficientSearch,
    /// Every polynomial of degree at most `k`.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateList {
    /// Distinct polynomials of degree `<= k`, sorted by coefficients.
    pub candidates: Vec<UniPoly<PrimeField>>,
    /// Candidates produced before the degree and identity checks.
    pub raw_count: usize,
    pub strategy: RootStrategy,
}

/// Splits `Q = E^b Q0` with `E` not dividing `Q0`, testing divisibility on
/// each `F_q[X]` coefficient of the Y-monomials.
pub fn strip_e_power(q: &MultiPoly, e: &UniPoly<PrimeField>) -> Result<(MultiPoly, u32)> {
    if q.is_zero() {
        return Err(Error::InvalidPolynomial("zero polynomial"));
    }
    let mut coeffs = q.y_coeffs();
    let mut b = 0;
    loop {
        let mut divided = BTreeMap::new();
        for (y, c) in &coeffs {
            let (quot, rem) = c.div_rem(e)?;
            if !rem.is_zero() {
                let q0 = MultiPoly::from_y_coeffs(q.field(), q.s(), q.k(), &coeffs);
                return Ok((q0, b));
            }
            divided.insert(y.clone(), quot);
        }
        coeffs = divided;
        b += 1;
    }
}

/// `T`: the coefficients of `Q0` reduced into the extension field.
pub fn reduce_mod_e(q0: &MultiPoly, ext: &ExtField) -> BTreeMap<Vec<u32>, ExtFieldElem> {
    q0.y_coeffs().iter().map(|(y, c)| (y.clone(), ext.from_poly(c))).filter(|(_, c)| !c.is_zero()).collect()
}

fn substituted_degree(y: &[u32], q: u64) -> u64 {
    y.iter().rev().fold(0u64, |acc, &j| acc * q + j as u64)
}

/// Degree of `R` before it is built.
pub fn substituted_degree_bound(q0: &MultiPoly) -> u64 {
    let q = q0.field().modulus() as u64;
    q0.y_coeffs().keys().map(|y| substituted_degree(y, q)).max().unwrap_or(0)
}

/// `R(Y) = T(Y, Y^q, ..., Y^{q^{s-1}})`.
pub fn substitute_frobenius(t: &BTreeMap<Vec<u32>, ExtFieldElem>, ext: &ExtField) -> UniPoly<ExtField> {
    let q = ext.base().modulus() as u64;
    let deg = t.keys().map(|y| substituted_degree(y, q)).max().unwrap_or(0) as usize;
    let mut coeffs = vec![ext.zero(); deg + 1];
    for (y, c) in t {
        let d = substituted_degree(y, q) as usize;
        coeffs[d] = &coeffs[d] + c;
    }
    UniPoly::new(ext, coeffs)
}

fn sort_dedup(mut list: Vec<UniPoly<PrimeField>>) -> Vec<UniPoly<PrimeField>> {
    let key = |p: &UniPoly<PrimeField>| p.coeffs().iter().map(|c| c.value()).collect::<Vec<_>>();
    list.sort_by_key(key);
    list.dedup();
    list
}

/// All `f` of degree `<= k` with `Q0(X, f(X), f(gamma X), ...) = 0`.
pub fn candidates_from_q(
    q0: &MultiPoly,
    params: &FrsParams,
    strategy: RootStrategy,
    seed: u64,
) -> Result<CandidateList> {
    let strategy = match strategy {
        RootStrategy::Auto if substituted_degree_bound(q0) <= EXTENSION_DEGREE_LIMIT => RootStrategy::ExtensionField,
        RootStrategy::Auto => RootStrategy::CoefficientSearch,
        other => other,
    };
    let (raw, raw_count) = match strategy {
        RootStrategy::ExtensionField => {
            let roots = extension_roots(q0, params, seed)?;
            let n = roots.len();
            (roots, n)
        }
        RootStrategy::CoefficientSearch => {
            let found = coefficient_search(q0, params, CANDIDATE_CAP)?;
            let n = found.len();
            (found, n)
        }
        RootStrategy::Exhaustive => {
            let found = exhaustive_search(q0, params)?;
            let n = found.len();
            (found, n)
        }
        RootStrategy::Auto => unreachable!(),
    };
    if raw_count > CANDIDATE_CAP {
        return Err(Error::CandidateCapExceeded(CANDIDATE_CAP));
    }
    let gamma = params.gamma();
    let kept = raw
        .into_iter()
        .filter(|f| f.degree().is_none_or(|d| d <= params.k))
        .filter(|f| q0.compose_folded(f, gamma).is_zero())
        .collect();
    Ok(CandidateList { candidates: sort_dedup(kept), raw_count, strategy })
}

fn extension_roots(q0: &MultiPoly, params: &FrsParams, seed: u64) -> Result<Vec<UniPoly<PrimeField>>> {
    let ext = params.ext_field();
    let t = reduce_mod_e(q0, &ext);
    assert!(!t.is_empty(), "E must not divide Q0");
    let r = substitute_frobenius(&t, &ext);
    assert!(!r.is_zero(), "R vanishes although T has Y-degree below q");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let roots = roots_in_field(&r, &mut rng)?;
    if roots.len() > CANDIDATE_CAP {
        return Err(Error::CandidateCapExceeded(CANDIDATE_CAP));
    }
    Ok(roots.iter().map(|g| g.to_poly()).collect())
}

fn exhaustive_search(q0: &MultiPoly, params: &FrsParams) -> Result<Vec<UniPoly<PrimeField>>> {
    let field = *params.field();
    let total = (field.modulus() as u128).checked_pow(params.k as u32 + 1);
    if total.is_none_or(|t| t > EXHAUSTIVE_LIMIT) {
        return Err(Error::InstanceTooLarge(format!("q^(k+1) exceeds {EXHAUSTIVE_LIMIT}")));
    }
    let gamma = params.gamma();
    Ok(all_messages(&field, params.k).filter(|f| q0.compose_folded(f, gamma).is_zero()).collect())
}

/// Every polynomial over `field` of degree at most `k`, in counting order.
pub fn all_messages(field: &PrimeField, k: usize) -> impl Iterator<Item = UniPoly<PrimeField>> + '_ {
    let q = field.modulus() as u64;
    let total = q.pow(k as u32 + 1);
    (0..total).map(move |mut code| {
        let coeffs = (0..=k)
            .map(|_| {
                let c = code % q;
                code /= q;
                field.elem(c as i64)
            })
            .collect();
        UniPoly::new(field, coeffs)
    })
}

/// Depth-first search over the coefficients of `f`, lowest first.
///
/// Writing `f = b + X g`, the condition `P(X, f(X), ..., f(gamma^{s-1} X)) = 0`
/// forces `P(0, b, ..., b) = 0`, and `g` must satisfy the same kind of
/// condition for `P(X, b + X Z_1, ..., b + gamma^{s-1} X Z_s) / X^v`.
fn coefficient_search(q0: &MultiPoly, params: &FrsParams, cap: usize) -> Result<Vec<UniPoly<PrimeField>>> {
    let field = *params.field();
    let gamma_pows: Vec<FieldElem> = (0..q0.s()).map(|t| params.gamma().pow(t as u64)).collect();
    let max_deg = q0.y_degree().unwrap_or(0) as usize;
    let binom = Binomials::new(&field, max_deg.max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut out = Vec::new();
    let mut stack = vec![(divide_out_x(q0.raw_terms().clone()), Vec::<FieldElem>::new())];
    let mut visited = 0usize;
    while let Some((p, prefix)) = stack.pop() {
        visited += 1;
        if visited > cap * (params.k + 2) {
            return Err(Error::CandidateCapExceeded(cap));
        }
        if prefix.len() == params.k + 1 {
            // every remaining coefficient is zero: P(X, 0, ..., 0) must vanish
            if p.keys().all(|e| e[1..].iter().any(|&j| j > 0)) {
                out.push(UniPoly::new(&field, prefix));
                if out.len() > cap {
                    return Err(Error::CandidateCapExceeded(cap));
                }
            }
            continue;
        }
        for b in diagonal_roots(&p, &field, &mut rng)? {
            let next = divide_out_x(shift_terms(&p, b, &gamma_pows, &binom));
            let mut prefix = prefix.clone();
            prefix.push(b);
            stack.push((next, prefix));
        }
    }
    Ok(out)
}

type Terms = BTreeMap<Vec<u32>, FieldElem>;

fn divide_out_x(mut terms: Terms) -> Terms {
    let v = terms.keys().map(|e| e[0]).min().unwrap_or(0);
    if v > 0 {
        terms = terms
            .into_iter()
            .map(|(mut e, c)| {
                e[0] -= v;
                (e, c)
            })
            .collect();
    }
    terms
}

/// Roots of `P(0, y, ..., y)`; every element when it vanishes identically.
fn diagonal_roots(p: &Terms, field: &PrimeField, rng: &mut ChaCha8Rng) -> Result<Vec<FieldElem>> {
    let mut coeffs: Vec<FieldElem> = Vec::new();
    for (e, &c) in p.iter().filter(|(e, _)| e[0] == 0) {
        let d = e[1..].iter().sum::<u32>() as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, field.zero());
        }
        coeffs[d] = coeffs[d] + c;
    }
    let diag = UniPoly::new(field, coeffs);
    if diag.is_zero() {
        return Ok((0..field.modulus()).map(|v| field.elem(v as i64)).collect());
    }
    let mut roots = roots_in_field(&diag, rng)?;
    roots.sort();
    Ok(roots)
}

/// `P(X, b + X Z_1, b + gamma X Z_2, ..., b + gamma^{s-1} X Z_s)`.
fn shift_terms(p: &Terms, b: FieldElem, gamma_pows: &[FieldElem], binom: &Binomials) -> Terms {
    let field = b.field();
    let mut out: Terms = BTreeMap::new();
    for (e, &c) in p {
        // expand one Y-variable at a time
        let mut partial: Vec<(Vec<u32>, FieldElem)> = vec![(vec![e[0]], c)];
        for (t, &j) in e[1..].iter().enumerate() {
            let mut next = Vec::with_capacity(partial.len() * (j as usize + 1));
            for (pe, pc) in &partial {
                for u in 0..=j {
                    let coef = *pc * binom.get(j, u) * b.pow((j - u) as u64) * gamma_pows[t].pow(u as u64);
                    if coef.is_zero() {
                        continue;
                    }
                    let mut ne = pe.clone();
                    ne[0] += u;
                    ne.push(u);
                    next.push((ne, coef));
                }
            }
            partial = next;
        }
        for (ne, nc) in partial {
            let slot = out.entry(ne).or_insert_with(|| field.zero());
            *slot = *slot + nc;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frs::Variant;
    use crate::poly::Monomial;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn ints(list: &[UniPoly<PrimeField>]) -> Vec<Vec<u32>> {
        list.iter().map(|p| p.coeffs().iter().map(|c| c.value()).collect()).collect()
    }

    fn q5() -> (FrsParams, ExtField) {
        let p = FrsParams::new(5, 2, 1, 2, 1, Variant::Standard).unwrap();
        let ext = p.ext_field();
        (p, ext)
    }

    fn times_e(q: &MultiPoly, e: &UniPoly<PrimeField>) -> MultiPoly {
        let coeffs: BTreeMap<_, _> = q.y_coeffs().into_iter().map(|(y, c)| (y, &c * e)).collect();
        MultiPoly::from_y_coeffs(q.field(), q.s(), q.k(), &coeffs)
    }

    #[test]
    fn strip_examples() {
        let (p, ext) = q5();
        let f = *p.field();
        let e = ext.modulus();
        let y1 = MultiPoly::from_terms(&f, 2, 1, [(mono(&[0, 1, 0]), f.one())]).unwrap();
        assert_eq!(strip_e_power(&times_e(&y1, &e), &e).unwrap(), (y1.clone(), 1));

        let diff =
            MultiPoly::from_terms(&f, 2, 1, [(mono(&[0, 1, 0]), f.one()), (mono(&[0, 0, 1]), f.elem(-1))]).unwrap();
        assert_eq!(strip_e_power(&diff, &e).unwrap(), (diff.clone(), 0));

        let one = MultiPoly::from_terms(&f, 2, 1, [(mono(&[0, 0, 0]), f.one())]).unwrap();
        assert_eq!(strip_e_power(&times_e(&times_e(&one, &e), &e), &e).unwrap(), (one, 2));

        assert!(strip_e_power(&MultiPoly::zero(&f, 2, 1), &e).is_err());
    }

    #[test]
    fn candidate_examples_all_strategies() {
        let (p, _) = q5();
        let f = *p.field();
        let cases: Vec<(MultiPoly, Vec<Vec<u32>>)> = vec![
            (
                MultiPoly::from_terms(&f, 2, 1, [(mono(&[0, 0, 1]), f.one()), (mono(&[0, 1, 0]), f.elem(-2))]).unwrap(),
                vec![vec![], vec![0, 1], vec![0, 2], vec![0, 3], vec![0, 4]],
            ),
            (MultiPoly::from_terms(&f, 2, 1, [(mono(&[0, 1, 0]), f.one())]).unwrap(), vec![vec![]]),
            (
                MultiPoly::from_terms(&f, 2, 1, [(mono(&[0, 1, 0]), f.one()), (mono(&[1, 0, 0]), f.elem(-1))]).unwrap(),
                vec![vec![0, 1]],
            ),
        ];
        for (q0, expect) in cases {
            for strategy in [RootStrategy::ExtensionField, RootStrategy::CoefficientSearch, RootStrategy::Exhaustive] {
                let got = candidates_from_q(&q0, &p, strategy, 7).unwrap();
                assert_eq!(ints(&got.candidates), expect, "{strategy:?} on {q0:?}");
            }
        }
    }

    #[test]
    fn r_polynomial_for_frobenius_relation() {
        let (p, ext) = q5();
        let f = *p.field();
        let q0 =
            MultiPoly::from_terms(&f, 2, 1, [(mono(&[0, 0, 1]), f.one()), (mono(&[0, 1, 0]), f.elem(-2))]).unwrap();
        let r = substitute_frobenius(&reduce_mod_e(&q0, &ext), &ext);
        assert_eq!(r.degree(), Some(5));
        assert_eq!(r.coeff(5), ext.one());
        assert_eq!(r.coeff(1), ext.from_base(f.elem(-2)));
        let got = candidates_from_q(&q0, &p, RootStrategy::ExtensionField, 1).unwrap();
        assert_eq!(got.raw_count, 5);
        assert_eq!(substituted_degree_bound(&q0), 5);
    }

    #[test]
    fn higher_degree_planted_factors() {
        // Q0 = prod_i (Y1 - f_i(X)) * (Y2 - Y1 + 1): roots are exactly the f_i
        let p = FrsParams::new(13, 3, 3, 2, 1, Variant::Standard).unwrap();
        let f = *p.field();
        let planted = [vec![1i64, 2, 3, 4], vec![0, 0, 5], vec![7, 1]];
        let mut q0 = MultiPoly::from_terms(
            &f,
            2,
            3,
            [(mono(&[0, 0, 1]), f.one()), (mono(&[0, 1, 0]), f.elem(-1)), (mono(&[0, 0, 0]), f.one())],
        )
        .unwrap();
        for coeffs in &planted {
            let mut lin = MultiPoly::from_terms(&f, 2, 3, [(mono(&[0, 1, 0]), f.one())]).unwrap();
            for (i, &c) in coeffs.iter().enumerate() {
                lin.add_term(&mono(&[i as u32, 0, 0]), f.elem(-c)).unwrap();
            }
            q0 = mul_multi(&q0, &lin);
        }
        let expect = {
            let mut v: Vec<Vec<u32>> = planted
                .iter()
                .map(|c| {
                    UniPoly::new(&f, c.iter().map(|&x| f.elem(x)).collect())
                        .coeffs()
                        .iter()
                        .map(|x| x.value())
                        .collect()
                })
                .collect();
            v.sort();
            v
        };
        for strategy in [RootStrategy::ExtensionField, RootStrategy::CoefficientSearch, RootStrategy::Exhaustive] {
            let got = candidates_from_q(&q0, &p, strategy, 3).unwrap();
            assert_eq!(ints(&got.candidates), expect, "{strategy:?}");
        }
    }

    fn mul_multi(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(a.field(), a.s(), a.k());
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let e: Vec<u32> = ma.exponents.iter().zip(&mb.exponents).map(|(x, y)| x + y).collect();
                out.add_term(&Monomial::new(e), ca * cb).unwrap();
            }
        }
        out
    }

    #[test]
    fn all_messages_count() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(all_messages(&f, 1).count(), 25);
        assert!(all_messages(&f, 1).all(|p| p.degree().is_none_or(|d| d <= 1)));
    }
}
