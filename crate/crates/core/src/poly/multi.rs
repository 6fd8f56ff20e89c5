use std::collections::BTreeMap;
use std::fmt;

use super::{scale_compose, UniPoly};
use crate::error::{Error, Result};
use crate::galois::{Field, FieldElem, PrimeField};

/// Exponent vector `(i, j_1, ..., j_s)` for `X^i Y_1^{j_1} ... Y_s^{j_s}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn x_degree(&self) -> u32 {
        self.exponents[0]
    }

    pub fn y_degree(&self) -> u32 {
        self.exponents[1..].iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// `i + k * (j_1 + ... + j_s)`.
    pub fn weighted_degree(&self, k: u32) -> u64 {
        self.x_degree() as u64 + k as u64 * self.y_degree() as u64
    }
}

fn push_compositions(prefix: &mut Vec<u32>, slots: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
    if slots == 0 {
        out.push(prefix.clone());
        return;
    }
    for j in 0..=budget {
        prefix.push(j);
        push_compositions(prefix, slots - 1, budget - j, out);
        prefix.pop();
    }
}

/// Every exponent vector with total degree below `r` in `vars` variables.
pub fn low_order_monomials(vars: usize, r: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if r == 0 {
        return Vec::new();
    }
    push_compositions(&mut Vec::new(), vars, r - 1, &mut out);
    let mut monos: Vec<Monomial> = out.into_iter().map(Monomial::new).collect();
    monos.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| b.cmp(a)));
    monos
}

/// All monomials of `(1, k, ..., k)`-weighted degree at most `d` in
/// `X, Y_1..Y_s`, ordered by weighted degree and then by exponent vector.
pub fn enumerate_weighted_monomials(k: u32, d: u64, s: usize) -> Vec<Monomial> {
    assert!(k >= 1 && s >= 1);
    let max_y = (d / k as u64) as u32;
    let mut ys = Vec::new();
    push_compositions(&mut Vec::new(), s, max_y, &mut ys);
    let mut out = Vec::new();
    for y in ys {
        let used = k as u64 * y.iter().map(|&j| j as u64).sum::<u64>();
        for i in 0..=(d - used) {
            let mut e = Vec::with_capacity(s + 1);
            e.push(i as u32);
            e.extend_from_slice(&y);
            out.push(Monomial::new(e));
        }
    }
    out.sort_by(|a, b| a.weighted_degree(k).cmp(&b.weighted_degree(k)).then_with(|| a.cmp(b)));
    out
}

fn binom_u128(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of monomials of weighted degree at most `d`, without enumerating:
/// sum over `J <= d/k` of `C(J+s-1, s-1) * (d - kJ + 1)`.
pub fn count_weighted_monomials(k: u32, d: u64, s: usize) -> u128 {
    (0..=d / k as u64).map(|j| binom_u128(j + s as u64 - 1, s as u64 - 1) * (d - k as u64 * j + 1) as u128).sum()
}

/// Pascal triangle mod q.
#[derive(Clone, Debug)]
pub struct Binomials {
    rows: Vec<Vec<FieldElem>>,
}

impl Binomials {
    pub fn new(field: &PrimeField, max_n: usize) -> Self {
        let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(max_n + 1);
        for n in 0..=max_n {
            let mut row = vec![field.one(); n + 1];
            for r in 1..n {
                row[r] = rows[n - 1][r - 1] + rows[n - 1][r];
            }
            rows.push(row);
        }
        Self { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n, r) mod q`, zero when `r > n`.
    pub fn get(&self, n: u32, r: u32) -> FieldElem {
        let row = &self.rows[n as usize];
        row.get(r as usize).copied().unwrap_or_else(|| row[0].field().zero())
    }
}

/// Sparse polynomial over `F_q` in `X, Y_1, ..., Y_s`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: PrimeField,
    s: usize,
    k: u32,
    terms: BTreeMap<Vec<u32>, FieldElem>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut s = format!("{c}");
                if e[0] > 0 {
                    s.push_str(&format!("*X^{}", e[0]));
                }
                for (t, &j) in e[1..].iter().enumerate() {
                    if j > 0 {
                        s.push_str(&format!("*Y{}^{j}", t + 1));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl MultiPoly {
    pub fn zero(field: &PrimeField, s: usize, k: u32) -> Self {
        assert!(s >= 1, "at least one Y variable");
        Self { field: *field, s, k, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(field: &PrimeField, s: usize, k: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, FieldElem)>,
    {
        let mut p = Self::zero(field, s, k);
        for (m, c) in terms {
            p.add_term(&m, c)?;
        }
        Ok(p)
    }

    /// `sum_e c_e(X) Y^e` from X-polynomial coefficients keyed by Y-exponents.
    pub fn from_y_coeffs<'a, I>(field: &PrimeField, s: usize, k: u32, coeffs: I) -> Self
    where
        I: IntoIterator<Item = (&'a Vec<u32>, &'a UniPoly<PrimeField>)>,
    {
        let mut p = Self::zero(field, s, k);
        for (y, c) in coeffs {
            for (i, &a) in c.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    let mut e = vec![i as u32];
                    e.extend_from_slice(y);
                    p.terms.insert(e, a);
                }
            }
        }
        p
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, FieldElem)> + '_ {
        self.terms.iter().map(|(e, &c)| (Monomial::new(e.clone()), c))
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<Vec<u32>, FieldElem> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(&m.exponents).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: &Monomial, c: FieldElem) -> Result<()> {
        if m.exponents.len() != self.s + 1 {
            return Err(Error::DimensionMismatch { expected: self.s + 1, got: m.exponents.len() });
        }
        assert_eq!(c.field(), self.field, "cross-field arithmetic");
        let entry = self.terms.entry(m.exponents.clone()).or_insert_with(|| self.field.zero());
        *entry = *entry + c;
        if entry.is_zero() {
            self.terms.remove(&m.exponents);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.s != self.s {
            return Err(Error::DimensionMismatch { expected: self.s, got: other.s });
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(&m, c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElem) -> Self {
        let mut out = Self::zero(&self.field, self.s, self.k);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(e, &a)| (e.clone(), a * c)).collect();
        }
        out
    }

    /// Largest `(1, k, ..., k)`-weighted degree of a term.
    pub fn weighted_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| Monomial::new(e.clone()).weighted_degree(self.k)).max()
    }

    /// Largest total degree in the Y variables.
    pub fn y_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[1..].iter().sum()).max()
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0)
    }

    /// Groups terms as a polynomial in the Y variables with `F_q[X]`
    /// coefficients.
    pub fn y_coeffs(&self) -> BTreeMap<Vec<u32>, UniPoly<PrimeField>> {
        let mut dense: BTreeMap<Vec<u32>, Vec<FieldElem>> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let row = dense.entry(e[1..].to_vec()).or_default();
            let i = e[0] as usize;
            if row.len() <= i {
                row.resize(i + 1, self.field.zero());
            }
            row[i] = c;
        }
        dense.into_iter().map(|(y, c)| (y, UniPoly::new(&self.field, c))).collect()
    }

    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.s + 1 {
            return Err(Error::DimensionMismatch { expected: self.s + 1, got: point.len() });
        }
        let mut acc = self.field.zero();
        for (e, &c) in &self.terms {
            let mut term = c;
            for (p, &x) in point.iter().zip(e) {
                term = term * p.pow(x as u64);
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// `Q(X, f(X), f(gamma X), ..., f(gamma^{s-1} X))` in `F_q[X]`.
    pub fn compose_folded(&self, f: &UniPoly<PrimeField>, gamma: FieldElem) -> UniPoly<PrimeField> {
        let mut shifts = Vec::with_capacity(self.s);
        let mut g = f.clone();
        for _ in 0..self.s {
            let next = scale_compose(&g, gamma);
            shifts.push(g);
            g = next;
        }
        let max_y = self.terms.keys().flat_map(|e| e[1..].iter().copied()).max().unwrap_or(0);
        let powers: Vec<Vec<UniPoly<PrimeField>>> = shifts
            .iter()
            .map(|h| {
                let mut row = vec![UniPoly::one(&self.field)];
                for j in 1..=max_y as usize {
                    let next = &row[j - 1] * h;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = UniPoly::zero(&self.field);
        for (y, c) in self.y_coeffs() {
            let mut term = c;
            for (t, &j) in y.iter().enumerate() {
                term = &term * &powers[t][j as usize];
            }
            acc = &acc + &term;
        }
        acc
    }
}

/// Coefficient of `target` in `Q(X + p_0, Y_1 + p_1, ..., Y_s + p_s)`:
/// `sum_e c_e prod_t C(e_t, b_t) p_t^{e_t - b_t}`.
pub fn hasse_coefficient(q: &MultiPoly, point: &[FieldElem], target: &Monomial) -> Result<FieldElem> {
    let vars = q.s() + 1;
    if point.len() != vars {
        return Err(Error::DimensionMismatch { expected: vars, got: point.len() });
    }
    if target.exponents.len() != vars {
        return Err(Error::DimensionMismatch { expected: vars, got: target.exponents.len() });
    }
    let binom = Binomials::new(q.field(), q.max_exponent() as usize);
    Ok(hasse_with(q, point, target, &binom))
}

pub(crate) fn hasse_with(q: &MultiPoly, point: &[FieldElem], target: &Monomial, binom: &Binomials) -> FieldElem {
    let mut acc = q.field().zero();
    'terms: for (e, &c) in q.raw_terms() {
        let mut term = c;
        for ((&et, &bt), p) in e.iter().zip(&target.exponents).zip(point) {
            if et < bt {
                continue 'terms;
            }
            term = term * binom.get(et, bt) * p.pow((et - bt) as u64);
        }
        acc = acc + term;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn closed_form_s2(k: u64, d: u64) -> u128 {
        let a = d / k;
        k as u128 * binom_u128(a + 2, 3) + (d - a * k + 1) as u128 * binom_u128(a + 2, 2)
    }

    #[test]
    fn enumeration_examples() {
        let m = enumerate_weighted_monomials(1, 1, 1);
        assert_eq!(m, vec![mono(&[0, 0]), mono(&[0, 1]), mono(&[1, 0])]);
        assert_eq!(enumerate_weighted_monomials(2, 3, 2).len(), 8);
        assert_eq!(enumerate_weighted_monomials(2, 17, 2).len(), 330);
        assert_eq!(count_weighted_monomials(2, 17, 2), 330);
        assert_eq!(closed_form_s2(2, 17), 330);
    }

    #[test]
    fn enumeration_is_sorted_and_within_bound() {
        let m = enumerate_weighted_monomials(3, 20, 3);
        assert!(m.iter().all(|x| x.weighted_degree(3) <= 20));
        assert!(m.windows(2).all(|w| (w[0].weighted_degree(3), &w[0]) < (w[1].weighted_degree(3), &w[1])));
    }

    #[test]
    fn low_order_monomials_count() {
        // C(r + v - 1, v) monomials of total degree < r in v variables
        assert_eq!(low_order_monomials(3, 3).len(), 10);
        assert_eq!(low_order_monomials(4, 2).len(), 5);
        assert!(low_order_monomials(3, 0).is_empty());
    }

    #[test]
    fn binomials_mod_q() {
        let f = PrimeField::new(5).unwrap();
        let b = Binomials::new(&f, 10);
        assert_eq!(b.get(4, 2).value(), 1);
        assert_eq!(b.get(5, 2).value(), 0);
        assert_eq!(b.get(10, 3).value(), 0);
        assert_eq!(b.get(7, 3).value(), 0);
        assert_eq!(b.get(6, 2).value(), 0);
        assert_eq!(b.get(8, 3).value(), 56 % 5);
        assert_eq!(b.get(3, 4).value(), 0);
    }

    #[test]
    fn hasse_examples() {
        let f = PrimeField::new(7).unwrap();
        let x2 = MultiPoly::from_terms(&f, 1, 1, [(mono(&[2, 0]), f.one())]).unwrap();
        let pt = [f.elem(1), f.elem(0)];
        assert_eq!(hasse_coefficient(&x2, &pt, &mono(&[1, 0])).unwrap(), f.elem(2));

        let y1y2 = MultiPoly::from_terms(&f, 2, 1, [(mono(&[0, 1, 1]), f.one())]).unwrap();
        let pt = [f.elem(3), f.elem(1), f.elem(1)];
        assert_eq!(hasse_coefficient(&y1y2, &pt, &mono(&[0, 1, 0])).unwrap(), f.one());

        let q = MultiPoly::from_terms(
            &f,
            2,
            1,
            [(mono(&[1, 2, 0]), f.elem(3)), (mono(&[0, 0, 3]), f.elem(5)), (mono(&[0, 0, 0]), f.elem(1))],
        )
        .unwrap();
        let pt = [f.elem(2), f.elem(4), f.elem(6)];
        assert_eq!(hasse_coefficient(&q, &pt, &mono(&[0, 0, 0])).unwrap(), q.evaluate(&pt).unwrap());
        assert!(hasse_coefficient(&q, &pt[..2], &mono(&[0, 0, 0])).is_err());
    }

    #[test]
    fn compose_folded_direct() {
        let f = PrimeField::new(5).unwrap();
        // Q = Y2 - 2 Y1 vanishes on f = cX with gamma = 2
        let q = MultiPoly::from_terms(&f, 2, 1, [(mono(&[0, 0, 1]), f.one()), (mono(&[0, 1, 0]), f.elem(-2))]).unwrap();
        let lin = UniPoly::new(&f, vec![f.zero(), f.elem(3)]);
        assert!(q.compose_folded(&lin, f.elem(2)).is_zero());
        let konst = UniPoly::new(&f, vec![f.elem(1)]);
        assert_eq!(q.compose_folded(&konst, f.elem(2)), UniPoly::new(&f, vec![f.elem(-1)]));
    }

    fn arb_multi(s: usize) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec((proptest::collection::vec(0u32..5, s + 1), 0i64..13), 0..12).prop_map(move |terms| {
            let f = PrimeField::new(13).unwrap();
            MultiPoly::from_terms(&f, s, 2, terms.into_iter().map(|(e, c)| (Monomial::new(e), f.elem(c)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn count_matches_enumeration(k in 1u32..6, d in 0u64..40, s in 1usize..4) {
            let n = enumerate_weighted_monomials(k, d, s).len() as u128;
            prop_assert_eq!(n, count_weighted_monomials(k, d, s));
            if s == 2 {
                prop_assert_eq!(n, closed_form_s2(k as u64, d));
            }
        }

        #[test]
        fn hasse_is_linear(a in arb_multi(2), b in arb_multi(2), pt in proptest::collection::vec(0i64..13, 3),
                           t in proptest::collection::vec(0u32..3, 3)) {
            let f = PrimeField::new(13).unwrap();
            let pt: Vec<_> = pt.into_iter().map(|v| f.elem(v)).collect();
            let t = Monomial::new(t);
            let sum = hasse_coefficient(&a.add(&b).unwrap(), &pt, &t).unwrap();
            let parts = hasse_coefficient(&a, &pt, &t).unwrap() + hasse_coefficient(&b, &pt, &t).unwrap();
            prop_assert_eq!(sum, parts);
        }

        #[test]
        fn y_coeffs_roundtrip(a in arb_multi(3)) {
            let back = MultiPoly::from_y_coeffs(a.field(), 3, 2, &a.y_coeffs());
            prop_assert_eq!(back, a);
        }
    }
}
