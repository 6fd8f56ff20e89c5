//! Dense univariate polynomials over any [`Field`], sparse multivariate
//! polynomials over `F_q`, and root extraction.

mod multi;
mod roots;

pub use multi::{
    count_weighted_monomials, enumerate_weighted_monomials, hasse_coefficient, low_order_monomials, Binomials,
    Monomial, MultiPoly,
};
pub use roots::{roots_exhaustive, roots_in_field};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::galois::{Field, FieldElem, PrimeField};

/// Below this many quotient coefficients, long division beats Newton.
const NEWTON_CUTOFF: usize = 48;

/// Polynomial with coefficients low degree first and no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(i, c)| match i {
                0 => format!("{c:?}"),
                1 => format!("{c:?}*X"),
                _ => format!("{c:?}*X^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        for c in &coeffs {
            assert!(field.owns(c), "cross-field arithmetic");
        }
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Self { field: field.clone(), coeffs }
    }

    pub fn zero(field: &F) -> Self {
        Self { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// `c * X^deg`.
    pub fn monomial(field: &F, c: F::Elem, deg: usize) -> Self {
        let mut coeffs = vec![field.zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(field, coeffs)
    }

    pub fn x(field: &F) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: &F::Elem) -> F::Elem {
        assert!(self.field.owns(x), "cross-field arithmetic");
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading().ok_or(Error::InvalidPolynomial("zero polynomial"))?;
        let inv = self.field.inv(lead)?;
        Ok(self.scale(&inv))
    }

    pub fn truncate(&self, len: usize) -> Self {
        Self::new(&self.field, self.coeffs.iter().take(len).cloned().collect())
    }

    fn reversed(&self, len: usize) -> Vec<F::Elem> {
        let mut out = vec![self.field.zero(); len];
        for (i, c) in self.coeffs.iter().enumerate().take(len) {
            out[len - 1 - i] = c.clone();
        }
        out
    }

    /// Power-series inverse: `g` with `self * g = 1 mod X^len`.
    pub fn inverse_series(&self, len: usize) -> Result<Self> {
        let f = &self.field;
        let c0 = self.coeff(0);
        let mut g = Self::constant(f, f.inv(&c0)?);
        let two = f.add(&f.one(), &f.one());
        let mut prec = 1;
        while prec < len {
            prec = (2 * prec).min(len);
            let e = (&self.truncate(prec) * &g).truncate(prec);
            let mut corr: Vec<F::Elem> = e.coeffs.iter().map(|c| f.neg(c)).collect();
            if corr.is_empty() {
                corr.push(f.zero());
            }
            corr[0] = f.add(&corr[0], &two);
            g = (&g * &Self::new(f, corr)).truncate(prec);
        }
        Ok(g)
    }

    fn div_rem_long(&self, d: &Self) -> Result<(Self, Self)> {
        let f = &self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(da) = self.degree().filter(|&da| da >= dd) else {
            return Ok((Self::zero(f), self.clone()));
        };
        let inv_lead = f.inv(d.leading().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); da - dd + 1];
        for i in (0..=da - dd).rev() {
            let c = f.mul(&rem[i + dd], &inv_lead);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(&rem[i + j], &f.mul(&c, dc));
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    fn quotient_newton(&self, d: &Self, inv_rev: &Self) -> Self {
        let da = self.degree().unwrap();
        let dd = d.degree().unwrap();
        let qlen = da - dd + 1;
        let rev_a = Self::new(&self.field, self.reversed(da + 1)).truncate(qlen);
        let q_rev = (&rev_a * &inv_rev.truncate(qlen)).truncate(qlen);
        Self::new(&self.field, q_rev.reversed(qlen))
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let qlen = match self.degree() {
            Some(da) if da >= dd => da - dd + 1,
            _ => return Ok((Self::zero(&self.field), self.clone())),
        };
        if qlen < NEWTON_CUTOFF || dd < NEWTON_CUTOFF {
            return self.div_rem_long(d);
        }
        let inv_rev = Self::new(&self.field, d.reversed(dd + 1)).inverse_series(qlen)?;
        let quot = self.quotient_newton(d, &inv_rev);
        let rem = (self - &(&quot * d)).truncate(dd);
        Ok((quot, rem))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (quot, r) = r0.div_rem(&r1)?;
            let s = &s0 - &(&quot * &s1);
            let t = &t0 - &(&quot * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let lead = r0.leading().ok_or(Error::InvalidPolynomial("gcd of zero polynomials"))?;
        let inv = f.inv(lead)?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, exp: u64, modulus: &Self) -> Result<Self> {
        PolyModulus::new(modulus)?.pow(self, &BigUint::from(exp))
    }

    pub fn pow_mod_big(&self, exp: &BigUint, modulus: &Self) -> Result<Self> {
        PolyModulus::new(modulus)?.pow(self, exp)
    }
}

impl<F: Field> Add for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn add(self, rhs: Self) -> UniPoly<F> {
        assert_eq!(self.field, rhs.field, "cross-field arithmetic");
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => f.add(a, b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        UniPoly::new(f, coeffs)
    }
}

impl<F: Field> Sub for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn sub(self, rhs: Self) -> UniPoly<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Neg for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        let f = &self.field;
        UniPoly { field: f.clone(), coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }
}

impl<F: Field> Mul for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn mul(self, rhs: Self) -> UniPoly<F> {
        assert_eq!(self.field, rhs.field, "cross-field arithmetic");
        let coeffs = if std::ptr::eq(self, rhs) {
            self.field.mul_coeffs(&self.coeffs, &self.coeffs)
        } else {
            self.field.mul_coeffs(&self.coeffs, &rhs.coeffs)
        };
        UniPoly::new(&self.field, coeffs)
    }
}

/// A modulus with its reversed inverse cached, for repeated reductions.
#[derive(Clone, Debug)]
pub struct PolyModulus<F: Field> {
    modulus: UniPoly<F>,
    inv_rev: Option<UniPoly<F>>,
}

impl<F: Field> PolyModulus<F> {
    pub fn new(modulus: &UniPoly<F>) -> Result<Self> {
        let d = match modulus.degree() {
            None => return Err(Error::InvalidPolynomial("zero modulus")),
            Some(d) => d,
        };
        let inv_rev = if d >= NEWTON_CUTOFF {
            let rev = UniPoly::new(&modulus.field, modulus.reversed(d + 1));
            Some(rev.inverse_series(d)?)
        } else {
            None
        };
        Ok(Self { modulus: modulus.clone(), inv_rev })
    }

    pub fn modulus(&self) -> &UniPoly<F> {
        &self.modulus
    }

    pub fn reduce(&self, a: &UniPoly<F>) -> Result<UniPoly<F>> {
        let d = self.modulus.degree().unwrap();
        match (a.degree(), &self.inv_rev) {
            (Some(da), Some(inv)) if da >= d && da - d < d => {
                let quot = a.quotient_newton(&self.modulus, inv);
                Ok((a - &(&quot * &self.modulus)).truncate(d))
            }
            _ => a.rem(&self.modulus),
        }
    }

    pub fn mul(&self, a: &UniPoly<F>, b: &UniPoly<F>) -> Result<UniPoly<F>> {
        self.reduce(&(a * b))
    }

    pub fn pow(&self, base: &UniPoly<F>, exp: &BigUint) -> Result<UniPoly<F>> {
        let base = self.reduce(base)?;
        let mut acc = self.reduce(&UniPoly::one(&base.field))?;
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc)?;
            if exp.bit(i) {
                acc = self.mul(&acc, &base)?;
            }
        }
        Ok(acc)
    }
}

/// `f(gamma X)`: coefficient `c_i` becomes `c_i gamma^i`.
pub fn scale_compose(f: &UniPoly<PrimeField>, gamma: FieldElem) -> UniPoly<PrimeField> {
    assert_eq!(*f.field(), gamma.field(), "cross-field arithmetic");
    let mut g = f.field().one();
    let coeffs = f
        .coeffs()
        .iter()
        .map(|&c| {
            let out = c * g;
            g = g * gamma;
            out
        })
        .collect();
    UniPoly::new(f.field(), coeffs)
}

/// `f^{q^j} mod E` by `j` successive modular q-th powers.
pub fn frobenius_pow_mod(f: &UniPoly<PrimeField>, j: u32, e: &UniPoly<PrimeField>) -> Result<UniPoly<PrimeField>> {
    match e.degree() {
        None | Some(0) => return Err(Error::InvalidPolynomial("modulus must have positive degree")),
        _ => {}
    }
    let q = BigUint::from(f.field().modulus());
    let modulus = PolyModulus::new(e)?;
    let mut acc = modulus.reduce(f)?;
    for _ in 0..j {
        acc = modulus.pow(&acc, &q)?;
    }
    Ok(acc)
}
