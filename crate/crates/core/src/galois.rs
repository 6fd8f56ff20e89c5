//! Arithmetic in a prime field `F_q` and in the extension
//! `F_q[X]/(X^{q-1} - gamma)` used by the root-finding step.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ntt;
use crate::poly::UniPoly;

/// Operations shared by the base field and its extension.
///
/// Polynomials are generic over this trait; the field value acts as the
/// context for element arithmetic.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Whether `a` was created in this field.
    fn owns(&self, a: &Self::Elem) -> bool;

    fn characteristic(&self) -> u32;
    /// Degree over the prime subfield.
    fn degree(&self) -> u32;
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Coefficient convolution; implementors override with a fast path.
    fn mul_coeffs(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        schoolbook(self, a, b)
    }

    /// Enumerates every element, for fields small enough to scan.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
}

pub(crate) fn schoolbook<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let prod = field.mul(x, y);
            out[i + j] = field.add(&out[i + j], &prod);
        }
    }
    out
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The prime field `F_q` for an odd prime `q < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || q.is_multiple_of(2) || q >= (1 << 31) || !is_prime(q) {
            return Err(Error::NotOddPrime(q));
        }
        Ok(Self { q: q as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    /// Element from an arbitrary integer, reduced mod q.
    pub fn elem(&self, v: i64) -> FieldElem {
        let value = v.rem_euclid(self.q as i64) as u32;
        FieldElem { value, field: *self }
    }

    /// Element from a value that must already be a residue.
    pub fn try_elem(&self, v: u64) -> Result<FieldElem> {
        if v >= self.q as u64 {
            return Err(Error::Parse(format!("{v} is not a residue mod {}", self.q)));
        }
        Ok(FieldElem { value: v as u32, field: *self })
    }

    #[inline]
    pub(crate) fn raw(&self, value: u32) -> FieldElem {
        debug_assert!(value < self.q);
        FieldElem { value, field: *self }
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        find_primitive_element(self)
    }

    pub fn is_primitive(&self, g: FieldElem) -> bool {
        if g.value == 0 {
            return false;
        }
        let order = self.q as u64 - 1;
        prime_factors(order).into_iter().all(|p| g.pow(order / p).value != 1)
    }
}

/// A residue mod q tagged with its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    value: u32,
    field: PrimeField,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElem {
    #[inline]
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let q = self.field.q as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64 % q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            exp >>= 1;
        }
        self.field.raw(acc as u32)
    }

    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.q as u64 - 2))
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.field, rhs.field, "cross-field arithmetic");
        let s = self.value + rhs.value;
        let q = self.field.q;
        self.field.raw(if s >= q { s - q } else { s })
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.field, rhs.field, "cross-field arithmetic");
        let q = self.field.q;
        let v = if self.value >= rhs.value { self.value - rhs.value } else { self.value + q - rhs.value };
        self.field.raw(v)
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.field, rhs.field, "cross-field arithmetic");
        let v = (self.value as u64 * rhs.value as u64) % self.field.q as u64;
        self.field.raw(v as u32)
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn neg(self) -> Self {
        let v = if self.value == 0 { 0 } else { self.field.q - self.value };
        self.field.raw(v)
    }
}

impl Field for PrimeField {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        self.raw(0)
    }
    fn one(&self) -> FieldElem {
        self.raw(1)
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        *a + *b
    }
    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        *a - *b
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        -*a
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        *a * *b
    }
    fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        a.inv()
    }
    fn is_zero(&self, a: &FieldElem) -> bool {
        a.value == 0
    }
    fn owns(&self, a: &FieldElem) -> bool {
        a.field == *self
    }
    fn characteristic(&self) -> u32 {
        self.q
    }
    fn degree(&self) -> u32 {
        1
    }
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        self.raw(rng.gen_range(0..self.q))
    }

    fn mul_coeffs(&self, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
        let av: Vec<u32> = a.iter().map(|x| x.value).collect();
        let bv: Vec<u32> = b.iter().map(|x| x.value).collect();
        ntt::convolve_mod(&av, &bv, self.q).into_iter().map(|v| self.raw(v)).collect()
    }

    fn elements(&self) -> Option<Vec<FieldElem>> {
        if self.q > 1 << 16 {
            return None;
        }
        Some((0..self.q).map(|v| self.raw(v)).collect())
    }
}

/// Smallest generator of `F_q^*`: the least `g` with `g^((q-1)/p) != 1`
/// for every prime `p | q-1`.
pub fn find_primitive_element(field: &PrimeField) -> FieldElem {
    let order = field.q as u64 - 1;
    let factors = prime_factors(order);
    (1..field.q)
        .map(|v| field.raw(v))
        .find(|g| factors.iter().all(|&p| g.pow(order / p).value != 1))
        .expect("a prime field always has a generator")
}

/// Irreducibility over the prime field via the gcd criterion:
/// `gcd(X^{q^d} - X, p) = 1` for all `d <= deg/2` and `X^{q^deg} = X mod p`.
pub fn is_irreducible(p: &UniPoly<PrimeField>) -> Result<bool> {
    let n = match p.degree() {
        None => return Err(Error::InvalidPolynomial("zero polynomial")),
        Some(0) => return Err(Error::InvalidPolynomial("constant polynomial")),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let field = *p.field();
    let q = field.modulus() as u64;
    let x = UniPoly::monomial(&field, field.one(), 1);
    let modulus = p.monic()?;
    let mut frob = x.clone();
    for d in 1..=n {
        frob = frob.pow_mod(q, &modulus)?;
        if d <= n / 2 {
            let g = (&frob - &x).gcd(&modulus)?;
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
    }
    Ok(frob == x.rem(&modulus)?)
}

/// `F_q[X]/(X^{q-1} - gamma)`, a field of size `q^{q-1}` whenever `gamma`
/// generates `F_q^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtField {
    base: PrimeField,
    gamma: u32,
}

/// Coefficients of a residue class, low degree first, always `q - 1` long.
pub type ExtRep = SmallVec<[u32; 32]>;

/// An element of [`ExtField`]: a polynomial of degree `< q-1` over `F_q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtFieldElem {
    rep: ExtRep,
    field: ExtField,
}

impl fmt::Debug for ExtFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_poly())
    }
}

impl ExtField {
    /// Builds the extension for a primitive `gamma`; primitivity is what
    /// makes `X^{q-1} - gamma` irreducible.
    pub fn new(base: PrimeField, gamma: FieldElem) -> Result<Self> {
        assert_eq!(gamma.field(), base, "cross-field arithmetic");
        if !base.is_primitive(gamma) {
            return Err(Error::NotPrimitive(gamma.value(), base.modulus()));
        }
        Ok(Self { base, gamma: gamma.value() })
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn gamma(&self) -> FieldElem {
        self.base.raw(self.gamma)
    }

    /// Number of base coefficients per element, `q - 1`.
    pub fn width(&self) -> usize {
        self.base.q as usize - 1
    }

    /// The defining modulus `X^{q-1} - gamma`.
    pub fn modulus(&self) -> UniPoly<PrimeField> {
        let mut coeffs = vec![self.base.zero(); self.width() + 1];
        coeffs[0] = -self.gamma();
        coeffs[self.width()] = self.base.one();
        UniPoly::new(&self.base, coeffs)
    }

    /// Residue class of an arbitrary base polynomial.
    pub fn from_poly(&self, p: &UniPoly<PrimeField>) -> ExtFieldElem {
        assert_eq!(*p.field(), self.base, "cross-field arithmetic");
        let w = self.width();
        let q = self.base.q as u64;
        let mut rep: ExtRep = smallvec::smallvec![0u32; w];
        // X^{w*t + j} = gamma^t X^j
        let mut twist = 1u64;
        for (t, chunk) in p.coeffs().chunks(w).enumerate() {
            if t > 0 {
                twist = twist * self.gamma as u64 % q;
            }
            for (j, c) in chunk.iter().enumerate() {
                rep[j] = ((rep[j] as u64 + c.value() as u64 * twist) % q) as u32;
            }
        }
        ExtFieldElem { rep, field: *self }
    }

    pub fn from_base(&self, c: FieldElem) -> ExtFieldElem {
        let mut rep: ExtRep = smallvec::smallvec![0u32; self.width()];
        rep[0] = c.value();
        ExtFieldElem { rep, field: *self }
    }

    #[cfg(test)]
    pub(crate) fn wrap_rep(&self, rep: ExtRep) -> ExtFieldElem {
        debug_assert_eq!(rep.len(), self.width());
        ExtFieldElem { rep, field: *self }
    }

    /// The Frobenius map `a -> a^q`, which on this representation is
    /// `a(X) -> a(gamma X)`.
    pub fn frobenius(&self, a: &ExtFieldElem) -> ExtFieldElem {
        let q = self.base.q as u64;
        let mut rep = a.rep.clone();
        let mut g = 1u64;
        for c in rep.iter_mut() {
            *c = (*c as u64 * g % q) as u32;
            g = g * self.gamma as u64 % q;
        }
        ExtFieldElem { rep, field: *self }
    }

    /// Inverse by the extended Euclidean algorithm against the modulus.
    pub fn invert(&self, a: &ExtFieldElem) -> Result<ExtFieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = a.to_poly().ext_gcd(&self.modulus())?;
        debug_assert_eq!(g.degree(), Some(0));
        // g is monic, so g = 1 and s*a = 1 mod E.
        Ok(self.from_poly(&s))
    }

    /// Reduces a raw product (length up to `2w - 1`) modulo `X^w - gamma`.
    fn fold(&self, prod: &[u64]) -> ExtRep {
        let w = self.width();
        let q = self.base.q as u64;
        let mut rep: ExtRep = smallvec::smallvec![0u32; w];
        for j in 0..w {
            let lo = prod.get(j).copied().unwrap_or(0) % q;
            let hi = prod.get(j + w).copied().unwrap_or(0) % q;
            rep[j] = ((lo + hi * self.gamma as u64) % q) as u32;
        }
        rep
    }
}

impl ExtFieldElem {
    pub fn field(&self) -> ExtField {
        self.field
    }

    pub fn rep(&self) -> &[u32] {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.iter().all(|&c| c == 0)
    }

    /// The canonical representative polynomial, of degree `< q-1`.
    pub fn to_poly(&self) -> UniPoly<PrimeField> {
        let base = self.field.base;
        UniPoly::new(&base, self.rep.iter().map(|&c| base.raw(c)).collect())
    }

    pub fn inv(&self) -> Result<Self> {
        self.field.invert(self)
    }
}

impl Add for &ExtFieldElem {
    type Output = ExtFieldElem;
    fn add(self, rhs: Self) -> ExtFieldElem {
        assert_eq!(self.field, rhs.field, "cross-field arithmetic");
        let q = self.field.base.q;
        let rep = self
            .rep
            .iter()
            .zip(&rhs.rep)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= q {
                    s - q
                } else {
                    s
                }
            })
            .collect();
        ExtFieldElem { rep, field: self.field }
    }
}

impl Sub for &ExtFieldElem {
    type Output = ExtFieldElem;
    fn sub(self, rhs: Self) -> ExtFieldElem {
        assert_eq!(self.field, rhs.field, "cross-field arithmetic");
        let q = self.field.base.q;
        let rep = self.rep.iter().zip(&rhs.rep).map(|(&a, &b)| if a >= b { a - b } else { a + q - b }).collect();
        ExtFieldElem { rep, field: self.field }
    }
}

impl Neg for &ExtFieldElem {
    type Output = ExtFieldElem;
    fn neg(self) -> ExtFieldElem {
        let q = self.field.base.q;
        let rep = self.rep.iter().map(|&a| if a == 0 { 0 } else { q - a }).collect();
        ExtFieldElem { rep, field: self.field }
    }
}

impl Mul for &ExtFieldElem {
    type Output = ExtFieldElem;
    fn mul(self, rhs: Self) -> ExtFieldElem {
        assert_eq!(self.field, rhs.field, "cross-field arithmetic");
        let w = self.field.width();
        let q = self.field.base.q as u64;
        let mut prod = [0u64; 64];
        let mut big;
        let buf: &mut [u64] = if 2 * w <= 64 {
            &mut prod[..2 * w]
        } else {
            big = vec![0u64; 2 * w];
            &mut big
        };
        // (q-1)^2 * w stays far below 2^64 for any q < 2^16; reduce per row
        // otherwise.
        let wide = q >= 1 << 16;
        for (i, &a) in self.rep.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as u64;
            for (j, &b) in rhs.rep.iter().enumerate() {
                buf[i + j] += a * b as u64;
                if wide {
                    buf[i + j] %= q;
                }
            }
        }
        ExtFieldElem { rep: self.field.fold(buf), field: self.field }
    }
}

impl Field for ExtField {
    type Elem = ExtFieldElem;

    fn zero(&self) -> ExtFieldElem {
        ExtFieldElem { rep: smallvec::smallvec![0u32; self.width()], field: *self }
    }
    fn one(&self) -> ExtFieldElem {
        self.from_base(self.base.one())
    }
    fn add(&self, a: &ExtFieldElem, b: &ExtFieldElem) -> ExtFieldElem {
        a + b
    }
    fn sub(&self, a: &ExtFieldElem, b: &ExtFieldElem) -> ExtFieldElem {
        a - b
    }
    fn neg(&self, a: &ExtFieldElem) -> ExtFieldElem {
        -a
    }
    fn mul(&self, a: &ExtFieldElem, b: &ExtFieldElem) -> ExtFieldElem {
        a * b
    }
    fn inv(&self, a: &ExtFieldElem) -> Result<ExtFieldElem> {
        self.invert(a)
    }
    fn is_zero(&self, a: &ExtFieldElem) -> bool {
        a.is_zero()
    }
    fn owns(&self, a: &ExtFieldElem) -> bool {
        a.field == *self
    }
    fn characteristic(&self) -> u32 {
        self.base.q
    }
    fn degree(&self) -> u32 {
        self.base.q - 1
    }
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtFieldElem {
        let rep = (0..self.width()).map(|_| rng.gen_range(0..self.base.q)).collect();
        ExtFieldElem { rep, field: *self }
    }

    /// Kronecker substitution: each element becomes a block of `2w - 1`
    /// base coefficients so that block products never overlap.
    fn mul_coeffs(&self, a: &[ExtFieldElem], b: &[ExtFieldElem]) -> Vec<ExtFieldElem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        if a.len().min(b.len()) < 4 {
            return schoolbook(self, a, b);
        }
        let w = self.width();
        let block = 2 * w - 1;
        let pack = |xs: &[ExtFieldElem]| {
            let mut flat = vec![0u32; xs.len() * block];
            for (i, x) in xs.iter().enumerate() {
                flat[i * block..i * block + w].copy_from_slice(&x.rep);
            }
            flat
        };
        let fa = pack(a);
        let fb = if std::ptr::eq(a, b) { None } else { Some(pack(b)) };
        let prod = ntt::convolve_mod(&fa, fb.as_deref().unwrap_or(&fa), self.base.q);
        let out_len = a.len() + b.len() - 1;
        (0..out_len)
            .map(|t| {
                let start = t * block;
                let end = (start + block).min(prod.len());
                let chunk: SmallVec<[u64; 64]> = prod[start..end].iter().map(|&v| v as u64).collect();
                ExtFieldElem { rep: self.fold(&chunk), field: *self }
            })
            .collect()
    }

    fn elements(&self) -> Option<Vec<ExtFieldElem>> {
        let size = (self.base.q as u64).checked_pow(self.width() as u32)?;
        if size > 1 << 16 {
            return None;
        }
        let q = self.base.q as u64;
        Some(
            (0..size)
                .map(|mut v| {
                    let rep = (0..self.width())
                        .map(|_| {
                            let c = (v % q) as u32;
                            v /= q;
                            c
                        })
                        .collect();
                    ExtFieldElem { rep, field: *self }
                })
                .collect(),
        )
    }
}
