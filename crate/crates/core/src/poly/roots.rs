use num_bigint::BigUint;
use rand::Rng;

use super::{PolyModulus, UniPoly};
use crate::error::{Error, Result};
use crate::galois::Field;

fn field_size<F: Field>(field: &F) -> BigUint {
    BigUint::from(field.characteristic()).pow(field.degree())
}

/// `Y^{|F|} mod r`, through `degree` successive q-th powers.
fn frobenius_of_y<F: Field>(modulus: &PolyModulus<F>) -> Result<UniPoly<F>> {
    let field = modulus.modulus().field();
    let q = BigUint::from(field.characteristic());
    let mut h = modulus.reduce(&UniPoly::x(field))?;
    for _ in 0..field.degree() {
        h = modulus.pow(&h, &q)?;
    }
    Ok(h)
}

/// Distinct roots of `r` in its coefficient field.
///
/// `gcd(r, Y^{|F|} - Y)` isolates the product of distinct linear factors,
/// which is then split by random `(Y + d)^{(|F|-1)/2} - 1` gcds.
pub fn roots_in_field<F: Field, R: Rng + ?Sized>(r: &UniPoly<F>, rng: &mut R) -> Result<Vec<F::Elem>> {
    let deg = r.degree().ok_or(Error::InvalidPolynomial("zero polynomial has every element as a root"))?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let field = r.field().clone();
    let r = r.monic()?;
    let modulus = PolyModulus::new(&r)?;
    let h = frobenius_of_y(&modulus)?;
    let linear_part = r.gcd(&(&h - &UniPoly::x(&field)))?;
    let half = (field_size(&field) - 1u32) >> 1;
    let mut roots = Vec::new();
    let mut stack = vec![linear_part];
    while let Some(g) = stack.pop() {
        match g.degree() {
            None | Some(0) => {}
            Some(1) => roots.push(field.neg(&g.coeff(0))),
            Some(_) => stack.extend(split(&g, &half, rng)?),
        }
    }
    Ok(roots)
}

/// One nontrivial factorization of a squarefree product of linear factors.
fn split<F: Field, R: Rng + ?Sized>(g: &UniPoly<F>, half: &BigUint, rng: &mut R) -> Result<[UniPoly<F>; 2]> {
    let field = g.field().clone();
    let modulus = PolyModulus::new(g)?;
    let one = UniPoly::one(&field);
    loop {
        let shift = UniPoly::new(&field, vec![field.random_element(rng), field.one()]);
        let w = modulus.pow(&shift, half)?;
        let d = g.gcd(&(&w - &one))?;
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && Some(dd) < g.degree() {
            let rest = g.div_rem(&d)?.0;
            return Ok([d, rest]);
        }
    }
}

/// Roots by evaluating at every element; only for enumerable fields.
pub fn roots_exhaustive<F: Field>(r: &UniPoly<F>) -> Result<Vec<F::Elem>> {
    if r.is_zero() {
        return Err(Error::InvalidPolynomial("zero polynomial has every element as a root"));
    }
    let elems =
        r.field().elements().ok_or_else(|| Error::InstanceTooLarge("field has more than 2^16 elements".into()))?;
    let field = r.field();
    Ok(elems.into_iter().filter(|a| field.is_zero(&r.evaluate(a))).collect())
}
