//! Degree selection and interpolation with multiplicities.

use crate::error::{Error, Result};
use crate::galois::{Field, FieldElem, PrimeField};
use crate::poly::{count_weighted_monomials, enumerate_weighted_monomials, Binomials, Monomial, MultiPoly};

fn binom(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Largest `x` with `x^e <= v`.
fn integer_root(v: u128, e: u32) -> u128 {
    let fits = |x: u128| x.checked_pow(e).is_some_and(|p| p <= v);
    let (mut lo, mut hi) = (0u128, 1u128);
    while fits(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Vanishing conditions per point: monomials of total degree `< r` in
/// `s + 1` variables, i.e. `C(r + s, s + 1)`.
pub fn conditions_per_point(r: usize, s: usize) -> u128 {
    binom((r + s) as u64, (s + 1) as u64)
}

/// The weighted-degree bound, before and after refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeChoice {
    /// `floor((k^s n0 r(r+1)...(r+s))^{1/(s+1)}) + 1`.
    pub formula: u64,
    /// Smallest `D >= 1` whose exact monomial count exceeds the number of
    /// linear conditions.
    pub refined: u64,
}

pub fn choose_degree(k: usize, n0: usize, r: usize, s: usize) -> DegreeChoice {
    assert!(k >= 1 && n0 >= 1 && r >= 1 && s >= 1);
    let mut prod = (k as u128).pow(s as u32) * n0 as u128;
    for j in 0..=s {
        prod *= (r + j) as u128;
    }
    let formula = integer_root(prod, s as u32 + 1) as u64 + 1;
    let need = n0 as u128 * conditions_per_point(r, s);
    let mut refined = formula;
    while refined > 1 && count_weighted_monomials(k as u32, refined - 1, s) > need {
        refined -= 1;
    }
    DegreeChoice { formula, refined }
}

#[derive(Clone, Debug)]
pub struct InterpolationProblem {
    pub field: PrimeField,
    pub points: Vec<Vec<FieldElem>>,
    pub r: usize,
    pub k: usize,
    pub s: usize,
    pub d: u64,
}

#[derive(Clone, Debug)]
pub struct Interpolant {
    pub q: MultiPoly,
    pub equations: usize,
    pub unknowns: usize,
}

/// Rejects bounds that would let `Q` reach degree `q` in a Y variable.
pub fn check_y_degree(d: u64, k: usize, q: u64) -> Result<()> {
    let max_y = d / k as u64;
    if max_y >= q {
        return Err(Error::ParameterRejected(format!("degree bound D = {d} allows Y-degree {max_y} >= q = {q}")));
    }
    Ok(())
}

/// Finds a nonzero `Q` of weighted degree at most `D` vanishing with
/// multiplicity `r` at every point.
pub fn interpolate(problem: &InterpolationProblem) -> Result<Interpolant> {
    let InterpolationProblem { field, points, r, k, s, d } = problem;
    let (r, k, s, d) = (*r, *k, *s, *d);
    let q = field.modulus() as u64;
    if let Some(p) = points.iter().find(|p| p.len() != s + 1) {
        return Err(Error::DimensionMismatch { expected: s + 1, got: p.len() });
    }
    check_y_degree(d, k, q)?;
    let monomials = enumerate_weighted_monomials(k as u32, d, s);
    let shifts = crate::poly::low_order_monomials(s + 1, r as u32);
    let equations = points.len() * shifts.len();
    let unknowns = monomials.len();
    if unknowns <= equations {
        return Err(Error::Infeasible(format!("{unknowns} unknowns do not exceed {equations} equations at D = {d}")));
    }

    let max_exp = monomials.iter().flat_map(|m| m.exponents.iter().copied()).max().unwrap_or(0);
    let binomials = Binomials::new(field, max_exp as usize);
    let mut matrix: Vec<Vec<u32>> = Vec::with_capacity(equations);
    for p in points {
        // powers[t][e] = p_t^e
        let powers: Vec<Vec<FieldElem>> = p
            .iter()
            .map(|&x| {
                let mut row = vec![field.one()];
                for e in 1..=max_exp as usize {
                    row.push(row[e - 1] * x);
                }
                row
            })
            .collect();
        for b in &shifts {
            let row = monomials
                .iter()
                .map(|mono| {
                    let mut acc = field.one();
                    for (t, (&e, &bt)) in mono.exponents.iter().zip(&b.exponents).enumerate() {
                        if e < bt {
                            return 0;
                        }
                        acc = acc * binomials.get(e, bt) * powers[t][(e - bt) as usize];
                    }
                    acc.value()
                })
                .collect();
            matrix.push(row);
        }
    }

    let kernel = kernel_vector(&mut matrix, unknowns, q as u32);
    let terms = monomials.into_iter().zip(kernel).filter(|(_, c)| *c != 0).map(|(m, c)| (m, field.elem(c as i64)));
    let poly = MultiPoly::from_terms(field, s, k as u32, terms)?;
    assert!(!poly.is_zero(), "kernel of a wide system cannot be trivial");
    Ok(Interpolant { q: poly, equations, unknowns })
}

/// Reduces to row echelon form with the first nonzero entry of each column
/// as pivot, then sets the first free variable to 1 and the others to 0.
fn kernel_vector(rows: &mut [Vec<u32>], cols: usize, q: u32) -> Vec<u32> {
    let q64 = q as u64;
    let inv = |a: u32| -> u32 {
        let (mut base, mut exp, mut acc) = (a as u64, q64 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % q64;
            }
            base = base * base % q64;
            exp >>= 1;
        }
        acc as u32
    };
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let scale = inv(rows[rank][c]) as u64;
        for v in rows[rank][c..].iter_mut() {
            *v = (*v as u64 * scale % q64) as u32;
        }
        let (head, tail) = rows.split_at_mut(rank);
        let (pivot_row, rest) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(rest.iter_mut()) {
            let factor = row[c] as u64;
            if factor == 0 {
                continue;
            }
            let neg = q64 - factor;
            for (v, &pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *v = ((*v as u64 + neg * pv as u64) % q64) as u32;
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("more columns than rows leaves a free column");
    let mut x = vec![0u32; cols];
    x[free] = 1;
    for (i, &pc) in pivots.iter().enumerate() {
        let v = rows[i][free];
        x[pc] = if v == 0 { 0 } else { q - v };
    }
    x
}

/// All shift monomials, exported for tests and the decoder.
pub fn shift_monomials(s: usize, r: usize) -> Vec<Monomial> {
    crate::poly::low_order_monomials(s + 1, r as u32)
}
