//! Exact integer convolution via number-theoretic transforms.
//!
//! Inputs are residues below some small modulus `q`; the convolution is
//! computed exactly over the integers (through one or three NTT primes)
//! and then reduced mod `q`.

const P1: u32 = 998_244_353;
const P2: u32 = 167_772_161;
const P3: u32 = 469_762_049;
const GENERATOR: u64 = 3;

/// Below this length schoolbook multiplication wins.
const SCHOOLBOOK_CUTOFF: usize = 48;

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Montgomery form modulo `P` with `R = 2^32`.
struct Mont<const P: u32>;

impl<const P: u32> Mont<P> {
    /// `-P^{-1} mod 2^32`, by Newton iteration.
    const NEG_INV: u32 = {
        let mut inv: u32 = 1;
        let mut i = 0;
        while i < 5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(P.wrapping_mul(inv)));
            i += 1;
        }
        inv.wrapping_neg()
    };

    #[inline(always)]
    fn reduce(t: u64) -> u32 {
        let m = (t as u32).wrapping_mul(Self::NEG_INV);
        let u = ((t + m as u64 * P as u64) >> 32) as u32;
        if u >= P {
            u - P
        } else {
            u
        }
    }

    /// `a * b / R mod P`.
    #[inline(always)]
    fn mul(a: u32, b: u32) -> u32 {
        Self::reduce(a as u64 * b as u64)
    }

    fn encode(a: u64) -> u32 {
        (((a % P as u64) << 32) % P as u64) as u32
    }
}

/// Twiddle table where entries `[h, 2h)` hold `w_{2h}^i` in Montgomery
/// form; a table built for size `n` serves every smaller power of two.
fn twiddles<const P: u32>(n: usize, invert: bool) -> std::rc::Rc<Vec<u32>> {
    use std::cell::RefCell;
    use std::collections::HashMap;
    use std::rc::Rc;
    type Tables = HashMap<(u32, bool), Rc<Vec<u32>>>;
    thread_local! {
        static TABLES: RefCell<Tables> = RefCell::new(HashMap::new());
    }
    TABLES.with(|cell| {
        let mut tables = cell.borrow_mut();
        if let Some(t) = tables.get(&(P, invert)) {
            if t.len() >= n {
                return Rc::clone(t);
            }
        }
        let p = P as u64;
        let mut table = vec![0u32; n.max(2)];
        let mut h = 1;
        while h < n {
            let mut w = pow_mod(GENERATOR, (p - 1) / (2 * h) as u64, p);
            if invert {
                w = pow_mod(w, p - 2, p);
            }
            let mut cur = 1u64;
            for slot in &mut table[h..2 * h] {
                *slot = Mont::<P>::encode(cur);
                cur = cur * w % p;
            }
            h *= 2;
        }
        let table = Rc::new(table);
        tables.insert((P, invert), Rc::clone(&table));
        table
    })
}

/// In-place cyclic transform; twiddles are in Montgomery form so data
/// stays in ordinary form.
fn transform<const P: u32>(a: &mut [u32], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let p = P as u64;

    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }

    let table = twiddles::<P>(n, invert);
    let mut half = 1;
    while half < n {
        let tw = &table[half..2 * half];
        for chunk in a.chunks_exact_mut(2 * half) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                let u = *x;
                let v = Mont::<P>::mul(*y, w);
                let s = u + v;
                *x = if s >= P { s - P } else { s };
                *y = if u >= v { u - v } else { u + P - v };
            }
        }
        half *= 2;
    }

    if invert {
        let n_inv = Mont::<P>::encode(pow_mod(n as u64, p - 2, p));
        for x in a.iter_mut() {
            *x = Mont::<P>::mul(*x, n_inv);
        }
    }
}

fn convolve_prime<const P: u32>(a: &[u32], b: &[u32]) -> Vec<u32> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut fa = vec![0u32; size];
    for (d, &s) in fa.iter_mut().zip(a) {
        *d = s % P;
    }
    transform::<P>(&mut fa, false);
    // pointwise products pick up a factor 1/R; fold R back in first
    let r_mod = Mont::<P>::encode(Mont::<P>::encode(1) as u64);
    if std::ptr::eq(a, b) {
        for x in fa.iter_mut() {
            *x = Mont::<P>::mul(Mont::<P>::mul(*x, r_mod), *x);
        }
    } else {
        for x in fa.iter_mut() {
            *x = Mont::<P>::mul(*x, r_mod);
        }
        let mut fb = vec![0u32; size];
        for (d, &s) in fb.iter_mut().zip(b) {
            *d = s % P;
        }
        transform::<P>(&mut fb, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = Mont::<P>::mul(*x, *y);
        }
    }
    transform::<P>(&mut fa, true);
    fa.truncate(out_len);
    fa
}

fn schoolbook(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let q64 = q as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    // Keep partial sums below 2^63 by reducing every so often.
    let budget = (u64::MAX / 2) / ((q64 - 1) * (q64 - 1)).max(1);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u64 * y as u64;
        }
        if (i as u64 + 1).is_multiple_of(budget) {
            for v in out.iter_mut() {
                *v %= q64;
            }
        }
    }
    out.into_iter().map(|v| (v % q64) as u32).collect()
}

/// Convolution of two residue vectors (entries `< q`), reduced mod `q`.
pub fn convolve_mod(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let shortest = a.len().min(b.len());
    if shortest < SCHOOLBOOK_CUTOFF {
        return schoolbook(a, b, q);
    }
    let bound = (q as u128 - 1) * (q as u128 - 1) * shortest as u128;
    if bound < P1 as u128 {
        let mut c = convolve_prime::<P1>(a, b);
        for x in c.iter_mut() {
            *x %= q;
        }
        return c;
    }
    // Three primes give ~2^89 of headroom, enough for any q < 2^31 at the
    // lengths this crate produces.
    let c1 = convolve_prime::<P1>(a, b);
    let c2 = convolve_prime::<P2>(a, b);
    let c3 = convolve_prime::<P3>(a, b);
    let (p1, p2, p3) = (P1 as u64, P2 as u64, P3 as u64);
    let inv_p1_mod_p2 = pow_mod(p1, p2 - 2, p2);
    let p1p2_mod_p3 = p1 * p2 % p3;
    let inv_p1p2_mod_p3 = pow_mod(p1p2_mod_p3, p3 - 2, p3);
    let q64 = q as u64;
    let p1_mod_q = p1 % q64;
    let p1p2_mod_q = p1 * p2 % q64;
    c1.iter()
        .zip(&c2)
        .zip(&c3)
        .map(|((&x1, &x2), &x3)| {
            let (x1, x2, x3) = (x1 as u64, x2 as u64, x3 as u64);
            let t2 = (x2 + p2 - x1 % p2) % p2 * inv_p1_mod_p2 % p2;
            let partial = (x1 + p1 * t2) % p3;
            let t3 = (x3 + p3 - partial) % p3 * inv_p1p2_mod_p3 % p3;
            ((x1 % q64 + p1_mod_q * t2 % q64 + p1p2_mod_q * t3 % q64) % q64) as u32
        })
        .collect()
}
