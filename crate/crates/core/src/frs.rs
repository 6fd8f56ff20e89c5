//! Code parameters, encoding, folding and interpolation-point selection.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::galois::{find_primitive_element, ExtField, Field, FieldElem, PrimeField};
use crate::poly::UniPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Interpolate on the first `m - s + 1` positions of every block.
    Standard,
    /// Interpolate on every position `0..n-1`, windows crossing blocks.
    /// Defined for `s = 2` only.
    Shifted,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::Shifted => "shifted",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Variant::Standard),
            "shifted" => Ok(Variant::Shifted),
            other => Err(Error::Parse(format!("unknown variant '{other}'"))),
        }
    }
}

/// `(n, N)` with `n = m * floor((q-1)/m)` and `N = n / m`.
pub fn derive_block_structure(q: u64, m: usize) -> Result<(usize, usize)> {
    let field = PrimeField::new(q)?;
    let len = field.modulus() as usize - 1;
    if m == 0 || m > len {
        return Err(Error::InvalidParams(format!("folding m = {m} must lie in 1..={len}")));
    }
    let n = m * (len / m);
    Ok((n, n / m))
}

/// A validated folded Reed-Solomon code together with decoder settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrsParams {
    field: PrimeField,
    gamma: FieldElem,
    pub m: usize,
    pub k: usize,
    pub s: usize,
    pub r: usize,
    pub variant: Variant,
    pub n: usize,
    pub big_n: usize,
}

impl FrsParams {
    pub fn new(q: u64, m: usize, k: usize, s: usize, r: usize, variant: Variant) -> Result<Self> {
        let field = PrimeField::new(q)?;
        let (n, big_n) = derive_block_structure(q, m)?;
        if k == 0 || k >= n {
            return Err(Error::InvalidParams(format!("k = {k} must lie in 1..{n}")));
        }
        if s == 0 || s > m {
            return Err(Error::InvalidParams(format!("s = {s} must lie in 1..={m}")));
        }
        if r == 0 {
            return Err(Error::InvalidParams("multiplicity r must be at least 1".into()));
        }
        if variant == Variant::Shifted && s != 2 {
            return Err(Error::UnsupportedVariant(format!("shifted interpolation needs s = 2, got {s}")));
        }
        Ok(Self { field, gamma: find_primitive_element(&field), m, k, s, r, variant, n, big_n })
    }

    pub fn q(&self) -> u64 {
        self.field.modulus() as u64
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn gamma(&self) -> FieldElem {
        self.gamma
    }

    pub fn ext_field(&self) -> ExtField {
        ExtField::new(self.field, self.gamma).expect("gamma is primitive by construction")
    }

    /// `(k + 1) / n`, unchanged by folding.
    pub fn rate(&self) -> f64 {
        (self.k + 1) as f64 / self.n as f64
    }

    /// Evaluation points `gamma^0, ..., gamma^{n-1}`.
    pub fn evaluation_points(&self) -> Vec<FieldElem> {
        let mut out = Vec::with_capacity(self.n);
        let mut g = self.field.one();
        for _ in 0..self.n {
            out.push(g);
            g = g * self.gamma;
        }
        out
    }

    /// Positions of the unfolded word used for interpolation.
    pub fn interpolation_indices(&self) -> Vec<usize> {
        match self.variant {
            Variant::Standard => (0..self.n).filter(|i| i % self.m <= self.m - self.s).collect(),
            Variant::Shifted => (0..self.n - 1).collect(),
        }
    }

    pub fn message(&self, coeffs: &[u64]) -> Result<UniPoly<PrimeField>> {
        let elems = coeffs.iter().map(|&c| self.field.try_elem(c)).collect::<Result<Vec<_>>>()?;
        let f = UniPoly::new(&self.field, elems);
        self.check_degree(&f)?;
        Ok(f)
    }

    fn check_degree(&self, f: &UniPoly<PrimeField>) -> Result<()> {
        assert_eq!(*f.field(), self.field, "cross-field arithmetic");
        match f.degree() {
            Some(d) if d > self.k => Err(Error::DegreeTooLarge { degree: d, k: self.k }),
            _ => Ok(()),
        }
    }

    /// Symbol `j` is `(f(gamma^{jm}), ..., f(gamma^{jm+m-1}))`.
    pub fn encode(&self, f: &UniPoly<PrimeField>) -> Result<Word> {
        self.check_degree(f)?;
        let values: Vec<FieldElem> = self.evaluation_points().iter().map(|x| f.evaluate(x)).collect();
        Ok(self.fold(&values))
    }

    pub fn fold(&self, y: &[FieldElem]) -> Word {
        assert_eq!(y.len(), self.n, "unfolded length must equal n");
        Word { m: self.m, symbols: y.chunks(self.m).map(|c| c.to_vec()).collect() }
    }

    pub fn unfold(&self, w: &Word) -> Result<Vec<FieldElem>> {
        self.check_shape(w)?;
        Ok(w.symbols.iter().flatten().copied().collect())
    }

    pub fn check_shape(&self, w: &Word) -> Result<()> {
        if w.symbols.len() != self.big_n {
            return Err(Error::ShapeMismatch(format!("expected {} symbols, got {}", self.big_n, w.symbols.len())));
        }
        if let Some(bad) = w.symbols.iter().find(|s| s.len() != self.m) {
            return Err(Error::ShapeMismatch(format!("expected tuples of width {}, got {}", self.m, bad.len())));
        }
        if let Some(x) = w.symbols.iter().flatten().find(|x| x.field() != self.field) {
            return Err(Error::ShapeMismatch(format!("symbol {x} is not over F_{}", self.q())));
        }
        Ok(())
    }

    /// Tuples `(gamma^i, y_i, ..., y_{i+s-1})` for every interpolation index.
    pub fn interpolation_points(&self, y: &[FieldElem]) -> Result<Vec<Vec<FieldElem>>> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: y.len() });
        }
        let xs = self.evaluation_points();
        Ok(self
            .interpolation_indices()
            .into_iter()
            .map(|i| {
                let mut p = Vec::with_capacity(self.s + 1);
                p.push(xs[i]);
                p.extend_from_slice(&y[i..i + self.s]);
                p
            })
            .collect())
    }

    /// Number of folded positions where two words agree.
    pub fn agreement(&self, a: &Word, b: &Word) -> usize {
        a.symbols.iter().zip(&b.symbols).filter(|(x, y)| x == y).count()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut symbols = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            symbols.push(self.parse_tuple(line.split_whitespace())?);
        }
        let w = Word { m: self.m, symbols };
        self.check_shape(&w)?;
        Ok(w)
    }

    /// Exactly `k + 1` whitespace-separated coefficients, constant term first.
    pub fn parse_message(&self, text: &str) -> Result<UniPoly<PrimeField>> {
        let coeffs = self.parse_tuple(text.split_whitespace())?;
        if coeffs.len() != self.k + 1 {
            return Err(Error::Parse(format!("expected {} coefficients, got {}", self.k + 1, coeffs.len())));
        }
        Ok(UniPoly::new(&self.field, coeffs))
    }

    /// The `k + 1` coefficients of `f` on one line.
    pub fn message_text(&self, f: &UniPoly<PrimeField>) -> String {
        (0..=self.k).map(|i| f.coeff(i).value().to_string()).collect::<Vec<_>>().join(" ")
    }

    pub(crate) fn parse_tuple<'a>(&self, parts: impl Iterator<Item = &'a str>) -> Result<Vec<FieldElem>> {
        parts
            .map(|tok| {
                let v: u64 = tok.parse().map_err(|_| Error::Parse(format!("'{tok}' is not an integer")))?;
                self.field.try_elem(v)
            })
            .collect()
    }
}

/// A length-`N` sequence of `m`-tuples: a codeword or a received word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    m: usize,
    pub symbols: Vec<Vec<FieldElem>>,
}

impl Word {
    pub fn new(m: usize, symbols: Vec<Vec<FieldElem>>) -> Self {
        Self { m, symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn width(&self) -> usize {
        self.m
    }

    /// Folded Hamming distance.
    pub fn distance(&self, other: &Word) -> usize {
        self.symbols.iter().zip(&other.symbols).filter(|(a, b)| a != b).count()
    }

    /// One symbol per line, values separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.symbols {
            let line: Vec<String> = s.iter().map(|x| x.value().to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Candidate symbol sets, one per folded position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoverySets {
    pub sets: Vec<Vec<Vec<FieldElem>>>,
    pub l: usize,
}

impl RecoverySets {
    pub fn new(params: &FrsParams, sets: Vec<Vec<Vec<FieldElem>>>, l: usize) -> Result<Self> {
        if sets.len() != params.big_n {
            return Err(Error::ShapeMismatch(format!("expected {} sets, got {}", params.big_n, sets.len())));
        }
        for (j, set) in sets.iter().enumerate() {
            if set.len() > l {
                return Err(Error::ShapeMismatch(format!("set {j} has {} > l = {l} entries", set.len())));
            }
            if let Some(bad) = set.iter().find(|t| t.len() != params.m) {
                return Err(Error::ShapeMismatch(format!("tuple of width {} in set {j}", bad.len())));
            }
        }
        let mut sets = sets;
        for set in &mut sets {
            set.sort();
            set.dedup();
        }
        Ok(Self { sets, l })
    }

    /// One position per line, tuples separated by `|`; `-` marks an empty set.
    pub fn parse(params: &FrsParams, text: &str, l: usize) -> Result<Self> {
        let mut sets = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            if line.trim() == "-" {
                sets.push(Vec::new());
                continue;
            }
            let set = line
                .split('|')
                .filter(|t| !t.trim().is_empty())
                .map(|t| params.parse_tuple(t.split_whitespace()))
                .collect::<Result<Vec<_>>>()?;
            sets.push(set);
        }
        Self::new(params, sets, l)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for set in &self.sets {
            let tuples: Vec<String> =
                set.iter().map(|t| t.iter().map(|x| x.value().to_string()).collect::<Vec<_>>().join(" ")).collect();
            if tuples.is_empty() {
                out.push('-');
            }
            out.push_str(&tuples.join(" | "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(w: &Word) -> Vec<Vec<u32>> {
        w.symbols.iter().map(|s| s.iter().map(|x| x.value()).collect()).collect()
    }

    #[test]
    fn block_structure_examples() {
        assert_eq!(derive_block_structure(5, 2).unwrap(), (4, 2));
        assert_eq!(derive_block_structure(13, 4).unwrap(), (12, 3));
        assert_eq!(derive_block_structure(31, 4).unwrap(), (28, 7));
        assert!(derive_block_structure(5, 5).is_err());
        assert!(derive_block_structure(5, 0).is_err());
    }

    #[test]
    fn param_validation() {
        assert!(FrsParams::new(13, 3, 2, 2, 3, Variant::Standard).is_ok());
        assert!(FrsParams::new(13, 3, 12, 2, 3, Variant::Standard).is_err());
        assert!(FrsParams::new(13, 3, 0, 2, 3, Variant::Standard).is_err());
        assert!(FrsParams::new(13, 3, 2, 4, 3, Variant::Standard).is_err());
        assert!(FrsParams::new(13, 3, 2, 2, 0, Variant::Standard).is_err());
        assert!(matches!(FrsParams::new(13, 3, 2, 3, 1, Variant::Shifted), Err(Error::UnsupportedVariant(_))));
        assert!(FrsParams::new(12, 3, 2, 2, 1, Variant::Standard).is_err());
    }

    #[test]
    fn encode_examples() {
        let p = FrsParams::new(5, 2, 1, 1, 1, Variant::Standard).unwrap();
        assert_eq!(p.gamma().value(), 2);
        let x = p.message(&[0, 1]).unwrap();
        assert_eq!(ints(&p.encode(&x).unwrap()), vec![vec![1, 2], vec![4, 3]]);
        let zero = p.message(&[]).unwrap();
        assert_eq!(ints(&p.encode(&zero).unwrap()), vec![vec![0, 0], vec![0, 0]]);
        let one = p.message(&[1]).unwrap();
        assert_eq!(ints(&p.encode(&one).unwrap()), vec![vec![1, 1], vec![1, 1]]);
        assert!(matches!(p.message(&[0, 0, 1]), Err(Error::DegreeTooLarge { degree: 2, k: 1 })));
        assert!(p.message(&[5]).is_err());
    }

    #[test]
    fn unfold_examples() {
        let p = FrsParams::new(5, 2, 1, 1, 1, Variant::Standard).unwrap();
        let w = p.parse_word("1 2\n4 3\n").unwrap();
        let y: Vec<u32> = p.unfold(&w).unwrap().iter().map(|x| x.value()).collect();
        assert_eq!(y, vec![1, 2, 4, 3]);
        assert_eq!(p.fold(&p.unfold(&w).unwrap()), w);
        assert!(p.parse_word("1 2 3\n4 3 1\n").is_err());
        assert!(p.parse_word("1 2\n").is_err());
        let bad = Word::new(2, vec![vec![p.field().one()], vec![p.field().one()]]);
        assert!(p.unfold(&bad).is_err());
    }

    #[test]
    fn interpolation_index_sets() {
        let p = FrsParams::new(13, 3, 2, 2, 3, Variant::Standard).unwrap();
        assert_eq!(p.interpolation_indices(), vec![0, 1, 3, 4, 6, 7, 9, 10]);
        let p = FrsParams::new(13, 3, 2, 2, 3, Variant::Shifted).unwrap();
        assert_eq!(p.interpolation_indices(), (0..=10).collect::<Vec<_>>());
        let p = FrsParams::new(5, 2, 1, 2, 1, Variant::Standard).unwrap();
        assert_eq!(p.interpolation_indices(), vec![0, 2]);
    }

    #[test]
    fn interpolation_points_shape() {
        let p = FrsParams::new(13, 4, 2, 3, 1, Variant::Standard).unwrap();
        let y: Vec<_> = (0..12).map(|i| p.field().elem(i)).collect();
        let pts = p.interpolation_points(&y).unwrap();
        assert_eq!(pts.len(), p.n * (p.m - p.s + 1) / p.m);
        assert_eq!(pts[1], vec![p.gamma(), p.field().elem(1), p.field().elem(2), p.field().elem(3)]);
        assert!(p.interpolation_points(&y[..5]).is_err());
    }

    #[test]
    fn unfolded_codeword_is_rs_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (q, m, k) in [(13u64, 3usize, 4usize), (31, 4, 10), (17, 5, 3)] {
            let p = FrsParams::new(q, m, k, 1, 1, Variant::Standard).unwrap();
            let f = UniPoly::new(p.field(), (0..=k).map(|_| p.field().random_element(&mut rng)).collect());
            let y = p.unfold(&p.encode(&f).unwrap()).unwrap();
            for (i, x) in p.evaluation_points().iter().enumerate() {
                assert_eq!(y[i], f.evaluate(x));
            }
        }
    }

    #[test]
    fn rate_is_fold_independent() {
        for m in [1usize, 2, 3, 4, 6] {
            let p = FrsParams::new(13, m, 5, 1, 1, Variant::Standard).unwrap();
            assert_eq!(p.rate(), 6.0 / p.n as f64);
        }
    }

    #[test]
    fn recovery_sets_roundtrip() {
        let p = FrsParams::new(13, 3, 1, 2, 1, Variant::Standard).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sets: Vec<Vec<Vec<FieldElem>>> = (0..p.big_n)
            .map(|_| {
                (0..rng.gen_range(0..=2))
                    .map(|_| (0..3).map(|_| p.field().random_element(&mut rng)).collect())
                    .collect()
            })
            .collect();
        let rs = RecoverySets::new(&p, sets, 2).unwrap();
        assert_eq!(RecoverySets::parse(&p, &rs.to_text(), 2).unwrap(), rs);
        assert!(RecoverySets::parse(&p, &rs.to_text(), 0).is_err() || rs.sets.iter().all(|s| s.is_empty()));
    }
}
