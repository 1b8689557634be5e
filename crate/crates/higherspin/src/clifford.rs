//! Exact arithmetic in the real Clifford algebra Cl_m with negative-definite
//! signature: generators satisfy `e_i e_j + e_j e_i = -2 δ_ij`, so every
//! vector squares to minus its squared length.
//!
//! Basis blades are canonically ordered products `e_A = e_{j1} … e_{jr}` with
//! strictly increasing indices, encoded as bitmasks. Products of blades are
//! computed by index merging: the sign is the parity of the transpositions
//! needed to sort the concatenated index list, times `(-1)` for every repeated
//! index that contracts via `e_i^2 = -1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{rat_from_str, rat_to_string, Coeff, Rat};

/// A canonical basis blade of Cl_m: a strictly increasing subset of `{1, …, m}`.
///
/// Bit `i - 1` of the mask set means generator `e_i` is present. The empty set
/// is the scalar unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(u32);

impl Blade {
    /// The scalar unit blade.
    pub const SCALAR: Blade = Blade(0);

    /// Blade from a raw bitmask.
    pub fn from_mask(mask: u32) -> Blade {
        Blade(mask)
    }

    /// The generator `e_i`, `1 <= i`.
    pub fn generator(i: usize) -> Blade {
        assert!((1..=32).contains(&i), "generator index out of range");
        Blade(1 << (i - 1))
    }

    /// Blade from strictly increasing indices `1 <= j1 < … < jr <= m`.
    pub fn from_indices(indices: &[usize], m: u32) -> Result<Blade> {
        let mut mask = 0u32;
        let mut prev = 0usize;
        for &j in indices {
            if j == 0 || j as u32 > m {
                return Err(Error::InvalidBlade {
                    m,
                    detail: format!("index {j} outside 1..={m}"),
                });
            }
            if j <= prev {
                return Err(Error::InvalidBlade {
                    m,
                    detail: format!("indices not strictly increasing at {j}"),
                });
            }
            prev = j;
            mask |= 1 << (j - 1);
        }
        Ok(Blade(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Number of generators in the blade.
    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// Indices of the generators, increasing.
    pub fn indices(self) -> Vec<usize> {
        (0..32)
            .filter(|i| self.0 & (1 << i) != 0)
            .map(|i| i + 1)
            .collect()
    }

    /// Sign of the reversion anti-automorphism on this blade: `(-1)^{r(r-1)/2}`.
    pub fn reversion_sign(self) -> i32 {
        let r = self.grade();
        if (r * r.wrapping_sub(1) / 2).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Sign of Clifford conjugation on this blade: `(-1)^{r(r+1)/2}`.
    pub fn conjugation_sign(self) -> i32 {
        let r = self.grade();
        if (r * (r + 1) / 2).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let idx: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "e[{}]", idx.join(","))
    }
}

/// Product of two basis blades: returns `(sign, blade)` with `sign ∈ {+1, -1}`.
///
/// The result mask is the symmetric difference; the sign counts the
/// transpositions that sort the concatenation `a ++ b`, plus one factor of
/// `-1` per contracted pair (`e_i^2 = -1`).
pub fn blade_product(a: Blade, b: Blade) -> (i32, Blade) {
    let (a, b) = (a.0, b.0);
    let mut swaps: u32 = 0;
    // For each generator of b, count the generators of a strictly above it
    // that it must move past to reach sorted position.
    let mut rest = b;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        let pos = low.trailing_zeros();
        swaps += (a >> (pos + 1)).count_ones();
        rest &= !low;
    }
    // Contractions: common generators square to -1.
    let contractions = (a & b).count_ones();
    let sign = if (swaps + contractions).is_multiple_of(2) {
        1
    } else {
        -1
    };
    (sign, Blade(a ^ b))
}

/// A sparse multivector of Cl_m: blade -> coefficient pairs sorted by blade,
/// with no stored zero coefficients. Immutable by convention: all operations
/// return new values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multivector<C: Coeff = Rat> {
    dim: u32,
    terms: Vec<(Blade, C)>,
}

impl<C: Coeff> Multivector<C> {
    /// The zero multivector of Cl_m.
    pub fn zero(m: u32) -> Self {
        assert!(m >= 1, "dimension must be at least 1");
        Multivector {
            dim: m,
            terms: Vec::new(),
        }
    }

    /// The scalar unit of Cl_m.
    pub fn one(m: u32) -> Self {
        Multivector::scalar(m, C::one())
    }

    /// A scalar multiple of the unit.
    pub fn scalar(m: u32, c: C) -> Self {
        let mut mv = Multivector::zero(m);
        mv.insert(Blade::SCALAR, c);
        mv
    }

    /// A single blade with coefficient.
    pub fn blade(m: u32, blade: Blade, c: C) -> Self {
        assert!(
            blade.mask() < (1u32 << m),
            "blade uses generators beyond dimension {m}"
        );
        let mut mv = Multivector::zero(m);
        mv.insert(blade, c);
        mv
    }

    /// The generator `e_i` as a multivector.
    pub fn generator(m: u32, i: usize) -> Self {
        assert!(i >= 1 && i as u32 <= m, "generator index out of range");
        Multivector::blade(m, Blade::generator(i), C::one())
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &C)> {
        self.terms.iter().map(|(b, c)| (b, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of a blade (zero when absent).
    pub fn coeff(&self, blade: Blade) -> C {
        match self.terms.binary_search_by_key(&blade, |(b, _)| *b) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => C::zero(),
        }
    }

    fn insert(&mut self, blade: Blade, c: C) {
        self.accumulate(blade, c);
    }

    fn accumulate(&mut self, blade: Blade, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&blade, |(b, _)| *b) {
            Ok(i) => {
                let sum = self.terms[i].1.add(&c);
                if sum.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = sum;
                }
            }
            Err(i) => {
                self.terms.insert(i, (blade, c));
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("dimension mismatch in add")
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        // Sorted merge.
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ba, ca) = &self.terms[i];
            let (bb, cb) = &other.terms[j];
            match ba.cmp(bb) {
                std::cmp::Ordering::Less => {
                    out.push((*ba, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*bb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let sum = ca.add(cb);
                    if !sum.is_zero() {
                        out.push((*ba, sum));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().cloned());
        Ok(Multivector {
            dim: self.dim,
            terms: out,
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Multivector {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (*b, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Multivector::zero(self.dim);
        }
        Multivector {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, x)| (*b, x.mul(c))).collect(),
        }
    }

    /// Geometric product. Bilinear and associative; blade-level products via
    /// [`blade_product`].
    pub fn geometric_product(&self, other: &Self) -> Self {
        self.checked_geometric_product(other)
            .expect("dimension mismatch in geometric product")
    }

    pub fn checked_geometric_product(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Multivector::zero(self.dim);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                let (sign, blade) = blade_product(*ba, *bb);
                let mut c = ca.mul(cb);
                if sign < 0 {
                    c = c.neg();
                }
                out.accumulate(blade, c);
            }
        }
        Ok(out)
    }

    /// Reversion: anti-automorphism multiplying a grade-r blade by
    /// `(-1)^{r(r-1)/2}`.
    pub fn reverse(&self) -> Self {
        Multivector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| {
                    let c = if b.reversion_sign() < 0 {
                        c.neg()
                    } else {
                        c.clone()
                    };
                    (*b, c)
                })
                .collect(),
        }
    }

    /// Clifford conjugation: reversion composed with grade involution;
    /// multiplies a grade-r blade by `(-1)^{r(r+1)/2}`. For every blade,
    /// `conjugate(e_A) * e_A = 1`.
    pub fn conjugate(&self) -> Self {
        Multivector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| {
                    let c = if b.conjugation_sign() < 0 {
                        c.neg()
                    } else {
                        c.clone()
                    };
                    (*b, c)
                })
                .collect(),
        }
    }

    /// Coefficient of the empty blade.
    pub fn scalar_part(&self) -> C {
        self.coeff(Blade::SCALAR)
    }

    /// Convert coefficients (exact -> float, or identity).
    pub fn convert<D: Coeff>(&self) -> Multivector<D>
    where
        C: ToCoeff<D>,
    {
        Multivector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter_map(|(b, c)| {
                    let d = c.to_coeff();
                    if d.is_zero() {
                        None
                    } else {
                        Some((*b, d))
                    }
                })
                .collect(),
        }
    }
}

/// Coefficient conversion used by the floating benchmark mode.
pub trait ToCoeff<D: Coeff> {
    fn to_coeff(&self) -> D;
}

impl ToCoeff<f64> for Rat {
    fn to_coeff(&self) -> f64 {
        Coeff::from_rational(self)
    }
}

impl ToCoeff<Rat> for Rat {
    fn to_coeff(&self) -> Rat {
        self.clone()
    }
}

impl Multivector<Rat> {
    /// Render as signed rational coefficients times `e[i,j,...]` tokens.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (blade, c)) in self.terms.iter().enumerate() {
            let mag = if i == 0 {
                if crate::scalar::rat_is_negative(c) {
                    out.push('-');
                }
                rat_to_string(c).trim_start_matches('-').to_string()
            } else {
                if crate::scalar::rat_is_negative(c) {
                    out.push_str(" - ");
                } else {
                    out.push_str(" + ");
                }
                rat_to_string(c).trim_start_matches('-').to_string()
            };
            out.push_str(&mag);
            if blade.mask() != 0 {
                out.push(' ');
                out.push_str(&blade.to_string());
            }
        }
        out
    }

    /// Parse the [`render`](Self::render) format.
    pub fn parse(s: &str, m: u32) -> Result<Self> {
        let mut out = Multivector::zero(m);
        for (sign, term) in split_signed_terms(s)? {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse("empty term".into()));
            }
            let (coeff_str, blade_str) = match term.find("e[") {
                Some(pos) => (&term[..pos], Some(&term[pos..])),
                None => (term, None),
            };
            let coeff_str = coeff_str.trim();
            let mut coeff = if coeff_str.is_empty() {
                crate::scalar::int(1)
            } else {
                rat_from_str(coeff_str)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient `{coeff_str}`")))?
            };
            if sign < 0 {
                coeff = -coeff;
            }
            let blade = match blade_str {
                Some(b) => parse_blade(b, m)?,
                None => Blade::SCALAR,
            };
            out.accumulate(blade, coeff);
        }
        Ok(out)
    }
}

/// Split `a + b - c` into signed chunks. `0` parses to no terms.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(i32, String)>> {
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut sign = 1;
    let mut chars = s.chars().peekable();
    // Leading sign.
    if let Some('-') = chars.peek() {
        sign = -1;
        chars.next();
    }
    let mut prev_space = false;
    while let Some(ch) = chars.next() {
        if prev_space && (ch == '+' || ch == '-') && chars.peek() == Some(&' ') {
            chars.next();
            terms.push((sign, current.trim().to_string()));
            current = String::new();
            sign = if ch == '-' { -1 } else { 1 };
            prev_space = false;
            continue;
        }
        prev_space = ch == ' ';
        current.push(ch);
    }
    if current.trim().is_empty() {
        return Err(Error::Parse("trailing operator".into()));
    }
    terms.push((sign, current.trim().to_string()));
    Ok(terms)
}

pub(crate) fn parse_blade(s: &str, m: u32) -> Result<Blade> {
    let s = s.trim();
    let inner = s
        .strip_prefix("e[")
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("bad blade token `{s}`")))?;
    let mut indices = Vec::new();
    for part in inner.split(',') {
        let i: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad blade index `{part}`")))?;
        indices.push(i);
    }
    Blade::from_indices(&indices, m)
}

/// A vector of R^m embedded in Cl_m; its geometric square is
/// `-(sum of squares)` times the scalar unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorValue {
    components: Vec<Rat>,
}

impl VectorValue {
    pub fn new(components: Vec<Rat>) -> Self {
        assert!(!components.is_empty(), "vector must have dimension >= 1");
        VectorValue { components }
    }

    /// Standard basis vector `e_i` of R^m.
    pub fn basis(m: u32, i: usize) -> Self {
        assert!(i >= 1 && i as u32 <= m);
        let mut components = vec![<Rat as Coeff>::zero(); m as usize];
        components[i - 1] = crate::scalar::int(1);
        VectorValue { components }
    }

    pub fn dim(&self) -> u32 {
        self.components.len() as u32
    }

    pub fn components(&self) -> &[Rat] {
        &self.components
    }

    pub fn to_multivector(&self) -> Multivector<Rat> {
        let m = self.dim();
        let mut mv = Multivector::zero(m);
        for (i, c) in self.components.iter().enumerate() {
            mv.accumulate(Blade::generator(i + 1), c.clone());
        }
        mv
    }

    pub fn norm_sq(&self) -> Rat {
        self.components.iter().map(|c| c * c).sum()
    }

    pub fn dot(&self, other: &VectorValue) -> Rat {
        assert_eq!(self.dim(), other.dim());
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// The sandwich `x u x = ||x||^2 u - 2 <u, x> x`, as a vector.
    ///
    /// Composing with the scaling `1 / ||x||^2` gives the reflection used by
    /// the inversion pullback `u -> x u x / ||x||^2`.
    pub fn reflect(&self, u: &VectorValue) -> VectorValue {
        assert_eq!(self.dim(), u.dim(), "dimension mismatch in reflect");
        let n2 = self.norm_sq();
        let two_dot = crate::scalar::int(2) * self.dot(u);
        let components = u
            .components
            .iter()
            .zip(&self.components)
            .map(|(ui, xi)| &n2 * ui - &two_dot * xi)
            .collect();
        VectorValue { components }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::util::SplitMix;

    fn mv(m: u32, entries: &[(i64, &[usize])]) -> Multivector {
        let mut out = Multivector::zero(m);
        for (c, idx) in entries {
            let b = Blade::from_indices(idx, m).unwrap();
            out = out.add(&Multivector::blade(m, b, int(*c)));
        }
        out
    }

    /// Independent sign oracle: multiply index sequences by explicit
    /// bubble-sorting, counting transpositions, contracting adjacent equal
    /// indices with `e_i^2 = -1`.
    fn naive_blade_product(a: &[usize], b: &[usize]) -> (i32, Vec<usize>) {
        let mut seq: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
        let mut sign = 1i32;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < seq.len() {
                if seq[i] > seq[i + 1] {
                    seq.swap(i, i + 1);
                    sign = -sign;
                    changed = true;
                } else if seq[i] == seq[i + 1] {
                    // e_i^2 = -1
                    seq.drain(i..=i + 1);
                    sign = -sign;
                    changed = true;
                } else {
                    i += 1;
                }
            }
            if !changed {
                return (sign, seq);
            }
        }
    }

    #[test]
    fn generator_squares_to_minus_one() {
        let m = 3;
        let e1: Multivector = Multivector::generator(m, 1);
        let sq = e1.geometric_product(&e1);
        assert_eq!(sq, Multivector::scalar(m, int(-1)));
    }

    #[test]
    fn generators_anticommute() {
        for m in 1..=6u32 {
            for i in 1..=m as usize {
                for j in 1..=m as usize {
                    let ei: Multivector = Multivector::generator(m, i);
                    let ej: Multivector = Multivector::generator(m, j);
                    let anti = ei.geometric_product(&ej).add(&ej.geometric_product(&ei));
                    let expected = if i == j {
                        Multivector::scalar(m, int(-2))
                    } else {
                        Multivector::zero(m)
                    };
                    assert_eq!(anti, expected, "m={m} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn bivector_squares_to_minus_one() {
        let m = 3;
        let e12 = mv(m, &[(1, &[1, 2])]);
        assert_eq!(e12.geometric_product(&e12), Multivector::scalar(m, int(-1)));
    }

    #[test]
    fn blade_product_matches_transposition_oracle() {
        // Exhaustive over all blade pairs for m <= 5.
        for m in 1..=5u32 {
            for a in 0..(1u32 << m) {
                for b in 0..(1u32 << m) {
                    let (sign, blade) = blade_product(Blade::from_mask(a), Blade::from_mask(b));
                    let (osign, oseq) = naive_blade_product(
                        &Blade::from_mask(a).indices(),
                        &Blade::from_mask(b).indices(),
                    );
                    let omask = oseq.iter().fold(0u32, |acc, i| acc | (1 << (i - 1)));
                    assert_eq!((sign, blade.mask()), (osign, omask), "a={a:b} b={b:b}");
                }
            }
        }
    }

    fn random_mv(rng: &mut SplitMix, m: u32) -> Multivector {
        let mut out = Multivector::zero(m);
        let nterms = (rng.next_u64() % 4) + 1;
        for _ in 0..nterms {
            let mask = (rng.next_u64() as u32) & ((1 << m) - 1);
            let coeff = rat(
                (rng.next_u64() % 11) as i64 - 5,
                1 + (rng.next_u64() % 4) as i64,
            );
            out = out.add(&Multivector::blade(m, Blade::from_mask(mask), coeff));
        }
        out
    }

    #[test]
    fn associativity_randomized() {
        let mut rng = SplitMix::new(0xC11F_F0AD ^ 7);
        for m in 3..=6u32 {
            for _ in 0..250 {
                let a = random_mv(&mut rng, m);
                let b = random_mv(&mut rng, m);
                let c = random_mv(&mut rng, m);
                let left = a.geometric_product(&b).geometric_product(&c);
                let right = a.geometric_product(&b.geometric_product(&c));
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn reversion_is_anti_automorphism_and_involution() {
        let mut rng = SplitMix::new(42);
        for _ in 0..200 {
            let a = random_mv(&mut rng, 4);
            let b = random_mv(&mut rng, 4);
            let lhs = a.geometric_product(&b).reverse();
            let rhs = b.reverse().geometric_product(&a.reverse());
            assert_eq!(lhs, rhs);
            assert_eq!(a.reverse().reverse(), a);
        }
    }

    #[test]
    fn conjugation_is_anti_automorphism_and_involution() {
        let mut rng = SplitMix::new(43);
        for _ in 0..200 {
            let a = random_mv(&mut rng, 4);
            let b = random_mv(&mut rng, 4);
            let lhs = a.geometric_product(&b).conjugate();
            let rhs = b.conjugate().geometric_product(&a.conjugate());
            assert_eq!(lhs, rhs);
            assert_eq!(a.conjugate().conjugate(), a);
        }
    }

    #[test]
    fn reversion_signs_on_blades() {
        let m = 4;
        let e12 = mv(m, &[(1, &[1, 2])]);
        assert_eq!(e12.reverse(), e12.neg());
        let e1 = mv(m, &[(1, &[1])]);
        assert_eq!(e1.reverse(), e1);
    }

    #[test]
    fn conjugation_signs_and_normalization() {
        let m = 4;
        let e1 = mv(m, &[(1, &[1])]);
        assert_eq!(e1.conjugate(), e1.neg());
        assert_eq!(Multivector::<Rat>::one(m).conjugate(), Multivector::one(m));
        // conjugate(e_A) * e_A has scalar part 1 for every blade.
        for mask in 0..(1u32 << m) {
            let ea = Multivector::blade(m, Blade::from_mask(mask), int(1));
            let prod = ea.conjugate().geometric_product(&ea);
            assert_eq!(prod.scalar_part(), int(1), "mask={mask:b}");
        }
    }

    #[test]
    fn scalar_part_examples() {
        let m = 3;
        assert_eq!(mv(m, &[(1, &[1, 2])]).scalar_part(), int(0));
        assert_eq!(mv(m, &[(3, &[]), (1, &[1])]).scalar_part(), int(3));
        let e1: Multivector = Multivector::generator(m, 1);
        assert_eq!(e1.geometric_product(&e1).scalar_part(), int(-1));
    }

    #[test]
    fn reflect_vector_examples() {
        // x = e1, u = e1 -> -e1
        let x = VectorValue::basis(3, 1);
        let u = VectorValue::basis(3, 1);
        let r = x.reflect(&u);
        assert_eq!(r.components()[0], int(-1));
        // x = e1, u = e2 -> e2 (perpendicular part fixed)
        let u2 = VectorValue::basis(3, 2);
        assert_eq!(x.reflect(&u2), u2);
        // x = (1,1,0), u = (1,0,0): ||x||^2 u - 2<u,x> x = (2,0,0) - 2(1,1,0) = (0,-2,0)
        let x = VectorValue::new(vec![int(1), int(1), int(0)]);
        let u = VectorValue::new(vec![int(1), int(0), int(0)]);
        let r = x.reflect(&u);
        assert_eq!(r.components(), &[int(0), int(-2), int(0)]);
    }

    #[test]
    fn reflect_agrees_with_geometric_product() {
        let mut rng = SplitMix::new(7);
        for _ in 0..50 {
            let m = 3 + (rng.next_u64() % 3) as u32;
            let comps = |rng: &mut SplitMix| {
                (0..m)
                    .map(|_| int((rng.next_u64() % 9) as i64 - 4))
                    .collect::<Vec<_>>()
            };
            let x = VectorValue::new(comps(&mut rng));
            let u = VectorValue::new(comps(&mut rng));
            let sandwich = x
                .to_multivector()
                .geometric_product(&u.to_multivector())
                .geometric_product(&x.to_multivector());
            assert_eq!(sandwich, x.reflect(&u).to_multivector());
        }
    }

    #[test]
    fn reflect_twice_scales_by_norm_fourth() {
        let x = VectorValue::new(vec![int(1), int(2), int(3)]);
        let u = VectorValue::new(vec![int(-1), int(0), int(5)]);
        let twice = x.reflect(&x.reflect(&u));
        let n4 = x.norm_sq() * x.norm_sq();
        let scaled: Vec<Rat> = u.components().iter().map(|c| c * &n4).collect();
        assert_eq!(twice.components(), &scaled[..]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Multivector::<Rat>::one(3);
        let b = Multivector::<Rat>::one(4);
        assert!(matches!(
            a.checked_geometric_product(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn render_parse_round_trip() {
        let m = 4;
        let a = mv(m, &[(3, &[]), (-1, &[1]), (2, &[1, 3]), (-5, &[2, 3, 4])]);
        let s = a.render();
        let back = Multivector::parse(&s, m).unwrap();
        assert_eq!(a, back);
        assert_eq!(back.render(), s);
        assert_eq!(Multivector::parse("0", m).unwrap(), Multivector::zero(m));
    }
}
