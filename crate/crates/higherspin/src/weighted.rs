//! The function algebra every operator acts on: Clifford-valued polynomials
//! in the vector variables x, u and a passive variable v, extended by integer
//! powers of `r = |x|`. Closed under all differentiations and multiplications
//! used by the operator calculus.
//!
//! Canonical form. Terms are grouped by the parity of the weight t; each
//! parity class is collapsed to its minimal weight (multiplying polynomial
//! parts by `|x|^2 = Σ x_i^2` as needed) and then the maximal power of
//! `Σ x_i^2` is factored out of the class polynomial and absorbed into the
//! weight. Equality of weighted functions is equality of canonical forms;
//! `1` and `|x|` are linearly independent over rational functions, so the two
//! parity classes never interact.

use std::collections::BTreeMap;
use std::fmt;

use crate::clifford::{parse_blade, split_signed_terms, Blade, Multivector, ToCoeff};
use crate::error::{Error, Result};
use crate::scalar::{rat_from_str, rat_to_string, Coeff, Rat};

/// Variable slot: x (weighted, differentiable), u (differentiable), v (passive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    U(usize),
    V(usize),
}

/// Exponent vector over the three variable blocks, `x1..xm u1..um v1..vm`,
/// packed five bits per slot into one word with `x1` most significant, so
/// plain integer comparison is lexicographic order. Exponents are capped at
/// 31 per variable and dimensions at 8 — generous for desk-scale sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    m: u32,
    packed: u128,
}

const SLOT_BITS: u32 = 5;
const SLOT_MASK: u128 = (1 << SLOT_BITS) - 1;
const MAX_SLOTS: u32 = 128 / SLOT_BITS; // 25

impl MultiIndex {
    pub fn empty(m: u32) -> Self {
        assert!(3 * m <= MAX_SLOTS, "dimension too large for packed index");
        MultiIndex { m, packed: 0 }
    }

    fn slot(&self, var: Var) -> u32 {
        let m = self.m as usize;
        let s = match var {
            Var::X(i) => {
                assert!(i >= 1 && i <= m, "x axis out of range");
                i - 1
            }
            Var::U(i) => {
                assert!(i >= 1 && i <= m, "u axis out of range");
                m + i - 1
            }
            Var::V(i) => {
                assert!(i >= 1 && i <= m, "v axis out of range");
                2 * m + i - 1
            }
        };
        s as u32
    }

    fn shift(&self, slot: u32) -> u32 {
        (MAX_SLOTS - 1 - slot) * SLOT_BITS
    }

    pub fn exponent(&self, var: Var) -> u32 {
        let sh = self.shift(self.slot(var));
        ((self.packed >> sh) & SLOT_MASK) as u32
    }

    pub fn with_exponent(&self, var: Var, e: u32) -> Self {
        assert!(u128::from(e) <= SLOT_MASK, "exponent too large");
        let sh = self.shift(self.slot(var));
        let cleared = self.packed & !(SLOT_MASK << sh);
        MultiIndex {
            m: self.m,
            packed: cleared | (u128::from(e) << sh),
        }
    }

    pub fn bump(&self, var: Var, delta: i32) -> Self {
        let e = self.exponent(var) as i32 + delta;
        assert!(e >= 0, "negative exponent");
        self.with_exponent(var, e as u32)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let mut out = self.packed;
        let mut rest = other.packed;
        let mut slot = MAX_SLOTS;
        while rest != 0 {
            slot -= 1;
            let sh = (MAX_SLOTS - 1 - slot) * SLOT_BITS;
            let add = rest & (SLOT_MASK << sh);
            if add != 0 {
                let cur = (out >> sh) & SLOT_MASK;
                let new = cur + (add >> sh);
                assert!(new <= SLOT_MASK, "exponent overflow");
                out = (out & !(SLOT_MASK << sh)) | (new << sh);
                rest &= !(SLOT_MASK << sh);
            }
            if slot == 0 {
                break;
            }
        }
        MultiIndex {
            m: self.m,
            packed: out,
        }
    }

    fn block_degree(&self, start: u32, len: u32) -> u32 {
        let mut sum = 0;
        for s in start..start + len {
            let sh = (MAX_SLOTS - 1 - s) * SLOT_BITS;
            sum += ((self.packed >> sh) & SLOT_MASK) as u32;
        }
        sum
    }

    pub fn degree_x(&self) -> u32 {
        self.block_degree(0, self.m)
    }

    pub fn degree_u(&self) -> u32 {
        self.block_degree(self.m, self.m)
    }

    pub fn degree_v(&self) -> u32 {
        self.block_degree(2 * self.m, self.m)
    }

    /// Restrict to one block, zeroing the others.
    pub fn only_block(&self, block: fn(usize) -> Var) -> Self {
        let mut out = MultiIndex::empty(self.m);
        for i in 1..=self.m as usize {
            let v = block(i);
            out = out.with_exponent(v, self.exponent(v));
        }
        out
    }

    /// The u-block exponents as a standalone key.
    pub fn u_key(&self) -> Vec<u8> {
        (1..=self.m as usize)
            .map(|i| self.exponent(Var::U(i)) as u8)
            .collect()
    }
}

/// Key of one stored term: weight plus exponent vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub weight: i32,
    pub index: MultiIndex,
}

/// A finite sum of terms `p(x, u, v) · |x|^t` with Clifford coefficients,
/// stored as key-sorted term pairs.
///
/// Values are kept in a key-merged raw form; the canonical form (parity
/// classes collapsed to one weight, maximal `Σ x_i^2` powers absorbed) is
/// computed at the comparison boundaries: equality, zero tests, rendering,
/// and polynomial conversion. Arithmetic therefore stays cheap on long
/// operator chains while equality semantics remain those of canonical forms.
#[derive(Debug, Clone)]
pub struct WeightedFunction<C: Coeff = Rat> {
    dim: u32,
    terms: Vec<(TermKey, Multivector<C>)>,
}

impl<C: Coeff> PartialEq for WeightedFunction<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        match (self.is_canonical(), other.is_canonical()) {
            (true, true) => self.terms == other.terms,
            (true, false) => self.terms == other.canonical().terms,
            (false, true) => self.canonical().terms == other.terms,
            (false, false) => self.canonical().terms == other.canonical().terms,
        }
    }
}

impl<C: Coeff> Eq for WeightedFunction<C> {}

impl<C: Coeff> WeightedFunction<C> {
    pub fn zero(m: u32) -> Self {
        WeightedFunction {
            dim: m,
            terms: Vec::new(),
        }
    }

    pub fn one(m: u32) -> Self {
        WeightedFunction::constant(Multivector::one(m))
    }

    /// A constant Clifford value.
    pub fn constant(c: Multivector<C>) -> Self {
        WeightedFunction::term(c.dim(), 0, MultiIndex::empty(c.dim()), c)
    }

    /// A single term `coeff · monomial · |x|^weight`.
    pub fn term(m: u32, weight: i32, index: MultiIndex, coeff: Multivector<C>) -> Self {
        assert_eq!(coeff.dim(), m, "coefficient dimension mismatch");
        let mut f = WeightedFunction::zero(m);
        f.accumulate(weight, index, coeff);
        f
    }

    /// The scalar monomial for one variable.
    pub fn variable(m: u32, var: Var) -> Self {
        WeightedFunction::term(m, 0, MultiIndex::empty(m).bump(var, 1), Multivector::one(m))
    }

    /// `|x|^t` as a weighted function.
    pub fn weight(m: u32, t: i32) -> Self {
        WeightedFunction::term(m, t, MultiIndex::empty(m), Multivector::one(m))
    }

    /// `Σ x_i^2` (equivalently `|x|^2` in polynomial form before
    /// canonicalization absorbs it).
    pub fn norm_sq(m: u32, block: fn(usize) -> Var) -> Self {
        let mut f = WeightedFunction::zero(m);
        for i in 1..=m as usize {
            f.accumulate(
                0,
                MultiIndex::empty(m).bump(block(i), 2),
                Multivector::one(m),
            );
        }
        f
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        if self.is_canonical() {
            return false;
        }
        self.canonical().terms.is_empty()
    }

    /// The canonical form: parity classes collapsed to their minimal weight
    /// with the maximal power of `Σ x_i^2` absorbed into the weight.
    pub fn canonical(&self) -> Self {
        let mut out = self.clone();
        out.canonicalize();
        out
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Multivector<C>)> {
        self.terms.iter().map(|(k, c)| (k, c))
    }

    fn accumulate(&mut self, weight: i32, index: MultiIndex, coeff: Multivector<C>) {
        if coeff.is_zero() {
            return;
        }
        let key = TermKey { weight, index };
        match self.terms.binary_search_by_key(&key, |(k, _)| *k) {
            Ok(i) => {
                let sum = self.terms[i].1.add(&coeff);
                if sum.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = sum;
                }
            }
            Err(i) => {
                self.terms.insert(i, (key, coeff));
            }
        }
    }

    /// Build from unsorted raw terms: sort, coalesce equal keys, drop zeros.
    fn from_raw(m: u32, mut raw: Vec<(TermKey, Multivector<C>)>) -> Self {
        raw.sort_unstable_by_key(|(k, _)| *k);
        let mut terms: Vec<(TermKey, Multivector<C>)> = Vec::with_capacity(raw.len());
        for (k, c) in raw {
            if c.is_zero() {
                continue;
            }
            match terms.last_mut() {
                Some((lk, lc)) if *lk == k => {
                    let sum = lc.add(&c);
                    if sum.is_zero() {
                        terms.pop();
                    } else {
                        *lc = sum;
                    }
                }
                _ => terms.push((k, c)),
            }
        }
        WeightedFunction { dim: m, terms }
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
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ka, ca) = &self.terms[i];
            let (kb, cb) = &other.terms[j];
            match ka.cmp(kb) {
                std::cmp::Ordering::Less => {
                    terms.push((*ka, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push((*kb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let sum = ca.add(cb);
                    if !sum.is_zero() {
                        terms.push((*ka, sum));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(self.terms[i..].iter().cloned());
        terms.extend(other.terms[j..].iter().cloned());
        Ok(WeightedFunction {
            dim: self.dim,
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        WeightedFunction {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    /// Ring product. Weights add; coefficient order is preserved (left factor
    /// coefficients multiply on the left).
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("dimension mismatch in mul")
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                raw.push((
                    TermKey {
                        weight: ka.weight + kb.weight,
                        index: ka.index.mul(&kb.index),
                    },
                    ca.geometric_product(cb),
                ));
            }
        }
        Ok(WeightedFunction::from_raw(self.dim, raw))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return WeightedFunction::zero(self.dim);
        }
        WeightedFunction {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, mv)| (*k, mv.scale(c))).collect(),
        }
    }

    /// Left Clifford multiplication by a constant.
    pub fn mul_clifford_left(&self, a: &Multivector<C>) -> Self {
        assert_eq!(a.dim(), self.dim);
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, c)| {
                let p = a.geometric_product(c);
                if p.is_zero() {
                    None
                } else {
                    Some((*k, p))
                }
            })
            .collect();
        WeightedFunction {
            dim: self.dim,
            terms,
        }
    }

    /// Right Clifford multiplication by a constant.
    pub fn mul_clifford_right(&self, a: &Multivector<C>) -> Self {
        assert_eq!(a.dim(), self.dim);
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, c)| {
                let p = c.geometric_product(a);
                if p.is_zero() {
                    None
                } else {
                    Some((*k, p))
                }
            })
            .collect();
        WeightedFunction {
            dim: self.dim,
            terms,
        }
    }

    /// Multiply by the coordinate monomial of `var`. Adding a fixed exponent
    /// shifts every key by the same amount, so order is preserved.
    pub fn mul_coord(&self, var: Var) -> Self {
        WeightedFunction {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    (
                        TermKey {
                            weight: k.weight,
                            index: k.index.bump(var, 1),
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Left multiplication by the vector variable `Σ var_i e_i`.
    pub fn mul_vector_left(&self, block: fn(usize) -> Var) -> Self {
        let mut raw = Vec::with_capacity(self.dim as usize * self.terms.len());
        for i in 1..=self.dim as usize {
            let e_i = Multivector::generator(self.dim, i);
            for (k, c) in &self.terms {
                raw.push((
                    TermKey {
                        weight: k.weight,
                        index: k.index.bump(block(i), 1),
                    },
                    e_i.geometric_product(c),
                ));
            }
        }
        WeightedFunction::from_raw(self.dim, raw)
    }

    /// Multiply by `|x|^dt` (shift every weight).
    pub fn mul_weight(&self, dt: i32) -> Self {
        WeightedFunction {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    (
                        TermKey {
                            weight: k.weight + dt,
                            index: k.index,
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Formal partial derivative in `x_i`, with the weighted Leibniz rule
    /// `∂_{x_i}(p · r^t) = (∂_{x_i} p) · r^t + t x_i p · r^{t-2}`.
    pub fn diff_x(&self, i: usize) -> Self {
        assert!(i >= 1 && i as u32 <= self.dim, "x axis out of range");
        let mut raw = Vec::with_capacity(2 * self.terms.len());
        for (k, c) in &self.terms {
            let e = k.index.exponent(Var::X(i));
            if e > 0 {
                raw.push((
                    TermKey {
                        weight: k.weight,
                        index: k.index.bump(Var::X(i), -1),
                    },
                    c.scale(&C::from_int(e as i64)),
                ));
            }
            if k.weight != 0 {
                raw.push((
                    TermKey {
                        weight: k.weight - 2,
                        index: k.index.bump(Var::X(i), 1),
                    },
                    c.scale(&C::from_int(k.weight as i64)),
                ));
            }
        }
        WeightedFunction::from_raw(self.dim, raw)
    }

    /// Formal partial derivative in `u_i`; never touches the weight.
    pub fn diff_u(&self, i: usize) -> Self {
        assert!(i >= 1 && i as u32 <= self.dim, "u axis out of range");
        // Lowering one exponent uniformly preserves key order.
        let terms: Vec<(TermKey, Multivector<C>)> = self
            .terms
            .iter()
            .filter_map(|(k, c)| {
                let e = k.index.exponent(Var::U(i));
                if e == 0 {
                    return None;
                }
                Some((
                    TermKey {
                        weight: k.weight,
                        index: k.index.bump(Var::U(i), -1),
                    },
                    c.scale(&C::from_int(e as i64)),
                ))
            })
            .collect();
        WeightedFunction {
            dim: self.dim,
            terms,
        }
    }

    /// True if the canonical form is a plain polynomial (all weights
    /// nonnegative and even, so every `|x|^t` de-absorbs into `(Σ x_i^2)^{t/2}`).
    pub fn is_polynomial(&self) -> bool {
        self.canonical()
            .terms
            .iter()
            .all(|(k, _)| k.weight >= 0 && k.weight % 2 == 0)
    }

    /// Rewrite with zero weights by expanding `|x|^{2j}` into `(Σ x_i^2)^j`.
    /// Errors when the function is genuinely weighted.
    pub fn to_polynomial(&self, operation: &'static str) -> Result<Self> {
        let canon = self.canonical();
        if !canon
            .terms
            .iter()
            .all(|(k, _)| k.weight >= 0 && k.weight % 2 == 0)
        {
            return Err(Error::WeightedInput { operation });
        }
        let mut out = WeightedFunction::zero(self.dim);
        let s = WeightedFunction::<C>::norm_sq_x_raw(self.dim);
        for (k, c) in &canon.terms {
            let mut part = WeightedFunction::zero(self.dim);
            part.accumulate(0, k.index, c.clone());
            for _ in 0..(k.weight / 2) {
                part = poly_mul_raw(&part, &s);
            }
            for (pk, pc) in part.terms {
                out.accumulate(pk.weight, pk.index, pc);
            }
        }
        // Deliberately NOT canonicalized: a plain-polynomial view keeps t = 0.
        Ok(out)
    }

    // Σ x_i^2 as raw (uncanonicalized) terms, used internally.
    fn norm_sq_x_raw(m: u32) -> Self {
        let mut f = WeightedFunction::zero(m);
        for i in 1..=m as usize {
            f.accumulate(
                0,
                MultiIndex::empty(m).bump(Var::X(i), 2),
                Multivector::one(m),
            );
        }
        f
    }

    /// Maximum x-degree over all terms.
    pub fn max_degree_x(&self) -> u32 {
        self.terms
            .iter()
            .map(|(k, _)| k.index.degree_x())
            .max()
            .unwrap_or(0)
    }

    pub fn max_degree_u(&self) -> u32 {
        self.terms
            .iter()
            .map(|(k, _)| k.index.degree_u())
            .max()
            .unwrap_or(0)
    }

    /// True when the stored representation already is the canonical form.
    fn is_canonical(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        // Per parity class: more than one weight present, or a class
        // polynomial divisible by Σ x_i^2, forces a collapse.
        let mut even = None;
        let mut odd = None;
        for (k, _) in &self.terms {
            let slot = if k.weight.rem_euclid(2) == 0 {
                &mut even
            } else {
                &mut odd
            };
            match slot {
                None => *slot = Some(k.weight),
                Some(w) if *w != k.weight => return false,
                _ => {}
            }
        }
        !self.any_class_divisible()
    }

    /// Canonicalize in place. See the struct docs for the normal form.
    fn canonicalize(&mut self) {
        if self.is_canonical() {
            return;
        }

        let old = std::mem::take(&mut self.terms);
        // Split by weight parity; within a class, bucket per weight.
        let mut classes: [BTreeMap<i32, BTreeMap<MultiIndex, Multivector<C>>>; 2] =
            [BTreeMap::new(), BTreeMap::new()];
        for (k, c) in old {
            let p = k.weight.rem_euclid(2) as usize;
            acc_poly(classes[p].entry(k.weight).or_default(), k.index, c);
        }
        for class in classes {
            if class.is_empty() {
                continue;
            }
            // Cascade from the highest weight down: fold each level into the
            // one below via one multiplication by Σ x_i^2, merging as we go
            // so cancellations happen level by level.
            let tmin = *class.keys().next().expect("nonempty class");
            let mut levels: Vec<(i32, BTreeMap<MultiIndex, Multivector<C>>)> =
                class.into_iter().collect();
            let mut poly: BTreeMap<MultiIndex, Multivector<C>> = BTreeMap::new();
            while let Some((t, level)) = levels.pop() {
                for (idx, c) in level {
                    acc_poly(&mut poly, idx, c);
                }
                if t > tmin {
                    poly = mul_by_norm_sq_x(poly, self.dim);
                    match levels.last_mut() {
                        Some((lt, lower)) if *lt == t - 2 => {
                            for (idx, c) in std::mem::take(&mut poly) {
                                acc_poly(lower, idx, c);
                            }
                            poly = BTreeMap::new();
                        }
                        _ => {
                            levels.push((t - 2, std::mem::take(&mut poly)));
                            poly = BTreeMap::new();
                        }
                    }
                    continue;
                }
            }
            // Extract the maximal power of Σ x_i^2.
            let mut t = tmin;
            while let Some(q) = div_by_norm_sq_x(&poly, self.dim) {
                poly = q;
                t += 2;
                if poly.is_empty() {
                    break;
                }
            }
            for (idx, c) in poly {
                self.accumulate(t, idx, c);
            }
        }
    }

    fn any_class_divisible(&self) -> bool {
        // Clone-free necessary conditions first: divisibility by Σ x_i^2
        // requires every term of the class to have x-degree >= 2 and the
        // lexicographically largest term to carry x_1^2.
        for parity in 0..2i32 {
            let mut empty = true;
            let mut plausible = true;
            let mut max_idx: Option<MultiIndex> = None;
            for (k, _) in &self.terms {
                if k.weight.rem_euclid(2) != parity {
                    continue;
                }
                empty = false;
                if k.index.degree_x() < 2 {
                    plausible = false;
                    break;
                }
                match max_idx {
                    Some(mi) if mi >= k.index => {}
                    _ => max_idx = Some(k.index),
                }
            }
            if empty || !plausible {
                continue;
            }
            if let Some(mi) = max_idx {
                if mi.exponent(Var::X(1)) < 2 {
                    continue;
                }
            }
            let class: BTreeMap<MultiIndex, Multivector<C>> = self
                .terms
                .iter()
                .filter(|(k, _)| k.weight.rem_euclid(2) == parity)
                .map(|(k, c)| (k.index, c.clone()))
                .collect();
            if div_by_norm_sq_x(&class, self.dim).is_some() {
                return true;
            }
        }
        false
    }

    /// Sum many functions with a single canonicalization pass at the end.
    pub fn sum(m: u32, parts: impl IntoIterator<Item = WeightedFunction<C>>) -> Self {
        let mut raw = Vec::new();
        for part in parts {
            assert_eq!(part.dim, m, "dimension mismatch in sum");
            raw.extend(part.terms);
        }
        WeightedFunction::from_raw(m, raw)
    }

    /// Convert coefficients (exact -> float, or identity).
    pub fn convert<D: Coeff>(&self) -> WeightedFunction<D>
    where
        C: ToCoeff<D>,
    {
        let mut out = WeightedFunction::zero(self.dim);
        for (k, c) in &self.terms {
            out.accumulate(k.weight, k.index, c.convert());
        }
        out
    }
}

fn acc_poly<C: Coeff>(
    poly: &mut BTreeMap<MultiIndex, Multivector<C>>,
    idx: MultiIndex,
    c: Multivector<C>,
) {
    if c.is_zero() {
        return;
    }
    match poly.get_mut(&idx) {
        Some(existing) => {
            let sum = existing.add(&c);
            if sum.is_zero() {
                poly.remove(&idx);
            } else {
                *existing = sum;
            }
        }
        None => {
            poly.insert(idx, c);
        }
    }
}

/// Multiply a plain polynomial (as a map) by `Σ x_i^2`.
fn mul_by_norm_sq_x<C: Coeff>(
    poly: BTreeMap<MultiIndex, Multivector<C>>,
    m: u32,
) -> BTreeMap<MultiIndex, Multivector<C>> {
    let mut out = BTreeMap::new();
    for (idx, c) in poly {
        for i in 1..=m as usize {
            acc_poly(&mut out, idx.bump(Var::X(i), 2), c.clone());
        }
    }
    out
}

/// Exact division of a polynomial by `Σ x_i^2`, or `None` when not divisible.
///
/// Univariate division in `x_1`: the divisor is monic of degree 2 in `x_1`,
/// so the remainder has `x_1`-degree at most 1 and divisibility is exactly
/// `remainder == 0`. Coefficients (Clifford values) ride along untouched.
fn div_by_norm_sq_x<C: Coeff>(
    poly: &BTreeMap<MultiIndex, Multivector<C>>,
    m: u32,
) -> Option<BTreeMap<MultiIndex, Multivector<C>>> {
    if poly.is_empty() {
        return None;
    }
    let mut rem = poly.clone();
    let mut quot: BTreeMap<MultiIndex, Multivector<C>> = BTreeMap::new();
    // `while let` would hold the borrow of `rem` across the mutations below.
    #[allow(clippy::while_let_loop)]
    loop {
        // Lexicographically largest term has the highest x_1 exponent.
        let Some((idx, _)) = rem.iter().next_back() else {
            break;
        };
        if idx.exponent(Var::X(1)) < 2 {
            return None; // nonzero remainder of x_1-degree <= 1 somewhere above
        }
        let idx = *idx;
        let c = rem.remove(&idx).unwrap();
        let qidx = idx.bump(Var::X(1), -2);
        // rem -= c * x^qidx * (Σ x_i^2) ; the x_1^2 component cancels the
        // removed term, the remaining components are lexicographically smaller.
        for i in 2..=m as usize {
            acc_poly(&mut rem, qidx.bump(Var::X(i), 2), c.neg());
        }
        acc_poly(&mut quot, qidx, c);
        if rem.is_empty() {
            return Some(quot);
        }
    }
    Some(quot)
}

/// Raw polynomial product without canonicalization (internal).
fn poly_mul_raw<C: Coeff>(a: &WeightedFunction<C>, b: &WeightedFunction<C>) -> WeightedFunction<C> {
    let mut out = WeightedFunction::zero(a.dim());
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            out.accumulate(
                ka.weight + kb.weight,
                ka.index.mul(&kb.index),
                ca.geometric_product(cb),
            );
        }
    }
    out
}

/// The Clifford-valued Fischer pairing `[f, g] = Σ_α α! conj(c_α) d_α` on
/// weight-free polynomials in u.
pub fn clifford_fischer_pair<C: Coeff>(
    f: &WeightedFunction<C>,
    g: &WeightedFunction<C>,
) -> Result<Multivector<C>> {
    let f = f.canonical();
    let g = g.canonical();
    check_u_only(&f)?;
    check_u_only(&g)?;
    let m = f.dim();
    let mut out = Multivector::zero(m);
    for (kf, cf) in &f.terms {
        if let Ok(i) = g.terms.binary_search_by_key(kf, |(k, _)| *k) {
            let cg = &g.terms[i].1;
            let fact = multiindex_factorial_u::<C>(&kf.index);
            out = out.add(&cf.conjugate().geometric_product(cg).scale(&fact));
        }
    }
    Ok(out)
}

/// The scalar Fischer pairing: substitute derivatives for the first slot,
/// conjugate coefficients, evaluate at u = 0, take the scalar part.
/// Symmetric and positive definite on real coefficients.
pub fn fischer_pair<C: Coeff>(f: &WeightedFunction<C>, g: &WeightedFunction<C>) -> Result<C> {
    Ok(clifford_fischer_pair(f, g)?.scalar_part())
}

/// Partial Fischer pairing in u: pair the u-slot of `kernel(u, v)` against
/// `p(u)`, leaving a polynomial in v. For a kernel term `g(u) · h(v)` and the
/// conventions here this produces `h-part(v) · Σ_α α! conj(coeff) p_α`.
pub fn fischer_pair_u<C: Coeff>(
    kernel: &WeightedFunction<C>,
    p: &WeightedFunction<C>,
) -> Result<WeightedFunction<C>> {
    let kernel = kernel.canonical();
    let p = p.canonical();
    check_uv_only(&kernel)?;
    check_u_only(&p)?;
    let m = kernel.dim();
    let mut out = WeightedFunction::zero(m);
    for (kk, ck) in &kernel.terms {
        let u_key = kk.index.u_key();
        let v_index = kk.index.only_block(Var::V);
        for (kp, cp) in &p.terms {
            if kp.index.u_key() == u_key {
                let fact = multiindex_factorial_u::<C>(&kp.index);
                let coeff = ck.conjugate().geometric_product(cp).scale(&fact);
                out.accumulate(0, v_index, coeff);
            }
        }
    }
    Ok(out)
}

fn check_u_only<C: Coeff>(f: &WeightedFunction<C>) -> Result<()> {
    for (k, _) in &f.terms {
        if k.weight != 0 || k.index.degree_x() != 0 || k.index.degree_v() != 0 {
            return Err(Error::MixedVariables {
                detail: "expected a weight-free polynomial in u".into(),
            });
        }
    }
    Ok(())
}

fn check_uv_only<C: Coeff>(f: &WeightedFunction<C>) -> Result<()> {
    for (k, _) in &f.terms {
        if k.weight != 0 || k.index.degree_x() != 0 {
            return Err(Error::MixedVariables {
                detail: "expected a weight-free polynomial in (u, v)".into(),
            });
        }
    }
    Ok(())
}

fn multiindex_factorial_u<C: Coeff>(idx: &MultiIndex) -> C {
    let mut out = C::one();
    for i in 1..=idx.m as usize {
        let e = idx.exponent(Var::U(i));
        for j in 2..=e as i64 {
            out = out.mul(&C::from_int(j));
        }
    }
    out
}

impl WeightedFunction<Rat> {
    /// Render in the exchange text format: a sum of
    /// `<rational> x1^a u2^b v3^c e[..] |x|^t` terms of the canonical form.
    pub fn render(&self) -> String {
        let canon = self.canonical();
        if canon.terms.is_empty() {
            return "0".to_string();
        }
        let mut pieces: Vec<(bool, String)> = Vec::new(); // (negative, magnitude text)
        for (k, mv) in &canon.terms {
            for (blade, coeff) in mv.terms() {
                let negative = crate::scalar::rat_is_negative(coeff);
                let mag = coeff.clone();
                let mag = if negative { -mag } else { mag };
                let mut s = rat_to_string(&mag);
                for i in 1..=canon.dim as usize {
                    push_var(&mut s, "x", i, k.index.exponent(Var::X(i)));
                }
                for i in 1..=canon.dim as usize {
                    push_var(&mut s, "u", i, k.index.exponent(Var::U(i)));
                }
                for i in 1..=canon.dim as usize {
                    push_var(&mut s, "v", i, k.index.exponent(Var::V(i)));
                }
                if blade.mask() != 0 {
                    s.push(' ');
                    s.push_str(&blade.to_string());
                }
                if k.weight != 0 {
                    s.push_str(&format!(" |x|^{}", k.weight));
                }
                pieces.push((negative, s));
            }
        }
        let mut out = String::new();
        for (i, (negative, s)) in pieces.iter().enumerate() {
            if i == 0 {
                if *negative {
                    out.push('-');
                }
            } else if *negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(s);
        }
        out
    }

    /// Parse the [`render`](Self::render) format. Bit-exact round trip on
    /// canonical forms.
    pub fn parse(s: &str, m: u32) -> Result<Self> {
        let mut out = WeightedFunction::zero(m);
        for (sign, term) in split_signed_terms(s)? {
            let mut coeff: Option<Rat> = None;
            let mut index = MultiIndex::empty(m);
            let mut blade = Blade::SCALAR;
            let mut weight = 0i32;
            for token in term.split_whitespace() {
                if coeff.is_none() {
                    let q = rat_from_str(token)
                        .ok_or_else(|| Error::Parse(format!("bad coefficient `{token}`")))?;
                    coeff = Some(q);
                    continue;
                }
                if let Some(rest) = token.strip_prefix("|x|^") {
                    weight = rest
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad weight `{token}`")))?;
                } else if token.starts_with("e[") {
                    blade = parse_blade(token, m)?;
                } else {
                    let (var, exp) = parse_var_token(token, m)?;
                    index = index.bump(var, exp as i32);
                }
            }
            let mut q = coeff.ok_or_else(|| Error::Parse("term without coefficient".into()))?;
            if sign < 0 {
                q = -q;
            }
            out.accumulate(weight, index, Multivector::blade(m, blade, q));
        }
        Ok(out)
    }
}

fn push_var(s: &mut String, name: &str, i: usize, e: u32) {
    if e == 0 {
        return;
    }
    s.push(' ');
    s.push_str(name);
    s.push_str(&i.to_string());
    if e > 1 {
        s.push('^');
        s.push_str(&e.to_string());
    }
}

fn parse_var_token(token: &str, m: u32) -> Result<(Var, u32)> {
    let (head, exp) = match token.split_once('^') {
        Some((h, e)) => {
            let exp: u32 = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{token}`")))?;
            (h, exp)
        }
        None => (token, 1),
    };
    let kind = head
        .chars()
        .next()
        .ok_or_else(|| Error::Parse("empty variable token".into()))?;
    let axis: usize = head[1..]
        .parse()
        .map_err(|_| Error::Parse(format!("bad variable token `{token}`")))?;
    if axis == 0 || axis as u32 > m {
        return Err(Error::AxisOutOfRange { axis, m });
    }
    let var = match kind {
        'x' => Var::X(axis),
        'u' => Var::U(axis),
        'v' => Var::V(axis),
        _ => return Err(Error::Parse(format!("unknown variable `{token}`"))),
    };
    Ok((var, exp))
}

impl fmt::Display for WeightedFunction<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::util::SplitMix;

    type Wf = WeightedFunction<Rat>;

    fn x(m: u32, i: usize) -> Wf {
        Wf::variable(m, Var::X(i))
    }
    fn u(m: u32, i: usize) -> Wf {
        Wf::variable(m, Var::U(i))
    }
    fn v(m: u32, i: usize) -> Wf {
        Wf::variable(m, Var::V(i))
    }
    fn e(m: u32, idx: &[usize]) -> Wf {
        Wf::constant(Multivector::blade(
            m,
            Blade::from_indices(idx, m).unwrap(),
            int(1),
        ))
    }

    #[test]
    fn absorption_rule() {
        // |x|^2 r^-2 canonicalizes to 1.
        let m = 3;
        let f = Wf::norm_sq(m, Var::X).mul(&Wf::weight(m, -2));
        assert_eq!(f, Wf::one(m));
    }

    #[test]
    fn product_of_weighted_terms() {
        // (x1 r^-2)(x1 r^-2) = x1^2 r^-4
        let m = 3;
        let a = x(m, 1).mul(&Wf::weight(m, -2));
        let prod = a.mul(&a);
        let expected = x(m, 1).mul(&x(m, 1)).mul(&Wf::weight(m, -4));
        assert_eq!(prod, expected);
    }

    #[test]
    fn noncommutative_coefficients_multiply_in_order() {
        // (e1 x1)(e2 x1) = e1 e2 x1^2
        let m = 3;
        let a = e(m, &[1]).mul(&x(m, 1));
        let b = e(m, &[2]).mul(&x(m, 1));
        let prod = a.mul(&b);
        let expected = e(m, &[1, 2]).mul(&x(m, 1)).mul(&x(m, 1));
        assert_eq!(prod, expected);
        // And the reverse order flips the sign.
        assert_eq!(b.mul(&a), expected.neg());
    }

    #[test]
    fn cross_term_divisibility_is_detected() {
        // x1^2 r^-2 + x2^2 r^-2 + x3^2 r^-2 = 1 at m = 3.
        let m = 3;
        let mut f = Wf::zero(m);
        for i in 1..=3 {
            f = f.add(&x(m, i).mul(&x(m, i)).mul(&Wf::weight(m, -2)));
        }
        assert_eq!(f, Wf::one(m));
    }

    #[test]
    fn weighted_derivative_examples() {
        let m = 3;
        // d/dx1 (x1^2 e1 r^-2) = 2 x1 e1 r^-2 - 2 x1^3 e1 r^-4
        let f = x(m, 1)
            .mul(&x(m, 1))
            .mul(&e(m, &[1]))
            .mul(&Wf::weight(m, -2));
        let df = f.diff_x(1);
        let expected = x(m, 1)
            .mul(&e(m, &[1]))
            .mul(&Wf::weight(m, -2))
            .scale(&int(2))
            .sub(
                &x(m, 1)
                    .mul(&x(m, 1))
                    .mul(&x(m, 1))
                    .mul(&e(m, &[1]))
                    .mul(&Wf::weight(m, -4))
                    .scale(&int(2)),
            );
        assert_eq!(df, expected);
        // d/dx1 (r^2) = 2 x1
        let r2 = Wf::weight(m, 2);
        assert_eq!(r2.diff_x(1), x(m, 1).scale(&int(2)));
        // d/du2 (u2 v1) = v1
        let g = u(m, 2).mul(&v(m, 1));
        assert_eq!(g.diff_u(2), v(m, 1));
    }

    #[test]
    fn canonicalization_is_idempotent_and_separates_parity() {
        let m = 3;
        // x1 r^-1 - x1 r^-3 |x|^2 = 0
        let f = x(m, 1)
            .mul(&Wf::weight(m, -1))
            .sub(&x(m, 1).mul(&Wf::weight(m, -3)).mul(&Wf::norm_sq(m, Var::X)));
        assert!(f.is_zero());
        // odd and even weights cannot cancel
        let g = Wf::weight(m, -1).sub(&Wf::weight(m, -2));
        assert!(!g.is_zero());
        assert_eq!(g.num_terms(), 2);
    }

    #[test]
    fn left_vector_multiplication() {
        let m = 2;
        // u * 1 = Σ u_i e_i
        let lifted = Wf::one(m).mul_vector_left(Var::U);
        let expected = u(m, 1).mul(&e(m, &[1])).add(&u(m, 2).mul(&e(m, &[2])));
        assert_eq!(lifted, expected);
        // x * e1 at m=2: -x1 + x2 e2 e1 = -x1 - x2 e[1,2]
        let lifted = e(m, &[1]).mul_vector_left(Var::X);
        let expected = x(m, 1).neg().add(&x(m, 2).mul(&e(m, &[1, 2])).neg());
        assert_eq!(lifted, expected);
    }

    #[test]
    fn u_cubed_is_minus_norm_sq_times_u() {
        let m = 3;
        let u3 = Wf::one(m)
            .mul_vector_left(Var::U)
            .mul_vector_left(Var::U)
            .mul_vector_left(Var::U);
        let expected = Wf::one(m)
            .mul_vector_left(Var::U)
            .mul(&Wf::norm_sq(m, Var::U))
            .neg();
        assert_eq!(u3, expected);
    }

    #[test]
    fn fischer_pair_examples() {
        let m = 3;
        assert_eq!(fischer_pair(&u(m, 1), &u(m, 1)).unwrap(), int(1));
        let u1u2 = u(m, 1).mul(&u(m, 2));
        assert_eq!(fischer_pair(&u1u2, &u1u2).unwrap(), int(1));
        let u1sq = u(m, 1).mul(&u(m, 1));
        assert_eq!(fischer_pair(&u1sq, &u1sq).unwrap(), int(2));
        let u1e1 = u(m, 1).mul(&e(m, &[1]));
        assert_eq!(fischer_pair(&u1e1, &u1e1).unwrap(), int(1));
        // mixed variables rejected
        assert!(fischer_pair(&x(m, 1), &x(m, 1)).is_err());
        assert!(fischer_pair(&u(m, 1).mul(&Wf::weight(m, 2)), &u(m, 1)).is_err());
    }

    #[test]
    fn fischer_gram_of_monomials_is_diagonal_with_factorials() {
        let m = 3;
        let monos = [
            u(m, 1).mul(&u(m, 1)),
            u(m, 1).mul(&u(m, 2)),
            u(m, 2).mul(&u(m, 2)),
            u(m, 2).mul(&u(m, 3)),
        ];
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                let p = fischer_pair(a, b).unwrap();
                if i == j {
                    assert!(p > int(0));
                } else {
                    assert_eq!(p, int(0));
                }
            }
        }
        assert_eq!(fischer_pair(&monos[0], &monos[0]).unwrap(), int(2));
        assert_eq!(fischer_pair(&monos[1], &monos[1]).unwrap(), int(1));
    }

    fn random_poly(rng: &mut SplitMix, m: u32, weighted: bool) -> Wf {
        let mut f = Wf::zero(m);
        for _ in 0..3 {
            let mut term = Wf::constant(Multivector::blade(
                m,
                Blade::from_mask((rng.next_u64() as u32) & ((1 << m) - 1)),
                int(rng.small_int(4)),
            ));
            for _ in 0..rng.below(3) {
                let var = match rng.below(3) {
                    0 => Var::X(1 + rng.below(m as u64) as usize),
                    1 => Var::U(1 + rng.below(m as u64) as usize),
                    _ => Var::V(1 + rng.below(m as u64) as usize),
                };
                term = term.mul(&Wf::variable(m, var));
            }
            if weighted && rng.below(2) == 0 {
                term = term.mul(&Wf::weight(m, rng.small_int(3) as i32 * 2 - 1));
            }
            f = f.add(&term);
        }
        f
    }

    #[test]
    fn mixed_partials_commute() {
        let mut rng = SplitMix::new(99);
        for _ in 0..40 {
            let f = random_poly(&mut rng, 3, true);
            for i in 1..=3 {
                for j in 1..=3 {
                    assert_eq!(f.diff_x(i).diff_x(j), f.diff_x(j).diff_x(i));
                    assert_eq!(f.diff_x(i).diff_u(j), f.diff_u(j).diff_x(i));
                }
            }
        }
    }

    #[test]
    fn leibniz_rule_respects_order() {
        let mut rng = SplitMix::new(100);
        for _ in 0..40 {
            let f = random_poly(&mut rng, 3, true);
            let g = random_poly(&mut rng, 3, true);
            let prod = f.mul(&g);
            for i in 1..=3 {
                let lhs = prod.diff_x(i);
                let rhs = f.diff_x(i).mul(&g).add(&f.mul(&g.diff_x(i)));
                assert_eq!(lhs, rhs);
                let lhs_u = prod.diff_u(i);
                let rhs_u = f.diff_u(i).mul(&g).add(&f.mul(&g.diff_u(i)));
                assert_eq!(lhs_u, rhs_u);
            }
        }
    }

    #[test]
    fn polynomial_detection_and_deabsorption() {
        let m = 3;
        let s = Wf::norm_sq(m, Var::X);
        // Canonical form of Σ x_i^2 stores it as |x|^2; it is still a polynomial.
        assert!(s.is_polynomial());
        let back = s.to_polynomial("test").unwrap();
        assert_eq!(back.terms.len(), 3);
        assert!(!Wf::weight(m, -2).is_polynomial());
        assert!(!Wf::weight(m, 1).is_polynomial());
        assert!(Wf::weight(m, -2).to_polynomial("test").is_err());
    }

    #[test]
    fn render_parse_round_trip() {
        let mut rng = SplitMix::new(77);
        for _ in 0..60 {
            let f = random_poly(&mut rng, 3, true);
            let s = f.render();
            let back = Wf::parse(&s, 3).unwrap();
            assert_eq!(f, back, "round trip failed for `{s}`");
            assert_eq!(back.render(), s);
        }
        assert_eq!(Wf::parse("0", 3).unwrap(), Wf::zero(3));
    }

    #[test]
    fn fischer_pair_u_reproduces_on_a_scalar_kernel() {
        // kernel u1 v1 + u2 v2 reproduces linear polys at m=2.
        let m = 2;
        let kernel = u(m, 1).mul(&v(m, 1)).add(&u(m, 2).mul(&v(m, 2)));
        let p = u(m, 1).scale(&int(3)).add(&u(m, 2).scale(&int(-2)));
        let reproduced = fischer_pair_u(&kernel, &p).unwrap();
        let expected = v(m, 1).scale(&int(3)).add(&v(m, 2).scale(&int(-2)));
        assert_eq!(reproduced, expected);
    }
}
