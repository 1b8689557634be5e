//! Exact linear algebra over the integers and rationals: fraction-free
//! elimination for nullspaces, rank, and independent-subset selection. No
//! floating point, no tolerances.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rat;

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rational_rows(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            let mut lcm = BigInt::one();
            for x in row {
                lcm = lcm.lcm(x.denom());
            }
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.numer() * (&lcm / x.denom());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of fraction-free (Bareiss) elimination: echelon matrix plus the
/// pivot column of each pivot row.
pub struct Echelon {
    pub matrix: IntMatrix,
    pub pivot_cols: Vec<usize>,
}

/// Bareiss fraction-free elimination to row echelon form. All intermediate
/// entries stay integral; the divisions are exact.
pub fn bareiss_echelon(mut m: IntMatrix) -> Echelon {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivot_cols = Vec::new();
    let mut prev_pivot = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        // Find a pivot in column c at or below row r.
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let a = m[(p, j)].clone();
                let b = m[(r, j)].clone();
                m[(p, j)] = b;
                m[(r, j)] = a;
            }
        }
        let pivot = m[(r, c)].clone();
        for i in (r + 1)..rows {
            let factor = m[(i, c)].clone();
            for j in 0..cols {
                let val = &pivot * &m[(i, j)] - &factor * &m[(r, j)];
                debug_assert!((&val % &prev_pivot).is_zero());
                m[(i, j)] = val / &prev_pivot;
            }
        }
        prev_pivot = pivot;
        pivot_cols.push(c);
        r += 1;
    }
    Echelon {
        matrix: m,
        pivot_cols,
    }
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    bareiss_echelon(IntMatrix::from_rational_rows(rows))
        .pivot_cols
        .len()
}

/// Exact nullspace basis of the linear map given by `rows` (each row is one
/// equation). Returns one rational vector per free column; entries are scaled
/// to integers with content removed.
pub fn nullspace(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    if rows.is_empty() {
        // Whole space: standard basis.
        return (0..cols)
            .map(|j| {
                let mut v = vec![Rat::zero(); cols];
                v[j] = Rat::one();
                v
            })
            .collect();
    }
    assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
    let ech = bareiss_echelon(IntMatrix::from_rational_rows(rows));
    let m = &ech.matrix;
    let pivots = &ech.pivot_cols;
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_set.contains(c)).collect();

    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Rat::zero(); cols];
        v[fc] = Rat::one();
        // Back-substitute pivot rows from bottom up.
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = Rat::zero();
            #[allow(clippy::needless_range_loop)]
            for j in (pc + 1)..cols {
                let a = m.get(ri, j);
                if !a.is_zero() && !crate::scalar::Coeff::is_zero(&v[j]) {
                    acc += Rat::from_integer(a.clone()) * &v[j];
                }
            }
            let pivot = Rat::from_integer(m.get(ri, pc).clone());
            v[pc] = -acc / pivot;
        }
        basis.push(clear_denominators(v));
    }
    basis
}

/// Scale a rational vector to coprime integers (sign normalized to make the
/// first nonzero entry positive).
fn clear_denominators(v: Vec<Rat>) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for x in &v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return v;
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| {
            if x.is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            }
        })
        .unwrap_or_else(BigInt::one);
    ints.into_iter()
        .map(|x| Rat::from_integer(x / (&gcd * &sign)))
        .collect()
}

/// Indices of a maximal linearly independent subset of `rows`, chosen
/// greedily in order. Exact rational elimination.
pub fn independent_rows(rows: &[Vec<Rat>]) -> Vec<usize> {
    let mut kept: Vec<Vec<Rat>> = Vec::new(); // reduced forms
    let mut pivots: Vec<usize> = Vec::new(); // pivot column per kept row
    let mut indices = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for (kr, &pc) in kept.iter().zip(&pivots) {
            if !crate::scalar::Coeff::is_zero(&r[pc]) {
                let factor = &r[pc] / &kr[pc];
                for (x, k) in r.iter_mut().zip(kr.iter()) {
                    *x -= &factor * k;
                }
            }
        }
        if let Some(pc) = r.iter().position(|x| !crate::scalar::Coeff::is_zero(x)) {
            kept.push(r);
            pivots.push(pc);
            indices.push(i);
        }
    }
    indices
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rank_and_nullspace_small() {
        // x + y + z = 0 has a 2-dimensional nullspace.
        let rows = vec![v(&[1, 1, 1])];
        assert_eq!(rank(&rows), 1);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for b in &ns {
            let sum: Rat = b.iter().cloned().sum();
            assert!(crate::scalar::Coeff::is_zero(&sum));
        }
    }

    #[test]
    fn nullspace_of_full_rank_map_is_trivial() {
        let rows = vec![v(&[1, 0]), v(&[0, 1])];
        assert!(nullspace(&rows, 2).is_empty());
    }

    #[test]
    fn nullspace_with_rational_entries() {
        let rows = vec![vec![rat(1, 2), rat(1, 3)]];
        let ns = nullspace(&rows, 2);
        assert_eq!(ns.len(), 1);
        let b = &ns[0];
        let residual = rat(1, 2) * &b[0] + rat(1, 3) * &b[1];
        assert!(crate::scalar::Coeff::is_zero(&residual));
    }

    #[test]
    fn independent_rows_selects_greedily() {
        let rows = vec![v(&[1, 0, 0]), v(&[2, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 0])];
        assert_eq!(independent_rows(&rows), vec![0, 2]);
    }

    #[test]
    fn bareiss_stays_integral() {
        let rows = vec![v(&[2, 3, 5]), v(&[7, 11, 13]), v(&[17, 19, 23])];
        let ech = bareiss_echelon(IntMatrix::from_rational_rows(&rows));
        assert_eq!(ech.pivot_cols.len(), 3);
    }
}
