//! Explicit bases and projections for the polynomial spaces in the dummy
//! variable u: the full space P_k, harmonics H_k (kernel of the u-Laplacian),
//! monogenics M_k (kernel of the u-Dirac operator), the Almansi–Fischer
//! decomposition `H_k = M_k ⊕ u M_{k-1}`, and reproducing kernels.
//!
//! Space construction is exact: harmonic bases come from the nullspace of the
//! Laplacian matrix via fraction-free elimination, and kernels from exact
//! Gram–Schmidt (orthogonal basis with rational norms; no square roots).

use serde::Serialize;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Coeff, Rat};
use crate::weighted::{MultiIndex, Var, WeightedFunction};

type Wf = WeightedFunction<Rat>;

/// Dimension and homogeneity degree for a space construction.
///
/// Basis constructions accept any `m >= 1`; the structural constants of the
/// operator builders carry their own nonvanishing guards, checked through
/// [`SpaceParams::guard`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SpaceParams {
    pub m: u32,
    pub k: u32,
}

impl SpaceParams {
    pub fn new(m: u32, k: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParams {
                detail: "dimension m must be at least 1".into(),
            });
        }
        Ok(SpaceParams { m, k })
    }

    /// Check that a named structural constant is nonzero for these parameters.
    pub fn guard(&self, c: GuardConst) -> Result<i64> {
        let v = c.value(self.m, self.k);
        if v == 0 {
            Err(Error::VanishingDenominator {
                constant: c.name(),
                m: self.m,
                k: self.k,
            })
        } else {
            Ok(v)
        }
    }

    /// First failing guard among `cs`, if any.
    pub fn guard_all(&self, cs: &[GuardConst]) -> Result<()> {
        for &c in cs {
            self.guard(c)?;
        }
        Ok(())
    }
}

/// The named structural constants appearing in denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardConst {
    /// m + 2k
    MPlus2k,
    /// m + 2k - 2
    MPlus2kMinus2,
    /// m + 2k - 4
    MPlus2kMinus4,
    /// m + 6k - 10
    MPlus6kMinus10,
    /// m - 2 (order-four reduction at k = 0)
    MMinus2,
    /// m - 4 (order-four reduction at k = 0)
    MMinus4,
}

impl GuardConst {
    pub fn value(self, m: u32, k: u32) -> i64 {
        let (m, k) = (m as i64, k as i64);
        match self {
            GuardConst::MPlus2k => m + 2 * k,
            GuardConst::MPlus2kMinus2 => m + 2 * k - 2,
            GuardConst::MPlus2kMinus4 => m + 2 * k - 4,
            GuardConst::MPlus6kMinus10 => m + 6 * k - 10,
            GuardConst::MMinus2 => m - 2,
            GuardConst::MMinus4 => m - 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GuardConst::MPlus2k => "m+2k",
            GuardConst::MPlus2kMinus2 => "m+2k-2",
            GuardConst::MPlus2kMinus4 => "m+2k-4",
            GuardConst::MPlus6kMinus10 => "m+6k-10",
            GuardConst::MMinus2 => "m-2",
            GuardConst::MMinus4 => "m-4",
        }
    }
}

/// Which space a basis spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpaceTag {
    /// All degree-k polynomials in u.
    Pk,
    /// Harmonic degree-k polynomials.
    Hk,
    /// Monogenic degree-k polynomials.
    Mk,
}

/// An explicit basis of a polynomial space in u.
#[derive(Debug, Clone)]
pub struct SpaceBasis {
    pub tag: SpaceTag,
    pub params: SpaceParams,
    elements: Vec<Wf>,
}

impl SpaceBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Wf] {
        &self.elements
    }

    /// Fischer Gram matrix of the basis.
    pub fn gram(&self) -> Vec<Vec<Rat>> {
        self.elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| crate::weighted::fischer_pair(a, b).expect("basis is u-only"))
                    .collect()
            })
            .collect()
    }
}

/// The Dirac operator in u applied at function level: `Σ e_i ∂_{u_i} f`.
pub fn dirac_u(f: &Wf) -> Wf {
    let m = f.dim();
    Wf::sum(
        m,
        (1..=m as usize).map(|i| f.diff_u(i).mul_clifford_left(&Multivector::generator(m, i))),
    )
}

/// The Dirac operator in x at function level.
pub fn dirac_x(f: &Wf) -> Wf {
    let m = f.dim();
    Wf::sum(
        m,
        (1..=m as usize).map(|i| f.diff_x(i).mul_clifford_left(&Multivector::generator(m, i))),
    )
}

/// Laplacian in u at function level.
pub fn laplace_u(f: &Wf) -> Wf {
    let m = f.dim();
    Wf::sum(m, (1..=m as usize).map(|i| f.diff_u(i).diff_u(i)))
}

/// Laplacian in x at function level.
pub fn laplace_x(f: &Wf) -> Wf {
    let m = f.dim();
    Wf::sum(m, (1..=m as usize).map(|i| f.diff_x(i).diff_x(i)))
}

/// All degree-d monomial exponent vectors over `m` slots, lexicographic.
pub fn monomial_exponents(m: u32, d: u32) -> Vec<Vec<u32>> {
    fn rec(slots: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            rec(slots - 1, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m as usize, d, &mut Vec::new(), &mut out);
    out
}

fn monomial_from_exponents(m: u32, exps: &[u32]) -> Wf {
    let mut idx = MultiIndex::empty(m);
    for (i, &e) in exps.iter().enumerate() {
        idx = idx.with_exponent(Var::U(i + 1), e);
    }
    Wf::term(m, 0, idx, Multivector::one(m))
}

/// Basis of P_k: all degree-k monomials in u times the scalar unit.
pub fn monomial_basis(params: SpaceParams) -> SpaceBasis {
    let elements = monomial_exponents(params.m, params.k)
        .iter()
        .map(|e| monomial_from_exponents(params.m, e))
        .collect();
    SpaceBasis {
        tag: SpaceTag::Pk,
        params,
        elements,
    }
}

/// Dimension of the scalar harmonics of degree k:
/// `C(m+k-1, k) - C(m+k-3, k-2)`.
pub fn harmonic_dimension(m: u32, k: u32) -> u64 {
    if k < 2 {
        return binomial(m as u64 + k as u64 - 1, k as u64);
    }
    binomial(m as u64 + k as u64 - 1, k as u64) - binomial(m as u64 + k as u64 - 3, k as u64 - 2)
}

fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc = 1u64;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Basis of H_k: kernel of the u-Laplacian inside scalar degree-k
/// polynomials, computed as an exact nullspace.
pub fn harmonic_basis(params: SpaceParams) -> SpaceBasis {
    let (m, k) = (params.m, params.k);
    if k < 2 {
        let mut basis = monomial_basis(params);
        basis.tag = SpaceTag::Hk;
        return basis;
    }
    let monos = monomial_exponents(m, k);
    let targets = monomial_exponents(m, k - 2);
    let target_pos: std::collections::BTreeMap<&[u32], usize> = targets
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    // rows[t][j] = coefficient of target monomial t in Δ_u(mono_j)
    let mut rows = vec![vec![Rat::zero(); monos.len()]; targets.len()];
    for (j, mono) in monos.iter().enumerate() {
        for i in 0..m as usize {
            let e = mono[i];
            if e >= 2 {
                let mut img = mono.clone();
                img[i] -= 2;
                let t = target_pos[img.as_slice()];
                rows[t][j] += crate::scalar::int((e * (e - 1)) as i64);
            }
        }
    }
    let null = linalg::nullspace(&rows, monos.len());
    let elements = null
        .iter()
        .map(|coeffs| {
            let mut f = Wf::zero(m);
            for (j, c) in coeffs.iter().enumerate() {
                if !Coeff::is_zero(c) {
                    f = f.add(&monomial_from_exponents(m, &monos[j]).scale(c));
                }
            }
            f
        })
        .collect();
    SpaceBasis {
        tag: SpaceTag::Hk,
        params,
        elements,
    }
}

/// The Almansi–Fischer projection `P_k = 1 + u D_u / (m + 2k - 2)` applied to
/// a harmonic degree-k input; lands in M_k and is the identity there.
pub fn project_pk(params: SpaceParams, f: &Wf) -> Result<Wf> {
    let c = params.guard(GuardConst::MPlus2kMinus2)?;
    let correction = dirac_u(f)
        .mul_vector_left(Var::U)
        .scale(&crate::scalar::rat(1, c));
    Ok(f.add(&correction))
}

/// The harmonic projection `P_1 = 1 + u^2 Δ_u / (2(m + 2k - 4))` on the
/// kernel of `Δ_u^2`; identity on H_k and zero on `u^2 H_{k-2}`.
///
/// `u^2 = -|u|^2`, so the correction is `-|u|^2 Δ_u f / (2(m + 2k - 4))`.
pub fn project_p1(params: SpaceParams, f: &Wf) -> Result<Wf> {
    let c = params.guard(GuardConst::MPlus2kMinus4)?;
    if !laplace_u(&laplace_u(f)).is_zero() {
        return Err(Error::NotInSpace {
            space: "kernel of the squared u-Laplacian".into(),
        });
    }
    let correction = laplace_u(f)
        .mul(&Wf::norm_sq(f.dim(), Var::U))
        .scale(&crate::scalar::rat(-1, 2 * c));
    Ok(f.add(&correction))
}

/// Split a harmonic degree-k input as `h = p_k + u p_{k-1}` with both parts
/// monogenic: `p_k = P_k h` and `p_{k-1} = -D_u h / (m + 2k - 2)`.
pub fn almansi_fischer_split(params: SpaceParams, h: &Wf) -> Result<(Wf, Wf)> {
    if !laplace_u(h).is_zero() {
        return Err(Error::NotInSpace {
            space: format!("harmonic polynomials of degree {}", params.k),
        });
    }
    let c = params.guard(GuardConst::MPlus2kMinus2)?;
    let p_k = project_pk(params, h)?;
    let p_km1 = dirac_u(h).scale(&crate::scalar::rat(-1, c));
    Ok((p_k, p_km1))
}

/// Basis of M_k: the Almansi–Fischer projections of the harmonic basis,
/// pruned to a linearly independent set (exact rank check).
pub fn monogenic_basis(params: SpaceParams) -> Result<SpaceBasis> {
    if params.k == 0 {
        return Ok(SpaceBasis {
            tag: SpaceTag::Mk,
            params,
            elements: vec![Wf::one(params.m)],
        });
    }
    let harm = harmonic_basis(params);
    let candidates: Vec<Wf> = harm
        .elements()
        .iter()
        .map(|h| project_pk(params, h))
        .collect::<Result<_>>()?;
    let coords = coordinate_vectors(&candidates);
    let keep = linalg::independent_rows(&coords);
    Ok(SpaceBasis {
        tag: SpaceTag::Mk,
        params,
        elements: keep.into_iter().map(|i| candidates[i].clone()).collect(),
    })
}

/// Coordinate vectors of u-polynomials over a shared (monomial, blade) frame.
pub fn coordinate_vectors(elems: &[Wf]) -> Vec<Vec<Rat>> {
    use std::collections::BTreeSet;
    let mut frame: BTreeSet<(Vec<u8>, crate::clifford::Blade)> = BTreeSet::new();
    for f in elems {
        for (key, mv) in f.terms() {
            for (blade, _) in mv.terms() {
                frame.insert((key.index.u_key(), *blade));
            }
        }
    }
    let frame: Vec<_> = frame.into_iter().collect();
    let pos: std::collections::BTreeMap<_, _> = frame
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), i))
        .collect();
    elems
        .iter()
        .map(|f| {
            let mut v = vec![Rat::zero(); frame.len()];
            for (key, mv) in f.terms() {
                for (blade, c) in mv.terms() {
                    v[pos[&(key.index.u_key(), *blade)]] = c.clone();
                }
            }
            v
        })
        .collect()
}

/// Exact Gram–Schmidt: orthogonal (not normalized) elements with their
/// Fischer norms squared. Stays in rational arithmetic.
pub fn gram_schmidt(elems: &[Wf]) -> Result<Vec<(Wf, Rat)>> {
    let mut out: Vec<(Wf, Rat)> = Vec::with_capacity(elems.len());
    for e in elems {
        let mut g = e.clone();
        for (q, lambda) in &out {
            let c = crate::weighted::fischer_pair(&g, q)?;
            if !Coeff::is_zero(&c) {
                g = g.sub(&q.scale(&(c / lambda)));
            }
        }
        let lambda = crate::weighted::fischer_pair(&g, &g)?;
        if Coeff::is_zero(&lambda) {
            continue; // dependent element
        }
        out.push((g, lambda));
    }
    Ok(out)
}

/// Substitute `u -> v` in a polynomial in u.
pub fn swap_u_to_v(f: &Wf) -> Wf {
    let m = f.dim();
    let mut out = Wf::zero(m);
    for (key, mv) in f.terms() {
        let mut idx = MultiIndex::empty(m);
        for i in 1..=m as usize {
            idx = idx.with_exponent(Var::V(i), key.index.exponent(Var::U(i)));
        }
        out = out.add(&Wf::term(m, key.weight, idx, mv.clone()));
    }
    out
}

/// Reproducing kernel `Z_k(u, v)` of H_k or M_k under the Fischer pairing.
///
/// Convention: from a Fischer-orthogonal scalar harmonic basis `{q_j}` with
/// norms `λ_j`, the harmonic kernel is `Σ_j q_j(u) q_j(v) / λ_j` (the
/// orthonormal sum written without square roots). The monogenic kernel is its
/// Almansi–Fischer projection in the u slot, which reproduces every element
/// of M_k because `u M_{k-1}` is Fischer-orthogonal to M_k.
pub fn reproducing_kernel(params: SpaceParams, space: SpaceTag) -> Result<Wf> {
    let harm = harmonic_basis(params);
    let ortho = gram_schmidt(harm.elements())?;
    let m = params.m;
    let mut kernel = Wf::zero(m);
    for (q, lambda) in &ortho {
        let term = q
            .mul(&swap_u_to_v(q))
            .scale(&(<Rat as Coeff>::one() / lambda));
        kernel = kernel.add(&term);
    }
    match space {
        SpaceTag::Hk => Ok(kernel),
        SpaceTag::Mk => project_pk(params, &kernel),
        SpaceTag::Pk => Err(Error::InvalidParams {
            detail: "reproducing kernel is defined for H_k and M_k".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::weighted::{fischer_pair, fischer_pair_u};

    fn u(m: u32, i: usize) -> Wf {
        Wf::variable(m, Var::U(i))
    }

    #[test]
    fn monomial_basis_counts() {
        assert_eq!(monomial_basis(SpaceParams::new(2, 1).unwrap()).dim(), 2);
        assert_eq!(monomial_basis(SpaceParams::new(3, 2).unwrap()).dim(), 6);
        assert_eq!(monomial_basis(SpaceParams::new(3, 0).unwrap()).dim(), 1);
    }

    #[test]
    fn harmonic_basis_m2_k2() {
        let params = SpaceParams::new(2, 2).unwrap();
        let basis = harmonic_basis(params);
        assert_eq!(basis.dim(), 2);
        // span{u1^2 - u2^2, u1 u2}: check each element is harmonic and the
        // expected elements lie in the span (rank stays 2 after adjoining).
        for h in basis.elements() {
            assert!(laplace_u(h).is_zero());
        }
        let known = vec![
            u(2, 1).mul(&u(2, 1)).sub(&u(2, 2).mul(&u(2, 2))),
            u(2, 1).mul(&u(2, 2)),
        ];
        let mut all = basis.elements().to_vec();
        all.extend(known);
        let coords = coordinate_vectors(&all);
        assert_eq!(linalg::rank(&coords), 2);
    }

    #[test]
    fn harmonic_dimensions_match_formula() {
        for m in 2..=6u32 {
            for k in 0..=3u32 {
                let params = SpaceParams::new(m, k).unwrap();
                let basis = harmonic_basis(params);
                assert_eq!(basis.dim() as u64, harmonic_dimension(m, k), "m={m} k={k}");
                for h in basis.elements() {
                    assert!(laplace_u(h).is_zero());
                }
            }
        }
        assert_eq!(harmonic_dimension(3, 2), 5);
    }

    #[test]
    fn linear_harmonics_are_monomials() {
        let basis = harmonic_basis(SpaceParams::new(3, 1).unwrap());
        assert_eq!(basis.dim(), 3);
    }

    #[test]
    fn projection_example_m3_k1() {
        // P_k(u1) = u1 + u e1 / 3, and it is monogenic.
        let params = SpaceParams::new(3, 1).unwrap();
        let p = project_pk(params, &u(3, 1)).unwrap();
        let expected = u(3, 1).add(
            &Wf::one(3)
                .mul_vector_left(Var::U)
                .mul_clifford_right(&Multivector::generator(3, 1))
                .scale(&rat(1, 3)),
        );
        assert_eq!(p, expected);
        assert!(dirac_u(&p).is_zero());
    }

    #[test]
    fn projection_fixes_monogenics_and_is_idempotent() {
        let params = SpaceParams::new(3, 2).unwrap();
        for h in harmonic_basis(params).elements() {
            let p = project_pk(params, h).unwrap();
            assert!(dirac_u(&p).is_zero());
            assert_eq!(project_pk(params, &p).unwrap(), p);
        }
    }

    #[test]
    fn p1_is_identity_on_harmonics_and_kills_u2_times_harmonics() {
        let params = SpaceParams::new(3, 2).unwrap();
        for h in harmonic_basis(params).elements() {
            assert_eq!(project_p1(params, h).unwrap(), h.clone());
        }
        // f = u^2 q = -|u|^2 q with q in H_{k-2}
        let q = Wf::one(3);
        let f = q.mul(&Wf::norm_sq(3, Var::U)).neg();
        assert!(project_p1(params, &f).unwrap().is_zero());
        // P_1(|u|^2) = 0 at (m, k) = (3, 2): the two terms cancel exactly.
        let f = Wf::norm_sq(3, Var::U);
        assert!(project_p1(params, &f).unwrap().is_zero());
    }

    #[test]
    fn p1_rejects_inputs_outside_ker_laplacian_squared() {
        let params = SpaceParams::new(3, 4).unwrap();
        let f = Wf::norm_sq(3, Var::U).mul(&Wf::norm_sq(3, Var::U));
        assert!(matches!(
            project_p1(params, &f),
            Err(Error::NotInSpace { .. })
        ));
    }

    #[test]
    fn almansi_fischer_split_reconstructs() {
        for (m, k) in [(3u32, 1u32), (3, 2), (4, 2), (5, 2)] {
            let params = SpaceParams::new(m, k).unwrap();
            for h in harmonic_basis(params).elements() {
                let (p_k, p_km1) = almansi_fischer_split(params, h).unwrap();
                assert!(dirac_u(&p_k).is_zero());
                assert!(dirac_u(&p_km1).is_zero());
                let rebuilt = p_k.add(&p_km1.mul_vector_left(Var::U));
                assert_eq!(&rebuilt, h, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn almansi_fischer_split_example_m3_k1() {
        let params = SpaceParams::new(3, 1).unwrap();
        let (p1, p0) = almansi_fischer_split(params, &u(3, 1)).unwrap();
        let expected_p1 = project_pk(params, &u(3, 1)).unwrap();
        assert_eq!(p1, expected_p1);
        let expected_p0 = Wf::constant(Multivector::generator(3, 1)).scale(&rat(-1, 3));
        assert_eq!(p0, expected_p0);
        // h already monogenic -> (h, 0)
        let p = project_pk(params, &u(3, 2)).unwrap();
        let (pk, pkm1) = almansi_fischer_split(params, &p).unwrap();
        assert_eq!(pk, p);
        assert!(pkm1.is_zero());
    }

    #[test]
    fn monogenic_basis_elements_are_monogenic() {
        for (m, k) in [(3u32, 0u32), (3, 1), (3, 2), (4, 1), (5, 2)] {
            let params = SpaceParams::new(m, k).unwrap();
            let basis = monogenic_basis(params).unwrap();
            assert!(!basis.elements().is_empty());
            for p in basis.elements() {
                assert!(dirac_u(p).is_zero(), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn fischer_decomposition_rank_counting() {
        // P_k = H_k ⊕ |u|^2 P_{k-2} at the scalar level.
        for (m, k) in [(2u32, 2u32), (3, 2), (3, 3), (4, 2)] {
            let params = SpaceParams::new(m, k).unwrap();
            let monos = monomial_basis(params);
            let harm = harmonic_basis(params);
            let lower = monomial_basis(SpaceParams::new(m, k - 2).unwrap());
            let nsq = Wf::norm_sq(m, Var::U);
            let mut all: Vec<Wf> = harm.elements().to_vec();
            all.extend(lower.elements().iter().map(|p| p.mul(&nsq)));
            let coords = coordinate_vectors(&all);
            assert_eq!(linalg::rank(&coords), monos.dim(), "m={m} k={k}");
            assert_eq!(harm.dim() + lower.dim(), monos.dim());
        }
    }

    #[test]
    fn dirac_of_u_times_monogenic() {
        // D_u(u p) = -(m + 2k - 2) p for p monogenic of degree k - 1.
        for (m, k) in [(3u32, 1u32), (3, 2), (4, 2), (5, 1)] {
            let lower = monogenic_basis(SpaceParams::new(m, k - 1).unwrap()).unwrap();
            let c = int(-GuardConst::MPlus2kMinus2.value(m, k));
            for p in lower.elements() {
                let lhs = dirac_u(&p.mul_vector_left(Var::U));
                assert_eq!(lhs, p.scale(&c), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn almansi_summands_are_fischer_orthogonal() {
        let params = SpaceParams::new(3, 2).unwrap();
        let mono = monogenic_basis(params).unwrap();
        let lower = monogenic_basis(SpaceParams::new(3, 1).unwrap()).unwrap();
        for p in mono.elements() {
            for q in lower.elements() {
                let uq = q.mul_vector_left(Var::U);
                assert_eq!(fischer_pair(&uq, p).unwrap(), int(0));
                assert_eq!(fischer_pair(p, &uq).unwrap(), int(0));
            }
        }
    }

    #[test]
    fn kernel_examples() {
        // (m=3, k=0, H): Z = 1.
        let z = reproducing_kernel(SpaceParams::new(3, 0).unwrap(), SpaceTag::Hk).unwrap();
        assert_eq!(z, Wf::one(3));
        // (m=2, k=1, H): Z = u1 v1 + u2 v2.
        let z = reproducing_kernel(SpaceParams::new(2, 1).unwrap(), SpaceTag::Hk).unwrap();
        let expected = u(2, 1)
            .mul(&Wf::variable(2, Var::V(1)))
            .add(&u(2, 2).mul(&Wf::variable(2, Var::V(2))));
        assert_eq!(z, expected);
    }

    #[test]
    fn harmonic_kernel_reproduces_basis() {
        for (m, k) in [(3u32, 2u32), (4, 2)] {
            let params = SpaceParams::new(m, k).unwrap();
            let z = reproducing_kernel(params, SpaceTag::Hk).unwrap();
            for h in harmonic_basis(params).elements() {
                let reproduced = fischer_pair_u(&z, h).unwrap();
                assert_eq!(reproduced, swap_u_to_v(h), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn monogenic_kernel_reproduces_basis_and_is_monogenic() {
        for (m, k) in [(3u32, 1u32), (3, 2), (4, 1)] {
            let params = SpaceParams::new(m, k).unwrap();
            let z = reproducing_kernel(params, SpaceTag::Mk).unwrap();
            assert!(dirac_u(&z).is_zero(), "kernel monogenic in u");
            for p in monogenic_basis(params).unwrap().elements() {
                let reproduced = fischer_pair_u(&z, p).unwrap();
                assert_eq!(reproduced, swap_u_to_v(p), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn guards_fire_on_vanishing_constants() {
        // (m, k) = (4, 1) kills m + 6k - 10.
        let params = SpaceParams::new(4, 1).unwrap();
        let err = params.guard(GuardConst::MPlus6kMinus10).unwrap_err();
        assert!(matches!(
            err,
            Error::VanishingDenominator {
                constant: "m+6k-10",
                m: 4,
                k: 1
            }
        ));
        // (m, k) = (2, 0) kills m + 2k - 2: P_k undefined there.
        let params = SpaceParams::new(2, 0).unwrap();
        assert!(project_pk(params, &Wf::one(2)).is_err());
    }
}
