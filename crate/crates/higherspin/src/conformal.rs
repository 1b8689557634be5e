//! Finite conformal actions on weighted functions: translations, dilations,
//! and the two Kelvin-type inversions — the monogenic inversion
//! `J3[f] = x |x|^{2-m} f(x/|x|^2, xux/|x|^2)` and the harmonic inversion
//! `J4[f] = |x|^{4-m} f(x/|x|^2, xux/|x|^2)` — together with the fundamental
//! solutions they generate.
//!
//! The reflection `u -> xux/|x|^2` reduces to the polynomial substitution
//! `u_j -> u_j - 2 <u,x> x_j |x|^{-2}` through the vector identity
//! `x u x = |x|^2 u - 2 <u,x> x`, so every pullback stays inside the weighted
//! function algebra with a single origin-centered weight.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::scalar::{int, Rat};
use crate::spaces::{dirac_u, laplace_u, SpaceParams};
use crate::weighted::{Var, WeightedFunction};

type Wf = WeightedFunction<Rat>;

/// A finite conformal action.
#[derive(Debug, Clone)]
pub enum ConformalAction {
    /// `x -> x + a`; u untouched; defined on plain polynomials.
    TranslateX(Vec<Rat>),
    /// `x -> λx` with `λ > 0`; weights rescale by `λ^t`.
    Dilate(Rat),
    /// Monogenic inversion; `J3^2 = -1`.
    InvertJ3(SpaceParams),
    /// Harmonic inversion; `J4^2 = 1`.
    InvertJ4(SpaceParams),
}

impl ConformalAction {
    pub fn apply(&self, f: &Wf) -> Result<Wf> {
        match self {
            ConformalAction::TranslateX(a) => translate(f, a),
            ConformalAction::Dilate(l) => dilate(f, l),
            ConformalAction::InvertJ3(p) => Ok(j3(*p, f)),
            ConformalAction::InvertJ4(p) => Ok(j4(*p, f)),
        }
    }
}

/// The inversion substitution on the whole weighted algebra:
/// `x_i -> x_i |x|^{-2}`, `u_j -> u_j - 2 <u,x> x_j |x|^{-2}`, v untouched,
/// and `|x|^t -> |x|^{-t}`. An involution.
pub fn invert_substitution(f: &Wf) -> Wf {
    let m = f.dim();
    // Images of the u variables under the reflection.
    let u_dot_x: Wf = {
        let mut s = Wf::zero(m);
        for i in 1..=m as usize {
            s = s.add(&Wf::variable(m, Var::U(i)).mul(&Wf::variable(m, Var::X(i))));
        }
        s
    };
    let u_images: Vec<Wf> = (1..=m as usize)
        .map(|j| {
            Wf::variable(m, Var::U(j)).sub(
                &u_dot_x
                    .mul(&Wf::variable(m, Var::X(j)))
                    .mul(&Wf::weight(m, -2))
                    .scale(&int(2)),
            )
        })
        .collect();
    // The substituted u-monomial images recur constantly across terms;
    // memoize them by u-exponent pattern. The x and v parts substitute to a
    // single term each: x^a -> x^a |x|^(-2|a|), v untouched, |x|^t -> |x|^(-t).
    let mut u_cache: std::collections::HashMap<Vec<u8>, Wf> = std::collections::HashMap::new();
    let parts: Vec<Wf> = f
        .terms()
        .map(|(key, coeff)| {
            let u_pattern = key.index.u_key();
            let u_img = u_cache.entry(u_pattern).or_insert_with(|| {
                let mut img = Wf::one(m);
                for i in 1..=m as usize {
                    for _ in 0..key.index.exponent(Var::U(i)) {
                        img = img.mul(&u_images[i - 1]);
                    }
                }
                img
            });
            let xv_index = {
                let mut idx = crate::weighted::MultiIndex::empty(m);
                for i in 1..=m as usize {
                    idx = idx.with_exponent(Var::X(i), key.index.exponent(Var::X(i)));
                    idx = idx.with_exponent(Var::V(i), key.index.exponent(Var::V(i)));
                }
                idx
            };
            let t = -key.weight - 2 * key.index.degree_x() as i32;
            Wf::term(m, t, xv_index, coeff.clone()).mul(u_img)
        })
        .collect();
    Wf::sum(m, parts)
}

/// The inversion pullback `f(x, u) -> f(x/|x|^2, xux/|x|^2)` on plain
/// polynomial inputs. Weighted inputs are rejected; the inversions below
/// compose the substitution with their weight handling explicitly.
pub fn pullback_inversion(f: &Wf) -> Result<Wf> {
    let poly = f.to_polynomial("pullback_inversion")?;
    Ok(invert_substitution(&poly))
}

/// Monogenic inversion `J3[f] = x |x|^{2-m} f(x/|x|^2, xux/|x|^2)`.
///
/// Defined on the whole weighted algebra (weights invert along with the
/// polynomial part), so applying it twice is meaningful: `J3^2 = -1`.
pub fn j3(params: SpaceParams, f: &Wf) -> Wf {
    let m = params.m;
    invert_substitution(f)
        .mul_weight(2 - m as i32)
        .mul_vector_left(Var::X)
}

/// Harmonic inversion `J4[f] = |x|^{4-m} f(x/|x|^2, xux/|x|^2)`;
/// `J4^2 = 1`.
pub fn j4(params: SpaceParams, f: &Wf) -> Wf {
    let m = params.m;
    invert_substitution(f).mul_weight(4 - m as i32)
}

/// Translate `x -> x + a`. Defined on plain polynomials only: the weights
/// are centered at the origin and do not translate.
pub fn translate(f: &Wf, a: &[Rat]) -> Result<Wf> {
    let m = f.dim();
    if a.len() != m as usize {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: a.len() as u32,
        });
    }
    let poly = f.to_polynomial("translate")?;
    let shifted: Vec<Wf> = (1..=m as usize)
        .map(|i| Wf::variable(m, Var::X(i)).add(&Wf::one(m).scale(&a[i - 1])))
        .collect();
    let mut out = Wf::zero(m);
    for (key, coeff) in poly.terms() {
        let mut term = Wf::term(
            m,
            0,
            key.index
                .only_block(Var::U)
                .mul(&key.index.only_block(Var::V)),
            coeff.clone(),
        );
        for i in 1..=m as usize {
            for _ in 0..key.index.exponent(Var::X(i)) {
                term = term.mul(&shifted[i - 1]);
            }
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// Dilate `x -> λx`, `λ > 0`: each term scales by `λ^(x-degree + t)`.
pub fn dilate(f: &Wf, lambda: &Rat) -> Result<Wf> {
    if !lambda.is_positive() {
        return Err(Error::InvalidParams {
            detail: "dilation factor must be positive".into(),
        });
    }
    let m = f.dim();
    let mut out = Wf::zero(m);
    for (key, coeff) in f.terms() {
        let power = key.index.degree_x() as i32 + key.weight;
        let scale = rat_pow(lambda, power);
        out = out.add(&Wf::term(m, key.weight, key.index, coeff.scale(&scale)));
    }
    Ok(out)
}

fn rat_pow(q: &Rat, n: i32) -> Rat {
    let mut out = int(1);
    if n >= 0 {
        for _ in 0..n {
            out *= q;
        }
    } else {
        let inv = int(1) / q;
        for _ in 0..(-n) {
            out *= &inv;
        }
    }
    out
}

/// Which higher-order operator a fundamental solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FundSolKind {
    /// `x |x|^{2-m} f(xux/|x|^2, v)` with f monogenic of degree k.
    D3,
    /// `|x|^{4-m} f(xux/|x|^2, v)` with f harmonic of degree k.
    D4,
}

/// Build the fundamental-solution candidate attached to a u-polynomial
/// `f` (a basis element, or a reproducing-kernel slice in (u, v)): the
/// corresponding inversion applied to `f`. With the kernel slice this is the
/// fundamental solution up to an undetermined global constant; with a basis
/// element it is the normalization-independent object the annihilation check
/// needs.
pub fn fundamental_solution(params: SpaceParams, which: FundSolKind, f: &Wf) -> Result<Wf> {
    validate_value_space(params, which, f)?;
    Ok(match which {
        FundSolKind::D3 => j3(params, f),
        FundSolKind::D4 => j4(params, f),
    })
}

fn validate_value_space(params: SpaceParams, which: FundSolKind, f: &Wf) -> Result<()> {
    let homogeneous = f.terms().all(|(key, _)| {
        key.weight == 0 && key.index.degree_x() == 0 && key.index.degree_u() == params.k
    });
    if !homogeneous {
        return Err(Error::NotInSpace {
            space: format!("degree-{} polynomials in u", params.k),
        });
    }
    let ok = match which {
        FundSolKind::D3 => dirac_u(f).is_zero(),
        FundSolKind::D4 => laplace_u(f).is_zero(),
    };
    if !ok {
        return Err(Error::NotInSpace {
            space: match which {
                FundSolKind::D3 => "monogenic polynomials".into(),
                FundSolKind::D4 => "harmonic polynomials".into(),
            },
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{apply, build_d3, build_d4, dirac_x, D4Form};
    use crate::scalar::rat;
    use crate::spaces::{monogenic_basis, reproducing_kernel, SpaceTag};
    use crate::weighted::Var;

    fn x(m: u32, i: usize) -> Wf {
        Wf::variable(m, Var::X(i))
    }
    fn u(m: u32, i: usize) -> Wf {
        Wf::variable(m, Var::U(i))
    }
    fn params(m: u32, k: u32) -> SpaceParams {
        SpaceParams::new(m, k).unwrap()
    }

    #[test]
    fn pullback_examples() {
        let m = 2;
        // f = 1 -> 1, f = x1 -> x1 r^-2
        assert_eq!(pullback_inversion(&Wf::one(m)).unwrap(), Wf::one(m));
        assert_eq!(
            pullback_inversion(&x(m, 1)).unwrap(),
            x(m, 1).mul(&Wf::weight(m, -2))
        );
        // f = u1 -> u1 - 2 (u1 x1 + u2 x2) x1 r^-2
        let expected = u(m, 1).sub(
            &u(m, 1)
                .mul(&x(m, 1))
                .add(&u(m, 2).mul(&x(m, 2)))
                .mul(&x(m, 1))
                .mul(&Wf::weight(m, -2))
                .scale(&int(2)),
        );
        assert_eq!(pullback_inversion(&u(m, 1)).unwrap(), expected);
        // weighted input rejected
        assert!(pullback_inversion(&Wf::weight(m, -2)).is_err());
    }

    #[test]
    fn substitution_is_involution() {
        let m = 3;
        let f = x(m, 1)
            .mul(&u(m, 2))
            .add(&u(m, 1).mul(&u(m, 3)).mul(&x(m, 2)))
            .add(&Wf::weight(m, -1).mul(&x(m, 3)));
        assert_eq!(invert_substitution(&invert_substitution(&f)), f);
    }

    #[test]
    fn j3_squares_to_minus_one() {
        let m = 3;
        let p = params(m, 1);
        // a mixed-variable pick: f = x1 u1 e2
        let f = x(m, 1)
            .mul(&u(m, 1))
            .mul(&Wf::constant(crate::clifford::Multivector::generator(m, 2)));
        assert_eq!(j3(p, &j3(p, &f)), f.neg());
        // and on a weighted function
        let g = Wf::weight(m, -1).mul(&u(m, 2));
        assert_eq!(j3(p, &j3(p, &g)), g.neg());
    }

    #[test]
    fn j4_squares_to_one() {
        let m = 4;
        let p = params(m, 1);
        let f = x(m, 2).mul(&u(m, 3)).add(&u(m, 1).mul(&u(m, 1)));
        assert_eq!(j4(p, &j4(p, &f)), f);
        // J4(1) = |x|^{4-m}
        assert_eq!(j4(p, &Wf::one(m)), Wf::weight(m, 0));
        let m = 5;
        let p = params(m, 0);
        assert_eq!(j4(p, &Wf::one(m)), Wf::weight(m, -1));
    }

    #[test]
    fn translate_and_dilate_examples() {
        let m = 3;
        // translate x1 by 1 along e1
        let a = vec![int(1), int(0), int(0)];
        assert_eq!(translate(&x(m, 1), &a).unwrap(), x(m, 1).add(&Wf::one(m)));
        // translating a weighted function is an error
        assert!(translate(&Wf::weight(m, -2), &a).is_err());
        // dilate(x1^2 r^-2, 2) = x1^2 r^-2 (degree-0 homogeneity)
        let f = x(m, 1).mul(&x(m, 1)).mul(&Wf::weight(m, -2));
        assert_eq!(dilate(&f, &int(2)).unwrap(), f);
        // dilate(r^{2-m}, λ) = λ^{2-m} r^{2-m}
        let w = Wf::weight(m, 2 - m as i32);
        assert_eq!(
            dilate(&w, &int(2)).unwrap(),
            w.scale(&rat(1, 2)) // λ^{-1} at m = 3
        );
        assert!(dilate(&w, &int(-1)).is_err());
    }

    #[test]
    fn fundamental_solution_k0_classical_forms() {
        // D3, k=0, f=1: x r^{2-m}; D4, k=0, f=1: r^{4-m}.
        let m = 3;
        let p = params(m, 0);
        let fs3 = fundamental_solution(p, FundSolKind::D3, &Wf::one(m)).unwrap();
        let expected = Wf::weight(m, 2 - m as i32).mul_vector_left(Var::X);
        assert_eq!(fs3, expected);
        let fs4 = fundamental_solution(p, FundSolKind::D4, &Wf::one(m)).unwrap();
        assert_eq!(fs4, Wf::weight(m, 4 - m as i32));
    }

    #[test]
    fn fundamental_solutions_are_annihilated() {
        let m = 3;
        let p = params(m, 1);
        let d3 = build_d3(p).unwrap();
        for f in monogenic_basis(p).unwrap().elements() {
            let fs = fundamental_solution(p, FundSolKind::D3, f).unwrap();
            assert!(apply(&d3, &fs).is_zero());
        }
        let d4 = build_d4(p, D4Form::Defining).unwrap();
        for f in crate::spaces::harmonic_basis(p).elements() {
            let fs = fundamental_solution(p, FundSolKind::D4, f).unwrap();
            assert!(apply(&d4, &fs).is_zero());
        }
        // and on a reproducing-kernel slice
        let z = reproducing_kernel(p, SpaceTag::Mk).unwrap();
        let fs = fundamental_solution(p, FundSolKind::D3, &z).unwrap();
        assert!(apply(&d3, &fs).is_zero());
    }

    #[test]
    fn fundamental_solution_rejects_wrong_space() {
        let m = 3;
        let p = params(m, 1);
        // u1 is harmonic but not monogenic? u1 is monogenic? D_u u1 = e1 != 0.
        assert!(fundamental_solution(p, FundSolKind::D3, &u(m, 1)).is_err());
        // wrong degree
        assert!(fundamental_solution(p, FundSolKind::D4, &Wf::one(m)).is_err());
        // x dependence
        assert!(fundamental_solution(p, FundSolKind::D4, &x(m, 1).mul(&u(m, 1))).is_err());
    }

    #[test]
    fn inversion_intertwines_d3() {
        // J3 D3 J3 f = |x|^6 D3 f on monogenic-valued tests.
        let m = 3;
        let p = params(m, 1);
        let d3 = build_d3(p).unwrap();
        for b in monogenic_basis(p).unwrap().elements().iter().take(2) {
            for f in [b.clone(), x(m, 1).mul(b), x(m, 2).mul(&x(m, 1)).mul(b)] {
                let lhs = j3(p, &apply(&d3, &j3(p, &f)));
                let rhs = apply(&d3, &f).mul_weight(6);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn translation_and_dilation_intertwine_dirac() {
        let m = 3;
        let f = x(m, 1).mul(&x(m, 2)).mul(&u(m, 1));
        let a = vec![int(1), int(-2), int(3)];
        let dx = dirac_x(m);
        assert_eq!(
            apply(&dx, &translate(&f, &a).unwrap()),
            translate(&apply(&dx, &f), &a).unwrap()
        );
        let lam = rat(3, 2);
        // D(f(λx)) = λ (Df)(λx)
        assert_eq!(
            apply(&dx, &dilate(&f, &lam).unwrap()),
            dilate(&apply(&dx, &f), &lam).unwrap().scale(&lam)
        );
    }
}
