//! Right-hand sides of the commutator identities between the operator
//! building blocks and the special conformal generators, transcribed term by
//! term in one place. Each right-hand side is data — a list of rational
//! coefficients and factor tokens — so any transcription slip is local to a
//! single line here and auditable against the rendered formula.

use crate::error::Result;
use crate::scalar::{rat, Rat};
use crate::spaces::SpaceParams;

use super::{
    build_d2, dirac_x, du_dot_dx, laplace_x, left_u, norm_u_sq, u_dot_dx, D2Form, OperatorExpr,
    PrimOp,
};
use crate::clifford::Blade;

/// One multiplicative token of an operator word.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    /// `Dx^n`
    Dx(u32),
    /// `Δx`
    LapX,
    /// `<u,Dx>^n`
    UdotDx(u32),
    /// `<Du,Dx>^n`
    DudotDx(u32),
    /// Left Clifford multiplication by u, n-fold (`u` or `u^3`).
    VecU(u32),
    /// `|u|^2`
    NormU2,
    /// Coordinate multiplication `x_j`.
    CoordX(usize),
    /// Coordinate multiplication `u_j`.
    CoordU(usize),
    /// Left multiplication by the basis blade `e_j`.
    BladeE(usize),
    /// `∂_{x_j}`
    DiffX(usize),
    /// `∂_{u_j}`
    DiffU(usize),
    /// The second-order operator in its reference (twistor) form.
    D2,
}

impl Factor {
    pub fn to_expr(&self, params: SpaceParams) -> Result<OperatorExpr> {
        let m = params.m;
        Ok(match self {
            Factor::Dx(n) => dirac_x(m).pow(*n),
            Factor::LapX => laplace_x(m),
            Factor::UdotDx(n) => u_dot_dx(m).pow(*n),
            Factor::DudotDx(n) => du_dot_dx(m).pow(*n),
            Factor::VecU(n) => left_u(*n),
            Factor::NormU2 => norm_u_sq(m),
            Factor::CoordX(j) => OperatorExpr::Prim(PrimOp::MultCoordX(*j)),
            Factor::CoordU(j) => OperatorExpr::Prim(PrimOp::MultCoordU(*j)),
            Factor::BladeE(j) => OperatorExpr::Prim(PrimOp::LeftBlade(Blade::generator(*j))),
            Factor::DiffX(j) => OperatorExpr::Prim(PrimOp::DiffX(*j)),
            Factor::DiffU(j) => OperatorExpr::Prim(PrimOp::DiffU(*j)),
            Factor::D2 => build_d2(params, D2Form::Twistor)?,
        })
    }

    pub fn token(&self) -> String {
        fn pow(base: &str, n: u32) -> String {
            if n == 1 {
                base.to_string()
            } else {
                format!("{base}^{n}")
            }
        }
        match self {
            Factor::Dx(n) => pow("Dx", *n),
            Factor::LapX => "Lap_x".to_string(),
            Factor::UdotDx(n) => pow("<u,Dx>", *n),
            Factor::DudotDx(n) => pow("<Du,Dx>", *n),
            Factor::VecU(n) => pow("u", *n),
            Factor::NormU2 => "|u|^2".to_string(),
            Factor::CoordX(j) => format!("x{j}"),
            Factor::CoordU(j) => format!("u{j}"),
            Factor::BladeE(j) => format!("e{j}"),
            Factor::DiffX(j) => format!("d_x{j}"),
            Factor::DiffU(j) => format!("d_u{j}"),
            Factor::D2 => "D2".to_string(),
        }
    }
}

/// One summand: a rational coefficient times a word of factors, leftmost
/// factor outermost.
#[derive(Debug, Clone)]
pub struct OpTerm {
    pub coeff: Rat,
    pub factors: Vec<Factor>,
}

impl OpTerm {
    pub fn new(coeff: Rat, factors: Vec<Factor>) -> Self {
        OpTerm { coeff, factors }
    }

    pub fn to_expr(&self, params: SpaceParams) -> Result<OperatorExpr> {
        let mut parts = vec![OperatorExpr::scalar(self.coeff.clone())];
        for f in &self.factors {
            parts.push(f.to_expr(params)?);
        }
        Ok(OperatorExpr::Compose(parts))
    }

    pub fn render(&self, first: bool) -> String {
        let tokens: String = self.factors.iter().map(|f| f.token()).collect();
        super::render_term(&self.coeff, &tokens, first)
    }
}

/// Expand a term list into a single operator expression.
pub fn terms_to_expr(terms: &[OpTerm], params: SpaceParams) -> Result<OperatorExpr> {
    let mut parts = Vec::with_capacity(terms.len());
    for t in terms {
        parts.push(t.to_expr(params)?);
    }
    Ok(OperatorExpr::Sum(parts))
}

/// Render a term list as a formula string.
pub fn render_terms(terms: &[OpTerm]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        out.push_str(&t.render(i == 0));
    }
    out
}

use Factor::*;

/// `[Dx^3, C3(j)]` equals:
/// `4 <u,Dx> Dx d_uj - 2 u d_uj Dx^2 - 4 u_j Dx <Du,Dx> + 6 x_j Dx^3`.
pub fn commutator_dx3_c3(_m: u32, _k: u32, j: usize) -> Vec<OpTerm> {
    vec![
        OpTerm::new(rat(4, 1), vec![UdotDx(1), Dx(1), DiffU(j)]),
        OpTerm::new(rat(-2, 1), vec![VecU(1), DiffU(j), Dx(2)]),
        OpTerm::new(rat(-4, 1), vec![CoordU(j), Dx(1), DudotDx(1)]),
        OpTerm::new(rat(6, 1), vec![CoordX(j), Dx(3)]),
    ]
}

/// `[<u,Dx><Du,Dx>Dx, C3(j)]` equals:
/// `-(m+2k) <u,Dx> Dx d_uj - e_j u <Du,Dx> Dx + (m+2k-2) u_j <Du,Dx> Dx
///  - 2 u <u,Dx><Du,Dx> d_uj - 2 |u|^2 <Du,Dx> Dx d_uj
///  + 6 x_j <u,Dx><Du,Dx> Dx`.
pub fn commutator_mixed1_c3(m: u32, k: u32, j: usize) -> Vec<OpTerm> {
    let (m, k) = (m as i64, k as i64);
    vec![
        OpTerm::new(rat(-(m + 2 * k), 1), vec![UdotDx(1), Dx(1), DiffU(j)]),
        OpTerm::new(rat(-1, 1), vec![BladeE(j), VecU(1), DudotDx(1), Dx(1)]),
        OpTerm::new(rat(m + 2 * k - 2, 1), vec![CoordU(j), DudotDx(1), Dx(1)]),
        OpTerm::new(rat(-2, 1), vec![VecU(1), UdotDx(1), DudotDx(1), DiffU(j)]),
        OpTerm::new(rat(-2, 1), vec![NormU2, DudotDx(1), Dx(1), DiffU(j)]),
        OpTerm::new(rat(6, 1), vec![CoordX(j), UdotDx(1), DudotDx(1), Dx(1)]),
    ]
}

/// `[|u|^2 <Du,Dx>^2 Dx, C3(j)]` equals:
/// `2 |u|^2 <Du,Dx>^2 e_j - (2m+4k-4) |u|^2 <Du,Dx> Dx d_uj
///  - 2 u |u|^2 <Du,Dx>^2 d_uj + 6 x_j |u|^2 <Du,Dx>^2 Dx`.
pub fn commutator_normsq_c3(m: u32, k: u32, j: usize) -> Vec<OpTerm> {
    let (m, k) = (m as i64, k as i64);
    vec![
        OpTerm::new(rat(2, 1), vec![NormU2, DudotDx(2), BladeE(j)]),
        OpTerm::new(
            rat(-(2 * m + 4 * k - 4), 1),
            vec![NormU2, DudotDx(1), Dx(1), DiffU(j)],
        ),
        OpTerm::new(rat(-2, 1), vec![VecU(1), NormU2, DudotDx(2), DiffU(j)]),
        OpTerm::new(rat(6, 1), vec![CoordX(j), NormU2, DudotDx(2), Dx(1)]),
    ]
}

/// `[u <Du,Dx> Dx^2, C3(j)]` equals:
/// `-2 e_j u <Du,Dx> Dx - 4 u_j <Du,Dx> Dx - (m+2k) u Dx^2 d_uj
///  + 4 u <u,Dx><Du,Dx> d_uj - 4 u_j u <Du,Dx>^2 + 6 x_j u <Du,Dx> Dx^2`.
pub fn commutator_udomega_c3(m: u32, k: u32, j: usize) -> Vec<OpTerm> {
    let (m, k) = (m as i64, k as i64);
    vec![
        OpTerm::new(rat(-2, 1), vec![BladeE(j), VecU(1), DudotDx(1), Dx(1)]),
        OpTerm::new(rat(-4, 1), vec![CoordU(j), DudotDx(1), Dx(1)]),
        OpTerm::new(rat(-(m + 2 * k), 1), vec![VecU(1), Dx(2), DiffU(j)]),
        OpTerm::new(rat(4, 1), vec![VecU(1), UdotDx(1), DudotDx(1), DiffU(j)]),
        OpTerm::new(rat(-4, 1), vec![CoordU(j), VecU(1), DudotDx(2)]),
        OpTerm::new(rat(6, 1), vec![CoordX(j), VecU(1), DudotDx(1), Dx(2)]),
    ]
}

/// `[u <u,Dx><Du,Dx>^2, C3(j)]` equals:
/// `- e_j |u|^2 <Du,Dx>^2 - (2m+4k-4) u <u,Dx><Du,Dx> d_uj
///  - 2 u |u|^2 <Du,Dx>^2 d_uj + (m+2k-2) u_j u <Du,Dx>^2
///  + 6 x_j u <u,Dx><Du,Dx>^2`.
pub fn commutator_usandwich_c3(m: u32, k: u32, j: usize) -> Vec<OpTerm> {
    let (m, k) = (m as i64, k as i64);
    vec![
        OpTerm::new(rat(-1, 1), vec![BladeE(j), NormU2, DudotDx(2)]),
        OpTerm::new(
            rat(-(2 * m + 4 * k - 4), 1),
            vec![VecU(1), UdotDx(1), DudotDx(1), DiffU(j)],
        ),
        OpTerm::new(rat(-2, 1), vec![VecU(1), NormU2, DudotDx(2), DiffU(j)]),
        OpTerm::new(rat(m + 2 * k - 2, 1), vec![CoordU(j), VecU(1), DudotDx(2)]),
        OpTerm::new(rat(6, 1), vec![CoordX(j), VecU(1), UdotDx(1), DudotDx(2)]),
    ]
}

/// `[u^3 <Du,Dx>^3, C3(j)]` equals:
/// `-(m+6k-10) u^3 <Du,Dx>^2 d_uj + 6 x_j u^3 <Du,Dx>^3`.
pub fn commutator_ucubed_c3(m: u32, k: u32, j: usize) -> Vec<OpTerm> {
    let (m, k) = (m as i64, k as i64);
    vec![
        OpTerm::new(
            rat(-(m + 6 * k - 10), 1),
            vec![VecU(3), DudotDx(2), DiffU(j)],
        ),
        OpTerm::new(rat(6, 1), vec![CoordX(j), VecU(3), DudotDx(3)]),
    ]
}

/// `[D2^2, C4(j)]` equals:
/// `-8 x_j D2^2 + 32/(m+2k-2)^2 <u,Dx> Lap_x d_uj
///  - 32/(m+2k-2)^2 u_j <Du,Dx> Lap_x
///  - 128/((m+2k-2)^2 (m+2k-4)) <u,Dx>^2 <Du,Dx> d_uj
///  + 128/((m+2k-2)^2 (m+2k-4)^2) |u|^2 <Du,Dx> Lap_x d_uj
///  - 128/((m+2k-2)^2 (m+2k-4)^2) |u|^2 <Du,Dx>^2 d_xj
///  + 128/((m+2k-2)^2 (m+2k-4)) u_j <u,Dx> <Du,Dx>^2
///  + 128/((m+2k-2)^2 (m+2k-4)^2) |u|^2 <u,Dx> <Du,Dx>^2 d_uj
///  - 128/((m+2k-2)^2 (m+2k-4)^2) u_j |u|^2 <Du,Dx>^3`.
pub fn commutator_d2sq_c4(m: u32, k: u32, j: usize) -> Vec<OpTerm> {
    let (m, k) = (m as i64, k as i64);
    let c2 = m + 2 * k - 2;
    let c4 = m + 2 * k - 4;
    vec![
        OpTerm::new(rat(-8, 1), vec![CoordX(j), D2, D2]),
        OpTerm::new(rat(32, c2 * c2), vec![UdotDx(1), LapX, DiffU(j)]),
        OpTerm::new(rat(-32, c2 * c2), vec![CoordU(j), DudotDx(1), LapX]),
        OpTerm::new(
            rat(-128, c2 * c2 * c4),
            vec![UdotDx(2), DudotDx(1), DiffU(j)],
        ),
        OpTerm::new(
            rat(128, c2 * c2 * c4 * c4),
            vec![NormU2, DudotDx(1), LapX, DiffU(j)],
        ),
        OpTerm::new(
            rat(-128, c2 * c2 * c4 * c4),
            vec![NormU2, DudotDx(2), DiffX(j)],
        ),
        OpTerm::new(
            rat(128, c2 * c2 * c4),
            vec![CoordU(j), UdotDx(1), DudotDx(2)],
        ),
        OpTerm::new(
            rat(128, c2 * c2 * c4 * c4),
            vec![NormU2, UdotDx(1), DudotDx(2), DiffU(j)],
        ),
        OpTerm::new(
            rat(-128, c2 * c2 * c4 * c4),
            vec![CoordU(j), NormU2, DudotDx(3)],
        ),
    ]
}

/// `[D2 Lap_x, C4(j)]` equals:
/// `-8 x_j D2 Lap_x + (4m+8k-16)/(m+2k-2) <u,Dx> Lap_x d_uj
///  - 16/(m+2k-2) <u,Dx>^2 <Du,Dx> d_uj
///  + 16/((m+2k-2)(m+2k-4)) |u|^2 <Du,Dx> Lap_x d_uj
///  + 16/((m+2k-2)(m+2k-4)) |u|^2 <u,Dx> <Du,Dx>^2 d_uj
///  - (4m+8k-16)/(m+2k-2) u_j <Du,Dx> Lap_x
///  + 16/(m+2k-2) u_j <u,Dx> <Du,Dx>^2
///  - 16/((m+2k-2)(m+2k-4)) |u|^2 <Du,Dx>^2 d_xj
///  - 16/((m+2k-2)(m+2k-4)) u_j |u|^2 <Du,Dx>^3`.
pub fn commutator_d2lap_c4(m: u32, k: u32, j: usize) -> Vec<OpTerm> {
    let (m, k) = (m as i64, k as i64);
    let c2 = m + 2 * k - 2;
    let c4 = m + 2 * k - 4;
    vec![
        OpTerm::new(rat(-8, 1), vec![CoordX(j), D2, LapX]),
        OpTerm::new(rat(4 * m + 8 * k - 16, c2), vec![UdotDx(1), LapX, DiffU(j)]),
        OpTerm::new(rat(-16, c2), vec![UdotDx(2), DudotDx(1), DiffU(j)]),
        OpTerm::new(rat(16, c2 * c4), vec![NormU2, DudotDx(1), LapX, DiffU(j)]),
        OpTerm::new(
            rat(16, c2 * c4),
            vec![NormU2, UdotDx(1), DudotDx(2), DiffU(j)],
        ),
        OpTerm::new(
            rat(-(4 * m + 8 * k - 16), c2),
            vec![CoordU(j), DudotDx(1), LapX],
        ),
        OpTerm::new(rat(16, c2), vec![CoordU(j), UdotDx(1), DudotDx(2)]),
        OpTerm::new(rat(-16, c2 * c4), vec![NormU2, DudotDx(2), DiffX(j)]),
        OpTerm::new(rat(-16, c2 * c4), vec![CoordU(j), NormU2, DudotDx(3)]),
    ]
}

/// The operator word on the left side of each lemma, as a term list (used to
/// build the commutator and to render check formulas).
pub fn lemma_lhs_word(name: LemmaName, j: usize) -> Vec<OpTerm> {
    let one = rat(1, 1);
    let _ = j;
    match name {
        LemmaName::Dx3 => vec![OpTerm::new(one, vec![Dx(3)])],
        LemmaName::Mixed1 => vec![OpTerm::new(one, vec![UdotDx(1), DudotDx(1), Dx(1)])],
        LemmaName::NormSq => vec![OpTerm::new(one, vec![NormU2, DudotDx(2), Dx(1)])],
        LemmaName::UDOmega => vec![OpTerm::new(one, vec![VecU(1), DudotDx(1), Dx(2)])],
        LemmaName::USandwich => vec![OpTerm::new(one, vec![VecU(1), UdotDx(1), DudotDx(2)])],
        LemmaName::UCubed => vec![OpTerm::new(one, vec![VecU(3), DudotDx(3)])],
        LemmaName::D2Sq => vec![OpTerm::new(one, vec![D2, D2])],
        LemmaName::D2Lap => vec![OpTerm::new(one, vec![D2, LapX])],
    }
}

/// Identifier for each commutator lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaName {
    Dx3,
    Mixed1,
    NormSq,
    UDOmega,
    USandwich,
    UCubed,
    D2Sq,
    D2Lap,
}

impl LemmaName {
    pub const ALL_C3: [LemmaName; 6] = [
        LemmaName::Dx3,
        LemmaName::Mixed1,
        LemmaName::NormSq,
        LemmaName::UDOmega,
        LemmaName::USandwich,
        LemmaName::UCubed,
    ];

    pub const ALL_C4: [LemmaName; 2] = [LemmaName::D2Sq, LemmaName::D2Lap];

    pub fn rhs(self, m: u32, k: u32, j: usize) -> Vec<OpTerm> {
        match self {
            LemmaName::Dx3 => commutator_dx3_c3(m, k, j),
            LemmaName::Mixed1 => commutator_mixed1_c3(m, k, j),
            LemmaName::NormSq => commutator_normsq_c3(m, k, j),
            LemmaName::UDOmega => commutator_udomega_c3(m, k, j),
            LemmaName::USandwich => commutator_usandwich_c3(m, k, j),
            LemmaName::UCubed => commutator_ucubed_c3(m, k, j),
            LemmaName::D2Sq => commutator_d2sq_c4(m, k, j),
            LemmaName::D2Lap => commutator_d2lap_c4(m, k, j),
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            LemmaName::Dx3 => "dx_cubed",
            LemmaName::Mixed1 => "udx_dudx_dx",
            LemmaName::NormSq => "normsq_dudx2_dx",
            LemmaName::UDOmega => "u_dudx_dx2",
            LemmaName::USandwich => "u_udx_dudx2",
            LemmaName::UCubed => "ucubed_dudx3",
            LemmaName::D2Sq => "d2_squared",
            LemmaName::D2Lap => "d2_laplacian",
        }
    }

    /// True for the six lemmas commuting against the third-order generator.
    pub fn against_c3(self) -> bool {
        !matches!(self, LemmaName::D2Sq | LemmaName::D2Lap)
    }
}
