//! Human-readable operator descriptions for `render-op`: the symbolic
//! formula plus the instantiation with concrete rational coefficients.

use higherspin::ops::{self, D2Form, D4Form, OperatorExpr};
use higherspin::scalar::{rat, rat_to_string, Rat};
use higherspin::spaces::SpaceParams;

pub struct Rendered {
    pub expr: OperatorExpr,
    pub symbolic: String,
    pub concrete: String,
    pub domain: &'static str,
}

fn coeff(c: Rat) -> String {
    rat_to_string(&c)
}

fn signed(first: bool, c: &Rat, word: &str) -> String {
    ops::render_term(c, word, first)
}

pub fn known_operators() -> &'static [&'static str] {
    &[
        "dx",
        "lap-x",
        "euler-x",
        "u-dot-dx",
        "du-dot-dx",
        "x-dot-du",
        "rk",
        "tk",
        "tk-star",
        "tk2",
        "tk2-star",
        "d2",
        "d2-factored",
        "d2-p1",
        "d2-p1-trailing-dx",
        "d3",
        "d4",
        "d4-twistor",
        "c3",
        "c4",
    ]
}

pub fn render(name: &str, params: SpaceParams, axis: usize) -> Result<Rendered, String> {
    let m = params.m;
    let (mi, ki) = (params.m as i64, params.k as i64);
    let a = mi + 2 * ki;
    let b = mi + 2 * ki - 2;
    let c = mi + 2 * ki - 4;
    let d = mi + 6 * ki - 10;
    let build_err = |e: higherspin::Error| e.to_string();
    match name {
        "dx" => Ok(Rendered {
            expr: ops::dirac_x(m),
            symbolic: "Dx = sum_i e_i d_xi".into(),
            concrete: "Dx".into(),
            domain: "all weighted functions",
        }),
        "lap-x" => Ok(Rendered {
            expr: ops::laplace_x(m),
            symbolic: "Lap_x = sum_i d_xi^2".into(),
            concrete: "Lap_x".into(),
            domain: "all weighted functions",
        }),
        "euler-x" => Ok(Rendered {
            expr: ops::euler_x(m),
            symbolic: "E_x = sum_i x_i d_xi".into(),
            concrete: "E_x".into(),
            domain: "all weighted functions",
        }),
        "u-dot-dx" => Ok(Rendered {
            expr: ops::u_dot_dx(m),
            symbolic: "<u,Dx> = sum_i u_i d_xi".into(),
            concrete: "<u,Dx>".into(),
            domain: "all weighted functions",
        }),
        "du-dot-dx" => Ok(Rendered {
            expr: ops::du_dot_dx(m),
            symbolic: "<Du,Dx> = sum_i d_ui d_xi".into(),
            concrete: "<Du,Dx>".into(),
            domain: "all weighted functions",
        }),
        "x-dot-du" => Ok(Rendered {
            expr: ops::x_dot_du(m),
            symbolic: "<x,Du> = sum_i x_i d_ui".into(),
            concrete: "<x,Du>".into(),
            domain: "all weighted functions",
        }),
        "rk" => Ok(Rendered {
            expr: ops::build_rk(params).map_err(build_err)?,
            symbolic: "R_k = (1 + u D_u/(m+2k-2)) Dx".into(),
            concrete: format!("R_k = (1 + {} u D_u) Dx", coeff(rat(1, b))),
            domain: "M_k-valued functions",
        }),
        "tk" => Ok(Rendered {
            expr: ops::build_twistors(params).map_err(build_err)?.tk,
            symbolic: "T_k = (1 + u D_u/(m+2k-2)) Dx, from u M_(k-1)-valued into M_k-valued".into(),
            concrete: format!("T_k = (1 + {} u D_u) Dx", coeff(rat(1, b))),
            domain: "u M_(k-1)-valued functions",
        }),
        "tk-star" => Ok(Rendered {
            expr: ops::build_twistors(params).map_err(build_err)?.tk_star,
            symbolic: "T_k* = (u D_u/(m+2k-2)) Dx, from M_k-valued into u M_(k-1)-valued".into(),
            concrete: format!("T_k* = {} u D_u Dx", coeff(rat(1, b))),
            domain: "M_k-valued functions",
        }),
        "tk2" => Ok(Rendered {
            expr: ops::build_twistors(params).map_err(build_err)?.tk2,
            symbolic: "T_k2 = <u,Dx> - |u|^2<Du,Dx>/(m+2k-4)".into(),
            concrete: format!(
                "T_k2 = <u,Dx>{}",
                signed(false, &rat(-1, c), "|u|^2<Du,Dx>")
            ),
            domain: "H_(k-1)-valued functions",
        }),
        "tk2-star" => Ok(Rendered {
            expr: ops::build_twistors(params).map_err(build_err)?.tk2_star,
            symbolic: "T_k2* = <Du,Dx>".into(),
            concrete: "T_k2* = <Du,Dx>".into(),
            domain: "H_k-valued functions",
        }),
        "d2" => Ok(Rendered {
            expr: ops::build_d2(params, D2Form::Twistor).map_err(build_err)?,
            symbolic: "D2 = Lap_x - 4 T_k2 T_k2*/(m+2k-2) \
                       = Lap_x - 4/(m+2k-2) <u,Dx><Du,Dx> + 4/((m+2k-2)(m+2k-4)) |u|^2<Du,Dx>^2"
                .into(),
            concrete: format!(
                "D2 = Lap_x{}{}",
                signed(false, &rat(-4, b), "<u,Dx><Du,Dx>"),
                signed(false, &rat(4, b * c), "|u|^2<Du,Dx>^2"),
            ),
            domain: "H_k-valued functions",
        }),
        "d2-factored" => Ok(Rendered {
            expr: ops::build_d2(params, D2Form::Factored).map_err(build_err)?,
            symbolic: "D2 = -R_k^2 + 4 u<Du,Dx> R_k/((m+2k-2)(m+2k-4)), on M_k-valued inputs"
                .into(),
            concrete: format!(
                "D2 = -R_k^2{}",
                signed(false, &rat(4, b * c), "u<Du,Dx>R_k")
            ),
            domain: "M_k-valued functions",
        }),
        "d2-p1" => Ok(Rendered {
            expr: ops::build_d2(params, D2Form::P1).map_err(build_err)?,
            symbolic: "D2 = P_1 (Lap_x - 4<u,Dx><Du,Dx>/(m+2k-2))".into(),
            concrete: format!(
                "D2 = P_1 (Lap_x{})",
                signed(false, &rat(-4, b), "<u,Dx><Du,Dx>")
            ),
            domain: "H_k-valued functions",
        }),
        "d2-p1-trailing-dx" => Ok(Rendered {
            expr: ops::build_d2(params, D2Form::P1TrailingDx).map_err(build_err)?,
            symbolic: "P_1 (Lap_x - 4<u,Dx><Du,Dx>Dx/(m+2k-2)): third order; kept only so the \
                       verifier can report that it does not match the reference form"
                .into(),
            concrete: format!(
                "P_1 (Lap_x{})",
                signed(false, &rat(-4, b), "<u,Dx><Du,Dx>Dx")
            ),
            domain: "H_k-valued functions (not a second-order operator)",
        }),
        "d3" => Ok(Rendered {
            expr: ops::build_d3(params).map_err(build_err)?,
            symbolic: "D3 = Dx^3 + 4/(m+2k) <u,Dx><Du,Dx>Dx \
                       - 4/((m+2k)(m+2k-2)) |u|^2<Du,Dx>^2 Dx \
                       - 2/(m+2k) u<Du,Dx>Dx^2 \
                       - 8/((m+2k)(m+2k-2)) u<u,Dx><Du,Dx>^2 \
                       - 8/((m+2k)(m+2k-2)(m+6k-10)) u^3<Du,Dx>^3"
                .into(),
            concrete: format!(
                "D3 = Dx^3{}{}{}{}{}",
                signed(false, &rat(4, a), "<u,Dx><Du,Dx>Dx"),
                signed(false, &rat(-4, a * b), "|u|^2<Du,Dx>^2 Dx"),
                signed(false, &rat(-2, a), "u<Du,Dx>Dx^2"),
                signed(false, &rat(-8, a * b), "u<u,Dx><Du,Dx>^2"),
                signed(false, &rat(-8, a * b * d), "u^3<Du,Dx>^3"),
            ),
            domain: "M_k-valued functions",
        }),
        "d4" => Ok(Rendered {
            expr: ops::build_d4(params, D4Form::Defining).map_err(build_err)?,
            symbolic: "D4 = D2^2 - 8 D2 Lap_x/((m+2k-2)(m+2k-4))".into(),
            concrete: format!("D4 = D2^2{}", signed(false, &rat(-8, b * c), "D2 Lap_x")),
            domain: "H_k-valued functions",
        }),
        "d4-twistor" => Ok(Rendered {
            expr: ops::build_d4(params, D4Form::Twistor).map_err(build_err)?,
            symbolic: "D4 = (m+2k)(m+2k-6)/((m+2k-2)(m+2k-4)) D2^2 \
                       - 32 D2 T_k2 T_k2*/((m+2k-2)^2(m+2k-4))"
                .into(),
            concrete: format!(
                "D4 = {}{}",
                signed(true, &rat(a * (a - 6), b * c), "D2^2"),
                signed(false, &rat(-32, b * b * c), "D2 T_k2 T_k2*"),
            ),
            domain: "H_k-valued functions",
        }),
        "c3" => Ok(Rendered {
            expr: ops::build_c3(params, axis).map_err(build_err)?,
            symbolic: "C3(j) = x e_j - 2<u,x>d_uj + 2u_j<x,Du> - |x|^2 d_xj + x_j(2E_x + m - 2)"
                .into(),
            concrete: format!(
                "C3({axis}) = x e{axis} - 2 <u,x>d_u{axis} + 2 u{axis}<x,Du> - |x|^2 d_x{axis} \
                 + x{axis}(2E_x + {})",
                mi - 2
            ),
            domain: "M_k-valued functions",
        }),
        "c4" => Ok(Rendered {
            expr: ops::build_c4(params, axis).map_err(build_err)?,
            symbolic: "C4(j) = 2<u,x>d_uj - 2u_j<x,Du> + |x|^2 d_xj - x_j(2E_x + m - 4)".into(),
            concrete: format!(
                "C4({axis}) = 2 <u,x>d_u{axis} - 2 u{axis}<x,Du> + |x|^2 d_x{axis} \
                 - x{axis}(2E_x + {})",
                mi - 4
            ),
            domain: "H_k-valued functions",
        }),
        other => Err(format!(
            "unknown operator `{other}` (known: {})",
            known_operators().join(", ")
        )),
    }
}
