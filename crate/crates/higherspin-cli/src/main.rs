//! Command-line front end: verification sweeps, space listings, fundamental
//! solutions, the check catalog, and operator rendering.
//!
//! Exit codes: 0 when every asserted check passes (always 0 for the
//! benchmarking float mode), 1 when a check fails, 2 on configuration
//! errors.

mod config;
mod render;

use clap::{Args, Parser, Subcommand};
use higherspin::conformal::{self, FundSolKind};
use higherspin::ops::apply;
use higherspin::spaces::{
    harmonic_basis, monogenic_basis, monomial_basis, reproducing_kernel, SpaceParams, SpaceTag,
};
use higherspin::verify::{self, Mode};

use config::CliConfig;

#[derive(Parser)]
#[command(
    name = "higherspin",
    about = "Exact verification toolkit for conformally invariant operators on higher spin spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over a parameter grid and write a JSON report.
    Verify(VerifyArgs),
    /// Emit basis listings and dimensions for P_k, H_k, M_k as JSON.
    Spaces(SpacesArgs),
    /// Emit fundamental solutions and the (zero) result of applying the
    /// operator to them.
    Fundsol(FundsolArgs),
    /// List every registered check with the identity it decides.
    Catalog(CatalogArgs),
    /// Render a named operator at concrete parameters.
    RenderOp(RenderOpArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated suite names (or `all`).
    #[arg(long)]
    suite: Option<String>,
    /// Comma-separated dimensions.
    #[arg(long)]
    m: Option<String>,
    /// Comma-separated homogeneity degrees.
    #[arg(long)]
    k: Option<String>,
    /// Maximum x-degree of the test sweeps.
    #[arg(long)]
    xdeg: Option<u32>,
    /// Coefficient mode: exact | float (float is benchmarking only and
    /// never gates).
    #[arg(long)]
    mode: Option<String>,
    /// Report output path (relative paths land in $HIGHERSPIN_REPORT_DIR
    /// when set).
    #[arg(long)]
    out: Option<String>,
    /// Seed for the randomized property checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Plain-text key-value config file; flags override it.
    #[arg(long)]
    config: Option<String>,
    /// Print the effective configuration and exit without running.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct SpacesArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    k: u32,
    /// Which space: pk | hk | mk | all.
    #[arg(long, default_value = "all")]
    space: String,
    /// Include the reproducing kernel in the output.
    #[arg(long)]
    kernel: bool,
}

#[derive(Args)]
struct FundsolArgs {
    /// Which operator: d3 | d4.
    #[arg(long)]
    which: String,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    k: u32,
    /// Use the reproducing-kernel slice instead of the basis elements.
    #[arg(long)]
    kernel: bool,
}

#[derive(Args)]
struct CatalogArgs {
    /// Emit JSON instead of text lines.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenderOpArgs {
    /// Operator name (see `render-op --name help`).
    #[arg(long)]
    name: String,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    k: u32,
    /// Axis j for the special conformal generators.
    #[arg(long, default_value_t = 1)]
    axis: usize,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Spaces(args) => cmd_spaces(args),
        Command::Fundsol(args) => cmd_fundsol(args),
        Command::Catalog(args) => cmd_catalog(args),
        Command::RenderOp(args) => cmd_render_op(args),
    };
    std::process::exit(code);
}

fn config_error(msg: &str) -> i32 {
    eprintln!("configuration error: {msg}");
    2
}

/// Print to stdout, exiting quietly when the consumer closed the pipe
/// (e.g. `higherspin catalog | head`).
fn print_out(text: &str) {
    use std::io::Write;
    if std::io::stdout().write_all(text.as_bytes()).is_err() {
        std::process::exit(0);
    }
}

fn cmd_verify(args: VerifyArgs) -> i32 {
    let mut cfg = CliConfig::default();
    if let Some(path) = &args.config {
        if let Err(e) = config::load_file(&mut cfg, path) {
            return config_error(&e);
        }
    }
    if let Some(s) = &args.suite {
        cfg.run.suites = s.split(',').map(|x| x.trim().to_string()).collect();
    }
    if let Some(s) = &args.m {
        match config::parse_u32_list(s) {
            Ok(v) => cfg.run.ms = v,
            Err(e) => return config_error(&e),
        }
    }
    if let Some(s) = &args.k {
        match config::parse_u32_list(s) {
            Ok(v) => cfg.run.ks = v,
            Err(e) => return config_error(&e),
        }
    }
    if let Some(d) = args.xdeg {
        cfg.run.max_x_degree = d;
    }
    if let Some(s) = &args.mode {
        match config::parse_mode(s) {
            Ok(m) => cfg.run.mode = m,
            Err(e) => return config_error(&e),
        }
    }
    if let Some(o) = &args.out {
        cfg.out = o.clone();
    }
    if let Some(seed) = args.seed {
        cfg.run.seed = seed;
    }
    if let Some(w) = args.workers {
        if w == 0 {
            cfg.run.workers = higherspin::util::default_workers();
            cfg.workers_auto = true;
        } else {
            cfg.run.workers = w;
            cfg.workers_auto = false;
        }
    }
    if cfg.run.ms.is_empty() || cfg.run.ks.is_empty() {
        return config_error("empty parameter grid");
    }
    if args.dump_config {
        print!("{}", config::dump(&cfg));
        return 0;
    }

    let report = match verify::run_suite(&cfg.run) {
        Ok(r) => r,
        Err(e) => return config_error(&e.to_string()),
    };
    let out_path = config::resolve_out_path(&cfg.out);
    if let Err(e) = std::fs::write(&out_path, report.to_json()) {
        eprintln!("cannot write report to {}: {e}", out_path.display());
        return 2;
    }
    print_out(&report.render_lines());
    print_out(&format!("report written to {}\n", out_path.display()));
    if cfg.run.mode == Mode::Float {
        // Benchmarking mode never gates.
        return 0;
    }
    if report.has_failures() {
        1
    } else {
        0
    }
}

fn cmd_spaces(args: SpacesArgs) -> i32 {
    let params = match SpaceParams::new(args.m, args.k) {
        Ok(p) => p,
        Err(e) => return config_error(&e.to_string()),
    };
    let mut spaces = Vec::new();
    let mut push = |tag: &str, dim: usize, elements: Vec<String>| {
        spaces.push(serde_json::json!({
            "tag": tag,
            "dim": dim,
            "elements": elements,
        }));
    };
    let want = |name: &str| args.space == "all" || args.space == name;
    if want("pk") {
        let b = monomial_basis(params);
        push(
            "P_k",
            b.dim(),
            b.elements().iter().map(|f| f.render()).collect(),
        );
    }
    if want("hk") {
        let b = harmonic_basis(params);
        push(
            "H_k",
            b.dim(),
            b.elements().iter().map(|f| f.render()).collect(),
        );
    }
    if want("mk") {
        match monogenic_basis(params) {
            Ok(b) => push(
                "M_k",
                b.dim(),
                b.elements().iter().map(|f| f.render()).collect(),
            ),
            Err(e) => return config_error(&e.to_string()),
        }
    }
    if !["all", "pk", "hk", "mk"].contains(&args.space.as_str()) {
        return config_error(&format!("unknown space `{}` (pk|hk|mk|all)", args.space));
    }
    let mut doc = serde_json::json!({
        "m": args.m,
        "k": args.k,
        "spaces": spaces,
    });
    if args.kernel {
        let zh = reproducing_kernel(params, SpaceTag::Hk);
        let zm = reproducing_kernel(params, SpaceTag::Mk);
        match (zh, zm) {
            (Ok(zh), Ok(zm)) => {
                doc["kernels"] = serde_json::json!({
                    "H_k": zh.render(),
                    "M_k": zm.render(),
                });
            }
            (Err(e), _) | (_, Err(e)) => return config_error(&e.to_string()),
        }
    }
    print_out(&format!(
        "{}\n",
        serde_json::to_string_pretty(&doc).expect("json")
    ));
    0
}

fn cmd_fundsol(args: FundsolArgs) -> i32 {
    let params = match SpaceParams::new(args.m, args.k) {
        Ok(p) => p,
        Err(e) => return config_error(&e.to_string()),
    };
    let which = match args.which.as_str() {
        "d3" => FundSolKind::D3,
        "d4" => FundSolKind::D4,
        other => return config_error(&format!("unknown operator `{other}` (d3|d4)")),
    };
    let operator = match which {
        FundSolKind::D3 => higherspin::ops::build_d3(params),
        FundSolKind::D4 => higherspin::ops::build_d4(params, higherspin::ops::D4Form::Defining),
    };
    let operator = match operator {
        Ok(op) => op,
        Err(e) => return config_error(&e.to_string()),
    };
    let inputs: Vec<(String, higherspin::WeightedFunction)> = if args.kernel {
        let tag = match which {
            FundSolKind::D3 => SpaceTag::Mk,
            FundSolKind::D4 => SpaceTag::Hk,
        };
        match reproducing_kernel(params, tag) {
            Ok(z) => vec![("Z_k(u, v)".to_string(), z)],
            Err(e) => return config_error(&e.to_string()),
        }
    } else {
        let basis = match which {
            FundSolKind::D3 => monogenic_basis(params).map(|b| b.elements().to_vec()),
            FundSolKind::D4 => Ok(harmonic_basis(params).elements().to_vec()),
        };
        match basis {
            Ok(els) => els
                .into_iter()
                .enumerate()
                .map(|(i, f)| (format!("basis[{i}]"), f))
                .collect(),
            Err(e) => return config_error(&e.to_string()),
        }
    };
    let name = match which {
        FundSolKind::D3 => "D3",
        FundSolKind::D4 => "D4",
    };
    let mut all_zero = true;
    for (label, f) in inputs {
        let fs = match conformal::fundamental_solution(params, which, &f) {
            Ok(fs) => fs,
            Err(e) => return config_error(&e.to_string()),
        };
        let applied = apply(&operator, &fs);
        all_zero &= applied.is_zero();
        print_out(&format!(
            "input  {label} = {}\nfundsol({label}) = {}\n{name} applied   = {}\n\n",
            f.render(),
            fs.render(),
            applied.render()
        ));
    }
    if all_zero {
        0
    } else {
        eprintln!("unexpected: the operator did not annihilate a fundamental solution");
        1
    }
}

fn cmd_catalog(args: CatalogArgs) -> i32 {
    let entries = verify::catalog();
    if args.json {
        print_out(&format!(
            "{}\n",
            serde_json::to_string_pretty(&entries).expect("catalog json")
        ));
    } else {
        let mut text = String::new();
        for e in &entries {
            text.push_str(&format!(
                "{:<32} [{}] ({})\n    {}\n",
                e.name, e.suite, e.kind, e.anchor
            ));
        }
        text.push_str(&format!(
            "\n{} checks; suites: {}\n",
            entries.len(),
            verify::suite_names().join(", ")
        ));
        print_out(&text);
    }
    0
}

fn cmd_render_op(args: RenderOpArgs) -> i32 {
    let params = match SpaceParams::new(args.m, args.k) {
        Ok(p) => p,
        Err(e) => return config_error(&e.to_string()),
    };
    if args.name == "help" {
        println!("known operators: {}", render::known_operators().join(", "));
        return 0;
    }
    match render::render(&args.name, params, args.axis) {
        Ok(r) => {
            print_out(&format!(
                "{} at (m, k) = ({}, {})\n  domain:   {}\n  symbolic: {}\n  concrete: {}\n  x-order:  {}\n",
                args.name,
                args.m,
                args.k,
                r.domain,
                r.symbolic,
                r.concrete,
                r.expr.x_order()
            ));
            0
        }
        Err(e) => config_error(&e),
    }
}
