//! Command-line interface for spectral-cocycle analysis of substitutions.

mod input;
mod runner;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use subcocycle_core::algebra::{
    classify_number, eigenvalues, is_irreducible_over_q, mahler_jensen, mahler_quadrature,
    perron_data, reciprocal_reduce,
};
use subcocycle_core::iet::{
    enumerate_component, loop_substitution, loop_vertices, rauzy_move_permutation,
    rauzy_substitution, Perm, RauzyMove,
};
use subcocycle_core::trig::build_cocycle_matrix;
use subcocycle_core::verdict::{
    check_theorem1, check_theorem1_analytic, check_theorem2, loop_family_bound,
    loop_family_parameter, zeta_m_family_bound, zeta_m_parameter, Conclusion, Verdict,
};
use subcocycle_core::{IntPolynomial, Substitution};

use input::{parse_loop_spec, parse_polynomial, substitution_to_json, CliError};
use runner::{threaded_report, McArgs};

/// Exit codes: 0 success, 2 bad input or configuration, 3 hypotheses
/// violated, 4 inconclusive.
const EXIT_CONFIG: u8 = 2;
const EXIT_VIOLATED: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "subcocycle", version, about = "Spectral cocycle analysis of substitution dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Args)]
struct SubInput {
    /// Substitution grammar, e.g. "0 -> 01; 1 -> 0".
    #[arg(long, conflicts_with_all = ["file", "family"])]
    sub: Option<String>,
    /// Read the grammar from a file ("-" for stdin).
    #[arg(long, conflicts_with = "family")]
    file: Option<String>,
    /// Built-in family: fibonacci, thue-morse, zeta-m:<m>, loop:<n>.
    #[arg(long)]
    family: Option<String>,
}

impl SubInput {
    fn resolve(&self) -> Result<Substitution, CliError> {
        input::resolve_substitution(
            self.sub.as_deref(),
            self.file.as_deref(),
            self.family.as_deref(),
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Structural report: matrix, characteristic polynomial, primitivity,
    /// Perron data and number-theoretic classification.
    Analyze {
        #[command(flatten)]
        sub: SubInput,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Also emit the cocycle matrix as frequency/coefficient lists.
        #[arg(long)]
        dump_cocycle: bool,
    },
    /// Monte-Carlo Lyapunov exponent estimates, one row per cocycle level.
    Lyapunov {
        #[command(flatten)]
        sub: SubInput,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Combine hypothesis checks and the exponent bound into a verdict.
    Verdict {
        #[command(flatten)]
        sub: SubInput,
        #[command(flatten)]
        mc: McArgs,
        /// Use the two-letter integer-eigenvalue criterion.
        #[arg(long)]
        two_letter: bool,
        /// Assert aperiodicity when no sufficient condition applies.
        #[arg(long)]
        assert_aperiodic: bool,
        /// Use the closed-form family bound instead of Monte-Carlo
        /// (recognized families only).
        #[arg(long)]
        analytic: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Rauzy diagram operations: single moves, loops, classes.
    Rauzy {
        /// Base permutation in one-line notation, e.g. 4321.
        #[arg(long, required_unless_present = "loop_spec")]
        perm: Option<String>,
        /// Apply one move (a or b) to --perm.
        #[arg(long, conflicts_with_all = ["loop_spec", "class"])]
        r#move: Option<String>,
        /// Loop spec, e.g. "base=4321 moves=b,a,a,b,a*n,b,a,a,a n=3".
        #[arg(long)]
        loop_spec: Option<String>,
        /// Enumerate the Rauzy class of --perm.
        #[arg(long)]
        class: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Logarithmic Mahler measures: Jensen formula and torus quadrature.
    Mahler {
        /// Coefficients, highest degree first, e.g. "5,-14,5".
        #[arg(long, conflicts_with_all = ["sub", "file", "family"])]
        poly: Option<String>,
        #[command(flatten)]
        sub: SubInput,
        /// Quadrature grid size per torus dimension (0 = skip quadrature).
        #[arg(long, default_value = "4096")]
        grid: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Exact polynomial toolbox: irreducibility, roots, classification.
    Polynomial {
        /// Coefficients, highest degree first, e.g. "1,-7,11,-7,1".
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    };
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    code
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Analyze { sub, format, dump_cocycle } => {
            let zeta = sub.resolve()?;
            cmd_analyze(&zeta, format, dump_cocycle)
        }
        Command::Lyapunov { sub, mc, format } => {
            let zeta = sub.resolve()?;
            cmd_lyapunov(&zeta, &mc, format)
        }
        Command::Verdict { sub, mc, two_letter, assert_aperiodic, analytic, format } => {
            let zeta = sub.resolve()?;
            cmd_verdict(&zeta, &mc, two_letter, assert_aperiodic, analytic, format)
        }
        Command::Rauzy { perm, r#move, loop_spec, class, format } => {
            cmd_rauzy(perm.as_deref(), r#move.as_deref(), loop_spec.as_deref(), class, format)
        }
        Command::Mahler { poly, sub, grid, format } => cmd_mahler(poly.as_deref(), &sub, grid, format),
        Command::Polynomial { poly, format } => cmd_polynomial(&poly, format),
    }
}

fn poly_display(p: &IntPolynomial) -> Vec<String> {
    // highest degree first, matching the input convention
    p.coeffs().iter().rev().map(|c| c.to_string()).collect()
}

fn cmd_analyze(zeta: &Substitution, format: Format, dump_cocycle: bool) -> Result<ExitCode, CliError> {
    let s = zeta.substitution_matrix();
    let p = s.char_poly();
    let primitive = zeta.is_primitive();
    let irreducible = match is_irreducible_over_q(&p) {
        Ok(v) => Some(v),
        Err(subcocycle_core::Error::Undecided { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let perron = if primitive { Some(perron_data(&s)?) } else { None };
    let class = if irreducible == Some(true) && p.is_monic() {
        Some(classify_number(&p)?)
    } else {
        None
    };
    let roots = eigenvalues(&s)?;
    let mut out = json!({
        "alphabet_size": zeta.dim(),
        "grammar": zeta.to_grammar(),
        "substitution_matrix": matrix_rows(&s),
        "char_poly": poly_display(&p),
        "det": s.det().to_string(),
        "primitive": primitive,
        "constant_length": zeta.is_constant_length(),
        "char_poly_irreducible": irreducible,
        "eigenvalue_moduli": roots.with_multiplicity().iter().map(|z| z.norm()).collect::<Vec<_>>(),
        "theta_1": perron.as_ref().map(|(t, _)| *t),
        "half_log_theta": perron.as_ref().map(|(t, _)| t.ln() / 2.0),
        "perron_vector": perron.as_ref().map(|(_, v)| v.clone()),
        "number_class": class,
    });
    if dump_cocycle {
        let trig = build_cocycle_matrix(zeta);
        out["cocycle"] = substitution_to_json(&trig);
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
        _ => {
            println!("alphabet size   : {}", zeta.dim());
            println!("grammar         : {}", zeta.to_grammar().replace('\n', " ; "));
            println!("matrix          : {:?}", matrix_rows(&s));
            println!("char poly       : {:?}", poly_display(&p));
            println!("det             : {}", s.det());
            println!("primitive       : {primitive}");
            println!("constant length : {}", zeta.is_constant_length());
            match irreducible {
                Some(v) => println!("irreducible     : {v}"),
                None => println!("irreducible     : undecided"),
            }
            if let Some((t, _)) = &perron {
                println!("theta_1         : {t:.12}");
                println!("half log theta  : {:.12}", t.ln() / 2.0);
            }
            if let Some(c) = &class {
                println!("number class    : {:?} (conjugate moduli {:?})", c.kind, c.conjugate_moduli);
            }
            if dump_cocycle {
                println!("cocycle         : {}", out["cocycle"]);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn matrix_rows(s: &subcocycle_core::IntMatrix) -> Vec<Vec<String>> {
    (0..s.dim())
        .map(|i| (0..s.dim()).map(|j| s.entry(i, j).to_string()).collect())
        .collect()
}

fn cmd_lyapunov(zeta: &Substitution, mc: &McArgs, format: Format) -> Result<ExitCode, CliError> {
    let report = threaded_report(zeta, mc)?;
    match format {
        Format::Json => {
            let out = json!({
                "samples": mc.samples,
                "k_max": mc.k_max,
                "seed": mc.seed,
                "sampler": mc.sampler_kind(),
                "per_k": report.per_k,
                "best_upper": report.best_upper,
                "best_k": report.best_k,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Csv => {
            println!("k,samples,mean_log_norm,std_error_log_norm,value,sigma,parseval_bound,upper");
            for ke in &report.per_k {
                let e = &ke.estimate;
                println!(
                    "{},{},{},{},{},{},{},{}",
                    ke.k, e.samples, e.mean_log_norm, e.std_error_log_norm, e.value, e.sigma,
                    ke.parseval_bound, ke.upper
                );
            }
        }
        Format::Table => {
            println!("{:>4} {:>12} {:>12} {:>12} {:>12}", "k", "value", "sigma", "parseval", "upper");
            for ke in &report.per_k {
                println!(
                    "{:>4} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                    ke.k, ke.estimate.value, ke.estimate.sigma, ke.parseval_bound, ke.upper
                );
            }
            println!("best upper bound {:.6} at k = {}", report.best_upper, report.best_k);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verdict(
    zeta: &Substitution,
    mc: &McArgs,
    two_letter: bool,
    assert_aperiodic: bool,
    analytic: bool,
    format: Format,
) -> Result<ExitCode, CliError> {
    let verdict: Verdict = if analytic {
        if two_letter {
            return Err(CliError::Config(
                "the analytic bound is only wired to the general criterion".into(),
            ));
        }
        if let Some(m) = zeta_m_parameter(zeta) {
            let bound = zeta_m_family_bound()?;
            let mut v = check_theorem1_analytic(zeta, bound, assert_aperiodic)?;
            v.checks.push(subcocycle_core::verdict::HypothesisCheck {
                name: "analytic_bound",
                passed: true,
                detail: format!("three-letter family, m = {m}: chi <= {bound:.6}"),
            });
            v
        } else if let Some(n) = loop_family_parameter(zeta) {
            let fb = loop_family_bound(n)?;
            let mut v = check_theorem1_analytic(zeta, fb.integral_bound, assert_aperiodic)?;
            v.checks.push(subcocycle_core::verdict::HypothesisCheck {
                name: "analytic_bound",
                passed: true,
                detail: format!(
                    "loop family, n = {n}: chi <= {:.6}, certified from n = {}",
                    fb.integral_bound, fb.lemma_threshold
                ),
            });
            v
        } else {
            return Err(CliError::Config(
                "no closed-form bound known for this substitution; drop --analytic".into(),
            ));
        }
    } else {
        let report = threaded_report(zeta, mc)?;
        if two_letter {
            check_theorem2(zeta, &report, assert_aperiodic)?
        } else {
            check_theorem1(zeta, &report, assert_aperiodic)?
        }
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&verdict).unwrap()),
        _ => {
            for c in &verdict.checks {
                println!("[{}] {:<40} {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
            }
            if let Some(e) = &verdict.evidence {
                println!(
                    "chi upper {:.6} vs half log theta {:.6} (margin {:+.6}, k = {})",
                    e.chi_upper, e.half_log_theta, e.margin, e.best_k
                );
            }
            println!("conclusion: {:?} ({})", verdict.conclusion, verdict.method);
        }
    }
    Ok(match verdict.conclusion {
        Conclusion::SingularSpectrum => ExitCode::SUCCESS,
        Conclusion::HypothesesViolated => ExitCode::from(EXIT_VIOLATED),
        Conclusion::Inconclusive => ExitCode::from(EXIT_INCONCLUSIVE),
    })
}

/// Render a substitution with 1-based interval labels, the convention for
/// everything Rauzy-related.
fn one_based_images(zeta: &Substitution) -> Vec<String> {
    (0..zeta.dim())
        .map(|a| {
            zeta.image(a)
                .iter()
                .map(|&b| (b + 1).to_string())
                .collect::<Vec<_>>()
                .join(if zeta.dim() > 9 { "," } else { "" })
        })
        .collect()
}

fn cmd_rauzy(
    perm: Option<&str>,
    mv: Option<&str>,
    loop_spec: Option<&str>,
    class: bool,
    format: Format,
) -> Result<ExitCode, CliError> {
    if let Some(spec) = loop_spec {
        let l = parse_loop_spec(spec)?;
        let zeta = loop_substitution(&l)?;
        let verts = loop_vertices(&l)?;
        let s = zeta.substitution_matrix();
        let out = json!({
            "base": l.base.one_line(),
            "moves": l.moves.iter().map(|m| match m { RauzyMove::A => "a", RauzyMove::B => "b" }).collect::<Vec<_>>(),
            "vertices": verts.iter().map(|p| p.one_line()).collect::<Vec<_>>(),
            "images": one_based_images(&zeta),
            "substitution_matrix": matrix_rows(&s),
            "char_poly": poly_display(&s.char_poly()),
        });
        match format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
            _ => {
                let names: Vec<&str> = l
                    .moves
                    .iter()
                    .map(|m| if *m == RauzyMove::A { "a" } else { "b" })
                    .collect();
                println!("loop    : {} via {}", l.base, names.join(","));
                println!("vertices: {}", out["vertices"]);
                for (i, img) in one_based_images(&zeta).iter().enumerate() {
                    println!("  {} -> {}", i + 1, img);
                }
                println!("matrix  : {:?}", matrix_rows(&s));
                println!("charpoly: {:?}", poly_display(&s.char_poly()));
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    let pi = Perm::parse(perm.ok_or_else(|| CliError::Config("--perm required".into()))?)?;
    if class {
        let comp = enumerate_component(&pi)?;
        let names: Vec<String> = comp.iter().map(|p| p.one_line()).collect();
        match format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&json!({"class": names})).unwrap()),
            _ => println!("class of {pi}: {}", names.join(" ")),
        }
        return Ok(ExitCode::SUCCESS);
    }
    let mv = match mv {
        Some("a") => RauzyMove::A,
        Some("b") => RauzyMove::B,
        Some(other) => return Err(CliError::Config(format!("unknown move '{other}' (use a or b)"))),
        None => return Err(CliError::Config("give --move, --class or --loop-spec".into())),
    };
    let next = rauzy_move_permutation(&pi, mv)?;
    let zeta = rauzy_substitution(&pi, mv)?;
    let out = json!({
        "from": pi.one_line(),
        "move": if mv == RauzyMove::A { "a" } else { "b" },
        "to": next.one_line(),
        "images": one_based_images(&zeta),
    });
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
        _ => {
            println!("{pi} --{}--> {next}", if mv == RauzyMove::A { "a" } else { "b" });
            for (i, img) in one_based_images(&zeta).iter().enumerate() {
                println!("  {} -> {}", i + 1, img);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_mahler(
    poly: Option<&str>,
    sub: &SubInput,
    grid: usize,
    format: Format,
) -> Result<ExitCode, CliError> {
    let (label, trig, jensen) = if let Some(text) = poly {
        let p = parse_polynomial(text)?;
        let jensen = mahler_jensen(&p)?;
        (
            format!("polynomial {:?}", poly_display(&p)),
            subcocycle_core::TrigPoly::from_polynomial(&p),
            Some(jensen),
        )
    } else {
        let zeta = sub.resolve()?;
        let trig = build_cocycle_matrix(&zeta).frobenius_norm_sq_poly();
        (format!("|M|_F^2 of {}", zeta.to_grammar().replace('\n', " ; ")), trig, None)
    };
    let quad = if grid > 0 { Some(mahler_quadrature(&trig, grid)?) } else { None };
    let out = json!({
        "input": label,
        "jensen": jensen,
        "quadrature": quad,
        "grid": if grid > 0 { Some(grid) } else { None },
    });
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
        _ => {
            println!("input      : {label}");
            if let Some(j) = jensen {
                println!("jensen     : {j:.12}");
            }
            if let Some(q) = &quad {
                println!("quadrature : {:.12} ({} nodes, {} dropped)", q.value, q.nodes, q.dropped);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_polynomial(text: &str, format: Format) -> Result<ExitCode, CliError> {
    let p = parse_polynomial(text)?;
    let irreducible = match is_irreducible_over_q(&p) {
        Ok(v) => Some(v),
        Err(subcocycle_core::Error::Undecided { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let rs = subcocycle_core::roots::roots(&p)?;
    let class = if irreducible == Some(true) && p.is_monic() {
        Some(classify_number(&p)?)
    } else {
        None
    };
    let reciprocal = if p.degree() == 4 && p.is_monic() && p.is_palindromic() {
        let (q, shifted) = reciprocal_reduce(&p)?;
        Some((poly_display(&q), poly_display(&shifted)))
    } else {
        None
    };
    let out = json!({
        "coefficients": poly_display(&p),
        "degree": p.degree(),
        "monic": p.is_monic(),
        "palindromic": p.is_palindromic(),
        "irreducible": irreducible,
        "roots": rs.roots.iter().map(|(z, m)| json!({"re": z.re, "im": z.im, "multiplicity": m})).collect::<Vec<_>>(),
        "mahler_jensen": mahler_jensen(&p)?,
        "number_class": class,
        "reciprocal_reduction": reciprocal.as_ref().map(|(q, _)| q.clone()),
        "shifted_reduction": reciprocal.as_ref().map(|(_, s)| s.clone()),
    });
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
        _ => {
            println!("degree      : {}", p.degree());
            match irreducible {
                Some(v) => println!("irreducible : {v}"),
                None => println!("irreducible : undecided"),
            }
            for (z, m) in &rs.roots {
                println!("root        : {:+.10} {:+.10}i (x{m}, |.| = {:.10})", z.re, z.im, z.norm());
            }
            println!("log Mahler  : {:.12}", mahler_jensen(&p)?);
            if let Some(c) = &class {
                println!("class       : {:?}", c.kind);
            }
            if let Some((q, s)) = &reciprocal {
                println!("reduced     : {q:?} / shifted {s:?}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
