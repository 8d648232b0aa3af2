//! `whix` — Wiener-Hopf index structure of `R = V W^*` from state-space
//! realizations of the bi-inner factors.
//!
//! Exit codes: 0 success, 1 parse error, 2 validation failure, 3 index or
//! cross-method inconsistency, 4 oracle non-stabilization.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use whix::blaschke::{scalar_index_report, BlaschkeProduct};
use whix::oracle::{
    fourier_r_series, oracle_kernel_dims_with, verify_appendix, verify_decomposition, OracleError,
    RSymbol, SectionLimits,
};
use whix::realization::Realization;
use whix::whindex::{full_report, kernel_chain_dims, PipelineError};
use whix::Tolerances;

use whix_cli::input::{parse_complex_list, parse_pair, parse_scalar};
use whix_cli::report::{
    to_json, CheckDoc, IndexReportDoc, IndicesReportDoc, ScalarReportDoc, TolerancesDoc,
    ValidationDoc, VerifyReportDoc,
};

const GKR_EXAMPLE: &str = include_str!("../assets/gkr.json");

#[derive(Parser)]
#[command(
    name = "whix",
    version,
    about = "Wiener-Hopf indices of unimodular rational matrix functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the full index report for a factor pair.
    Indices(IndicesArgs),
    /// Index structure of a scalar symbol R = phi·m^* from Blaschke data.
    Scalar(ScalarArgs),
    /// Run the cross-method and truncated-operator verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TolArgs {
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long = "tol-rank", default_value_t = Tolerances::default().rank_rel)]
    tol_rank: f64,
    /// Distance-to-1 cutoff for eigenvalue-1 multiplicities.
    #[arg(long = "tol-eig", default_value_t = Tolerances::default().eig_one)]
    tol_eig: f64,
    /// Residual cutoff for contract checks.
    #[arg(long = "tol-residual", default_value_t = Tolerances::default().residual)]
    tol_residual: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            rank_rel: self.tol_rank,
            eig_one: self.tol_eig,
            residual: self.tol_residual,
        }
    }
}

#[derive(Args)]
struct IndicesArgs {
    /// Problem file with factors "V" and "W".
    input: Option<PathBuf>,
    /// Use a built-in example pair instead of a file.
    #[arg(long, value_parser = ["gkr"])]
    example: Option<String>,
    /// Skip realization validation.
    #[arg(long)]
    no_validate: bool,
    /// Write the machine-readable report to this path.
    #[arg(long)]
    json_out: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct ScalarArgs {
    /// Problem file with Blaschke data "phi" and "m".
    input: Option<PathBuf>,
    /// Zeros of phi as "re[,im];re[,im];..." (flags replace the file).
    #[arg(long)]
    phi_zeros: Option<String>,
    /// Unimodular constant of phi as "re[,im]".
    #[arg(long, default_value = "1")]
    phi_zeta: String,
    /// Zeros of m.
    #[arg(long)]
    m_zeros: Option<String>,
    /// Unimodular constant of m.
    #[arg(long, default_value = "1")]
    m_zeta: String,
    /// Also run the matrix pipeline on realizations of phi and m and compare.
    #[arg(long)]
    cross_check: bool,
    /// Write the machine-readable report to this path.
    #[arg(long)]
    json_out: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Problem file with factors "V" and "W".
    input: Option<PathBuf>,
    /// Use a built-in example pair instead of a file.
    #[arg(long, value_parser = ["gkr"])]
    example: Option<String>,
    /// Skip realization validation.
    #[arg(long)]
    no_validate: bool,
    /// Cap on the column levels tried by the finite-section oracle.
    #[arg(long = "oracle-n-max")]
    oracle_n_max: Option<usize>,
    /// Write the machine-readable report to this path.
    #[arg(long)]
    json_out: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
}

/// Failure paths mapped to the documented exit codes.
enum Failure {
    Parse(String),
    Validation(String),
    Inconsistency(String),
    NoStabilization(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Inconsistency(_) => 3,
            Failure::NoStabilization(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m)
            | Failure::Validation(m)
            | Failure::Inconsistency(m)
            | Failure::NoStabilization(m) => m,
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Inconsistency(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::NoStabilization { .. } => Failure::NoStabilization(e.to_string()),
            OracleError::Pipeline(p) => p.into(),
        }
    }
}

fn main() -> ExitCode {
    // Die quietly on closed pipes (`whix ... | head`) instead of
    // panicking through the default broken-pipe error.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Indices(args) => run_indices(&args),
        Command::Scalar(args) => run_scalar(&args),
        Command::Verify(args) => run_verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn load_problem_text(input: &Option<PathBuf>, example: &Option<String>) -> Result<String, Failure> {
    match (input, example) {
        (None, Some(name)) if name == "gkr" => Ok(GKR_EXAMPLE.to_string()),
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display()))),
        (None, None) => Err(Failure::Parse(
            "no input: pass a problem file or --example gkr".into(),
        )),
        _ => Err(Failure::Parse(
            "pass either a problem file or --example, not both".into(),
        )),
    }
}

fn load_pair(
    input: &Option<PathBuf>,
    example: &Option<String>,
) -> Result<(Realization, Realization), Failure> {
    let text = load_problem_text(input, example)?;
    parse_pair(&text).map_err(|e| Failure::Parse(e.to_string()))
}

fn validate_pair(
    v: &Realization,
    w: &Realization,
    t: &Tolerances,
    skip: bool,
) -> Result<(Option<ValidationDoc>, Option<ValidationDoc>), Failure> {
    if skip {
        return Ok((None, None));
    }
    let rv = v.validate(t);
    let rw = w.validate(t);
    for (name, rep) in [("V", &rv), ("W", &rw)] {
        println!(
            "validate {name}: unitarity {:.3e} / {:.3e}, spectral radius {:.6}{}",
            rep.unitarity_left,
            rep.unitarity_right,
            rep.spectral_radius,
            if rep.margin_warning { "  [margin warning]" } else { "" }
        );
    }
    if !(rv.pass && rw.pass) {
        return Err(Failure::Validation(format!(
            "realization validation failed (V: {}, W: {}); rerun with --no-validate to force",
            if rv.pass { "ok" } else { "FAIL" },
            if rw.pass { "ok" } else { "FAIL" },
        )));
    }
    Ok((Some(ValidationDoc::from(&rv)), Some(ValidationDoc::from(&rw))))
}

fn write_json(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    if let Some(path) = path {
        std::fs::write(path, text)
            .map_err(|e| Failure::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run_indices(args: &IndicesArgs) -> Result<(), Failure> {
    let (v, w) = load_pair(&args.input, &args.example)?;
    let t = args.tol.tolerances();
    let (doc_v, doc_w) = validate_pair(&v, &w, &t, args.no_validate)?;
    let report = full_report(&v, &w, &t)?;
    println!("{report}");
    let doc = IndicesReportDoc {
        kind: "indices".into(),
        tolerances: TolerancesDoc::from(&t),
        validation_v: doc_v,
        validation_w: doc_w,
        report: IndexReportDoc::from(&report),
    };
    write_json(&args.json_out, &to_json(&doc))
}

fn parse_scalar_flag(
    zeta: &str,
    zeros: &Option<String>,
    name: &str,
) -> Result<BlaschkeProduct, Failure> {
    let zeta_vals =
        parse_complex_list(zeta).map_err(|e| Failure::Parse(format!("{name} zeta: {e}")))?;
    if zeta_vals.len() != 1 {
        return Err(Failure::Parse(format!("{name} zeta must be one complex number")));
    }
    let zeros = match zeros {
        Some(text) => {
            parse_complex_list(text).map_err(|e| Failure::Parse(format!("{name} zeros: {e}")))?
        }
        None => Vec::new(),
    };
    BlaschkeProduct::new(zeta_vals[0], zeros).map_err(|e| Failure::Validation(e.to_string()))
}

fn run_scalar(args: &ScalarArgs) -> Result<(), Failure> {
    let (phi, m) = match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
            parse_scalar(&text).map_err(|e| Failure::Parse(e.to_string()))?
        }
        None => (
            parse_scalar_flag(&args.phi_zeta, &args.phi_zeros, "phi")?,
            parse_scalar_flag(&args.m_zeta, &args.m_zeros, "m")?,
        ),
    };
    let report = scalar_index_report(&phi, &m);
    println!(
        "scalar symbol R = phi·m^*: deg(phi) = {}, deg(m) = {}",
        phi.degree(),
        m.degree()
    );
    println!("winding number: {}", report.index_sum());
    println!(
        "Fredholm index: {} (dim ker = {}, codim ran = {})",
        report.fredholm_index, report.n_tr, report.d_tr
    );
    println!("{report}");

    let mut cross_doc = None;
    if args.cross_check {
        let t = args.tol.tolerances();
        let v = whix::blaschke_realization(&phi).map_err(|e| Failure::Validation(e.to_string()))?;
        let w = whix::blaschke_realization(&m).map_err(|e| Failure::Validation(e.to_string()))?;
        let matrix_report = full_report(&v, &w, &t)?;
        let agree = matrix_report.all_indices() == report.all_indices()
            && matrix_report.n_tr == report.n_tr
            && matrix_report.d_tr == report.d_tr;
        println!(
            "cross-check vs matrix pipeline: {}",
            if agree { "agree" } else { "DISAGREE" }
        );
        if !agree {
            return Err(Failure::Inconsistency(format!(
                "scalar formula and matrix pipeline disagree: {:?} vs {:?}",
                report.all_indices(),
                matrix_report.all_indices()
            )));
        }
        cross_doc = Some(IndexReportDoc::from(&matrix_report));
    }

    let doc = ScalarReportDoc {
        kind: "scalar".into(),
        phi_degree: phi.degree(),
        m_degree: m.degree(),
        winding_number: report.index_sum(),
        report: IndexReportDoc::from(&report),
        cross_check: cross_doc,
    };
    write_json(&args.json_out, &to_json(&doc))
}

struct CheckList {
    checks: Vec<CheckDoc>,
    all_pass: bool,
}

impl CheckList {
    fn new() -> Self {
        Self {
            checks: Vec::new(),
            all_pass: true,
        }
    }

    fn push(&mut self, name: &str, pass: bool, detail: String) {
        println!("check {name}: {} ({detail})", if pass { "pass" } else { "FAIL" });
        self.all_pass &= pass;
        self.checks.push(CheckDoc {
            name: name.into(),
            pass,
            detail,
        });
    }
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let (v, w) = load_pair(&args.input, &args.example)?;
    let t = args.tol.tolerances();
    validate_pair(&v, &w, &t, args.no_validate)?;

    let mut checks = CheckList::new();
    let report = full_report(&v, &w, &t)?;
    println!("{report}");

    let chain = kernel_chain_dims(&v, &w, report.kernel_dims.len() - 1, &t)?;
    checks.push(
        "kernel-chain vs spectral sequence",
        chain == report.kernel_dims,
        format!("chain {:?} vs {:?}", chain, report.kernel_dims),
    );

    let fourier_dev = max_fourier_deviation(&v, &w, &t)?;
    checks.push(
        "closed-form Fourier coefficients vs convolution series",
        fourier_dev <= 1e-8,
        format!("max deviation {fourier_dev:.3e}"),
    );

    let limits = SectionLimits {
        max_levels: args.oracle_n_max,
        ..SectionLimits::default()
    };
    let kappa1 = report.kernel_dims.len() - 1;
    let oracle_dims = oracle_kernel_dims_with(&v, &w, kappa1 + 1, &t, &limits)?;
    let oracle_ok =
        oracle_dims[..=kappa1] == report.kernel_dims[..] && oracle_dims[kappa1 + 1] == 0;
    checks.push(
        "oracle kernel dims",
        oracle_ok,
        format!("sections {:?} vs pipeline {:?}", oracle_dims, report.kernel_dims),
    );

    let omega1 = report.cokernel_dims.len() - 1;
    let oracle_co = oracle_kernel_dims_with(&w, &v, omega1 + 1, &t, &limits)?;
    let oracle_co_ok =
        oracle_co[..=omega1] == report.cokernel_dims[..] && oracle_co[omega1 + 1] == 0;
    checks.push(
        "oracle cokernel dims (dual orientation)",
        oracle_co_ok,
        format!("sections {:?} vs pipeline {:?}", oracle_co, report.cokernel_dims),
    );

    let levels = (2 * (v.state_dim() + w.state_dim())).clamp(12, 32);
    let dec = verify_decomposition(&v, &w, levels, &t)?;
    checks.push(
        "Toeplitz-Hankel decomposition of T_R",
        dec.pass(),
        format!("residual {:.3e} ≤ {:.3e} at N = {}", dec.residual, dec.threshold, dec.levels),
    );

    for (name, r) in [("V", &v), ("W", &w)] {
        let app = verify_appendix(r, levels, &t);
        checks.push(
            &format!("lower-triangular unitary identities for {name}"),
            app.pass(),
            format!(
                "projection {:.3e} ≤ {:.3e}, isometry {:.3e} ≤ {:.3e}",
                app.projection_residual,
                app.projection_threshold,
                app.isometry_residual,
                app.isometry_threshold
            ),
        );
    }

    let state_delta = v.state_dim() as i64 - w.state_dim() as i64;
    checks.push(
        "index sum vs state-dimension difference",
        report.index_sum() == state_delta,
        format!("Σ indices = {}, dim X_v − dim X_w = {}", report.index_sum(), state_delta),
    );

    let doc = VerifyReportDoc {
        kind: "verify".into(),
        tolerances: TolerancesDoc::from(&t),
        checks: checks.checks,
        pass: checks.all_pass,
    };
    write_json(&args.json_out, &to_json(&doc))?;
    if checks.all_pass {
        println!("all checks passed");
        Ok(())
    } else {
        Err(Failure::Inconsistency("verification checks failed".into()))
    }
}

fn max_fourier_deviation(
    v: &Realization,
    w: &Realization,
    t: &Tolerances,
) -> Result<f64, Failure> {
    let sym = RSymbol::new(v, w, t).map_err(Failure::from)?;
    let lo = -(w.state_dim() as i64 + 2);
    let hi = v.state_dim() as i64 + 2;
    let mut max_dev: f64 = 0.0;
    for n in lo..=hi {
        let closed = sym.coeff(n);
        let series = fourier_r_series(v, w, n, 400);
        max_dev = max_dev.max(whix::numerics::spectral_norm(&(closed - series)));
    }
    Ok(max_dev)
}
