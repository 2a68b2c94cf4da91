//! Subcommand driver for the `berger-spectra` binary.
//!
//! Conventions shared by every subcommand:
//!   - the primary artifact (CSV or JSON) goes to stdout, unless `--out DIR`
//!     is given, in which case all artifacts are written as files there;
//!   - human-readable progress and summaries go to stderr;
//!   - exit 0 when every certification passed, 1 when a check failed,
//!     2 for configuration errors. No other codes.
//!
//! Identical configuration and seed produce byte-identical outputs.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::certify::{certify_deformation, DeformingField};
use crate::config::{Tolerances, DEFAULT_CUTOFF, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use crate::groups::{build_group, builtin_group_json, certify_group, parse_group_spec, BUILTIN_GROUPS};
use crate::harmonics::assemble_blocks;
use crate::spectrum::{
    compare_lower_spectra, exact_spectrum_with_blocks, lambda1_branch,
    lambda1_functional_with_blocks, normalized_curve_to_csv, quadrature_spectrum_with_blocks,
    spectra_to_csv, BranchReport, SpectrumAgreement, SpectrumResult,
};
use crate::su2::{
    fixed_volume_curve, frame_metric_residual, left_invariant_spectrum, FamilyPoint,
    LeftInvariantMetric,
};

/// Agreement required between the representation-theoretic first eigenvalue
/// and the sphere-side exact route.
const IRREP_SPHERE_AGREEMENT_TOL: f64 = 1e-8;

/// Volume constancy required along the fixed-volume families.
const VOLUME_CONSTANCY_TOL: f64 = 1e-12;

/// Eigenvalue cap used when comparing the exact and quadrature routes.
const ROUTE_COMPARISON_CAP: f64 = 15.0;

#[derive(Debug, Parser)]
#[command(
    name = "berger-spectra",
    version,
    about = "Laplace spectra of Berger-type metric deformations on odd spheres"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify the deformed-Laplacian identity chain on S^3 and S^5.
    VerifyLemma(VerifyLemmaArgs),
    /// Exact spectra over a parameter grid, with optional quadrature cross-check.
    Spectrum(SpectrumArgs),
    /// First-eigenvalue curve and the volume-normalized functional.
    Lambda1Curve(CurveArgs),
    /// Certify a finite symmetry group acting on the 3-sphere.
    GroupCertify(GroupCertifyArgs),
    /// Left-invariant metrics on the rotation group: spectra and fixed-volume families.
    Liegroup(LiegroupArgs),
}

// ─────────────────────────────────────────────────────────────────────────
// Shared argument blocks
// ─────────────────────────────────────────────────────────────────────────

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let mut grid = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let v: f64 = tok
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("cannot parse '{tok}' as a number")))?;
        grid.push(v);
    }
    if grid.is_empty() {
        return Err(Error::InvalidConfig("empty deformation grid".into()));
    }
    Ok(grid)
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Override: residual bound for the deformed-Laplacian identity.
    #[arg(long = "tol-lemma")]
    tol_lemma: Option<f64>,
    /// Override: bound for exact algebraic identities.
    #[arg(long = "tol-identity")]
    tol_identity: Option<f64>,
    /// Override: bound for finite-difference cross-checks.
    #[arg(long = "tol-fd")]
    tol_fd: Option<f64>,
    /// Override: deviation bound for the first-eigenvalue branch.
    #[arg(long = "tol-branch")]
    tol_branch: Option<f64>,
    /// Override: bound for the Killing diagnostics.
    #[arg(long = "tol-killing")]
    tol_killing: Option<f64>,
    /// Override: bound for group-invariance residuals.
    #[arg(long = "tol-invariance")]
    tol_invariance: Option<f64>,
    /// Override: bound for the space-form curvature identity.
    #[arg(long = "tol-sasaki")]
    tol_sasaki: Option<f64>,
    /// Override: relative clustering width for exact spectra.
    #[arg(long = "tol-cluster-exact")]
    tol_cluster_exact: Option<f64>,
    /// Override: relative clustering width for quadrature spectra.
    #[arg(long = "tol-cluster-quadrature")]
    tol_cluster_quadrature: Option<f64>,
}

impl TolArgs {
    fn apply(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(v) = self.tol_lemma {
            t.lemma = v;
        }
        if let Some(v) = self.tol_identity {
            t.identity = v;
        }
        if let Some(v) = self.tol_fd {
            t.fd = v;
        }
        if let Some(v) = self.tol_branch {
            t.branch = v;
        }
        if let Some(v) = self.tol_killing {
            t.killing = v;
        }
        if let Some(v) = self.tol_invariance {
            t.invariance = v;
        }
        if let Some(v) = self.tol_sasaki {
            t.sasaki = v;
        }
        if let Some(v) = self.tol_cluster_exact {
            t.cluster_exact = v;
        }
        if let Some(v) = self.tol_cluster_quadrature {
            t.cluster_quadrature = v;
        }
        t
    }
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Directory for output files; the primary artifact prints to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutArgs {
    fn emit(&self, filename: &str, content: &str, primary: bool) -> Result<()> {
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir)?;
            let path = dir.join(filename);
            fs::write(&path, content)?;
            eprintln!("wrote {}", path.display());
        } else if primary {
            print!("{content}");
        }
        Ok(())
    }

    fn emit_json<T: Serialize>(&self, filename: &str, doc: &T, primary: bool) -> Result<()> {
        let mut text = serde_json::to_string_pretty(doc)?;
        text.push('\n');
        self.emit(filename, &text, primary)
    }
}

// ─────────────────────────────────────────────────────────────────────────
// verify-lemma
// ─────────────────────────────────────────────────────────────────────────

#[derive(Debug, Args)]
struct VerifyLemmaArgs {
    /// Comma-separated deformation parameters t (each must exceed -1).
    #[arg(long = "t-grid", allow_hyphen_values = true, default_value = "0.5,1,10")]
    t_grid: String,
    /// Sphere dimensions to certify.
    #[arg(long, default_value = "3,5")]
    dims: String,
    /// Pointwise samples per check.
    #[arg(long = "N", default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Deforming field: "hopf", or "gradient" for the non-Killing control.
    #[arg(long, default_value = "hopf")]
    field: String,
    #[command(flatten)]
    tols: TolArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn run_verify_lemma(args: &VerifyLemmaArgs) -> Result<bool> {
    let grid = parse_grid(&args.t_grid)?;
    let dims: Vec<usize> = parse_grid(&args.dims)?
        .into_iter()
        .map(|d| d as usize)
        .collect();
    let field = match args.field.as_str() {
        "hopf" => DeformingField::Hopf,
        "gradient" | "gradient_control" => DeformingField::GradientControl,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown field '{other}' (expected 'hopf' or 'gradient')"
            )))
        }
    };
    let tols = args.tols.apply();
    let report = certify_deformation(&dims, &grid, args.samples, args.seed, field, &tols)?;
    eprint!("{}", report.to_text());
    args.out.emit_json("lemma_report.json", &report, true)?;
    Ok(report.pass)
}

// ─────────────────────────────────────────────────────────────────────────
// spectrum
// ─────────────────────────────────────────────────────────────────────────

#[derive(Debug, Serialize)]
struct SpectrumDocument {
    schema: u32,
    cutoff: u32,
    verified: bool,
    branch: BranchReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    route_agreements: Vec<SpectrumAgreement>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// Comma-separated deformation parameters t (each must exceed -1).
    #[arg(
        long = "t-grid",
        allow_hyphen_values = true,
        default_value = "-0.9,-0.5,0,0.5,1,3,10,100"
    )]
    t_grid: String,
    /// Harmonic degree cutoff (at least 2).
    #[arg(long = "L", default_value_t = DEFAULT_CUTOFF)]
    cutoff: u32,
    /// Quadrature sample count for --verify.
    #[arg(long = "N", default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Cross-check the exact route against the quadrature route.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    tols: TolArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn run_spectrum(args: &SpectrumArgs) -> Result<bool> {
    let grid = parse_grid(&args.t_grid)?;
    if args.cutoff < 2 {
        return Err(Error::InvalidConfig(
            "spectrum needs a harmonic cutoff of at least 2".into(),
        ));
    }
    let tols = args.tols.apply();
    let blocks = assemble_blocks(args.cutoff)?;
    let mut results: Vec<SpectrumResult> = Vec::new();
    let mut agreements: Vec<SpectrumAgreement> = Vec::new();
    for &t in &grid {
        let exact = exact_spectrum_with_blocks(&blocks, t, &tols)?;
        if args.verify {
            let quad =
                quadrature_spectrum_with_blocks(&blocks, t, args.samples, args.seed, &tols)?;
            let agreement = compare_lower_spectra(&exact, &quad, ROUTE_COMPARISON_CAP)?;
            eprintln!(
                "t = {t}: routes agree to {:.2e} over {} eigenvalues",
                agreement.worst_rel, agreement.compared
            );
            agreements.push(agreement);
            results.push(exact);
            results.push(quad);
        } else {
            results.push(exact);
        }
    }
    let branch = lambda1_branch(&grid, args.cutoff, &tols)?;
    for p in &branch.points {
        eprintln!(
            "t = {}: lambda1 = {} (branch value {}, attained by degree {})",
            p.t, p.lambda1, p.predicted, p.minimizing_degree
        );
    }
    eprintln!(
        "branch intact over grid: {} (max deviation {:.2e})",
        branch.branch_intact, branch.max_deviation
    );

    let pass = branch.branch_intact
        && agreements
            .iter()
            .all(|a| a.worst_rel <= tols.cluster_quadrature);
    let doc = SpectrumDocument {
        schema: 1,
        cutoff: args.cutoff,
        verified: args.verify,
        branch,
        route_agreements: agreements,
    };
    args.out.emit("spectrum.csv", &spectra_to_csv(&results), true)?;
    args.out.emit_json("branch_report.json", &doc, false)?;
    Ok(pass)
}

// ─────────────────────────────────────────────────────────────────────────
// lambda1-curve
// ─────────────────────────────────────────────────────────────────────────

#[derive(Debug, Serialize)]
struct CurveDocument {
    schema: u32,
    cutoff: u32,
    points: Vec<crate::spectrum::NormalizedPoint>,
    max_rel_error: f64,
    pass: bool,
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// Comma-separated deformation parameters t (each must exceed -1).
    #[arg(
        long = "t-grid",
        allow_hyphen_values = true,
        default_value = "-0.9,-0.5,0,0.5,1,3,10,100"
    )]
    t_grid: String,
    /// Harmonic degree cutoff (at least 2).
    #[arg(long = "L", default_value_t = DEFAULT_CUTOFF)]
    cutoff: u32,
    #[command(flatten)]
    tols: TolArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn run_lambda1_curve(args: &CurveArgs) -> Result<bool> {
    let grid = parse_grid(&args.t_grid)?;
    if args.cutoff < 2 {
        return Err(Error::InvalidConfig(
            "the curve needs a harmonic cutoff of at least 2".into(),
        ));
    }
    let tols = args.tols.apply();
    let blocks = assemble_blocks(args.cutoff)?;
    let mut points = Vec::with_capacity(grid.len());
    for &t in &grid {
        points.push(lambda1_functional_with_blocks(&blocks, t, &tols)?);
    }
    let max_rel_error = points.iter().map(|p| p.rel_error).fold(0.0, f64::max);
    let pass = max_rel_error <= tols.branch;
    eprintln!(
        "normalized functional over {} rows: max deviation from the branch form {:.2e}",
        points.len(),
        max_rel_error
    );
    let doc = CurveDocument {
        schema: 1,
        cutoff: args.cutoff,
        points: points.clone(),
        max_rel_error,
        pass,
    };
    args.out
        .emit("lambda1_curve.csv", &normalized_curve_to_csv(&points), true)?;
    args.out.emit_json("lambda1_curve.json", &doc, false)?;
    Ok(pass)
}

// ─────────────────────────────────────────────────────────────────────────
// group-certify
// ─────────────────────────────────────────────────────────────────────────

#[derive(Debug, Args)]
struct GroupCertifyArgs {
    /// Builtin group name or path to a group description file.
    #[arg(long)]
    group: String,
    /// Comma-separated deformation parameters for the invariance checks.
    #[arg(long = "t-grid", allow_hyphen_values = true, default_value = "-0.5,1,10")]
    t_grid: String,
    /// Sample points per invariance check.
    #[arg(long = "N", default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[command(flatten)]
    tols: TolArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn load_group_spec_text(name_or_path: &str) -> Result<String> {
    if let Some(json) = builtin_group_json(name_or_path) {
        return Ok(json.to_string());
    }
    let path = PathBuf::from(name_or_path);
    if path.exists() {
        return Ok(fs::read_to_string(path)?);
    }
    let names: Vec<&str> = BUILTIN_GROUPS.iter().map(|(n, _)| *n).collect();
    Err(Error::InvalidConfig(format!(
        "'{name_or_path}' is neither a file nor a builtin group (builtins: {})",
        names.join(", ")
    )))
}

fn run_group_certify(args: &GroupCertifyArgs) -> Result<bool> {
    let grid = parse_grid(&args.t_grid)?;
    let tols = args.tols.apply();
    let text = load_group_spec_text(&args.group)?;
    let spec = parse_group_spec(&text)?;
    let group = build_group(&spec)?;
    let cert = certify_group(&group, &grid, args.samples, args.seed, &tols)?;
    eprintln!(
        "group '{}': order {}, free = {}, min displacement {:.6}",
        cert.name, cert.order, cert.free, cert.delta_min
    );
    for inv in &cert.invariance {
        eprintln!(
            "t = {}: metric residual {:.2e}, field residual {:.2e}, witness {:.4}",
            inv.t, inv.metric_residual, inv.field_residual, inv.witness_displacement
        );
    }
    args.out.emit_json("group_certificate.json", &cert, true)?;
    Ok(cert.pass)
}

// ─────────────────────────────────────────────────────────────────────────
// liegroup
// ─────────────────────────────────────────────────────────────────────────

#[derive(Debug, Serialize)]
struct CrossCheckRow {
    t: f64,
    irrep_lambda1: f64,
    sphere_lambda1: f64,
    agreement: f64,
}

#[derive(Debug, Serialize)]
struct InvarianceRow {
    t: f64,
    frame_metric_residual: f64,
}

#[derive(Debug, Serialize)]
struct LiegroupDocument {
    schema: u32,
    family: &'static str,
    max_two_j: u32,
    points: Vec<FamilyPoint>,
    volume_defect: f64,
    monotone: bool,
    lambda1_first: f64,
    lambda1_last: f64,
    divergence_ratio: f64,
    crosscheck: Vec<CrossCheckRow>,
    crosscheck_pass: bool,
    corollary_invariance: Vec<InvarianceRow>,
    group_certificate: crate::groups::GroupCertificate,
    pass: bool,
}

#[derive(Debug, Args)]
struct LiegroupArgs {
    /// Comma-separated family parameters t (each must exceed -1).
    #[arg(long = "t-grid", allow_hyphen_values = true, default_value = "0,0.5,1,3,10,100")]
    t_grid: String,
    /// Largest doubled spin of the irreducible blocks (at least 2).
    #[arg(long = "L", default_value_t = 12)]
    max_two_j: u32,
    /// Run the shrinking-fiber family instead of the stretching one.
    #[arg(long)]
    shrink: bool,
    /// Finite subgroup certified against the family metrics.
    #[arg(long, default_value = "binary_icosahedral_120")]
    group: String,
    /// Sample points per invariance check.
    #[arg(long = "N", default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[command(flatten)]
    tols: TolArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn family_csv(points: &[FamilyPoint]) -> String {
    let mut out = String::from("t,lambda1,volume,Lambda1,attained_two_j\n");
    for p in points {
        let normalized = p.lambda1 * p.volume.powf(2.0 / 3.0);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.t, p.lambda1, p.volume, normalized, p.attained_two_j
        ));
    }
    out
}

fn run_liegroup(args: &LiegroupArgs) -> Result<bool> {
    let grid = parse_grid(&args.t_grid)?;
    let tols = args.tols.apply();
    let points = fixed_volume_curve(&grid, args.shrink, args.max_two_j, &tols)?;

    let volume_defect = points
        .iter()
        .map(|p| (p.volume - points[0].volume).abs())
        .fold(0.0, f64::max);
    let monotone = points.windows(2).all(|w| {
        if args.shrink {
            w[1].lambda1 < w[0].lambda1
        } else {
            w[1].lambda1 > w[0].lambda1
        }
    });
    let lambda1_first = points.first().map(|p| p.lambda1).unwrap_or(f64::NAN);
    let lambda1_last = points.last().map(|p| p.lambda1).unwrap_or(f64::NAN);

    // Independent route agreement: the representation-theoretic first
    // eigenvalue of the frame metric diag(1, 1, 1+t) against the exact
    // sphere-side computation of the same deformation.
    let blocks = assemble_blocks(DEFAULT_CUTOFF)?;
    let mut crosscheck = Vec::with_capacity(grid.len());
    let mut crosscheck_pass = true;
    for &t in &grid {
        let metric = LeftInvariantMetric::berger(t)?;
        let irrep = left_invariant_spectrum(&metric, args.max_two_j, &tols)?;
        let sphere = exact_spectrum_with_blocks(&blocks, t, &tols)?;
        let agreement = (irrep.lambda1 - sphere.lambda1).abs();
        crosscheck_pass &= agreement <= IRREP_SPHERE_AGREEMENT_TOL;
        crosscheck.push(CrossCheckRow {
            t,
            irrep_lambda1: irrep.lambda1,
            sphere_lambda1: sphere.lambda1,
            agreement,
        });
    }

    // Left-invariance of the family: the frame metric agrees with the
    // deformed sphere metric pointwise, and the configured finite subgroup
    // preserves both the metric and the deforming field.
    let mut invariance = Vec::with_capacity(grid.len());
    let mut invariance_pass = true;
    for &t in &grid {
        let residual = frame_metric_residual(t, args.samples, args.seed)?;
        invariance_pass &= residual <= tols.invariance;
        invariance.push(InvarianceRow {
            t,
            frame_metric_residual: residual,
        });
    }
    let text = load_group_spec_text(&args.group)?;
    let spec = parse_group_spec(&text)?;
    let group = build_group(&spec)?;
    let cert = certify_group(&group, &grid, args.samples, args.seed, &tols)?;

    let pass = volume_defect <= VOLUME_CONSTANCY_TOL
        && monotone
        && crosscheck_pass
        && invariance_pass
        && cert.pass;

    eprintln!(
        "{} family over {} rows: volume defect {:.2e}, monotone = {}, lambda1 {} -> {}",
        if args.shrink { "shrinking" } else { "stretching" },
        points.len(),
        volume_defect,
        monotone,
        lambda1_first,
        lambda1_last
    );
    eprintln!(
        "irrep vs sphere agreement: worst {:.2e}",
        crosscheck
            .iter()
            .map(|c| c.agreement)
            .fold(0.0f64, f64::max)
    );

    let doc = LiegroupDocument {
        schema: 1,
        family: if args.shrink { "shrink" } else { "stretch" },
        max_two_j: args.max_two_j,
        points: points.clone(),
        volume_defect,
        monotone,
        lambda1_first,
        lambda1_last,
        divergence_ratio: lambda1_last / lambda1_first,
        crosscheck,
        crosscheck_pass,
        corollary_invariance: invariance,
        group_certificate: cert,
        pass,
    };
    args.out.emit("liegroup_family.csv", &family_csv(&points), true)?;
    args.out.emit_json("liegroup_report.json", &doc, false)?;
    Ok(pass)
}

// ─────────────────────────────────────────────────────────────────────────
// Dispatch
// ─────────────────────────────────────────────────────────────────────────

/// Run a parsed command line, returning the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match &cli.command {
        Command::VerifyLemma(args) => run_verify_lemma(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Lambda1Curve(args) => run_lambda1_curve(args),
        Command::GroupCertify(args) => run_group_certify(args),
        Command::Liegroup(args) => run_liegroup(args),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("certification failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
