//! Subcommands. Each command writes its report to the supplied writers and
//! returns the process exit code; input errors come back as `Err` and map to
//! exit 1.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use maxent_core::certify::check_certificate;
use maxent_core::hamiltonian2q::{self, TwoQubitAlphas};
use maxent_core::synthesize::{self, SynthesisSeed};
use maxent_core::verify::{self, EntanglementReport};
use maxent_core::{certify, BipartiteGate, FeasibilityOptions, PauliDecomposition, Status};
use serde::Serialize;

use crate::format::{CertificateFile, DesignComment, GateFile, VerificationRecord};

pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT_ERROR: i32 = 1;
    pub const INFEASIBLE: i32 = 2;
    pub const NOT_FOUND: i32 = 3;
    /// `verify`: the simulated jump fell short of `2 log₂ d_A`.
    pub const SHORTFALL: i32 = 4;
}

/// Slack allowed below `2 log₂ d_A` when verifying.
pub const VERIFY_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "maxent", version, about = "Certify, design and verify maximally entangling bipartite gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a gate is maximally entangling.
    Check(CheckArgs),
    /// Write a gate file for a known construction.
    Design(DesignArgs),
    /// Compare the three maximality tests for e^{-iH} on an α grid.
    ScanHamiltonian(ScanArgs),
    /// Simulate a certified input and measure the entanglement jump.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub gate: PathBuf,
    /// Certify U† instead of U.
    #[arg(long)]
    pub adjoint: bool,
    #[arg(long, env = "MAXENT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Affine and PSD tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    /// Certificate destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[command(subcommand)]
    pub kind: DesignKind,
    /// Gate file destination; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DesignKind {
    /// Ancilla-free construction, needs dB >= dA².
    FirstColumns {
        #[arg(long)]
        da: usize,
        #[arg(long)]
        db: usize,
        #[arg(long, env = "MAXENT_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// e^{-iH} with H = αx σx⊗σx + αy σy⊗σy + αz σz⊗σz.
    TwoQubit {
        #[arg(long, allow_hyphen_values = true)]
        ax: f64,
        #[arg(long, allow_hyphen_values = true)]
        ay: f64,
        #[arg(long, allow_hyphen_values = true)]
        az: f64,
    },
    Swap {
        #[arg(long)]
        d: usize,
    },
    /// Double CNOT |a,b⟩ → |b, a⊕b⟩.
    Dcnot,
    Cnot,
    Identity {
        #[arg(long)]
        da: usize,
        #[arg(long)]
        db: usize,
    },
    /// Haar-random unitary.
    Haar {
        #[arg(long)]
        da: usize,
        #[arg(long)]
        db: usize,
        #[arg(long, env = "MAXENT_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Points per axis; α = kπ/N for k = 0..N.
    #[arg(long, default_value_t = 16)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub gate: PathBuf,
    pub certificate: PathBuf,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Check(a) => cmd_check(&a, out, err),
        Command::Design(a) => cmd_design(&a, out),
        Command::ScanHamiltonian(a) => cmd_scan_hamiltonian(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit::INPUT_ERROR
        }
    }
}

pub fn status_exit_code(status: Status) -> i32 {
    match status {
        Status::Certified => exit::OK,
        Status::Infeasible => exit::INFEASIBLE,
        Status::NotFound => exit::NOT_FOUND,
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "null".to_string(), |x| format!("{x:e}"))
}

/// Certifies `gate` (or its adjoint) and, when CERTIFIED, simulates the
/// certified input.
pub fn check_gate(gate: &BipartiteGate, adjoint: bool, opts: &FeasibilityOptions) -> anyhow::Result<CertificateFile> {
    let target = if adjoint { gate.adjoint() } else { gate.clone() };
    let cert = certify::certify(&target, opts)?;
    let verification = if cert.is_certified() {
        Some(VerificationRecord::from(&verify::report(&target, &cert)?))
    } else {
        None
    };
    Ok(CertificateFile::new(&cert, gate.da(), gate.db(), adjoint, opts, verification))
}

fn write_check_report(w: &mut dyn Write, c: &CertificateFile) -> std::io::Result<()> {
    writeln!(w, "status: {}", c.status)?;
    writeln!(w, "dA: {}", c.da)?;
    writeln!(w, "dB: {}", c.db)?;
    writeln!(w, "adjoint: {}", c.adjoint)?;
    writeln!(w, "affine_residual: {:e}", c.affine_residual)?;
    writeln!(w, "min_eigenvalue: {}", fmt_opt(c.min_eigenvalue))?;
    writeln!(w, "gram_deviation: {:e}", c.gram_deviation)?;
    if let Some(v) = &c.verification {
        write_verification(w, v)?;
    }
    if let Some(r) = &c.reason {
        writeln!(w, "reason: {r}")?;
    }
    Ok(())
}

fn write_verification(w: &mut dyn Write, v: &VerificationRecord) -> std::io::Result<()> {
    writeln!(w, "e_in: {}", v.e_in)?;
    writeln!(w, "e_out: {}", v.e_out)?;
    writeln!(w, "delta: {}", v.delta)?;
    writeln!(w, "bjk_gram_deviation: {:e}", v.bjk_gram_deviation)
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn cmd_check(args: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let gate = GateFile::read(&args.gate)?.to_gate()?;
    let opts = FeasibilityOptions {
        affine_tol: args.tol,
        psd_tol: args.tol,
        max_iters: args.max_iters,
        restarts: args.restarts,
        rng_seed: args.seed,
    };
    opts.validate()?;
    let file = check_gate(&gate, args.adjoint, &opts)?;
    match &args.out {
        Some(path) => {
            write_file(path, &file.to_json())?;
            write_check_report(out, &file)?;
        }
        None => {
            writeln!(out, "{}", file.to_json())?;
            write_check_report(err, &file)?;
        }
    }
    Ok(status_exit_code(file.status()?))
}

/// Builds the gate for a design request.
pub fn design_gate(kind: &DesignKind) -> anyhow::Result<(BipartiteGate, DesignComment)> {
    let named = |name: &str| DesignComment { construction: name.to_string(), ..Default::default() };
    Ok(match *kind {
        DesignKind::FirstColumns { da, db, seed } => {
            let gate = synthesize::first_columns_gate(SynthesisSeed { rng_seed: seed, da, db })?;
            (gate, DesignComment { seed: Some(seed), ..named("first-columns") })
        }
        DesignKind::TwoQubit { ax, ay, az } => {
            if ![ax, ay, az].iter().all(|a| a.is_finite()) {
                bail!("alphas must be finite");
            }
            let gate = hamiltonian2q::gate(TwoQubitAlphas::new(ax, ay, az))?;
            (gate, DesignComment { alphas: Some([ax, ay, az]), ..named("two-qubit") })
        }
        DesignKind::Swap { d } => (synthesize::swap_gate(d)?, named("swap")),
        DesignKind::Dcnot => (synthesize::double_cnot_gate(), named("dcnot")),
        DesignKind::Cnot => (synthesize::cnot_gate(), named("cnot")),
        DesignKind::Identity { da, db } => (synthesize::identity_gate(da, db)?, named("identity")),
        DesignKind::Haar { da, db, seed } => {
            let gate = synthesize::haar_random_gate(da, db, seed)?;
            (gate, DesignComment { seed: Some(seed), ..named("haar") })
        }
    })
}

pub fn cmd_design(args: &DesignArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let (gate, comment) = design_gate(&args.kind)?;
    let file = GateFile::from_gate(&gate, Some(comment));
    file.to_gate().context("designed gate failed its own file invariants")?;
    match &args.out {
        Some(path) => {
            write_file(path, &file.to_json())?;
            writeln!(out, "wrote {}x{} gate to {}", gate.da(), gate.db(), path.display())?;
        }
        None => writeln!(out, "{}", file.to_json())?,
    }
    Ok(exit::OK)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub index: [usize; 3],
    pub alphas: [f64; 3],
    pub residuals: [f64; 4],
    pub normalizations: bool,
    pub closed_form: bool,
    pub certifier: bool,
}

impl ScanRow {
    pub fn agrees(&self) -> bool {
        self.normalizations == self.closed_form && self.closed_form == self.certifier
    }
}

pub fn scan_point(index: [usize; 3], grid: usize, tol: f64, opts: &FeasibilityOptions) -> anyhow::Result<ScanRow> {
    let alphas = index.map(|k| k as f64 * PI / grid as f64);
    let a = TwoQubitAlphas::new(alphas[0], alphas[1], alphas[2]);
    let residuals = hamiltonian2q::normalization_residuals(a);
    let cert = certify::certify(&hamiltonian2q::gate(a)?, opts)?;
    Ok(ScanRow {
        index,
        alphas,
        residuals,
        normalizations: residuals.iter().all(|r| r.abs() <= tol),
        closed_form: hamiltonian2q::closed_form_maximal(a, tol),
        certifier: cert.is_certified(),
    })
}

/// All `grid³` rows, ordered by `(kx, ky, kz)`.
pub fn scan_hamiltonian(grid: usize, tol: f64) -> anyhow::Result<Vec<ScanRow>> {
    if grid < 2 {
        bail!("--grid must be >= 2 (got {grid})");
    }
    if !(tol > 0.0 && tol.is_finite()) {
        bail!("--tol must be positive and finite");
    }
    let opts = FeasibilityOptions::default();
    maxent_core::par::map_range(grid * grid * grid, |i| {
        scan_point([i / (grid * grid), (i / grid) % grid, i % grid], grid, tol, &opts)
    })
    .into_iter()
    .collect()
}

#[derive(Serialize)]
struct ScanReport<'a> {
    grid: usize,
    tol: f64,
    points: usize,
    agreeing: usize,
    rows: &'a [ScanRow],
}

pub fn cmd_scan_hamiltonian(args: &ScanArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let rows = scan_hamiltonian(args.grid, args.tol)?;
    writeln!(out, "# kx ky kz alpha_x alpha_y alpha_z res_e res_x res_y res_z normalizations closed_form certifier")?;
    for r in &rows {
        writeln!(
            out,
            "{} {} {} {:.12} {:.12} {:.12} {:+.3e} {:+.3e} {:+.3e} {:+.3e} {} {} {}",
            r.index[0], r.index[1], r.index[2], r.alphas[0], r.alphas[1], r.alphas[2],
            r.residuals[0], r.residuals[1], r.residuals[2], r.residuals[3],
            r.normalizations, r.closed_form, r.certifier
        )?;
    }
    let agreeing = rows.iter().filter(|r| r.agrees()).count();
    let maximal = rows.iter().filter(|r| r.certifier).count();
    writeln!(out, "points: {}", rows.len())?;
    writeln!(out, "maximal: {maximal}")?;
    writeln!(out, "agreement: {agreeing}/{}", rows.len())?;
    if let Some(path) = &args.json_out {
        let report = ScanReport { grid: args.grid, tol: args.tol, points: rows.len(), agreeing, rows: &rows };
        write_file(path, &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(if agreeing == rows.len() { exit::OK } else { exit::SHORTFALL })
}

/// Validates the certificate against the gate (applying `U†` for adjoint
/// certificates) and simulates the certified input.
pub fn verify_files(gate_file: &GateFile, cert_file: &CertificateFile) -> anyhow::Result<EntanglementReport> {
    let gate = gate_file.to_gate()?;
    if (gate.da(), gate.db()) != (cert_file.da, cert_file.db) {
        bail!(
            "dimension mismatch: gate is {}x{}, certificate is {}x{}",
            gate.da(),
            gate.db(),
            cert_file.da,
            cert_file.db
        );
    }
    let cert = cert_file.to_certificate()?;
    let target = if cert_file.adjoint { gate.adjoint() } else { gate };
    let dec = PauliDecomposition::extract(&target)?;
    check_certificate(&dec, &cert, &cert_file.options()).context("certificate failed its invariant check")?;
    Ok(verify::report(&target, &cert)?)
}

#[derive(Serialize)]
struct VerifyReport {
    #[serde(flatten)]
    record: VerificationRecord,
    ceiling: f64,
    reaches_ceiling: bool,
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let report = verify_files(&GateFile::read(&args.gate)?, &CertificateFile::read(&args.certificate)?)?;
    let record = VerificationRecord::from(&report);
    let ok = report.reaches_ceiling(VERIFY_TOL);
    write_verification(out, &record)?;
    writeln!(out, "ceiling: {}", report.ceiling)?;
    writeln!(out, "reaches_ceiling: {ok}")?;
    if let Some(path) = &args.json_out {
        let json = VerifyReport { record, ceiling: report.ceiling, reaches_ceiling: ok };
        write_file(path, &serde_json::to_string_pretty(&json)?)?;
    }
    Ok(if ok { exit::OK } else { exit::SHORTFALL })
}
