//! `tw`: command-line front end for twisted Weyl-Wigner computations.
//!
//! Exit codes: 0 success, 1 failed invariant, 2 invalid input,
//! 3 dimension mismatch, 4 refused search or enumeration.

mod io;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};
use twisted_weyl::anglenum::{self, TorusState};
use twisted_weyl::fourier::{self, PhaseFunction};
use twisted_weyl::gaussian::{self, CovarianceMatrix};
use twisted_weyl::linalg::{self, CMatrix};
use twisted_weyl::positivity::{self, PositivityVerdict, BOUNDARY_TOL};
use twisted_weyl::symmetry;
use twisted_weyl::{EpsTable, Error, GroupSpec, WeylSystem};

use crate::io::{invalid, InvalidInput};

#[derive(Parser)]
#[command(name = "tw", version, about = "Twisted Weyl-Wigner calculus on finite phase spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemKind {
    Weyl,
    Fermion,
    Mixed,
}

#[derive(Args, Clone)]
struct SystemArgs {
    #[arg(long, value_enum, default_value = "fermion")]
    system: SystemKind,
    /// Local dimension of a finite Weyl system.
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, default_value_t = 1)]
    modes: usize,
    /// Use the normalized cocycle.
    #[arg(long)]
    normalized: bool,
    /// JSON file with the n x n sign table of a mixed spin system.
    #[arg(long)]
    eps: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct StateArgs {
    /// JSON density matrix (rows of numbers or [re, im] pairs).
    #[arg(long, conflicts_with_all = ["basis", "mixed"])]
    state: Option<PathBuf>,
    /// Computational basis state |k>.
    #[arg(long)]
    basis: Option<usize>,
    /// Maximally mixed state.
    #[arg(long)]
    mixed: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Gate {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic and Wigner functions of a state.
    Wigner {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Characteristic function of a state.
    Char {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate the symplectic group of the cocycle.
    Symmetry {
        #[command(flatten)]
        system: SystemArgs,
        /// Also output a Clifford unitary for each map.
        #[arg(long)]
        realize: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether a unitary is a generalized Clifford operation.
    CliffordDetect {
        #[command(flatten)]
        system: SystemArgs,
        /// JSON unitary matrix.
        #[arg(long, conflicts_with = "gate")]
        unitary: Option<PathBuf>,
        /// A single-qubit gate instead of a file.
        #[arg(long, value_enum)]
        gate: Option<Gate>,
        #[command(flatten)]
        common: Common,
    },
    /// Fermionic Gaussian state from a covariance matrix.
    Gaussian {
        #[command(flatten)]
        system: SystemArgs,
        /// JSON antisymmetric covariance matrix.
        #[arg(long, conflicts_with = "block_diagonal")]
        cov: Option<PathBuf>,
        /// Block coefficients a_1,...,a_n.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        block_diagonal: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Wigner positivity classifiers.
    #[command(subcommand)]
    Positivity(PositivityCommand),
    /// Angle-number system.
    #[command(subcommand)]
    Anglenum(AnglenumCommand),
    /// Run the invariant suite for a system.
    Verify {
        #[command(flatten)]
        system: SystemArgs,
        /// Perturb one cached Weyl operator by a phase before checking.
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum PositivityCommand {
    /// Closed-form classifier where one applies, checked against the Wigner function.
    Check {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Block-diagonal Gaussian state instead of a state file.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        block_diagonal: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum AnglenumCommand {
    /// Wigner function of a band-limited state as a CSV grid.
    Wigner {
        /// JSON array of 2M+1 coefficients of e_{-M}, ..., e_M.
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        band: usize,
        /// Number of angle samples; defaults to 4M+4.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn build_system(args: &SystemArgs) -> Result<WeylSystem> {
    let spec = match args.system {
        SystemKind::Weyl => GroupSpec::finite_weyl(args.d, args.modes)?,
        SystemKind::Fermion => GroupSpec::fermionic(args.modes)?,
        SystemKind::Mixed => {
            let path = args.eps.as_ref().ok_or_else(|| invalid("--system mixed needs --eps FILE"))?;
            let value = io::read_json(path)?;
            let eps: EpsTable = serde_json::from_value(value).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            GroupSpec::mixed_spin(args.modes, eps)?
        }
    };
    Ok(WeylSystem::new(spec, args.normalized)?)
}

fn load_state(args: &StateArgs, dim: usize) -> Result<CMatrix> {
    let rho = if let Some(path) = &args.state {
        io::parse_matrix(&io::read_json(path)?)?
    } else if let Some(k) = args.basis {
        if k >= dim {
            return Err(invalid(format!("basis index {k} out of range for dimension {dim}")));
        }
        let mut m = CMatrix::zeros(dim, dim);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        m
    } else if args.mixed {
        CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0)
    } else {
        return Err(invalid("a state is required: --state FILE, --basis K or --mixed"));
    };
    if rho.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: rho.nrows(),
        }
        .into());
    }
    fourier::check_state(&rho)?;
    Ok(rho)
}

fn write_table(common: &Common, format: Format, sys: &WeylSystem, columns: &[(&str, &PhaseFunction)]) -> Result<()> {
    let mut out = io::output(common.out.as_ref())?;
    match format {
        Format::Csv => fourier::write_csv_columns(&mut out, columns)?,
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("system".into(), json!(sys.spec().label()));
            obj.insert("normalized".into(), json!(sys.is_normalized()));
            for (name, f) in columns {
                obj.insert((*name).into(), f.to_json());
            }
            serde_json::to_writer_pretty(&mut out, &Value::Object(obj))?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_wigner(system: &SystemArgs, state: &StateArgs, format: Format, common: &Common, with_wigner: bool) -> Result<u8> {
    let sys = build_system(system)?;
    let rho = load_state(state, sys.dim())?;
    let chi = fourier::char_function(&sys, &rho)?;
    if !with_wigner {
        write_table(common, format, &sys, &[("chi", &chi)])?;
        return Ok(0);
    }
    let w = fourier::symplectic_fourier(&sys, &chi)?;
    write_table(common, format, &sys, &[("chi", &chi), ("wigner", &w)])?;
    let sum = w.values().iter().sum::<Complex64>() * sys.spec().haar().dual_point_weight();
    eprintln!("normalization {:.12} min {:.12} max_imag {:.3e}", sum.re, w.min_real(), w.max_imag());
    Ok(0)
}

fn cmd_symmetry(system: &SystemArgs, realize: bool, common: &Common) -> Result<u8> {
    let sys = build_system(system)?;
    let e = symmetry::enumerate_symplectic(sys.cocycle())?;
    let mut doc = json!({
        "system": sys.spec().label(),
        "normalized": sys.is_normalized(),
        "order": e.order(),
        "candidates": e.candidates.to_string(),
        "maps": e.maps.iter().map(|m| m.to_rows()).collect::<Vec<_>>(),
        "cyclic_generator": e.cyclic_generator().map(|m| m.to_rows()),
        "criterion": e.criterion.as_ref().map(|r| json!({
            "form": r.form.to_rows(),
            "checked": r.checked.to_string(),
            "mismatches": r.mismatches.to_string(),
        })),
    });
    if realize {
        let zero = sys.spec().zero();
        let unitaries = e
            .maps
            .iter()
            .map(|s| symmetry::realize_clifford(&sys, &zero, s).map(|el| io::matrix_json(&el.unitary)))
            .collect::<Result<Vec<_>, _>>()?;
        doc["unitaries"] = Value::Array(unitaries);
    }
    io::write_json(common.out.as_ref(), &doc)?;
    eprintln!("order {}", e.order());
    let mismatches = e.criterion.as_ref().map_or(0, |r| r.mismatches);
    if mismatches > 0 {
        eprintln!("matrix criterion disagrees with direct check on {mismatches} candidates");
        return Ok(1);
    }
    Ok(0)
}

fn gate_matrix(g: Gate) -> CMatrix {
    match g {
        Gate::I => CMatrix::identity(2, 2),
        Gate::X => linalg::pauli_x(),
        Gate::Y => linalg::pauli_y(),
        Gate::Z => linalg::pauli_z(),
        Gate::H => linalg::hadamard(),
        Gate::S => linalg::phase_gate(),
        Gate::T => linalg::t_gate(),
    }
}

fn cmd_clifford_detect(system: &SystemArgs, unitary: Option<&PathBuf>, gate: Option<Gate>, common: &Common) -> Result<u8> {
    let sys = build_system(system)?;
    let u = match (unitary, gate) {
        (Some(p), _) => io::parse_matrix(&io::read_json(p)?)?,
        (None, Some(g)) => gate_matrix(g),
        (None, None) => return Err(invalid("--unitary FILE or --gate is required")),
    };
    if u.nrows() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: u.nrows(),
        }
        .into());
    }
    if !linalg::is_unitary(&u, 1e-9) {
        return Err(invalid("operator is not unitary"));
    }
    let doc = match symmetry::detect_generalized_clifford(&sys, &u) {
        None => json!({ "detected": false }),
        Some(w) => {
            let class = symmetry::classify_clifford(&sys, &w)?;
            json!({
                "detected": true,
                "class": class,
                "s": w.s.to_rows(),
                "s_table": w.s_table,
                "xi": w.xi_table,
                "translation": symmetry::recover_translation(&sys, &w).map(|y| y.coords().to_vec()),
            })
        }
    };
    io::write_json(common.out.as_ref(), &doc)?;
    Ok(0)
}

fn covariance_from(system: &SystemArgs, cov: Option<&PathBuf>, block: Option<&Vec<f64>>) -> Result<CovarianceMatrix> {
    match (cov, block) {
        (Some(p), _) => {
            let rows = io::parse_real_matrix(&io::read_json(p)?)?;
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(invalid("covariance matrix must be square"));
            }
            if n != 2 * system.modes {
                return Err(Error::DimensionMismatch {
                    expected: 2 * system.modes,
                    got: n,
                }
                .into());
            }
            Ok(CovarianceMatrix::new(nalgebra_from_rows(&rows))?)
        }
        (None, Some(a)) => {
            if a.len() != system.modes {
                return Err(Error::DimensionMismatch {
                    expected: system.modes,
                    got: a.len(),
                }
                .into());
            }
            Ok(CovarianceMatrix::block_diagonal(a)?)
        }
        (None, None) => Err(invalid("--cov FILE or --block-diagonal a1,...,an is required")),
    }
}

fn nalgebra_from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

fn require_fermion(system: &SystemArgs) -> Result<()> {
    if !matches!(system.system, SystemKind::Fermion) {
        return Err(invalid("Gaussian states need --system fermion"));
    }
    Ok(())
}

fn cmd_gaussian(system: &SystemArgs, cov: Option<&PathBuf>, block: Option<&Vec<f64>>, common: &Common) -> Result<u8> {
    require_fermion(system)?;
    let sys = build_system(system)?;
    let cov = covariance_from(system, cov, block)?;
    let g = gaussian::gaussian_from_covariance(&sys, &cov)?;
    let w = fourier::wigner(&sys, g.rho.matrix())?;
    let doc = json!({
        "system": sys.spec().label(),
        "normalized": sys.is_normalized(),
        "covariance": cov,
        "state": io::matrix_json(g.rho.matrix()),
        "purity": gaussian::purity(g.rho.matrix()),
        "wigner": w.to_json(),
        "wigner_nonneg": w.first_violation(common.tol).is_none(),
    });
    io::write_json(common.out.as_ref(), &doc)?;
    Ok(0)
}

fn direct_verdict(sys: &WeylSystem, rho: &CMatrix, tol: f64) -> Result<(bool, Option<Vec<u32>>)> {
    let w = fourier::wigner(sys, rho)?;
    let idx = w.first_violation(tol);
    Ok((idx.is_none(), idx.map(|i| sys.element(i).coords().to_vec())))
}

fn verdict_json(v: &PositivityVerdict) -> Value {
    serde_json::to_value(v).expect("plain data")
}

fn cmd_positivity(system: &SystemArgs, state: &StateArgs, block: Option<&Vec<f64>>, common: &Common) -> Result<u8> {
    let sys = build_system(system)?;
    let fermion = matches!(system.system, SystemKind::Fermion);
    let (rho, verdict) = if let Some(a) = block {
        require_fermion(system)?;
        let cov = covariance_from(system, None, Some(a))?;
        let rho = gaussian::gaussian_from_covariance(&sys, &cov)?.rho.into_matrix();
        let v = if sys.is_normalized() {
            positivity::gaussian_normalized(&sys, a)?
        } else {
            positivity::gaussian_unnormalized(&sys, &cov)?
        };
        (rho, Some(v))
    } else {
        let rho = load_state(state, sys.dim())?;
        let v = match (fermion, system.modes, sys.is_normalized()) {
            (true, 1, false) => Some(positivity::onemode_unnormalized(&rho)?),
            (true, 1, true) => Some(positivity::onemode_normalized(&rho)?),
            (true, 2, false) => Some(positivity::twomode_unnormalized(&rho)?),
            _ => None,
        };
        (rho, v)
    };
    let (direct, witness) = direct_verdict(&sys, &rho, common.tol.max(BOUNDARY_TOL))?;
    let agrees = verdict.as_ref().is_none_or(|v| v.nonneg == direct);
    let doc = json!({
        "system": sys.spec().label(),
        "normalized": sys.is_normalized(),
        "nonneg": verdict.as_ref().map_or(direct, |v| v.nonneg),
        "classifier": verdict.as_ref().map(verdict_json),
        "direct": { "nonneg": direct, "witness_point": witness },
        "agrees": agrees,
    });
    io::write_json(common.out.as_ref(), &doc)?;
    if !agrees {
        eprintln!("closed-form verdict disagrees with the Wigner function");
        return Ok(1);
    }
    Ok(0)
}

fn cmd_anglenum_wigner(coeffs: &std::path::Path, band: usize, grid: Option<usize>, out: Option<&PathBuf>) -> Result<u8> {
    let c = io::parse_vector(&io::read_json(coeffs)?)?;
    let psi = TorusState::new(band, c, grid.unwrap_or(TorusState::min_grid(band)))?;
    let w = anglenum::mukunda_wigner(&psi)?;
    let mut sink = io::output(out)?;
    w.write_csv(&mut sink)?;
    sink.flush()?;
    let n = w.normalization();
    eprintln!("normalization {:.12} max_imag {:.3e}", n.re, w.max_imag());
    Ok(0)
}

fn cmd_verify(system: &SystemArgs, inject_fault: bool, common: &Common) -> Result<u8> {
    let mut sys = build_system(system)?;
    if sys.order() > verify::MAX_ORDER {
        return Err(Error::TooLarge {
            order: sys.order() as u128,
            limit: verify::MAX_ORDER as u128,
        }
        .into());
    }
    if inject_fault && sys.order() > 1 {
        let op = sys.weyl_idx(1) * Complex64::from_polar(1.0, 0.1);
        sys.override_operator(1, op);
    }
    let checks = verify::run(&sys, common.seed, common.tol);
    for c in &checks {
        eprintln!("{}", c.line());
    }
    let failed = checks.iter().any(|c| c.failed());
    let doc = json!({
        "system": sys.spec().label(),
        "normalized": sys.is_normalized(),
        "passed": !failed,
        "checks": checks.iter().map(|c| c.json()).collect::<Vec<_>>(),
    });
    io::write_json(common.out.as_ref(), &doc)?;
    Ok(u8::from(failed))
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Wigner { system, state, format, common } => cmd_wigner(system, state, *format, common, true),
        Command::Char { system, state, format, common } => cmd_wigner(system, state, *format, common, false),
        Command::Symmetry { system, realize, common } => cmd_symmetry(system, *realize, common),
        Command::CliffordDetect { system, unitary, gate, common } => {
            cmd_clifford_detect(system, unitary.as_ref(), *gate, common)
        }
        Command::Gaussian { system, cov, block_diagonal, common } => {
            cmd_gaussian(system, cov.as_ref(), block_diagonal.as_ref(), common)
        }
        Command::Positivity(PositivityCommand::Check { system, state, block_diagonal, common }) => {
            cmd_positivity(system, state, block_diagonal.as_ref(), common)
        }
        Command::Anglenum(AnglenumCommand::Wigner { coeffs, band, grid, out }) => {
            cmd_anglenum_wigner(coeffs, *band, *grid, out.as_ref())
        }
        Command::Verify { system, inject_fault, common } => cmd_verify(system, *inject_fault, common),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InvalidInput>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::DimensionMismatch { .. }) => 3,
        Some(Error::SearchSpaceTooLarge { .. }) | Some(Error::TooLarge { .. }) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
