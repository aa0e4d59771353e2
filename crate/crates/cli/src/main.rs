//! Command-line front end for the planar Dunkl-Coulomb model: exact spectrum
//! tables, grid-sampled bound states, normalized Gram matrices, and the
//! operator-identity verification suite.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dunkl_coulomb::operator::ModelParams;
use dunkl_coulomb::rational::Rational;
use dunkl_coulomb::spectra::{self, QuantumNumbers};
use dunkl_coulomb::verify::{run_suite, Mutation, SuiteConfig, MUTATION_NAMES};
use dunkl_coulomb::wavefunction::{
    angular_harmonic, angular_norm_constant, full_wavefunction, gram_angular, gram_full,
    gram_radial, norm_constant, radial_factor, radial_norm_constant, WavefunctionBundle,
};
use dunkl_coulomb::{exec, FunctionExpr};

#[derive(Parser)]
#[command(name = "dcp", version, about = "Planar Dunkl-Coulomb model toolkit")]
struct Cli {
    /// Reflection coupling on the first axis, as a rational.
    #[arg(long, global = true, default_value = "1/4", value_parser = parse_rational, allow_hyphen_values = true)]
    mu1: Rational,
    /// Reflection coupling on the second axis, as a rational.
    #[arg(long, global = true, default_value = "3/4", value_parser = parse_rational, allow_hyphen_values = true)]
    mu2: Rational,
    /// Coulomb strength; must be negative for bound states.
    #[arg(long, global = true, default_value = "-1", value_parser = parse_rational, allow_hyphen_values = true)]
    alpha: Rational,
    /// Quadrature order override for inner products.
    #[arg(long, global = true)]
    quad_order: Option<usize>,
    /// Seed for the randomized part of the verification family.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the primary output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact bound-state table for all levels up to a cutoff.
    Spectrum {
        #[arg(long, default_value_t = 3)]
        max_level: u32,
    },
    /// Sample one normalized bound state on a rectangular grid.
    ///
    /// Writes CSV rows `x1,x2,psi` to --out (required) and a JSON sidecar
    /// with the exact expression and spectral data next to it.
    State {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        two_n: u32,
        #[arg(long, default_value_t = 0)]
        e1: u8,
        #[arg(long, default_value_t = 0)]
        e2: u8,
        /// Grid resolution, WIDTHxHEIGHT; samples are cell centers.
        #[arg(long, value_parser = parse_grid, default_value = "64x64")]
        grid: (usize, usize),
        /// Sampling window x_lo,x_hi,y_lo,y_hi.
        #[arg(long = "box", value_parser = parse_window, default_value = "-6,6,-6,6", allow_hyphen_values = true)]
        window: (f64, f64, f64, f64),
    },
    /// Run the verification suite and report each check.
    Verify {
        /// Substring filter on check names.
        #[arg(long)]
        suite: Option<String>,
        /// Inject a named defect; its target check must then fail.
        #[arg(long)]
        mutate: Option<String>,
        /// List mutation names and exit.
        #[arg(long, default_value_t = false)]
        list_mutations: bool,
    },
    /// Normalized Gram matrix of one inner-product kind.
    Gram {
        #[arg(value_enum)]
        kind: GramKind,
        /// Angular: largest 2n. Radial: largest l. Full: largest level.
        #[arg(long, default_value_t = 3)]
        max_level: u32,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GramKind {
    Angular,
    Radial,
    Full,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once('x')
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s}"))?;
    let w: usize = w.parse().map_err(|_| format!("bad grid width {w}"))?;
    let h: usize = h.parse().map_err(|_| format!("bad grid height {h}"))?;
    if w == 0 || h == 0 {
        return Err("grid dimensions must be positive".to_string());
    }
    Ok((w, h))
}

fn parse_window(s: &str) -> Result<(f64, f64, f64, f64), String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("expected x_lo,x_hi,y_lo,y_hi, got {s}"))?;
    if parts.len() != 4 {
        return Err(format!("expected four numbers, got {}", parts.len()));
    }
    if parts[0] > parts[1] || parts[2] > parts[3] {
        return Err("window bounds must be ordered".to_string());
    }
    Ok((parts[0], parts[1], parts[2], parts[3]))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    let params = ModelParams::new(cli.mu1.clone(), cli.mu2.clone(), cli.alpha.clone())?;
    match cli.command {
        Command::Spectrum { max_level } => {
            let rows = spectra::spectrum_records(&params, max_level)?;
            let text = match cli.format {
                Format::Json => to_json(&rows)?,
                Format::Csv => spectrum_csv(&rows),
            };
            emit(&cli.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::State {
            l,
            two_n,
            e1,
            e2,
            grid,
            window,
        } => {
            let out = cli
                .out
                .as_ref()
                .context("state writes grid samples to a file; pass --out PATH")?;
            let qn = QuantumNumbers::new(l, two_n, e1, e2)?;
            write_state(&params, &qn, grid, window, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            mutate,
            list_mutations,
        } => {
            if list_mutations {
                let mut text = String::new();
                for name in MUTATION_NAMES {
                    let m = Mutation::from_name(name)?;
                    let _ = writeln!(text, "{name}: {} (target {})", m.description(), m.target_check());
                }
                emit(&cli.out, &text)?;
                return Ok(ExitCode::SUCCESS);
            }
            let config = SuiteConfig {
                seed: cli.seed,
                filter: suite,
                mutation: mutate.as_deref().map(Mutation::from_name).transpose()?,
                quad_order: cli.quad_order,
                ..SuiteConfig::default()
            };
            let reports = run_suite(&[params], &config)?;
            if reports.is_empty() {
                bail!("no checks match the filter");
            }
            let text = match cli.format {
                Format::Json => to_json(&reports)?,
                Format::Csv => verify_csv(&reports),
            };
            emit(&cli.out, &text)?;
            let failed = reports.iter().filter(|r| !r.is_pass()).count();
            if failed > 0 {
                eprintln!("{failed} of {} checks failed", reports.len());
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Gram { kind, max_level } => {
            let (states, matrix) = normalized_gram(&params, kind, max_level, cli.quad_order)?;
            let text = match cli.format {
                Format::Json => to_json(&GramOutput {
                    kind: match kind {
                        GramKind::Angular => "angular",
                        GramKind::Radial => "radial",
                        GramKind::Full => "full",
                    },
                    states: states.iter().map(StateLabel::from).collect(),
                    matrix: &matrix,
                })?,
                Format::Csv => matrix_csv(&matrix),
            };
            emit(&cli.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// DCP_THREADS caps the rayon pool; unset keeps the library default.
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("DCP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("DCP_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("rayon pool already initialized")?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn spectrum_csv(rows: &[spectra::SpectrumRecord]) -> String {
    let mut text = String::from("l,two_n,e1,e2,kappa,energy,beta,j3_sq\n");
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{}",
            r.l, r.two_n, r.e1, r.e2, r.kappa, r.energy, r.beta, r.j3_sq
        );
    }
    text
}

fn verify_csv(reports: &[dunkl_coulomb::verify::CheckReport]) -> String {
    let mut text = String::from("name,mu1,mu2,alpha,status,exactness,residual,tolerance,elapsed_ms\n");
    for r in reports {
        let status = if r.is_pass() { "pass" } else { "fail" };
        let exactness = match r.exactness {
            dunkl_coulomb::verify::Exactness::Exact => "exact",
            dunkl_coulomb::verify::Exactness::Float => "float",
        };
        let residual = match &r.residual {
            dunkl_coulomb::verify::ResidualValue::Exact(v) => v.to_string(),
            dunkl_coulomb::verify::ResidualValue::Float(v) => format!("{v:.16e}"),
        };
        let tolerance = r
            .tolerance
            .map(|t| format!("{t:.16e}"))
            .unwrap_or_default();
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{},{}",
            r.name,
            r.params.mu1(),
            r.params.mu2(),
            r.params.alpha(),
            status,
            exactness,
            residual,
            tolerance,
            r.elapsed_ms
        );
    }
    text
}

fn matrix_csv(matrix: &[Vec<f64>]) -> String {
    let mut text = String::new();
    for row in matrix {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(text, "{}", line.join(","));
    }
    text
}

#[derive(Serialize)]
struct StateLabel {
    l: u32,
    two_n: u32,
    e1: u8,
    e2: u8,
}

impl From<&QuantumNumbers> for StateLabel {
    fn from(qn: &QuantumNumbers) -> Self {
        StateLabel {
            l: qn.l(),
            two_n: qn.two_n(),
            e1: qn.e1(),
            e2: qn.e2(),
        }
    }
}

#[derive(Serialize)]
struct GramOutput<'a> {
    kind: &'a str,
    states: Vec<StateLabel>,
    matrix: &'a [Vec<f64>],
}

fn normalized_gram(
    params: &ModelParams,
    kind: GramKind,
    max_level: u32,
    order: Option<usize>,
) -> Result<(Vec<QuantumNumbers>, Vec<Vec<f64>>)> {
    let (states, functions, scales): (Vec<QuantumNumbers>, Vec<FunctionExpr>, Vec<f64>) =
        match kind {
            GramKind::Angular => {
                let states: Vec<QuantumNumbers> = (0..=max_level)
                    .flat_map(spectra::enumerate_level)
                    .filter(|q| q.l() == 0)
                    .collect();
                let functions = states
                    .iter()
                    .map(|q| angular_harmonic(params, q))
                    .collect::<Result<Vec<_>, _>>()?;
                let scales = states
                    .iter()
                    .map(|q| angular_norm_constant(params, q))
                    .collect();
                (states, functions, scales)
            }
            GramKind::Radial => {
                let states: Vec<QuantumNumbers> = (0..=max_level)
                    .map(|l| QuantumNumbers::new(l, 0, 0, 0))
                    .collect::<Result<Vec<_>, _>>()?;
                let functions = states
                    .iter()
                    .map(|q| radial_factor(params, q))
                    .collect::<Result<Vec<_>, _>>()?;
                let scales = states
                    .iter()
                    .map(|q| radial_norm_constant(params, q))
                    .collect::<Result<Vec<_>, _>>()?;
                (states, functions, scales)
            }
            GramKind::Full => {
                let states: Vec<QuantumNumbers> = (0..=max_level)
                    .flat_map(spectra::enumerate_level)
                    .collect();
                let functions = states
                    .iter()
                    .map(|q| full_wavefunction(params, q))
                    .collect::<Result<Vec<_>, _>>()?;
                let scales = states
                    .iter()
                    .map(|q| norm_constant(params, q))
                    .collect::<Result<Vec<_>, _>>()?;
                (states, functions, scales)
            }
        };
    let raw = match kind {
        GramKind::Angular => gram_angular(params, &functions, order)?,
        GramKind::Radial => gram_radial(params, &functions, order)?,
        GramKind::Full => gram_full(params, &functions, order)?,
    };
    let n = raw.len();
    let mut matrix = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            matrix[i][j] = raw[i][j] * scales[i] * scales[j];
        }
    }
    Ok((states, matrix))
}

#[derive(Serialize)]
struct StateSidecar<'a> {
    l: u32,
    two_n: u32,
    e1: u8,
    e2: u8,
    kappa: String,
    energy: String,
    beta: String,
    j3_sq: String,
    norm_constant: f64,
    grid: GridMeta,
    expression: &'a FunctionExpr,
}

#[derive(Serialize)]
struct GridMeta {
    width: usize,
    height: usize,
    window: [f64; 4],
}

fn write_state(
    params: &ModelParams,
    qn: &QuantumNumbers,
    (width, height): (usize, usize),
    (x_lo, x_hi, y_lo, y_hi): (f64, f64, f64, f64),
    out: &PathBuf,
) -> Result<()> {
    let bundle = WavefunctionBundle::build(params, qn)?;

    let points: Vec<(f64, f64)> = (0..width * height)
        .map(|k| {
            let i = k % width;
            let j = k / width;
            let x1 = x_lo + (x_hi - x_lo) * (i as f64 + 0.5) / width as f64;
            let x2 = y_lo + (y_hi - y_lo) * (j as f64 + 0.5) / height as f64;
            (x1, x2)
        })
        .collect();
    let values = exec::map_collect(points.clone(), |(x1, x2)| {
        bundle.evaluate_normalized(x1, x2)
    });

    let mut csv = String::from("x1,x2,psi\n");
    for ((x1, x2), value) in points.iter().zip(values) {
        let _ = writeln!(csv, "{x1:.16e},{x2:.16e},{:.16e}", value?);
    }
    fs::write(out, csv).with_context(|| format!("writing {}", out.display()))?;

    let mut sidecar_path = out.with_extension("json");
    if &sidecar_path == out {
        sidecar_path = out.with_extension("meta.json");
    }
    let sidecar = StateSidecar {
        l: qn.l(),
        two_n: qn.two_n(),
        e1: qn.e1(),
        e2: qn.e2(),
        kappa: spectra::kappa(params, qn)?.to_string(),
        energy: spectra::energy(params, qn)?.to_string(),
        beta: spectra::beta(params, qn)?.to_string(),
        j3_sq: spectra::j3_eigenvalue_squared(params, qn).to_string(),
        norm_constant: bundle.norm_constant,
        grid: GridMeta {
            width,
            height,
            window: [x_lo, x_hi, y_lo, y_hi],
        },
        expression: &bundle.exact,
    };
    fs::write(&sidecar_path, to_json(&sidecar)?)
        .with_context(|| format!("writing {}", sidecar_path.display()))?;
    Ok(())
}
