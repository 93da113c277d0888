use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cohent_core::io::{self, parse_measurement, LoadedMeasurement, MatrixFile, NaimarkFile};
use cohent_core::naimark::{fourier_extension_for, REPRODUCTION_TOL};
use cohent_core::repro::{self, DEFAULT_GRID};
use cohent_core::{
    block_coherence, canonical_extension, convert, embed_state, is_povm_incoherent, minimal_rank_one_extension,
    povm_coherence, verify_extension, DensityMatrix, Error,
};

/// Block and POVM-based coherence, Naimark extensions, and conversion into entanglement.
#[derive(Parser)]
#[command(name = "cohent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coherence of a state with respect to a POVM or projective measurement.
    Coherence {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, conflicts_with = "projective", required_unless_present = "projective")]
        povm: Option<PathBuf>,
        #[arg(long)]
        projective: Option<PathBuf>,
    },
    /// Build and verify a Naimark extension of a POVM.
    Naimark {
        #[arg(long)]
        povm: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Canonical)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convert block coherence into entanglement with a target system.
    Convert {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        projective: PathBuf,
        /// Defaults to the number of outcomes.
        #[arg(long)]
        target_dim: Option<usize>,
        /// Write the converted state here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce a worked example: example1, trine, four-element or fig2.
    Repro {
        example: String,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Randomized coherence-iff-entanglement sweep.
    Sweep {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Canonical,
    Minimal,
    Fourier,
}

enum Failure {
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult = Result<ExitCode, Failure>;

fn load_state(path: &Path) -> Result<DensityMatrix, Error> {
    io::load_matrix_file(path)?.to_state()
}

fn load_measurement(path: &Path) -> Result<LoadedMeasurement, Error> {
    parse_measurement(&io::read_text(path)?)
}

/// Embeds `rho` when it lives on the source space of a loaded extension.
fn prepare_state(rho: DensityMatrix, m: &LoadedMeasurement) -> Result<DensityMatrix, Error> {
    match &m.extension {
        Some(ext) if rho.dim() == ext.source_dim && rho.dim() != ext.dim() => {
            println!("state embedded into dimension {}", ext.dim());
            embed_state(&rho, ext)
        }
        _ => Ok(rho),
    }
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<_> = xs.iter().map(|x| format!("{x:.7}")).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_coherence(state: &Path, povm: Option<&Path>, projective: Option<&Path>) -> CliResult {
    let rho = load_state(state)?;
    if let Some(path) = povm {
        let povm = io::load_matrix_file(path)?.to_povm()?;
        let report = povm_coherence(&rho, &povm)?;
        println!("C_r = {:.7}", report.value);
        println!("p = {}", fmt_list(&report.probabilities));
        println!("incoherent: {}", is_povm_incoherent(&rho, &povm)?);
    } else if let Some(path) = projective {
        let loaded = load_measurement(path)?;
        let rho = prepare_state(rho, &loaded)?;
        let p = &loaded.measurement;
        let value = block_coherence(&rho, p)?;
        println!("C_r = {value:.7}");
        println!("p = {}", fmt_list(&p.to_povm().probabilities(&rho)?));
        println!("incoherent: {}", is_povm_incoherent(&rho, &p.to_povm())?);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_naimark(povm: &Path, method: Method, out: Option<&Path>, trials: usize, seed: u64) -> CliResult {
    let povm = io::load_matrix_file(povm)?.to_povm()?;
    let ext = match method {
        Method::Canonical => canonical_extension(&povm)?.0,
        Method::Minimal => minimal_rank_one_extension(&povm)?,
        Method::Fourier => fourier_extension_for(&povm)?,
    };
    println!("extension dimension {} (source {})", ext.dim(), ext.source_dim);
    let report = verify_extension(&povm, &ext, trials, seed)?;
    println!(
        "verified over {} states: max |tr(E_i rho) - tr(P_i rho')| = {:.3e}",
        report.trials, report.max_deviation
    );
    if let Some(path) = out {
        io::write_text(path, &NaimarkFile::from_extension(&ext).to_json())?;
        println!("wrote {}", path.display());
    }
    if !report.passed {
        eprintln!("error: reproduction deviation exceeds {REPRODUCTION_TOL:e}");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_convert(state: &Path, projective: &Path, target_dim: Option<usize>, out: Option<&Path>) -> CliResult {
    let loaded = load_measurement(projective)?;
    let rho = prepare_state(load_state(state)?, &loaded)?;
    let p = &loaded.measurement;
    let result = convert(&rho, p, target_dim.unwrap_or(p.outcomes()))?;
    println!("C_r = {:.7}", result.coherence_input);
    println!("E_r = {:.7}", result.rel_ent_entanglement);
    println!("negativity = {:.7}", result.negativity);
    if let Some(path) = out {
        io::write_text(path, &MatrixFile::from_state(&result.output_state).to_json())?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn write_csv(out: Option<&Path>, csv: &str) -> Result<(), Error> {
    if let Some(path) = out {
        io::write_text(path, csv)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_repro(example: &str, out: Option<&Path>, grid: Option<usize>) -> CliResult {
    match example {
        "example1" => {
            let rows = repro::example1_rows(grid.unwrap_or(8))?;
            print!("{}", repro::example1_table(&rows));
            let worst = rows.iter().map(|r| (1.0 - r.s0_purity).abs()).fold(0.0, f64::max);
            println!("max |1 - tr(r0^2)| = {worst:.3e}");
            write_csv(out, &repro::example1_csv(&rows))?;
        }
        "trine" => {
            let rows = repro::trine_rows()?;
            print!("{}", repro::trine_table(&rows));
            write_csv(out, &repro::trine_csv(&rows))?;
        }
        "four-element" => {
            let rows = repro::four_element_rows()?;
            print!("{}", repro::four_element_table(&rows));
            write_csv(out, &repro::four_element_csv(&rows))?;
        }
        "fig2" => {
            let grid = grid.unwrap_or(DEFAULT_GRID);
            if grid == 0 {
                return Err(Failure::Input("grid must be positive".into()));
            }
            let rows = repro::fig2_rows(grid)?;
            println!("t          C(E0)      C(E1)      E_r        ancilla");
            let step = (grid / 4).max(1);
            for r in rows.iter().step_by(step) {
                println!(
                    "{:<10.7} {:.7}  {:.7}  {:.7}  {}",
                    r.t, r.coherence_e0, r.coherence_e1, r.entanglement_selected, r.ancilla_choice
                );
            }
            write_csv(out, &repro::fig2_csv(&rows))?;
        }
        other => {
            return Err(Failure::Input(format!(
                "unknown example `{other}` (expected example1, trine, four-element or fig2)"
            )))
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(dim: usize, trials: usize, seed: u64) -> CliResult {
    if !(2..=8).contains(&dim) {
        return Err(Failure::Input(format!("dim must be in 2..=8, got {dim}")));
    }
    let report = repro::run_sweep(dim, trials, seed);
    print!("{}", report.summary());
    if let Some(f) = report.failures.first() {
        eprintln!("first failure: trial {} (seed {}): {}", f.trial, f.seed, f.detail);
        eprintln!("state:\n{}", MatrixFile::from_state(&f.state).to_json());
        eprintln!("measurement:\n{}", MatrixFile::from_projective(&f.measurement).to_json());
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Coherence { state, povm, projective } => cmd_coherence(&state, povm.as_deref(), projective.as_deref()),
        Command::Naimark {
            povm,
            method,
            out,
            trials,
            seed,
        } => cmd_naimark(&povm, method, out.as_deref(), trials, seed),
        Command::Convert {
            state,
            projective,
            target_dim,
            out,
        } => cmd_convert(&state, &projective, target_dim, out.as_deref()),
        Command::Repro { example, out, grid } => cmd_repro(&example, out.as_deref(), grid),
        Command::Sweep { dim, trials, seed } => cmd_sweep(dim, trials, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
