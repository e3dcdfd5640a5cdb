//! `phase-ambiguity`: JSON command-line front end for enumerating,
//! classifying, and certifying the ambiguities of one-dimensional Fourier
//! phase retrieval.
//!
//! Every subcommand reads JSON from a file (or stdin when the argument is
//! `-` or omitted) and writes JSON to stdout (or `--output`). Exit codes:
//! 0 success; 2 precondition violation (bad input, not equi-intensity);
//! 3 numerical failure (non-convergence, pairing failure); 64 unknown
//! subcommand. Operational errors are machine-readable JSON on stderr.

mod sci_json;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use phase_ambiguity::{
    check_witness, classify_pair, convolution_factor, enumerate_candidates, factor_intensity, flip,
    generic_uniqueness_test, intensity, minimum_phase, parse_constraint, recover_with_last_modulus,
    synthesize, to_root_form, Config, ConvolutionCertificate, Error, FlipMask, IntensitySpectrum,
    PhaseClassRep, RootForm, Signal, WitnessMode,
};

const FORMATS: &str = "\
Wire formats (all complex numbers are [re, im] arrays of 64-bit floats):
  signal    {\"signal\": [[re,im], ...]}                   coefficients, constant term first
  spectrum  {\"degree\": N, \"coeffs\": [[re,im], ...]}      autocorrelation c[-N..N]
  rootform  {\"leading\": [re,im], \"roots\": [[re,im],…]}  leading scalar and root list
  mask      unsigned integer bit set over root slots
  tuple     {\"tuple\": [signal, ...]}                    witness input

Constraint selectors: none | fixed-last-modulus:a=<float> | stft:L=<int>
Floats are printed with 17 significant digits, so outputs round-trip and
repeated runs are byte-identical. PHASE_AMBIGUITY_THREADS caps worker
threads (0 or unset = one per core).";

#[derive(Parser)]
#[command(
    name = "phase-ambiguity",
    version,
    about = "Enumerate, classify, and certify 1D Fourier phase retrieval ambiguities",
    after_help = FORMATS
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Full-support tolerance (relative)
    #[arg(long, global = true, default_value_t = phase_ambiguity::config::DEFAULT_SUPPORT_TOL)]
    tol_support: f64,
    /// Root residual tolerance (relative)
    #[arg(long, global = true, default_value_t = phase_ambiguity::config::DEFAULT_RESIDUAL_TOL)]
    tol_residual: f64,
    /// Reciprocal-conjugate pairing and root-matching tolerance (relative)
    #[arg(long, global = true, default_value_t = phase_ambiguity::config::DEFAULT_PAIRING_TOL)]
    tol_pairing: f64,
    /// Unit-circle degeneracy band
    #[arg(long, global = true, default_value_t = phase_ambiguity::config::DEFAULT_CIRCLE_TOL)]
    tol_circle: f64,
    /// Coincident-candidate deduplication tolerance (relative)
    #[arg(long, global = true, default_value_t = phase_ambiguity::config::DEFAULT_DEDUP_TOL)]
    tol_dedup: f64,
    /// Constraint predicate tolerance (relative)
    #[arg(long, global = true, default_value_t = phase_ambiguity::config::DEFAULT_PREDICATE_TOL)]
    tol_predicate: f64,
    /// Seed for sampled trials
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on the total degree of exhaustive enumerations (at most 24)
    #[arg(long, global = true, default_value_t = phase_ambiguity::config::DEFAULT_MAX_N as u64, value_parser = clap::value_parser!(u64).range(1..=24))]
    max_n: u64,
    /// Pretty-print JSON with this indent width (0 = compact)
    #[arg(long, global = true, default_value_t = 0)]
    json_indent: usize,
    /// Write the result here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Autocorrelation spectrum of a signal
    Intensity { input: Option<PathBuf> },
    /// Factor a signal into leading coefficient and roots
    Roots { input: Option<PathBuf> },
    /// Expand a root form back into a signal (inverse of `roots`)
    Synth { input: Option<PathBuf> },
    /// Apply conjugate-reciprocal flips to the masked root slots
    Flip {
        input: Option<PathBuf>,
        /// Bit mask over root slots
        #[arg(long)]
        mask: u32,
    },
    /// All 2^N equi-intensity candidates of a signal, in trivial classes
    Enumerate { input: Option<PathBuf> },
    /// Classify an equi-intensity signal pair and emit its convolution
    /// certificate
    Classify { first: PathBuf, second: PathBuf },
    /// Factor a spectrum into reciprocal-conjugate root pairs
    Factor { input: Option<PathBuf> },
    /// Minimum-phase representative of a spectrum
    Minphase { input: Option<PathBuf> },
    /// Candidates of a spectrum consistent with a constraint
    Recover {
        input: Option<PathBuf>,
        /// Only `fixed-last-modulus:a=<float>` is meaningful here
        #[arg(long)]
        constraint: String,
    },
    /// Exhaustively check a witness tuple against a constraint
    Witness {
        input: Option<PathBuf>,
        #[arg(long)]
        constraint: String,
        #[arg(long, value_enum, default_value_t = ModeArg::ModGlobalPhase)]
        mode: ModeArg,
    },
    /// Monte-Carlo genericity test over a constraint's sampler
    GenericTest {
        #[arg(long)]
        constraint: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::ModGlobalPhase)]
        mode: ModeArg,
        /// Component signal lengths for `none` and `fixed-last-modulus`
        /// (comma separated)
        #[arg(long, value_delimiter = ',')]
        lengths: Option<Vec<usize>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    ModGlobalPhase,
    ModTrivial,
}

impl From<ModeArg> for WitnessMode {
    fn from(mode: ModeArg) -> WitnessMode {
        match mode {
            ModeArg::ModGlobalPhase => WitnessMode::ModGlobalPhase,
            ModeArg::ModTrivial => WitnessMode::ModTrivial,
        }
    }
}

struct CliError {
    code: u8,
    slug: &'static str,
    detail: String,
}

impl CliError {
    fn new(code: u8, slug: &'static str, detail: impl Into<String>) -> Self {
        CliError {
            code,
            slug,
            detail: detail.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        let (code, slug) = match &error {
            Error::NonConvergence { .. } => (3, "non_convergence"),
            Error::PairingFailure(_) => (3, "pairing_failure"),
            Error::NoMatch(_) => (3, "no_match"),
            Error::SpectrumInconsistent { .. } => (3, "spectrum_inconsistent"),
            Error::TooShort { .. } | Error::FullSupport { .. } | Error::NonFinite { .. } => {
                (2, "bad_signal")
            }
            Error::LengthMismatch { .. } | Error::DegreeMismatch { .. } | Error::EmptyInput => {
                (2, "shape_mismatch")
            }
            Error::InvalidSpectrum(_) => (2, "bad_spectrum"),
            Error::InvalidRootForm(_) => (2, "bad_root_form"),
            Error::ZeroLeading => (2, "zero_leading"),
            Error::NotEquiIntensity => (2, "not_equi_intensity"),
            Error::EnumerationCap { .. } => (2, "enumeration_cap"),
            Error::Constraint(_) => (2, "bad_constraint"),
        };
        CliError::new(code, slug, error.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            use clap::error::ErrorKind;
            return match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{error}");
                    ExitCode::SUCCESS
                }
                ErrorKind::InvalidSubcommand => {
                    eprint!("{error}");
                    ExitCode::from(64)
                }
                _ => {
                    eprint!("{error}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            #[derive(Serialize)]
            struct ErrorWire<'a> {
                error: &'a str,
                detail: &'a str,
            }
            let wire = ErrorWire {
                error: error.slug,
                detail: &error.detail,
            };
            eprintln!(
                "{}",
                serde_json::to_string(&wire).unwrap_or_else(|_| "{\"error\":\"internal\"}".into())
            );
            ExitCode::from(error.code)
        }
    }
}

fn config_from(cli: &Cli) -> Result<Config, CliError> {
    let tolerances = [
        cli.tol_support,
        cli.tol_residual,
        cli.tol_pairing,
        cli.tol_circle,
        cli.tol_dedup,
        cli.tol_predicate,
    ];
    if tolerances
        .iter()
        .any(|t| t.is_nan() || *t <= 0.0 || !t.is_finite())
    {
        return Err(CliError::new(
            2,
            "bad_tolerance",
            "tolerances must be positive",
        ));
    }
    Ok(Config {
        support_tol: cli.tol_support,
        residual_tol: cli.tol_residual,
        pairing_tol: cli.tol_pairing,
        circle_tol: cli.tol_circle,
        dedup_tol: cli.tol_dedup,
        predicate_tol: cli.tol_predicate,
        max_n: cli.max_n as usize,
        ..Config::default()
    })
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| CliError::new(2, "io", format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::new(2, "io", format!("cannot read stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::new(2, "bad_input", e.to_string()))
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<(), CliError> {
    let mut text = sci_json::to_string(value, cli.json_indent)
        .map_err(|e| CliError::new(2, "serialize", e.to_string()))?;
    text.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::new(2, "io", format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Deserialize)]
struct TupleInput {
    tuple: Vec<Signal>,
}

#[derive(Serialize)]
struct ClassifyOutput {
    components: Vec<usize>,
    witness_masks: Vec<FlipMask>,
    degenerate_roots: Vec<usize>,
    certificate: ConvolutionCertificate,
}

#[derive(Serialize)]
struct RecoverOutput {
    classes: Vec<PhaseClassRep>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config_from(&cli)?;
    match &cli.command {
        Command::Intensity { input } => {
            let x: Signal = parse_json(&read_input(input)?)?;
            emit(&cli, &intensity(&x))
        }
        Command::Roots { input } => {
            let x: Signal = parse_json(&read_input(input)?)?;
            emit(&cli, &to_root_form(&x, &cfg)?)
        }
        Command::Synth { input } => {
            let rf: RootForm = parse_json(&read_input(input)?)?;
            emit(&cli, &synthesize(&rf)?)
        }
        Command::Flip { input, mask } => {
            let rf: RootForm = parse_json(&read_input(input)?)?;
            let mask = FlipMask::new(*mask);
            if !mask.is_valid_for(rf.degree()) {
                return Err(CliError::new(
                    2,
                    "bad_mask",
                    format!(
                        "mask {} addresses more than {} roots",
                        mask.bits(),
                        rf.degree()
                    ),
                ));
            }
            emit(&cli, &flip(&rf, mask))
        }
        Command::Enumerate { input } => {
            let x: Signal = parse_json(&read_input(input)?)?;
            emit(&cli, &enumerate_candidates(&x, &cfg)?)
        }
        Command::Classify { first, second } => {
            let x: Signal = parse_json(&read_input(&Some(first.clone()))?)?;
            let xp: Signal = parse_json(&read_input(&Some(second.clone()))?)?;
            let classification = classify_pair(&x, &xp, cfg.pairing_tol, &cfg)?;
            let certificate = convolution_factor(&x, &xp, cfg.pairing_tol, &cfg)?;
            emit(
                &cli,
                &ClassifyOutput {
                    components: classification.components,
                    witness_masks: classification.witnesses,
                    degenerate_roots: classification.degenerate_roots,
                    certificate,
                },
            )
        }
        Command::Factor { input } => {
            let s: IntensitySpectrum = parse_json(&read_input(input)?)?;
            emit(&cli, &factor_intensity(&s, &cfg)?)
        }
        Command::Minphase { input } => {
            let s: IntensitySpectrum = parse_json(&read_input(input)?)?;
            emit(&cli, &minimum_phase(&s, &cfg)?)
        }
        Command::Recover { input, constraint } => {
            let s: IntensitySpectrum = parse_json(&read_input(input)?)?;
            let a = constraint
                .strip_prefix("fixed-last-modulus:a=")
                .and_then(|rest| rest.parse::<f64>().ok())
                .filter(|a| *a > 0.0)
                .ok_or_else(|| {
                    CliError::new(
                        2,
                        "bad_constraint",
                        "recover needs --constraint fixed-last-modulus:a=<positive float>",
                    )
                })?;
            let classes = recover_with_last_modulus(&s, a, cfg.predicate_tol, &cfg)?;
            emit(&cli, &RecoverOutput { classes })
        }
        Command::Witness {
            input,
            constraint,
            mode,
        } => {
            let tuple: TupleInput = parse_json(&read_input(input)?)?;
            let lengths: Vec<usize> = tuple.tuple.iter().map(Signal::len).collect();
            let system = parse_constraint(constraint, Some(lengths))?;
            let report = check_witness(
                &system,
                &tuple.tuple,
                (*mode).into(),
                cfg.predicate_tol,
                &cfg,
            )?;
            emit(&cli, &report)
        }
        Command::GenericTest {
            constraint,
            trials,
            mode,
            lengths,
        } => {
            let system = parse_constraint(constraint, lengths.clone())?;
            let report = generic_uniqueness_test(
                &system,
                *trials,
                cli.seed,
                (*mode).into(),
                cfg.predicate_tol,
                &cfg,
            )?;
            emit(&cli, &report)
        }
    }
}
