use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pcm_efficiency::random::{records_to_csv, summarize, DEFAULT_SIGMA};
use pcm_efficiency::{run_trials, GeneratorMode, GeneratorSpec};
use pcm_service::{
    analyze, dominate, fmt_vec, render_report, summary_line, to_json_line, weights, AnalysisRequest, ApiError,
    MatrixPayload, Method, Options, Test,
};
use serde_json::Value;

/// Pareto efficiency of weight vectors for pairwise comparison matrices.
///
/// Exit status: 0 on success or an efficient verdict, 2 when an inefficient
/// verdict was delivered, 1 on errors.
#[derive(Parser)]
#[command(name = "pcmeff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive a weight vector.
    Weights(Input),
    /// Test efficiency; prints an efficient dominating vector when there is one.
    Efficiency(Analysis),
    /// Test weak efficiency; prints a strictly dominating efficient vector when
    /// the input is strongly inefficient.
    WeakEfficiency(Analysis),
    /// Print an efficient dominating vector.
    Dominate(Analysis),
    /// Monte-Carlo experiment on random matrices.
    Experiment(Experiment),
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

#[derive(Args)]
struct Input {
    /// Matrix file (CSV rows, or JSON `{"n", "entries"}`); `-` reads stdin.
    file: PathBuf,
    /// csv or json; guessed from the extension when omitted.
    #[arg(long)]
    format: Option<String>,
    #[arg(long, default_value = "eigenvector")]
    method: Method,
    /// Digits after the decimal point.
    #[arg(long, default_value_t = 6)]
    precision: usize,
    /// Print the full JSON document instead of a summary line.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Analysis {
    #[command(flatten)]
    input: Input,
    /// Weight vector file; implies `--method custom`.
    #[arg(long, conflicts_with = "method")]
    weights: Option<PathBuf>,
    #[arg(long)]
    reciprocity: Option<f64>,
    #[arg(long)]
    arc_equality: Option<f64>,
    #[arg(long)]
    optimum_cut: Option<f64>,
    #[arg(long)]
    lp_feasibility: Option<f64>,
}

#[derive(Args)]
struct Experiment {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value = "saaty_discrete")]
    mode: GeneratorMode,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Log-scale noise for the lognormal mode.
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,
    /// Write one CSV row per trial to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String, ApiError> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    text.map_err(|e| ApiError::bad_request("io_error", format!("{}: {e}", path.display())))
}

fn matrix_payload(input: &Input) -> Result<MatrixPayload, ApiError> {
    let text = read_text(&input.file)?;
    let json = match input.format.as_deref() {
        Some(f) if f.eq_ignore_ascii_case("json") => true,
        Some(f) if f.eq_ignore_ascii_case("csv") => false,
        Some(f) => return Err(ApiError::bad_request("invalid_request", format!("unknown format `{f}`"))),
        None => input.file.extension().is_some_and(|e| e == "json"),
    };
    if json {
        serde_json::from_str(&text).map_err(|e| ApiError::bad_request("parse_error", e.to_string()))
    } else {
        Ok(MatrixPayload::Csv(text))
    }
}

/// Weight file cells are passed on verbatim so they parse exactly as they
/// would in a service request.
fn weight_cells(path: &Path) -> Result<Vec<Value>, ApiError> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).map_err(|e| ApiError::bad_request("parse_error", e.to_string()));
    }
    Ok(text
        .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|c| !c.is_empty())
        .map(|c| Value::String(c.to_string()))
        .collect())
}

fn request(a: &Analysis, test: Test) -> Result<AnalysisRequest, ApiError> {
    let custom_weights = a.weights.as_deref().map(weight_cells).transpose()?;
    Ok(AnalysisRequest {
        matrix: matrix_payload(&a.input)?,
        method: if custom_weights.is_some() {
            Method::Custom
        } else {
            a.input.method
        },
        custom_weights,
        options: Options {
            test,
            reciprocity: a.reciprocity,
            arc_equality: a.arc_equality,
            optimum_cut: a.optimum_cut,
            lp_feasibility: a.lp_feasibility,
        },
    })
}

fn run(cli: Cli) -> Result<ExitCode, ApiError> {
    match cli.command {
        Command::Weights(input) => {
            let req = AnalysisRequest {
                matrix: matrix_payload(&input)?,
                method: input.method,
                custom_weights: None,
                options: Options::default(),
            };
            let w = weights(&req, None)?;
            if input.json {
                print!("{}", to_json_line(&w));
            } else {
                println!("{}", fmt_vec(&w.weights, input.precision));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Efficiency(a) => verdict(&a, Test::Efficiency),
        Command::WeakEfficiency(a) => verdict(&a, Test::WeakEfficiency),
        Command::Dominate(a) => {
            let req = request(&a, Test::Efficiency)?;
            let d = dominate(&req, None)?;
            let found = d.dominator_aligned.is_some();
            if a.input.json {
                print!("{}", to_json_line(&d));
            } else {
                match &d.dominator_aligned {
                    Some(v) => println!("{}", fmt_vec(v, a.input.precision)),
                    None => println!("EFFICIENT"),
                }
            }
            Ok(if found { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Experiment(e) => {
            let spec = GeneratorSpec::new(e.n, e.mode, e.seed).with_sigma(e.sigma);
            let records = run_trials(&spec, e.trials)?;
            if let Some(path) = &e.csv {
                std::fs::write(path, records_to_csv(&records))
                    .map_err(|err| ApiError::bad_request("io_error", format!("{}: {err}", path.display())))?;
            }
            print!("{}", summarize(&spec, &records).to_json() + "\n");
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { port, host } => {
            let runtime = tokio::runtime::Runtime::new()
                .map_err(|e| ApiError::bad_request("io_error", e.to_string()))?;
            runtime
                .block_on(pcm_service::server::serve((host, port).into()))
                .map_err(|e| ApiError::bad_request("io_error", e.to_string()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn verdict(a: &Analysis, test: Test) -> Result<ExitCode, ApiError> {
    let req = request(a, test)?;
    let report = analyze(&req, None)?;
    let (line, dominated) = summary_line(&report, test, a.input.precision);
    if a.input.json {
        print!("{}", render_report(&report));
    } else {
        println!("{line}");
    }
    Ok(if dominated { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(d) = &e.details {
                eprintln!("{d}");
            }
            ExitCode::from(1)
        }
    }
}
