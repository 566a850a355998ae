use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fbfsel::harness::{emit_boxplot_svg, emit_results, ingest_csv, read_summary, run_experiment, ExperimentSpec};
use fbfsel::{
    impute_select, select_complete, Dataset, FractionChoice, GibbsConfig, ModelPrior, Result, SelectionResult,
};

#[derive(Parser)]
#[command(name = "fbfsel", version, about = "Fractional Bayes factor variable selection with multiple imputation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select variables on a complete dataset
    Select(SelectArgs),
    /// Impute missing predictors, then select variables
    ImputeSelect {
        #[command(flatten)]
        common: SelectArgs,
        #[command(flatten)]
        gibbs: GibbsArgs,
    },
    /// Repeated MCAR injection study: oracle vs listwise deletion vs imputation
    Experiment(ExperimentArgs),
    /// Render boxplot SVGs from an experiment summary
    Plot {
        /// summary.json written by `experiment`
        #[arg(long)]
        summary: PathBuf,
        #[arg(long, default_value = "plots")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorArg {
    Uniform,
    ScottBerger,
}

impl From<PriorArg> for ModelPrior {
    fn from(p: PriorArg) -> Self {
        match p {
            PriorArg::Uniform => ModelPrior::Uniform,
            PriorArg::ScottBerger => ModelPrior::ScottBerger,
        }
    }
}

fn parse_fraction(s: &str) -> std::result::Result<FractionChoice, String> {
    if s == "minimal" {
        return Ok(FractionChoice::Minimal);
    }
    match s.parse::<f64>() {
        Ok(b) if b > 0.0 && b <= 1.0 => Ok(FractionChoice::Explicit(b)),
        _ => Err(format!("expected `minimal` or a number in (0, 1], got {s:?}")),
    }
}

#[derive(Args)]
struct ModelArgs {
    /// Prior over models
    #[arg(long, value_enum, default_value = "uniform")]
    model_prior: PriorArg,
    /// Likelihood fraction: `minimal` for (k+1)/n with k = p+1, or an explicit b in (0, 1]
    #[arg(long, default_value = "minimal", value_parser = parse_fraction)]
    fraction: FractionChoice,
}

#[derive(Args)]
struct DataArgs {
    /// Input CSV with a header row; empty cells and NA are missing
    #[arg(long)]
    data: PathBuf,
    /// Response column
    #[arg(long, default_value = "y")]
    response: String,
    /// Comma-separated predictor columns [default: every other column]
    #[arg(long, value_delimiter = ',')]
    predictors: Vec<String>,
}

#[derive(Args)]
struct SelectArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Number of top models to list
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Print the full result as JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GibbsArgs {
    /// Number of imputations
    #[arg(long, default_value_t = 20)]
    m: usize,
    /// Sweeps discarded before the first imputation
    #[arg(long, default_value_t = 200)]
    burn_in: usize,
    /// Sweeps between kept imputations
    #[arg(long, default_value_t = 50)]
    spacing: usize,
    #[arg(long, default_value_t = 20250101)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    gibbs: GibbsArgs,
    /// Comma-separated predictors that receive MCAR missingness
    #[arg(long, value_delimiter = ',', required = true)]
    miss_cols: Vec<String>,
    /// Comma-separated missingness proportions
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3")]
    rates: Vec<f64>,
    /// Repetitions per rate
    #[arg(long, default_value_t = 30)]
    reps: usize,
    /// Output directory for results.csv and summary.json
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Also write boxplot SVGs into the output directory
    #[arg(long)]
    plot: bool,
}

fn print_selection(d: &Dataset, r: &SelectionResult, top: usize, json: bool) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(r)?);
        return Ok(());
    }
    println!("model prior: {}", r.model_prior);
    println!("\n{:<16} {:>12}", "variable", "inclusion");
    for (name, p) in d.names().iter().zip(&r.inclusion) {
        println!("{name:<16} {p:>12.6}");
    }
    println!("\n{:<32} {:>12} {:>12}", "model", "log FBF", "post. prob");
    for (g, p) in r.ranked().into_iter().take(top) {
        let vars: Vec<&str> = g.included().into_iter().map(|j| d.names()[j].as_str()).collect();
        let label = if vars.is_empty() { "(intercept only)".to_string() } else { vars.join("+") };
        println!("{label:<32} {:>12.6} {p:>12.6}", r.log_fbf_of(g));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Select(a) => {
            let d = ingest_csv(&a.data.data, &a.data.response, &a.data.predictors)?;
            let r = select_complete(d.complete_x()?, d.y(), a.model.fraction, a.model.model_prior.into())?;
            print_selection(&d, &r, a.top, a.json)
        }
        Command::ImputeSelect { common: a, gibbs: g } => {
            let d = ingest_csv(&a.data.data, &a.data.response, &a.data.predictors)?;
            let cfg = GibbsConfig { burn_in: g.burn_in, spacing: g.spacing, m: g.m, seed: g.seed };
            let (r, imps) = impute_select(&d, &cfg, a.model.fraction, a.model.model_prior.into())?;
            if !a.json {
                println!("{} missing cells, {} imputations", d.missing_count(), imps.m());
            }
            print_selection(&d, &r, a.top, a.json)
        }
        Command::Experiment(a) => {
            let spec = ExperimentSpec {
                dataset: a.data.data,
                response: a.data.response,
                predictors: a.data.predictors,
                miss_cols: a.miss_cols,
                rates: a.rates,
                reps: a.reps,
                m: a.gibbs.m,
                burn_in: a.gibbs.burn_in,
                spacing: a.gibbs.spacing,
                seed: a.gibbs.seed,
                model_prior: a.model.model_prior.into(),
                fraction: a.model.fraction,
            };
            let exp = run_experiment(&spec)?;
            for r in exp.records.iter().filter(|r| r.error().is_some()) {
                eprintln!("rate {} rep {} {}: {}", r.rate, r.rep, r.method, r.error().unwrap_or_default());
            }
            let files = emit_results(&exp.records, &exp.variables, &a.out_dir)?;
            let ok = exp.records.iter().filter(|r| r.error().is_none()).count();
            eprintln!("{ok}/{} runs succeeded", exp.records.len());
            eprintln!("wrote {}", files.results_csv.display());
            eprintln!("wrote {}", files.summary.display());
            if let Some(f) = files.failures_csv {
                eprintln!("wrote {}", f.display());
            }
            if a.plot {
                let summary = read_summary(&files.summary)?;
                for f in emit_boxplot_svg(&summary, &a.out_dir)? {
                    eprintln!("wrote {}", f.display());
                }
            }
            Ok(())
        }
        Command::Plot { summary, out_dir } => {
            let s = read_summary(&summary)?;
            for f in emit_boxplot_svg(&s, &out_dir)? {
                eprintln!("wrote {}", f.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
